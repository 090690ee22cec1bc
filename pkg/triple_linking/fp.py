"""
Triple Linking — Linear Algebra over F_p

Row reduction, rank, determinants and linear solves for small prime
fields.  Vectors are tuples of residues in [0, p).
"""

from __future__ import annotations

from typing import Sequence

Vector = tuple[int, ...]


def reduce_vector(values: Sequence[int], p: int) -> Vector:
    return tuple(int(x) % p for x in values)


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[list[Vector], list[int]]:
    """
    Reduced row echelon form of the row span.

    Returns the nonzero rows (pivot entries 1, zeros above and below every
    pivot) and their pivot columns, which are strictly increasing.
    """
    a = [[int(x) % p for x in r] for r in rows]
    if not a:
        return [], []
    width = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(width):
        if r == len(a):
            break
        pivot_row = next((i for i in range(r, len(a)) if a[i][c]), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in a[:r]], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


def det(rows: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square matrix, as a residue mod p."""
    a = [[int(x) % p for x in r] for r in rows]
    n = len(a)
    result = 1
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if a[i][c]), None)
        if pivot_row is None:
            return 0
        if pivot_row != c:
            a[c], a[pivot_row] = a[pivot_row], a[c]
            result = -result
        result = (result * a[c][c]) % p
        inv = pow(a[c][c], -1, p)
        for i in range(c + 1, n):
            if a[i][c]:
                f = (a[i][c] * inv) % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return result % p


def det3(m: Sequence[Sequence[int]], p: int) -> int:
    """Closed-form 3×3 determinant mod p."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p


def dot(u: Sequence[int], v: Sequence[int], p: int) -> int:
    return sum(x * y for x, y in zip(u, v)) % p


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> list[Vector]:
    cols = list(zip(*b))
    return [tuple(dot(row, col, p) for col in cols) for row in a]


def solve(a: Sequence[Sequence[int]], b: Sequence[int], p: int) -> Vector | None:
    """One solution x of A·x = b over F_p (free variables set to 0), or None."""
    width = len(a[0]) if a else 0
    augmented = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = rref(augmented, p)
    if width in pivots:
        return None
    x = [0] * width
    for row, c in zip(reduced, pivots):
        x[c] = row[width]
    return tuple(x)
