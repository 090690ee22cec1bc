"""
Triple Linking — Exact Arithmetic

Rationals modulo 1 (the value group of every linking form) and integer
matrices with their Smith normal form.  Everything is exact: Python ints
never overflow and residues are reduced after every operation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


# ─── Q/Z ──────────────────────────────────────────────────────

@dataclass(frozen=True)
class QmodZ:
    """A reduced residue numerator/denominator in [0, 1)."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError(f"denominator must be positive, got {self.denominator}")
        if not 0 <= self.numerator < self.denominator:
            raise ValueError(f"{self.numerator}/{self.denominator} is not reduced mod 1")
        if gcd(self.numerator, self.denominator) != 1:
            # 0/1 is the only representative of zero
            raise ValueError(f"{self.numerator}/{self.denominator} is not in lowest terms")

    @classmethod
    def of(cls, value: Fraction | int) -> QmodZ:
        """Reduce any rational (or integer) modulo 1."""
        value = Fraction(value)
        num = value.numerator % value.denominator
        if num == 0:
            return cls(0, 1)
        return cls(num, value.denominator)

    @classmethod
    def parse(cls, text: str) -> QmodZ:
        """Read "n/d" or an integer, reducing mod 1."""
        return cls.of(Fraction(text.strip()))

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __add__(self, other: QmodZ) -> QmodZ:
        return QmodZ.of(self.as_fraction() + other.as_fraction())

    def __neg__(self) -> QmodZ:
        return QmodZ.of(-self.as_fraction())

    def __sub__(self, other: QmodZ) -> QmodZ:
        return self + (-other)

    def __rmul__(self, k: int) -> QmodZ:
        return QmodZ.of(k * self.as_fraction())

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


ZERO = QmodZ(0, 1)


def qmodz_add(a: QmodZ, b: QmodZ) -> QmodZ:
    return a + b


def qmodz_int_scale(k: int, a: QmodZ) -> QmodZ:
    return k * a


# ─── Integer matrices ─────────────────────────────────────────

@dataclass(frozen=True)
class IntMatrix:
    """A rectangular matrix of arbitrary-precision integers."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("matrix rows have different lengths")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> IntMatrix:
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        cols = list(zip(*other.rows))
        return IntMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.rows
        ))

    def transpose(self) -> IntMatrix:
        return IntMatrix(tuple(zip(*self.rows)))

    def is_symmetric(self) -> bool:
        return self.is_square and self.rows == self.transpose().rows

    def diagonal(self) -> list[int]:
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = len(a)
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


# ─── Smith normal form ────────────────────────────────────────

def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _add_row(m: list[list[int]], target: int, source: int, k: int):
    # m[target, :] += k * m[source, :]
    src = m[source]
    row = m[target]
    for c in range(len(row)):
        row[c] += k * src[c]


def _add_column(m: list[list[int]], target: int, source: int, k: int):
    # m[:, target] += k * m[:, source]
    for row in m:
        row[target] += k * row[source]


def _swap_columns(m: list[list[int]], i: int, j: int):
    if i != j:
        for row in m:
            row[i], row[j] = row[j], row[i]


def _min_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    """Position of the smallest nonzero |entry| in a[t:, t:], first in row-major order."""
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            x = a[i][j]
            if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def _clear_cross(a, u, v, t) -> bool:
    """Reduce column t below and row t right of the pivot; True when both are zero."""
    p = a[t][t]
    for i in range(t + 1, len(a)):
        q = a[i][t] // p
        if q:
            _add_row(a, i, t, -q)
            _add_row(u, i, t, -q)
    for j in range(t + 1, len(a[0])):
        q = a[t][j] // p
        if q:
            _add_column(a, j, t, -q)
            _add_column(v, j, t, -q)
    return (all(a[i][t] == 0 for i in range(t + 1, len(a)))
            and all(a[t][j] == 0 for j in range(t + 1, len(a[0]))))


def _non_multiple_row(a, t) -> int | None:
    p = a[t][t]
    for i in range(t + 1, len(a)):
        for j in range(t + 1, len(a[0])):
            if a[i][j] % p:
                return i
    return None


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Return (U, D, V) with U·M·V = D, U and V unimodular, D diagonal with
    nonnegative entries d₁ | d₂ | … and zero entries last.

    The pivot is always the smallest nonzero |entry| of the remaining
    submatrix, so U and V are deterministic; only D is canonical.
    """
    rows, cols = m.nrows, m.ncols
    a = m.to_lists()
    u, v = _eye(rows), _eye(cols)

    for t in range(min(rows, cols)):
        while True:
            pivot = _min_pivot(a, t)
            if pivot is None:
                break
            i, j = pivot
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            _swap_columns(a, t, j)
            _swap_columns(v, t, j)
            if not _clear_cross(a, u, v, t):
                continue
            bad = _non_multiple_row(a, t)
            if bad is None:
                break
            # pull the offending row up; the next pass leaves a smaller remainder
            _add_row(a, t, bad, 1)
            _add_row(u, t, bad, 1)
        if pivot is None:
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    logger.debug("SNF diagonal of %dx%d matrix: %s", rows, cols,
                 [a[k][k] for k in range(min(rows, cols))])
    return IntMatrix.of(u), IntMatrix.of(a), IntMatrix.of(v)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero SNF diagonal entries, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    return [x for x in d.diagonal() if x]
