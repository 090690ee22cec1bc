"""
Triple Linking — Subspaces and Lagrangians over F_p

Subspaces are stored by their reduced row echelon basis, which is unique,
so equality of subspaces is equality of bases.  Enumeration walks the RREF
pivot shapes: for pivot columns c₁ < … < c_k every free position (a
non-pivot column right of a row's pivot) takes each value in F_p.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
import sympy

from triple_linking import fp
from triple_linking.config import SHAPE_CHUNK
from triple_linking.errors import DegenerateFormError, DimensionMismatchError, PreconditionError
from triple_linking.linking import LinkingForm, is_nondegenerate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subspace:
    """A k-dim subspace of F_p^n given by its canonical RREF basis (k×n)."""

    p: int
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim > self.ambient_dim:
            raise DimensionMismatchError(f"{self.dim} basis rows in F_{self.p}^{self.ambient_dim}")
        last = -1
        for r, row in enumerate(self.basis):
            if len(row) != self.ambient_dim or any(not 0 <= x < self.p for x in row):
                raise ValueError(f"row {row} is not a reduced vector of F_{self.p}^{self.ambient_dim}")
            lead = next((c for c, x in enumerate(row) if x), None)
            if lead is None or lead <= last or row[lead] != 1:
                raise ValueError(f"basis {self.basis} is not in reduced row echelon form")
            if any(other[lead] for s, other in enumerate(self.basis) if s != r):
                raise ValueError(f"basis {self.basis} is not in reduced row echelon form")
            last = lead

    @classmethod
    def span(cls, p: int, rows: Sequence[Sequence[int]], ambient_dim: int | None = None) -> Subspace:
        """Canonical subspace spanned by arbitrary rows (entries reduced mod p)."""
        if ambient_dim is None:
            if not rows:
                raise DimensionMismatchError("ambient dimension needed for an empty span")
            ambient_dim = len(rows[0])
        if any(len(r) != ambient_dim for r in rows):
            raise DimensionMismatchError(f"rows must have length {ambient_dim}")
        reduced, _ = fp.rref(rows, p)
        return cls(p, ambient_dim, tuple(reduced))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(c for c, x in enumerate(row) if x) for row in self.basis)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All p^k vectors of the subspace."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield tuple(
                sum(c * row[j] for c, row in zip(coeffs, self.basis)) % self.p
                for j in range(self.ambient_dim)
            )

    def contains(self, vector: Sequence[int]) -> bool:
        return fp.rank(list(self.basis) + [list(vector)], self.p) == self.dim


@dataclass(frozen=True)
class DualPair:
    """
    Two transverse subspaces of complementary dimension, smaller basis
    first.  Pairs built by enumerate_dual_pairs are both Lagrangian.
    """

    first: Subspace
    second: Subspace

    def __post_init__(self):
        if self.first.basis > self.second.basis:
            raise ValueError("dual pair must list the lexicographically smaller basis first")
        if self.first.dim + self.second.dim != self.first.ambient_dim:
            raise ValueError("dual pair dimensions must add up to the ambient dimension")
        if subspace_intersection_dim(self.first, self.second):
            raise ValueError("dual pair members must intersect trivially")

    @classmethod
    def of(cls, a: Subspace, b: Subspace) -> DualPair:
        return cls(a, b) if a.basis <= b.basis else cls(b, a)


# ─── Counting and enumeration ─────────────────────────────────

def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dim subspaces of F_p^n."""
    if not 0 <= k <= n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def _free_positions(pivots: Sequence[int], n: int) -> list[tuple[int, int]]:
    pivot_set = set(pivots)
    return [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivot_set]


def shape_class_size(p: int, n: int, pivots: Sequence[int]) -> int:
    return p ** len(_free_positions(pivots, n))


def _shape_class_chunks(p: int, n: int, pivots: Sequence[int], chunk: int = SHAPE_CHUNK) -> Iterator[np.ndarray]:
    """
    RREF bases with the given pivot columns as (N, k, n) arrays of at most
    `chunk` bases each, in lexicographic order of the free entries.
    """
    k = len(pivots)
    free = _free_positions(pivots, n)
    configs = itertools.product(range(p), repeat=len(free))
    while True:
        block = list(itertools.islice(configs, chunk))
        if not block:
            return
        values = np.array(block, dtype=np.int64).reshape(len(block), len(free))
        bases = np.zeros((len(block), k, n), dtype=np.int64)
        for i, c in enumerate(pivots):
            bases[:, i, c] = 1
        for f, (i, j) in enumerate(free):
            bases[:, i, j] = values[:, f]
        yield bases


def _check_enumeration_args(p: int, n: int, k: int):
    if not sympy.isprime(p):
        raise PreconditionError(f"{p} is not prime")
    if not 0 <= k <= n:
        raise PreconditionError(f"need 0 <= k <= n, got k={k}, n={n}")


def _as_subspace(p: int, n: int, basis: np.ndarray) -> Subspace:
    return Subspace(p, n, tuple(tuple(int(x) for x in row) for row in basis))


def enumerate_subspaces(p: int, n: int, k: int) -> Iterator[Subspace]:
    """Each k-dim subspace of F_p^n exactly once, shape by shape."""
    _check_enumeration_args(p, n, k)
    for pivots in itertools.combinations(range(n), k):
        for bases in _shape_class_chunks(p, n, pivots):
            for basis in bases:
                yield _as_subspace(p, n, basis)


def count_subspaces_by_shape(p: int, n: int, k: int) -> int:
    """Σ over RREF shapes of p^(free positions); equals gaussian_binomial(n, k, p)."""
    _check_enumeration_args(p, n, k)
    return sum(shape_class_size(p, n, pivots) for pivots in itertools.combinations(range(n), k))


# ─── Lagrangians ──────────────────────────────────────────────

def restricted_gram(form: LinkingForm, subspace: Subspace) -> list[tuple[int, ...]]:
    """p·λ(b_i, b_j) mod p on the basis rows of the subspace."""
    p, g = form.fp_gram()
    if subspace.p != p or subspace.ambient_dim != form.group.rank:
        raise DimensionMismatchError("subspace does not live in the form's group")
    rows = [list(r) for r in subspace.basis]
    return fp.matmul(fp.matmul(rows, g, p), [list(c) for c in zip(*rows)], p) if rows else []


def is_isotropic(form: LinkingForm, subspace: Subspace) -> bool:
    return all(x == 0 for row in restricted_gram(form, subspace) for x in row)


def _check_lagrangian_args(form: LinkingForm) -> tuple[int, list[list[int]]]:
    p, g = form.fp_gram()
    rank = form.group.rank
    if rank % 2:
        raise PreconditionError(f"group (Z/{p})^{rank} has odd rank")
    if not is_nondegenerate(form):
        raise DegenerateFormError("Lagrangians are only enumerated for nondegenerate forms")
    return p, g


def iter_lagrangians(form: LinkingForm) -> Iterator[Subspace]:
    """
    Stream the Lagrangians shape class by shape class, one chunk of
    candidate bases in memory at a time.  Order is by pivot shape, then
    by free entries; enumerate_lagrangians gives the sorted list.
    """
    p, g = _check_lagrangian_args(form)
    rank = form.group.rank
    gram = np.array(g, dtype=np.int64)
    for pivots in itertools.combinations(range(rank), rank // 2):
        for bases in _shape_class_chunks(p, rank, pivots):
            restricted = np.einsum("aik,kl,ajl->aij", bases, gram, bases) % p
            keep = np.all(restricted == 0, axis=(1, 2))
            for basis in bases[keep]:
                yield _as_subspace(p, rank, basis)


def enumerate_lagrangians(form: LinkingForm) -> list[Subspace]:
    """
    All half-rank subspaces on which the form vanishes, in canonical
    (basis-lexicographic) order.
    """
    p, _ = form.fp_gram()
    rank = form.group.rank
    found = sorted(iter_lagrangians(form), key=lambda s: s.basis)
    logger.info("Filtered %d candidate subspaces of F_%d^%d: %d Lagrangians",
                gaussian_binomial(rank, rank // 2, p), p, rank, len(found))
    return found


def subspace_intersection_dim(a: Subspace, b: Subspace) -> int:
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"subspaces live in F_{a.p}^{a.ambient_dim} and F_{b.p}^{b.ambient_dim}")
    return a.dim + b.dim - fp.rank(list(a.basis) + list(b.basis), a.p)


def dual_pair_indices(subspaces: Sequence[Subspace]) -> list[tuple[int, int]]:
    """Index pairs i < j of transverse complementary members, sorted."""
    pairs = []
    for i, j in itertools.combinations(range(len(subspaces)), 2):
        a, b = subspaces[i], subspaces[j]
        if a.dim + b.dim == a.ambient_dim and subspace_intersection_dim(a, b) == 0:
            pairs.append((i, j))
    return pairs


def enumerate_dual_pairs(lagrangians: Sequence[Subspace]) -> list[DualPair]:
    pairs = [DualPair.of(lagrangians[i], lagrangians[j]) for i, j in dual_pair_indices(lagrangians)]
    pairs.sort(key=lambda d: (d.first.basis, d.second.basis))
    logger.info("%d Lagrangians form %d dual pairs", len(lagrangians), len(pairs))
    return pairs


def left_block_det(subspace: Subspace) -> int:
    """Determinant mod p of the leftmost k×k block of the canonical basis."""
    k = subspace.dim
    return fp.det([row[:k] for row in subspace.basis], subspace.p)
