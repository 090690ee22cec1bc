"""
Triple Linking — Torsion Groups and Linking Forms

Finite abelian groups in invariant-factor form, Q/Z-valued linking forms on
them, construction from a surgery framing matrix, nondegeneracy, and the
Hantzsche square-order / splitting test.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, prod
from pathlib import Path
from typing import TYPE_CHECKING, Iterator, Sequence

import sympy

from triple_linking.arith import IntMatrix, QmodZ, smith_normal_form
from triple_linking.config import (
    BRUTE_FORCE_ORDER_LIMIT,
    CONVENTIONS,
    DEFAULT_CONVENTION,
    HANTZSCHE_CANDIDATE_LIMIT,
)
from triple_linking.errors import (
    DegenerateFormError,
    DimensionMismatchError,
    FramingParseError,
    NotSymmetricError,
    PreconditionError,
    SingularFramingError,
)

if TYPE_CHECKING:
    from triple_linking.isotropic import DualPair

logger = logging.getLogger(__name__)


# ─── Groups ───────────────────────────────────────────────────

@dataclass(frozen=True)
class GroupElement:
    coordinates: tuple[int, ...]


@dataclass(frozen=True)
class TorsionGroup:
    """⊕ Z/d_i with d₁ | d₂ | … | d_k, every d_i ≥ 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {self.invariant_factors}")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.invariant_factors} break the divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def elementary_prime(self) -> int | None:
        """p when the group is (Z/p)^k for a prime p, else None."""
        factors = set(self.invariant_factors)
        if len(factors) != 1:
            return None
        (p,) = factors
        return p if sympy.isprime(p) else None

    def element(self, coordinates: Sequence[int]) -> GroupElement:
        """Element with the given coordinates, reduced into [0, d_i)."""
        if len(coordinates) != self.rank:
            raise DimensionMismatchError(
                f"element has {len(coordinates)} coordinates, group has rank {self.rank}")
        return GroupElement(tuple(int(c) % d for c, d in zip(coordinates, self.invariant_factors)))

    def generator(self, i: int) -> GroupElement:
        return GroupElement(tuple(int(i == j) for j in range(self.rank)))

    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.rank)

    def elements(self) -> Iterator[GroupElement]:
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(coords)

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return self.element([x + y for x, y in zip(a.coordinates, b.coordinates)])

    def contains(self, a: GroupElement) -> bool:
        return (len(a.coordinates) == self.rank
                and all(0 <= c < d for c, d in zip(a.coordinates, self.invariant_factors)))


# ─── Linking forms ────────────────────────────────────────────

@dataclass(frozen=True)
class LinkingForm:
    """A symmetric Q/Z-valued gram matrix on the generators of a group."""

    group: TorsionGroup
    gram: tuple[tuple[QmodZ, ...], ...]

    def __post_init__(self):
        k = self.group.rank
        if len(self.gram) != k or any(len(row) != k for row in self.gram):
            raise DimensionMismatchError(f"gram matrix must be {k}x{k}")
        for i in range(k):
            for j in range(k):
                if self.gram[i][j] != self.gram[j][i]:
                    raise NotSymmetricError(f"gram[{i}][{j}] != gram[{j}][{i}]")
                if not (self.group.invariant_factors[i] * self.gram[i][j]).is_zero:
                    raise ValueError(
                        f"gram[{i}][{j}] = {self.gram[i][j]} is not killed by d_{i} = "
                        f"{self.group.invariant_factors[i]}")

    @classmethod
    def of(cls, invariant_factors: Sequence[int], gram: Sequence[Sequence[Fraction | int | str]]) -> LinkingForm:
        """Build from rationals (or "n/d" strings), reducing every entry mod 1."""
        def _q(x):
            return QmodZ.parse(x) if isinstance(x, str) else QmodZ.of(x)
        return cls(TorsionGroup(tuple(invariant_factors)),
                   tuple(tuple(_q(x) for x in row) for row in gram))

    @classmethod
    def diagonal(cls, d: int, entries: Sequence[Fraction | str]) -> LinkingForm:
        """Diagonal form on (Z/d)^k."""
        k = len(entries)
        return cls.of([d] * k, [[entries[i] if i == j else 0 for j in range(k)] for i in range(k)])

    def fp_gram(self) -> tuple[int, list[list[int]]]:
        """
        (p, G) with G the integer matrix p·gram mod p, for forms on (Z/p)^k.
        """
        p = self.group.elementary_prime()
        if p is None:
            raise PreconditionError(
                f"group with invariant factors {list(self.group.invariant_factors)} "
                "is not elementary abelian")
        return p, [[(p * q.as_fraction()).numerator % p for q in row] for row in self.gram]

    def permuted(self, order: Sequence[int]) -> LinkingForm:
        """The same form with generators relabelled: new generator i is old order[i]."""
        if sorted(order) != list(range(self.group.rank)):
            raise DimensionMismatchError(f"{list(order)} is not a permutation of the generators")
        factors = [self.group.invariant_factors[i] for i in order]
        if factors != list(self.group.invariant_factors):
            raise PreconditionError("relabelling must preserve the invariant factors")
        return LinkingForm(self.group, tuple(tuple(self.gram[i][j] for j in order) for i in order))


def _check_member(form: LinkingForm, a: GroupElement):
    if not form.group.contains(a):
        raise DimensionMismatchError(
            f"element {list(a.coordinates)} does not belong to group "
            f"{list(form.group.invariant_factors)}")


def eval_linking(form: LinkingForm, a: GroupElement, b: GroupElement) -> QmodZ:
    _check_member(form, a)
    _check_member(form, b)
    total = Fraction(0)
    for i, x in enumerate(a.coordinates):
        if not x:
            continue
        for j, y in enumerate(b.coordinates):
            if y:
                total += x * y * form.gram[i][j].as_fraction()
    return QmodZ.of(total)


# ─── Framing matrices ─────────────────────────────────────────

def parse_framing(text: str) -> IntMatrix:
    """
    Read a framing matrix: first line n, then n lines of n integers.
    Blank lines and lines starting with '#' are skipped.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FramingParseError("empty framing file")
    try:
        n = int(lines[0])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise FramingParseError(f"non-integer entry: {exc}") from None
    if n < 1:
        raise FramingParseError(f"matrix size must be positive, got {n}")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise FramingParseError(f"expected {n} rows of {n} integers")
    matrix = IntMatrix.of(rows)
    if not matrix.is_symmetric():
        raise NotSymmetricError("framing matrix is not symmetric")
    return matrix


def load_framing(path: str | Path) -> IntMatrix:
    matrix = parse_framing(Path(path).read_text())
    logger.info("Loaded %dx%d framing matrix from %s", matrix.nrows, matrix.ncols, path)
    return matrix


def _to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def linking_form_from_framing(
    framing: IntMatrix,
    sign_convention: str = DEFAULT_CONVENTION,
) -> tuple[TorsionGroup, LinkingForm]:
    """
    H₁ = coker(Λ) and its linking form, on the Smith normal form generators.

    With U·Λ·V = D, a class [x] has coordinates (U·x)_i mod d_i, so the
    generators are the columns of U⁻¹ whose d_i exceeds 1.  The gram
    entry is ±g_iᵀ·Λ⁻¹·g_j mod 1: plus in the `paper` convention, minus
    in the `lemma` convention.
    """
    if sign_convention not in CONVENTIONS:
        raise PreconditionError(f"unknown sign convention {sign_convention!r}")
    if not framing.is_symmetric():
        raise NotSymmetricError("framing matrix must be square and symmetric")
    if framing.det() == 0:
        raise SingularFramingError("framing matrix is singular (det = 0)")

    u, d, _ = smith_normal_form(framing)
    factors = d.diagonal()
    torsion = [i for i, x in enumerate(factors) if x > 1]
    group = TorsionGroup(tuple(factors[i] for i in torsion))
    if not torsion:
        logger.info("Framing matrix is unimodular: trivial group")
        return group, LinkingForm(group, ())

    u_inv = sympy.Matrix(u.to_lists()).inv()
    lam_inv = sympy.Matrix(framing.to_lists()).inv()
    gens = [u_inv[:, i] for i in torsion]
    sign = 1 if sign_convention == "paper" else -1
    gram = tuple(
        tuple(QmodZ.of(sign * _to_fraction((gi.T * lam_inv * gj)[0, 0])) for gj in gens)
        for gi in gens
    )
    logger.info("Framing %dx%d -> invariant factors %s (%s convention)",
                framing.nrows, framing.ncols, list(group.invariant_factors), sign_convention)
    return group, LinkingForm(group, gram)


# ─── Geometric evaluators ─────────────────────────────────────

def linking_from_surface(t: int, sigma_dot_y: int) -> QmodZ:
    """λ([x],[y]) = (1/t)·(Σ·y) for a surface Σ with ∂Σ = t·x."""
    if t == 0:
        raise PreconditionError("t must be nonzero")
    return QmodZ.of(Fraction(sigma_dot_y, t))


def linking_from_intersection(t: int, x_dot_y: int, sign_convention: str = DEFAULT_CONVENTION) -> QmodZ:
    """
    λ([x],[y]) from the intersection number [X]·[Y] of the closed surfaces
    X = Σ_x − t·S_x, Y = Σ_y − t·S_y in a bounding 4-manifold:
    −[X]·[Y]/t² in the `lemma` convention, +[X]·[Y]/t² in `paper`.
    """
    if t == 0:
        raise PreconditionError("t must be nonzero")
    if sign_convention not in CONVENTIONS:
        raise PreconditionError(f"unknown sign convention {sign_convention!r}")
    sign = -1 if sign_convention == "lemma" else 1
    return QmodZ.of(Fraction(sign * x_dot_y, t * t))


# ─── Nondegeneracy ────────────────────────────────────────────

def _nondegenerate_by_brute_force(form: LinkingForm) -> bool:
    gens = [form.group.generator(i) for i in range(form.group.rank)]
    for g in form.group.elements():
        if any(g.coordinates) and all(eval_linking(form, g, e).is_zero for e in gens):
            return False
    return True


def nondegenerate_by_matrix(form: LinkingForm) -> bool:
    """
    Exact criterion: with B = t·gram over Z/t and SNF diagonal e_i of B,
    the adjoint map has image of size ∏ t/gcd(e_i, t); the form is
    nondegenerate iff that equals |G|.
    """
    k = form.group.rank
    if k == 0:
        return True
    t = form.group.exponent
    b = IntMatrix.of([[(t * q.as_fraction()).numerator % t for q in row] for row in form.gram])
    _, e, _ = smith_normal_form(b)
    image = prod(t // gcd(x, t) for x in e.diagonal())
    return image == form.group.order


def is_nondegenerate(form: LinkingForm) -> bool:
    if form.group.order <= BRUTE_FORCE_ORDER_LIMIT:
        return _nondegenerate_by_brute_force(form)
    return nondegenerate_by_matrix(form)


# ─── Hantzsche ────────────────────────────────────────────────

@dataclass(frozen=True)
class HantzscheResult:
    """
    verdict is one of
      no_square_order     |G| is not a square: no embedding
      splitting           a dual pair of Lagrangians was found
      no_splitting_found  exhaustive search found no dual pair
      square_order_only   |G| is a square; the group is outside the search range
    """

    verdict: str
    order: int
    splitting: DualPair | None = None


def check_hantzsche(form: LinkingForm) -> HantzscheResult:
    from triple_linking.isotropic import (
        DualPair,
        Subspace,
        gaussian_binomial,
        iter_lagrangians,
        subspace_intersection_dim,
    )

    if not is_nondegenerate(form):
        raise DegenerateFormError("Hantzsche test needs a nondegenerate linking form")

    order = form.group.order
    if isqrt(order) ** 2 != order:
        return HantzscheResult("no_square_order", order)
    if order == 1:
        # every prime field sees the trivial group as F_p^0; 2 is used
        zero = Subspace(2, 0, ())
        return HantzscheResult("splitting", order, DualPair(zero, zero))

    p = form.group.elementary_prime()
    rank = form.group.rank
    if p is None or gaussian_binomial(rank, rank // 2, p) > HANTZSCHE_CANDIDATE_LIMIT:
        logger.info("Group %s outside splitting search; square-order test only",
                    list(form.group.invariant_factors))
        return HantzscheResult("square_order_only", order)

    # first transverse pair in stream order ends the search
    seen: list[Subspace] = []
    for lag in iter_lagrangians(form):
        for other in seen:
            if subspace_intersection_dim(lag, other) == 0:
                return HantzscheResult("splitting", order, DualPair.of(other, lag))
        seen.append(lag)
    return HantzscheResult("no_splitting_found", order)
