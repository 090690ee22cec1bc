"""
Triple Linking — The Triple Form λ₃

Two evaluators.  From rational-grope data: (1/t)·Σ (C_i·y)(D_i·z) −
(C_i·z)(D_i·y) mod 1.  For the surgery family on six ±3-framed components:
the alternating 3-form whose coefficients v ∈ (Z/3)^20 weight the 3×3
minors of a Lagrangian basis, one minor per column triple.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from triple_linking import fp
from triple_linking.arith import QmodZ
from triple_linking.config import DET_VECTOR_LENGTH, FAMILY_DIM, FAMILY_PRIME, FAMILY_RANK
from triple_linking.errors import DimensionMismatchError, PreconditionError, VectorParseError
from triple_linking.isotropic import Subspace

logger = logging.getLogger(__name__)


# ─── Grope evaluator ──────────────────────────────────────────

@dataclass(frozen=True)
class GropeData:
    """
    Intersection numbers of a rational grope bounded by t·x.

    For each symplectic pair (γ_i, δ_i) of the body, with second stage
    surfaces ∂C_i = t·γ_i and ∂D_i = t·δ_i:
    cy = C_i·y, dz = D_i·z, cz = C_i·z, dy = D_i·y.
    """

    t: int
    g: int
    cy: tuple[int, ...] = ()
    dz: tuple[int, ...] = ()
    cz: tuple[int, ...] = ()
    dy: tuple[int, ...] = ()

    def __post_init__(self):
        if self.t < 1:
            raise PreconditionError(f"torsion exponent t must be >= 1, got {self.t}")
        if self.g < 0:
            raise PreconditionError(f"genus must be >= 0, got {self.g}")
        for name in ("cy", "dz", "cz", "dy"):
            if len(getattr(self, name)) != self.g:
                raise DimensionMismatchError(
                    f"{name} has {len(getattr(self, name))} entries, genus is {self.g}")

    def swapped(self) -> GropeData:
        """Exchange the roles of y and z."""
        return GropeData(self.t, self.g, cy=self.cz, dz=self.dy, cz=self.cy, dy=self.dz)


def triple_linking_representative(data: GropeData) -> Fraction:
    """The rational value before reduction mod 1."""
    total = sum(a * b - c * d for a, b, c, d in zip(data.cy, data.dz, data.cz, data.dy))
    return Fraction(total, data.t)


def triple_linking_from_grope(data: GropeData) -> QmodZ:
    rep = triple_linking_representative(data)
    logger.debug("λ₃ rational representative %s (t=%d, g=%d)", rep, data.t, data.g)
    return QmodZ.of(rep)


# ─── Determinant vectors ──────────────────────────────────────

def column_triples() -> list[tuple[int, int, int]]:
    """The 20 three-element subsets of {1,…,6} in lexicographic order."""
    return list(itertools.combinations(range(1, FAMILY_RANK + 1), FAMILY_DIM))


_TRIPLES0 = [tuple(c - 1 for c in triple) for triple in column_triples()]


def _trits(values: Iterable[int], what: str) -> tuple[int, ...]:
    entries = tuple(int(x) % FAMILY_PRIME for x in values)
    if len(entries) != DET_VECTOR_LENGTH:
        raise DimensionMismatchError(f"{what} needs {DET_VECTOR_LENGTH} entries, got {len(entries)}")
    return entries


def signed(entries: Sequence[int]) -> list[int]:
    """Residues mod 3 written in {-1, 0, 1}."""
    return [x - FAMILY_PRIME if x == FAMILY_PRIME - 1 else x for x in entries]


@dataclass(frozen=True)
class DeterminantVector:
    """The 20 ordered 3×3 minors (mod 3) of a Lagrangian basis matrix."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _trits(self.entries, "determinant vector"))

    def pair(self, v: ObstructionVector) -> int:
        return fp.dot(self.entries, v.entries, FAMILY_PRIME)


@dataclass(frozen=True)
class ObstructionVector:
    """Coefficients v ∈ (Z/3)^20, one per column triple."""

    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", _trits(self.entries, "obstruction vector"))

    @classmethod
    def parse(cls, text: str) -> ObstructionVector:
        """Read 20 comma-separated integers in {-1, 0, 1} or {0, 1, 2}."""
        tokens = [tok.strip() for tok in text.strip().strip("[]").split(",")]
        try:
            values = [int(tok) for tok in tokens]
        except ValueError:
            raise VectorParseError(f"obstruction vector must be comma-separated integers: {text!r}") from None
        if len(values) != DET_VECTOR_LENGTH:
            raise VectorParseError(f"obstruction vector needs {DET_VECTOR_LENGTH} entries, got {len(values)}")
        if any(not -1 <= x <= 2 for x in values):
            raise VectorParseError(f"obstruction vector entries must lie in -1..2: {text!r}")
        return cls(tuple(values))

    @classmethod
    def unit(cls, index: int) -> ObstructionVector:
        """e_index, 1-based like the column triples."""
        return cls(tuple(int(i == index - 1) for i in range(DET_VECTOR_LENGTH)))

    @classmethod
    def zero(cls) -> ObstructionVector:
        return cls((0,) * DET_VECTOR_LENGTH)

    def scaled(self, k: int) -> ObstructionVector:
        return ObstructionVector(tuple(k * x for x in self.entries))

    def signed(self) -> list[int]:
        return signed(self.entries)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.signed())


def determinant_vector_of_rows(rows: Sequence[Sequence[int]]) -> DeterminantVector:
    """Minors of an arbitrary 3×6 basis matrix (no canonicalisation)."""
    if len(rows) != FAMILY_DIM or any(len(r) != FAMILY_RANK for r in rows):
        raise DimensionMismatchError(f"need a {FAMILY_DIM}x{FAMILY_RANK} basis matrix")
    return DeterminantVector(tuple(
        fp.det3([[row[c] for c in triple] for row in rows], FAMILY_PRIME)
        for triple in _TRIPLES0
    ))


def _check_family_subspace(subspace: Subspace):
    if (subspace.p, subspace.ambient_dim, subspace.dim) != (FAMILY_PRIME, FAMILY_RANK, FAMILY_DIM):
        raise DimensionMismatchError(
            f"need a {FAMILY_DIM}-dim subspace of F_{FAMILY_PRIME}^{FAMILY_RANK}, got "
            f"{subspace.dim}-dim in F_{subspace.p}^{subspace.ambient_dim}")


def determinant_vector(subspace: Subspace) -> DeterminantVector:
    _check_family_subspace(subspace)
    return determinant_vector_of_rows(subspace.basis)


def triple_form_on_rows(v: ObstructionVector, rows: Sequence[Sequence[int]]) -> QmodZ:
    """(1/3)·⟨minors(rows), v⟩ for a given (not necessarily canonical) basis."""
    return QmodZ.of(Fraction(determinant_vector_of_rows(rows).pair(v), FAMILY_PRIME))


def triple_form_value(v: ObstructionVector, subspace: Subspace) -> QmodZ:
    _check_family_subspace(subspace)
    return triple_form_on_rows(v, subspace.basis)


def vanishes_on_lagrangian(v: ObstructionVector, subspace: Subspace) -> bool:
    """
    True iff the 3-form is identically zero on the subspace.  Any two bases
    differ by P with minors scaling by det(P) ≠ 0, so one basis decides.
    """
    return triple_form_value(v, subspace).is_zero
