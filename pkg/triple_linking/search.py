"""
Triple Linking — Obstruction Search over the Surgery Family

A vector v ∈ (Z/3)^20 is obstructed when every dual pair of Lagrangians
has a member on which the 3-form ⟨minors, v⟩ is nonzero.  This module
builds the Lagrangian / dual-pair census once, decides single vectors,
scans families of vectors, and checks the universal-vanishing property
(every v vanishes on some Lagrangian) two independent ways.

Det vectors are stored as two bit planes, bit i of `lo` set when entry i
is 1 and of `hi` when it is 2, so a mod-3 dot product is four ANDs and
two popcounts.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable, Iterator, Sequence

import numpy as np

from triple_linking import fp
from triple_linking.config import (
    DEFAULT_SEED,
    DEFAULT_THREADS,
    DEFAULT_VERIFY_MODE,
    DET_VECTOR_LENGTH,
    EXHAUSTIVE_CHUNK,
    FAMILY_PRIME,
    FAMILY_RANK,
    VERIFY_MODES,
)
from triple_linking.errors import PreconditionError
from triple_linking.isotropic import Subspace, dual_pair_indices, enumerate_lagrangians
from triple_linking.linking import LinkingForm
from triple_linking.tripleform import DeterminantVector, ObstructionVector, determinant_vector

logger = logging.getLogger(__name__)

Planes = tuple[int, int]

VECTOR_SPACE_SIZE = FAMILY_PRIME ** DET_VECTOR_LENGTH


# ─── Bit-plane arithmetic ─────────────────────────────────────

def pack_trits(entries: Iterable[int]) -> Planes:
    lo = hi = 0
    for i, x in enumerate(entries):
        x %= 3
        if x == 1:
            lo |= 1 << i
        elif x == 2:
            hi |= 1 << i
    return lo, hi


def packed_dot(a: Planes, b: Planes) -> int:
    """⟨a, b⟩ mod 3 on packed planes; equals the naive dot product."""
    a1, a2 = a
    b1, b2 = b
    ones = ((a1 & b1) | (a2 & b2)).bit_count()
    twos = ((a1 & b2) | (a2 & b1)).bit_count()
    return (ones + 2 * twos) % 3


def index_to_trits(index: int, width: int = DET_VECTOR_LENGTH) -> tuple[int, ...]:
    """Base-3 digits of index, coordinate 0 least significant."""
    digits = []
    for _ in range(width):
        index, r = divmod(index, 3)
        digits.append(r)
    return tuple(digits)


def trits_to_index(entries: Sequence[int]) -> int:
    return sum((x % 3) * 3 ** i for i, x in enumerate(entries))


# ─── Context ──────────────────────────────────────────────────

@dataclass(frozen=True)
class SearchContext:
    """
    The Lagrangians of one form, their det vectors (index-aligned) and the
    sorted dual pairs as index pairs i < j.  A synthetic context carries
    det vectors only.
    """

    lagrangians: tuple[Subspace, ...]
    det_vectors: tuple[DeterminantVector, ...]
    dual_pairs: tuple[tuple[int, int], ...]
    planes: tuple[Planes, ...] = field(init=False, repr=False, compare=False)
    partners: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.lagrangians:
            if len(self.lagrangians) != len(self.det_vectors):
                raise ValueError("lagrangians and det_vectors must be index-aligned")
            for i, (lag, d) in enumerate(zip(self.lagrangians, self.det_vectors)):
                if determinant_vector(lag) != d:
                    raise ValueError(f"det_vectors[{i}] does not match lagrangians[{i}]")
        n = len(self.det_vectors)
        if list(self.dual_pairs) != sorted(set(self.dual_pairs)):
            raise ValueError("dual pairs must be deduplicated and sorted")
        if any(not 0 <= i < j < n for i, j in self.dual_pairs):
            raise ValueError("dual pair index out of range")

        partners = [0] * n
        for i, j in self.dual_pairs:
            partners[i] |= 1 << j
        object.__setattr__(self, "planes", tuple(pack_trits(d.entries) for d in self.det_vectors))
        object.__setattr__(self, "partners", tuple(partners))

    @classmethod
    def synthetic(cls, det_vectors: Iterable[Sequence[int]],
                  dual_pairs: Iterable[tuple[int, int]] = ()) -> SearchContext:
        return cls((), tuple(DeterminantVector(tuple(d)) for d in det_vectors), tuple(sorted(dual_pairs)))

    def rows(self) -> list[tuple[int, ...]]:
        return [d.entries for d in self.det_vectors]


def build_context(form: LinkingForm) -> SearchContext:
    p = form.group.elementary_prime()
    if p != FAMILY_PRIME or form.group.rank != FAMILY_RANK:
        raise PreconditionError(
            f"search needs a form on (Z/{FAMILY_PRIME})^{FAMILY_RANK}, got invariant factors "
            f"{list(form.group.invariant_factors)}")
    started = time.perf_counter()
    lagrangians = enumerate_lagrangians(form)
    dets = tuple(determinant_vector(lag) for lag in lagrangians)
    pairs = tuple(dual_pair_indices(lagrangians))
    logger.info("Search context: %d Lagrangians, %d dual pairs (%.2fs)",
                len(lagrangians), len(pairs), time.perf_counter() - started)
    return SearchContext(tuple(lagrangians), dets, pairs)


# ─── Single vectors ───────────────────────────────────────────

@dataclass(frozen=True)
class SearchReport:
    v: ObstructionVector
    obstructed: bool
    failing_pair: tuple[int, int] | None = None
    vectors_tested: int = 1
    elapsed_seconds: float = 0.0

    def __post_init__(self):
        if (self.failing_pair is None) != self.obstructed:
            raise ValueError("failing_pair is present exactly when the vector is not obstructed")

    def to_record(self) -> dict:
        return {
            "v": self.v.signed(),
            "obstructed": self.obstructed,
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
        }


def pairings(v: ObstructionVector, ctx: SearchContext) -> list[int]:
    vp = pack_trits(v.entries)
    return [packed_dot(d, vp) for d in ctx.planes]


def _zero_mask(vp: Planes, ctx: SearchContext) -> int:
    mask = 0
    for i, d in enumerate(ctx.planes):
        if packed_dot(d, vp) == 0:
            mask |= 1 << i
    return mask


def _first_failing_pair(zero_mask: int, ctx: SearchContext) -> tuple[int, int] | None:
    """Smallest (i, j) in pair order with both members vanishing."""
    rest = zero_mask
    while rest:
        i = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        both = ctx.partners[i] & zero_mask
        if both:
            return i, (both & -both).bit_length() - 1
    return None


def is_obstructed(v: ObstructionVector, ctx: SearchContext) -> SearchReport:
    started = time.perf_counter()
    failing = _first_failing_pair(_zero_mask(pack_trits(v.entries), ctx), ctx)
    return SearchReport(v, failing is None, failing, 1, time.perf_counter() - started)


def vanishing_lagrangians(v: ObstructionVector, ctx: SearchContext) -> list[int]:
    """Indices of the Lagrangians on which the 3-form of v vanishes."""
    return [i for i, x in enumerate(pairings(v, ctx)) if x == 0]


# ─── Scanning ─────────────────────────────────────────────────

def _sequential_indices(start: int) -> Iterator[int]:
    yield from range(start, VECTOR_SPACE_SIZE)


def _random_indices(seed: int, batch: int = 4096) -> Iterator[int]:
    rng = np.random.default_rng(seed)
    while True:
        yield from (int(x) for x in rng.integers(0, VECTOR_SPACE_SIZE, size=batch))


def scan_obstructed(
    ctx: SearchContext,
    max_vectors: int | None = None,
    max_seconds: float | None = None,
    strategy: str = "sequential",
    seed: int = DEFAULT_SEED,
    start: int = 0,
    candidates: Iterable[ObstructionVector] | None = None,
) -> list[ObstructionVector]:
    """
    Obstructed vectors among the first max_vectors tested (and/or within
    max_seconds).  Sequential order walks base-3 indices from `start`;
    random draws indices from a seeded generator; an explicit candidate
    list is checked in the given order.
    """
    if max_vectors is None and max_seconds is None and candidates is None:
        raise PreconditionError("scan needs a vector budget, a time budget or a candidate list")
    if strategy not in ("sequential", "random"):
        raise PreconditionError(f"unknown scan strategy {strategy!r}")

    if candidates is not None:
        vectors = (v.entries for v in candidates)
    elif strategy == "sequential":
        vectors = (index_to_trits(i) for i in _sequential_indices(start))
    else:
        vectors = (index_to_trits(i) for i in _random_indices(seed))

    found: list[ObstructionVector] = []
    tested = 0
    started = time.perf_counter()
    for entries in vectors:
        if max_vectors is not None and tested >= max_vectors:
            break
        if max_seconds is not None and time.perf_counter() - started > max_seconds:
            break
        tested += 1
        vp = pack_trits(entries)
        if _first_failing_pair(_zero_mask(vp, ctx), ctx) is None:
            found.append(ObstructionVector(tuple(entries)))

    logger.info("Scanned %d vectors (%s): %d obstructed in %.2fs",
                tested, strategy if candidates is None else "candidates", len(found),
                time.perf_counter() - started)
    return found


# ─── Universal vanishing ──────────────────────────────────────

@dataclass(frozen=True)
class UniversalReport:
    verdict: bool
    mode: str
    rank: int
    block_ranks: tuple[int, ...]
    vectors_tested: int
    elapsed_seconds: float
    escaping_vector: tuple[int, ...] | None = None

    def to_record(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "rank": self.rank,
            "block_ranks": list(self.block_ranks),
            "vectors_tested": self.vectors_tested,
            "escaping_vector": list(self.escaping_vector) if self.escaping_vector else None,
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _escapes(planes: Sequence[Planes], wp: Planes) -> bool:
    """True when every pairing is nonzero; stops at the first zero."""
    for d in planes:
        if packed_dot(d, wp) == 0:
            return False
    return True


def _basis_and_coefficients(rows: Sequence[Sequence[int]]) -> tuple[list[int], list[tuple[int, ...]]]:
    """Greedy basis (row indices) and every row's coordinates in it."""
    basis: list[int] = []
    for i, row in enumerate(rows):
        if fp.rank([rows[b] for b in basis] + [row], 3) > len(basis):
            basis.append(i)
    columns = [list(c) for c in zip(*(rows[b] for b in basis))]
    coeffs = [fp.solve(columns, row, 3) if basis else () for row in rows]
    return basis, coeffs


def _independent_blocks(coeffs: Sequence[tuple[int, ...]], rank: int) -> list[list[int]]:
    """
    Connected components of the det vectors: basis positions joined by
    the support of some row's coordinates.  Spans of different blocks
    form a direct sum.
    """
    parent = list(range(rank))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in coeffs:
        support = [k for k, x in enumerate(c) if x]
        for k in support[1:]:
            parent[find(k)] = find(support[0])
    groups: dict[int, list[int]] = {}
    for k in range(rank):
        groups.setdefault(find(k), []).append(k)
    return sorted(groups.values(), key=lambda g: (len(g), g))


def _rank_reduced(rows: Sequence[Sequence[int]]) -> UniversalReport:
    started = time.perf_counter()
    width = len(rows[0]) if rows else DET_VECTOR_LENGTH
    basis, coeffs = _basis_and_coefficients(rows)
    rank = len(basis)

    if any(not any(row) for row in rows):
        return UniversalReport(True, "rank_reduced", rank, (), 0, time.perf_counter() - started)

    blocks = _independent_blocks(coeffs, rank)
    block_ranks = tuple(len(b) for b in blocks)
    logger.info("Det vectors: rank %d, independent blocks of ranks %s", rank, list(block_ranks))
    if block_ranks and 3 ** block_ranks[-1] > 10**7:
        logger.warning("Largest block has rank %d: %d coefficient vectors per pass",
                       block_ranks[-1], 3 ** block_ranks[-1])

    tested = 0
    targets = [0] * rank
    for block in blocks:
        members = [tuple(c[k] for k in block) for c in coeffs if any(c[k] for k in block)]
        planes = [pack_trits(m) for m in members]
        escape = None
        for index in range(1, 3 ** len(block)):
            tested += 1
            w = index_to_trits(index, len(block))
            if _escapes(planes, pack_trits(w)):
                escape = w
                break
        if escape is None:
            logger.info("Block of rank %d has no escaping vector", len(block))
            return UniversalReport(True, "rank_reduced", rank, block_ranks, tested,
                                   time.perf_counter() - started)
        for k, x in zip(block, escape):
            targets[k] = x

    # every block escapes: realise the combined coordinates by one v
    v = fp.solve([list(rows[b]) for b in basis], targets, 3) if basis else (0,) * width
    return UniversalReport(False, "rank_reduced", rank, block_ranks, tested,
                           time.perf_counter() - started, tuple(v))


# Exhaustive scan: pairings split as (low-half table) + (high-half row).
# Sums lie in 0..4; _NONZERO marks the sums that are nonzero mod 3.
_NONZERO = np.array([False, True, True, False, True])
_WORKER: dict[str, np.ndarray] = {}


def _pairing_table(d_part: np.ndarray, k: int) -> np.ndarray:
    idx = np.arange(3 ** k, dtype=np.int64)
    trits = (idx[:, None] // (3 ** np.arange(k, dtype=np.int64))[None, :]) % 3
    return ((trits @ d_part.T) % 3).astype(np.uint8)


def _init_worker(lo_table: np.ndarray, hi_table: np.ndarray):
    _WORKER["lo"] = lo_table
    _WORKER["hi"] = hi_table


def _scan_chunk(bounds: tuple[int, int]) -> tuple[int | None, int]:
    """First escaping global index in the chunk (or None) and vectors tested."""
    start, stop = bounds
    lo, hi = _WORKER["lo"], _WORKER["hi"]
    span = lo.shape[0]
    for h in range(start, stop):
        escaping = np.all(_NONZERO[lo + hi[h]], axis=1)
        if escaping.any():
            first = int(np.argmax(escaping))
            return h * span + first, (h - start) * span + first + 1
    return None, (stop - start) * span


def _exhaustive(rows: Sequence[Sequence[int]], threads: int) -> UniversalReport:
    started = time.perf_counter()
    width = len(rows[0]) if rows else DET_VECTOR_LENGTH
    rank = fp.rank(rows, 3) if rows else 0
    d = np.array(rows, dtype=np.int64).reshape(len(rows), width)
    lo_width = width // 2
    lo_table = _pairing_table(d[:, :lo_width], lo_width)
    hi_table = _pairing_table(d[:, lo_width:], width - lo_width)
    chunks = [(s, min(s + EXHAUSTIVE_CHUNK, hi_table.shape[0]))
              for s in range(0, hi_table.shape[0], EXHAUSTIVE_CHUNK)]
    logger.info("Exhaustive scan of 3^%d vectors in %d chunks on %d worker(s)",
                width, len(chunks), threads)

    tested = 0
    escaping = None
    if threads <= 1:
        _init_worker(lo_table, hi_table)
        results: Iterable[tuple[int | None, int]] = map(_scan_chunk, chunks)
        for found, count in results:
            tested += count
            if found is not None:
                escaping = found
                break
    else:
        with Pool(threads, initializer=_init_worker, initargs=(lo_table, hi_table)) as pool:
            # ordered results: the first escape reported is the smallest index
            for found, count in pool.imap(_scan_chunk, chunks):
                tested += count
                if found is not None:
                    escaping = found
                    break

    return UniversalReport(
        escaping is None, "exhaustive", rank, (), tested, time.perf_counter() - started,
        index_to_trits(escaping, width) if escaping is not None else None,
    )


def universal_vanishing_report(
    rows: Sequence[Sequence[int]],
    mode: str = DEFAULT_VERIFY_MODE,
    threads: int = DEFAULT_THREADS,
) -> UniversalReport:
    """
    Does every v vanish against at least one row?  `rows` are det vectors
    (any common width); the report carries a witness v when it does not.
    """
    if mode not in VERIFY_MODES:
        raise PreconditionError(f"unknown verification mode {mode!r}")
    rows = [tuple(int(x) % 3 for x in r) for r in rows]
    if len({len(r) for r in rows}) > 1:
        raise PreconditionError("det vectors must share one width")
    report = _rank_reduced(rows) if mode == "rank_reduced" else _exhaustive(rows, threads)
    logger.info("Universal vanishing (%s): %s after %d vectors in %.2fs",
                mode, report.verdict, report.vectors_tested, report.elapsed_seconds)
    return report


def verify_universal_vanishing(ctx: SearchContext, mode: str = DEFAULT_VERIFY_MODE,
                               threads: int = DEFAULT_THREADS) -> bool:
    return universal_vanishing_report(ctx.rows(), mode, threads).verdict
