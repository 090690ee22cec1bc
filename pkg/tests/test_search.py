import random

import pytest

from data.framings import get_e1_vanishing_pair, get_witness
from triple_linking import fp
from triple_linking.errors import PreconditionError
from triple_linking.isotropic import left_block_det
from triple_linking.linking import LinkingForm
from triple_linking.search import (
    SearchContext,
    SearchReport,
    build_context,
    index_to_trits,
    is_obstructed,
    pack_trits,
    packed_dot,
    pairings,
    scan_obstructed,
    trits_to_index,
    universal_vanishing_report,
    vanishing_lagrangians,
    verify_universal_vanishing,
)
from triple_linking.tripleform import ObstructionVector, vanishes_on_lagrangian

E1 = ObstructionVector.unit(1)


def _naive_obstructed(v: ObstructionVector, ctx: SearchContext) -> bool:
    zero = [d.pair(v) == 0 for d in ctx.det_vectors]
    return not any(zero[i] and zero[j] for i, j in ctx.dual_pairs)


# ─── Bit planes ───────────────────────────────────────────────

def test_packed_dot_matches_naive():
    rng = random.Random(8)
    for _ in range(2000):
        a = [rng.randrange(3) for _ in range(20)]
        b = [rng.randrange(3) for _ in range(20)]
        assert packed_dot(pack_trits(a), pack_trits(b)) == fp.dot(a, b, 3)


def test_index_round_trip():
    assert index_to_trits(1) == (1,) + (0,) * 19
    assert index_to_trits(5, 3) == (2, 1, 0)
    assert trits_to_index(index_to_trits(12345)) == 12345


# ─── Context ──────────────────────────────────────────────────

def test_m0_context(m0_context):
    assert len(m0_context.lagrangians) == 80
    assert len(m0_context.det_vectors) == 80
    assert len(m0_context.dual_pairs) == 1080
    assert list(m0_context.dual_pairs) == sorted(m0_context.dual_pairs)
    assert sum(bin(m).count("1") for m in m0_context.partners) == 1080


def test_context_needs_rank_six_over_f3():
    with pytest.raises(PreconditionError):
        build_context(LinkingForm.diagonal(3, ["1/3", "1/3", "-1/3", "-1/3"]))
    with pytest.raises(PreconditionError):
        build_context(LinkingForm.diagonal(5, ["1/5", "-1/5"] * 3))


def test_context_validation():
    with pytest.raises(ValueError):
        SearchContext.synthetic([[1] + [0] * 19], [(0, 0)])
    with pytest.raises(ValueError):
        SearchContext.synthetic([[1] + [0] * 19] * 3, [(0, 1), (0, 1)])
    with pytest.raises(ValueError):
        SearchContext.synthetic([[1] + [0] * 19] * 2, [(0, 2)])


# ─── Single vectors ───────────────────────────────────────────

def test_witness_is_obstructed(m0_context):
    report = is_obstructed(get_witness(), m0_context)
    assert report.obstructed
    assert report.failing_pair is None
    assert report.to_record() == {"v": list(get_witness().signed()), "obstructed": True, "failing_pair": None}


def test_witness_pair_audit(m0_context):
    v = get_witness()
    for i, j in m0_context.dual_pairs:
        a, b = m0_context.lagrangians[i], m0_context.lagrangians[j]
        assert not (vanishes_on_lagrangian(v, a) and vanishes_on_lagrangian(v, b))


def test_zero_vector_is_not_obstructed(m0_context):
    report = is_obstructed(ObstructionVector.zero(), m0_context)
    assert not report.obstructed
    assert report.failing_pair == m0_context.dual_pairs[0]


def test_e1_fails_on_a_vanishing_pair(m0_context):
    report = is_obstructed(E1, m0_context)
    assert not report.obstructed
    i, j = report.failing_pair
    assert (i, j) in m0_context.dual_pairs
    assert vanishes_on_lagrangian(E1, m0_context.lagrangians[i])
    assert vanishes_on_lagrangian(E1, m0_context.lagrangians[j])

    first, second = get_e1_vanishing_pair()
    vanishing = vanishing_lagrangians(E1, m0_context)
    assert m0_context.lagrangians.index(first) in vanishing
    assert m0_context.lagrangians.index(second) in vanishing


def test_e1_vanishing_pair_is_a_failing_pair(m0_context):
    first, second = get_e1_vanishing_pair()
    pair = (m0_context.lagrangians.index(first), m0_context.lagrangians.index(second))
    assert pair == (59, 74)
    assert pair in m0_context.dual_pairs
    values = pairings(E1, m0_context)
    assert values[59] == values[74] == 0
    # the report names the first failing pair in canonical order, not this one
    report = is_obstructed(E1, m0_context)
    assert report.failing_pair == (48, 55)
    assert report.failing_pair < pair


def test_e1_vanishes_exactly_on_singular_left_blocks(m0_context):
    vanishing = vanishing_lagrangians(E1, m0_context)
    assert len(vanishing) == 32
    assert all(left_block_det(m0_context.lagrangians[i]) == 0 for i in vanishing)


def test_obstruction_invariant_under_scaling(m0_context):
    rng = random.Random(9)
    for _ in range(200):
        v = ObstructionVector(tuple(rng.randrange(3) for _ in range(20)))
        assert is_obstructed(v, m0_context).obstructed == is_obstructed(v.scaled(2), m0_context).obstructed


def test_pairings_match_det_vectors(m0_context):
    v = get_witness()
    assert pairings(v, m0_context) == [d.pair(v) for d in m0_context.det_vectors]


def test_report_invariant():
    with pytest.raises(ValueError):
        SearchReport(E1, obstructed=True, failing_pair=(0, 1))
    with pytest.raises(ValueError):
        SearchReport(E1, obstructed=False)


# ─── Scanning ─────────────────────────────────────────────────

def test_scan_candidates_finds_witness(m0_context):
    found = scan_obstructed(m0_context, candidates=[E1, get_witness(), ObstructionVector.zero()])
    assert found == [get_witness()]


def test_scan_zero_budget(m0_context):
    assert scan_obstructed(m0_context, max_vectors=0) == []


def test_sequential_scan_matches_oracle(m0_context):
    found = scan_obstructed(m0_context, max_vectors=3 ** 6)
    expected = [
        ObstructionVector(index_to_trits(i))
        for i in range(3 ** 6)
        if _naive_obstructed(ObstructionVector(index_to_trits(i)), m0_context)
    ]
    assert found == expected


def test_random_scan_is_deterministic(m0_context):
    first = scan_obstructed(m0_context, max_vectors=500, strategy="random", seed=3)
    second = scan_obstructed(m0_context, max_vectors=500, strategy="random", seed=3)
    assert first == second


def test_scan_needs_a_budget(m0_context):
    with pytest.raises(PreconditionError):
        scan_obstructed(m0_context)
    with pytest.raises(PreconditionError):
        scan_obstructed(m0_context, max_vectors=1, strategy="spiral")


# ─── Universal vanishing ──────────────────────────────────────

def test_m0_universal_vanishing(m0_context):
    report = universal_vanishing_report(m0_context.rows(), "rank_reduced")
    assert report.verdict
    assert report.rank == fp.rank(m0_context.rows(), 3)
    assert sum(report.block_ranks) == report.rank
    assert report.escaping_vector is None
    assert verify_universal_vanishing(m0_context)


@pytest.mark.slow
def test_m0_universal_vanishing_exhaustive(m0_context):
    report = universal_vanishing_report(m0_context.rows(), "exhaustive")
    assert report.verdict
    assert report.vectors_tested == 3 ** 20


def test_single_hyperplane_escapes():
    ctx = SearchContext.synthetic([[0, 1] + [0] * 18])
    assert not verify_universal_vanishing(ctx)
    report = universal_vanishing_report(ctx.rows(), "exhaustive", threads=1)
    assert not report.verdict
    assert report.escaping_vector == index_to_trits(3)


def test_zero_det_vector_covers_everything():
    ctx = SearchContext.synthetic([[0] * 20, [1] + [0] * 19])
    report = universal_vanishing_report(ctx.rows(), "rank_reduced")
    assert report.verdict
    assert report.vectors_tested == 0


def _e(i: int, width: int) -> list[int]:
    return [int(j == i) for j in range(width)]


def _add(*vectors: list[int]) -> list[int]:
    return [sum(xs) % 3 for xs in zip(*vectors)]


def _neg(v: list[int]) -> list[int]:
    return [(-x) % 3 for x in v]


# planted ranks 1-4 with known verdicts
SYNTHETIC = [
    ("rank1_multiples", [_e(0, 4), [2, 0, 0, 0]], False),
    ("rank2_all_lines", [_e(0, 3), _e(1, 3), _add(_e(0, 3), _e(1, 3)), _add(_e(0, 3), _neg(_e(1, 3)))], True),
    ("rank3_two_blocks", [_e(0, 3), _e(1, 3), _e(2, 3), [1, 1, 0], [1, 2, 0]], True),
    ("rank3_one_block", [_e(0, 4), _e(1, 4), _e(2, 4), [1, 1, 1, 0]], False),
    ("rank4_two_blocks", [_e(0, 5), _e(1, 5), _e(2, 5), _e(3, 5), [1, 1, 0, 0, 0], [0, 0, 1, 1, 0]], False),
    ("rank4_covered", [_e(0, 5), _e(1, 5), _e(2, 5), _e(3, 5), [1, 1, 0, 0, 0], [0, 0, 1, 1, 0],
                       [0, 0, 1, 2, 0]], True),
]


@pytest.mark.parametrize("name, rows, verdict", SYNTHETIC, ids=[s[0] for s in SYNTHETIC])
def test_modes_agree_on_planted_ranks(name, rows, verdict):
    reduced = universal_vanishing_report(rows, "rank_reduced")
    exhaustive = universal_vanishing_report(rows, "exhaustive", threads=1)
    assert reduced.verdict == exhaustive.verdict == verdict
    assert reduced.rank == exhaustive.rank == fp.rank(rows, 3)
    for report in (reduced, exhaustive):
        if not report.verdict:
            assert all(fp.dot(row, report.escaping_vector, 3) for row in rows)
    if verdict:
        assert exhaustive.vectors_tested == 3 ** len(rows[0])


def test_block_ranks_split_independent_parts():
    rows = SYNTHETIC[4][1]
    assert universal_vanishing_report(rows, "rank_reduced").block_ranks == (2, 2)


def test_exhaustive_with_worker_pool():
    rows = SYNTHETIC[5][1]
    pooled = universal_vanishing_report(rows, "exhaustive", threads=2)
    assert pooled.verdict
    escaping = universal_vanishing_report(SYNTHETIC[4][1], "exhaustive", threads=2)
    serial = universal_vanishing_report(SYNTHETIC[4][1], "exhaustive", threads=1)
    assert escaping.escaping_vector == serial.escaping_vector


def test_unknown_mode():
    with pytest.raises(PreconditionError):
        universal_vanishing_report([[1, 0]], "sampling")
