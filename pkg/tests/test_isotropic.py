import itertools
import random

import numpy as np
import pytest

from data.framings import get_e1_vanishing_pair, get_form
from triple_linking import fp
from triple_linking.errors import DegenerateFormError, DimensionMismatchError, PreconditionError
from triple_linking.isotropic import (
    DualPair,
    Subspace,
    _shape_class_chunks,
    count_subspaces_by_shape,
    dual_pair_indices,
    enumerate_dual_pairs,
    enumerate_lagrangians,
    enumerate_subspaces,
    gaussian_binomial,
    is_isotropic,
    iter_lagrangians,
    left_block_det,
    shape_class_size,
    subspace_intersection_dim,
)
from triple_linking.linking import LinkingForm, eval_linking


# ─── F_p helpers ──────────────────────────────────────────────

def test_rref_and_rank():
    rows, pivots = fp.rref([[2, 1, 0], [1, 2, 0], [0, 0, 1]], 3)
    assert rows == [(1, 2, 0), (0, 0, 1)]
    assert pivots == [0, 2]
    assert fp.rank([[1, 1], [2, 2]], 3) == 1
    assert fp.rank([], 3) == 0


def test_det_and_solve():
    assert fp.det([[1, 2], [3, 4]], 5) == (1 * 4 - 2 * 3) % 5
    assert fp.det3([[1, 0, 0], [0, 1, 0], [0, 0, 2]], 3) == 2
    x = fp.solve([[1, 1], [1, 2]], [2, 0], 3)
    assert fp.matmul([[1, 1], [1, 2]], [[c] for c in x], 3) == [(2,), (0,)]
    assert fp.solve([[1, 1], [2, 2]], [1, 0], 3) is None


# ─── Counting ─────────────────────────────────────────────────

def test_gaussian_binomial_values():
    assert gaussian_binomial(6, 3, 3) == 33880
    assert gaussian_binomial(6, 3, 5) == 2558556
    assert gaussian_binomial(2, 1, 3) == 4
    assert gaussian_binomial(4, 0, 7) == 1
    assert gaussian_binomial(3, 4, 2) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_shape_counts_match_gaussian_binomial(p):
    for n in range(0, 7):
        for k in range(0, n + 1):
            assert count_subspaces_by_shape(p, n, k) == gaussian_binomial(n, k, p)


STREAM_CASES = [(2, n) for n in range(7)] + [(3, n) for n in range(7)] + [(5, n) for n in range(6)]


@pytest.mark.parametrize("p, n", STREAM_CASES)
def test_enumeration_matches_gaussian_binomial(p, n):
    for k in range(0, n + 1):
        subspaces = list(enumerate_subspaces(p, n, k))
        assert len(subspaces) == gaussian_binomial(n, k, p)
        assert len({s.basis for s in subspaces}) == len(subspaces)


def test_enumerate_f3_6_3():
    count = sum(1 for _ in enumerate_subspaces(3, 6, 3))
    assert count == 33880


def test_shape_class_chunks_cover_the_class():
    chunks = list(_shape_class_chunks(3, 6, (0, 1, 2), chunk=1000))
    assert all(c.shape[1:] == (3, 6) and c.shape[0] <= 1000 for c in chunks)
    assert sum(c.shape[0] for c in chunks) == shape_class_size(3, 6, (0, 1, 2)) == 3 ** 9
    whole = np.concatenate(chunks)
    assert len({b.tobytes() for b in whole}) == 3 ** 9
    assert list(_shape_class_chunks(3, 3, (0, 1, 2), chunk=4))[0].shape == (1, 3, 3)


def test_small_chunks_give_the_same_lagrangians(m0_form, monkeypatch):
    expected = enumerate_lagrangians(m0_form)
    monkeypatch.setattr(_shape_class_chunks, "__defaults__", (7,))
    assert enumerate_lagrangians(m0_form) == expected
    assert sorted(iter_lagrangians(m0_form), key=lambda s: s.basis) == expected


def test_enumeration_small_cases():
    assert [s.basis for s in enumerate_subspaces(3, 4, 0)] == [()]
    lines = sorted(s.basis for s in enumerate_subspaces(3, 2, 1))
    assert lines == [((0, 1),), ((1, 0),), ((1, 1),), ((1, 2),)]


def test_enumeration_rejects_bad_arguments():
    with pytest.raises(PreconditionError):
        list(enumerate_subspaces(4, 3, 1))
    with pytest.raises(PreconditionError):
        list(enumerate_subspaces(3, 2, 3))


def test_canonical_basis_is_recovered():
    rng = random.Random(5)
    subspaces = list(enumerate_subspaces(3, 5, 2))
    for s in rng.sample(subspaces, 40):
        while True:
            mix = [[rng.randrange(3) for _ in range(2)] for _ in range(2)]
            if fp.det(mix, 3):
                break
        rows = fp.matmul(mix, s.basis, 3)
        assert Subspace.span(3, rows) == s


def test_subspace_validation():
    with pytest.raises(ValueError):
        Subspace(3, 2, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        Subspace(3, 2, ((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        Subspace(3, 2, ((2, 0),))


# ─── Lagrangians ──────────────────────────────────────────────

def test_m0_lagrangian_counts(m0_form):
    lagrangians = enumerate_lagrangians(m0_form)
    assert len(lagrangians) == 80
    dets = [left_block_det(lag) for lag in lagrangians]
    assert sum(1 for d in dets if d) == 48
    assert sum(1 for d in dets if not d) == 32
    assert [lag.basis for lag in lagrangians] == sorted(lag.basis for lag in lagrangians)


def test_m0_lagrangians_are_isotropic_elementwise(m0_form):
    g = m0_form.group
    for lag in enumerate_lagrangians(m0_form):
        vectors = [g.element(v) for v in lag.vectors()]
        assert all(eval_linking(m0_form, x, y).is_zero for x in vectors for y in vectors)


def test_hyperbolic_lagrangians(hyperbolic_form):
    lagrangians = enumerate_lagrangians(hyperbolic_form)
    assert [lag.basis for lag in lagrangians] == [((1, 1),), ((1, 2),)]
    assert all(is_isotropic(hyperbolic_form, lag) for lag in lagrangians)


def test_definite_has_no_lagrangians(definite_form):
    assert enumerate_lagrangians(definite_form) == []


def test_lagrangian_preconditions():
    with pytest.raises(PreconditionError):
        enumerate_lagrangians(LinkingForm.of([3], [["1/3"]]))
    with pytest.raises(PreconditionError):
        enumerate_lagrangians(LinkingForm.of([9, 9], [["1/9", 0], [0, "-1/9"]]))
    with pytest.raises(DegenerateFormError):
        enumerate_lagrangians(LinkingForm.of([3, 3], [[0, 0], [0, 0]]))


def test_permuted_m0_has_same_census(m0_form):
    permuted = m0_form.permuted([1, 2, 0, 4, 5, 3])
    lagrangians = enumerate_lagrangians(permuted)
    assert len(lagrangians) == 80
    assert len(dual_pair_indices(lagrangians)) == 1080


# ─── Dual pairs ───────────────────────────────────────────────

def test_m0_dual_pairs(m0_form):
    lagrangians = enumerate_lagrangians(m0_form)
    pairs = enumerate_dual_pairs(lagrangians)
    assert len(pairs) == 1080
    partners = {lag.basis: 0 for lag in lagrangians}
    for pair in pairs:
        assert pair.first.basis < pair.second.basis
        assert subspace_intersection_dim(pair.first, pair.second) == 0
        partners[pair.first.basis] += 1
        partners[pair.second.basis] += 1
    assert set(partners.values()) == {27}


def test_hyperbolic_dual_pair(hyperbolic_form):
    pairs = enumerate_dual_pairs(enumerate_lagrangians(hyperbolic_form))
    assert len(pairs) == 1
    assert pairs[0].first.basis == ((1, 1),)


def test_dual_pairs_of_nothing():
    assert enumerate_dual_pairs([]) == []
    assert dual_pair_indices([]) == []


def test_dual_pair_validation():
    a = Subspace.span(3, [[1, 1]])
    with pytest.raises(ValueError):
        DualPair(a, a)
    with pytest.raises(ValueError):
        DualPair(Subspace.span(3, [[1, 2]]), a)
    assert DualPair.of(Subspace.span(3, [[1, 2]]), a).first == a


def test_intersection_dim_examples():
    a = Subspace.span(3, [[1, 1]])
    b = Subspace.span(3, [[1, 2]])
    assert subspace_intersection_dim(a, a) == 1
    assert subspace_intersection_dim(a, b) == 0
    first, second = get_e1_vanishing_pair()
    assert subspace_intersection_dim(first, second) == 0
    assert fp.rank(list(first.basis) + list(second.basis), 3) == 6
    with pytest.raises(DimensionMismatchError):
        subspace_intersection_dim(a, Subspace.span(3, [[1, 0, 0]]))


def test_e1_vanishing_pair_is_a_pair_of_lagrangians():
    form = get_form("m0")
    first, second = get_e1_vanishing_pair()
    assert is_isotropic(form, first) and is_isotropic(form, second)
    assert left_block_det(first) == 0 and left_block_det(second) == 0
    lagrangians = enumerate_lagrangians(form)
    assert first in lagrangians and second in lagrangians
    i, j = sorted((lagrangians.index(first), lagrangians.index(second)))
    assert (i, j) in dual_pair_indices(lagrangians)


def test_vectors_of_subspace():
    plane = Subspace.span(3, [[1, 0, 1], [0, 1, 1]])
    vectors = set(plane.vectors())
    assert len(vectors) == 9
    assert all(plane.contains(v) for v in vectors)
    assert not plane.contains((0, 0, 1))
    assert list(itertools.islice(plane.vectors(), 1)) == [(0, 0, 0)]
