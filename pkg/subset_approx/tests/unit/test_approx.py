from fractions import Fraction

import pytest
from hypothesis import given, settings

from subset_approx.approx import (
    EXACT,
    GREEDY_CLIQUE,
    GREEDY_DOMINATING_SET,
    GREEDY_FVS,
    GREEDY_IDS,
    GREEDY_MIS,
    GREEDY_SET_COVER,
    GREEDY_SET_PACKING,
    MATCHING,
    MINIMAL_COVER,
    available_oracles,
    default_oracle,
    get_oracle,
    greedy_clique,
    greedy_dominating_set,
    greedy_feedback_vertex_set,
    greedy_maximal_independent_set,
    greedy_set_cover,
    greedy_set_packing,
    matching_vertex_cover,
    maximal_matching,
    measure_ratio,
    minimal_vertex_cover,
)
from subset_approx.core import Solution
from subset_approx.exceptions import InfeasibleInstance, InputError, OracleMismatch
from subset_approx.problems import ProblemKind, SetSystem, make_problem
from subset_approx.tests.strategies import coverable_set_systems, graphs
from subset_approx.utils import harmonic


# ===============================
# Plain algorithms
# ===============================
def test_matching_vertex_cover(triangle, path3):
    assert maximal_matching(triangle) == [(0, 1)]
    assert matching_vertex_cover(triangle) == Solution.of([0, 1])
    assert matching_vertex_cover(path3) == Solution.of([0, 1])


def test_greedy_set_cover(overlapping_sets):
    assert greedy_set_cover(overlapping_sets) == Solution.of([0, 1, 2])


def test_greedy_set_cover_uncoverable():
    with pytest.raises(InfeasibleInstance):
        greedy_set_cover(SetSystem.from_sets(3, [[0]]))


def test_greedy_dominating_set(star3, path3):
    assert greedy_dominating_set(star3) == Solution.of([0])
    assert greedy_dominating_set(path3) == Solution.of([1])


def test_greedy_independent_set(path3, star3):
    assert greedy_maximal_independent_set(path3) == Solution.of([0, 2])
    assert greedy_maximal_independent_set(star3) == Solution.of([1, 2, 3])


def test_greedy_clique(triangle, star3):
    assert greedy_clique(triangle) == Solution.of([0, 1, 2])
    assert greedy_clique(star3) == Solution.of([0, 1])


def test_greedy_set_packing(disjoint_pairs, overlapping_sets):
    assert greedy_set_packing(disjoint_pairs) == Solution.of([0, 1])
    # smallest first: {3}, then {0, 1, 2}, then {1, 2, 4} and {0, 3} collide
    assert greedy_set_packing(overlapping_sets) == Solution.of([0, 3])


def test_greedy_feedback_vertex_set(triangle, square, path3):
    assert greedy_feedback_vertex_set(triangle) == Solution.of([0])
    assert greedy_feedback_vertex_set(square) == Solution.of([0])
    assert greedy_feedback_vertex_set(path3) == Solution()


def test_minimal_vertex_cover_on_path(path3):
    # the non-intersective output for max minimal vertex cover
    assert minimal_vertex_cover(path3) == Solution.of([1])


# ===============================
# Ratios
# ===============================
def test_harmonic():
    assert harmonic(0) == 1
    assert harmonic(1) == 1
    assert harmonic(3) == Fraction(11, 6)
    assert harmonic(4) == Fraction(25, 12)


def test_declared_ratios(triangle, star3, overlapping_sets):
    assert MATCHING.ratio(make_problem("vertex-cover", triangle)) == 2
    assert GREEDY_SET_COVER.ratio(make_problem("set-cover", overlapping_sets)) == Fraction(
        11, 6
    )
    assert GREEDY_DOMINATING_SET.ratio(make_problem("dominating-set", star3)) == Fraction(
        25, 12
    )
    assert GREEDY_MIS.ratio(make_problem("independent-set", star3)) == Fraction(1, 4)
    assert GREEDY_IDS.ratio(make_problem("min-independent-dominating-set", star3)) == 4
    assert GREEDY_CLIQUE.ratio(make_problem("clique", star3)) == Fraction(1, 4)
    assert GREEDY_SET_PACKING.ratio(
        make_problem("set-packing", overlapping_sets)
    ) == Fraction(1, 3)
    assert GREEDY_FVS.ratio(make_problem("feedback-vertex-set", triangle)) == 1
    assert MINIMAL_COVER.ratio(make_problem("max-minimal-vertex-cover", star3)) == Fraction(
        1, 4
    )
    assert EXACT.ratio(make_problem("clique", star3)) == 1


def test_oracle_on_restricted_instance(star3):
    p = make_problem(ProblemKind.DOMINATING_SET, star3)
    child = p.restrict(1).problem
    # choosing leaf 1 dominates {0, 1}; leaves 2 and 3 remain
    assert GREEDY_DOMINATING_SET.run(child) == Solution.of([0])
    assert GREEDY_DOMINATING_SET.ratio(child) == Fraction(3, 2)


# ===============================
# Registry
# ===============================
def test_registry():
    names = available_oracles()
    assert names == sorted(names)
    assert "matching" in names
    assert get_oracle("matching") is MATCHING
    assert default_oracle("vertex-cover") is MATCHING
    assert default_oracle(ProblemKind.MAX_MINIMAL_VERTEX_COVER) is MINIMAL_COVER
    with pytest.raises(InputError):
        get_oracle("nope")


def test_oracle_mismatch(triangle):
    with pytest.raises(OracleMismatch):
        MATCHING.run(make_problem(ProblemKind.INDEPENDENT_SET, triangle))
    with pytest.raises(OracleMismatch):
        GREEDY_MIS.ratio(make_problem(ProblemKind.CLIQUE, triangle))


def test_exact_oracle_any_kind(triangle):
    assert EXACT.run(make_problem("independent-set", triangle)).value == 1
    assert EXACT(make_problem("vertex-cover", triangle)).value == 2


# ===============================
# Declared ratios hold against the exact optimum
# ===============================
@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=8))
def test_graph_oracles_within_bound(g):
    for kind in (
        ProblemKind.VERTEX_COVER,
        ProblemKind.INDEPENDENT_SET,
        ProblemKind.CLIQUE,
        ProblemKind.DOMINATING_SET,
        ProblemKind.FEEDBACK_VERTEX_SET,
        ProblemKind.MAX_MINIMAL_VERTEX_COVER,
        ProblemKind.MIN_INDEPENDENT_DOMINATING_SET,
    ):
        p = make_problem(kind, g)
        oracle = default_oracle(kind)
        assert p.is_feasible(oracle.run(p))
        assert measure_ratio(p, oracle).within_bound


@settings(max_examples=60, deadline=None)
@given(coverable_set_systems())
def test_set_oracles_within_bound(system):
    for kind in (ProblemKind.SET_COVER, ProblemKind.SET_PACKING):
        p = make_problem(kind, system)
        oracle = default_oracle(kind)
        assert p.is_feasible(oracle.run(p))
        assert measure_ratio(p, oracle).within_bound


def test_measure_ratio_witness(overlapping_sets):
    witness = measure_ratio(make_problem("set-cover", overlapping_sets), GREEDY_SET_COVER)
    assert witness.oracle_value == 3
    assert witness.optimal_value == 2
    assert witness.achieved == Fraction(3, 2)
    assert witness.declared == Fraction(11, 6)
    assert witness.within_bound
