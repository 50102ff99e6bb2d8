"""Polynomial-time approximation oracles with computable ratio functions.

An oracle runs on a ``SubsetProblem`` (root instance or any restriction of one)
and returns a solution in that problem's local element ids. Its ratio ``rho(I)``
is an exact rational: ``|run(I)| <= rho * opt`` for minimization and
``|run(I)| >= rho * opt`` for maximization.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Union
import logging

from .core import (
    DEFAULT_EXHAUSTIVE_BUDGET,
    Goal,
    Infeasible,
    Solution,
    SubsetProblem,
    brute_force_optimum,
)
from .exceptions import InfeasibleInstance, InputError, OracleMismatch
from .models import RatioWitness
from .problems import (
    DominationState,
    Graph,
    ProblemKind,
    SetSystem,
    cycle_core,
    graph_of,
    is_acyclic,
)
from .utils import harmonic, iter_bits, popcount

logger = logging.getLogger(__name__)


# ====================================================================================
# Plain algorithms over graphs and set systems
# ====================================================================================
def _greedy_cover(candidates: Sequence[int], target: int) -> List[int]:
    # largest marginal gain first, lowest index on ties
    chosen = []
    uncovered = target
    while uncovered:
        best, gain = -1, 0
        for i, c in enumerate(candidates):
            g = popcount(c & uncovered)
            if g > gain:
                best, gain = i, g
        if best < 0:
            raise InfeasibleInstance("Some elements cannot be covered")
        chosen.append(best)
        uncovered &= ~candidates[best]
    return chosen


def greedy_set_cover(sys: SetSystem) -> Solution:
    return Solution.of(_greedy_cover(sys.sets, sys.ground_mask))


def greedy_dominating_set(g: Union[Graph, DominationState]) -> Solution:
    """Greedy set cover over closed neighborhoods; ids are positions in the state universe."""
    state = g if isinstance(g, DominationState) else DominationState(g)
    closed = [state.graph.closed(v) for v in state.universe]
    return Solution.of(_greedy_cover(closed, state.undominated))


def maximal_matching(g: Graph) -> List[tuple]:
    matched = 0
    matching = []
    for u, v in g.edges:
        if not (matched >> u & 1 or matched >> v & 1):
            matching.append((u, v))
            matched |= 1 << u | 1 << v
    return matching


def matching_vertex_cover(g: Graph) -> Solution:
    """Both endpoints of a maximal matching built over edges in lexicographic order."""
    return Solution.of(x for edge in maximal_matching(g) for x in edge)


def greedy_maximal_independent_set(g: Graph) -> Solution:
    adjacency = g.adjacency
    alive = g.vertex_mask
    chosen = 0
    while alive:
        v = min(iter_bits(alive), key=lambda u: popcount(adjacency[u] & alive))
        chosen |= 1 << v
        alive &= ~g.closed(v)
    return Solution(chosen)


def greedy_clique(g: Graph) -> Solution:
    adjacency = g.adjacency
    candidates = g.vertex_mask
    chosen = 0
    while candidates:
        v = max(
            iter_bits(candidates),
            key=lambda u: (popcount(adjacency[u] & candidates), -u),
        )
        chosen |= 1 << v
        candidates &= adjacency[v]
    return Solution(chosen)


def greedy_set_packing(sys: SetSystem) -> Solution:
    """Smallest set first, kept when disjoint from everything kept so far."""
    order = sorted(range(sys.m), key=lambda i: (popcount(sys.sets[i]), i))
    used = 0
    chosen = 0
    for i in order:
        if not sys.sets[i] & used:
            used |= sys.sets[i]
            chosen |= 1 << i
    return Solution(chosen)


def greedy_feedback_vertex_set(g: Graph) -> Solution:
    adjacency = g.adjacency
    removed = 0
    core = cycle_core(g, removed)
    while core:
        v = max(iter_bits(core), key=lambda u: (popcount(adjacency[u] & core), -u))
        removed |= 1 << v
        core = cycle_core(g, removed)
    # drop deletions that are not needed, lowest index first
    for v in iter_bits(removed):
        if is_acyclic(g, removed & ~(1 << v)):
            removed &= ~(1 << v)
    return Solution(removed)


def minimal_vertex_cover(g: Graph) -> Solution:
    """Matching cover pruned to an inclusion-minimal one by a lowest-index removal scan."""
    cover = matching_vertex_cover(g).mask
    for v in iter_bits(cover):
        if g.adjacency[v] & ~cover == 0:
            cover &= ~(1 << v)
    return Solution(cover)


# ====================================================================================
# Oracles
# ====================================================================================
@dataclass(frozen=True)
class ApproxOracle:
    """A named polynomial-time algorithm with its ratio function.

    ``goal`` None means the oracle follows the goal of whatever problem it is given;
    ``kinds`` empty means any kind.
    """

    name: str
    goal: Optional[Goal]
    ratio_fn: Callable[[SubsetProblem], Fraction] = field(repr=False)
    run_fn: Callable[[SubsetProblem], Solution] = field(repr=False)
    kinds: FrozenSet[ProblemKind] = frozenset()
    description: str = ""

    def supports(self, p: SubsetProblem) -> bool:
        if self.kinds and (p.is_dual or p.kind not in self.kinds):
            return False
        return self.goal is None or self.goal is p.goal

    def check(self, p: SubsetProblem):
        if not self.supports(p):
            raise OracleMismatch(f"Oracle '{self.name}' does not apply to {p.label}")

    def ratio(self, p: SubsetProblem) -> Fraction:
        self.check(p)
        return self.ratio_fn(p)

    def run(self, p: SubsetProblem) -> Solution:
        self.check(p)
        solution = self.run_fn(p)
        logger.debug(f"{self.name} on {p.label} (n={p.universe_size}): {solution!r}")
        return solution

    __call__ = run


def _state(p: SubsetProblem) -> DominationState:
    data = p.data
    return data if isinstance(data, DominationState) else DominationState(data)


def _dominating_ratio(p: SubsetProblem) -> Fraction:
    # largest closed neighborhood restricted to undominated vertices; Delta + 1 at the root
    state = _state(p)
    target = state.undominated
    d = max(
        (popcount(state.graph.closed(v) & target) for v in state.universe), default=0
    )
    return harmonic(d)


def _inverse_size(n: int) -> Fraction:
    return Fraction(1, max(1, n))


def _exact_run(p: SubsetProblem) -> Solution:
    result = brute_force_optimum(p, DEFAULT_EXHAUSTIVE_BUDGET)
    if isinstance(result, Infeasible):
        raise InfeasibleInstance(f"{p.label} has no feasible solution")
    return result.solution


def _set_system(p: SubsetProblem) -> SetSystem:
    if not isinstance(p.data, SetSystem):
        raise InputError(f"{p.label} is not a set-system problem")
    return p.data


MATCHING = ApproxOracle(
    name="matching",
    goal=Goal.MINIMIZE,
    ratio_fn=lambda p: Fraction(2),
    run_fn=lambda p: matching_vertex_cover(graph_of(p)),
    kinds=frozenset({ProblemKind.VERTEX_COVER}),
    description="Endpoints of a maximal matching (ratio 2)",
)

GREEDY_SET_COVER = ApproxOracle(
    name="greedy-set-cover",
    goal=Goal.MINIMIZE,
    ratio_fn=lambda p: harmonic(_set_system(p).max_set_size),
    run_fn=lambda p: greedy_set_cover(_set_system(p)),
    kinds=frozenset({ProblemKind.SET_COVER}),
    description="Most newly covered elements first (ratio H_d)",
)

GREEDY_DOMINATING_SET = ApproxOracle(
    name="greedy-dominating-set",
    goal=Goal.MINIMIZE,
    ratio_fn=_dominating_ratio,
    run_fn=lambda p: greedy_dominating_set(_state(p)),
    kinds=frozenset({ProblemKind.DOMINATING_SET}),
    description="Greedy set cover over closed neighborhoods (ratio H_(Delta+1))",
)

GREEDY_MIS = ApproxOracle(
    name="greedy-mis",
    goal=Goal.MAXIMIZE,
    ratio_fn=lambda p: Fraction(1, graph_of(p).max_degree + 1),
    run_fn=lambda p: greedy_maximal_independent_set(graph_of(p)),
    kinds=frozenset({ProblemKind.INDEPENDENT_SET}),
    description="Minimum-degree maximal independent set (ratio 1/(Delta+1))",
)

GREEDY_IDS = ApproxOracle(
    name="greedy-ids",
    goal=Goal.MINIMIZE,
    ratio_fn=lambda p: Fraction(graph_of(p).max_degree + 1),
    run_fn=lambda p: greedy_maximal_independent_set(graph_of(p)),
    kinds=frozenset({ProblemKind.MIN_INDEPENDENT_DOMINATING_SET}),
    description="Minimum-degree maximal independent set as a dominating set (ratio Delta+1)",
)

GREEDY_CLIQUE = ApproxOracle(
    name="greedy-clique",
    goal=Goal.MAXIMIZE,
    ratio_fn=lambda p: _inverse_size(p.universe_size),
    run_fn=lambda p: greedy_clique(graph_of(p)),
    kinds=frozenset({ProblemKind.CLIQUE}),
    description="Highest degree among remaining candidates (ratio 1/n)",
)

GREEDY_SET_PACKING = ApproxOracle(
    name="greedy-set-packing",
    goal=Goal.MAXIMIZE,
    ratio_fn=lambda p: _inverse_size(_set_system(p).max_set_size),
    run_fn=lambda p: greedy_set_packing(_set_system(p)),
    kinds=frozenset({ProblemKind.SET_PACKING}),
    description="Smallest sets first (ratio 1/d)",
)

GREEDY_FVS = ApproxOracle(
    name="greedy-fvs",
    goal=Goal.MINIMIZE,
    # a cyclic graph needs at least one deletion, so |S| * opt >= |S|
    ratio_fn=lambda p: Fraction(
        max(1, greedy_feedback_vertex_set(graph_of(p)).value)
    ),
    run_fn=lambda p: greedy_feedback_vertex_set(graph_of(p)),
    kinds=frozenset({ProblemKind.FEEDBACK_VERTEX_SET}),
    description="Leaf peeling plus maximum-degree deletion, then minimalization",
)

MINIMAL_COVER = ApproxOracle(
    name="minimal-cover",
    goal=Goal.MAXIMIZE,
    ratio_fn=lambda p: _inverse_size(p.universe_size),
    run_fn=lambda p: minimal_vertex_cover(graph_of(p)),
    kinds=frozenset({ProblemKind.MAX_MINIMAL_VERTEX_COVER}),
    description="Inclusion-minimal vertex cover (ratio 1/n)",
)

EXACT = ApproxOracle(
    name="exact",
    goal=None,
    ratio_fn=lambda p: Fraction(1),
    run_fn=_exact_run,
    description="Exhaustive optimum (ratio 1)",
)

ORACLES: Dict[str, ApproxOracle] = {
    o.name: o
    for o in (
        MATCHING,
        GREEDY_SET_COVER,
        GREEDY_DOMINATING_SET,
        GREEDY_MIS,
        GREEDY_IDS,
        GREEDY_CLIQUE,
        GREEDY_SET_PACKING,
        GREEDY_FVS,
        MINIMAL_COVER,
        EXACT,
    )
}

_DEFAULTS = {
    ProblemKind.VERTEX_COVER: MATCHING,
    ProblemKind.INDEPENDENT_SET: GREEDY_MIS,
    ProblemKind.CLIQUE: GREEDY_CLIQUE,
    ProblemKind.DOMINATING_SET: GREEDY_DOMINATING_SET,
    ProblemKind.SET_COVER: GREEDY_SET_COVER,
    ProblemKind.SET_PACKING: GREEDY_SET_PACKING,
    ProblemKind.FEEDBACK_VERTEX_SET: GREEDY_FVS,
    ProblemKind.MAX_MINIMAL_VERTEX_COVER: MINIMAL_COVER,
    ProblemKind.MIN_INDEPENDENT_DOMINATING_SET: GREEDY_IDS,
}


def available_oracles() -> List[str]:
    return sorted(ORACLES)


def get_oracle(name: str) -> ApproxOracle:
    try:
        return ORACLES[name]
    except KeyError:
        raise InputError(
            f"Unknown oracle '{name}', expected one of {', '.join(available_oracles())}"
        ) from None


def default_oracle(kind: Union[ProblemKind, str]) -> ApproxOracle:
    return _DEFAULTS[ProblemKind(kind)]


def measure_ratio(
    p: SubsetProblem,
    oracle: ApproxOracle,
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
    instance: Optional[str] = None,
) -> RatioWitness:
    """Compare the oracle against the exhaustive optimum."""
    solution = oracle.run(p)
    declared = oracle.ratio(p)
    result = brute_force_optimum(p, budget)
    if isinstance(result, Infeasible):
        raise InfeasibleInstance(f"{p.label} has no feasible solution")
    k_prime, k = solution.value, result.value
    if k:
        achieved = Fraction(k_prime, k)
    else:
        achieved = Fraction(1) if k_prime == 0 else None
    if p.goal is Goal.MINIMIZE:
        within = k_prime <= declared * k
    else:
        within = k_prime >= declared * k
    if not within:
        logger.warning(
            f"{oracle.name} exceeded its declared ratio {declared} on "
            f"{instance or p.label} ({k_prime} vs opt {k})"
        )
    return RatioWitness(
        instance=instance or p.label,
        oracle=oracle.name,
        oracle_value=k_prime,
        optimal_value=k,
        declared=declared,
        achieved=achieved,
        within_bound=within,
    )
