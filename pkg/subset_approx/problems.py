"""Graph and set-system encodings of classic subset problems.

The universe of a graph problem is its vertex set; the universe of a set-system
problem is the family of sets (element ``i`` is set ``i``), so ``n`` is ``m`` there.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union
import logging

from .core import Goal, Monotone, Restriction, Solution, SubsetProblem
from .exceptions import InputError, InvalidSolution
from .utils import compress_mask, full_mask, iter_bits, popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``adjacency[v]`` is the neighbor bit vector of v."""

    n_vertices: int
    adjacency: Tuple[int, ...]

    def __post_init__(self):
        if len(self.adjacency) != self.n_vertices:
            raise InputError("Adjacency length does not match vertex count")
        for v, nbrs in enumerate(self.adjacency):
            if nbrs >> v & 1:
                raise InputError(f"Self-loop at vertex {v}")
            if nbrs >> self.n_vertices:
                raise InputError(f"Vertex {v} has a neighbor out of range")
            for u in iter_bits(nbrs):
                if not self.adjacency[u] >> v & 1:
                    raise InputError(f"Asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        """Duplicate edges collapse; self-loops and out-of-range ends are errors."""
        if n_vertices < 0:
            raise InputError("Vertex count must be non-negative")
        adjacency = [0] * n_vertices
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise InputError(f"Edge ({u}, {v}) out of range for {n_vertices} vertices")
            if u == v:
                raise InputError(f"Self-loop at vertex {u}")
            adjacency[u] |= 1 << v
            adjacency[v] |= 1 << u
        return cls(n_vertices, tuple(adjacency))

    @classmethod
    def empty(cls, n_vertices: int) -> "Graph":
        return cls(n_vertices, (0,) * n_vertices)

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        return tuple(
            (u, v)
            for u, nbrs in enumerate(self.adjacency)
            for v in iter_bits(nbrs >> (u + 1) << (u + 1))
        )

    @property
    def n_edges(self) -> int:
        return sum(popcount(a) for a in self.adjacency) // 2

    @property
    def vertex_mask(self) -> int:
        return full_mask(self.n_vertices)

    def degree(self, v: int) -> int:
        return popcount(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n_vertices)), default=0)

    def closed(self, v: int) -> int:
        return self.adjacency[v] | 1 << v

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def induced(self, keep: int) -> Tuple["Graph", Tuple[int, ...]]:
        """Induced subgraph on the vertices of ``keep``, re-indexed in order."""
        kept = tuple(iter_bits(keep & self.vertex_mask))
        adjacency = tuple(compress_mask(self.adjacency[v] & keep, kept) for v in kept)
        return Graph(len(kept), adjacency), kept

    def complement(self) -> "Graph":
        full = self.vertex_mask
        return Graph(
            self.n_vertices,
            tuple(full ^ nbrs ^ (1 << v) for v, nbrs in enumerate(self.adjacency)),
        )

    def degeneracy(self) -> int:
        alive = self.vertex_mask
        result = 0
        while alive:
            v = min(iter_bits(alive), key=lambda u: popcount(self.adjacency[u] & alive))
            result = max(result, popcount(self.adjacency[v] & alive))
            alive ^= 1 << v
        return result


@dataclass(frozen=True)
class SetSystem:
    """A family of ``m`` subsets (bit vectors) of the ground set ``{0, ..., n_ground-1}``."""

    n_ground: int
    sets: Tuple[int, ...]

    def __post_init__(self):
        if self.n_ground < 0:
            raise InputError("Ground set size must be non-negative")
        for i, s in enumerate(self.sets):
            if s < 0 or s >> self.n_ground:
                raise InputError(f"Set {i} is not a subset of the ground set")

    @classmethod
    def from_sets(cls, n_ground: int, sets: Iterable[Iterable[int]]) -> "SetSystem":
        masks = []
        for members in sets:
            mask = 0
            for x in members:
                if not 0 <= x < n_ground:
                    raise InputError(f"Ground element {x} out of range [0, {n_ground})")
                mask |= 1 << x
            masks.append(mask)
        if not masks:
            raise InputError("A set system needs at least one set")
        return cls(n_ground, tuple(masks))

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def ground_mask(self) -> int:
        return full_mask(self.n_ground)

    @property
    def coverable(self) -> bool:
        union = 0
        for s in self.sets:
            union |= s
        return union == self.ground_mask

    @property
    def max_set_size(self) -> int:
        return max((popcount(s) for s in self.sets), default=0)

    def members(self, i: int) -> Tuple[int, ...]:
        return tuple(iter_bits(self.sets[i]))


@dataclass(frozen=True)
class DominationState:
    """Dominating-set sub-instance: some vertices already dominated, some already chosen.

    Chosen (``removed``) vertices leave the universe but the remaining vertices
    keep their whole neighborhood in ``graph``, so they may still dominate others.
    """

    graph: Graph
    dominated: int = 0
    removed: int = 0

    def __post_init__(self):
        for v in iter_bits(self.removed):
            if self.graph.closed(v) & ~self.dominated:
                raise InputError(f"Removed vertex {v} has undominated closed neighborhood")

    @property
    def universe(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.graph.vertex_mask & ~self.removed))

    @property
    def undominated(self) -> int:
        return self.graph.vertex_mask & ~self.dominated

    def choose(self, v: int) -> "DominationState":
        return DominationState(
            self.graph, self.dominated | self.graph.closed(v), self.removed | 1 << v
        )


class ProblemKind(str, Enum):
    VERTEX_COVER = "vertex-cover"
    INDEPENDENT_SET = "independent-set"
    CLIQUE = "clique"
    DOMINATING_SET = "dominating-set"
    SET_COVER = "set-cover"
    SET_PACKING = "set-packing"
    FEEDBACK_VERTEX_SET = "feedback-vertex-set"
    MAX_MINIMAL_VERTEX_COVER = "max-minimal-vertex-cover"
    MIN_INDEPENDENT_DOMINATING_SET = "min-independent-dominating-set"

    @property
    def is_graph(self) -> bool:
        return self not in (ProblemKind.SET_COVER, ProblemKind.SET_PACKING)

    @property
    def goal(self) -> Goal:
        return _GOALS[self]

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def supports_restriction(self) -> bool:
        return self in _RESTRICTABLE


_GOALS = {
    ProblemKind.VERTEX_COVER: Goal.MINIMIZE,
    ProblemKind.INDEPENDENT_SET: Goal.MAXIMIZE,
    ProblemKind.CLIQUE: Goal.MAXIMIZE,
    ProblemKind.DOMINATING_SET: Goal.MINIMIZE,
    ProblemKind.SET_COVER: Goal.MINIMIZE,
    ProblemKind.SET_PACKING: Goal.MAXIMIZE,
    ProblemKind.FEEDBACK_VERTEX_SET: Goal.MINIMIZE,
    ProblemKind.MAX_MINIMAL_VERTEX_COVER: Goal.MAXIMIZE,
    ProblemKind.MIN_INDEPENDENT_DOMINATING_SET: Goal.MINIMIZE,
}

_LABELS = {
    ProblemKind.VERTEX_COVER: "min vertex cover",
    ProblemKind.INDEPENDENT_SET: "max independent set",
    ProblemKind.CLIQUE: "max clique",
    ProblemKind.DOMINATING_SET: "min dominating set",
    ProblemKind.SET_COVER: "min set cover",
    ProblemKind.SET_PACKING: "max set packing",
    ProblemKind.FEEDBACK_VERTEX_SET: "min feedback vertex set",
    ProblemKind.MAX_MINIMAL_VERTEX_COVER: "max minimal vertex cover",
    ProblemKind.MIN_INDEPENDENT_DOMINATING_SET: "min independent dominating set",
}

_RESTRICTABLE = frozenset(
    {
        ProblemKind.VERTEX_COVER,
        ProblemKind.INDEPENDENT_SET,
        ProblemKind.CLIQUE,
        ProblemKind.DOMINATING_SET,
        ProblemKind.SET_COVER,
        ProblemKind.SET_PACKING,
    }
)


# ====================================================================================
# Feasibility predicates over bit masks
# ====================================================================================
def _covers_edges(adjacency: Sequence[int], full: int, mask: int) -> bool:
    outside = full ^ mask
    for v in iter_bits(outside):
        if adjacency[v] & outside:
            return False
    return True


def _independent(adjacency: Sequence[int], mask: int) -> bool:
    for v in iter_bits(mask):
        if adjacency[v] & mask:
            return False
    return True


def _clique(adjacency: Sequence[int], mask: int) -> bool:
    for v in iter_bits(mask):
        if (mask ^ (1 << v)) & ~adjacency[v]:
            return False
    return True


def _dominates(closed: Sequence[int], target: int, mask: int) -> bool:
    covered = 0
    for i in iter_bits(mask):
        covered |= closed[i]
    return target & ~covered == 0


def cycle_core(g: Graph, removed: int = 0) -> int:
    """Vertices left after repeatedly peeling vertices of degree at most one."""
    adjacency = g.adjacency
    alive = g.vertex_mask & ~removed
    degree = [popcount(adjacency[v] & alive) for v in range(g.n_vertices)]
    stack = [v for v in iter_bits(alive) if degree[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive >> v & 1:
            continue
        alive ^= 1 << v
        for u in iter_bits(adjacency[v] & alive):
            degree[u] -= 1
            if degree[u] <= 1:
                stack.append(u)
    return alive


def is_acyclic(g: Graph, removed: int = 0) -> bool:
    """True when ``g`` minus the vertices of ``removed`` is a forest."""
    return cycle_core(g, removed) == 0


def minimality_certificate(g: Graph, s: Solution) -> Optional[int]:
    """Lowest vertex whose removal keeps ``s`` a vertex cover, or None if ``s`` is minimal."""
    if s.mask >> g.n_vertices:
        raise InvalidSolution(f"{s!r} has vertices outside the graph")
    if not _covers_edges(g.adjacency, g.vertex_mask, s.mask):
        raise InvalidSolution(f"{s!r} is not a vertex cover")
    for v in iter_bits(s.mask):
        if g.adjacency[v] & ~s.mask == 0:
            return v
    return None


# ====================================================================================
# Problem construction
# ====================================================================================
def _graph_problem(kind: ProblemKind, g: Graph) -> SubsetProblem:
    adjacency = g.adjacency
    full = g.vertex_mask
    closed = tuple(g.closed(v) for v in range(g.n_vertices))
    restriction = None
    monotone = Monotone.NONE

    if kind is ProblemKind.VERTEX_COVER:

        def feasibility(mask):
            return _covers_edges(adjacency, full, mask)

        def restriction(v):
            child, kept = g.induced(full ^ (1 << v))
            return Restriction(_graph_problem(kind, child), v, kept)

        monotone = Monotone.UP

    elif kind is ProblemKind.INDEPENDENT_SET:

        def feasibility(mask):
            return _independent(adjacency, mask)

        def restriction(v):
            child, kept = g.induced(full & ~closed[v])
            return Restriction(_graph_problem(kind, child), v, kept)

        monotone = Monotone.DOWN

    elif kind is ProblemKind.CLIQUE:

        def feasibility(mask):
            return _clique(adjacency, mask)

        def restriction(v):
            child, kept = g.induced(adjacency[v])
            return Restriction(_graph_problem(kind, child), v, kept)

        monotone = Monotone.DOWN

    elif kind is ProblemKind.FEEDBACK_VERTEX_SET:

        def feasibility(mask):
            return is_acyclic(g, mask)

        monotone = Monotone.UP

    elif kind is ProblemKind.MAX_MINIMAL_VERTEX_COVER:

        def feasibility(mask):
            if not _covers_edges(adjacency, full, mask):
                return False
            # minimal iff every chosen vertex has a neighbor outside the cover
            for v in iter_bits(mask):
                if adjacency[v] & ~mask == 0:
                    return False
            return True

    elif kind is ProblemKind.MIN_INDEPENDENT_DOMINATING_SET:

        def feasibility(mask):
            return _independent(adjacency, mask) and _dominates(closed, full, mask)

    else:
        raise InputError(f"{kind.value} is not a plain graph problem")

    return SubsetProblem(
        label=kind.label,
        universe_size=g.n_vertices,
        goal=kind.goal,
        feasibility=feasibility,
        restriction=restriction,
        monotone=monotone,
        kind=kind,
        data=g,
    )


def _domination_problem(state: DominationState) -> SubsetProblem:
    universe = state.universe
    closed = tuple(state.graph.closed(v) for v in universe)
    target = state.undominated

    def feasibility(mask):
        return _dominates(closed, target, mask)

    def restriction(i):
        kept = tuple(j for j in range(len(universe)) if j != i)
        child = _domination_problem(state.choose(universe[i]))
        return Restriction(child, i, kept)

    return SubsetProblem(
        label=ProblemKind.DOMINATING_SET.label,
        universe_size=len(universe),
        goal=Goal.MINIMIZE,
        feasibility=feasibility,
        restriction=restriction,
        monotone=Monotone.UP,
        kind=ProblemKind.DOMINATING_SET,
        data=state,
    )


def _set_problem(kind: ProblemKind, system: SetSystem) -> SubsetProblem:
    sets = system.sets
    ground = system.ground_mask

    if kind is ProblemKind.SET_COVER:

        def feasibility(mask):
            union = 0
            for i in iter_bits(mask):
                union |= sets[i]
            return union == ground

        def restriction(i):
            residual = tuple(iter_bits(ground & ~sets[i]))
            kept = tuple(j for j in range(len(sets)) if j != i)
            child = SetSystem(
                len(residual), tuple(compress_mask(sets[j], residual) for j in kept)
            )
            return Restriction(_set_problem(kind, child), i, kept)

        monotone = Monotone.UP

    elif kind is ProblemKind.SET_PACKING:

        def feasibility(mask):
            union = 0
            for i in iter_bits(mask):
                if sets[i] & union:
                    return False
                union |= sets[i]
            return True

        def restriction(i):
            kept = tuple(
                j for j in range(len(sets)) if j != i and not sets[j] & sets[i]
            )
            child = SetSystem(system.n_ground, tuple(sets[j] for j in kept))
            return Restriction(_set_problem(kind, child), i, kept)

        monotone = Monotone.DOWN

    else:
        raise InputError(f"{kind.value} is not a set-system problem")

    return SubsetProblem(
        label=kind.label,
        universe_size=system.m,
        goal=kind.goal,
        feasibility=feasibility,
        restriction=restriction,
        monotone=monotone,
        kind=kind,
        data=system,
    )


def make_problem(
    kind: Union[ProblemKind, str], data: Union[Graph, SetSystem, DominationState]
) -> SubsetProblem:
    kind = ProblemKind(kind)
    if kind is ProblemKind.DOMINATING_SET:
        if isinstance(data, Graph):
            data = DominationState(data)
        if not isinstance(data, DominationState):
            raise InputError(f"{kind.value} expects a graph, got {type(data).__name__}")
        return _domination_problem(data)
    if kind.is_graph:
        if not isinstance(data, Graph):
            raise InputError(f"{kind.value} expects a graph, got {type(data).__name__}")
        return _graph_problem(kind, data)
    if not isinstance(data, SetSystem):
        raise InputError(f"{kind.value} expects a set system, got {type(data).__name__}")
    return _set_problem(kind, data)


def restrict(p: SubsetProblem, e: int) -> Restriction:
    """The sub-instance I(e): S' feasible for it iff S' + e is feasible for ``p``."""
    return p.restrict(e)


def graph_of(p: SubsetProblem) -> Graph:
    data = p.data
    if isinstance(data, DominationState):
        return data.graph
    if not isinstance(data, Graph):
        raise InputError(f"{p.label} is not a graph problem")
    return data
