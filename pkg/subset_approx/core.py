"""Problem-agnostic foundations for subset problems.

A subset problem exposes a universe ``{0, ..., n-1}`` of selectable elements, a
feasibility predicate over subsets and a goal. Subsets are encoded as integer
bit masks: bit ``i`` set means element ``i`` is selected.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Iterable, Iterator, List, Optional, Tuple, Union
import logging

from .exceptions import BudgetExceeded, InputError, UnsupportedRestriction
from .utils import full_mask, iter_bits, mask_of, popcount, remap_mask

logger = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_BUDGET = 64


class Goal(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"

    def flipped(self) -> "Goal":
        return Goal.MAXIMIZE if self is Goal.MINIMIZE else Goal.MINIMIZE


class Monotone(str, Enum):
    """Closure of the feasible family: under supersets (up) or subsets (down)."""

    UP = "up"
    DOWN = "down"
    NONE = "none"

    def flipped(self) -> "Monotone":
        if self is Monotone.UP:
            return Monotone.DOWN
        if self is Monotone.DOWN:
            return Monotone.UP
        return Monotone.NONE


@dataclass(frozen=True, order=True)
class Solution:
    mask: int = 0

    @classmethod
    def of(cls, members: Iterable[int]) -> "Solution":
        members = list(members)
        if any(m < 0 for m in members):
            raise InputError(f"Negative element id in {members}")
        return cls(mask_of(members))

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    @property
    def value(self) -> int:
        return popcount(self.mask)

    def intersects(self, other: "Solution") -> bool:
        return bool(self.mask & other.mask)

    def contains(self, other: "Solution") -> bool:
        return other.mask & ~self.mask == 0

    def __contains__(self, element: int) -> bool:
        return bool(self.mask >> element & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return self.value

    def __repr__(self):
        return "Solution({" + ", ".join(map(str, self.members)) + "})"


@dataclass(frozen=True)
class EvaluatedSolution:
    solution: Solution
    value: int
    optimal: bool = False


@dataclass(frozen=True)
class Infeasible:
    """No subset of the universe is feasible."""

    label: str


@dataclass(frozen=True)
class Restriction:
    """A child instance I(e) together with the map back to its parent.

    ``kept[i]`` is the parent index of child element ``i``.
    """

    problem: "SubsetProblem"
    element: int
    kept: Tuple[int, ...]

    def lift(self, solution: Solution) -> Solution:
        return Solution(remap_mask(solution.mask, self.kept) | 1 << self.element)


@dataclass(frozen=True, eq=False)
class SubsetProblem:
    label: str
    universe_size: int
    goal: Goal
    feasibility: Callable[[int], bool] = field(repr=False)
    restriction: Optional[Callable[[int], Restriction]] = field(
        default=None, repr=False
    )
    monotone: Monotone = Monotone.NONE
    kind: Any = None
    data: Any = field(default=None, repr=False)
    dual_of: Optional["SubsetProblem"] = field(default=None, repr=False)

    @property
    def full_mask(self) -> int:
        return full_mask(self.universe_size)

    @property
    def is_dual(self) -> bool:
        return self.dual_of is not None

    @property
    def supports_restriction(self) -> bool:
        return self.restriction is not None

    def check(self, solution: Solution) -> Solution:
        if solution.mask < 0 or solution.mask >> self.universe_size:
            raise InputError(
                f"{solution!r} has members outside the universe of size "
                f"{self.universe_size} of {self.label}"
            )
        return solution

    def is_feasible(self, solution: Union[Solution, int]) -> bool:
        if isinstance(solution, int):
            solution = Solution(solution)
        return bool(self.feasibility(self.check(solution).mask))

    def restrict(self, element: int) -> Restriction:
        if self.restriction is None:
            raise UnsupportedRestriction(f"{self.label} has no restriction operator")
        if not 0 <= element < self.universe_size:
            raise InputError(
                f"Element {element} outside the universe of size {self.universe_size}"
            )
        return self.restriction(element)


def is_feasible(p: SubsetProblem, s: Union[Solution, int]) -> bool:
    return p.is_feasible(s)


def complement(p: SubsetProblem, s: Solution) -> Solution:
    return Solution(p.full_mask ^ p.check(s).mask)


def dualize(p: SubsetProblem) -> SubsetProblem:
    """Build D-Π: same universe, inverse goal, S feasible iff its complement is.

    Dualizing a dual hands back the original problem.
    """
    if p.dual_of is not None:
        return p.dual_of
    full = p.full_mask
    feasible = p.feasibility
    return SubsetProblem(
        label=f"D-{p.label}",
        universe_size=p.universe_size,
        goal=p.goal.flipped(),
        feasibility=lambda mask: feasible(full ^ mask),
        monotone=p.monotone.flipped(),
        kind=p.kind,
        data=p.data,
        dual_of=p,
    )


def _check_budget(p: SubsetProblem, budget: int):
    if p.universe_size > budget:
        raise BudgetExceeded(p.universe_size, budget)


def _masks_of_size(n: int, r: int) -> Iterator[int]:
    # lexicographic over sorted member tuples
    bits = [1 << i for i in range(n)]
    for combo in combinations(range(n), r):
        yield sum(bits[i] for i in combo)


def _first_feasible(p: SubsetProblem, r: int) -> Optional[int]:
    feasible = p.feasibility
    for mask in _masks_of_size(p.universe_size, r):
        if feasible(mask):
            return mask
    return None


def _optimal_level(p: SubsetProblem) -> Optional[Tuple[int, int]]:
    """Return (cardinality, first feasible mask) of the optimum, or None."""
    n = p.universe_size
    if p.goal is Goal.MINIMIZE:
        for r in range(n + 1):
            mask = _first_feasible(p, r)
            if mask is not None:
                return r, mask
        return None

    if p.monotone is Monotone.DOWN:
        # hereditary family: the first empty level ends the scan
        best = None
        for r in range(n + 1):
            mask = _first_feasible(p, r)
            if mask is None:
                break
            best = (r, mask)
        return best

    for r in range(n, -1, -1):
        mask = _first_feasible(p, r)
        if mask is not None:
            return r, mask
    return None


def brute_force_optimum(
    p: SubsetProblem, budget: int = DEFAULT_EXHAUSTIVE_BUDGET
) -> Union[EvaluatedSolution, Infeasible]:
    """Exact optimum by enumerating subsets in (cardinality, lexicographic) order.

    Ties between optima are broken towards the first subset in that order.
    """
    _check_budget(p, budget)
    level = _optimal_level(p)
    if level is None:
        logger.debug(f"No feasible subset for {p.label}")
        return Infeasible(p.label)
    value, mask = level
    return EvaluatedSolution(solution=Solution(mask), value=value, optimal=True)


def enumerate_optima(
    p: SubsetProblem, budget: int = DEFAULT_EXHAUSTIVE_BUDGET
) -> List[Solution]:
    _check_budget(p, budget)
    level = _optimal_level(p)
    if level is None:
        return []
    feasible = p.feasibility
    return [
        Solution(mask)
        for mask in _masks_of_size(p.universe_size, level[0])
        if feasible(mask)
    ]


def optimum_value(
    p: SubsetProblem, budget: int = DEFAULT_EXHAUSTIVE_BUDGET
) -> Optional[int]:
    result = brute_force_optimum(p, budget)
    if isinstance(result, Infeasible):
        return None
    return result.value


def restriction_counterexample(p: SubsetProblem, element: int) -> Optional[int]:
    """Return a child mask S' violating "S' feasible for I(e) iff S' + e feasible", if any."""
    child = p.restrict(element)
    for mask in range(1 << child.problem.universe_size):
        lifted = child.lift(Solution(mask))
        if child.problem.feasibility(mask) != p.feasibility(lifted.mask):
            return mask
    return None
