"""Branching on intersective approximations, and the intersectivity verifier.

An oracle is intersective on an instance when its output shares at least one
element with some optimal solution. Branching on every element ``e`` of the
oracle output, with ``I(e)`` as child, then reaches an optimum within ``k``
levels whenever the oracle is intersective at every node on the way.
"""

from typing import List, Optional, Tuple
import logging

from .approx import ApproxOracle
from .core import (
    DEFAULT_EXHAUSTIVE_BUDGET,
    Goal,
    Infeasible,
    Restriction,
    Solution,
    SubsetProblem,
    brute_force_optimum,
    enumerate_optima,
)
from .exceptions import (
    BudgetExceeded,
    InfeasibleInstance,
    InputError,
    SubsetApproxException,
    UnsupportedRestriction,
)
from .models import (
    BranchConfig,
    BranchOutcome,
    BranchReport,
    IntersectivityReport,
    IntersectivityTreeReport,
    Verdict,
)

logger = logging.getLogger(__name__)

Path = Tuple[Restriction, ...]


def _lift(path: Path) -> Solution:
    solution = Solution()
    for step in reversed(path):
        solution = step.lift(solution)
    return solution


def _check_engine_input(p: SubsetProblem, oracle: ApproxOracle, goal: Goal):
    if p.goal is not goal:
        raise InputError(f"{p.label} is not a {goal.value}imization problem")
    if not p.supports_restriction:
        raise UnsupportedRestriction(f"{p.label} has no restriction operator")
    oracle.check(p)


class _Search:
    """Depth-first search over restriction paths with an explicit stack."""

    def __init__(self, p: SubsetProblem, oracle: ApproxOracle, cfg: BranchConfig):
        self.root = p
        self.oracle = oracle
        self.cfg = cfg
        self.minimize = p.goal is Goal.MINIMIZE
        self.nodes = 0
        self.max_depth = 0
        self.max_arity = 0
        self.pruned = 0
        self.found = 0
        self.best: Optional[Path] = None
        self.capped = False

    def _remaining(self, depth: int) -> int:
        remaining = self.cfg.budget_k - depth
        if self.minimize and self.best is not None:
            # only strictly smaller solutions are still of interest
            remaining = min(remaining, len(self.best) - 1 - depth)
        return remaining

    def _expand(self, problem: SubsetProblem, remaining: int) -> Optional[Solution]:
        try:
            chosen = self.oracle.run(problem)
        except InfeasibleInstance:
            self.pruned += 1
            return None
        if (
            self.minimize
            and self.cfg.prune_enabled
            and chosen.value > self.oracle.ratio(problem) * remaining
        ):
            logger.debug(f"Pruned node: oracle returned {chosen.value} > rho * {remaining}")
            self.pruned += 1
            return None
        return chosen

    def run(self) -> BranchReport:
        stack: List[Tuple[SubsetProblem, Path]] = [(self.root, ())]
        while stack:
            problem, path = stack.pop()
            depth = len(path)
            if self.minimize and self.best is not None and depth >= len(self.best):
                continue
            if self.nodes >= self.cfg.node_cap:
                self.capped = True
                break
            self.nodes += 1
            self.max_depth = max(self.max_depth, depth)

            if self.minimize:
                if problem.feasibility(0):
                    self.best = path
                    self.found += 1
                    continue
            elif depth == self.cfg.budget_k:
                if problem.feasibility(0):
                    self.best = path
                    self.found += 1
                    break
                continue

            remaining = self._remaining(depth)
            if remaining <= 0:
                continue
            chosen = self._expand(problem, remaining)
            if chosen is None or not chosen.value:
                continue
            self.max_arity = max(self.max_arity, chosen.value)
            children = [
                (step.problem, path + (step,))
                for step in (problem.restrict(e) for e in chosen)
            ]
            # lowest element is explored first
            stack.extend(reversed(children))

        return self._report()

    def _report(self) -> BranchReport:
        solution = None
        if self.best is not None:
            solution = _lift(self.best)
            if not self.root.is_feasible(solution):
                raise SubsetApproxException(
                    f"Lifted solution {solution!r} is infeasible for {self.root.label}"
                )
        if self.capped:
            outcome = BranchOutcome.NODE_CAP_EXCEEDED
            logger.warning(
                f"Node cap {self.cfg.node_cap} reached on {self.root.label}; "
                "result is inconclusive"
            )
        elif solution is not None:
            outcome = BranchOutcome.FOUND
        else:
            outcome = BranchOutcome.NO_INSTANCE
        return BranchReport(
            outcome=outcome,
            solution=solution,
            nodes_expanded=self.nodes,
            max_depth=self.max_depth,
            max_arity=self.max_arity,
            pruned=self.pruned,
            solutions_found=self.found,
        )


def branch_solve_min(
    p: SubsetProblem, oracle: ApproxOracle, cfg: BranchConfig
) -> BranchReport:
    """Find a solution of size at most ``cfg.budget_k``, the smallest reachable one.

    At each node the oracle output ``S`` is computed; if ``|S| > rho(I) * b`` with
    ``b`` the remaining budget the node cannot hold a solution of size ``b`` and is
    answered NO. Otherwise the search branches on ``I(e)`` for every ``e`` in ``S``.
    """
    _check_engine_input(p, oracle, Goal.MINIMIZE)
    return _Search(p, oracle, cfg).run()


def branch_solve_max(
    p: SubsetProblem, oracle: ApproxOracle, cfg: BranchConfig
) -> BranchReport:
    """Find a solution of size exactly ``cfg.budget_k`` by branching on oracle outputs."""
    _check_engine_input(p, oracle, Goal.MAXIMIZE)
    return _Search(p, oracle, cfg).run()


def branch_solve(p: SubsetProblem, oracle: ApproxOracle, cfg: BranchConfig) -> BranchReport:
    if p.goal is Goal.MINIMIZE:
        return branch_solve_min(p, oracle, cfg)
    return branch_solve_max(p, oracle, cfg)


def _judge(
    p: SubsetProblem,
    oracle_solution: Solution,
    budget: int,
    depth: int = 0,
) -> IntersectivityReport:
    try:
        optima = enumerate_optima(p, budget)
    except BudgetExceeded:
        return IntersectivityReport(
            instance=p.label,
            depth=depth,
            oracle_solution=oracle_solution,
            verdict=Verdict.INCONCLUSIVE,
            budget=budget,
        )
    hit = next((o for o in optima if o.intersects(oracle_solution)), None)
    contained = next((o for o in optima if oracle_solution.contains(o)), None)
    if hit is None:
        # an empty optimum inside an empty output still counts
        hit = contained
    return IntersectivityReport(
        instance=p.label,
        depth=depth,
        oracle_solution=oracle_solution,
        optima_checked=len(optima),
        optimum_value=optima[0].value if optima else None,
        intersecting_optimum=hit,
        safe=contained is not None,
        verdict=Verdict.INTERSECTIVE if hit is not None else Verdict.NOT_INTERSECTIVE,
        budget=budget,
    )


def verify_intersective(
    p: SubsetProblem, oracle: ApproxOracle, budget: int = DEFAULT_EXHAUSTIVE_BUDGET
) -> IntersectivityReport:
    """Check whether the oracle output meets some optimal solution of ``p``."""
    report = _judge(p, oracle.run(p), budget)
    if report.verdict is Verdict.NOT_INTERSECTIVE:
        logger.info(f"{oracle.name} is not intersective on {p.label}")
    return report


def verify_intersective_tree(
    p: SubsetProblem,
    oracle: ApproxOracle,
    depth: int,
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET,
) -> IntersectivityTreeReport:
    """Check intersectivity at every node of the branching tree that can still succeed.

    A node at level ``d`` matters when its optimum fits the remaining budget
    ``depth - d`` (at most it for minimization, at least it for maximization);
    only such nodes are checked and descended into.
    """
    if not p.supports_restriction:
        raise UnsupportedRestriction(f"{p.label} has no restriction operator")
    minimize = p.goal is Goal.MINIMIZE
    checked = 0
    inconclusive = 0
    counterexamples = []
    stack = [(p, 0)]
    while stack:
        problem, level = stack.pop()
        remaining = depth - level
        if remaining <= 0 or (minimize and problem.feasibility(0)):
            continue
        try:
            optimum = brute_force_optimum(problem, budget)
        except BudgetExceeded:
            inconclusive += 1
            continue
        if isinstance(optimum, Infeasible):
            continue
        if (optimum.value > remaining) if minimize else (optimum.value < remaining):
            continue

        checked += 1
        report = _judge(problem, oracle.run(problem), budget, level)
        if report.verdict is Verdict.NOT_INTERSECTIVE:
            logger.warning(
                f"{oracle.name} is not intersective at depth {level} "
                f"({report.oracle_solution!r})"
            )
            counterexamples.append(report)
        for e in reversed(report.oracle_solution.members):
            stack.append((problem.restrict(e).problem, level + 1))

    return IntersectivityTreeReport(
        nodes_checked=checked, inconclusive=inconclusive, counterexamples=counterexamples
    )
