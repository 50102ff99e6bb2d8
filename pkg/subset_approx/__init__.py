try:
    from ._version import __version__
except ImportError:
    # Fallback when using the package in dev mode without installing
    # in editable mode with pip.
    import warnings

    warnings.warn("Importing 'subset_approx' outside a proper installation.")
    __version__ = "dev"

from .core import (
    EvaluatedSolution,
    Goal,
    Infeasible,
    Monotone,
    Restriction,
    Solution,
    SubsetProblem,
    brute_force_optimum,
    complement,
    dualize,
    enumerate_optima,
    is_feasible,
)
from .problems import DominationState, Graph, ProblemKind, SetSystem, make_problem, restrict
from .approx import ApproxOracle, available_oracles, default_oracle, get_oracle
from .intersective import (
    branch_solve,
    branch_solve_max,
    branch_solve_min,
    verify_intersective,
    verify_intersective_tree,
)
from .dualschema import built_in_upper_bound, dual_approx, threshold_max, threshold_min

__all__ = [
    "__version__",
    "ApproxOracle",
    "DominationState",
    "EvaluatedSolution",
    "Goal",
    "Graph",
    "Infeasible",
    "Monotone",
    "ProblemKind",
    "Restriction",
    "SetSystem",
    "Solution",
    "SubsetProblem",
    "available_oracles",
    "branch_solve",
    "branch_solve_max",
    "branch_solve_min",
    "brute_force_optimum",
    "built_in_upper_bound",
    "complement",
    "default_oracle",
    "dual_approx",
    "dualize",
    "enumerate_optima",
    "get_oracle",
    "is_feasible",
    "make_problem",
    "restrict",
    "threshold_max",
    "threshold_min",
    "verify_intersective",
    "verify_intersective_tree",
]
