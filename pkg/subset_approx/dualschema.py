"""Approximation schema for dual problems D-Π.

For an instance of size ``n`` whose primal optimum is ``k``, the complement of a
primal ``rho``-approximate solution of size ``k'`` is a dual solution of size
``n - k'``. That complement is already within ``1 - eps`` (or ``1 + eps``) of the
dual optimum once ``n`` is large compared to ``k``; every other instance is
small enough in ``n`` to be solved exhaustively.

The thresholds on ``n / k`` are:

* primal minimization: ``(rho - 1 + eps) / eps``
* primal maximization: ``(1 - rho + eps) / eps``, which never exceeds ``2 / eps``

The maximization form comes from solving ``(n - rho * k) / (n - k) <= 1 + eps`` for
``n / k``. It is sometimes quoted as ``(1 + rho + eps) / eps``; that form does not follow
from the inequality and would not stay below ``2 / eps``.

The unknown ``k`` is replaced by an observable upper bound, which only makes
the test stricter.
"""

from fractions import Fraction
from math import ceil
from typing import Optional, Union
import logging

from .approx import ApproxOracle, maximal_matching
from .core import Goal, Infeasible, SubsetProblem, brute_force_optimum, complement, dualize
from .exceptions import InfeasibleInstance, InputError
from .models import SchemaConfig, SchemaDiagnostics, SchemaOutcome, SchemaPath
from .problems import Graph, ProblemKind
from .utils import to_fraction

logger = logging.getLogger(__name__)

Number = Union[Fraction, int, str]


def _epsilon(epsilon: Number) -> Fraction:
    epsilon = to_fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
    return epsilon


def threshold_min(rho: Number, epsilon: Number) -> Fraction:
    """Smallest ``n / k`` for which the complement of a min-side solution suffices."""
    rho, epsilon = to_fraction(rho), _epsilon(epsilon)
    if rho < 1:
        raise InputError(f"A minimization ratio must be at least 1, got {rho}")
    return (rho - 1 + epsilon) / epsilon


def threshold_max(rho: Number, epsilon: Number) -> Fraction:
    """Smallest ``n / k`` for which the complement of a max-side solution suffices."""
    rho, epsilon = to_fraction(rho), _epsilon(epsilon)
    if not 0 < rho <= 1:
        raise InputError(f"A maximization ratio must lie in (0, 1], got {rho}")
    return min((1 - rho + epsilon) / epsilon, 2 / epsilon)


def built_in_upper_bound(p: SubsetProblem) -> Optional[int]:
    """A cheap upper bound on the optimum of a maximization instance, when one is known.

    Independent set: ``n`` minus a maximal matching, since every matching edge
    keeps one endpoint out. Clique: degeneracy plus one.
    """
    if p.is_dual or not isinstance(p.data, Graph):
        return None
    g = p.data
    if p.kind is ProblemKind.INDEPENDENT_SET:
        return g.n_vertices - len(maximal_matching(g))
    if p.kind is ProblemKind.CLIQUE:
        return min(g.n_vertices, g.degeneracy() + 1)
    return None


def _surrogate(p: SubsetProblem, k_prime: int, rho: Fraction, hint: Optional[int]) -> int:
    if p.goal is Goal.MINIMIZE:
        return k_prime
    bound = min(p.universe_size, ceil(Fraction(k_prime) / rho))
    if hint is not None:
        bound = min(bound, hint)
    return bound


def dual_approx(p: SubsetProblem, oracle: ApproxOracle, cfg: SchemaConfig) -> SchemaOutcome:
    """Solve D-Π approximately on the primal instance ``p``.

    Takes the complement of the oracle output when the size test passes,
    otherwise falls back to exhaustive search of D-Π within ``cfg.brute_cap``.
    """
    if p.is_dual:
        raise InputError(f"{p.label} is already a dual problem; pass the primal instance")
    oracle.check(p)

    n = p.universe_size
    solution = oracle.run(p)
    if not p.is_feasible(solution):
        raise InputError(f"Oracle '{oracle.name}' returned an infeasible {solution!r}")
    k_prime = solution.value
    rho = oracle.ratio(p)
    epsilon = cfg.epsilon
    if p.goal is Goal.MINIMIZE:
        threshold = threshold_min(rho, epsilon)
        guarantee = 1 - epsilon
    else:
        threshold = threshold_max(rho, epsilon)
        guarantee = 1 + epsilon

    k_surrogate = _surrogate(p, k_prime, rho, cfg.k_upper_hint)
    passed = n >= threshold * k_surrogate
    diagnostics = SchemaDiagnostics(
        n=n,
        k_prime=k_prime,
        rho=rho,
        threshold=threshold,
        k_surrogate=k_surrogate,
        k_dual_prime=n - k_prime,
        k_dual_bound=n - k_surrogate,
        test_passed=passed,
    )
    logger.debug(
        f"Schema test on {p.label}: n={n}, threshold={threshold}, "
        f"surrogate={k_surrogate}, passed={passed}"
    )

    within_cap = n <= cfg.brute_cap
    if passed and not (cfg.force_brute and within_cap):
        return SchemaOutcome(
            path=SchemaPath.APPROX,
            dual_solution=complement(p, solution),
            dual_value=n - k_prime,
            guarantee=guarantee,
            diagnostics=diagnostics,
        )

    if not within_cap:
        logger.warning(
            f"{p.label}: size test failed and n={n} exceeds the exhaustive cap {cfg.brute_cap}"
        )
        return SchemaOutcome(path=SchemaPath.BUDGET_EXCEEDED, diagnostics=diagnostics)

    dual = dualize(p)
    result = brute_force_optimum(dual, cfg.brute_cap)
    if isinstance(result, Infeasible):
        raise InfeasibleInstance(f"{dual.label} has no feasible solution")
    logger.info(f"{dual.label} solved exhaustively with value {result.value}")
    return SchemaOutcome(
        path=SchemaPath.BRUTE,
        dual_solution=result.solution,
        dual_value=result.value,
        guarantee=Fraction(1),
        diagnostics=diagnostics,
    )
