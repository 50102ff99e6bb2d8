from fractions import Fraction
from typing import Annotated, List, Literal, Optional
from enum import Enum

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    WithJsonSchema,
    field_validator,
    model_validator,
)

from .core import Solution
from .problems import ProblemKind
from .utils import to_fraction

Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(str, return_type=str, when_used="json"),
    WithJsonSchema({"type": "string", "description": "Exact rational, e.g. '1/4'"}),
]

SolutionField = Annotated[
    Solution,
    PlainSerializer(lambda s: list(s.members), return_type=list, when_used="json"),
    WithJsonSchema({"type": "array", "items": {"type": "integer"}}),
]


class _Model(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


# ====================================================================================
# Branching engine
# ====================================================================================
class BranchConfig(_Model):
    """Parameters of the branching engine."""

    budget_k: int = Field(
        ...,
        ge=0,
        title="Standard parameter",
        description="Solution size bound k (at most k for minimization, exactly k for maximization)",
    )
    node_cap: int = Field(
        default=1_000_000,
        ge=1,
        title="Node cap",
        description="Maximum number of search-tree nodes expanded before giving up",
    )
    prune_enabled: bool = Field(
        default=True,
        title="Size-based pruning",
        description="Answer NO at a node when the oracle output exceeds rho times the remaining budget",
    )


class BranchOutcome(str, Enum):
    FOUND = "found"
    NO_INSTANCE = "no-instance"
    NODE_CAP_EXCEEDED = "node-cap-exceeded"


class BranchReport(_Model):
    outcome: BranchOutcome
    solution: Optional[SolutionField] = None
    nodes_expanded: int = 0
    max_depth: int = 0
    max_arity: int = 0
    pruned: int = 0
    solutions_found: int = 0

    @property
    def found(self) -> bool:
        return self.outcome is BranchOutcome.FOUND


class Verdict(str, Enum):
    INTERSECTIVE = "intersective"
    NOT_INTERSECTIVE = "not-intersective"
    INCONCLUSIVE = "inconclusive"


class IntersectivityReport(_Model):
    """Outcome of checking "A(I) meets some optimum" on one instance."""

    instance: str = ""
    depth: int = 0
    oracle_solution: SolutionField
    optima_checked: int = 0
    optimum_value: Optional[int] = None
    intersecting_optimum: Optional[SolutionField] = None
    safe: bool = Field(
        default=False,
        description="Some optimum is contained in the oracle output",
    )
    verdict: Verdict
    budget: Optional[int] = None

    @model_validator(mode="after")
    def _witness_present(self):
        if self.verdict is Verdict.INTERSECTIVE:
            hit = self.intersecting_optimum
            if hit is None or not (
                hit.intersects(self.oracle_solution) or self.oracle_solution.contains(hit)
            ):
                raise ValueError("An intersective verdict needs an intersecting optimum")
        return self


class IntersectivityTreeReport(_Model):
    nodes_checked: int = 0
    inconclusive: int = 0
    counterexamples: List[IntersectivityReport] = []

    @property
    def intersective(self) -> bool:
        return not self.counterexamples


# ====================================================================================
# Dual approximation schema
# ====================================================================================
class SchemaConfig(_Model):
    epsilon: Rational = Field(
        ...,
        title="Epsilon",
        description="Target accuracy in (0, 1]",
    )
    brute_cap: int = Field(
        default=20,
        ge=1,
        title="Exhaustive cap",
        description="Largest universe solved exactly when the approximation test fails",
    )
    k_upper_hint: Optional[int] = Field(
        default=None,
        ge=0,
        title="Upper bound on the optimum",
        description="Known upper bound on opt of a maximization problem",
    )
    force_brute: bool = Field(
        default=False,
        description="Prefer exhaustive search whenever the universe is within brute_cap",
    )

    @field_validator("epsilon")
    @classmethod
    def _epsilon_range(cls, value):
        if not 0 < value <= 1:
            raise ValueError(f"epsilon must lie in (0, 1], got {value}")
        return value


class SchemaPath(str, Enum):
    APPROX = "approx"
    BRUTE = "brute"
    BUDGET_EXCEEDED = "budget-exceeded"


class SchemaDiagnostics(_Model):
    n: int
    k_prime: int
    rho: Rational
    threshold: Rational
    k_surrogate: int = Field(description="Observable upper bound used in place of opt")
    k_dual_prime: int = Field(description="n - k', value of the complemented solution")
    k_dual_bound: int = Field(description="n - k_surrogate, a lower bound on n - opt")
    test_passed: bool


class SchemaOutcome(_Model):
    path: SchemaPath
    dual_solution: Optional[SolutionField] = None
    dual_value: Optional[int] = None
    guarantee: Optional[Rational] = None
    diagnostics: SchemaDiagnostics


class RatioWitness(_Model):
    instance: str
    oracle: str
    oracle_value: int
    optimal_value: int
    declared: Rational
    achieved: Optional[Rational] = None
    within_bound: bool


# ====================================================================================
# Instance generation and reporting
# ====================================================================================
class GenModel(str, Enum):
    GNP = "gnp"
    SETS = "sets"


class GenSpec(_Model):
    """Random instance recipe; identical specs give identical instances."""

    model: GenModel
    n: int = Field(default=0, ge=0, description="Vertex count (gnp)")
    p: float = Field(default=0.5, ge=0, le=1, description="Edge probability (gnp)")
    n_ground: int = Field(default=0, ge=0, description="Ground set size (sets)")
    m: int = Field(default=0, ge=0, description="Number of sets (sets)")
    min_set_size: int = Field(default=1, ge=0)
    max_set_size: int = Field(default=3, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _sets_shape(self):
        if self.model is GenModel.SETS:
            if self.m < 1 or self.n_ground < 1:
                raise ValueError("A random set system needs m >= 1 and n_ground >= 1")
            if not self.min_set_size <= self.max_set_size <= self.n_ground:
                raise ValueError(
                    "Set sizes must satisfy min_set_size <= max_set_size <= n_ground"
                )
        return self


class Command(str, Enum):
    SOLVE = "solve"
    APPROX = "approx"
    BRANCH = "branch"
    DUAL = "dual"
    CHECK_INTERSECTIVE = "check-intersective"


class RunRecord(BaseModel):
    """One (instance, configuration) row of the report stream."""

    problem: str
    instance: str
    n: int
    m: Optional[int] = None
    n_ground: Optional[int] = None
    command: Command
    oracle: Optional[str] = None
    k: Optional[int] = None
    epsilon: Optional[str] = None
    seed: Optional[int] = None
    status: Literal["success", "failed"] = "success"
    outcome: Optional[str] = None
    value: Optional[int] = None
    solution: Optional[List[int]] = Field(
        default=None, description="Solution in the input's 1-based numbering"
    )
    optimum: Optional[int] = None
    achieved_ratio: Optional[str] = None
    guarantee: Optional[str] = None
    path: Optional[str] = None
    verdict: Optional[str] = None
    verified: Optional[bool] = None
    safe: Optional[bool] = None
    nodes_expanded: Optional[int] = None
    max_depth: Optional[int] = None
    max_arity: Optional[int] = None
    error_code: Optional[str] = None
    description: Optional[str] = None
    elapsed_ms: Optional[float] = None


class AggregateRow(BaseModel):
    configuration: str
    rows: int
    errors: int
    violations: int
    min_ratio: Optional[float] = None
    mean_ratio: Optional[float] = None


class ErrorRecord(BaseModel):
    """Failure payload for commands that abort before producing a run record."""

    status: Literal["failed"] = "failed"
    command: str
    description: str
    error_code: str = Field(
        title="Error code",
        description="Name of the raised exception",
    )


# ====================================================================================
# Experiment matrix
# ====================================================================================
class ExhaustiveSpec(_Model):
    n: int = Field(..., ge=0, le=6)
    connected: bool = False
    min_edges: int = Field(default=0, ge=0)


class InstanceSource(_Model):
    """One entry under ``instances``: a file, a generator or an exhaustive family."""

    name: Optional[str] = None
    path: Optional[str] = None
    kind: Literal["graph", "sets"] = "graph"
    generator: Optional[GenSpec] = None
    count: int = Field(default=1, ge=0)
    exhaustive: Optional[ExhaustiveSpec] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [x is not None for x in (self.path, self.generator, self.exhaustive)]
        if sum(given) != 1:
            raise ValueError("Give exactly one of path, generator or exhaustive")
        return self


class RunSpec(_Model):
    command: Command
    problem: ProblemKind
    oracle: Optional[str] = None
    k: Optional[int] = Field(default=None, ge=0)
    k_offset: Optional[int] = Field(
        default=None, description="Branch with k = opt + k_offset (needs brute force)"
    )
    epsilon: Optional[Rational] = None
    brute_cap: int = Field(default=20, ge=1)
    force_brute: bool = False
    k_upper: Optional[int] = Field(default=None, ge=0)
    auto_upper_bound: bool = True
    node_cap: int = Field(default=1_000_000, ge=1)
    prune: bool = True
    budget: int = Field(default=24, ge=0, description="Exhaustive search budget")
    tree_depth: Optional[int] = Field(default=None, ge=0)
    verify: bool = False

    @model_validator(mode="after")
    def _command_arguments(self):
        if self.command is Command.BRANCH and (self.k is None) == (self.k_offset is None):
            raise ValueError("branch needs exactly one of k or k_offset")
        if self.command is Command.DUAL and self.epsilon is None:
            raise ValueError("dual needs epsilon")
        return self

    def describe(self) -> str:
        parts = [self.command.value, self.problem.value]
        if self.oracle:
            parts.append(self.oracle)
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.k_offset is not None:
            parts.append(f"k=opt{self.k_offset:+d}")
        if self.epsilon is not None:
            parts.append(f"eps={self.epsilon}")
        if not self.prune:
            parts.append("no-prune")
        if self.force_brute:
            parts.append("force-brute")
        return " ".join(parts)


class ExperimentConfig(_Model):
    """A list of instance sources crossed with a list of run configurations"""

    instances: List[InstanceSource] = []
    runs: List[RunSpec] = []
    jobs: int = Field(default=1, ge=1)


class ExperimentTable(BaseModel):
    records: List[RunRecord] = []
    aggregates: List[AggregateRow] = []
