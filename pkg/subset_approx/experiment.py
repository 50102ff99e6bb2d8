from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple
import logging
import time

import fsspec
import yaml
from pydantic import BaseModel, ValidationError

from .approx import ApproxOracle, default_oracle, get_oracle, measure_ratio
from .core import (
    Goal,
    Infeasible,
    Solution,
    SubsetProblem,
    brute_force_optimum,
    dualize,
)
from .dualschema import built_in_upper_bound, dual_approx
from .exceptions import InfeasibleInstance, InputError, SubsetApproxException
from .formats import Instance, load_instance
from .generate import exhaustive, generate
from .intersective import branch_solve, verify_intersective, verify_intersective_tree
from .models import (
    AggregateRow,
    BranchConfig,
    BranchOutcome,
    Command,
    ExperimentConfig,
    ExperimentTable,
    InstanceSource,
    RunRecord,
    RunSpec,
    SchemaConfig,
    SchemaPath,
    Verdict,
)
from .problems import Graph, SetSystem, make_problem
from .utils import one_based

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedInstance:
    instance_id: str
    data: Instance
    seed: Optional[int] = None


class ExperimentManager:
    """Loads an experiment matrix from a YAML file reachable through fsspec."""

    def __init__(self, config_path: str):
        self.config_path = config_path
        self.config = self.load_config()

    @staticmethod
    def create_default(config_path: str = "subset-approx.yaml") -> "ExperimentManager":
        return ExperimentManager(config_path)

    @staticmethod
    def validate_config(config_loaded) -> ExperimentConfig:
        return ExperimentConfig.model_validate(config_loaded)

    def retrieve_config_content(self) -> dict:
        with fsspec.open(self.config_path, "r") as file:
            config_content = yaml.safe_load(file)

        if not config_content:
            return {}

        self.validate_config(config_content)

        return config_content

    def load_config(self, handle_errors=False) -> ExperimentConfig:
        fs, path = fsspec.core.url_to_fs(self.config_path)
        try:
            if not fs.exists(path):
                logger.debug(
                    f"Experiment file not found at {self.config_path}. Creating template."
                )
                self.create_config_file()
            return self.validate_config(self.retrieve_config_content())
        except Exception as e:
            if handle_errors:
                logger.error(f"Error loading experiment file: {e}")
                return ExperimentConfig()
            raise

    def create_config_file(self):
        placeholder_config = {
            "jobs": 1,
            "instances": [
                {
                    "name": "gnp14",
                    "generator": {"model": "gnp", "n": 14, "p": 0.3, "seed": 1},
                    "count": 10,
                },
                {"name": "connected5", "exhaustive": {"n": 5, "connected": True}},
            ],
            "runs": [
                {
                    "command": "dual",
                    "problem": "dominating-set",
                    "epsilon": "1/4",
                    "verify": True,
                },
                {
                    "command": "check-intersective",
                    "problem": "vertex-cover",
                    "oracle": "matching",
                },
            ],
        }

        config_documentation = (
            "# Experiment matrix for `subset-approx experiment`.\n"
            "# Every run configuration is applied to every instance.\n"
            "# Instances come from a `path` (any fsspec URL), a seeded `generator`\n"
            "# or an `exhaustive` family of small graphs. Uncomment to use."
        )

        yaml_content = yaml.dump(placeholder_config, default_flow_style=False)
        commented_yaml = "\n".join(f"# {line}" for line in yaml_content.splitlines())

        with fsspec.open(self.config_path, "w") as config_file:
            config_file.write(config_documentation + "\n\n" + commented_yaml + "\n")

        logger.info(f"Experiment template created at {self.config_path}")

    def instances(self) -> List[LoadedInstance]:
        loaded = []
        for source in self.config.instances:
            loaded.extend(expand_source(source))
        return loaded


def expand_source(source: InstanceSource) -> List[LoadedInstance]:
    if source.path is not None:
        data = load_instance(source.path, source.kind)
        return [LoadedInstance(source.name or source.path, data)]
    if source.generator is not None:
        spec = source.generator
        base = source.name or spec.model.value
        out = []
        for i in range(source.count):
            seeded = spec.model_copy(update={"seed": spec.seed + i})
            out.append(LoadedInstance(f"{base}-{seeded.seed}", generate(seeded), seeded.seed))
        return out
    base = source.name or f"graphs{source.exhaustive.n}"
    return [
        LoadedInstance(f"{base}-{i}", g) for i, g in enumerate(exhaustive(source.exhaustive))
    ]


# ====================================================================================
# Single runs
# ====================================================================================
def _ratio(value: Optional[int], optimum: Optional[int]) -> Optional[Fraction]:
    if value is None or optimum is None:
        return None
    if optimum == 0:
        return Fraction(1) if value == 0 else None
    return Fraction(value, optimum)


def _text(value) -> Optional[str]:
    return None if value is None else str(value)


def _members(solution: Optional[Solution]) -> Optional[List[int]]:
    return None if solution is None else list(one_based(solution))


def _oracle(spec: RunSpec) -> ApproxOracle:
    return get_oracle(spec.oracle) if spec.oracle else default_oracle(spec.problem)


def _optimum(p: SubsetProblem, budget: int) -> Optional[int]:
    result = brute_force_optimum(p, budget)
    return None if isinstance(result, Infeasible) else result.value


def _check_feasible(p: SubsetProblem, solution: Optional[Solution]):
    if solution is not None and not p.is_feasible(solution):
        raise SubsetApproxException(f"Reported {solution!r} is infeasible for {p.label}")


def _solve(spec: RunSpec, p: SubsetProblem) -> dict:
    result = brute_force_optimum(p, spec.budget)
    if isinstance(result, Infeasible):
        return {"outcome": "infeasible"}
    return {
        "outcome": "optimal",
        "value": result.value,
        "solution": result.solution,
        "optimum": result.value,
    }


def _approx(spec: RunSpec, p: SubsetProblem) -> dict:
    oracle = _oracle(spec)
    solution = oracle.run(p)
    fields = {
        "oracle": oracle.name,
        "outcome": "approximate",
        "value": solution.value,
        "solution": solution,
        "guarantee": oracle.ratio(p),
    }
    if spec.verify:
        witness = measure_ratio(p, oracle, spec.budget)
        fields.update(
            optimum=witness.optimal_value,
            achieved_ratio=witness.achieved,
            verified=witness.within_bound,
        )
    return fields


def _branch(spec: RunSpec, p: SubsetProblem) -> dict:
    oracle = _oracle(spec)
    optimum = None
    if spec.k_offset is not None or spec.verify:
        optimum = _optimum(p, spec.budget)
        if optimum is None:
            raise InfeasibleInstance(f"{p.label} has no feasible solution")
    if spec.k is not None:
        k = spec.k
    else:
        k = optimum + spec.k_offset
        if k < 0:
            raise InputError(f"k = {optimum} {spec.k_offset:+d} is negative")
    cfg = BranchConfig(budget_k=k, node_cap=spec.node_cap, prune_enabled=spec.prune)
    report = branch_solve(p, oracle, cfg)
    fields = {
        "oracle": oracle.name,
        "k": k,
        "outcome": report.outcome.value,
        "solution": report.solution,
        "value": report.solution.value if report.solution is not None else None,
        "optimum": optimum,
        "nodes_expanded": report.nodes_expanded,
        "max_depth": report.max_depth,
        "max_arity": report.max_arity,
    }
    if optimum is not None and report.outcome is not BranchOutcome.NODE_CAP_EXCEEDED:
        if p.goal is Goal.MINIMIZE:
            expected = optimum <= k
            exact = not report.found or report.solution.value == optimum
        else:
            expected = optimum >= k
            exact = True
        fields["verified"] = report.found == expected and exact
    return fields


def _dual(spec: RunSpec, p: SubsetProblem) -> dict:
    oracle = _oracle(spec)
    hint = spec.k_upper
    if spec.auto_upper_bound and p.goal is Goal.MAXIMIZE:
        built_in = built_in_upper_bound(p)
        if built_in is not None:
            hint = built_in if hint is None else min(hint, built_in)
    cfg = SchemaConfig(
        epsilon=spec.epsilon,
        brute_cap=spec.brute_cap,
        k_upper_hint=hint,
        force_brute=spec.force_brute,
    )
    outcome = dual_approx(p, oracle, cfg)
    fields = {
        "oracle": oracle.name,
        "epsilon": spec.epsilon,
        "outcome": outcome.path.value,
        "path": outcome.path.value,
        "value": outcome.dual_value,
        "solution": outcome.dual_solution,
        "guarantee": outcome.guarantee,
    }
    if spec.verify and outcome.path is not SchemaPath.BUDGET_EXCEEDED:
        dual = dualize(p)
        _check_feasible(dual, outcome.dual_solution)
        optimum = _optimum(dual, spec.budget)
        value = outcome.dual_value
        if outcome.path is SchemaPath.BRUTE:
            verified = value == optimum
        elif p.goal is Goal.MINIMIZE:
            verified = value >= (1 - spec.epsilon) * optimum
        else:
            verified = value <= (1 + spec.epsilon) * optimum
        fields.update(
            optimum=optimum, achieved_ratio=_ratio(value, optimum), verified=verified
        )
    return fields


def _check_intersective(spec: RunSpec, p: SubsetProblem) -> dict:
    oracle = _oracle(spec)
    if spec.tree_depth is not None:
        tree = verify_intersective_tree(p, oracle, spec.tree_depth, spec.budget)
        if tree.counterexamples:
            verdict = Verdict.NOT_INTERSECTIVE
        elif tree.inconclusive:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.INTERSECTIVE
        return {
            "oracle": oracle.name,
            "k": spec.tree_depth,
            "outcome": verdict.value,
            "verdict": verdict.value,
            "nodes_expanded": tree.nodes_checked,
        }
    report = verify_intersective(p, oracle, spec.budget)
    return {
        "oracle": oracle.name,
        "outcome": report.verdict.value,
        "verdict": report.verdict.value,
        "solution": report.oracle_solution,
        "value": report.oracle_solution.value,
        "optimum": report.optimum_value,
        "safe": report.safe,
    }


_COMMANDS = {
    Command.SOLVE: _solve,
    Command.APPROX: _approx,
    Command.BRANCH: _branch,
    Command.DUAL: _dual,
    Command.CHECK_INTERSECTIVE: _check_intersective,
}


def _shape(data: Instance) -> dict:
    if isinstance(data, Graph):
        return {"n": data.n_vertices, "m": data.n_edges}
    if isinstance(data, SetSystem):
        return {"n": data.m, "m": data.m, "n_ground": data.n_ground}
    raise InputError(f"Unsupported instance type {type(data).__name__}")


def execute_run(
    spec: RunSpec,
    instance: LoadedInstance,
    timing: bool = False,
) -> RunRecord:
    """Run one configuration on one instance; errors propagate to the caller."""
    started = time.perf_counter()
    p = make_problem(spec.problem, instance.data)
    fields = _COMMANDS[spec.command](spec, p)
    if spec.command is not Command.DUAL:
        _check_feasible(p, fields.get("solution"))

    for key in ("epsilon", "guarantee", "achieved_ratio"):
        if key in fields:
            fields[key] = _text(fields[key])
    if "solution" in fields:
        fields["solution"] = _members(fields["solution"])

    record = RunRecord(
        problem=spec.problem.value,
        instance=instance.instance_id,
        command=spec.command,
        seed=instance.seed,
        **_shape(instance.data),
        **fields,
    )
    if timing:
        record.elapsed_ms = round((time.perf_counter() - started) * 1000, 3)
    return record


def failed_record(spec: RunSpec, instance: LoadedInstance, error: Exception) -> RunRecord:
    shape = {"n": 0}
    try:
        shape = _shape(instance.data)
    except InputError:
        pass
    return RunRecord(
        problem=spec.problem.value,
        instance=instance.instance_id,
        command=spec.command,
        seed=instance.seed,
        status="failed",
        error_code=type(error).__name__,
        description=str(error),
        **shape,
    )


def _guarded_run(task: Tuple[LoadedInstance, RunSpec], timing: bool) -> RunRecord:
    instance, spec = task
    try:
        return execute_run(spec, instance, timing)
    except (SubsetApproxException, ValidationError) as e:
        logger.warning(f"{spec.describe()} on {instance.instance_id} failed: {e}")
        return failed_record(spec, instance, e)
    except Exception as e:
        logger.exception(f"{spec.describe()} on {instance.instance_id} crashed: {e}")
        return failed_record(spec, instance, e)


# ====================================================================================
# Experiment matrix
# ====================================================================================
def aggregate(runs: Sequence[RunSpec], records: Sequence[RunRecord]) -> List[AggregateRow]:
    rows = []
    per_run = len(runs)
    for j, spec in enumerate(runs):
        mine = records[j::per_run] if per_run else []
        ratios = [float(Fraction(r.achieved_ratio)) for r in mine if r.achieved_ratio]
        rows.append(
            AggregateRow(
                configuration=spec.describe(),
                rows=len(mine),
                errors=sum(r.status == "failed" for r in mine),
                violations=sum(r.verified is False for r in mine),
                min_ratio=round(min(ratios), 6) if ratios else None,
                mean_ratio=round(sum(ratios) / len(ratios), 6) if ratios else None,
            )
        )
    return rows


def run_experiment(
    instances: Iterable[LoadedInstance],
    runs: Sequence[RunSpec],
    sink: Optional[str] = None,
    jobs: int = 1,
    fmt: str = "json",
    timing: bool = False,
) -> ExperimentTable:
    """Apply every run configuration to every instance.

    Rows are ordered instance-major whatever ``jobs`` is; per-row failures are kept
    in the table and do not stop the experiment.
    """
    tasks = list(product(instances, runs))
    logger.info(f"Running {len(tasks)} row(s) on {jobs} worker(s)")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda t: _guarded_run(t, timing), tasks))
    else:
        records = [_guarded_run(t, timing) for t in tasks]

    table = ExperimentTable(records=records, aggregates=aggregate(runs, records))
    if sink is not None:
        with fsspec.open(sink, "w") as f:
            f.write(format_table(table, fmt))
        logger.info(f"Wrote {len(records)} record(s) to {sink}")
    return table


# ====================================================================================
# Output
# ====================================================================================
def format_records(rows: Sequence[BaseModel], fmt: str = "json") -> str:
    if not rows:
        return ""
    if fmt == "json":
        return "".join(row.model_dump_json() + "\n" for row in rows)
    if fmt != "text":
        raise InputError(f"Unknown output format '{fmt}'")

    dumped = [row.model_dump(mode="json") for row in rows]
    columns = [c for c in dumped[0] if any(d.get(c) is not None for d in dumped)]

    def cell(value) -> str:
        if value is None:
            return "-"
        if isinstance(value, list):
            return ",".join(map(str, value)) or "{}"
        return str(value)

    cells = [[cell(d.get(c)) for c in columns] for d in dumped]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.extend(
        "  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells
    )
    return "\n".join(lines) + "\n"


def format_table(table: ExperimentTable, fmt: str = "json") -> str:
    out = format_records(table.records, fmt)
    if table.aggregates:
        if fmt == "text" and out:
            out += "\n"
        out += format_records(table.aggregates, fmt)
    return out
