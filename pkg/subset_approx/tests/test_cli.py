import io
import json
import logging

import fsspec
import pytest

from subset_approx.cli import (
    EXIT_BUDGET,
    EXIT_INPUT,
    EXIT_NO,
    EXIT_OK,
    build_parser,
    exit_code_for,
    exit_code_for_error,
    main,
)
from subset_approx.exceptions import (
    BudgetExceeded,
    InfeasibleInstance,
    ParseError,
    UnsupportedRestriction,
)
from subset_approx.models import RunRecord


@pytest.fixture(autouse=True)
def reset_cli_logger():
    yield
    logger = logging.getLogger("subset_approx")
    logger.handlers.clear()
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def path_file(memfs):
    memfs.pipe("/subset-approx/path.col", b"p edge 3 2\ne 1 2\ne 2 3\n")
    return "memory://subset-approx/path.col"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


# ===============================
# Exit codes
# ===============================
@pytest.mark.parametrize(
    "error, code",
    [
        (BudgetExceeded(30, 24), EXIT_BUDGET),
        (InfeasibleInstance("none"), EXIT_NO),
        (ParseError("bad"), EXIT_INPUT),
        (UnsupportedRestriction("fvs"), EXIT_INPUT),
        (RuntimeError("other"), EXIT_NO),
    ],
)
def test_exit_code_for_error(error, code):
    assert exit_code_for_error(error) == code


@pytest.mark.parametrize(
    "fields, code",
    [
        ({"outcome": "optimal"}, EXIT_OK),
        ({"outcome": "infeasible"}, EXIT_NO),
        ({"outcome": "no-instance"}, EXIT_NO),
        ({"outcome": "not-intersective"}, EXIT_NO),
        ({"outcome": "node-cap-exceeded"}, EXIT_BUDGET),
        ({"outcome": "budget-exceeded"}, EXIT_BUDGET),
        ({"status": "failed"}, EXIT_INPUT),
    ],
)
def test_exit_code_for_record(fields, code):
    record = RunRecord(problem="clique", instance="x", n=1, command="solve", **fields)
    assert exit_code_for(record) == code


# ===============================
# Instance commands
# ===============================
def test_solve(triangle_file):
    code, out = run("solve", "--problem", "vertex-cover", triangle_file)
    assert code == EXIT_OK
    [record] = records(out)
    assert record["instance"] == triangle_file
    assert record["value"] == 2
    assert record["solution"] == [1, 2]


def test_global_options_before_or_after_subcommand(triangle_file):
    before = run("--problem", "vertex-cover", "solve", triangle_file)
    after = run("solve", triangle_file, "--problem", "vertex-cover")
    assert before == after
    assert before[0] == EXIT_OK


def test_solve_from_stdin(monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("4 2\n1 2\n3 4\n"))
    code, out = run("solve", "--problem", "set-cover", "-")
    assert code == EXIT_OK
    assert records(out)[0]["solution"] == [1, 2]


def test_solve_budget_exceeded(triangle_file):
    code, out = run("solve", "--problem", "vertex-cover", "--budget", "2", triangle_file)
    assert code == EXIT_BUDGET
    [record] = records(out)
    assert record["status"] == "failed"
    assert record["error_code"] == "BudgetExceeded"


def test_solve_infeasible(memfs):
    memfs.pipe("/subset-approx/gap.txt", b"3 2\n1\n2\n")
    code, out = run("solve", "--problem", "set-cover", "memory://subset-approx/gap.txt")
    assert code == EXIT_NO
    assert records(out)[0]["outcome"] == "infeasible"


def test_approx_verify(path_file):
    code, out = run("approx", "--problem", "independent-set", "--verify", path_file)
    assert code == EXIT_OK
    [record] = records(out)
    assert record["oracle"] == "greedy-mis"
    assert record["solution"] == [1, 3]
    assert record["verified"] is True


def test_branch(triangle_file):
    code, out = run("branch", "--problem", "vertex-cover", "--k", "2", triangle_file)
    assert code == EXIT_OK
    assert records(out)[0]["outcome"] == "found"

    code, out = run("branch", "--problem", "vertex-cover", "--k", "1", triangle_file)
    assert code == EXIT_NO
    assert records(out)[0]["outcome"] == "no-instance"


def test_branch_node_cap(triangle_file):
    code, out = run(
        "branch", "--problem", "vertex-cover", "--k", "2", "--node-cap", "1", triangle_file
    )
    assert code == EXIT_BUDGET
    assert records(out)[0]["outcome"] == "node-cap-exceeded"


def test_branch_unsupported(triangle_file):
    code, out = run("branch", "--problem", "feedback-vertex-set", "--k", "1", triangle_file)
    assert code == EXIT_INPUT
    assert records(out)[0]["error_code"] == "UnsupportedRestriction"


def test_branch_needs_k(triangle_file):
    with pytest.raises(SystemExit):
        run("branch", "--problem", "vertex-cover", triangle_file)


def test_dual(triangle_file):
    code, out = run(
        "dual", "--problem", "vertex-cover", "--epsilon", "1/2", "--verify", triangle_file
    )
    assert code == EXIT_OK
    [record] = records(out)
    assert record["path"] == "brute"
    assert record["value"] == 1
    assert record["epsilon"] == "1/2"
    assert record["verified"] is True


def test_dual_budget_exceeded(triangle_file):
    code, out = run(
        "dual",
        "--problem",
        "independent-set",
        "--epsilon",
        "1/2",
        "--brute-cap",
        "2",
        triangle_file,
    )
    assert code == EXIT_BUDGET
    assert records(out)[0]["path"] == "budget-exceeded"


@pytest.mark.parametrize("epsilon", ["0", "2", "abc"])
def test_dual_bad_epsilon(triangle_file, epsilon):
    code, out = run("dual", "--problem", "vertex-cover", "--epsilon", epsilon, triangle_file)
    assert code == EXIT_INPUT
    assert records(out)[0]["status"] == "failed"


def test_check_intersective(path_file, triangle_file):
    code, out = run("check-intersective", "--problem", "max-minimal-vertex-cover", path_file)
    assert code == EXIT_NO
    [record] = records(out)
    assert record["verdict"] == "not-intersective"
    assert record["safe"] is False

    code, out = run(
        "check-intersective", "--problem", "vertex-cover", "--depth", "2", triangle_file
    )
    assert code == EXIT_OK
    assert records(out)[0]["verdict"] == "intersective"


def test_check_intersective_edgeless(memfs):
    memfs.pipe("/subset-approx/edgeless.col", b"p edge 2 0\n")
    code, out = run(
        "check-intersective", "--problem", "vertex-cover", "memory://subset-approx/edgeless.col"
    )
    assert code == EXIT_OK
    [record] = records(out)
    assert record["verdict"] == "intersective"
    assert record["safe"] is True


# ===============================
# Input errors
# ===============================
def test_missing_problem(triangle_file):
    code, out = run("solve", triangle_file)
    assert code == EXIT_INPUT
    [record] = records(out)
    assert record == {
        "status": "failed",
        "command": "solve",
        "description": "'solve' needs --problem",
        "error_code": "InputError",
    }


def test_missing_file(memfs):
    code, out = run("solve", "--problem", "clique", "memory://subset-approx/none.col")
    assert code == EXIT_INPUT
    assert records(out)[0]["error_code"] == "InputError"


def test_malformed_file(memfs):
    memfs.pipe("/subset-approx/bad.col", b"p edge 2 1\ne 1 3\n")
    code, out = run("solve", "--problem", "clique", "memory://subset-approx/bad.col")
    assert code == EXIT_INPUT
    assert records(out)[0]["error_code"] == "ParseError"


def test_wrong_instance_kind(triangle_file):
    code, out = run("solve", "--problem", "set-cover", triangle_file)
    assert code == EXIT_INPUT


def test_unknown_oracle(triangle_file):
    with pytest.raises(SystemExit):
        run("approx", "--problem", "vertex-cover", "--oracle", "nope", triangle_file)


def test_error_record_in_text_format(triangle_file):
    code, out = run("solve", "--format", "text", triangle_file)
    assert code == EXIT_INPUT
    header, row = out.splitlines()
    assert header.split() == ["status", "command", "description", "error_code"]
    assert row.startswith("failed")


# ===============================
# Output options
# ===============================
def test_text_format(triangle_file):
    code, out = run("solve", "--problem", "vertex-cover", "--format", "text", triangle_file)
    assert code == EXIT_OK
    header, row = out.splitlines()
    assert header.split()[0] == "problem"
    assert row.split()[0] == "vertex-cover"


def test_reports_are_reproducible(memfs):
    memfs.pipe("/subset-approx/g.col", b"p edge 5 4\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n")
    argv = (
        "dual",
        "--problem",
        "dominating-set",
        "--epsilon",
        "1/4",
        "--verify",
        "memory://subset-approx/g.col",
    )
    assert run(*argv) == run(*argv)


def test_timing(triangle_file):
    code, out = run("solve", "--problem", "vertex-cover", "--timing", triangle_file)
    assert records(out)[0]["elapsed_ms"] is not None


def test_verbose_sets_debug_level(triangle_file):
    run("-v", "solve", "--problem", "vertex-cover", triangle_file)
    assert logging.getLogger("subset_approx").level == logging.DEBUG
    run("solve", "--problem", "vertex-cover", triangle_file)
    assert logging.getLogger("subset_approx").level == logging.WARNING


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip()


# ===============================
# gen
# ===============================
def test_gen_complete_graph():
    code, out = run("gen", "gnp", "--n", "4", "--p", "1")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "p edge 4 6"
    assert len(out.splitlines()) == 7


def test_gen_is_seeded(memfs):
    first = run("gen", "gnp", "--n", "12", "--p", "0.3", "--seed", "9")
    second = run("gen", "--seed", "9", "gnp", "--n", "12", "--p", "0.3")
    assert first == second


def test_gen_sets_to_file(memfs):
    url = "memory://subset-approx/sets.txt"
    code, out = run("gen", "sets", "--n-ground", "6", "--m", "4", "--seed", "2", "-o", url)
    assert code == EXIT_OK
    assert out == ""
    with fsspec.open(url, "r") as f:
        lines = f.read().splitlines()
    assert lines[0] == "6 4"
    assert len(lines) == 5

    code, out = run("solve", "--problem", "set-cover", url)
    assert code == EXIT_OK


def test_gen_invalid():
    code, out = run("gen", "sets", "--n-ground", "3", "--m", "0")
    assert code == EXIT_INPUT
    assert records(out)[0]["error_code"] == "ValidationError"


# ===============================
# experiment
# ===============================
def test_experiment(experiment_file):
    code, out = run("experiment", experiment_file)
    assert code == EXIT_OK
    rows = records(out)
    assert len(rows) == 15
    assert all(r["status"] == "success" for r in rows[:12])
    assert [r["configuration"] for r in rows[12:]] == [
        "solve vertex-cover",
        "dual vertex-cover eps=1/2",
        "branch vertex-cover k=opt+0",
    ]


def test_experiment_jobs_do_not_change_output(experiment_file):
    assert run("experiment", "--jobs", "1", experiment_file) == run(
        "experiment", "--jobs", "3", experiment_file
    )


def test_experiment_to_sink(experiment_file, memfs):
    url = "memory://subset-approx/report.txt"
    code, out = run("experiment", "--format", "text", "-o", url, experiment_file)
    assert code == EXIT_OK
    assert out == ""
    with fsspec.open(url, "r") as f:
        text = f.read()
    records_part, aggregates_part = text.split("\n\n")
    assert len(records_part.splitlines()) == 13
    assert aggregates_part.splitlines()[0].startswith("configuration")


def test_experiment_without_instances(tmp_path):
    code, out = run("experiment", str(tmp_path / "new.yaml"))
    assert code == EXIT_OK
    assert out == ""
    assert (tmp_path / "new.yaml").exists()


def test_experiment_invalid_config(tmp_path):
    config = tmp_path / "bad.yaml"
    config.write_text("runs:\n  - command: dual\n    problem: clique\n")
    code, out = run("experiment", str(config))
    assert code == EXIT_INPUT
    assert records(out)[0]["error_code"] == "ValidationError"


def test_experiment_row_failures_keep_exit_code(tmp_path, triangle_file):
    config = tmp_path / "rows.yaml"
    config.write_text(
        f"instances:\n  - path: {triangle_file}\n"
        "runs:\n  - command: branch\n    problem: feedback-vertex-set\n    k: 1\n"
    )
    code, out = run("experiment", str(config))
    assert code == EXIT_OK
    assert records(out)[0]["status"] == "failed"
