from pathlib import Path
import pytest
import fsspec
import yaml

from subset_approx.problems import Graph, SetSystem


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path3():
    # a - b - c
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star3():
    # K_{1,3} centred on vertex 0
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def square():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def disjoint_pairs():
    return SetSystem.from_sets(4, [[0, 1], [2, 3]])


@pytest.fixture
def overlapping_sets():
    # optimum cover is sets {1, 2}; greedy takes set 0 first and ends with {0, 1, 2}
    return SetSystem.from_sets(5, [[0, 1, 2], [0, 3], [1, 2, 4], [3]])


@pytest.fixture(scope="function")
def memfs():
    fs = fsspec.filesystem("memory")
    fs.mkdir("/subset-approx", exist_ok=True)
    yield fs
    if fs.exists("/subset-approx"):
        fs.rm("/subset-approx", recursive=True)


@pytest.fixture(scope="function")
def triangle_file(memfs):
    memfs.pipe("/subset-approx/triangle.col", b"c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
    return "memory://subset-approx/triangle.col"


@pytest.fixture(scope="function")
def sets_file(memfs):
    memfs.pipe("/subset-approx/pairs.txt", b"4 2\n1 2\n3 4\n")
    return "memory://subset-approx/pairs.txt"


@pytest.fixture(scope="function")
def experiment_file(tmp_path: Path, triangle_file):
    config = {
        "jobs": 2,
        "instances": [
            {"name": "tri", "path": triangle_file},
            {"name": "gnp", "generator": {"model": "gnp", "n": 6, "p": 0.5, "seed": 3}, "count": 3},
        ],
        "runs": [
            {"command": "solve", "problem": "vertex-cover"},
            {"command": "dual", "problem": "vertex-cover", "epsilon": "1/2", "verify": True},
            {"command": "branch", "problem": "vertex-cover", "k_offset": 0, "verify": True},
        ],
    }
    config_path = tmp_path / "experiment.yaml"
    with open(config_path, "w") as file:
        yaml.dump(config, file)
    return str(config_path)
