import networkx as nx
import pytest
from pydantic import ValidationError

from subset_approx.generate import all_graphs, exhaustive, generate, gnp, is_connected
from subset_approx.models import ExhaustiveSpec, GenModel, GenSpec
from subset_approx.problems import Graph, SetSystem


def test_gnp_extremes():
    assert gnp(4, 0, seed=1) == Graph.empty(4)
    k4 = gnp(4, 1, seed=1)
    assert k4.n_edges == 6
    assert k4.complement() == Graph.empty(4)


def test_gnp_is_deterministic():
    assert gnp(12, 0.3, seed=7) == gnp(12, 0.3, seed=7)
    spec = GenSpec(model=GenModel.GNP, n=10, p=0.4, seed=11)
    assert generate(spec) == generate(spec.model_copy())


def test_gnp_seed_matters():
    graphs = {gnp(10, 0.5, seed).edges for seed in range(5)}
    assert len(graphs) > 1


def test_random_set_system_shape():
    spec = GenSpec(model=GenModel.SETS, n_ground=8, m=5, min_set_size=1, max_set_size=2, seed=4)
    system = generate(spec)
    assert isinstance(system, SetSystem)
    assert system.m == 5
    assert system.n_ground == 8
    assert system.coverable
    assert generate(spec) == system


@pytest.mark.parametrize("seed", range(30))
def test_random_set_systems_are_coverable(seed):
    spec = GenSpec(model=GenModel.SETS, n_ground=10, m=3, max_set_size=2, seed=seed)
    assert generate(spec).coverable


@pytest.mark.parametrize(
    "kwargs",
    [
        {"model": "gnp", "n": 3, "p": 1.5},
        {"model": "gnp", "n": -1},
        {"model": "sets", "n_ground": 3, "m": 0},
        {"model": "sets", "n_ground": 3, "m": 2, "max_set_size": 4},
        {"model": "sets", "n_ground": 3, "m": 2, "min_set_size": 3, "max_set_size": 2},
        {"model": "lattice", "n": 3},
    ],
)
def test_gen_spec_validation(kwargs):
    with pytest.raises(ValidationError):
        GenSpec(**kwargs)


# ===============================
# Exhaustive families
# ===============================
def test_all_graphs_counts():
    assert len(list(all_graphs(3))) == 8
    assert len(list(all_graphs(3, connected=True))) == 4
    assert len(list(all_graphs(4, connected=True))) == 38
    assert len(list(all_graphs(3, min_edges=2))) == 4


def test_exhaustive_spec():
    graphs = list(exhaustive(ExhaustiveSpec(n=2, connected=True)))
    assert graphs == [Graph.from_edges(2, [(0, 1)])]
    with pytest.raises(ValidationError):
        ExhaustiveSpec(n=7)


@pytest.mark.parametrize("seed", range(20))
def test_is_connected_matches_networkx(seed):
    g = gnp(7, 0.25, seed)
    G = nx.Graph()
    G.add_nodes_from(range(g.n_vertices))
    G.add_edges_from(g.edges)
    assert is_connected(g) == nx.is_connected(G)


def test_is_connected_trivial():
    assert is_connected(Graph.empty(0))
    assert is_connected(Graph.empty(1))
    assert not is_connected(Graph.empty(2))
