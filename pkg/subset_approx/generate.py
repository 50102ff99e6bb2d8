"""Seeded random instances and exhaustive graph families."""

from itertools import combinations
from typing import Iterator, Union
import logging

import numpy as np

from .exceptions import InputError
from .models import ExhaustiveSpec, GenModel, GenSpec
from .problems import Graph, SetSystem
from .utils import iter_bits

logger = logging.getLogger(__name__)


def gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): one coin flip per vertex pair, pairs taken in lexicographic order."""
    rng = np.random.default_rng(seed)
    edges = [pair for pair in combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_set_system(spec: GenSpec) -> SetSystem:
    """Sets of uniform random size; uncovered elements are then added to a random set."""
    rng = np.random.default_rng(spec.seed)
    sets = []
    for _ in range(spec.m):
        size = int(rng.integers(spec.min_set_size, spec.max_set_size + 1))
        members = rng.choice(spec.n_ground, size=size, replace=False)
        sets.append({int(x) for x in members})
    covered = set().union(*sets)
    for x in range(spec.n_ground):
        if x not in covered:
            sets[int(rng.integers(spec.m))].add(x)
    return SetSystem.from_sets(spec.n_ground, [sorted(s) for s in sets])


def generate(spec: GenSpec) -> Union[Graph, SetSystem]:
    if spec.model is GenModel.GNP:
        return gnp(spec.n, spec.p, spec.seed)
    if spec.model is GenModel.SETS:
        return random_set_system(spec)
    raise InputError(f"Unknown generator model {spec.model}")


def is_connected(g: Graph) -> bool:
    if g.n_vertices == 0:
        return True
    seen = frontier = 1
    while frontier:
        reach = 0
        for v in iter_bits(frontier):
            reach |= g.adjacency[v]
        frontier = reach & ~seen
        seen |= frontier
    return seen == g.vertex_mask


def all_graphs(n: int, connected: bool = False, min_edges: int = 0) -> Iterator[Graph]:
    """Every labelled graph on ``n`` vertices, edge subsets in increasing bit order."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in iter_bits(bits)]
        if len(edges) < min_edges:
            continue
        g = Graph.from_edges(n, edges)
        if connected and not is_connected(g):
            continue
        yield g


def exhaustive(spec: ExhaustiveSpec) -> Iterator[Graph]:
    return all_graphs(spec.n, spec.connected, spec.min_edges)
