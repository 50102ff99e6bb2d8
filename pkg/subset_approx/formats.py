"""Text formats for instances.

Graphs use the DIMACS edge format::

    c optional comment
    p edge <n> <m>
    e <u> <v>

Set systems use a header line ``<n_ground> <m>`` followed by exactly ``m`` lines
of space-separated ground elements; an empty line is an empty set. Both formats
number from 1 on disk and from 0 in memory.
"""

from typing import List, Literal, Union
import logging

import fsspec

from .exceptions import InputError, ParseError
from .problems import Graph, ProblemKind, SetSystem

logger = logging.getLogger(__name__)

InstanceKind = Literal["graph", "sets"]
Instance = Union[Graph, SetSystem]


def _int(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"Line {line_no}: expected an integer, got '{token}'") from None


def parse_graph(text: str) -> Graph:
    n = None
    declared_m = 0
    edges = set()
    loops = duplicates = lines_seen = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if n is not None:
                raise ParseError(f"Line {line_no}: second problem line")
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise ParseError(f"Line {line_no}: malformed header '{line}'")
            n, declared_m = _int(tokens[2], line_no), _int(tokens[3], line_no)
            if n < 0 or declared_m < 0:
                raise ParseError(f"Line {line_no}: negative counts in header")
        elif tokens[0] == "e":
            if n is None:
                raise ParseError(f"Line {line_no}: edge before the 'p' line")
            if len(tokens) != 3:
                raise ParseError(f"Line {line_no}: malformed edge '{line}'")
            u, v = _int(tokens[1], line_no), _int(tokens[2], line_no)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(
                        f"Line {line_no}: vertex {x} out of range [1, {n}]"
                    )
            lines_seen += 1
            if u == v:
                loops += 1
                continue
            edge = (min(u, v) - 1, max(u, v) - 1)
            if edge in edges:
                duplicates += 1
                continue
            edges.add(edge)
        else:
            raise ParseError(f"Line {line_no}: unknown line type '{tokens[0]}'")

    if n is None:
        raise ParseError("Missing 'p edge <n> <m>' line")
    if loops or duplicates:
        logger.warning(f"Dropped {loops} self-loop(s) and {duplicates} duplicate edge(s)")
    if lines_seen != declared_m:
        logger.warning(f"Header declares {declared_m} edges, found {lines_seen}")
    return Graph.from_edges(n, sorted(edges))


def render_graph(g: Graph) -> str:
    lines = [f"p edge {g.n_vertices} {g.n_edges}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_setsystem(text: str) -> SetSystem:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("Missing '<n_ground> <m>' header")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"Line 1: malformed header '{lines[0]}'")
    n_ground, m = _int(header[0], 1), _int(header[1], 1)
    if n_ground < 0 or m < 1:
        raise ParseError("Line 1: need n_ground >= 0 and m >= 1")

    body = lines[1:]
    if len(body) < m or any(line.strip() for line in body[m:]):
        raise ParseError(f"Expected exactly {m} set lines after the header")

    sets: List[List[int]] = []
    for line_no, line in enumerate(body[:m], start=2):
        members = []
        for token in line.split():
            x = _int(token, line_no)
            if not 1 <= x <= n_ground:
                raise ParseError(
                    f"Line {line_no}: element {x} out of range [1, {n_ground}]"
                )
            members.append(x - 1)
        sets.append(members)
    return SetSystem.from_sets(n_ground, sets)


def render_setsystem(system: SetSystem) -> str:
    lines = [f"{system.n_ground} {system.m}"]
    lines.extend(
        " ".join(str(x + 1) for x in system.members(i)) for i in range(system.m)
    )
    return "\n".join(lines) + "\n"


def instance_kind(kind: Union[ProblemKind, str]) -> InstanceKind:
    if kind in ("graph", "sets"):
        return kind
    return "graph" if ProblemKind(kind).is_graph else "sets"


def parse_instance(text: str, kind: Union[ProblemKind, str]) -> Instance:
    if instance_kind(kind) == "graph":
        return parse_graph(text)
    return parse_setsystem(text)


def render_instance(instance: Instance) -> str:
    if isinstance(instance, Graph):
        return render_graph(instance)
    if isinstance(instance, SetSystem):
        return render_setsystem(instance)
    raise InputError(f"Cannot render {type(instance).__name__}")


def load_instance(path: str, kind: Union[ProblemKind, str]) -> Instance:
    """Read an instance from any fsspec URL (local path, ``memory://``, ...)."""
    logger.debug(f"Loading {instance_kind(kind)} instance from {path}")
    try:
        with fsspec.open(path, "r") as f:
            text = f.read()
    except FileNotFoundError:
        raise InputError(f"Instance file not found: {path}") from None
    return parse_instance(text, kind)


def save_instance(path: str, instance: Instance):
    with fsspec.open(path, "w") as f:
        f.write(render_instance(instance))
    logger.debug(f"Wrote instance to {path}")
