"""
JSON and text codecs for the domain types, inline family specs, and the
one-based rendering used in human-readable output.

Everything on the wire is 0-based. Only ``render_*`` helpers shift indices.
"""
import json
import re
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from rackbench.errors import InputParseError, RackbenchError
from rackbench.utils.algebra import FiniteMagma, as_index, from_operation_table, magma_from_rows
from rackbench.utils.graphs import (
    AnyGraph,
    Digraph,
    Graph,
    complete_digraph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    path_graph,
    star_graph,
)
from rackbench.utils.labeled import LabeledDigraph, from_triples
from rackbench.utils.perm import Perm, PermGroup

FAMILIES = ["complete", "edgeless", "star", "path", "cycle", "complete-digraph"]

_EDGE_LINE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*-->\s*(\d+)\s*$")
_HEADER_LINE = re.compile(r"^\s*(order|labels)\s*:\s*(.*)$")


def load_json(source: Union[str, Path]) -> Any:
    """Read JSON from a file path, or from the string itself when it starts with '{' or '['."""
    text = str(source)
    try:
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(text).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InputParseError(f"no such file: {text}") from exc
    except json.JSONDecodeError as exc:
        raise InputParseError(f"invalid JSON in {text[:40]!r}: {exc.msg} at line {exc.lineno}") from exc


def _wrap(exc: ValidationError, what: str) -> InputParseError:
    first = exc.errors()[0]
    return InputParseError(f"invalid {what}: {first['msg']}")


def perm_from_json(data: Any) -> Perm:
    try:
        return Perm(images=tuple(data))
    except ValidationError as exc:
        raise _wrap(exc, "permutation") from exc
    except TypeError as exc:
        raise InputParseError(f"a permutation is an image list, got {data!r}") from exc


def perm_group_from_json(data: dict) -> PermGroup:
    if not isinstance(data, dict) or "degree" not in data:
        raise InputParseError('a permutation group is {"degree": n, "generators": [...]}')
    gens = tuple(perm_from_json(g) for g in data.get("generators", []))
    try:
        return PermGroup(degree=int(data["degree"]), generators=gens)
    except ValidationError as exc:
        raise _wrap(exc, "permutation group") from exc


def magma_from_json(data: Any) -> FiniteMagma:
    """
    Decode a magma. Accepted shapes:

        {"order": n, "right_mult": [[...], ...]}   right_mult[v][w] = R_v(w)
        {"table": [[...], ...]}                    table[w][v] = w ◁ v
        {"order": n, "cycles": [[[1, 2]], [], ...], "one_based": true}

    Returns:
        A RightQuasigroup when every R_v is a bijection, else a FiniteMagma
    """
    if not isinstance(data, dict):
        raise InputParseError("a magma is a JSON object")
    try:
        if "right_mult" in data:
            rows = data["right_mult"]
            if "order" in data and int(data["order"]) != len(rows):
                raise InputParseError(f"order {data['order']} does not match {len(rows)} rows")
            return magma_from_rows(rows)
        if "table" in data:
            return from_operation_table(data["table"])
        if "cycles" in data:
            n = int(data["order"])
            one_based = bool(data.get("one_based", False))
            perms = [Perm.from_cycles(n, cycles, one_based=one_based) for cycles in data["cycles"]]
            return magma_from_rows([p.images for p in perms])
    except ValidationError as exc:
        raise _wrap(exc, "magma") from exc
    except InputParseError:
        raise
    except RackbenchError as exc:
        raise InputParseError(exc.detail) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InputParseError(f"invalid magma: {exc}") from exc
    raise InputParseError('a magma needs one of "right_mult", "table" or "cycles"')


def graph_from_json(data: Any) -> AnyGraph:
    if not isinstance(data, dict):
        raise InputParseError("a graph is a JSON object")
    kind = data.get("kind", "graph")
    cls = {"graph": Graph, "digraph": Digraph}.get(kind)
    if cls is None:
        raise InputParseError(f"unknown graph kind {kind!r}")
    try:
        return cls(order=int(data["order"]), edges=frozenset(tuple(e) for e in data.get("edges", [])))
    except ValidationError as exc:
        raise _wrap(exc, kind) from exc
    except (KeyError, TypeError) as exc:
        raise InputParseError(f"invalid {kind}: {exc}") from exc


def labeled_from_json(data: Any) -> LabeledDigraph:
    if not isinstance(data, dict) or "order" not in data:
        raise InputParseError('a labeled digraph is {"order": n, "labels": [...], "edges": [[v, l, w], ...]}')
    try:
        return from_triples(as_index(data["order"]), data.get("edges", []), labels=data.get("labels"))
    except ValidationError as exc:
        raise _wrap(exc, "labeled digraph") from exc
    except RackbenchError as exc:
        raise InputParseError(exc.detail) from exc
    except TypeError as exc:
        raise InputParseError(f"invalid labeled digraph: {exc}") from exc


def parse_labeled_text(text: str) -> LabeledDigraph:
    """
    Parse the hand-written edge-list form.

    Lines look like ``0 --1--> 2``; optional headers ``order: 3`` and
    ``labels: 0 1`` fix the vertex count and label set, which otherwise default
    to the largest index seen plus one and the labels used by edges. ``#``
    starts a comment.
    """
    order = None
    labels = None
    triples: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER_LINE.match(line)
        if header:
            key, value = header.groups()
            try:
                numbers = [int(x) for x in value.replace(",", " ").split()]
            except ValueError as exc:
                raise InputParseError(f"line {lineno}: bad {key} header {value!r}") from exc
            if key == "order":
                if len(numbers) != 1:
                    raise InputParseError(f"line {lineno}: order takes one integer")
                order = numbers[0]
            else:
                labels = numbers
            continue
        edge = _EDGE_LINE.match(line)
        if not edge:
            raise InputParseError(f"line {lineno}: expected 'v --l--> w', got {raw.strip()!r}")
        triples.append(tuple(int(x) for x in edge.groups()))

    if order is None:
        seen = [x for t in triples for x in t] + list(labels or [])
        order = max(seen) + 1 if seen else 0
    try:
        return from_triples(order, triples, labels=labels)
    except ValidationError as exc:
        raise _wrap(exc, "labeled digraph") from exc
    except RackbenchError as exc:
        raise InputParseError(exc.detail) from exc


def load_labeled(source: Union[str, Path]) -> LabeledDigraph:
    """A labeled digraph from a JSON file, a ``.txt`` edge list, or inline JSON."""
    text = str(source)
    if text.endswith(".txt"):
        try:
            return parse_labeled_text(Path(text).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise InputParseError(f"no such file: {text}") from exc
    return labeled_from_json(load_json(source))


def family_graph(family: str, n: int) -> AnyGraph:
    """
    Build a named family on n vertices.

    Args:
        family: One of ``FAMILIES``
        n: Number of vertices (the star on n vertices is K_{1,n-1})

    Returns:
        The graph, or a digraph for ``complete-digraph``
    """
    builders = {
        "complete": complete_graph,
        "edgeless": edgeless_graph,
        "star": lambda k: star_graph(k - 1),
        "path": path_graph,
        "cycle": cycle_graph,
        "complete-digraph": complete_digraph,
    }
    if family not in builders:
        raise InputParseError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return builders[family](n)


def parse_subset(text: str) -> list[int]:
    """'0,2' or '0 2' or '[0, 2]' to a sorted index list."""
    cleaned = text.strip().strip("[]").replace(",", " ")
    try:
        return sorted(set(int(x) for x in cleaned.split()))
    except ValueError as exc:
        raise InputParseError(f"bad subset {text!r}") from exc


def shift(value: int, zero_based: bool) -> int:
    return value if zero_based else value + 1


def render_perm(p: Perm, zero_based: bool = False) -> str:
    return p.to_cycle_string(one_based=not zero_based)


def render_magma(m: FiniteMagma, zero_based: bool = False) -> str:
    """One line per vertex: R_v in cycle notation, or its image list if R_v is not a bijection."""
    lines = []
    for v, row in enumerate(m.right_mult):
        if sorted(row) == list(range(m.order)):
            shown = render_perm(Perm._trusted(row), zero_based)
        else:
            shown = "[" + " ".join(str(shift(x, zero_based)) for x in row) + "]"
        lines.append(f"R_{shift(v, zero_based)} = {shown}")
    return "\n".join(lines)


def render_edges(g: Union[AnyGraph, LabeledDigraph], zero_based: bool = False) -> str:
    if isinstance(g, LabeledDigraph):
        return "\n".join(
            f"{shift(v, zero_based)} --{shift(l, zero_based)}--> {shift(w, zero_based)}"
            for v, l, w in g.sorted_edges()
        )
    arrow = "->" if g.directed else "--"
    return "\n".join(
        f"{shift(u, zero_based)} {arrow} {shift(v, zero_based)}" for u, v in sorted(g.edges)
    )
