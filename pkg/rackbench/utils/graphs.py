"""
Finite simple graphs, digraphs with loops, the standard families, and
automorphism groups by backtracking over vertex images.
"""
import logging
from typing import Optional, Union

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from rackbench.config import get_settings
from rackbench.errors import DegreeMismatchError, GroupTooLargeError, OrderOutOfRangeError
from rackbench.utils.perm import Perm, PermGroup

logger = logging.getLogger(__name__)


class Graph(BaseModel):
    """Simple undirected graph on vertices 0..order-1; edges stored as (min, max)."""

    model_config = ConfigDict(frozen=True)

    order: int
    edges: frozenset[tuple[int, int]] = frozenset()

    @field_validator("edges")
    @classmethod
    def _normalize(cls, edges: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
        out = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"graphs have no loops, got {{{u}, {v}}}")
            out.add((min(u, v), max(u, v)))
        return frozenset(out)

    @model_validator(mode="after")
    def _check_range(self) -> "Graph":
        if self.order < 0:
            raise ValueError("order must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge {{{u}, {v}}} outside range({self.order})")
        return self

    @property
    def directed(self) -> bool:
        return False

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.order, self.order), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.order))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        index = {node: i for i, node in enumerate(sorted(g.nodes))}
        return cls(order=len(index), edges=frozenset((index[u], index[v]) for u, v in g.edges))

    def to_json(self) -> dict:
        return {"kind": "graph", "order": self.order, "edges": [list(e) for e in sorted(self.edges)]}


class Digraph(BaseModel):
    """Digraph on vertices 0..order-1; loops allowed, no parallel edges."""

    model_config = ConfigDict(frozen=True)

    order: int
    edges: frozenset[tuple[int, int]] = frozenset()

    @model_validator(mode="after")
    def _check_range(self) -> "Digraph":
        if self.order < 0:
            raise ValueError("order must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge ({u}, {v}) outside range({self.order})")
        return self

    @property
    def directed(self) -> bool:
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.order, self.order), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = 1
        return a

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.order))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.DiGraph) -> "Digraph":
        index = {node: i for i, node in enumerate(sorted(g.nodes))}
        return cls(order=len(index), edges=frozenset((index[u], index[v]) for u, v in g.edges))

    def to_json(self) -> dict:
        return {"kind": "digraph", "order": self.order, "edges": [list(e) for e in sorted(self.edges)]}


AnyGraph = Union[Graph, Digraph]


def complete_graph(n: int) -> Graph:
    if n < 0:
        raise OrderOutOfRangeError(f"complete graph needs n >= 0, got {n}")
    return Graph.from_networkx(nx.complete_graph(n))


def edgeless_graph(n: int) -> Graph:
    if n < 0:
        raise OrderOutOfRangeError(f"edgeless graph needs n >= 0, got {n}")
    return Graph.from_networkx(nx.empty_graph(n))


def star_graph(n_leaves: int) -> Graph:
    """K_{1,n_leaves} centered at vertex 0; n_leaves = 0 is the single vertex."""
    if n_leaves < 0:
        raise OrderOutOfRangeError(f"star graph needs n_leaves >= 0, got {n_leaves}")
    return Graph.from_networkx(nx.star_graph(n_leaves))


def path_graph(n: int) -> Graph:
    if n < 2:
        raise OrderOutOfRangeError(f"path graph needs n >= 2, got {n}")
    return Graph.from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise OrderOutOfRangeError(f"cycle graph needs n >= 3, got {n}")
    return Graph.from_networkx(nx.cycle_graph(n))


def complete_digraph(n: int, with_loops: bool = False) -> Digraph:
    if n < 0:
        raise OrderOutOfRangeError(f"complete digraph needs n >= 0, got {n}")
    g = nx.complete_graph(n, create_using=nx.DiGraph)
    if with_loops:
        g.add_edges_from((v, v) for v in range(n))
    return Digraph.from_networkx(g)


def underlying_graph(d: Digraph) -> Graph:
    return Graph(order=d.order, edges=frozenset((u, v) for u, v in d.edges if u != v))


def complement(g: AnyGraph) -> AnyGraph:
    """Complement within simple graphs, or within V x V (loops included) for digraphs."""
    n = g.order
    if g.directed:
        return Digraph(order=n, edges=frozenset(
            (u, v) for u in range(n) for v in range(n) if (u, v) not in g.edges
        ))
    return Graph(order=n, edges=frozenset(
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in g.edges
    ))


def is_automorphism(g: AnyGraph, p: Perm) -> bool:
    if p.degree != g.order:
        raise DegreeMismatchError(f"permutation of degree {p.degree} on a graph of order {g.order}")
    return all(g.has_edge(p(u), p(v)) for u, v in g.edges)


def _refined_colors(g: AnyGraph) -> list[int]:
    """
    Iterated color refinement: start from (loop, out-degree, in-degree) and split
    by the multiset of neighbor colors until the partition is stable.
    """
    a = g.adjacency()
    n = g.order
    if n == 0:
        return []
    signature = np.stack([a.diagonal(), a.sum(axis=1), a.sum(axis=0)], axis=1)
    colors = _rank_rows(signature)
    while True:
        k = max(colors) + 1
        onehot = np.eye(k, dtype=np.int64)[colors]
        rows = np.hstack([np.asarray(colors)[:, None], a @ onehot, a.T @ onehot])
        refined = _rank_rows(rows)
        if max(refined) == max(colors):
            return refined
        colors = refined


def _rank_rows(rows: np.ndarray) -> list[int]:
    keys = [tuple(int(x) for x in row) for row in rows]
    rank = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [rank[key] for key in keys]


def automorphism_group(g: AnyGraph, cap: Optional[int] = None) -> PermGroup:
    """
    Full automorphism group as an explicit element set.

    Vertices are mapped in index order; a vertex may only go to an unused vertex
    of the same refined color, and every partial map must preserve adjacency in
    both directions (and loops) among the vertices mapped so far.
    """
    if cap is None:
        cap = get_settings().closure_cap
    n = g.order
    adj = g.adjacency().tolist()
    colors = _refined_colors(g)
    by_color: dict[int, list[int]] = {}
    for w, c in enumerate(colors):
        by_color.setdefault(c, []).append(w)

    images = [-1] * n
    used = [False] * n
    found: list[Perm] = []

    def extend(v: int) -> None:
        if v == n:
            found.append(Perm._trusted(images))
            if len(found) > cap:
                raise GroupTooLargeError(cap)
            return
        row_v = adj[v]
        for w in by_color[colors[v]]:
            if used[w] or adj[w][w] != row_v[v]:
                continue
            row_w = adj[w]
            if all(
                row_v[u] == row_w[images[u]] and adj[u][v] == adj[images[u]][w]
                for u in range(v)
            ):
                images[v] = w
                used[w] = True
                extend(v + 1)
                used[w] = False
        images[v] = -1

    extend(0)
    logger.debug("automorphism group of order %d on %d vertices", len(found), n)
    return PermGroup.from_elements(n, found)
