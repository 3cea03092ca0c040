"""
Cayley and Schreier (di)graphs of right quasigroups, markings, and the
conditions deciding when R is a marking of its own Cayley (di)graph.
"""
from typing import Iterable, Sequence, Union

from pydantic import BaseModel, ConfigDict, model_validator

from rackbench.errors import DegreeMismatchError, InvalidStructureError
from rackbench.utils.algebra import FiniteMagma, RightQuasigroup
from rackbench.utils.graphs import (
    AnyGraph,
    Digraph,
    Graph,
    automorphism_group,
    underlying_graph,
)
from rackbench.utils.perm import Perm, PermGroup, compose, conjugate, inverse


class Marking(BaseModel):
    model_config = ConfigDict(frozen=True)

    graph: Union[Graph, Digraph]
    assignment: tuple[Perm, ...]

    @model_validator(mode="after")
    def _check_degrees(self) -> "Marking":
        if len(self.assignment) != self.graph.order:
            raise ValueError("a marking assigns one permutation per vertex")
        for v, p in enumerate(self.assignment):
            if p.degree != self.graph.order:
                raise ValueError(f"R_{v} has degree {p.degree}, graph has order {self.graph.order}")
        return self

    @classmethod
    def of(cls, q: RightQuasigroup, graph: AnyGraph) -> "Marking":
        return cls(graph=graph, assignment=tuple(q.perms()))

    def realized(self) -> RightQuasigroup:
        return RightQuasigroup.from_perms(self.assignment)


def _check_subset(m: FiniteMagma, s: Iterable[int]) -> list[int]:
    subset = sorted(set(s))
    for x in subset:
        if not 0 <= x < m.order:
            raise InvalidStructureError(f"connection set element {x} outside range({m.order})")
    return subset


def cayley_digraph(q: FiniteMagma, s: Iterable[int]) -> Digraph:
    subset = _check_subset(q, s)
    edges = {(v, q.right_mult[x][v]) for v in range(q.order) for x in subset}
    return Digraph(order=q.order, edges=frozenset(edges))


def cayley_graph(q: FiniteMagma, s: Iterable[int]) -> Graph:
    return underlying_graph(cayley_digraph(q, s))


def _group_degree(group_elements: Union[PermGroup, Sequence[Perm]], t: Sequence[Perm]) -> int:
    if isinstance(group_elements, PermGroup):
        degree = group_elements.degree
    elif group_elements:
        degree = group_elements[0].degree
    elif t:
        degree = t[0].degree
    else:
        degree = 0
    elements = group_elements.generators if isinstance(group_elements, PermGroup) else group_elements
    for p in list(elements) + list(t):
        if p.degree != degree:
            raise DegreeMismatchError(f"mixed degrees {p.degree} and {degree} in a Schreier construction")
    return degree


def schreier_digraph(group_elements: Union[PermGroup, Sequence[Perm]], t: Iterable[Perm]) -> Digraph:
    """Edges (v, t.v) for every vertex v and every t in T."""
    t = list(t)
    n = _group_degree(group_elements, t)
    return Digraph(order=n, edges=frozenset((v, x(v)) for v in range(n) for x in t))


def schreier_graph(group_elements: Union[PermGroup, Sequence[Perm]], t: Iterable[Perm]) -> Graph:
    return underlying_graph(schreier_digraph(group_elements, t))


def schreier_condition(
    generators: Sequence[Perm],
    t: Sequence[Perm],
    undirected: bool = False,
) -> bool:
    """
    Whether the group generated by ``generators`` acts on the Schreier (di)graph of
    T by automorphisms: for all h, v and s in T some t in T has t h.v = h s.v
    (or, undirected, alternatively h.v = t h s.v).
    """
    t = list(t)
    n = _group_degree(list(generators), t)
    for h in generators:
        for s in t:
            hs = compose(h, s)
            for v in range(n):
                if undirected and s(v) == v:
                    continue
                target = hs(v)
                hv = h(v)
                if any(x(hv) == target for x in t):
                    continue
                if undirected and any(x(target) == hv for x in t):
                    continue
                return False
    return True


def acts_by_automorphisms(generators: Sequence[Perm], graph: AnyGraph) -> bool:
    elements = automorphism_group(graph).element_set()
    return all(g in elements for g in generators)


def is_marking(m: Marking) -> bool:
    """Every R_v lies in the computed automorphism group of the graph."""
    elements = automorphism_group(m.graph).element_set()
    return all(p in elements for p in m.assignment)


def is_q_marking(m: Marking) -> bool:
    return is_marking(m) and all(p(v) == v for v, p in enumerate(m.assignment))


def marking_condition_digraph(q: RightQuasigroup, s: Iterable[int]) -> bool:
    """For all h, v and s' in S there is t in S with R_t R_h(v) = R_h R_s'(v)."""
    subset = _check_subset(q, s)
    rows = q.right_mult
    for h in range(q.order):
        rh = rows[h]
        for x in subset:
            rx = rows[x]
            for v in range(q.order):
                hv = rh[v]
                target = rh[rx[v]]
                if not any(rows[t][hv] == target for t in subset):
                    return False
    return True


def marking_condition_graph(q: RightQuasigroup, s: Iterable[int]) -> bool:
    """
    As the digraph condition, with R_h(v) = R_t R_h R_s'(v) also accepted. Instances
    with R_s'(v) = v are skipped: they are loops, which the simple graph drops.
    """
    subset = _check_subset(q, s)
    rows = q.right_mult
    for h in range(q.order):
        rh = rows[h]
        for x in subset:
            rx = rows[x]
            for v in range(q.order):
                if rx[v] == v:
                    # loops vanish in the underlying simple graph
                    continue
                hv = rh[v]
                target = rh[rx[v]]
                if not any(rows[t][hv] == target or rows[t][target] == hv for t in subset):
                    return False
    return True


def conj_closure_condition(q: RightQuasigroup, s: Iterable[int], undirected: bool = False) -> bool:
    """R_v R_s R_v^-1 lands in R(S) (or R(S) u R(S)^-1 when undirected)."""
    subset = _check_subset(q, s)
    perms = q.perms()
    allowed = {perms[x] for x in subset}
    if undirected:
        allowed |= {inverse(p) for p in allowed}
    return all(conjugate(g, perms[x]) in allowed for g in perms for x in subset)


def marking_of(q: RightQuasigroup, s: Iterable[int], directed: bool = True) -> Marking:
    """R as a candidate marking of the Cayley digraph (or graph) of q."""
    subset = list(s)
    graph: AnyGraph = cayley_digraph(q, subset) if directed else cayley_graph(q, subset)
    return Marking.of(q, graph)
