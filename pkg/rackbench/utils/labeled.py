"""
Labeled digraphs whose labels are vertices, the classes D and Q, and the
graph-theoretic recognition of right quasigroups, racks, quandles and kei.

An edge (v, l, w) reads "R_l(v) = w". D holds the deterministic, source-complete
digraphs (every vertex has exactly one outgoing edge per label); Q is the
subclass that is also codeterministic and target-complete.
"""
from collections import Counter
from enum import Enum
from typing import Iterable, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from rackbench.errors import InvalidStructureError, NotInClassError
from rackbench.utils.algebra import FiniteMagma, as_index, magma_from_rows
from rackbench.utils.cayley import _check_subset


class Verdict(str, Enum):
    RIGHT_CANCELLATIVE = "right-cancellative magma"
    RIGHT_DIVISIBLE = "right-divisible magma"
    RIGHT_QUASIGROUP = "right quasigroup"
    RACK = "rack"
    QUANDLE = "quandle"
    INVOLUTORY_RIGHT_QUASIGROUP = "involutory right quasigroup"
    INVOLUTORY_RACK = "involutory rack"
    KEI = "kei"


class LabeledDigraph(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: int
    labels: frozenset[int] = frozenset()
    edges: frozenset[tuple[int, int, int]] = frozenset()

    @model_validator(mode="after")
    def _check_ranges(self) -> "LabeledDigraph":
        n = self.order
        if n < 0:
            raise ValueError("order must be non-negative")
        for label in self.labels:
            if not 0 <= label < n:
                raise ValueError(f"label {label} is not a vertex of range({n})")
        for v, label, w in self.edges:
            if not (0 <= v < n and 0 <= w < n):
                raise ValueError(f"edge ({v}, {label}, {w}) outside range({n})")
            if label not in self.labels:
                raise ValueError(f"edge ({v}, {label}, {w}) uses label {label} outside the label set")
        return self

    def sorted_labels(self) -> list[int]:
        return sorted(self.labels)

    def sorted_edges(self) -> list[tuple[int, int, int]]:
        return sorted(self.edges)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "labels": self.sorted_labels(),
            "edges": [list(e) for e in self.sorted_edges()],
        }


class ClassReport(BaseModel):
    deterministic: bool
    codeterministic: bool
    source_complete: bool
    target_complete: bool
    in_D: bool
    in_Q: bool
    first_rack_cond: bool
    second_rack_cond: bool
    label_idempotent: bool
    label_involutory: bool
    realizes: list[Verdict]
    reasons: list[str] = []


def _source_counts(g: LabeledDigraph) -> Counter:
    return Counter((v, label) for v, label, _ in g.edges)


def _target_counts(g: LabeledDigraph) -> Counter:
    return Counter((label, w) for _, label, w in g.edges)


def is_deterministic(g: LabeledDigraph) -> bool:
    """At most one outgoing edge per (vertex, label)."""
    return all(c == 1 for c in _source_counts(g).values())


def is_codeterministic(g: LabeledDigraph) -> bool:
    """At most one incoming edge per (label, vertex)."""
    return all(c == 1 for c in _target_counts(g).values())


def is_source_complete(g: LabeledDigraph) -> bool:
    return len(_source_counts(g)) == g.order * len(g.labels)


def is_target_complete(g: LabeledDigraph) -> bool:
    return len(_target_counts(g)) == g.order * len(g.labels)


def in_d(g: LabeledDigraph) -> bool:
    return is_deterministic(g) and is_source_complete(g)


def in_q(g: LabeledDigraph) -> bool:
    return in_d(g) and is_codeterministic(g) and is_target_complete(g)


def is_label_idempotent(g: LabeledDigraph) -> bool:
    """Every label l carries the loop (l, l, l)."""
    return all((label, label, label) in g.edges for label in g.labels)


def is_label_involutory(g: LabeledDigraph) -> bool:
    """Every l-edge is a loop or half of a 2-cycle with the same label."""
    return all((w, label, v) in g.edges for v, label, w in g.edges)


def labeled_cayley(q: FiniteMagma, s: Iterable[int]) -> LabeledDigraph:
    subset = _check_subset(q, s)
    edges = frozenset((v, x, q.right_mult[x][v]) for v in range(q.order) for x in subset)
    return LabeledDigraph(order=q.order, labels=frozenset(subset), edges=edges)


def _require_d(g: LabeledDigraph) -> None:
    sources = _source_counts(g)
    for v in range(g.order):
        for label in g.sorted_labels():
            count = sources.get((v, label), 0)
            if count == 0:
                raise NotInClassError(
                    f"not source-complete: vertex {v} has no outgoing edge labeled {label}",
                    vertex=v, label=label,
                )
            if count > 1:
                raise NotInClassError(
                    f"not deterministic: vertex {v} has {count} outgoing edges labeled {label}",
                    vertex=v, label=label,
                )


def _require_q(g: LabeledDigraph) -> None:
    _require_d(g)
    targets = _target_counts(g)
    for label in g.sorted_labels():
        for w in range(g.order):
            count = targets.get((label, w), 0)
            if count == 0:
                raise NotInClassError(
                    f"not target-complete: vertex {w} has no incoming edge labeled {label}",
                    vertex=w, label=label,
                )
            if count > 1:
                raise NotInClassError(
                    f"not codeterministic: vertex {w} has {count} incoming edges labeled {label}",
                    vertex=w, label=label,
                )


def _rows(g: LabeledDigraph) -> list[list[int]]:
    rows = [list(range(g.order)) for _ in range(g.order)]
    for v, label, w in g.edges:
        rows[label][v] = w
    return rows


def induced_magma(g: LabeledDigraph) -> FiniteMagma:
    """
    The magma read off a digraph in D: R_l(v) is the head of the unique l-edge
    leaving v, and every non-label vertex acts as the identity.

    Only labels carry information, so ``induced_magma(labeled_cayley(q, s)) == q``
    holds when s is the whole vertex set; the digraph-level round trip
    ``labeled_cayley(induced_magma(g), g.labels) == g`` holds for any label set.
    A RightQuasigroup is returned whenever every row is a bijection.
    """
    _require_d(g)
    return magma_from_rows(_rows(g))


def first_rack_condition(g: LabeledDigraph) -> bool:
    """
    For every vertex v and every pair of edges (v, l1, w1), (v, l2, w2):
    R_l1(w2) == R_{R_l1(l2)}(w1). Pairs with l1 == l2 or w1 == w2 are included.
    """
    _require_q(g)
    rows = _rows(g)
    out: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.order)}
    for v, label, w in g.edges:
        out[v].append((label, w))
    for v in range(g.order):
        for l1, w1 in out[v]:
            r1 = rows[l1]
            for l2, w2 in out[v]:
                if r1[w2] != rows[r1[l2]][w1]:
                    return False
    return True


def second_rack_condition(g: LabeledDigraph) -> bool:
    """
    For every edge (v, l, w) and non-label x with R_l(x) a label, the loop
    (w, R_l(x), w) is present.
    """
    _require_q(g)
    rows = _rows(g)
    non_labels = [x for x in range(g.order) if x not in g.labels]
    for _, label, w in g.edges:
        for x in non_labels:
            image = rows[label][x]
            if image in g.labels and (w, image, w) not in g.edges:
                return False
    return True


def classify(g: LabeledDigraph) -> ClassReport:
    det = is_deterministic(g)
    codet = is_codeterministic(g)
    src = is_source_complete(g)
    tgt = is_target_complete(g)
    member_d = det and src
    member_q = member_d and codet and tgt
    idempotent = is_label_idempotent(g)
    involutory = is_label_involutory(g)

    reasons: list[str] = []
    first = second = False
    if member_q:
        first = first_rack_condition(g)
        second = second_rack_condition(g)
        if not first:
            reasons.append("first rack condition fails")
        if not second:
            reasons.append("second rack condition fails")
    else:
        try:
            _require_q(g)
        except NotInClassError as exc:
            reasons.append(f"rack conditions not evaluated: {exc.detail}")

    realizes: list[Verdict] = []
    if member_d and codet:
        realizes.append(Verdict.RIGHT_CANCELLATIVE)
    if member_d and tgt:
        realizes.append(Verdict.RIGHT_DIVISIBLE)
    if member_q:
        realizes.append(Verdict.RIGHT_QUASIGROUP)
        rack = first and second
        if rack:
            realizes.append(Verdict.RACK)
            if idempotent:
                realizes.append(Verdict.QUANDLE)
        if involutory:
            realizes.append(Verdict.INVOLUTORY_RIGHT_QUASIGROUP)
            if rack:
                realizes.append(Verdict.INVOLUTORY_RACK)
                if idempotent:
                    realizes.append(Verdict.KEI)

    return ClassReport(
        deterministic=det,
        codeterministic=codet,
        source_complete=src,
        target_complete=tgt,
        in_D=member_d,
        in_Q=member_q,
        first_rack_cond=first,
        second_rack_cond=second,
        label_idempotent=idempotent,
        label_involutory=involutory,
        realizes=realizes,
        reasons=reasons,
    )


def from_triples(
    order: int,
    triples: Iterable[Iterable[int]],
    labels: Optional[Iterable[int]] = None,
) -> LabeledDigraph:
    """Build a digraph from edge triples, rejecting duplicates instead of collapsing them."""
    edges = [tuple(as_index(x) for x in t) for t in triples]
    for e in edges:
        if len(e) != 3:
            raise InvalidStructureError(f"edge {list(e)} is not a (v, l, w) triple")
    dupes = sorted(e for e, c in Counter(edges).items() if c > 1)
    if dupes:
        raise InvalidStructureError(f"duplicate edge {dupes[0]}")
    label_set = frozenset(as_index(x) for x in labels) if labels is not None else frozenset(e[1] for e in edges)
    return LabeledDigraph(order=order, labels=label_set, edges=frozenset(edges))
