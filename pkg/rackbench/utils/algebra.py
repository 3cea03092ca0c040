"""
Finite magmas and right quasigroups stored by their right-multiplication maps.

``right_mult[v][w] == R_v(w)``; the binary operation is ``w ◁ v = R_v(w)``.
"""
from itertools import permutations, product
from math import factorial
from typing import Iterator, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from rackbench.config import get_settings
from rackbench.errors import InvalidStructureError, OrderOutOfRangeError
from rackbench.utils.perm import (
    Perm,
    PermGroup,
    conjugate,
    inverse,
)


class FiniteMagma(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: int
    right_mult: tuple[tuple[int, ...], ...]

    @model_validator(mode="after")
    def _check_table(self) -> "FiniteMagma":
        n = self.order
        if n < 0:
            raise ValueError("order must be non-negative")
        if len(self.right_mult) != n:
            raise ValueError(f"expected {n} right-multiplication rows, got {len(self.right_mult)}")
        for v, row in enumerate(self.right_mult):
            if len(row) != n:
                raise ValueError(f"row {v} has length {len(row)}, expected {n}")
            if any(not 0 <= x < n for x in row):
                raise ValueError(f"row {v} has entries outside range({n})")
        return self

    def R(self, v: int) -> tuple[int, ...]:
        return self.right_mult[v]

    def op(self, w: int, v: int) -> int:
        """w ◁ v."""
        return self.right_mult[v][w]

    def to_json(self) -> dict:
        return {"order": self.order, "right_mult": [list(row) for row in self.right_mult]}


class RightQuasigroup(FiniteMagma):
    @field_validator("right_mult")
    @classmethod
    def _rows_are_bijections(cls, rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        for v, row in enumerate(rows):
            if sorted(row) != list(range(len(row))):
                raise ValueError(f"R_{v} = {list(row)} is not a permutation")
        return rows

    @classmethod
    def from_perms(cls, perms: Sequence[Perm]) -> "RightQuasigroup":
        return cls(order=len(perms), right_mult=tuple(p.images for p in perms))

    def perm(self, v: int) -> Perm:
        return Perm._trusted(self.right_mult[v])

    def perms(self) -> list[Perm]:
        return [self.perm(v) for v in range(self.order)]


def as_right_quasigroup(m: FiniteMagma) -> RightQuasigroup:
    if isinstance(m, RightQuasigroup):
        return m
    if not is_right_quasigroup(m):
        raise InvalidStructureError("magma is not a right quasigroup")
    return RightQuasigroup(order=m.order, right_mult=m.right_mult)


def operation_table(m: FiniteMagma) -> np.ndarray:
    """table[w, v] = w ◁ v = R_v(w)."""
    return np.array(m.right_mult, dtype=np.int64).reshape(m.order, m.order).T


def as_index(x) -> int:
    """An integer table entry; floats, bools and strings are rejected rather than truncated."""
    if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
        raise InvalidStructureError(f"entry {x!r} is not an integer")
    return int(x)


def magma_from_rows(rows: Sequence[Sequence[int]]) -> FiniteMagma:
    """A RightQuasigroup when every row is a bijection, otherwise a plain FiniteMagma."""
    rows = tuple(tuple(as_index(x) for x in row) for row in rows)
    magma = FiniteMagma(order=len(rows), right_mult=rows)
    if is_right_quasigroup(magma):
        return RightQuasigroup(order=magma.order, right_mult=rows)
    return magma


def from_operation_table(table: Sequence[Sequence[int]]) -> FiniteMagma:
    a = np.asarray([[as_index(x) for x in row] for row in table], dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidStructureError("operation table must be square")
    return magma_from_rows(a.T.tolist())


def is_right_cancellative(m: FiniteMagma) -> bool:
    return all(len(set(row)) == len(row) for row in m.right_mult)


def is_right_divisible(m: FiniteMagma) -> bool:
    full = set(range(m.order))
    return all(set(row) == full for row in m.right_mult)


def is_right_quasigroup(m: FiniteMagma) -> bool:
    return is_right_cancellative(m) and is_right_divisible(m)


def is_rack(q: FiniteMagma) -> bool:
    """R_v R_w = R_{R_v(w)} R_v for all v, w."""
    if not is_right_quasigroup(q):
        return False
    rows = q.right_mult
    n = q.order
    for v in range(n):
        rv = rows[v]
        for w in range(n):
            rw = rows[w]
            rc = rows[rv[w]]
            for x in range(n):
                if rv[rw[x]] != rc[rv[x]]:
                    return False
    return True


def is_quandle(q: FiniteMagma) -> bool:
    return is_rack(q) and all(q.right_mult[v][v] == v for v in range(q.order))


def is_involutory(q: FiniteMagma) -> bool:
    return all(row[row[x]] == x for row in q.right_mult for x in range(q.order))


def is_kei(q: FiniteMagma) -> bool:
    return is_quandle(q) and is_involutory(q)


def rmlt(q: RightQuasigroup, cap: Optional[int] = None) -> PermGroup:
    """The right-multiplication group, generated by every R_v."""
    group = PermGroup(degree=q.order, generators=tuple(dict.fromkeys(q.perms())), cap=cap)
    group.elements()
    return group


def trivial_quandle(n: int) -> RightQuasigroup:
    return permutation_rack(n, Perm.identity(n))


def permutation_rack(n: int, sigma: Perm) -> RightQuasigroup:
    if sigma.degree != n:
        raise InvalidStructureError(f"sigma has degree {sigma.degree}, expected {n}")
    return RightQuasigroup(order=n, right_mult=(sigma.images,) * n)


def conj_quandle(g: PermGroup) -> RightQuasigroup:
    """
    Conj G on the element indices of ``g.elements()`` (lexicographic by images),
    with R_g(h) = g h g^-1.
    """
    elements = g.elements()
    index = {p: i for i, p in enumerate(elements)}
    rows = tuple(
        tuple(index[conjugate(a, b)] for b in elements)
        for a in elements
    )
    return RightQuasigroup(order=len(elements), right_mult=rows)


def regular_right_quasigroup(mul_table: Sequence[Sequence[int]]) -> RightQuasigroup:
    """
    R_h(g) = g h for a group given by its multiplication table ``mul_table[g][h] = g h``.
    """
    a = np.asarray(mul_table, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidStructureError("group table must be square")
    n = a.shape[0]
    if n == 0:
        raise InvalidStructureError("a group has at least one element")
    if a.min() < 0 or a.max() >= n:
        raise InvalidStructureError("group table has entries out of range")
    # (gh)k == g(hk) for all g, h, k
    if not (a[a, :] == a[:, a]).all():
        raise InvalidStructureError("group table is not associative")
    rng = np.arange(n)
    units = [e for e in range(n) if (a[e, :] == rng).all() and (a[:, e] == rng).all()]
    if not units:
        raise InvalidStructureError("group table has no identity")
    e = units[0]
    if not all((a[g, :] == e).any() and (a[:, g] == e).any() for g in range(n)):
        raise InvalidStructureError("group table has an element without inverse")
    return RightQuasigroup(order=n, right_mult=tuple(tuple(int(x) for x in a[:, h]) for h in range(n)))


def is_magma_hom(phi: Sequence[int], src: FiniteMagma, dst: FiniteMagma) -> bool:
    """phi R_v = T_{phi(v)} phi for all v."""
    if len(phi) != src.order or any(not 0 <= x < dst.order for x in phi):
        return False
    for v in range(src.order):
        rv = src.right_mult[v]
        tv = dst.right_mult[phi[v]]
        for w in range(src.order):
            if phi[rv[w]] != tv[phi[w]]:
                return False
    return True


def rack_via_hom(q: RightQuasigroup) -> bool:
    """v -> R_v is a magma homomorphism into Conj S_V, evaluated pointwise."""
    perms = q.perms()
    for v in range(q.order):
        for w in range(q.order):
            if perms[perms[v](w)] != conjugate(perms[v], perms[w]):
                return False
    return True


def closed_under_conjugation(q: RightQuasigroup, allow_inverses: bool = False) -> bool:
    perms = q.perms()
    allowed = set(perms)
    if allow_inverses:
        allowed |= {inverse(p) for p in perms}
    return all(conjugate(a, b) in allowed for a in perms for b in perms)


def enumerate_right_quasigroups(n: int) -> Iterator[RightQuasigroup]:
    """
    Every labeled right quasigroup of order n, rows iterated over
    ``itertools.permutations`` order (lexicographic by permutation rank).
    """
    if n < 0:
        raise OrderOutOfRangeError("order must be non-negative")
    limit = get_settings().enumeration_limit
    if factorial(n) ** n > limit:
        raise OrderOutOfRangeError(f"(n!)^n = {factorial(n) ** n} exceeds the enumeration limit {limit}")
    rows = list(permutations(range(n)))
    for choice in product(rows, repeat=n):
        yield RightQuasigroup.model_construct(order=n, right_mult=choice)


def check_report(m: FiniteMagma) -> dict[str, bool]:
    """Every predicate from the algebraic preliminaries for one magma."""
    report = {
        "right_cancellative": is_right_cancellative(m),
        "right_divisible": is_right_divisible(m),
        "right_quasigroup": is_right_quasigroup(m),
        "rack": False,
        "quandle": False,
        "involutory": False,
        "kei": False,
        "rack_via_hom": False,
        "closed_under_conjugation": False,
    }
    if report["right_quasigroup"]:
        q = as_right_quasigroup(m)
        report.update(
            rack=is_rack(q),
            quandle=is_quandle(q),
            involutory=is_involutory(q),
            kei=is_kei(q),
            rack_via_hom=rack_via_hom(q),
            closed_under_conjugation=closed_under_conjugation(q),
        )
    return report
