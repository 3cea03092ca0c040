"""
Permutations of {0, ..., n-1}, generated permutation groups, and the dihedral
reflection machinery used for cycle graphs.

Composition convention: ``compose(p, q)`` applies ``q`` first, then ``p``, so
``compose(p, q).images[w] == p.images[q.images[w]]``. Every rack identity in
the package is written against this order.
"""
import threading
from collections import deque
from itertools import permutations as _permutations
from typing import Any, Iterable, Optional, Sequence

from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator, model_validator

from rackbench.config import get_settings
from rackbench.errors import (
    DegreeMismatchError,
    GroupTooLargeError,
    InvalidStructureError,
    OrderOutOfRangeError,
)


class Perm(BaseModel):
    """A bijection of {0, ..., n-1} in one-line image form."""

    model_config = ConfigDict(frozen=True)

    images: tuple[int, ...]

    @field_validator("images")
    @classmethod
    def _check_bijection(cls, images: tuple[int, ...]) -> tuple[int, ...]:
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection of range({len(images)}): {list(images)}")
        return images

    @classmethod
    def _trusted(cls, images: Iterable[int]) -> "Perm":
        return cls.model_construct(images=tuple(images))

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls._trusted(range(n))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]], one_based: bool = False) -> "Perm":
        """
        Build a permutation from disjoint cycles, e.g. ``from_cycles(3, [(1, 2)], one_based=True)``
        is the transposition written (12) in one-based cycle notation.
        """
        images = list(range(n))
        seen: set[int] = set()
        for cycle in cycles:
            points = [c - 1 for c in cycle] if one_based else list(cycle)
            for p in points:
                if not 0 <= p < n:
                    raise InvalidStructureError(f"cycle point {p} outside range({n})")
                if p in seen:
                    raise InvalidStructureError(f"cycles are not disjoint at point {p}")
                seen.add(p)
            for i, p in enumerate(points):
                images[p] = points[(i + 1) % len(points)]
        return cls._trusted(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, w: int) -> int:
        return self.images[w]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def is_identity(self) -> bool:
        return all(i == w for w, i in enumerate(self.images))

    def fixed_points(self) -> frozenset[int]:
        return frozenset(w for w, i in enumerate(self.images) if i == w)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen: set[int] = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            w = self.images[start]
            while w != start:
                cycle.append(w)
                seen.add(w)
                w = self.images[w]
            if len(cycle) > 1:
                out.append(tuple(cycle))
        return out

    def order(self) -> int:
        result = 1
        for cycle in self.cycles():
            a, b = result, len(cycle)
            while b:
                a, b = b, a % b
            result = result * len(cycle) // a
        return result

    def to_cycle_string(self, one_based: bool = True) -> str:
        cycles = self.cycles()
        if not cycles:
            return "id"
        shift = 1 if one_based else 0
        # points are run together while every label is a single digit
        sep = "" if self.degree - 1 + shift <= 9 else " "
        return "".join(
            "(" + sep.join(str(w + shift) for w in cycle) + ")" for cycle in cycles
        )

    def __str__(self) -> str:
        return self.to_cycle_string(one_based=False)


def compose(p: Perm, q: Perm) -> Perm:
    """Apply q first, then p."""
    if p.degree != q.degree:
        raise DegreeMismatchError(f"cannot compose degree {p.degree} with degree {q.degree}")
    pi = p.images
    return Perm._trusted(pi[x] for x in q.images)


def inverse(p: Perm) -> Perm:
    images = [0] * p.degree
    for w, i in enumerate(p.images):
        images[i] = w
    return Perm._trusted(images)


def conjugate(g: Perm, h: Perm) -> Perm:
    """g h g^-1."""
    return compose(compose(g, h), inverse(g))


def identity(n: int) -> Perm:
    return Perm.identity(n)


def closure(
    generators: Iterable[Perm],
    cap: Optional[int] = None,
    degree: Optional[int] = None,
) -> frozenset[Perm]:
    """
    Breadth-first closure of a generating set under composition.

    Args:
        generators: Permutations sharing one degree
        cap: Maximum number of elements before giving up (settings default)
        degree: Degree to use when ``generators`` is empty

    Returns:
        The full generated subgroup, always containing the identity
    """
    if cap is None:
        cap = get_settings().closure_cap
    gens = list(dict.fromkeys(generators))
    degrees = {g.degree for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise DegreeMismatchError(f"generators have mixed degrees {sorted(degrees)}")
    n = degrees.pop() if degrees else 0

    ident = Perm.identity(n)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise GroupTooLargeError(cap)
                queue.append(y)
    return frozenset(seen)


class PermGroup(BaseModel):
    """A permutation group given by generators; elements are enumerated on demand."""

    model_config = ConfigDict(frozen=True)

    degree: int
    generators: tuple[Perm, ...] = ()
    cap: Optional[int] = None

    _elements: Optional[tuple[Perm, ...]] = PrivateAttr(default=None)
    _lock: Any = PrivateAttr(default_factory=threading.Lock)

    @model_validator(mode="after")
    def _check_degrees(self) -> "PermGroup":
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        for g in self.generators:
            if g.degree != self.degree:
                raise ValueError(f"generator {list(g.images)} does not have degree {self.degree}")
        return self

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Perm]) -> "PermGroup":
        """Wrap an already closed element set (automorphism groups are built this way)."""
        ordered = tuple(sorted(set(elements)))
        group = cls(degree=degree, generators=tuple(p for p in ordered if not p.is_identity()))
        group._elements = ordered or (Perm.identity(degree),)
        return group

    def elements(self) -> tuple[Perm, ...]:
        """All group elements, sorted lexicographically by image sequence."""
        if self._elements is None:
            with self._lock:
                if self._elements is None:
                    found = closure(self.generators, cap=self.cap, degree=self.degree)
                    self._elements = tuple(sorted(found))
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def contains(self, p: Perm) -> bool:
        return p in self.element_set()

    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements())

    def to_json(self) -> dict:
        return {"degree": self.degree, "generators": [list(g.images) for g in self.generators]}


def symmetric_group(n: int) -> PermGroup:
    return PermGroup.from_elements(n, (Perm._trusted(p) for p in _permutations(range(n))))


def cyclic_group(n: int) -> PermGroup:
    """The regular cyclic group generated by w -> w+1 mod n."""
    if n < 1:
        raise OrderOutOfRangeError("cyclic group needs n >= 1")
    return PermGroup(degree=n, generators=(Perm._trusted((w + 1) % n for w in range(n)),))


def dihedral_group(n: int) -> PermGroup:
    """D_n acting on the cycle vertices 0..n-1 (rotation w+1, reflection -w)."""
    if n < 3:
        raise OrderOutOfRangeError(f"dihedral group needs n >= 3, got {n}")
    rotation = Perm._trusted((w + 1) % n for w in range(n))
    reflection = Perm._trusted((-w) % n for w in range(n))
    return PermGroup(degree=n, generators=(rotation, reflection))


class Reflection(BaseModel):
    model_config = ConfigDict(frozen=True)

    perm: Perm
    axis_vertices: frozenset[int]

    @model_validator(mode="after")
    def _check_involution(self) -> "Reflection":
        if self.perm.is_identity() or not compose(self.perm, self.perm).is_identity():
            raise ValueError("a reflection is a nontrivial involution")
        if self.axis_vertices != self.perm.fixed_points():
            raise ValueError("axis_vertices must equal the fixed points of perm")
        return self


def reflections(n: int) -> list[Reflection]:
    """The n reflections w -> (k - w) mod n of D_n, ordered by k."""
    if n < 3:
        raise OrderOutOfRangeError(f"reflections need n >= 3, got {n}")
    out = []
    for k in range(n):
        perm = Perm._trusted((k - w) % n for w in range(n))
        out.append(Reflection(perm=perm, axis_vertices=perm.fixed_points()))
    return out


def reflection_subgroups(n: int) -> list[PermGroup]:
    """
    Every subgroup of D_n that is trivial or generated by reflections.

    Subgroups are grown one reflection at a time from the singletons, so every
    generating subset is covered without visiting all 2^n of them; results are
    deduplicated by element set and sorted by (order, elements).
    """
    settings = get_settings()
    if n > settings.reflection_subgroup_max_n:
        raise OrderOutOfRangeError(
            f"reflection subgroups capped at n <= {settings.reflection_subgroup_max_n}, got {n}"
        )
    refls = [r.perm for r in reflections(n)]

    found: dict[frozenset[Perm], tuple[Perm, ...]] = {
        frozenset({Perm.identity(n)}): (),
    }
    queue: deque[tuple[Perm, ...]] = deque()
    for r in refls:
        elems = closure([r], degree=n)
        if elems not in found:
            found[elems] = (r,)
            queue.append((r,))
    while queue:
        gens = queue.popleft()
        elems = closure(gens, degree=n)
        for r in refls:
            if r in elems:
                continue
            bigger = closure(gens + (r,), degree=n)
            if bigger not in found:
                found[bigger] = gens + (r,)
                queue.append(gens + (r,))

    groups = []
    for elems, gens in sorted(found.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        group = PermGroup(degree=n, generators=gens)
        group._elements = tuple(sorted(elems))
        groups.append(group)
    return groups
