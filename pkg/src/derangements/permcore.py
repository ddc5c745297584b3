"""Permutations, permutation groups closed from generators, and group actions.

Permutations are 0-based image tuples.  Products are read left to right:
``p * q`` applies ``p`` first, then ``q``, so every action here is a right
action, ``x . (g * h) == (x . g) . h``.
"""

from __future__ import annotations

import itertools
import json
import re
from math import factorial, gcd
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

from .errors import (
    CapExceeded,
    DegreeMismatch,
    InvalidGenerator,
    NotMaterialized,
    NotSubgroup,
    NotTransitive,
    SpecError,
)

DEFAULT_CAP = 2_000_000

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation(tuple):
    """A bijection of ``{0, ..., degree-1}`` stored as its image tuple.

    The plain constructor trusts its input; use :meth:`checked` on anything
    that came from outside.
    """

    __slots__ = ()

    @classmethod
    def checked(cls, images: Iterable[int]) -> "Permutation":
        images = tuple(images)
        if not images or sorted(images) != list(range(len(images))):
            raise InvalidGenerator(f"not a permutation of 0..{len(images) - 1}: {images}")
        return cls(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as ``"(0 1 2)(3 4)"``; ``"()"`` is the identity."""
        images = list(range(degree))
        stripped = _CYCLE_RE.sub("", text).strip()
        if stripped:
            raise InvalidGenerator(f"unparseable cycle notation: {text!r}")
        seen = set()
        for body in _CYCLE_RE.findall(text):
            pts = [int(tok) for tok in body.replace(",", " ").split()]
            for x in pts:
                if x in seen or not 0 <= x < degree:
                    raise InvalidGenerator(f"bad point {x} in {text!r}")
                seen.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, obj, degree: int | None = None) -> "Permutation":
        """Accept an image list or a cycle string."""
        if isinstance(obj, str):
            if degree is None:
                raise SpecError("cycle notation needs an explicit degree")
            return cls.from_cycles(obj, degree)
        p = cls.checked(obj)
        if degree is not None and len(p) != degree:
            raise DegreeMismatch(f"expected degree {degree}, got {len(p)}")
        return p

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(map(other.__getitem__, self))

    def __rmul__(self, other):
        return NotImplemented

    def __call__(self, point: int) -> int:
        return self[point]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, x in enumerate(self):
            inv[x] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(len(self))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self)
        out = []
        for start in range(len(self)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths, weakly decreasing, fixed points included."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // gcd(o, len(c))
        return o

    def fixed_points(self) -> int:
        return sum(1 for i, x in enumerate(self) if i == x)

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({list(self)})"


class ConjugacyClass(NamedTuple):
    representative: Hashable
    size: int


class PermGroup:
    """A permutation group of fixed degree.

    Normally built by :func:`close_group`, which materializes every element.
    Groups whose class table is known in closed form (large symmetric groups)
    may instead carry ``classes`` and a membership ``predicate`` without an
    element list; enumeration-based operations then raise ``NotMaterialized``.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], *,
                 elements: Sequence[Permutation] | None = None,
                 order: int | None = None,
                 classes: Sequence[ConjugacyClass] | None = None,
                 predicate: Callable[[Permutation], bool] | None = None,
                 name: str | None = None):
        self.degree = degree
        self.generators = tuple(generators)
        self.name = name
        self._elements = None
        self._index = None
        if elements is not None:
            self._elements = tuple(sorted(elements))
            self._index = frozenset(self._elements)
            if order is not None and order != len(self._elements):
                raise ValueError("order disagrees with element count")
            order = len(self._elements)
        if order is None:
            raise ValueError("order unknown for a non-materialized group")
        self.order = order
        self._classes = tuple(classes) if classes is not None else None
        self._predicate = predicate

    @property
    def is_materialized(self) -> bool:
        return self._elements is not None

    @property
    def elements(self) -> tuple[Permutation, ...]:
        if self._elements is None:
            raise NotMaterialized(f"{self.name or 'group'} has no element list")
        return self._elements

    @property
    def has_classes(self) -> bool:
        return self._classes is not None

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        if len(g) != self.degree:
            return False
        if self._index is not None:
            return g in self._index
        if self._predicate is not None:
            return self._predicate(g)
        raise NotMaterialized("membership needs an element list or a predicate")

    def __repr__(self) -> str:
        label = self.name or f"PermGroup(degree={self.degree})"
        return f"<{label} order={self.order}>"


def close_group(generators: Sequence, cap: int = DEFAULT_CAP, name: str | None = None,
                degree: int | None = None) -> PermGroup:
    """Enumerate the group generated by ``generators``.

    Raises ``CapExceeded`` as soon as more than ``cap`` elements appear.
    """
    if not generators:
        raise InvalidGenerator("generator list is empty")
    gens = [Permutation.parse(g, degree) for g in generators]
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise InvalidGenerator("generators have different degrees")
    ident = Permutation.identity(n)
    gens = [g for g in dict.fromkeys(gens) if g != ident] or [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = nxt
    return PermGroup(n, gens, elements=seen, name=name)


def subgroup(group: PermGroup, generators: Sequence, name: str | None = None,
             cap: int = DEFAULT_CAP) -> PermGroup:
    """Close ``generators`` after checking each lies in ``group``."""
    gens = [Permutation.parse(g, group.degree) for g in generators]
    for g in gens:
        if g not in group:
            raise NotSubgroup(f"{g} is not in {group!r}")
    return close_group(gens, cap=cap, name=name)


def symmetric_group(n: int, name: str | None = None) -> PermGroup:
    gens = [Permutation.identity(n)] if n < 2 else [
        Permutation.from_cycles("(0 1)", n),
        Permutation(list(range(1, n)) + [0]),
    ]
    return close_group(gens, name=name or f"S{n}")


def alternating_group(n: int, name: str | None = None) -> PermGroup:
    if n < 3:
        return close_group([Permutation.identity(n)], name=name or f"A{n}")
    gens = [Permutation.from_cycles("(0 1 2)", n)]
    if n > 3:
        cyc = list(range(n)) if n % 2 else list(range(1, n))
        gens.append(Permutation.from_cycles("(" + " ".join(map(str, cyc)) + ")", n))
    return close_group(gens, name=name or f"A{n}")


def cyclic_group(n: int, name: str | None = None) -> PermGroup:
    return close_group([Permutation(list(range(1, n)) + [0])], name=name or f"C{n}")


class GroupAction:
    """A group acting on a finite list of labelled points.

    ``image(g)`` returns the permutation of point indices induced by ``g``.
    Three kinds exist: the natural action on ``0..degree-1``, the action on
    right cosets of a subgroup, and an action on arbitrary hashable labels
    given by a function ``act(label, g)``.
    """

    def __init__(self, group: PermGroup, points: Sequence, kind: str,
                 image: Callable[[Permutation], Permutation], *,
                 subgroup: PermGroup | None = None, name: str | None = None):
        if len(points) < 2:
            raise ValueError("actions on fewer than two points are rejected")
        self.group = group
        self.points = tuple(points)
        self.kind = kind
        self.subgroup = subgroup
        self.name = name or (group.name and f"{group.name} on {len(points)} points")
        self._image = image
        self._gen_images = None

    @property
    def size(self) -> int:
        return len(self.points)

    def image(self, g: Permutation) -> Permutation:
        if len(g) != self.group.degree:
            raise DegreeMismatch(f"element of degree {len(g)} on a degree-{self.group.degree} group")
        return self._image(g)

    def generator_images(self) -> tuple[Permutation, ...]:
        if self._gen_images is None:
            self._gen_images = tuple(self.image(g) for g in self.group.generators)
        return self._gen_images

    def image_group(self, cap: int = DEFAULT_CAP) -> PermGroup:
        """The permutation group induced on the points."""
        return close_group(list(self.generator_images()), cap=cap,
                           name=self.name and f"image of {self.name}")

    def __repr__(self) -> str:
        return f"<GroupAction {self.name or self.kind} size={self.size}>"


def natural_action(group: PermGroup, name: str | None = None) -> GroupAction:
    return GroupAction(group, range(group.degree), "natural", lambda g: g,
                       name=name or (group.name and f"{group.name} natural"))


def label_action(group: PermGroup, labels: Sequence[Hashable],
                 act: Callable[[Hashable, Permutation], Hashable],
                 name: str | None = None) -> GroupAction:
    """Action on ``labels`` where ``act(x, g)`` is the image of label ``x``."""
    labels = tuple(labels)
    index = {x: i for i, x in enumerate(labels)}
    if len(index) != len(labels):
        raise ValueError("duplicate labels")

    def image(g):
        try:
            return Permutation(index[act(x, g)] for x in labels)
        except KeyError as exc:
            raise ValueError(f"labels are not closed under the action: {exc}") from None

    return GroupAction(group, labels, "labels", image, name=name)


def subset_action(group: PermGroup, k: int, name: str | None = None) -> GroupAction:
    """Action on the ``k``-element subsets of ``0..degree-1``."""
    labels = [frozenset(c) for c in itertools.combinations(range(group.degree), k)]
    return label_action(group, labels, lambda s, g: frozenset(g[i] for i in s),
                        name=name or (group.name and f"{group.name} on {k}-subsets"))


def composition_action(group: PermGroup, parts: Sequence[int],
                       name: str | None = None) -> GroupAction:
    """Action on ordered set partitions of the points into blocks of sizes ``parts``.

    This is the coset space of the Young subgroup with those block sizes.
    """
    n = group.degree
    if sum(parts) != n or any(p <= 0 for p in parts):
        raise ValueError(f"parts {parts} do not partition {n}")
    labels = []

    def build(prefix, remaining, rest):
        if not rest:
            labels.append(tuple(prefix))
            return
        for c in itertools.combinations(sorted(remaining), rest[0]):
            block = frozenset(c)
            build(prefix + [block], remaining - block, rest[1:])

    build([], frozenset(range(n)), list(parts))
    act = lambda comp, g: tuple(frozenset(g[i] for i in b) for b in comp)  # noqa: E731
    return label_action(group, labels, act,
                        name=name or (group.name and f"{group.name} on {tuple(parts)}-compositions"))


def coset_action(group: PermGroup, subgroup: PermGroup, name: str | None = None) -> GroupAction:
    """Action of ``group`` on the right cosets ``H x`` of ``subgroup``.

    Each coset is labelled by its lexicographically least element.
    """
    for h in subgroup.generators:
        if h not in group:
            raise NotSubgroup(f"{h} is not in {group!r}")
    h_elems = subgroup.elements
    coset_of = {}
    reps = []
    for g in group.elements:  # sorted, so the first unseen element is its coset's minimum
        if g in coset_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in h_elems:
            coset_of[h * g] = idx

    def image(x):
        return Permutation(coset_of[r * x] for r in reps)

    return GroupAction(group, reps, "cosets", image, subgroup=subgroup,
                       name=name or (group.name and subgroup.name
                                     and f"{group.name} on cosets of {subgroup.name}"))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True

    def classes(self) -> list[list[int]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values())


def orbits(action: GroupAction, generators: Sequence[Permutation] | None = None) -> list[list[int]]:
    """Orbits on point indices; ``generators`` restricts to the subgroup they generate."""
    images = action.generator_images() if generators is None else [action.image(g) for g in generators]
    uf = _UnionFind(action.size)
    for img in images:
        for x, y in enumerate(img):
            uf.union(x, y)
    return uf.classes()


def fixed_point_count(g: Permutation, action: GroupAction) -> int:
    return action.image(g).fixed_points()


def is_transitive(action: GroupAction) -> bool:
    return len(orbits(action)) == 1


def minimal_block(action: GroupAction, a: int, b: int) -> list[list[int]]:
    """The finest block system in which ``a`` and ``b`` share a block."""
    gens = action.generator_images()
    uf = _UnionFind(action.size)
    uf.union(a, b)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in gens:
            u, v = uf.find(g[x]), uf.find(g[y])
            if u != v:
                uf.union(u, v)
                queue.append((u, v))
    return uf.classes()


def block_systems(action: GroupAction) -> list[list[list[int]]]:
    """Nontrivial block systems found from the seeds ``{0, b}``.

    Every block system of a transitive action has a block through 0, so these
    seeds find one whenever any exists.
    """
    found = []
    for b in range(1, action.size):
        system = minimal_block(action, 0, b)
        if len(system) > 1 and system not in found:
            found.append(system)
    return found


def is_primitive(action: GroupAction) -> bool:
    if not is_transitive(action):
        return False
    return not block_systems(action)


def is_frobenius(action: GroupAction) -> bool:
    """Transitive, ``|G| > n``, and no non-identity element fixes two points."""
    if not is_transitive(action):
        raise NotTransitive(f"{action!r} is not transitive")
    if action.group.order <= action.size:
        return False
    for g in action.group.elements:
        if g.is_identity():
            continue
        if action.image(g).fixed_points() >= 2:
            return False
    return True


def conjugacy_classes(group: PermGroup) -> tuple[ConjugacyClass, ...]:
    """Classes sorted by (element order, least representative).

    Each class is the orbit of its least element under conjugation by the
    generators, which reaches the full class because the group is finite.
    """
    if group._classes is not None:
        return group._classes
    elems = group.elements
    pairs = [(s.inverse(), s) for s in group.generators]
    assigned = set()
    found = []
    for x in elems:
        if x in assigned:
            continue
        assigned.add(x)
        stack = [x]
        size = 1
        while stack:
            y = stack.pop()
            for s_inv, s in pairs:
                z = s_inv * y * s
                if z not in assigned:
                    assigned.add(z)
                    stack.append(z)
                    size += 1
        found.append(ConjugacyClass(x, size))
    found.sort(key=lambda c: (c.representative.order(), c.representative))
    group._classes = tuple(found)
    return group._classes


def symmetric_class_table(n: int) -> tuple[ConjugacyClass, ...]:
    """Classes of S_n from cycle types, with sizes n!/z_lambda."""
    table = []
    for lam in integer_partitions(n):
        images = []
        start = 0
        for part in lam:
            images.extend(range(start + 1, start + part))
            images.append(start)
            start += part
        table.append(ConjugacyClass(Permutation(images), factorial(n) // centralizer_size(lam)))
    table.sort(key=lambda c: (c.representative.order(), c.representative))
    return tuple(table)


def centralizer_size(parts: Sequence[int]) -> int:
    """z_lambda = prod i^{m_i} m_i! for a partition with multiplicities m_i."""
    z = 1
    for part in set(parts):
        m = list(parts).count(part)
        z *= part ** m * factorial(m)
    return z


def integer_partitions(n: int, largest: int | None = None):
    """Weakly decreasing partitions of n, in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in integer_partitions(n - first, first):
            yield (first,) + rest


def symmetric_group_by_classes(n: int, name: str | None = None) -> PermGroup:
    """S_n with its analytic class table and no element list."""
    gens = [Permutation.from_cycles("(0 1)", n), Permutation(list(range(1, n)) + [0])] if n > 1 else [
        Permutation.identity(n)]
    return PermGroup(n, gens, order=factorial(n), classes=symmetric_class_table(n),
                     predicate=lambda g: sorted(g) == list(range(n)), name=name or f"S{n}")


def is_normal(group: PermGroup, sub: PermGroup) -> bool:
    for s in group.generators:
        s_inv = s.inverse()
        for t in sub.generators:
            if s_inv * t * s not in sub:
                return False
    return True


def commutator_subgroup(group: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """Normal closure of the generator commutators."""
    gens = group.generators
    comms = {a.inverse() * b.inverse() * a * b for a in gens for b in gens}
    comms.discard(group.identity())
    if not comms:
        return close_group([group.identity()], cap=cap)
    sub = close_group(sorted(comms), cap=cap)
    while True:
        extra = {s.inverse() * t * s for s in gens for t in sub.generators} - set(sub.elements)
        if not extra:
            return sub
        sub = close_group(list(sub.generators) + sorted(extra), cap=cap)


def is_solvable(group: PermGroup) -> bool:
    g = group
    while g.order > 1:
        d = commutator_subgroup(g)
        if d.order == g.order:
            return False
        g = d
    return True


def parse_group_spec(doc, cap: int = DEFAULT_CAP) -> PermGroup:
    """Build a group from ``{"degree": n, "generators": [...], "name": ...}``.

    ``doc`` may be a dict or a JSON string.  Generators are image arrays or
    cycle strings.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SpecError(f"group spec is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecError("group spec must be an object")
    unknown = set(doc) - {"degree", "generators", "name"}
    if unknown:
        raise SpecError(f"unknown field(s) in group spec: {sorted(unknown)}")
    if "degree" not in doc:
        raise SpecError("group spec field 'degree' is missing")
    degree = doc["degree"]
    if not isinstance(degree, int) or degree < 1:
        raise SpecError("group spec field 'degree' must be a positive integer")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise SpecError("group spec field 'generators' must be a nonempty list")
    try:
        perms = [Permutation.parse(g, degree) for g in gens]
    except (InvalidGenerator, DegreeMismatch) as exc:
        raise SpecError(f"group spec field 'generators': {exc}") from None
    return close_group(perms, cap=cap, name=doc.get("name"))


def group_spec(group: PermGroup) -> dict:
    doc = {"degree": group.degree, "generators": [list(g) for g in group.generators]}
    if group.name:
        doc["name"] = group.name
    return doc
