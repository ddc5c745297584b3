"""Weyl groups of types A, B/C, D and G2 as permutation groups, and the
class-mass computation over a coset of a reflection subgroup.

Type B(r) acts on 2r points: point i stands for +e_i and point i + r for
-e_i.  D(r) is the even-sign-change subgroup.  G2 is the dihedral group of
order 12 acting on the vertices of a hexagon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Hashable, NamedTuple, Sequence

from .derange import delta
from .errors import BadPartition, NotElement, NotSubgroup, VerificationFailure
from .permcore import (
    DEFAULT_CAP,
    ConjugacyClass,
    Permutation,
    PermGroup,
    centralizer_size,
    close_group,
    composition_action,
    conjugacy_classes,
    coset_action,
    integer_partitions,
)


@dataclass(frozen=True)
class SignedPerm:
    """w(e_i) = signs[i] * e_{perm[i]}."""

    perm: Permutation
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.perm) != len(self.signs) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1, one per point")

    @property
    def rank(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        # self first, then other
        perm = self.perm * other.perm
        signs = tuple(self.signs[i] * other.signs[self.perm[i]] for i in range(self.rank))
        return SignedPerm(perm, signs)

    def inverse(self) -> "SignedPerm":
        inv = self.perm.inverse()
        return SignedPerm(inv, tuple(self.signs[inv[j]] for j in range(self.rank)))

    @property
    def sign_product(self) -> int:
        out = 1
        for s in self.signs:
            out *= s
        return out

    def to_permutation(self) -> Permutation:
        r = self.rank
        images = [0] * (2 * r)
        for i in range(r):
            j = self.perm[i]
            pos, neg = (j, j + r) if self.signs[i] == 1 else (j + r, j)
            images[i] = pos
            images[i + r] = neg
        return Permutation(images)

    @classmethod
    def from_permutation(cls, w: Permutation) -> "SignedPerm":
        r = len(w) // 2
        perm = Permutation(w[i] % r for i in range(r))
        signs = tuple(1 if w[i] < r else -1 for i in range(r))
        return cls(perm, signs)

    def signed_cycle_type(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(lambda+, lambda-): cycle lengths split by the sign product along the cycle."""
        plus, minus = [], []
        for cyc in self.perm.cycles(include_fixed=True):
            sign = 1
            for i in cyc:
                sign *= self.signs[i]
            (plus if sign == 1 else minus).append(len(cyc))
        return tuple(sorted(plus, reverse=True)), tuple(sorted(minus, reverse=True))


def is_signed_permutation(w: Permutation) -> bool:
    if len(w) % 2:
        return False
    r = len(w) // 2
    return all(w[i + r] == (w[i] + r) % (2 * r) for i in range(r))


class WeylClass(NamedTuple):
    label: Hashable
    representative: Permutation
    size: int


def _b_representative(plus: Sequence[int], minus: Sequence[int]) -> Permutation:
    r = sum(plus) + sum(minus)
    perm = [0] * r
    signs = [1] * r
    start = 0
    for part, negative in [(p, False) for p in plus] + [(p, True) for p in minus]:
        for k in range(part):
            perm[start + k] = start + (k + 1) % part
        if negative:
            signs[start + part - 1] = -1
        start += part
    return SignedPerm(Permutation(perm), tuple(signs)).to_permutation()


def _b_class_size(r: int, plus, minus) -> int:
    return (2 ** r * factorial(r)) // (centralizer_size(plus) * centralizer_size(minus)
                                       * 2 ** (len(plus) + len(minus)))


def _splits_in_d(plus, minus) -> bool:
    return not minus and all(p % 2 == 0 for p in plus)


def _sign_flip(r: int) -> Permutation:
    return SignedPerm(Permutation.identity(r), (-1,) + (1,) * (r - 1)).to_permutation()


class WeylGroup:
    """A Weyl group with an analytic class table and lazy materialization."""

    def __init__(self, kind: str, rank: int, cap: int = DEFAULT_CAP):
        self.kind = kind
        self.rank = rank
        self.cap = cap
        self._group: PermGroup | None = None
        self._brute_labels: dict | None = None
        if kind == "A":
            if rank < 1:
                raise ValueError("type A needs rank >= 1")
            n = rank + 1
            self.degree = n
            self.order = factorial(n)
            self.generators = tuple(Permutation.from_cycles(f"({i} {i + 1})", n) for i in range(rank))
        elif kind in ("B", "C", "D"):
            if rank < 2 and kind == "D":
                raise ValueError("type D needs rank >= 2")
            if rank < 1:
                raise ValueError("rank must be positive")
            self.kind = "D" if kind == "D" else "B"
            r = rank
            self.degree = 2 * r
            swaps = [SignedPerm(Permutation.from_cycles(f"({i} {i + 1})", r), (1,) * r) for i in range(r - 1)]
            if self.kind == "B":
                self.order = 2 ** r * factorial(r)
                extra = SignedPerm(Permutation.identity(r), (1,) * (r - 1) + (-1,))
            else:
                self.order = 2 ** (r - 1) * factorial(r)
                extra = SignedPerm(Permutation.from_cycles(f"({r - 2} {r - 1})", r),
                                   (1,) * (r - 2) + (-1, -1))
            self.generators = tuple(w.to_permutation() for w in swaps + [extra])
        elif kind == "G2":
            self.rank = 2
            self.degree = 6
            self.order = 12
            # s_a first: it is the long reflection by convention
            self.generators = (Permutation((-i) % 6 for i in range(6)),
                               Permutation((1 - i) % 6 for i in range(6)))
        else:
            raise ValueError(f"unsupported Weyl type {kind!r}")
        self.classes = self._class_table()

    def __repr__(self) -> str:
        return f"<WeylGroup {self.name} order={self.order}>"

    @property
    def name(self) -> str:
        return "G2" if self.kind == "G2" else f"{self.kind}({self.rank})"

    def __contains__(self, w) -> bool:
        if len(w) != self.degree or sorted(w) != list(range(self.degree)):
            return False
        if self.kind == "A":
            return True
        if self.kind == "G2":
            return w in self.materialize()
        if not is_signed_permutation(w):
            return False
        return self.kind == "B" or SignedPerm.from_permutation(w).sign_product == 1

    def materialize(self) -> PermGroup:
        if self._group is None:
            self._group = close_group(list(self.generators), cap=self.cap, name=self.name)
        return self._group

    def as_perm_group(self) -> PermGroup:
        """PermGroup carrying the class table; materialized only if already built."""
        table = tuple(ConjugacyClass(c.representative, c.size) for c in self.classes)
        if self._group is not None:
            g = self._group
            return PermGroup(self.degree, self.generators, elements=g.elements, classes=table, name=self.name)
        return PermGroup(self.degree, self.generators, order=self.order, classes=table,
                         predicate=self.__contains__, name=self.name)

    # class tables

    def _class_table(self) -> tuple[WeylClass, ...]:
        if self.kind == "A":
            n = self.degree
            out = []
            for lam in integer_partitions(n):
                images, start = [], 0
                for part in lam:
                    images.extend(range(start + 1, start + part))
                    images.append(start)
                    start += part
                out.append(WeylClass(lam, Permutation(images), factorial(n) // centralizer_size(lam)))
            return tuple(out)
        if self.kind == "G2":
            return self._g2_table()
        r = self.rank
        out = []
        for a in range(r, -1, -1):
            for plus in integer_partitions(a):
                for minus in integer_partitions(r - a):
                    if self.kind == "D" and len(minus) % 2:
                        continue
                    rep = _b_representative(plus, minus)
                    size = _b_class_size(r, plus, minus)
                    if self.kind == "D" and _splits_in_d(plus, minus):
                        t = _sign_flip(r)
                        other = t * rep * t
                        out.append(WeylClass((plus, minus, "+"), rep, size // 2))
                        out.append(WeylClass((plus, minus, "-"), other, size // 2))
                    else:
                        out.append(WeylClass((plus, minus) if self.kind == "B" else (plus, minus, ""),
                                             rep, size))
        return tuple(out)

    def _g2_table(self) -> tuple[WeylClass, ...]:
        g = self.materialize()
        long_r, short_r = self.generators
        out = []
        for cls in conjugacy_classes(g):
            w = cls.representative
            members = _class_members(g, w)
            if w.is_identity():
                label = "identity"
            elif long_r in members:
                label = "long-reflection"
            elif short_r in members:
                label = "short-reflection"
            elif w.order() == 2:
                label = "central-involution"
            else:
                label = f"rotation-order-{w.order()}"
            out.append(WeylClass(label, w, cls.size))
        return tuple(out)

    def class_label(self, w: Permutation) -> Hashable:
        if self.kind == "A":
            return w.cycle_type()
        if self.kind == "G2":
            if self._brute_labels is None:
                g = self.materialize()
                self._brute_labels = {x: c.label for c in self.classes for x in _class_members(g, c.representative)}
            return self._brute_labels[w]
        plus, minus = SignedPerm.from_permutation(w).signed_cycle_type()
        if self.kind == "B":
            return plus, minus
        if not _splits_in_d(plus, minus):
            return plus, minus, ""
        if self._brute_labels is None:
            g = self.materialize()
            self._brute_labels = {}
            for c in self.classes:
                if c.label[2]:
                    for x in _class_members(g, c.representative):
                        self._brute_labels[x] = c.label
        return self._brute_labels[w]

    def class_size(self, label) -> int:
        for c in self.classes:
            if c.label == label:
                return c.size
        raise KeyError(label)


def _class_members(group: PermGroup, w: Permutation) -> set:
    pairs = [(s.inverse(), s) for s in group.generators]
    seen = {w}
    stack = [w]
    while stack:
        y = stack.pop()
        for s_inv, s in pairs:
            z = s_inv * y * s
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def weyl_group(kind: str, rank: int = 2, cap: int = DEFAULT_CAP) -> WeylGroup:
    return WeylGroup(kind, rank, cap=cap)


def brute_class_census(W: WeylGroup) -> dict:
    """Class sizes found by enumeration, grouped by the analytic label with
    any D-splitting suffix dropped.  Used to validate the analytic tables."""
    census: dict = {}
    for cls in conjugacy_classes(W.materialize()):
        label = W.class_label(cls.representative)
        key = label[:2] if W.kind == "D" else label
        census.setdefault(key, []).append(cls.size)
    return {k: sorted(v) for k, v in census.items()}


def analytic_class_census(W: WeylGroup) -> dict:
    census: dict = {}
    for c in W.classes:
        key = c.label[:2] if W.kind == "D" else c.label
        census.setdefault(key, []).append(c.size)
    return {k: sorted(v) for k, v in census.items()}


class YoungSubgroup(PermGroup):
    """S_{parts[0]} x S_{parts[1]} x ... on consecutive blocks."""

    def __init__(self, parts: Sequence[int]):
        self.parts = tuple(parts)
        n = sum(self.parts)
        blocks, start = [], 0
        for p in self.parts:
            blocks.append(list(range(start, start + p)))
            start += p
        gens = [Permutation.from_cycles(f"({b[i]} {b[i + 1]})", n) for b in blocks for i in range(len(b) - 1)]
        elements = []
        for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
            images = [0] * n
            for block, img in zip(blocks, choice):
                for src, dst in zip(block, img):
                    images[src] = dst
            elements.append(Permutation(images))
        super().__init__(n, gens or [Permutation.identity(n)], elements=elements,
                         name="Y" + "x".join(map(str, self.parts)))


def young_subgroup(W: WeylGroup, parts: Sequence[int]) -> YoungSubgroup:
    if W.kind != "A":
        raise BadPartition("Young subgroups live in type A")
    parts = tuple(parts)
    if not parts or any(not isinstance(p, int) or p <= 0 for p in parts) or sum(parts) != W.degree:
        raise BadPartition(f"{parts} is not a composition of {W.degree}")
    return YoungSubgroup(parts)


def d_in_b(r: int) -> PermGroup:
    """D(r) as a subgroup of B(r), with its elements listed directly."""
    if r < 2:
        raise ValueError("D(r) inside B(r) needs r >= 2")
    elements = []
    for perm in itertools.permutations(range(r)):
        p = Permutation(perm)
        for signs in itertools.product((1, -1), repeat=r):
            if signs.count(-1) % 2 == 0:
                elements.append(SignedPerm(p, signs).to_permutation())
    return PermGroup(2 * r, weyl_group("D", r).generators, elements=elements, name=f"D({r})")


def long_a2_subgroup(W: WeylGroup) -> PermGroup:
    """The reflection subgroup of G2 generated by its long reflections."""
    if W.kind != "G2":
        raise ValueError("long A2 subgroup is defined for G2 only")
    s = W.generators[0]
    rot = Permutation((i + 2) % 6 for i in range(6))
    # the long reflections are the conjugates of s: i -> -i, 2-i, 4-i
    return close_group([s, s * rot], name="A2 long")


@dataclass(frozen=True)
class ClassMassReport:
    meeting_classes: tuple[WeylClass, ...]
    mass: Fraction
    limiting_delta: Fraction


def class_mass(W: WeylGroup, W0: PermGroup, tau: Permutation | None = None) -> ClassMassReport:
    """Total size, over |W|, of the W-classes that meet the coset tau * W0."""
    for g in W0.generators:
        if g not in W:
            raise NotSubgroup(f"{g} is not in {W.name}")
    if tau is None:
        tau = Permutation.identity(W.degree)
    elif tau not in W:
        raise NotElement(f"{tau} is not in {W.name}")
    if tau.is_identity():
        labels = {W.class_label(w) for w in W0.elements}
    else:
        labels = {W.class_label(tau * w) for w in W0.elements}
    meeting = tuple(c for c in W.classes if c.label in labels)
    mass = Fraction(sum(c.size for c in meeting), W.order)
    return ClassMassReport(meeting, mass, 1 - mass)


def limiting_delta_parabolic(W: WeylGroup, W0: PermGroup) -> Fraction:
    """delta(W, W/W0) from the coset action, checked against 1 - class mass."""
    if isinstance(W0, YoungSubgroup) and W.kind == "A":
        action = composition_action(W.as_perm_group(), W0.parts)
    else:
        G = W.materialize()
        action = coset_action(G, W0)
    value = delta(action).delta
    mass = class_mass(W, W0)
    if value != mass.limiting_delta:
        raise VerificationFailure(f"delta {value} != 1 - mass {mass.limiting_delta}")
    return value
