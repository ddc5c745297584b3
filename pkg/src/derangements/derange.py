"""Derangement proportions in transitive actions and in generating cosets.

Also holds the exceptionality test, the Hall-subgroup construction of
exceptional triples, and the corpus-level verification suites.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import mpmath

from .errors import (
    CapExceeded,
    NoComplementFound,
    NotElement,
    NotGeneratingCoset,
    NotHall,
    NotNormal,
    NotSubgroup,
    NotTransitive,
    VerificationFailure,
)
from .permcore import (
    GroupAction,
    Permutation,
    PermGroup,
    _UnionFind,
    close_group,
    conjugacy_classes,
    coset_action,
    is_normal,
    is_solvable,
    is_transitive,
    orbits,
)


class BoundStatus(enum.Enum):
    ZERO = "zero"
    BELOW_1_N = "below-1/n"
    EQUALS_1_N = "equals-1/n"
    BETWEEN = "in-(1/n,2/n]"
    ABOVE_2_N = "above-2/n"


def classify(delta: Fraction, n: int) -> BoundStatus:
    if delta == 0:
        return BoundStatus.ZERO
    if delta < Fraction(1, n):
        return BoundStatus.BELOW_1_N
    if delta == Fraction(1, n):
        return BoundStatus.EQUALS_1_N
    if delta <= Fraction(2, n):
        return BoundStatus.BETWEEN
    return BoundStatus.ABOVE_2_N


@dataclass(frozen=True)
class DerangementReport:
    delta: Fraction
    derangements: int
    total: int
    n: int
    status: BoundStatus
    order: int
    frobenius: bool | None = None

    @property
    def frobenius_full(self) -> bool:
        """Frobenius of order n(n-1)."""
        return bool(self.frobenius) and self.order == self.n * (self.n - 1)

    @property
    def frobenius_half(self) -> bool:
        """Frobenius of order n(n-1)/2."""
        return bool(self.frobenius) and 2 * self.order == self.n * (self.n - 1)


def delta(action: GroupAction, method: str = "auto") -> DerangementReport:
    """Exact proportion of group elements fixing no point.

    ``method="scan"`` walks every element; ``"classes"`` weights one
    representative per conjugacy class.  ``"auto"`` uses classes when they are
    already known and scans otherwise.
    """
    if not is_transitive(action):
        raise NotTransitive(f"{action!r} is not transitive")
    group = action.group
    n = action.size
    if method == "auto":
        method = "classes" if group.has_classes else "scan"
    count = 0
    worst = 0  # most fixed points of a non-identity element
    if method == "scan":
        for g in group.elements:
            fixed = action.image(g).fixed_points()
            if fixed == 0:
                count += 1
            elif fixed > worst and not g.is_identity():
                worst = fixed
    elif method == "classes":
        for cls in conjugacy_classes(group):
            fixed = action.image(cls.representative).fixed_points()
            if fixed == 0:
                count += cls.size
            elif fixed > worst and not cls.representative.is_identity():
                worst = fixed
    else:
        raise ValueError(f"unknown method {method!r}")
    d = Fraction(count, group.order)
    frob = group.order > n and worst <= 1
    return DerangementReport(d, count, group.order, n, classify(d, n), group.order, frob)


@dataclass(frozen=True)
class CosetSetting:
    """A normal subgroup ``normal`` of ``ambient`` and a coset ``rep * normal``
    generating the quotient, with ``ambient`` acting through ``action``.

    Transitivity is not checked here; operations that need it check it.
    """

    ambient: PermGroup
    normal: PermGroup
    rep: Permutation
    action: GroupAction
    name: str | None = None

    def __post_init__(self):
        if self.action.group is not self.ambient:
            raise ValueError("the action must belong to the ambient group")
        for g in self.normal.generators:
            if g not in self.ambient:
                raise NotSubgroup(f"{g} is not in the ambient group")
        if not is_normal(self.ambient, self.normal):
            raise NotNormal("normal subgroup is not normalized by the ambient generators")
        if self.rep not in self.ambient:
            raise NotElement(f"{self.rep} is not in the ambient group")
        k = 1
        power = self.rep
        while power not in self.normal:
            power = power * self.rep
            k += 1
        if k * self.normal.order != self.ambient.order:
            raise NotGeneratingCoset(
                f"coset of {self.rep} has order {k} in a quotient of order "
                f"{self.ambient.order // self.normal.order}")

    @property
    def n(self) -> int:
        return self.action.size

    def coset(self) -> list[Permutation]:
        return [self.rep * g for g in self.normal.elements]

    def with_rep(self, rep: Permutation) -> "CosetSetting":
        return CosetSetting(self.ambient, self.normal, rep, self.action, self.name)


def _require_transitive(setting: CosetSetting):
    if not is_transitive(setting.action):
        raise NotTransitive("ambient group is not transitive")
    if len(orbits(setting.action, setting.normal.generators)) != 1:
        raise NotTransitive("normal subgroup is not transitive")


def coset_delta(setting: CosetSetting) -> DerangementReport:
    """Proportion of derangements inside the coset ``rep * normal``."""
    _require_transitive(setting)
    image = setting.action.image
    count = sum(1 for g in setting.coset() if image(g).fixed_points() == 0)
    total = setting.normal.order
    d = Fraction(count, total)
    return DerangementReport(d, count, total, setting.n, classify(d, setting.n), setting.ambient.order)


def common_orbit_count(action: GroupAction, big: Sequence[Permutation],
                       small: Sequence[Permutation]) -> int:
    """Number of orbits of <big> that are also orbits of <small>."""
    small_orbits = {frozenset(o) for o in orbits(action, small)}
    return sum(1 for o in orbits(action, big) if frozenset(o) in small_orbits)


def coset_fixed_point_sum(setting: CosetSetting) -> tuple[int, int]:
    """Return ``(sum of fixed points over the coset, c)``.

    ``c`` counts orbits shared by the ambient and normal groups and is found
    from the orbits alone; the sum must equal ``|normal| * c``.
    """
    image = setting.action.image
    total = sum(image(g).fixed_points() for g in setting.coset())
    c = common_orbit_count(setting.action, setting.ambient.generators, setting.normal.generators)
    if total != setting.normal.order * c:
        raise VerificationFailure(
            f"fixed-point sum {total} != {setting.normal.order} * {c} for {setting.name}")
    return total, c


def stabilizer_common_orbits(setting: CosetSetting, point: int = 0) -> int:
    """Count orbits shared by the point stabilizer H in the ambient group and
    K = H meet normal.  Always at least 1 (the point itself)."""
    image = setting.action.image
    stab = [a for a in setting.ambient.elements if image(a)[point] == point]
    kset = [a for a in stab if a in setting.normal]
    return common_orbit_count(setting.action, stab, kset)


def _orbitals(images: Sequence[Permutation], n: int) -> _UnionFind:
    uf = _UnionFind(n * n)
    for img in images:
        for x in range(n):
            gx = img[x] * n
            base = x * n
            for y in range(n):
                uf.union(base + y, gx + img[y])
    return uf


@dataclass(frozen=True)
class ExceptionalityCertificate:
    exceptional: bool
    common_orbitals: tuple[tuple[tuple[int, int], int], ...]  # (representative pair, size)

    def __bool__(self) -> bool:
        return self.exceptional


def is_exceptional(setting: CosetSetting) -> ExceptionalityCertificate:
    """True when the ambient and normal groups share no orbital except the diagonal."""
    _require_transitive(setting)
    n = setting.n
    a_uf = _orbitals(setting.action.generator_images(), n)
    g_uf = _orbitals([setting.action.image(g) for g in setting.normal.generators], n)
    a_classes: dict[int, list[int]] = {}
    for pair in range(n * n):
        a_classes.setdefault(a_uf.find(pair), []).append(pair)
    common = []
    for members in a_classes.values():
        root = g_uf.find(members[0])
        if all(g_uf.find(m) == root for m in members):
            first = min(members)
            common.append(((first // n, first % n), len(members)))
    common.sort()
    nontrivial = [c for c in common if c[0][0] != c[0][1]]
    return ExceptionalityCertificate(not nontrivial, tuple(common))


def subgroup_from_elements(elements: Sequence[Permutation], name: str | None = None) -> PermGroup:
    """Wrap a known subgroup's element list, choosing a short generating set."""
    elements = sorted(elements)
    ident = Permutation.identity(len(elements[0]))
    gens: list[Permutation] = []
    current = {ident}
    for x in elements:
        if x not in current:
            gens.append(x)
            current = set(close_group(gens).elements)
    return PermGroup(len(ident), gens or [ident], elements=elements, name=name)


def _find_complement(ambient: PermGroup, m: int, cap_pairs: int = 200_000) -> PermGroup:
    cands = [x for x in ambient.elements if not x.is_identity() and m % x.order() == 0]
    for x in cands:
        if x.order() == m:
            return close_group([x])
    tried = 0
    for size in (2, 3):
        for combo in itertools.combinations(cands, size):
            tried += 1
            if tried > cap_pairs:
                break
            try:
                d = close_group(list(combo), cap=m)
            except CapExceeded:
                continue
            if d.order == m:
                return d
    raise NoComplementFound(f"no subgroup of order {m} found")


def exceptional_from_hall(ambient: PermGroup, normal: PermGroup, name: str | None = None) -> CosetSetting:
    """Build the exceptional triple from a normal Hall subgroup.

    A complement D is located by search, H is its normalizer, and the
    ambient group acts on the cosets of H.  The coset representative is a
    generator of D, which needs D cyclic.
    """
    if not is_normal(ambient, normal):
        raise NotNormal("subgroup is not normal")
    m, rem = divmod(ambient.order, normal.order)
    if rem or m == 1 or gcd(m, normal.order) != 1:
        raise NotHall(f"|G| = {normal.order} and index {m} are not coprime with a proper quotient")
    comp = _find_complement(ambient, m)
    comp_set = set(comp.elements)
    normalizer = [a for a in ambient.elements
                  if all(a.inverse() * d * a in comp_set for d in comp.generators)]
    h = subgroup_from_elements(normalizer, name="N(D)")
    action = coset_action(ambient, h, name=name and f"{name} on cosets of N(D)")
    gens = [x for x in comp.elements if x.order() == m]
    if not gens:
        raise NotGeneratingCoset("complement is not cyclic, so no single coset generates the quotient")
    return CosetSetting(ambient, normal, gens[0], action, name=name)


@dataclass(frozen=True)
class CheckResult:
    instance: str
    criterion: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def add(self, instance, criterion, passed, detail=""):
        self.results.append(CheckResult(instance, criterion, bool(passed), detail))


LOWER_BOUND = "delta >= 1/n"
EQUALITY_CASE = "delta = 1/n iff Frobenius of order n(n-1)"
TWO_OVER_N = "n > 6: delta > 2/n unless Frobenius of order n(n-1) or n(n-1)/2"
COSET_BOUND = "coset delta is 0 or >= 1/n"
FIXED_POINT_SUM = "coset fixed-point sum = |G| c"
NOT_EXCEPTIONAL_BOUND = "not exceptional => coset delta >= 1/n"
ZERO_IFF_EXCEPTIONAL = "coset delta = 0 iff exceptional"
STABILIZER_BOUND = "coset delta >= (d-1)/n"


def check_action_bounds(action: GroupAction, report: SuiteReport, name: str | None = None) -> DerangementReport | None:
    name = name or action.name or repr(action)
    try:
        rep = delta(action)
    except Exception as exc:  # recorded, never skipped
        report.add(name, LOWER_BOUND, False, f"{type(exc).__name__}: {exc}")
        return None
    n = rep.n
    report.add(name, LOWER_BOUND, rep.delta >= Fraction(1, n), f"delta={rep.delta}, n={n}")
    if n > 2:
        equal = rep.delta == Fraction(1, n)
        report.add(name, EQUALITY_CASE, equal == rep.frobenius_full,
                   f"delta={rep.delta}, frobenius={rep.frobenius}, order={rep.order}")
    if n > 6:
        ok = rep.delta > Fraction(2, n) or rep.frobenius_full or rep.frobenius_half
        report.add(name, TWO_OVER_N, ok, f"delta={rep.delta}, 2/n={Fraction(2, n)}, order={rep.order}")
    return rep


def check_coset_setting(setting: CosetSetting, report: SuiteReport) -> DerangementReport | None:
    name = setting.name or repr(setting)
    try:
        total, c = coset_fixed_point_sum(setting)
        report.add(name, FIXED_POINT_SUM, True, f"sum={total}, |G|={setting.normal.order}, c={c}")
    except VerificationFailure as exc:
        report.add(name, FIXED_POINT_SUM, False, str(exc))
    try:
        rep = coset_delta(setting)
        cert = is_exceptional(setting)
    except Exception as exc:
        report.add(name, COSET_BOUND, False, f"{type(exc).__name__}: {exc}")
        return None
    n = setting.n
    report.add(name, COSET_BOUND, rep.delta == 0 or rep.delta >= Fraction(1, n), f"delta={rep.delta}")
    if not cert.exceptional:
        report.add(name, NOT_EXCEPTIONAL_BOUND, rep.delta >= Fraction(1, n), f"delta={rep.delta}")
    report.add(name, ZERO_IFF_EXCEPTIONAL, (rep.delta == 0) == cert.exceptional,
               f"delta={rep.delta}, exceptional={cert.exceptional}")
    d = stabilizer_common_orbits(setting)
    report.add(name, STABILIZER_BOUND, rep.delta >= Fraction(d - 1, n), f"d={d}, delta={rep.delta}")
    return rep


def verify_bound_suite(actions: Sequence[GroupAction] = (),
                       settings: Sequence[CosetSetting] = ()) -> SuiteReport:
    report = SuiteReport()
    for action in actions:
        check_action_bounds(action, report)
    for setting in settings:
        check_coset_setting(setting, report)
    return report


# Structural checks on primitive-type constructions.


@dataclass(frozen=True)
class RegularNormalInstance:
    """``action`` has a regular nonsolvable normal subgroup ``normal``."""
    name: str
    action: GroupAction
    normal: PermGroup


@dataclass(frozen=True)
class ProductActionInstance:
    """``group`` acts on ``base ** copies`` points, point index read as base-``base``
    digits with the first coordinate most significant."""
    name: str
    group: PermGroup
    base: int
    copies: int


@dataclass(frozen=True)
class DiagonalInstance:
    name: str
    action: GroupAction


@dataclass(frozen=True)
class CentralizerInstance:
    """Every element of ``overgroup`` normalizes the nonsolvable ``group``."""
    name: str
    group: PermGroup
    overgroup: PermGroup


def exceeds_inverse_log2(value: Fraction, m: int, prec: int = 128, max_prec: int = 8192) -> bool:
    """Decide ``value > 1 / log2(m)`` with outward-rounded interval arithmetic.

    The working precision doubles until the enclosure of ``value * log2(m)``
    excludes 1.  Powers of two are decided exactly.
    """
    value = Fraction(value)
    if m < 2:
        raise ValueError("m must be at least 2")
    if m & (m - 1) == 0:
        return value * (m.bit_length() - 1) > 1
    iv = mpmath.iv
    saved = iv.prec
    try:
        while prec <= max_prec:
            iv.prec = prec
            enclosure = iv.mpf(value.numerator) / iv.mpf(value.denominator) * (iv.log(m) / iv.log(2))
            if enclosure.a > 1:
                return True
            if enclosure.b < 1:
                return False
            prec *= 2
    finally:
        iv.prec = saved
    raise ArithmeticError("interval comparison stayed inconclusive")


def _check_regular_normal(inst: RegularNormalInstance, report: SuiteReport):
    act = inst.action
    regular = (len(orbits(act, inst.normal.generators)) == 1 and inst.normal.order == act.size)
    nonsolvable = not is_solvable(inst.normal)
    report.add(inst.name, "normal subgroup is regular and nonsolvable", regular and nonsolvable,
               f"|N|={inst.normal.order}, n={act.size}")
    single = [g for g in act.group.elements if act.image(g).fixed_points() == 1]
    report.add(inst.name, "no element has exactly one fixed point", not single,
               f"{len(single)} elements with one fixed point")
    rep = delta(act)
    report.add(inst.name, "delta >= 1/2", rep.delta >= Fraction(1, 2), f"delta={rep.delta}")


def _digits(x: int, base: int, copies: int) -> tuple[int, ...]:
    out = []
    for _ in range(copies):
        x, r = divmod(x, base)
        out.append(r)
    return tuple(reversed(out))


def _check_product(inst: ProductActionInstance, report: SuiteReport):
    from .permcore import natural_action
    b, t = inst.base, inst.copies
    unit = [b ** (t - 1 - j) for j in range(t)]

    def coordinate_image(g, j):
        p0 = _digits(g[0], b, t)
        p1 = _digits(g[unit[j]], b, t)
        moved = [i for i in range(t) if p0[i] != p1[i]]
        if len(moved) != 1:
            raise ValueError("group does not preserve the product structure")
        return moved[0]

    g1 = [g for g in inst.group.elements if coordinate_image(g, 0) == 0]
    deranged_on_y = 0
    for g in g1:
        # first coordinate of g applied to (y, 0, ..., 0)
        if all(_digits(g[y * unit[0]], b, t)[0] != y for y in range(b)):
            deranged_on_y += 1
    d_y = Fraction(deranged_on_y, len(g1))
    rep = delta(natural_action(inst.group))
    report.add(inst.name, "delta(G, X) >= delta(G1, Y) / t", rep.delta >= d_y / t,
               f"delta={rep.delta}, delta1={d_y}, t={t}, |G:G1|={inst.group.order // len(g1)}")


def _check_diagonal(inst: DiagonalInstance, report: SuiteReport):
    rep = delta(inst.action)
    m = inst.action.size
    report.add(inst.name, "delta > 1/log2 n", exceeds_inverse_log2(rep.delta, m),
               f"delta={rep.delta}, n={m}")


def _check_centralizer(inst: CentralizerInstance, report: SuiteReport):
    nonsolvable = not is_solvable(inst.group)
    elems = [x for x in inst.group.elements if not x.is_identity()]
    bad = []
    for a in inst.overgroup.elements:
        a_inv = a.inverse()
        if not any(a_inv * x * a == x for x in elems):
            bad.append(a)
    report.add(inst.name, "every automorphism centralizes a nontrivial element",
               nonsolvable and not bad, f"nonsolvable={nonsolvable}, failures={len(bad)}")


def structural_lemma_checks(instances: Sequence) -> SuiteReport:
    report = SuiteReport()
    dispatch = {
        RegularNormalInstance: _check_regular_normal,
        ProductActionInstance: _check_product,
        DiagonalInstance: _check_diagonal,
        CentralizerInstance: _check_centralizer,
    }
    for inst in instances:
        try:
            dispatch[type(inst)](inst, report)
        except Exception as exc:
            report.add(getattr(inst, "name", repr(inst)), "construction", False,
                       f"{type(exc).__name__}: {exc}")
    return report
