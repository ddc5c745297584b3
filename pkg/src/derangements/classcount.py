"""Conjugacy-class counts: enumeration for every buildable group, a
generating function for GL(n, q), upper bounds, and limiting constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .errors import FamilyMismatch, InexactCriterion, NotSubgroup, UnsupportedFamily
from .fqlin import ClassicalGroup, field_of_order, is_regular_semisimple
from .permcore import PermGroup, conjugacy_classes, coset_action, integer_partitions, is_normal


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(not isinstance(p, int) or p <= 0 for p in parts):
            raise ValueError("parts must be positive integers")
        if list(parts) != sorted(parts, reverse=True):
            raise ValueError("parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @classmethod
    def all(cls, n: int):
        for lam in integer_partitions(n):
            yield cls(lam)


@dataclass(frozen=True)
class ClassCountRecord:
    family: str | None
    n: int | None
    q: int | None
    k: int
    k_p: int
    method: str


def _classes_and_orders(group):
    if isinstance(group, ClassicalGroup):
        return [(c.size, group.element_order(c.representative)) for c in group.conjugacy_classes()]
    return [(c.size, c.representative.order()) for c in conjugacy_classes(group)]


def k_p(group, p: int) -> int:
    """Classes of elements of order prime to p; p = 0 counts every class."""
    return sum(1 for _, order in _classes_and_orders(group) if p == 0 or order % p)


def class_count(group) -> ClassCountRecord:
    if isinstance(group, ClassicalGroup):
        k = len(group.conjugacy_classes())
        return ClassCountRecord(group.family, group.n, group.q, k, k_p(group, group.p), "brute")
    k = len(conjugacy_classes(group))
    return ClassCountRecord(None, None, None, k, k, "brute")


def semisimple_class_count(group: ClassicalGroup) -> int:
    return k_p(group, group.p)


def irreducible_count(d: int, q: int) -> int:
    """Monic irreducible polynomials of degree d over F_q."""
    total = sum(int(mobius(e)) * q ** (d // e) for e in divisors(d))
    return total // d


def _series_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(min(len(b), n + 1 - i)):
                out[i + j] += x * b[j]
    return out


def _series_pow(a, e, n):
    out = [1] + [0] * n
    while e:
        if e & 1:
            out = _series_mul(out, a, n)
        a = _series_mul(a, a, n)
        e >>= 1
    return out


def k_gl_genfun(n: int, q: int) -> int:
    """Coefficient of u^n in prod_d P(u^d)^{N*(d)}, P the partition series and
    N*(d) the number of monic irreducibles of degree d other than x."""
    if n < 1:
        raise ValueError("n must be positive")
    field_of_order(q)  # validates q
    pcount = [sum(1 for _ in integer_partitions(k)) for k in range(n + 1)]
    series = [1] + [0] * n
    for d in range(1, n + 1):
        factor = [0] * (n + 1)
        for k in range(n // d + 1):
            factor[k * d] = pcount[k]
        count = irreducible_count(d, q) - (1 if d == 1 else 0)
        series = _series_mul(series, _series_pow(factor, count, n), n)
    return series[n]


# ------------------------------------------------------------ upper bounds


def reductive_rank(family: str, n: int) -> int:
    ranks = {"GL": n, "SL": n - 1, "GU": n, "SU": n - 1, "Sp": n // 2,
             "Oplus": n // 2, "Ominus": n // 2, "SOodd": (n - 1) // 2}
    if family not in ranks:
        raise UnsupportedFamily(family)
    return ranks[family]


@dataclass(frozen=True)
class BoundTerms:
    """Right-hand side A + B * q^(e/2)."""
    rational: Fraction
    coefficient: Fraction
    half_exponent: int


def class_count_bound(family: str, n: int, q: int) -> BoundTerms:
    odd = q % 2 == 1
    if family == "SL":
        return BoundTerms(Fraction(q ** n, q - 1), Fraction(1), n + 2)
    if family == "SU":
        c = Fraction(23, 2)
        return BoundTerms(c * Fraction(q ** n, q + 1), c * Fraction(q + 1, q - 1), n + 2)
    m = n // 2
    if family == "Sp":
        return BoundTerms(Fraction(0), Fraction(12) if odd else Fraction(107, 5), 2 * m)
    if family in ("Oplus", "Ominus"):
        return BoundTerms(Fraction(0), Fraction(29) if odd else Fraction(39, 2), 2 * m)
    if family == "SOodd":
        if not odd:
            raise FamilyMismatch("the odd-dimensional orthogonal bound needs odd q")
        return BoundTerms(Fraction(0), Fraction(738, 100), 2 * m)
    raise FamilyMismatch(f"no class-count bound for family {family!r}")


def check_class_count_bound(record: ClassCountRecord) -> bool:
    """k <= A + B q^(e/2), decided exactly by squaring when e is odd."""
    if record.family is None:
        raise FamilyMismatch("record has no classical family")
    terms = class_count_bound(record.family, record.n, record.q)
    slack = record.k - terms.rational
    if slack <= 0:
        return True
    e = terms.half_exponent
    if e % 2 == 0:
        return slack <= terms.coefficient * record.q ** (e // 2)
    return slack * slack <= terms.coefficient ** 2 * record.q ** e


@dataclass(frozen=True)
class IndexLemmaReport:
    d: int
    k_g: int
    k_h: int
    normal: bool
    k_quotient: int | None
    passed: bool


def check_index_lemma(G: PermGroup, H: PermGroup, p: int) -> IndexLemmaReport:
    """k_p(G) <= d k_p(H) and k_p(H) <= d k_p(G) for d = |G:H|; for normal H
    also k_p(G) <= k_p(H) k_p(G/H)."""
    for h in H.generators:
        if h not in G:
            raise NotSubgroup(f"{h} is not in the group")
    d, rem = divmod(G.order, H.order)
    if rem:
        raise NotSubgroup("subgroup order does not divide the group order")
    kg, kh = k_p(G, p), k_p(H, p)
    ok = kg <= d * kh and kh <= d * kg
    normal = is_normal(G, H)
    kq = None
    if normal:
        if d == 1:
            kq = 1
        else:
            quotient = coset_action(G, H).image_group()
            kq = k_p(quotient, p)
        ok = ok and kg <= kh * kq
    return IndexLemmaReport(d, kg, kh, normal, kq, ok)


# ------------------------------------------------------------ proportions


def rss_proportion(group: ClassicalGroup, allow_inexact: bool = False) -> Fraction:
    """Proportion of elements with squarefree characteristic polynomial.

    For the even-dimensional orthogonal families squarefreeness is not an
    exact test of regular semisimplicity, so those need ``allow_inexact``.
    """
    if group.family in ("Oplus", "Ominus") and not allow_inexact:
        raise InexactCriterion("squarefree criterion is not exact for even orthogonal groups")
    hits = sum(c.size for c in group.conjugacy_classes() if is_regular_semisimple(c.representative))
    return Fraction(hits, group.order)


def gl2_rss_closed_form(q: int) -> Fraction:
    """Regular semisimple proportion in GL(2, q): split and nonsplit tori."""
    return Fraction(q * q - q - 1, q * q - 1)


# ------------------------------------------------------------ limits


@dataclass(frozen=True)
class LimitEval:
    family: str
    q: int
    depth: int
    value: Fraction
    last_factor_deviation: Fraction

    def __float__(self) -> float:
        return float(self.value)


def _q(i: int, q: int) -> Fraction:
    return Fraction(1, q ** i)


def _product(depth, q, factor, start=1):
    out = Fraction(1)
    for i in range(start, start + depth):
        out *= factor(i)
    return out


def _odd_orthogonal_even_part(depth: int, q: int) -> Fraction:
    """(prod (1 + q^{-(2i-1)/2})^4 + prod (1 - q^{-(2i-1)/2})^4) as an exact
    rational: expand in s = q^{-1/2}, keep the even powers twice over."""
    coeffs = [1]
    for i in range(1, depth + 1):
        m = 2 * i - 1
        for _ in range(4):
            new = coeffs + [0] * m
            for k, c in enumerate(coeffs):
                new[k + m] += c
            coeffs = new
    return sum(Fraction(2 * c, q ** (k // 2)) for k, c in enumerate(coeffs) if k % 2 == 0 and c)


def _limit_value(family: str, q: int, depth: int) -> Fraction:
    odd = q % 2 == 1
    if family == "GL":
        return Fraction(1)
    if family == "GU":
        return _product(depth, q, lambda i: (1 + _q(i, q)) / (1 - _q(i, q)))
    if family == "Sp":
        if odd:
            return _product(depth, q, lambda i: (1 + _q(i, q)) ** 4 / (1 - _q(i, q)))
        return _product(depth, q, lambda i: (1 - _q(4 * i, q))
                        / ((1 - _q(4 * i - 2, q)) * (1 - _q(i, q)) ** 2))
    if family in ("O", "Oplus", "Ominus"):
        if odd:
            denom = 4 * _product(depth, q, lambda i: 1 - _q(i, q))
            return _odd_orthogonal_even_part(depth, q) / denom
        top = _product(depth, q, lambda i: (1 - _q(2 * i + 2, q)) * (1 + _q(2 * i + 1, q)) ** 2, start=0)
        return top / (2 * _product(depth, q, lambda i: (1 - _q(i, q)) ** 2))
    if family == "SOodd":
        if not odd:
            raise UnsupportedFamily("odd-dimensional orthogonal limit needs odd q")
        return _product(depth, q, lambda i: (1 - _q(4 * i, q)) ** 2
                        / ((1 - _q(i, q)) ** 3 * (1 - _q(4 * i - 2, q)) ** 2))
    raise UnsupportedFamily(f"no limiting constant for family {family!r}")


def limit_partial(family: str, q: int, depth: int = 40) -> LimitEval:
    """Truncated product for lim k(X(n, q)) / q^n, to ``depth`` factors.

    The deviation reported is |P_depth / P_(depth-1) - 1|, the effect of the
    last factor included.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    field_of_order(q)
    value = _limit_value(family, q, depth)
    prev = _limit_value(family, q, depth - 1)
    return LimitEval(family, q, depth, value, abs(value / prev - 1))


