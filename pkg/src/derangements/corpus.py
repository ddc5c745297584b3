"""Named groups, actions and the fixed instance lists used by the CLI and
the acceptance suite."""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

from .derange import (
    CentralizerInstance,
    CosetSetting,
    DiagonalInstance,
    ProductActionInstance,
    RegularNormalInstance,
    exceptional_from_hall,
)
from .errors import SpecError, UnknownCorpus
from .fqlin import FqMatrix, build_classical, field_of_order, projective_image
from .permcore import (
    GroupAction,
    Permutation,
    PermGroup,
    alternating_group,
    close_group,
    cyclic_group,
    natural_action,
    subset_action,
    symmetric_group,
)

CORPORA = ("bounds", "cosets", "lemmas8", "classical-small", "weyl-young")


# ------------------------------------------------------------ group builders


def affine_group(q: int, squares: bool = False) -> PermGroup:
    """x -> a x + b on F_q; with ``squares`` only nonzero squares a."""
    F = field_of_order(q)
    gens = [Permutation(F.add(x, F.p ** i) for x in range(q)) for i in range(F.f)]
    g = F.primitive_element
    if squares:
        g = F.mul(g, g)
    if q > 2:
        gens.append(Permutation(F.mul(g, x) for x in range(q)))
    label = "AGL1sq" if squares else "AGL1"
    return close_group(gens, name=f"{label}({q})")


def _matrices(q: int, rows_list):
    F = field_of_order(q)
    return [FqMatrix(F, rows) for rows in rows_list]


def pgl2(q: int) -> PermGroup:
    F = field_of_order(q)
    g = F.primitive_element
    gens = _matrices(q, [[[g, 0], [0, 1]], [[1, 1], [0, 1]], [[0, 1], [1, 0]]])
    return projective_image(gens, name=f"PGL(2,{q})")


def psl2(q: int) -> PermGroup:
    return projective_image(build_classical("SL", 2, q).generators, name=f"PSL(2,{q})")


def psl3_2() -> PermGroup:
    return projective_image(build_classical("GL", 3, 2).generators, name="PSL(3,2)")


def _index_of(points):
    return {x: i for i, x in enumerate(points)}


def holomorph(J: PermGroup, conjugators, name: str) -> tuple[PermGroup, PermGroup]:
    """J acting on itself by right translations, extended by conjugations.

    Returns the whole group and its regular normal subgroup of translations.
    """
    pts = J.elements
    idx = _index_of(pts)
    trans = [Permutation(idx[x * a] for x in pts) for a in J.generators]
    conj = [Permutation(idx[s.inverse() * x * s] for x in pts) for s in conjugators]
    G = close_group(trans + conj, name=name)
    N = close_group(trans, name=f"{name} translations")
    return G, N


def double_translations(J: PermGroup, name: str) -> tuple[PermGroup, PermGroup]:
    """J x J acting on J by x -> a^-1 x b, with its regular normal subgroup 1 x J."""
    pts = J.elements
    idx = _index_of(pts)
    right = [Permutation(idx[x * b] for x in pts) for b in J.generators]
    left = [Permutation(idx[a.inverse() * x] for x in pts) for a in J.generators]
    return close_group(left + right, name=name), close_group(right, name=f"{name} right")


def diagonal_group(J: PermGroup, conjugators=(), name: str = "diag") -> PermGroup:
    """(J x J) extended by the swap (x -> x^-1) and optional outer conjugations,
    acting on J, i.e. on the cosets of the normalizer of the diagonal."""
    pts = J.elements
    idx = _index_of(pts)
    gens = [Permutation(idx[a.inverse() * x] for x in pts) for a in J.generators]
    gens += [Permutation(idx[x * b] for x in pts) for b in J.generators]
    gens.append(Permutation(idx[x.inverse()] for x in pts))
    gens += [Permutation(idx[s.inverse() * x * s] for x in pts) for s in conjugators]
    return close_group(gens, name=name)


def wreath_product(H: PermGroup, t: int, name: str | None = None) -> PermGroup:
    """H wr S_t in product action on b^t points (first coordinate most significant)."""
    b = H.degree
    tuples = list(itertools.product(range(b), repeat=t))
    idx = _index_of(tuples)
    gens = [Permutation(idx[(h[y[0]],) + y[1:]] for y in tuples) for h in H.generators]
    cycle = Permutation(list(range(1, t)) + [0])
    moves = [Permutation.from_cycles("(0 1)", t)] + ([cycle] if t > 2 else [])
    for s in moves:
        perm_points = []
        for y in tuples:
            z = [0] * t
            for j in range(t):
                z[s[j]] = y[j]
            perm_points.append(idx[tuple(z)])
        gens.append(Permutation(perm_points))
    return close_group(gens, name=name or f"{H.name} wr S{t}")


def generating_rep(ambient: PermGroup, normal: PermGroup) -> Permutation:
    """Least element whose coset generates the (cyclic) quotient."""
    m = ambient.order // normal.order
    for a in ambient.elements:
        k, x = 1, a
        while x not in normal:
            x = x * a
            k += 1
        if k == m:
            return a
    raise SpecError("quotient is not cyclic")


# ------------------------------------------------------------ named specs


_NAMED = [
    (r"S(\d+)-natural", lambda n: natural_action(symmetric_group(int(n)))),
    (r"A(\d+)-natural", lambda n: natural_action(alternating_group(int(n)))),
    (r"C(\d+)-regular", lambda n: natural_action(cyclic_group(int(n)))),
    (r"S(\d+)-subsets-(\d+)", lambda n, k: subset_action(symmetric_group(int(n)), int(k))),
    (r"AGL1-(\d+)", lambda q: natural_action(affine_group(int(q)))),
    (r"AGL1sq-(\d+)", lambda q: natural_action(affine_group(int(q), squares=True))),
    (r"PGL2-(\d+)", lambda q: natural_action(pgl2(int(q)))),
    (r"PSL2-(\d+)", lambda q: natural_action(psl2(int(q)))),
    (r"PSL32-7", lambda: natural_action(psl3_2())),
]


def named_action(name: str) -> GroupAction:
    """Build a named action such as ``S4-natural``, ``AGL1-8`` or ``PSL2-7``."""
    for pattern, build in _NAMED:
        m = re.fullmatch(pattern, name)
        if m:
            action = build(*m.groups())
            action.name = name
            return action
    raise SpecError(f"unknown named spec {name!r}")


# ------------------------------------------------------------ corpora


@lru_cache(maxsize=None)
def bounds_corpus() -> tuple[GroupAction, ...]:
    names = [f"S{n}-natural" for n in range(3, 9)]
    names += [f"A{n}-natural" for n in range(3, 9)]
    names += [f"AGL1-{q}" for q in (5, 7, 8, 9, 13)]
    names += ["AGL1sq-7", "AGL1sq-11"]
    names += ["PSL32-7", "PSL2-7"]
    names += [f"PGL2-{q}" for q in (5, 7, 9, 11)]
    names += ["S4-subsets-2", "S5-subsets-2", "S6-subsets-2", "C5-regular", "C8-regular"]
    return tuple(named_action(n) for n in names)


# equality cases other than the AGL1-q names: S3 = AGL(1,3), A4 = AGL(1,4)
AFFINE_ALIASES = {"S3-natural": "AGL1-3", "A4-natural": "AGL1-4"}


def setting(ambient, normal, rep, action, name) -> CosetSetting:
    return CosetSetting(ambient, normal, rep, action, name=name)


@lru_cache(maxsize=None)
def cosets_corpus() -> tuple[CosetSetting, ...]:
    out = []
    t = lambda text, n: Permutation.from_cycles(text, n)  # noqa: E731
    S3, A3 = symmetric_group(3), alternating_group(3)
    out.append(setting(S3, A3, t("(0 1)", 3), natural_action(S3), "(S3, A3) natural"))
    S4, A4 = symmetric_group(4), alternating_group(4)
    out.append(setting(S4, A4, t("(0 1)", 4), natural_action(S4), "(S4, A4) natural"))
    out.append(setting(S4, A4, t("(0 1)", 4), subset_action(S4, 2), "(S4, A4) on 2-subsets"))
    out.append(setting(S4, S4, S4.identity(), natural_action(S4), "(S4, S4) natural"))
    V4 = close_group([t("(0 1)(2 3)", 4), t("(0 2)(1 3)", 4)], name="V4")
    out.append(setting(A4, V4, t("(0 1 2)", 4), natural_action(A4), "(A4, V4) natural"))
    S5, A5 = symmetric_group(5), alternating_group(5)
    out.append(setting(S5, A5, t("(0 1)", 5), natural_action(S5), "(S5, A5) natural"))
    S6, A6 = symmetric_group(6), alternating_group(6)
    out.append(setting(S6, A6, t("(0 1)", 6), natural_action(S6), "(S6, A6) natural"))
    P = pgl2(5)
    L = psl2(5)
    L = close_group(list(L.generators), name="PSL(2,5)")
    out.append(setting(P, L, generating_rep(P, L), natural_action(P), "(PGL(2,5), PSL(2,5)) on 6 points"))
    F20, C5 = affine_group(5), cyclic_group(5)
    D10 = close_group([t("(0 1 2 3 4)", 5), t("(1 4)(2 3)", 5)], name="D10")
    out.append(setting(F20, D10, generating_rep(F20, D10), natural_action(F20), "(F20, D10) natural"))
    out.append(setting(F20, C5, generating_rep(F20, C5), natural_action(F20), "(F20, C5) natural"))
    for ambient, normal, label in hall_pairs():
        out.append(exceptional_from_hall(ambient, normal, name=f"Hall {label}"))
    return tuple(out)


def hall_pairs():
    """(ambient, normal Hall subgroup, label) with cyclic complements."""
    c7 = Permutation.from_cycles("(0 1 2 3 4 5 6)", 7)
    pairs = []
    pairs.append((close_group([c7, Permutation.from_cycles("(1 2 4)(3 6 5)", 7)], name="C7:C3"),
                  close_group([c7], name="C7"), "(C7:C3, C7)"))
    pairs.append((affine_group(5), cyclic_group(5), "(F20, C5)"))
    for q in (7, 8, 9, 11):
        A = affine_group(q)
        F = field_of_order(q)
        T = close_group([Permutation(F.add(x, F.p ** i) for x in range(q)) for i in range(F.f)],
                        name=f"translations of F{q}")
        pairs.append((A, T, f"(AGL(1,{q}), F{q})"))
    return pairs


@lru_cache(maxsize=None)
def lemmas8_corpus() -> tuple:
    out = []
    S5, A5 = symmetric_group(5), alternating_group(5)
    G, N = holomorph(A5, S5.generators, "Hol(A5)")
    out.append(RegularNormalInstance("Hol(A5) on 60", natural_action(G), N))
    G, N = double_translations(A5, "A5 x A5")
    out.append(RegularNormalInstance("A5 x A5 on 60", natural_action(G), N))
    L = psl2(7)
    P = pgl2(7)
    G, N = holomorph(L, P.generators, "Hol(PSL(2,7))")
    out.append(RegularNormalInstance("Hol(PSL(2,7)) on 168", natural_action(G), N))

    S3, S4 = symmetric_group(3), symmetric_group(4)
    for H, tt in ((S3, 2), (S4, 2), (S3, 3), (S5, 2), (A5, 2), (affine_group(5), 2)):
        out.append(ProductActionInstance(f"{H.name} wr S{tt} on {H.degree ** tt}",
                                         wreath_product(H, tt), H.degree, tt))

    out.append(DiagonalInstance("A5^2:2 on 60", natural_action(diagonal_group(A5, (), "A5^2:2"))))
    out.append(DiagonalInstance("A5^2:2^2 on 60",
                                natural_action(diagonal_group(A5, [Permutation.from_cycles("(0 1)", 5)],
                                                              "A5^2:2^2"))))
    out.append(DiagonalInstance("PSL(2,7)^2:2 on 168", natural_action(diagonal_group(L, (), "PSL(2,7)^2:2"))))

    out.append(CentralizerInstance("A5 under S5", A5, S5))
    out.append(CentralizerInstance("A6 under S6", alternating_group(6), symmetric_group(6)))
    out.append(CentralizerInstance("PSL(2,7) under PGL(2,7)", L, P))
    out.append(CentralizerInstance("S5 under S5", S5, S5))
    return tuple(out)


CLASSICAL_SMALL = (
    [("GL", 1, q) for q in (2, 3, 4, 5, 7, 8, 9)]
    + [("GL", 2, q) for q in (2, 3, 4, 5, 7, 8, 9, 11, 13)]
    + [("GL", 3, 2), ("GL", 3, 3), ("GL", 3, 4), ("GL", 4, 2)]
    + [("SL", 2, q) for q in (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19)]
    + [("SL", 3, 2), ("SL", 3, 3), ("SL", 3, 4), ("SL", 4, 2)]
    + [("GU", 2, q) for q in (2, 3, 4, 5)] + [("GU", 3, 2)]
    + [("SU", 2, q) for q in (2, 3, 4, 5)] + [("SU", 3, 2)]
    + [("Sp", 2, q) for q in (2, 3, 4, 5)] + [("Sp", 4, 2), ("Sp", 4, 3)]
    + [(fam, n, q) for fam in ("Oplus", "Ominus") for n in (2, 4) for q in (2, 3, 4, 5)]
    + [("SOodd", 3, q) for q in (3, 5, 7, 9)] + [("SOodd", 5, 3)]
)


@lru_cache(maxsize=None)
def classical_group(family: str, n: int, q: int):
    return build_classical(family, n, q)


def classical_small_corpus():
    return tuple(CLASSICAL_SMALL)


WEYL_YOUNG = tuple((n, k) for n in range(2, 11) for k in range(1, n // 2 + 1))


def corpus(name: str):
    builders = {
        "bounds": bounds_corpus,
        "cosets": cosets_corpus,
        "lemmas8": lemmas8_corpus,
        "classical-small": classical_small_corpus,
        "weyl-young": lambda: WEYL_YOUNG,
    }
    if name not in builders:
        raise UnknownCorpus(f"unknown corpus {name!r}; choose from {', '.join(CORPORA)}")
    return builders[name]()
