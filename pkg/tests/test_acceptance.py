"""One test (or one parametrized family) per acceptance criterion.

Each check also records a line that the conftest hook prints at the end of
the run.
"""

import time
from fractions import Fraction

import pytest

from derangements import classcount, corpus, derange, fqlin, weyl
from derangements.permcore import natural_action, subset_action, symmetric_group_by_classes


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# 1 -------------------------------------------------------------------------

def test_criterion_01_lower_bound_and_equality(acceptance):
    actions, elapsed = _timed(corpus.bounds_corpus)
    reports, more = _timed(lambda: {a.name: derange.delta(a) for a in actions})
    elapsed += more
    failures = []
    for name, rep in reports.items():
        if rep.delta < Fraction(1, rep.n):
            failures.append(f"{name}: delta {rep.delta} < 1/{rep.n}")
        affine = name.startswith("AGL1-") or name in corpus.AFFINE_ALIASES
        if (rep.delta == Fraction(1, rep.n)) != affine:
            failures.append(f"{name}: equality={rep.delta == Fraction(1, rep.n)} affine={affine}")
        if rep.delta == Fraction(1, rep.n) and not rep.frobenius_full:
            failures.append(f"{name}: equality without Frobenius of order n(n-1)")
    for q in (5, 7, 8, 9, 13):
        rep = reports[f"AGL1-{q}"]
        assert rep.delta == Fraction(1, q) and rep.order == q * (q - 1) and rep.frobenius
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(1, not failures, "; ".join(failures) or f"{len(reports)} actions in {elapsed:.1f}s")
    assert not failures, failures


# 2 -------------------------------------------------------------------------

_LARGE = [a.name for a in corpus.bounds_corpus() if a.size > 6]


@pytest.mark.parametrize("name", _LARGE)
def test_criterion_02_two_over_n(name, acceptance):
    action = next(a for a in corpus.bounds_corpus() if a.name == name)
    start = time.perf_counter()
    rep = derange.delta(action)
    ok = rep.delta > Fraction(2, rep.n) or rep.frobenius_full or rep.frobenius_half
    ok = ok and time.perf_counter() - start < 30
    acceptance(2, ok, f"{name}: delta={rep.delta}, 2/n={Fraction(2, rep.n)}, order={rep.order}")
    assert ok, f"{name}: delta={rep.delta} is not above 2/n={Fraction(2, rep.n)} and the group is not Frobenius"


# 3 -------------------------------------------------------------------------

def test_criterion_03_coset_suite(acceptance):
    settings, elapsed = _timed(corpus.cosets_corpus)
    names = {s.name for s in settings}
    required = {"(S3, A3) natural", "(S4, A4) natural", "Hall (C7:C3, C7)", "(F20, C5) natural"}
    failures = [f"missing {r}" for r in required - names]
    if len(settings) < 10:
        failures.append(f"only {len(settings)} settings")
    start = time.perf_counter()
    for s in settings:
        total, c = derange.coset_fixed_point_sum(s)
        if total != s.normal.order * c:
            failures.append(f"{s.name}: sum {total} != {s.normal.order}*{c}")
        d = derange.coset_delta(s).delta
        if not (d == 0 or Fraction(1, s.n) <= d <= 1):
            failures.append(f"{s.name}: delta {d}")
        if (d == 0) != derange.is_exceptional(s).exceptional:
            failures.append(f"{s.name}: delta {d} vs exceptionality")
    elapsed += time.perf_counter() - start
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(3, not failures, "; ".join(failures) or f"{len(settings)} settings")
    assert not failures, failures


# 4 -------------------------------------------------------------------------

def test_criterion_04_hall_construction(acceptance):
    start = time.perf_counter()
    failures = []
    for ambient, normal, label in corpus.hall_pairs():
        s = derange.exceptional_from_hall(ambient, normal, name=label)
        if not derange.is_exceptional(s).exceptional:
            failures.append(label)
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(4, not failures, "; ".join(failures) or f"{len(corpus.hall_pairs())} pairs")
    assert not failures, failures


# 5 -------------------------------------------------------------------------

def test_criterion_05_weyl_identity(acceptance):
    start = time.perf_counter()
    failures = []
    for n, k in corpus.WEYL_YOUNG:
        W = weyl.weyl_group("A", n - 1)
        Y = weyl.young_subgroup(W, [k, n - k])
        mass = weyl.class_mass(W, Y)
        # second route: the k-subset action of S_n, computed from its class table
        direct = derange.delta(subset_action(symmetric_group_by_classes(n), k)).delta
        if 1 - mass.mass != direct:
            failures.append(f"S{n}, k={k}: {1 - mass.mass} != {direct}")
        if direct < Fraction(1, 3):
            failures.append(f"S{n}, k={k}: {direct} < 1/3")
    for r in range(2, 7):
        m = weyl.class_mass(weyl.weyl_group("B", r), weyl.d_in_b(r)).mass
        if m != Fraction(1, 2):
            failures.append(f"B({r})/D({r}) mass {m}")
    elapsed = time.perf_counter() - start
    if elapsed >= 300:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(5, not failures, "; ".join(failures) or f"{len(corpus.WEYL_YOUNG)} Young pairs, ranks 2-6")
    assert not failures, failures


# 6 -------------------------------------------------------------------------

GL_CASES = [(1, q) for q in range(2, 10) if q != 6] + [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2)]


def test_criterion_06_gl_class_counts(acceptance):
    start = time.perf_counter()
    failures = []
    for n, q in GL_CASES:
        brute = classcount.class_count(fqlin.build_classical("GL", n, q)).k
        gen = classcount.k_gl_genfun(n, q)
        if brute != gen:
            failures.append(f"GL({n},{q}): brute {brute} genfun {gen}")
    elapsed = time.perf_counter() - start
    if elapsed >= 600:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(6, not failures, "; ".join(failures) or f"{len(GL_CASES)} cases (q=6 has no field)")
    assert not failures, failures


# 7 -------------------------------------------------------------------------

def test_criterion_07_class_count_bounds(acceptance):
    start = time.perf_counter()
    failures, checked = [], 0
    for family, n, q in corpus.CLASSICAL_SMALL:
        if family in ("GL", "GU"):
            continue
        rec = classcount.class_count(corpus.classical_group(family, n, q))
        checked += 1
        if not classcount.check_class_count_bound(rec):
            failures.append(f"{family}({n},{q}): k={rec.k}")
    elapsed = time.perf_counter() - start
    if elapsed >= 900:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(7, not failures, "; ".join(failures) or f"{checked} groups")
    assert not failures, failures


# 8 -------------------------------------------------------------------------

def test_criterion_08_semisimple_and_rss(acceptance):
    start = time.perf_counter()
    failures = []
    for family, n, q in corpus.CLASSICAL_SMALL:
        if family not in ("GL", "SL", "SU", "Sp"):
            continue
        G = corpus.classical_group(family, n, q)
        ss = classcount.semisimple_class_count(G)
        bound = q ** classcount.reductive_rank(family, n)
        if ss > bound:
            failures.append(f"{G.name}: {ss} semisimple classes > {bound}")
    for family, n, q in [("SL", 2, 3), ("SL", 2, 5), ("SL", 2, 7), ("Sp", 4, 3)]:
        G = corpus.classical_group(family, n, q)
        if classcount.semisimple_class_count(G) != q ** classcount.reductive_rank(family, n):
            failures.append(f"{G.name}: no equality")
    for family, n, q in corpus.CLASSICAL_SMALL:
        if family in ("Oplus", "Ominus") or q <= 6:
            continue
        G = corpus.classical_group(family, n, q)
        prop = classcount.rss_proportion(G)
        if not prop > 1 - Fraction(5, q - 1):
            failures.append(f"{G.name}: rss {prop}")
    for family, n, q in [("SL", 2, 8), ("SL", 2, 9), ("GL", 2, 11)]:
        G = corpus.classical_group(family, n, q)
        if not classcount.rss_proportion(G) > 1 - Fraction(5, q - 1):
            failures.append(f"{G.name}: rss bound")
    gl27 = classcount.rss_proportion(corpus.classical_group("GL", 2, 7))
    if gl27 != Fraction(41, 48) or gl27 != classcount.gl2_rss_closed_form(7):
        failures.append(f"GL(2,7) rss {gl27}")
    elapsed = time.perf_counter() - start
    if elapsed >= 600:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(8, not failures, "; ".join(failures) or "all instances")
    assert not failures, failures


# 9 -------------------------------------------------------------------------

LIMIT_CASES = ([("GL", q) for q in (2, 3, 4, 5, 7, 8, 9)]
               + [("GU", q) for q in (2, 3, 4, 5, 7, 8, 9)]
               + [("Sp", q) for q in (2, 4, 8)])


@pytest.mark.parametrize("family,q", LIMIT_CASES)
def test_criterion_09_limit_convergence(family, q, acceptance):
    start = time.perf_counter()
    shallow = classcount.limit_partial(family, q, 20)
    deep = classcount.limit_partial(family, q, 40)
    gap = abs(deep.value - shallow.value)
    ok = gap < Fraction(1, 10 ** 6) and time.perf_counter() - start < 5
    acceptance(9, ok, f"{family} q={q}: |P40 - P20| = {float(gap):.3e}")
    assert ok, f"{family} q={q}: depth 20 and 40 differ by {float(gap):.3e}"


def test_criterion_09_gu_constant(acceptance):
    value = classcount.limit_partial("GU", 2, 40).value
    ok = Fraction(82, 10) <= value <= Fraction(83, 10)
    acceptance(9, ok, f"GU q=2 depth 40 = {float(value):.6f}")
    assert ok


# 10 ------------------------------------------------------------------------

def test_criterion_10_finite_shadow(acceptance):
    start = time.perf_counter()
    failures = []
    for q in (5, 7, 9, 11):
        d = derange.delta(corpus.named_action(f"PGL2-{q}")).delta
        if abs(d - Fraction(1, 2)) > Fraction(1, q):
            failures.append(f"PGL(2,{q}): {d}")
        if q == 5 and d != Fraction(5, 12):
            failures.append(f"PGL(2,5): {d} != 5/12")
    G = fqlin.build_classical("Sp", 4, 2)
    for sign in (1, -1):
        U = fqlin.quadratic_form(G.field, 4, sign)
        mask = G.subgroup_mask("quadratic", U)
        by_classes = 1 - Fraction(G.union_of_classes_meeting(mask), G.order)
        image, orbit = fqlin.quadratic_form_orbit(G, U)
        by_action = derange.delta(natural_action(image)).delta
        if by_classes != by_action or len(orbit) * int(mask.sum()) != G.order:
            failures.append(f"sign {sign}: {by_classes} vs {by_action}")
    elapsed = time.perf_counter() - start
    if elapsed >= 300:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(10, not failures, "; ".join(failures) or "PGL(2,q) and Sp(4,2) on forms")
    assert not failures, failures


# 11 ------------------------------------------------------------------------

def test_criterion_11_structural_suite(acceptance):
    start = time.perf_counter()
    report = derange.structural_lemma_checks(corpus.lemmas8_corpus())
    elapsed = time.perf_counter() - start
    failures = [f"{r.instance}: {r.criterion}" for r in report.failures()]
    kinds = {type(i).__name__ for i in corpus.lemmas8_corpus()}
    if not {"RegularNormalInstance", "ProductActionInstance", "DiagonalInstance"} <= kinds:
        failures.append("missing instance kinds")
    if elapsed >= 600:
        failures.append(f"runtime {elapsed:.1f}s")
    acceptance(11, not failures, "; ".join(failures) or f"{len(report.results)} checks")
    assert not failures, failures
