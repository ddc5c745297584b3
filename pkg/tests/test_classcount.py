import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from derangements import corpus
from derangements.classcount import (
    ClassCountRecord, Partition, check_class_count_bound, check_index_lemma, class_count,
    class_count_bound, gl2_rss_closed_form, irreducible_count, k_gl_genfun, k_p,
    limit_partial, reductive_rank, rss_proportion, semisimple_class_count,
)
from derangements.errors import FamilyMismatch, InexactCriterion, NotSubgroup, UnsupportedFamily
from derangements.fqlin import field_of_order, is_irreducible
from derangements.permcore import (
    Permutation, alternating_group, close_group, symmetric_group,
)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_irreducible_count_by_enumeration(d, q):
    F = field_of_order(q)
    brute = sum(1 for low in itertools.product(range(q), repeat=d) if is_irreducible(F, tuple(low) + (1,)))
    assert irreducible_count(d, q) == brute


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 24), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13]))
def test_irreducible_count_identity(D, q):
    # every monic polynomial of degree D factors uniquely: sum d N(d) = q^D
    total = sum(d * irreducible_count(d, q) for d in range(1, D + 1) if D % d == 0)
    assert total == q ** D


def test_genfun_known_values():
    assert k_gl_genfun(1, 5) == 4
    assert k_gl_genfun(2, 2) == 3
    assert k_gl_genfun(2, 3) == 8
    assert k_gl_genfun(2, 13) == 168
    assert k_gl_genfun(3, 2) == 6
    # q^2 - 1 classes in GL(2, q)
    for q in (4, 5, 7, 8, 9, 11):
        assert k_gl_genfun(2, q) == q * q - 1


@pytest.mark.parametrize("n,q", [(2, 7), (2, 9), (3, 3), (2, 11)])
def test_genfun_matches_brute_beyond_criterion(n, q):
    assert class_count(corpus.classical_group("GL", n, q)).k == k_gl_genfun(n, q)


@pytest.mark.parametrize("n,q", [(n, q) for n in range(1, 7) for q in (2, 3, 4, 5)])
def test_gl_class_count_at_most_q_to_n(n, q):
    assert k_gl_genfun(n, q) <= q ** n


def test_frozen_class_counts():
    expected = {("SL", 2, 5): (9, 5), ("Sp", 4, 3): (34, 9), ("SU", 3, 2): (16, 4),
                ("SOodd", 5, 3): (25, 12), ("Sp", 4, 2): (11, None), ("GU", 3, 2): (24, None)}
    for (fam, n, q), (k, kp) in expected.items():
        rec = class_count(corpus.classical_group(fam, n, q))
        assert rec.k == k
        if kp is not None:
            assert rec.k_p == kp


def test_semisimple_count_adjoint_example():
    # SO(5,3) is not simply connected and exceeds q^rank = 9
    G = corpus.classical_group("SOodd", 5, 3)
    assert semisimple_class_count(G) == 12
    assert semisimple_class_count(corpus.classical_group("Sp", 4, 3)) == 9


def test_k_p_on_permutation_groups():
    S4 = symmetric_group(4)
    assert k_p(S4, 0) == 5
    assert k_p(S4, 2) == 2  # identity and 3-cycles
    assert k_p(S4, 3) == 4


def test_index_lemma():
    S4, A4 = symmetric_group(4), alternating_group(4)
    rep = check_index_lemma(S4, A4, 3)
    assert rep.passed and rep.normal and rep.d == 2 and rep.k_quotient == 2
    D = close_group([Permutation.from_cycles("(0 1 2 3)", 4), Permutation.from_cycles("(1 3)", 4)])
    rep = check_index_lemma(S4, D, 5)
    assert rep.passed and not rep.normal and rep.d == 3
    C5 = close_group([Permutation.from_cycles("(0 1 2 3 4)", 5)])
    assert check_index_lemma(alternating_group(5), C5, 2).passed
    with pytest.raises(NotSubgroup):
        check_index_lemma(alternating_group(4), close_group([Permutation.from_cycles("(0 1)", 4)]), 2)


def test_bound_examples():
    assert class_count_bound("SL", 2, 3).rational == Fraction(9, 2)
    with pytest.raises(FamilyMismatch):
        class_count_bound("SOodd", 3, 4)
    with pytest.raises(FamilyMismatch):
        check_class_count_bound(ClassCountRecord(None, None, None, 3, 3, "brute"))
    # a record far above the bound must fail
    assert not check_class_count_bound(ClassCountRecord("SL", 2, 3, 10 ** 6, 0, "brute"))


def test_reductive_rank():
    assert reductive_rank("Sp", 4) == 2
    assert reductive_rank("SOodd", 5) == 2
    with pytest.raises(UnsupportedFamily):
        reductive_rank("E8", 8)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_gl2_rss_closed_form(q):
    assert rss_proportion(corpus.classical_group("GL", 2, q)) == gl2_rss_closed_form(q)


def test_rss_orthogonal_needs_flag():
    G = corpus.classical_group("Oplus", 4, 3)
    with pytest.raises(InexactCriterion):
        rss_proportion(G)
    assert 0 <= rss_proportion(G, allow_inexact=True) <= 1


def test_partition():
    assert [p.parts for p in Partition.all(3)] == [(3,), (2, 1), (1, 1, 1)]
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_limits():
    assert limit_partial("GL", 5).value == 1
    with pytest.raises(UnsupportedFamily):
        limit_partial("SOodd", 4)
    with pytest.raises(UnsupportedFamily):
        limit_partial("E8", 3)


@pytest.mark.parametrize("family,q", [("GU", 2), ("GU", 3), ("Sp", 3), ("Sp", 4), ("SOodd", 3), ("O", 3), ("O", 2)])
def test_limits_against_mpmath(family, q):
    mpmath.mp.dps = 30
    qq = mpmath.mpf(q)

    def prod(f, start=1, depth=60):
        out = mpmath.mpf(1)
        for i in range(start, start + depth):
            out *= f(i)
        return out

    if family == "GU":
        ref = prod(lambda i: (1 + qq ** -i) / (1 - qq ** -i))
    elif family == "Sp" and q % 2:
        ref = prod(lambda i: (1 + qq ** -i) ** 4 / (1 - qq ** -i))
    elif family == "Sp":
        ref = prod(lambda i: (1 - qq ** (-4 * i)) / ((1 - qq ** (2 - 4 * i)) * (1 - qq ** -i) ** 2))
    elif family == "SOodd":
        ref = prod(lambda i: (1 - qq ** (-4 * i)) ** 2 / ((1 - qq ** -i) ** 3 * (1 - qq ** (2 - 4 * i)) ** 2))
    elif q % 2:
        s = mpmath.sqrt(qq)
        even = (prod(lambda i: (1 + s ** (1 - 2 * i)) ** 4) + prod(lambda i: (1 - s ** (1 - 2 * i)) ** 4))
        ref = even / (4 * prod(lambda i: 1 - qq ** -i))
    else:
        ref = (prod(lambda i: (1 - qq ** (-2 * i - 2)) * (1 + qq ** (-2 * i - 1)) ** 2, start=0)
               / (2 * prod(lambda i: (1 - qq ** -i) ** 2)))
    ours = limit_partial(family, q, 60).value
    assert abs(float(ours) - float(ref)) < 1e-12


def test_gu2_constant_range():
    assert 8.2 <= float(limit_partial("GU", 2)) <= 8.3
