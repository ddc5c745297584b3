import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, Poly, symbols

from derangements import corpus
from derangements.errors import CapExceeded, NotPrime, TooLarge, UnsupportedFamily
from derangements.fqlin import (
    FqMatrix, build_classical, charpoly, classical_order, factor_degrees, field_of_order,
    form_value, is_irreducible, is_regular_semisimple, is_squarefree, least_irreducible,
    make_field, projective_image, quadratic_form, vector_action_group,
)

x = symbols("x")


def test_least_irreducible_moduli():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_field_axioms(q):
    F = field_of_order(q)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    g = F.primitive_element
    assert len({F.power(g, k) for k in range(q - 1)}) == q - 1
    assert all(F.frobenius(a, F.f) == a for a in range(q))


def test_field_errors():
    with pytest.raises(NotPrime):
        make_field(6, 1)
    with pytest.raises(TooLarge):
        make_field(2, 9)
    with pytest.raises((NotPrime, ValueError)):
        field_of_order(6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_distributive(a, b, c):
    F = field_of_order(9)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("family,n,q", [
    ("GL", 2, 3), ("GL", 3, 2), ("SL", 2, 5), ("SL", 3, 3), ("GU", 2, 3), ("GU", 3, 2),
    ("SU", 3, 2), ("Sp", 4, 2), ("Sp", 4, 3), ("Oplus", 4, 2), ("Ominus", 4, 3), ("SOodd", 5, 3),
    ("Oplus", 2, 5), ("Ominus", 2, 4),
])
def test_orders(family, n, q):
    G = corpus.classical_group(family, n, q)
    assert G.order == classical_order(family, n, q)


def test_known_orders():
    assert classical_order("GL", 2, 3) == 48
    assert classical_order("Sp", 4, 2) == 720
    assert classical_order("GU", 3, 2) == 648
    assert classical_order("SOodd", 5, 3) == 51840
    assert classical_order("Oplus", 4, 2) == 72
    assert classical_order("Ominus", 4, 2) == 120


def test_build_errors():
    with pytest.raises(UnsupportedFamily):
        build_classical("SOodd", 3, 4)
    with pytest.raises(UnsupportedFamily):
        build_classical("SOodd", 4, 3)
    with pytest.raises(CapExceeded):
        build_classical("GL", 3, 3, cap=1000)


@pytest.mark.parametrize("family,n,q", [("Sp", 4, 3), ("GU", 3, 2), ("Ominus", 4, 3), ("SOodd", 5, 3), ("Oplus", 4, 2)])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_forms_preserved(family, n, q, data):
    G = corpus.classical_group(family, n, q)
    F = G.field
    A = G.element(data.draw(st.integers(0, G.order - 1))).data
    u = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=n, max_size=n)))
    v = np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=n, max_size=n)))
    Au = FqMatrix(F, A) * FqMatrix(F, u[:, None].repeat(n, axis=1))
    Av = FqMatrix(F, A) * FqMatrix(F, v[:, None].repeat(n, axis=1))
    au, av = Au.data[:, 0], Av.data[:, 0]
    if G.form_kind == "quadratic":
        assert form_value(G, au) == form_value(G, u)
    else:
        assert form_value(G, au, av) == form_value(G, u, v)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_charpoly_matches_sympy(q):
    G = corpus.classical_group("GL", 3, 3) if q == 3 else corpus.classical_group("GL", 2, q)
    for i in range(0, G.order, max(1, G.order // 40)):
        m = G.element(i)
        theirs = Poly(Matrix(m.to_rows()).charpoly(x).as_expr(), x, modulus=q)
        coeffs = [int(c) % q for c in reversed(theirs.all_coeffs())]
        assert tuple(coeffs) == charpoly(m)


def test_polynomial_helpers():
    F = field_of_order(2)
    assert is_irreducible(F, (1, 1, 1))
    assert not is_irreducible(F, (1, 0, 1))  # (x+1)^2
    assert not is_squarefree(F, (1, 0, 1))
    assert sorted(factor_degrees(F, (0, 1, 1, 1))) == [1, 2]


def test_centralizers():
    G = corpus.classical_group("GL", 2, 3)
    assert G.centralizer_order(G.identity()) == 48
    S = corpus.classical_group("SL", 2, 3)
    F = S.field
    u = FqMatrix(F, [[1, 1], [0, 1]])
    assert S.centralizer_order(u) == 6
    # companion matrix of x^2 + 1, irreducible over F3: nonsplit torus of order 8
    t = FqMatrix(F, [[0, 2], [1, 0]])
    assert G.centralizer_order(t) == 8
    assert is_regular_semisimple(t)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rss_centralizers_in_gl2_are_tori(q):
    G = corpus.classical_group("GL", 2, q)
    for c in G.conjugacy_classes():
        m = c.representative
        if is_regular_semisimple(m):
            size = G.centralizer_order(m)
            assert size in ((q - 1) ** 2, q * q - 1)
            assert G.order // size == c.size


@pytest.mark.parametrize("family,n,q,r", [("GL", 2, 3, 2), ("SL", 2, 5, 1), ("Sp", 4, 3, 2), ("GU", 2, 3, 2)])
def test_min_centralizer(family, n, q, r):
    G = corpus.classical_group(family, n, q)
    smallest = min(G.order // c.size for c in G.conjugacy_classes())
    assert smallest >= (q - 1) ** r


def test_projective_and_vector_actions():
    G = corpus.classical_group("GL", 2, 5)
    P = projective_image(G.generators)
    assert P.degree == 6 and P.order == 120
    assert vector_action_group(corpus.classical_group("GL", 2, 3)).order == 48


def test_quadratic_form_types():
    F = field_of_order(3)
    plus, minus = quadratic_form(F, 2, 1), quadratic_form(F, 2, -1)
    # a hyperbolic plane has isotropic vectors, an anisotropic one does not
    G = corpus.classical_group("Oplus", 2, 3)
    H = corpus.classical_group("Ominus", 2, 3)
    assert (G.form == plus).all() and (H.form == minus).all()
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    assert any(form_value(G, v) == 0 for v in vecs)
    assert not any(form_value(H, v) == 0 for v in vecs)
