"""Finite fields, matrices over them, and the small classical groups.

Field elements are integers 0..q-1 holding base-p coefficient vectors in the
polynomial basis of a fixed modulus.  Groups are enumerated with numpy: each
matrix gets an integer key (its entries read as base-q digits) and the
element list is kept sorted by key.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import prod

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import isprime

from .errors import (
    CapExceeded,
    NotElement,
    NotPrime,
    Singular,
    TooLarge,
    UnsupportedFamily,
    VerificationFailure,
)
from .permcore import DEFAULT_CAP, ConjugacyClass, Permutation, PermGroup, close_group

MAX_FIELD = 256


# ---------------------------------------------------------------- fields


def _poly_mulmod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _irreducible_mod_p(coeffs, p) -> bool:
    """coeffs low-to-high, monic of degree f; trial division by monic polys of degree <= f/2."""
    f = len(coeffs) - 1
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(coeffs)
            for top in range(len(rem) - 1, d - 1, -1):
                c = rem[top]
                if c:
                    for k in range(d + 1):
                        rem[top - d + k] = (rem[top - d + k] - c * div[k]) % p
            if not any(rem[:d]):
                return False
    return True


def least_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Least monic irreducible of degree f over F_p, ordering the coefficient
    tuples from the leading term down."""
    if f == 1:
        return (0, 1)
    for desc in itertools.product(range(p), repeat=f):
        coeffs = tuple(reversed(desc)) + (1,)
        if coeffs[0] and _irreducible_mod_p(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class FqField:
    p: int
    f: int
    modulus: tuple[int, ...]  # low-to-high, monic

    @property
    def q(self) -> int:
        return self.p ** self.f

    def __repr__(self) -> str:
        return f"F{self.q}"

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        return sum(int(d) * self.p ** i for i, d in enumerate(ds))

    @cached_property
    def add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self.digits(a)
            for b in range(q):
                t[a, b] = self.from_digits((x + y) % p for x, y in zip(da, self.digits(b)))
        return t

    @cached_property
    def mul_table(self) -> np.ndarray:
        q, p, f = self.q, self.p, self.f
        if f == 1:
            r = np.arange(q, dtype=np.int64)
            return np.outer(r, r) % p
        t = np.zeros((q, q), dtype=np.int64)
        digs = [self.digits(a) for a in range(q)]
        for a in range(q):
            for b in range(a, q):
                prodc = _poly_mulmod_p(digs[a], digs[b], p)
                for top in range(len(prodc) - 1, f - 1, -1):
                    c = prodc[top]
                    if c:
                        for k in range(f + 1):
                            prodc[top - f + k] = (prodc[top - f + k] - c * self.modulus[k]) % p
                t[a, b] = t[b, a] = self.from_digits(prodc[:f])
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.from_digits((-d) % self.p for d in self.digits(a)) for a in range(self.q)],
                        dtype=np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        ones = np.argwhere(self.mul_table == 1)
        inv[ones[:, 0]] = ones[:, 1]
        return inv

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def neg(self, a):
        return int(self.neg_table[a])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out

    def frobenius(self, a: int, k: int = 1) -> int:
        return self.power(a, self.p ** k)

    @cached_property
    def frob_table(self) -> np.ndarray:
        return np.array([self.frobenius(a) for a in range(self.q)], dtype=np.int64)

    def element(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    @cached_property
    def primitive_element(self) -> int:
        for a in range(2, self.q) if self.q > 2 else [1]:
            x, k = a, 1
            while x != 1:
                x = self.mul(x, a)
                k += 1
            if k == self.q - 1:
                return a
        raise AssertionError("no primitive element")

    def subfield_conjugate(self, a: int) -> int:
        """x -> x^sqrt(q); needs an even degree (the unitary involution)."""
        if self.f % 2:
            raise ValueError("conjugation needs a quadratic extension")
        return self.power(a, self.p ** (self.f // 2))


@lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> FqField:
    if not isinstance(p, int) or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if f < 1:
        raise ValueError("degree must be positive")
    if p ** f > MAX_FIELD:
        raise TooLarge(f"field of size {p ** f} exceeds the table limit {MAX_FIELD}")
    return FqField(p, f, least_irreducible(p, f))


def field_of_order(q: int) -> FqField:
    for p in range(2, q + 1):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1:
                raise NotPrime(f"{q} is not a prime power")
            return make_field(p, f)
    raise NotPrime(f"{q} is not a prime power")


# ---------------------------------------------------------------- polynomials
# Tuples of field elements, lowest degree first, no trailing zeros.


def poly_trim(a) -> tuple:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(F: FqField, a, b) -> tuple:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim(F.add(x, y) for x, y in zip(a, b))


def poly_neg(F: FqField, a) -> tuple:
    return tuple(F.neg(x) for x in a)


def poly_sub(F: FqField, a, b) -> tuple:
    return poly_add(F, a, poly_neg(F, b))


def poly_mul(F: FqField, a, b) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F: FqField, a, b) -> tuple[tuple, tuple]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    lead_inv = F.inv(b[-1])
    quot = [0] * max(len(rem) - len(b) + 1, 0)
    while len(rem) >= len(b) and rem:
        c = F.mul(rem[-1], lead_inv)
        shift = len(rem) - len(b)
        quot[shift] = c
        for k, y in enumerate(b):
            rem[shift + k] = F.sub(rem[shift + k], F.mul(c, y))
        rem = list(poly_trim(rem))
    return poly_trim(quot), tuple(rem)


def poly_monic(F: FqField, a) -> tuple:
    a = poly_trim(a)
    if not a:
        return a
    inv = F.inv(a[-1])
    return tuple(F.mul(x, inv) for x in a)


def poly_gcd(F: FqField, a, b) -> tuple:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return poly_monic(F, a)


def poly_deriv(F: FqField, a) -> tuple:
    return poly_trim(F.mul(F.element(i), x) for i, x in enumerate(a) if i)


def poly_powmod(F: FqField, a, e: int, m) -> tuple:
    out = (1,)
    a = poly_divmod(F, a, m)[1]
    while e:
        if e & 1:
            out = poly_divmod(F, poly_mul(F, out, a), m)[1]
        a = poly_divmod(F, poly_mul(F, a, a), m)[1]
        e >>= 1
    return out


def is_squarefree(F: FqField, a) -> bool:
    """gcd(a, a') = 1.  A vanishing derivative makes a a p-th power, so not squarefree."""
    a = poly_trim(a)
    if len(a) <= 2:
        return True
    d = poly_deriv(F, a)
    if not d:
        return False
    return poly_gcd(F, a, d) == (1,)


def factor_degrees(F: FqField, a) -> list[int]:
    """Degrees of the irreducible factors of a squarefree polynomial
    (distinct-degree factorization)."""
    f = poly_monic(F, a)
    x = (0, 1)
    h = x
    out = []
    i = 1
    while len(f) - 1 >= 2 * i:
        h = poly_powmod(F, h, F.q, f)
        g = poly_gcd(F, f, poly_sub(F, h, x))
        if g != (1,):
            out += [i] * ((len(g) - 1) // i)
            f = poly_divmod(F, f, g)[0]
            h = poly_divmod(F, h, f)[1]
        i += 1
    if len(f) > 1:
        out.append(len(f) - 1)
    return sorted(out)


def is_irreducible(F: FqField, a) -> bool:
    a = poly_trim(a)
    return len(a) >= 2 and is_squarefree(F, a) and factor_degrees(F, a) == [len(a) - 1]


# ---------------------------------------------------------------- matrices


def _matmul(F: FqField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batched product over F; A is (..., n, k), B is (..., k, m)."""
    if F.f == 1:
        return np.matmul(A, B) % F.p
    mul, add = F.mul_table, F.add_table
    k = A.shape[-1]
    out = mul[A[..., :, 0:1], B[..., 0:1, :]]
    for j in range(1, k):
        out = add[out, mul[A[..., :, j:j + 1], B[..., j:j + 1, :]]]
    return out


def _det(F: FqField, A: np.ndarray) -> np.ndarray:
    """Batched Leibniz determinant."""
    n = A.shape[-1]
    mul, add, neg = F.mul_table, F.add_table, F.neg_table
    total = np.zeros(A.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = A[..., 0, perm[0]]
        for i in range(1, n):
            term = mul[term, A[..., i, perm[i]]]
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        if inversions % 2:
            term = neg[term]
        total = add[total, term]
    return total


def _keys(F: FqField, A: np.ndarray) -> np.ndarray:
    n2 = A.shape[-1] * A.shape[-2]
    weights = F.q ** np.arange(n2, dtype=np.int64)
    return A.reshape(A.shape[:-2] + (n2,)) @ weights


class FqMatrix:
    """Square matrix over a finite field; entries are field integers."""

    __slots__ = ("field", "data")

    def __init__(self, field: FqField, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must lie in 0..{field.q - 1}")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def identity(cls, field: FqField, n: int) -> "FqMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __mul__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.field, _matmul(self.field, self.data, other.data))

    def __eq__(self, other) -> bool:
        return isinstance(other, FqMatrix) and self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.field.q, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FqMatrix({self.field!r}, {self.data.tolist()})"

    def key(self) -> int:
        return int(_keys(self.field, self.data))

    def to_rows(self) -> list[list[int]]:
        return self.data.tolist()

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.field, self.data.T)

    def conjugate(self) -> "FqMatrix":
        return FqMatrix(self.field, np.vectorize(self.field.subfield_conjugate, otypes=[np.int64])(self.data))

    def det(self) -> int:
        return int(_det(self.field, self.data))

    def is_identity(self) -> bool:
        return np.array_equal(self.data, np.eye(self.n, dtype=np.int64))

    def order(self) -> int:
        if self.det() == 0:
            raise Singular("singular matrix has no multiplicative order")
        x, k = self, 1
        while not x.is_identity():
            x = x * self
            k += 1
        return k

    def inverse(self) -> "FqMatrix":
        k = self.order()
        x = FqMatrix.identity(self.field, self.n)
        for _ in range(k - 1):
            x = x * self
        return x


def charpoly(m: FqMatrix) -> tuple:
    """det(xI - m), lowest degree first."""
    F = m.field
    n = m.n
    entry = [[(F.neg(int(m.data[i, j])), 1) if i == j else poly_trim((F.neg(int(m.data[i, j])),))
              for j in range(n)] for i in range(n)]
    total: tuple = ()
    for perm in itertools.permutations(range(n)):
        term: tuple = (1,)
        for i in range(n):
            term = poly_mul(F, term, entry[i][perm[i]])
            if not term:
                break
        if not term:
            continue
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total = poly_sub(F, total, term) if inversions % 2 else poly_add(F, total, term)
    return total


def is_regular_semisimple(m: FqMatrix) -> bool:
    if m.det() == 0:
        raise Singular("matrix is singular")
    return is_squarefree(m.field, charpoly(m))


# ---------------------------------------------------------------- forms


def _antidiag(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def symplectic_form(F: FqField, n: int) -> np.ndarray:
    m = n // 2
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        J[i, n - 1 - i] = 1 if i < m else F.neg(1)
    return J


def least_irreducible_quadratic(F: FqField) -> tuple[int, int]:
    """(b, c) with x^2 + b x + c irreducible over F, least in lex order."""
    for b in range(F.q):
        for c in range(F.q):
            if is_irreducible(F, (c, b, 1)):
                return b, c
    raise AssertionError("no irreducible quadratic")


def quadratic_form(F: FqField, n: int, sign: int) -> np.ndarray:
    """Upper-triangular U with Q(x) = x^T U x."""
    U = np.zeros((n, n), dtype=np.int64)
    if n % 2:
        m = n // 2
        for i in range(m):
            U[i, n - 1 - i] = 1
        U[m, m] = 1
        return U
    m = n // 2
    for i in range(m):
        U[i, n - 1 - i] = 1
    if sign < 0:
        b, c = least_irreducible_quadratic(F)
        U[m - 1, m - 1] = 1
        U[m - 1, m] = b
        U[m, m] = c
    return U


def polar_form(F: FqField, U: np.ndarray) -> np.ndarray:
    return F.add_table[U, U.T]


def _fold(F: FqField, M: np.ndarray) -> np.ndarray:
    """Upper-triangular matrix defining the same quadratic form as M."""
    n = M.shape[-1]
    out = M.copy()
    for i in range(n):
        for j in range(i):
            out[..., j, i] = F.add_table[out[..., j, i], out[..., i, j]]
            out[..., i, j] = 0
    return out


def _conj_entries(F: FqField, A: np.ndarray) -> np.ndarray:
    table = np.array([F.subfield_conjugate(a) for a in range(F.q)], dtype=np.int64)
    return table[A]


def _preserves(F: FqField, kind: str | None, form: np.ndarray | None, A: np.ndarray) -> np.ndarray:
    """Boolean mask over a batch of matrices."""
    if kind is None:
        return np.ones(A.shape[0], dtype=bool)
    At = np.swapaxes(A, -1, -2)
    if kind == "bilinear":
        M = _matmul(F, _matmul(F, At, form[None]), A)
    elif kind == "hermitian":
        M = _matmul(F, _matmul(F, At, form[None]), _conj_entries(F, A))
    elif kind == "quadratic":
        M = _fold(F, _matmul(F, _matmul(F, At, form[None]), A))
    else:
        raise ValueError(kind)
    return np.all(M == form[None], axis=(-1, -2))


def form_value(group: "ClassicalGroup", u, v=None) -> int:
    """B(u, v), h(u, v) or Q(u), as the family dictates."""
    F = group.field
    u = np.asarray(u, dtype=np.int64)
    if group.form_kind == "quadratic":
        return int(_matmul(F, _matmul(F, u[None, :], group.form), u[:, None])[0, 0])
    v = np.asarray(v, dtype=np.int64)
    if group.form_kind == "hermitian":
        v = _conj_entries(F, v)
    return int(_matmul(F, _matmul(F, u[None, :], group.form), v[:, None])[0, 0])


# ---------------------------------------------------------------- orders

FAMILIES = ("GL", "SL", "GU", "SU", "Sp", "Oplus", "Ominus", "SOodd")


def classical_order(family: str, n: int, q: int) -> int:
    if family in ("GL", "SL"):
        o = q ** (n * (n - 1) // 2) * prod(q ** i - 1 for i in range(1, n + 1))
        return o if family == "GL" else o // (q - 1)
    if family in ("GU", "SU"):
        o = q ** (n * (n - 1) // 2) * prod(q ** i - (-1) ** i for i in range(1, n + 1))
        return o if family == "GU" else o // (q + 1)
    if family == "Sp":
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family in ("Oplus", "Ominus"):
        m = n // 2
        eps = 1 if family == "Oplus" else -1
        return 2 * q ** (m * (m - 1)) * (q ** m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
    if family == "SOodd":
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    raise UnsupportedFamily(f"unknown family {family!r}")


# ---------------------------------------------------------------- closure


def _sorted_unique(keys: np.ndarray, mats: np.ndarray):
    k, idx = np.unique(keys, return_index=True)
    return k, mats[idx]


def _close(F: FqField, gens: np.ndarray, cap: int):
    n = gens.shape[-1]
    ident = np.eye(n, dtype=np.int64)[None]
    known_keys = _keys(F, ident)
    known = [ident]
    frontier = ident
    while len(frontier):
        prods = np.concatenate([_matmul(F, frontier, g[None]) for g in gens])
        k, mats = _sorted_unique(_keys(F, prods), prods)
        pos = np.searchsorted(known_keys, k)
        pos[pos == len(known_keys)] = 0
        fresh = known_keys[pos] != k
        k, mats = k[fresh], mats[fresh]
        if len(known_keys) + len(k) > cap:
            raise CapExceeded(f"closure exceeded cap {cap}")
        known_keys = np.concatenate([known_keys, k])
        order = np.argsort(known_keys, kind="stable")
        known.append(mats)
        frontier = mats
        known_keys = known_keys[order]
        known = [np.concatenate(known)[order]]
    return known_keys, known[0]


class ClassicalGroup:
    """A materialized matrix group with its form and order certificate."""

    def __init__(self, family: str, n: int, field: FqField, form_kind, form, keys, elements, generators,
                 q: int):
        self.family = family
        self.n = n
        self.field = field
        self.q = q  # the q of the family name; the matrix field is F_{q^2} for unitary groups
        self.form_kind = form_kind
        self.form = form
        self.keys = keys
        self.elements = elements
        self.generators = [FqMatrix(field, g) for g in generators]
        self.order = len(keys)
        self._classes = None
        self._class_ids = None

    def __repr__(self) -> str:
        return f"<{self.name} order={self.order}>"

    @property
    def name(self) -> str:
        return f"{self.family}({self.n},{self.q})"

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def characteristic(self) -> int:
        return self.field.p

    def __len__(self) -> int:
        return self.order

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        """Positions of a batch of matrices, -1 where absent."""
        k = _keys(self.field, mats)
        pos = np.searchsorted(self.keys, k)
        pos[pos >= len(self.keys)] = 0
        return np.where(self.keys[pos] == k, pos, -1)

    def __contains__(self, m: FqMatrix) -> bool:
        return m.field == self.field and m.n == self.n and int(self.index_of(m.data[None])[0]) >= 0

    def element(self, i: int) -> FqMatrix:
        return FqMatrix(self.field, self.elements[i])

    def __iter__(self):
        for i in range(self.order):
            yield self.element(i)

    def identity(self) -> FqMatrix:
        return FqMatrix.identity(self.field, self.n)

    def class_ids(self) -> np.ndarray:
        if self._class_ids is None:
            self.conjugacy_classes()
        return self._class_ids

    def conjugacy_classes(self) -> tuple[ConjugacyClass, ...]:
        """Classes as orbits of conjugation by the generators, sorted by
        (element order, key of the least member)."""
        if self._classes is not None:
            return self._classes
        F, E, N = self.field, self.elements, self.order
        rows, cols = [], []
        for s in self.generators:
            s_inv = s.inverse()
            conj = _matmul(F, _matmul(F, s_inv.data[None], E), s.data[None])
            idx = self.index_of(conj)
            if (idx < 0).any():
                raise VerificationFailure("conjugation left the group")
            rows.append(np.arange(N))
            cols.append(idx)
        graph = coo_matrix((np.ones(N * len(rows), dtype=np.int8),
                            (np.concatenate(rows), np.concatenate(cols))), shape=(N, N))
        count, labels = connected_components(graph, directed=True, connection="weak")
        sizes = np.bincount(labels, minlength=count)
        first = np.full(count, N, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(N))
        found = [(self.element(int(first[c])).order(), int(first[c]), c) for c in range(count)]
        found.sort()
        remap = np.empty(count, dtype=np.int64)
        classes = []
        for new, (_, i, c) in enumerate(found):
            remap[c] = new
            classes.append(ConjugacyClass(self.element(i), int(sizes[c])))
        self._class_ids = remap[labels]
        self._classes = tuple(classes)
        return self._classes

    def element_order(self, m: FqMatrix) -> int:
        return m.order()

    def centralizer_order(self, m: FqMatrix) -> int:
        return centralizer_order(self, m)

    def union_of_classes_meeting(self, mask: np.ndarray) -> int:
        """Number of elements conjugate to some element selected by ``mask``."""
        ids = self.class_ids()
        hit = np.unique(ids[mask])
        sizes = np.array([c.size for c in self.conjugacy_classes()])
        return int(sizes[hit].sum())

    def subgroup_mask(self, kind: str, form: np.ndarray) -> np.ndarray:
        """Elements preserving an additional form."""
        return _preserves(self.field, kind, form, self.elements)


def centralizer_order(group: ClassicalGroup, m: FqMatrix) -> int:
    if m not in group:
        raise NotElement(f"{m!r} is not in {group.name}")
    F = group.field
    left = _matmul(F, group.elements, m.data[None])
    right = _matmul(F, m.data[None], group.elements)
    return int(np.all(left == right, axis=(-1, -2)).sum())


def _pool_vectors(F: FqField, n: int):
    """Vectors with at most two nonzero coordinates, in a fixed order."""
    out = []
    for i in range(n):
        for a in range(1, F.q):
            v = np.zeros(n, dtype=np.int64)
            v[i] = a
            out.append(v)
    for i, j in itertools.combinations(range(n), 2):
        for a in range(1, F.q):
            for b in range(1, F.q):
                v = np.zeros(n, dtype=np.int64)
                v[i], v[j] = a, b
                out.append(v)
    return out


def _outer(F: FqField, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    return F.mul_table[v[:, None], w[None, :]]


def _candidate_pool(family: str, F: FqField, n: int, kind, form) -> np.ndarray:
    I = np.eye(n, dtype=np.int64)
    add, mul, neg = F.add_table, F.mul_table, F.neg_table
    cands = []
    if family in ("GL", "SL") or kind is not None:
        for i, j in itertools.permutations(range(n), 2):
            for c in range(1, F.q):
                M = I.copy()
                M[i, j] = c
                cands.append(M)
    if family == "GL":
        for c in range(2, F.q):
            M = I.copy()
            M[0, 0] = c
            cands.append(M)
    if kind == "bilinear":
        for v in _pool_vectors(F, n):
            Jv = _matmul(F, form, v[:, None])[:, 0]
            for c in range(1, F.q):
                cands.append(add[I, mul[c, _outer(F, v, Jv)]])
    if kind == "quadratic":
        G = polar_form(F, form)
        for v in _pool_vectors(F, n):
            Qv = int(_matmul(F, _matmul(F, v[None, :], form), v[:, None])[0, 0])
            if Qv:
                Gv = _matmul(F, G, v[:, None])[:, 0]
                coef = neg[F.inv(Qv)]
                cands.append(add[I, mul[coef, _outer(F, v, Gv)]])
        for i, j, k, l in itertools.permutations(range(n), 4):
            if i < k:
                for c in range(1, F.q):
                    for d in range(1, F.q):
                        M = I.copy()
                        M[i, j], M[k, l] = c, d
                        cands.append(M)
        for perm in itertools.permutations(range(n)):
            cands.append(I[list(perm)])
    if kind == "hermitian":
        for v in _pool_vectors(F, n):
            Jv = _matmul(F, form, _conj_entries(F, v)[:, None])[:, 0]
            hvv = int(_matmul(F, v[None, :], Jv[:, None])[0, 0])
            outer = _outer(F, v, Jv)
            if hvv == 0:
                for c in range(1, F.q):
                    cands.append(add[I, mul[c, outer]])
            else:
                for lam in range(2, F.q):
                    coef = mul[add[lam, neg[1]], F.inv(hvv)]
                    cands.append(add[I, mul[coef, outer]])
        for diag in itertools.product(range(1, F.q), repeat=n):
            cands.append(np.diag(diag))
    if not cands:
        return np.zeros((0, n, n), dtype=np.int64)
    return np.array(cands, dtype=np.int64)


def build_classical(family: str, n: int, q: int, cap: int = DEFAULT_CAP) -> ClassicalGroup:
    """Enumerate a classical group and check its order against the family formula.

    Generators are chosen greedily from a pool of transvections, reflections
    and form-preserving elementary matrices, keeping a candidate only when it
    enlarges the group generated so far.
    """
    if family not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {family!r}")
    if n < 1:
        raise ValueError("dimension must be positive")
    base = field_of_order(q)
    if family in ("Sp", "Oplus", "Ominus") and n % 2:
        raise UnsupportedFamily(f"{family} needs even dimension")
    if family == "SOodd":
        if n % 2 == 0:
            raise UnsupportedFamily("SOodd needs odd dimension")
        if q % 2 == 0:
            raise UnsupportedFamily("odd-dimensional orthogonal groups in even characteristic are excluded")
    if family in ("GU", "SU"):
        F = make_field(base.p, 2 * base.f)
        kind, form = "hermitian", _antidiag(n)
    elif family == "Sp":
        F, kind, form = base, "bilinear", symplectic_form(base, n)
    elif family in ("Oplus", "Ominus", "SOodd"):
        F, kind = base, "quadratic"
        form = quadratic_form(base, n, -1 if family == "Ominus" else 1)
    else:
        F, kind, form = base, None, None
    if n * n * np.log2(F.q) >= 62:
        raise TooLarge("matrix keys would overflow 62 bits")
    expected = classical_order(family, n, q)
    det_one = family in ("SL", "SU", "SOodd")
    full = {"SU": "GU", "SOodd": "SOodd"}.get(family, family)
    target = classical_order("GU", n, q) if family == "SU" else expected
    if family == "SOodd":
        target = 2 * expected  # the full orthogonal group, filtered below
    if target > cap:
        raise CapExceeded(f"{family}({n},{q}) has order {target} > cap {cap}")

    pool = _candidate_pool(full, F, n, kind, form)
    if len(pool):
        pool = pool[_preserves(F, kind, form, pool) & (_det(F, pool) != 0)]
        if family == "SL":
            pool = pool[_det(F, pool) == 1]
        pool = _sorted_unique(_keys(F, pool), pool)[1]
    ident = np.eye(n, dtype=np.int64)
    gens: list[np.ndarray] = []
    keys = _keys(F, ident[None])
    mats = ident[None]
    pool_keys = _keys(F, pool) if len(pool) else np.zeros(0, dtype=np.int64)
    for cand, ck in zip(pool, pool_keys):
        if len(keys) == target:
            break
        pos = np.searchsorted(keys, ck)
        if pos < len(keys) and keys[pos] == ck:
            continue
        gens.append(cand)
        keys, mats = _close(F, np.array(gens), cap)
    if not gens:
        gens.append(ident)
    if len(keys) != target:
        raise VerificationFailure(f"generated {len(keys)} elements, expected {target}")
    if det_one:
        keep = _det(F, mats) == 1
        keys, mats = keys[keep], mats[keep]
        gens = _det_one_generators(F, mats, keys)
    group = ClassicalGroup(family, n, F, kind, form, keys, mats, gens, q)
    if group.order != expected:
        raise VerificationFailure(f"{group.name}: order {group.order} != {expected}")
    if not _preserves(F, kind, form, mats).all():
        raise VerificationFailure(f"{group.name}: an element fails to preserve the form")
    return group


def _det_one_generators(F: FqField, mats: np.ndarray, keys: np.ndarray) -> list[np.ndarray]:
    """Greedy generating set for an already enumerated group."""
    n = mats.shape[-1]
    ident = np.eye(n, dtype=np.int64)
    gens: list[np.ndarray] = []
    cur = _keys(F, ident[None])
    for cand, ck in zip(mats, keys):
        if len(cur) == len(keys):
            break
        pos = np.searchsorted(cur, ck)
        if pos < len(cur) and cur[pos] == ck:
            continue
        gens.append(cand)
        cur, _ = _close(F, np.array(gens), len(keys))
    return gens or [ident]


# ---------------------------------------------------------------- permutation images


def projective_points(F: FqField, n: int) -> list[tuple[int, ...]]:
    """Nonzero row vectors whose first nonzero coordinate is 1."""
    pts = []
    for v in itertools.product(range(F.q), repeat=n):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def _normalize(F: FqField, v) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = F.inv(lead)
    return tuple(F.mul(x, inv) for x in v)


def projective_image(matrices, name: str | None = None, cap: int = DEFAULT_CAP) -> PermGroup:
    """Permutation group induced on the projective space by x -> x g (row vectors)."""
    matrices = list(matrices)
    F, n = matrices[0].field, matrices[0].n
    pts = projective_points(F, n)
    index = {p: i for i, p in enumerate(pts)}
    P = np.array(pts, dtype=np.int64)
    images = []
    for g in matrices:
        rows = _matmul(F, P[None], g.data[None])[0]
        images.append(Permutation(index[_normalize(F, r)] for r in rows.tolist()))
    return close_group(images, cap=cap, name=name)


def vector_action_group(group: ClassicalGroup, name: str | None = None) -> PermGroup:
    """Faithful permutation image on all row vectors, x -> x g."""
    F, n = group.field, group.n
    vecs = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64)
    weights = F.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    images = []
    for g in group.generators:
        rows = _matmul(F, vecs[None], g.data[None])[0]
        images.append(Permutation((rows @ weights).tolist()))
    out = close_group(images, name=name or group.name)
    if out.order != group.order:
        raise VerificationFailure("vector action is not faithful")
    return out


def quadratic_form_orbit(group: ClassicalGroup, U: np.ndarray):
    """Orbit of the quadratic form Q(x) = x^T U x under Q -> Q o g.

    Returns the image permutation group on the orbit and the orbit itself,
    each form recorded by its values on all vectors.
    """
    F, n = group.field, group.n
    vecs = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64)
    weights = F.q ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def values(Umat):
        xu = _matmul(F, vecs[:, None, :], Umat[None])
        return tuple(_matmul(F, xu, vecs[:, :, None]).reshape(-1).tolist())

    # images of vectors under each generator as column action x -> g x
    gen_maps = []
    for g in group.generators:
        cols = _matmul(F, g.data[None], vecs[:, :, None])[..., 0]
        gen_maps.append(cols @ weights)
    start = values(U)
    orbit = [start]
    index = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for Q in frontier:
            arr = np.array(Q)
            for gm in gen_maps:
                R = tuple(arr[gm].tolist())
                if R not in index:
                    index[R] = len(orbit)
                    orbit.append(R)
                    nxt.append(R)
        frontier = nxt
    images = []
    for gm in gen_maps:
        images.append(Permutation(index[tuple(np.array(Q)[gm].tolist())] for Q in orbit))
    return close_group(images, name=f"{group.name} on forms"), orbit
