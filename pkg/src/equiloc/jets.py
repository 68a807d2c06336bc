"""Reparametrization action on jets of curves and the invariant minors.

A k-jet of a curve in C^n is stored through the normalized coefficients
v_i = f^(i)/i!.  Entries may be exact rationals or symbolic scalars
(:class:`~equiloc.algebra.Polynomial`); all operations only add and
multiply, so both work.

Basis order of Sym^<=k C^n is normative for the embedding matrix and its
minors: degree-major, and inside each degree the monomials in decreasing
lexicographic order (e1^p first, en^p last).  Composition acts on the
right through the upper-triangular coefficient matrix of the
reparametrization; empirically (and then asserted in the tests) the matrix
map is multiplicative: matrix(f o g) = matrix(f) * matrix(g) on row
vectors of curve coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Polynomial
from .errors import SingularLinearPart, TooFewColumns


def _value(x):
    """Normalize a scalar entry: int/Fraction stay exact, Polynomial passes."""
    if isinstance(x, Polynomial):
        return x
    return Fraction(x)


def _is_zero(x) -> bool:
    return x.is_zero if isinstance(x, Polynomial) else x == 0


@dataclass(frozen=True)
class ReparamJet:
    """Jet of a reparametrization of (C, 0): t -> a1 t + a2 t^2 + ...,
    with invertible linear part a1 != 0."""

    alphas: tuple

    def __init__(self, alphas):
        alphas = tuple(_value(a) for a in alphas)
        if not alphas or _is_zero(alphas[0]):
            raise SingularLinearPart(
                "reparametrization must have a nonzero linear part")
        object.__setattr__(self, "alphas", alphas)

    @property
    def k(self) -> int:
        return len(self.alphas)

    @classmethod
    def identity(cls, k: int) -> "ReparamJet":
        return cls((1,) + (0,) * (k - 1))


@dataclass(frozen=True)
class JetCurve:
    """k-jet of a curve germ in C^n: coefficient vectors v_1..v_k with
    v_i = f^(i)/i!."""

    n: int
    coefficients: tuple  # k tuples of length n

    def __init__(self, coefficients, n=None):
        rows = tuple(tuple(_value(x) for x in row) for row in coefficients)
        if n is None:
            n = len(rows[0]) if rows else 0
        if any(len(row) != n for row in rows):
            raise ValueError("coefficient rows must all have length n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coefficients", rows)

    @property
    def k(self) -> int:
        return len(self.coefficients)

    @property
    def is_regular(self) -> bool:
        return any(not _is_zero(x) for x in self.coefficients[0])

    @classmethod
    def from_derivatives(cls, derivatives) -> "JetCurve":
        """Build from raw derivative vectors f', f'', ...: v_i = f^(i)/i!."""
        rows = []
        fact = 1
        for i, row in enumerate(derivatives, start=1):
            fact *= i
            rows.append(tuple(_value(x) * Fraction(1, fact) for x in row))
        return cls(tuple(rows))


def gk_matrix(phi: ReparamJet):
    """k x k coefficient matrix of composition with phi: entry (i, j) is
    the sum over compositions of j into i positive parts of the products
    of the alphas.  Upper triangular with diagonal a1^i."""
    k = phi.k
    al = phi.alphas
    rows = [list(al)]
    for _ in range(1, k):
        prev = rows[-1]
        row = []
        for j in range(1, k + 1):
            acc = 0
            for a in range(1, j + 1):
                if j - a >= 1:
                    acc = acc + al[a - 1] * prev[j - a - 1]
            row.append(acc)
        rows.append(row)
    return [[_value(x) if not isinstance(x, Polynomial) else x
             for x in row] for row in rows]


def compose(curve: JetCurve, phi: ReparamJet) -> JetCurve:
    """The jet of curve o phi: coefficient rows times the matrix of phi."""
    if curve.k != phi.k:
        raise ValueError("jet orders must match")
    g = gk_matrix(phi)
    k, n = curve.k, curve.n
    rows = []
    for j in range(k):
        row = []
        for c in range(n):
            acc = 0
            for i in range(k):
                acc = acc + curve.coefficients[i][c] * g[i][j]
            row.append(acc)
        rows.append(tuple(row))
    return JetCurve(tuple(rows), n)


def compose_reparam(first: ReparamJet, second: ReparamJet) -> ReparamJet:
    """Jet substitution first o second (apply second, then first)."""
    if first.k != second.k:
        raise ValueError("jet orders must match")
    g = gk_matrix(second)
    k = first.k
    out = []
    for j in range(k):
        acc = 0
        for i in range(k):
            acc = acc + first.alphas[i] * g[i][j]
        out.append(acc)
    return ReparamJet(tuple(out))


def sym_basis(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of the monomial basis of Sym^<=k C^n: degree-major,
    decreasing lex within each degree."""
    basis = []
    for degree in range(1, k + 1):
        level = [e for e in itertools.product(range(degree, -1, -1), repeat=n)
                 if sum(e) == degree]
        basis.extend(sorted(level, reverse=True))
    return basis


def sym_dimension(n: int, k: int) -> int:
    import math
    return math.comb(n + k, k) - 1


def _linear_form(vector):
    """A length-n vector as {exponent tuple: value} of a degree-1 form."""
    n = len(vector)
    out = {}
    for c, x in enumerate(vector):
        if not _is_zero(x):
            e = tuple(1 if i == c else 0 for i in range(n))
            out[e] = x
    return out


def _form_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            cur = out.get(e, 0)
            out[e] = cur + ca * cb
    return out


def rho(curve: JetCurve):
    """The k x dim(Sym^<=k C^n) embedding matrix: row j collects, over all
    ordered compositions j = a_1 + ... + a_i, the polynomial products
    v_(a_1) ... v_(a_i), written in the documented monomial basis."""
    k, n = curve.k, curve.n
    vs = [_linear_form(row) for row in curve.coefficients]
    # comp[i][j] = sum over compositions of j into i parts of the products
    comp = [None] + [[None] * (k + 1) for _ in range(k)]
    comp[1] = [None] + [dict(vs[j - 1]) for j in range(1, k + 1)]
    for i in range(2, k + 1):
        comp[i] = [None] * (k + 1)
        for j in range(i, k + 1):
            acc: dict = {}
            for a in range(1, j - i + 2):
                for e, c in _form_mul(vs[a - 1], comp[i - 1][j - a]).items():
                    cur = acc.get(e, 0)
                    acc[e] = cur + c
            comp[i][j] = acc
    basis = sym_basis(n, k)
    matrix = []
    for j in range(1, k + 1):
        row_form: dict = {}
        for i in range(1, j + 1):
            for e, c in comp[i][j].items():
                cur = row_form.get(e, 0)
                row_form[e] = cur + c
        matrix.append([row_form.get(e, 0) for e in basis])
    return matrix


def _det(rows) -> object:
    """Determinant by permutation expansion; entries need + and * only."""
    k = len(rows)
    acc = 0
    for perm in itertools.permutations(range(k)):
        sign = 1
        seen = list(perm)
        for i in range(k):
            for j in range(i + 1, k):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(k):
            term = rows[i][perm[i]] * term
        acc = acc + term
    return acc


def kxk_minors(matrix) -> list:
    """All maximal minors of a k x M matrix (M >= k), over column subsets
    in lexicographic order."""
    k = len(matrix)
    cols = len(matrix[0]) if matrix else 0
    if cols < k:
        raise TooFewColumns(f"need at least {k} columns, matrix has {cols}")
    out = []
    for subset in itertools.combinations(range(cols), k):
        rows = [[matrix[i][j] for j in subset] for i in range(k)]
        out.append(_det(rows))
    return out


def invariant_minors(curve: JetCurve) -> list:
    """The k x k minors of the embedding matrix, lexicographic in the
    column subsets; invariant under unipotent reparametrization."""
    return kxk_minors(rho(curve))
