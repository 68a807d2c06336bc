"""Thom polynomials of corank-one (curvilinear) singularity loci via the
iterated-residue formula, with positivity and coefficient-ratio reports.

Calibration
-----------
The residue form has numerator ``prod_{i<j}(z_i - z_j) * Q_k * prod_l
c(1/z_l) z_l^codim`` and denominators ``z_i + z_j - z_l`` over all triples
``1 <= i <= j`` and ``i + j <= l <= k``.  The contour is realized with
``z_k`` most dominant, and a global sign ``(-1)^k`` is applied on top of
the residue engine's orientation; together these make the k = 1 family
come out as ``+c_(codim+1)`` and are equivalent to reading off the plain
``(z_1...z_k)^-1`` coefficient of the expansion.  The same calibration is
asserted against classical values for k = 2, 3 in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from .algebra import CHERN, RESIDUE, LaurentSeries, Monomial, Polynomial, cvar, zvar
from .errors import InputError, MissingQ
from .residue import DEFAULT_CAP, AffineForm, ResidueForm, iterated_residue

_BUILTIN_Q = {
    1: Polynomial.one(),
    2: Polynomial.one(),
    3: Polynomial.one(),
    4: (2 * Polynomial.var(zvar(1)) + Polynomial.var(zvar(2))
        - Polynomial.var(zvar(4))),
}


@dataclass(frozen=True)
class QTable:
    """Numerator polynomials of the residue formula, indexed by the order k.
    Orders 1..4 are built in; user-supplied entries are kept but flagged
    unverified."""

    entries: MappingProxyType = field(
        default_factory=lambda: MappingProxyType(dict(_BUILTIN_Q)))
    unverified: frozenset = frozenset()

    @classmethod
    def builtin(cls) -> "QTable":
        return cls()

    def with_entry(self, k: int, poly: Polynomial) -> "QTable":
        if k in _BUILTIN_Q:
            raise InputError(f"will not override the built-in entry k={k}")
        bad = [v.name for v in poly.variables()
               if v.kind != RESIDUE or not (1 <= v.index <= k)]
        if bad:
            raise InputError(
                f"entry for k={k} may only use z1..z{k}, found {bad}")
        new = dict(self.entries)
        new[k] = poly
        return QTable(MappingProxyType(new), self.unverified | {k})

    def get(self, k: int) -> Polynomial:
        try:
            return self.entries[k]
        except KeyError:
            raise MissingQ(f"no numerator polynomial for order k={k}") from None


@dataclass(frozen=True)
class ThomResult:
    k: int
    codim: int
    polynomial: Polynomial
    sign_calibration: int


def denominator_triples(k: int) -> list[tuple[int, int, int]]:
    """All (i, j, l) with 1 <= i <= j and i + j <= l <= k."""
    return [(i, j, l)
            for i in range(1, k + 1)
            for j in range(i, k + 1)
            for l in range(i + j, k + 1)]


def _chern_tail(l: int, codim: int, cmax: int) -> LaurentSeries:
    """c(1/z_l) * z_l^codim with the Chern series cut at c_cmax."""
    terms = {}
    for a in range(cmax + 1):
        pairs = [(zvar(l), codim - a)] if codim - a else []
        if a:
            pairs.append((cvar(a), 1))
        terms[Monomial.make(pairs)] = 1
    return LaurentSeries(terms)


def _prune_chern(series: LaurentSeries, cmax: int) -> LaurentSeries:
    kept = {m: c for m, c in series.terms.items()
            if m.weighted_degree(lambda v: v.index if v.kind == CHERN else 0)
            <= cmax}
    return LaurentSeries(kept, series.window)


def residue_form(k: int, codim: int, q: QTable) -> ResidueForm:
    """The calibrated residue form for (k, codim)."""
    zs = [zvar(l) for l in range(1, k + 1)]
    cmax = k * (codim + 1)
    numerator = LaurentSeries.from_polynomial(q.get(k))
    for a in range(k):
        for b in range(a + 1, k):
            numerator = numerator * (Polynomial.var(zs[a])
                                     - Polynomial.var(zs[b]))
    for l in range(1, k + 1):
        numerator = _prune_chern(numerator * _chern_tail(l, codim, cmax), cmax)
    dens = tuple(
        AffineForm.from_polynomial(Polynomial.var(zs[i - 1])
                                   + Polynomial.var(zs[j - 1])
                                   - Polynomial.var(zs[l - 1]))
        for i, j, l in denominator_triples(k))
    return ResidueForm(numerator, dens, tuple(zs))


def thom_polynomial(k: int, codim: int, q: QTable | None = None,
                    cap: int = DEFAULT_CAP) -> ThomResult:
    """Universal polynomial of the order-k singularity locus in the Chern
    classes c_1..c_{k(codim+1)} of the difference bundle."""
    if k < 1:
        raise InputError(f"order k must be >= 1, got {k}")
    if codim < 0:
        raise InputError(f"codimension must be >= 0, got {codim}")
    q = q or QTable.builtin()
    form = residue_form(k, codim, q)
    sign = -1 if k % 2 else 1
    poly = iterated_residue(form, cap=cap) * sign
    return ThomResult(k, codim, poly, sign)


@dataclass(frozen=True)
class PositivityReport:
    k: int
    codim: int
    negative_terms: tuple[tuple[str, Fraction], ...]

    @property
    def all_nonnegative(self) -> bool:
        return not self.negative_terms


def positivity_check(result: ThomResult) -> PositivityReport:
    """List every monomial of the polynomial with a negative coefficient."""
    bad = tuple(sorted((repr(m), Fraction(c))
                       for m, c in result.polynomial.terms.items() if c < 0))
    return PositivityReport(result.k, result.codim, bad)


def generating_coefficient(k: int, exponents, q: QTable | None = None,
                           cap: int = DEFAULT_CAP) -> Fraction:
    """Exact coefficient of ``z^exponents`` in the Laurent expansion of the
    generating function ``prod(z_i - z_j) Q_k / prod(z_i + z_j - z_l)`` on
    the calibrated contour (z_k most dominant)."""
    q = q or QTable.builtin()
    zs = [zvar(l) for l in range(1, k + 1)]
    numerator = LaurentSeries.from_polynomial(q.get(k))
    for a in range(k):
        for b in range(a + 1, k):
            numerator = numerator * (Polynomial.var(zs[a])
                                     - Polynomial.var(zs[b]))
    shift = Monomial.make([(zs[i], -exponents[i] - 1) for i in range(k)])
    numerator = numerator * LaurentSeries({shift: 1})
    dens = tuple(
        AffineForm.from_polynomial(Polynomial.var(zs[i - 1])
                                   + Polynomial.var(zs[j - 1])
                                   - Polynomial.var(zs[l - 1]))
        for i, j, l in denominator_triples(k))
    sign = -1 if k % 2 else 1
    value = iterated_residue(ResidueForm(numerator, dens, tuple(zs)),
                             cap=cap) * sign
    return value.constant_value()


@dataclass(frozen=True)
class RatioReport:
    k: int
    codim: int
    depth: int
    bound: int
    coefficients: tuple[tuple[tuple[int, ...], Fraction], ...]
    ratios: tuple[tuple[tuple[int, ...], int, int, Fraction, bool], ...]

    @property
    def all_within_bound(self) -> bool:
        return all(ok for *_, ok in self.ratios)


def ratio_check(k: int, codim: int = 0, q: QTable | None = None,
                depth: int = 3, cap: int = DEFAULT_CAP) -> RatioReport:
    """Expand the generating function over all exponent vectors with entries
    in [-depth, depth] and report each neighbouring-coefficient ratio
    (exponent moved by +1/-1 in two slots) against the bound k^2.

    The generating function does not depend on the codimension; it is
    recorded in the report for traceability only.
    """
    q = q or QTable.builtin()
    gen_degree = {m.degree for m in q.get(k).terms}
    vandermonde = k * (k - 1) // 2
    levels = {vandermonde + g - len(denominator_triples(k))
              for g in gen_degree}
    coeffs: dict[tuple[int, ...], Fraction] = {}

    def enumerate_exponents(prefix, remaining):
        if remaining == 1:
            for level in levels:
                last = level - sum(prefix)
                if -depth <= last <= depth:
                    yield prefix + (last,)
            return
        for e in range(-depth, depth + 1):
            yield from enumerate_exponents(prefix + (e,), remaining - 1)

    for exps in enumerate_exponents((), k) if k > 1 else [
            (lv,) for lv in levels if -depth <= lv <= depth]:
        value = generating_coefficient(k, exps, q, cap=cap)
        if value:
            coeffs[exps] = value
    ratios = []
    for exps, value in sorted(coeffs.items()):
        for a in range(k):
            for b in range(k):
                if a == b:
                    continue
                neighbour = list(exps)
                neighbour[a] += 1
                neighbour[b] -= 1
                neighbour = tuple(neighbour)
                if neighbour in coeffs:
                    ratio = value / coeffs[neighbour]
                    ratios.append((exps, a + 1, b + 1, ratio,
                                   ratio < k * k))
    return RatioReport(k, codim, depth, k * k,
                       tuple(sorted(coeffs.items())), tuple(ratios))
