"""Intersection polynomial and Euler characteristics of the invariant-jet
tower of a smooth degree-d hypersurface in P^(n+1).

All residues here reuse the calibration of the singularity module: z_n is
the most dominant variable and the global sign (-1)^n is applied, so the
value read off is the plain ``(z_1...z_n)^-1`` coefficient.  The n = 1
case is pinned independently by classical curve geometry (canonical degree
and Riemann-Roch), which fixes the sign of the ``z_1 + ... + z_n`` block
inside the positivity form R.

The hyperplane class h is nilpotent of order n (h^(n+1) == 0); pairing
with the fundamental class replaces the surviving h^n by d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import LaurentSeries, Monomial, Polynomial, Var, svar, zvar
from .errors import InputError
from .residue import DEFAULT_CAP, AffineForm, ResidueForm, iterated_residue
from .thom import QTable, denominator_triples

D_VAR = svar("d")
DELTA_VAR = svar("delta")
M_VAR = svar("m")


def _hvar(n: int) -> Var:
    return svar("h", nilpotency=n)


@dataclass(frozen=True)
class GGResult:
    """Intersection polynomial data: p(n, d, delta) is the h^n coefficient
    of the residue; pairing with the fundamental class gives the actual
    intersection number d * p."""

    n: int
    polynomial: Polynomial
    theta: Fraction
    leading: Polynomial


@dataclass(frozen=True)
class EulerResult:
    n: int
    d: object  # Fraction for numeric degree, None for symbolic
    chi: Polynomial


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _vandermonde_q(n: int, q: QTable) -> LaurentSeries:
    acc = LaurentSeries.from_polynomial(q.get(n))
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            acc = acc * (Polynomial.var(zvar(a)) - Polynomial.var(zvar(b)))
    return acc


def _denominators(n: int):
    return tuple(
        AffineForm.from_polynomial(Polynomial.var(zvar(i))
                                   + Polynomial.var(zvar(j))
                                   - Polynomial.var(zvar(l)))
        for i, j, l in denominator_triples(n))


def _zshift(n: int, power: int) -> LaurentSeries:
    mono = Monomial.make([(zvar(l), -power) for l in range(1, n + 1)])
    return LaurentSeries({mono: 1})


def _hypersurface_tail(n: int, h: Var, d_poly: Polynomial) -> LaurentSeries:
    """prod_l (1 + d h / z_l) * (1 - h/z_l + h^2/z_l^2 - ...)^(n + 2)."""
    acc = LaurentSeries({Monomial.make([]): 1})
    hp = Polynomial.var(h)
    for l in range(1, n + 1):
        zinv = LaurentSeries({Monomial.make([(zvar(l), -1)]): 1})
        lin = LaurentSeries({Monomial.make([]): 1}) + zinv * hp * d_poly
        alt = LaurentSeries({Monomial.make([]): 1})
        term = LaurentSeries({Monomial.make([]): 1})
        for _ in range(n):
            term = term * zinv * (-1) * hp
            alt = alt + term
        block = LaurentSeries({Monomial.make([]): 1})
        for _ in range(n + 2):
            block = block * alt
        acc = acc * lin * block
    return acc


def _zsum(n: int) -> Polynomial:
    acc = Polynomial.zero()
    for l in range(1, n + 1):
        acc = acc + Polynomial.var(zvar(l))
    return acc


def _positivity_form(n: int, h: Var) -> Polynomial:
    """R = B^(n^2) - n^2 B^(n^2-1) (2n^2 h + delta C(n+1,2)(d-n-2) h) with
    B = (z_1 + ... + z_n) + 2n^2 h."""
    hp = Polynomial.var(h)
    base = _zsum(n) + 2 * n * n * hp
    twist = (2 * n * n * hp
             + Polynomial.var(DELTA_VAR) * math.comb(n + 1, 2)
             * (Polynomial.var(D_VAR) - (n + 2)) * hp)
    return base ** (n * n) - n * n * base ** (n * n - 1) * twist


def leading_constant(n: int, q: QTable | None = None,
                     cap: int = DEFAULT_CAP) -> Fraction:
    """Constant term of the degree-zero form
    ``prod(z_i - z_j) Q_n (z_1+...+z_n)^(n^2) / [prod(z_i+z_j-z_l)
    (z_1...z_n)^n]`` under the calibrated contour; this is the constant
    multiplying the top d-coefficient of the intersection polynomial."""
    q = q or QTable.builtin()
    numerator = (_vandermonde_q(n, q) * _zsum(n) ** (n * n)
                 * _zshift(n, n + 1))
    zs = tuple(zvar(l) for l in range(1, n + 1))
    value = iterated_residue(ResidueForm(numerator, _denominators(n), zs),
                             cap=cap) * _sign(n)
    return value.constant_value()


def intersection_polynomial(n: int, q: QTable | None = None,
                            cap: int = DEFAULT_CAP) -> GGResult:
    """p(n, d, delta): the h^n coefficient of the calibrated residue of the
    positivity form against the hypersurface tail."""
    q = q or QTable.builtin()
    h = _hvar(n)
    numerator = (_vandermonde_q(n, q) * _positivity_form(n, h)
                 * _hypersurface_tail(n, h, Polynomial.var(D_VAR))
                 * _zshift(n, n))
    zs = tuple(zvar(l) for l in range(1, n + 1))
    residue = iterated_residue(ResidueForm(numerator, _denominators(n), zs),
                               cap=cap) * _sign(n)
    p = residue.coefficient(h, n)
    theta = leading_constant(n, q, cap=cap)
    leading = p.coefficient(D_VAR, n)
    return GGResult(n, p, theta, leading)


def positivity_threshold(result: GGResult, delta) -> int:
    """An explicit integer d0 with p(n, d, delta) > 0 for every d >= d0,
    by a root bound on the univariate specialization: beyond the Cauchy
    bound all real roots are passed and the sign is the leading sign."""
    delta = Fraction(delta)
    p = result.polynomial.evaluate({DELTA_VAR: delta})
    degree = p.degree_in(D_VAR)
    coeffs = [p.coefficient(D_VAR, i).constant_value()
              for i in range(degree + 1)]
    lead = coeffs[-1]
    if lead <= 0:
        raise InputError(
            f"leading coefficient {lead} is not positive at delta={delta}")
    bound = 1 + max((abs(c / lead) for c in coeffs[:-1]), default=Fraction(0))
    d0 = math.floor(bound) + 1
    check = sum(c * Fraction(d0) ** i for i, c in enumerate(coeffs))
    assert check > 0
    return d0


# -- Todd class machinery ------------------------------------------------

def _log_todd_series(n: int) -> list[Fraction]:
    """Taylor coefficients a_1..a_n of log(x / (1 - e^-x))."""
    v = [Fraction((-1) ** i, math.factorial(i + 1)) for i in range(n + 1)]
    v[0] = Fraction(0)  # (1 - e^-x)/x - 1
    log_u = [Fraction(0)] * (n + 1)
    power = v[:]
    sign = 1
    for j in range(1, n + 1):
        for i in range(n + 1):
            log_u[i] += Fraction(sign, j) * power[i]
        power = _series_mul(power, v, n)
        sign = -sign
    return [-a for a in log_u[1:]]


def _series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > n:
                break
            out[i + j] += ai * bj
    return out


def _todd_class(n: int, chern: list[Polynomial]) -> Polynomial:
    """Todd class from the graded pieces chern[1..n] of a total Chern
    class, via power sums (Newton) and the log-Todd Taylor coefficients;
    everything lives in an h-nilpotent ring so the exp truncates itself."""
    e = chern
    p = [Polynomial.zero()] * (n + 1)
    for k in range(1, n + 1):
        acc = Polynomial.rational((-1) ** (k - 1) * k) * e[k]
        for i in range(1, k):
            acc = acc + Polynomial.rational((-1) ** (i - 1)) * e[i] * p[k - i]
        p[k] = acc
    a = _log_todd_series(n)
    log_td = Polynomial.zero()
    for j in range(1, n + 1):
        log_td = log_td + a[j - 1] * p[j]
    td = Polynomial.one()
    term = Polynomial.one()
    for i in range(1, n + 1):
        term = term * log_td
        td = td + Fraction(1, math.factorial(i)) * term
    return td


def _hypersurface_chern(n: int, h: Var, d_poly: Polynomial) -> list[Polynomial]:
    """Graded pieces of c(T_X) = (1 + h)^(n+2) / (1 + d h), cut at h^n."""
    hp = Polynomial.var(h)
    inv = Polynomial.one()
    term = Polynomial.one()
    for _ in range(n):
        term = term * (-1) * d_poly * hp
        inv = inv + term
    total = (Polynomial.one() + hp) ** (n + 2) * inv
    return [total.coefficient(h, i) * hp ** i for i in range(n + 1)]


def euler_characteristic(n: int, d=None, q: QTable | None = None,
                         cap: int = DEFAULT_CAP) -> EulerResult:
    """Euler characteristic of the weight-m invariant-jet sheaf on a smooth
    degree-d hypersurface, as an exact polynomial in m (degree <= n^2).
    ``d=None`` keeps the degree symbolic."""
    q = q or QTable.builtin()
    q.get(n)  # fail fast before any series is assembled
    h = _hvar(n)
    if d is None:
        d_poly = Polynomial.var(D_VAR)
    else:
        d_poly = Polynomial.rational(Fraction(d))
    # Chern character of the tautological weight-m line bundle: by the
    # z-grading only powers n^2-n .. n^2 of m(z_1+...+z_n) can survive
    # against the h-grading, so the exponential is cut there.
    zsum = _zsum(n)
    ch = Polynomial.zero()
    mp = Polynomial.var(M_VAR)
    for p in range(max(0, n * n - n), n * n + 1):
        ch = ch + Fraction(1, math.factorial(p)) * mp ** p * zsum ** p
    td = _todd_class(n, _hypersurface_chern(n, h, d_poly))
    numerator = (_vandermonde_q(n, q) * ch * td
                 * _hypersurface_tail(n, h, d_poly) * _zshift(n, n))
    zs = tuple(zvar(l) for l in range(1, n + 1))
    residue = iterated_residue(ResidueForm(numerator, _denominators(n), zs),
                               cap=cap) * _sign(n)
    chi = residue.coefficient(h, n) * d_poly
    return EulerResult(n, None if d is None else Fraction(d), chi)


def top_intersection(n: int, q: QTable | None = None,
                     cap: int = DEFAULT_CAP) -> Polynomial:
    """Top self-intersection of the tautological class against the
    hypersurface tail (the positivity form replaced by its degree-only
    block); equals (n^2)! times the leading m-coefficient of the Euler
    characteristic."""
    q = q or QTable.builtin()
    h = _hvar(n)
    numerator = (_vandermonde_q(n, q) * _zsum(n) ** (n * n)
                 * _hypersurface_tail(n, h, Polynomial.var(D_VAR))
                 * _zshift(n, n))
    zs = tuple(zvar(l) for l in range(1, n + 1))
    residue = iterated_residue(ResidueForm(numerator, _denominators(n), zs),
                               cap=cap) * _sign(n)
    return residue.coefficient(h, n) * Polynomial.var(D_VAR)
