"""Iterated residues at infinity of rational forms with affine denominators.

Conventions
-----------
A :class:`ResidueForm` carries an explicit dominance order of its residue
variables, least dominant first (contour radii grow along the order); the
order is never inferred from variable names.  Each denominator factor is
expanded as a geometric series in its dominant variable (the highest-ranked
residue variable it contains):

    1/w = sum_j (-1)^j (w - a*z_q)^j / (a*z_q)^(j+1)

and the residue is ``(-1)^d`` times the coefficient of ``z_1^-1 ... z_d^-1``
of the product of these expansions with the numerator, so that the residue
of ``dz/(z_1...z_d)`` is ``(-1)^d``.

Evaluation peels variables from the most dominant down: at each step the
form is held as a Laurent expansion in one variable whose coefficients are
exact polynomials in everything below, the ``z^-1`` coefficient is
extracted, and the remaining factors are processed recursively.  The
expansion order needed at each step is read off the numerator's degree
span, so results are exact; a configurable cap guards runaway growth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from operator import add

from .algebra import (RESIDUE, ONE_MONO, LaurentSeries, Monomial, Polynomial,
                      Var, _mul_terms, _num)
from .errors import InputError, NoDominantVariable, WindowOverflow

DEFAULT_CAP = 256


@dataclass(frozen=True)
class AffineForm:
    """Degree-one denominator factor: rational linear part in the residue
    variables plus a polynomial constant part in everything else."""

    constant: Polynomial
    linear: tuple[tuple[Var, Fraction], ...]

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "AffineForm":
        const: dict = {}
        lin: dict[Var, Fraction] = {}
        for m, c in p.terms.items():
            zpart = [(v, e) for v, e in m.exps if v.kind == RESIDUE]
            if not zpart:
                const[m] = c
                continue
            if len(zpart) > 1 or zpart[0][1] != 1 or len(m.exps) > 1:
                raise InputError(f"denominator factor is not affine: {p}")
            v = zpart[0][0]
            lin[v] = lin.get(v, Fraction(0)) + c
        linear = tuple(sorted(((v, Fraction(c)) for v, c in lin.items() if c),
                              key=lambda t: t[0].sort_key))
        return cls(Polynomial(const), linear)

    def residue_variables(self) -> tuple[Var, ...]:
        return tuple(v for v, _ in self.linear)

    def dominant(self, order: tuple[Var, ...]) -> tuple[Var, Fraction]:
        """Dominant variable and its coefficient under the given order."""
        if not self.linear:
            raise NoDominantVariable(
                f"pure parameter factor has no residue variable: {self.constant}")
        rank = {v: i for i, v in enumerate(order)}
        for v, _ in self.linear:
            if v not in rank:
                raise InputError(
                    f"residue variable {v.name} missing from the order")
        v, a = max(self.linear, key=lambda t: rank[t[0]])
        return v, a

    def as_polynomial(self) -> Polynomial:
        p = self.constant
        for v, a in self.linear:
            p = p + Polynomial.var(v) * a
        return p

    def __str__(self):
        return str(self.as_polynomial())


@dataclass(frozen=True)
class ResidueForm:
    """Numerator with a multiset of affine denominators and the dominance
    order of the residue variables, least dominant first."""

    numerator: Polynomial | LaurentSeries
    denominators: tuple[AffineForm, ...]
    order: tuple[Var, ...]

    def __post_init__(self):
        allowed = set(self.order)
        seen = {v for m in self.numerator.terms for v in m.variables()
                if v.kind == RESIDUE}
        for w in self.denominators:
            seen.update(w.residue_variables())
        missing = seen - allowed
        if missing:
            names = ", ".join(sorted(v.name for v in missing))
            raise InputError(f"residue variables not in the order: {names}")


def _clip_above(terms: dict, upper: dict) -> dict:
    if not upper:
        return terms
    out = {}
    for m, c in terms.items():
        if all(m.exponent(v) <= hi for v, hi in upper.items()):
            out[m] = c
    return out


def expand_inverse(form: AffineForm, window: dict,
                   order: tuple[Var, ...]) -> LaurentSeries:
    """Geometric-series expansion of ``1/form`` on the regime where its
    dominant variable (under ``order``) outgrows everything else, truncated
    to the given per-variable degree windows ``{var: (lo, hi)}``."""
    zq, a = form.dominant(order)
    lo, _ = window.get(zq, (None, None))
    if lo is None:
        raise InputError(
            f"window must bound {zq.name} below to truncate the expansion")
    upper = {v: hi for v, (_, hi) in window.items()
             if hi is not None and v is not zq}
    base = AffineForm(form.constant,
                      tuple(t for t in form.linear if t[0] is not zq))
    base_terms = base.as_polynomial().terms
    inv_a = Fraction(1) / a
    acc: dict = {}
    power: dict = {ONE_MONO: 1}
    coeff = inv_a
    jmax = -lo - 1
    for j in range(jmax + 1):
        zq_mono = Monomial.make([(zq, -1 - j)])
        for m, c in power.items():
            mm = m * zq_mono
            if mm is not None:
                acc[mm] = acc.get(mm, 0) + c * coeff
        if j < jmax:
            power = _clip_above(_mul_terms(power, base_terms), upper)
            coeff = coeff * (-inv_a)
    return LaurentSeries({m: _num(c) for m, c in acc.items() if c}, window)


# -- dense workspace -----------------------------------------------------

class _Workspace:
    """Fixed variable slate for one evaluation; terms are dicts keyed by
    dense exponent tuples."""

    __slots__ = ("vars", "index", "caps")

    def __init__(self, variables):
        self.vars = tuple(sorted(variables, key=lambda v: v.sort_key))
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.caps = tuple((i, v.nilpotency) for i, v in enumerate(self.vars)
                          if v.nilpotency is not None)

    def dense(self, terms: dict) -> dict:
        out = {}
        n = len(self.vars)
        for m, c in terms.items():
            key = [0] * n
            for v, e in m.exps:
                key[self.index[v]] = e
            out[tuple(key)] = c
        return out

    def sparse(self, dense: dict) -> dict:
        out = {}
        for key, c in dense.items():
            m = Monomial(tuple((v, e) for v, e in zip(self.vars, key) if e))
            out[m] = c
        return out

    def mul(self, a: dict, b: dict) -> dict:
        if len(a) > len(b):
            a, b = b, a
        caps = self.caps
        out: dict = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(map(add, ma, mb))
                dead = False
                for i, cap in caps:
                    if m[i] > cap:
                        dead = True
                        break
                if dead:
                    continue
                nc = get(m, 0) + ca * cb
                if nc:
                    out[m] = nc
                elif m in out:
                    del out[m]
        return out

    def scale(self, a: dict, c) -> dict:
        return {m: v * c for m, v in a.items()}

    @staticmethod
    def add_into(acc: dict, b: dict):
        for m, c in b.items():
            nc = acc.get(m, 0) + c
            if nc:
                acc[m] = nc
            elif m in acc:
                del acc[m]


def _peel(ws: _Workspace, num: dict, factors, zi: int, cap: int) -> dict:
    """Coefficient of ``z^-1`` (variable slot ``zi``) of the numerator times
    the expansions of the factors dominated by that variable."""
    slices: dict[int, dict] = {}
    for m, c in num.items():
        t = m[zi]
        key = m[:zi] + (0,) + m[zi + 1:]
        slices.setdefault(t, {})[key] = c
    s = len(factors)
    if s == 0:
        return slices.get(-1, {})
    if not slices:
        return {}
    jtot = max(slices) + 1 - s
    if jtot < 0:
        return {}
    if jtot > cap:
        raise WindowOverflow(f"expansion order {jtot} exceeds the cap {cap}")
    # running product of the factor expansions, graded by total geometric
    # order; tails[j] of one factor is (-1)^j (w - a z)^j / a^(j+1)
    one = {(0,) * len(ws.vars): 1}
    prod = [one]
    for base, a in factors:
        inv_a = _num(Fraction(1) / a)
        tails = [{(0,) * len(ws.vars): inv_a}]
        for _ in range(jtot):
            tails.append(ws.scale(ws.mul(tails[-1], base), -inv_a)
                         if base else {})
        new = [dict() for _ in range(jtot + 1)]
        for t_old, pterms in enumerate(prod):
            if not pterms:
                continue
            for j in range(jtot + 1 - t_old):
                if tails[j]:
                    ws.add_into(new[t_old + j], ws.mul(pterms, tails[j]))
        prod = new
    out: dict = {}
    for t, sl in slices.items():
        torder = t + 1 - s
        if 0 <= torder <= jtot and prod[torder]:
            ws.add_into(out, ws.mul(sl, prod[torder]))
    return out


def iterated_residue(form: ResidueForm, cap: int = DEFAULT_CAP) -> Polynomial:
    """The iterated residue at infinity of the form under its dominance
    order: ``(-1)^d`` times the ``z_1^-1 ... z_d^-1`` coefficient of the
    expanded product.  The result contains no residue variables."""
    order = tuple(form.order)
    d = len(order)
    groups: dict[Var, list[AffineForm]] = {}
    for w in form.denominators:
        zq, _ = w.dominant(order)
        groups.setdefault(zq, []).append(w)
    variables = set(order)
    for m in form.numerator.terms:
        variables.update(m.variables())
    for w in form.denominators:
        variables.update(w.constant.variables())
        variables.update(w.residue_variables())
    ws = _Workspace(variables)
    num = ws.dense(form.numerator.terms)
    for zq in reversed(order):
        zi = ws.index[zq]
        factors = []
        for w in groups.get(zq, ()):
            a = dict(w.linear)[zq]
            rest = AffineForm(w.constant,
                              tuple(t for t in w.linear if t[0] is not zq))
            factors.append((ws.dense(rest.as_polynomial().terms), a))
        num = _peel(ws, num, factors, zi, cap)
    sign = -1 if d % 2 else 1
    return Polynomial({m: c * sign for m, c in ws.sparse(num).items()})


def residue_job(job: dict, cap: int = DEFAULT_CAP) -> dict:
    """Run a JSON residue job
    ``{"numerator": str, "denominators": [str, ...], "order": [names]}``
    (order least to most dominant) and return ``{"residue": str}``."""
    from .algebra import parse_polynomial, zvar

    try:
        num_text = job["numerator"]
        den_texts = list(job["denominators"])
        order_names = list(job["order"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed residue job: {exc}") from exc
    order = []
    for name in order_names:
        if not (isinstance(name, str) and name.startswith("z")
                and name[1:].isdigit()):
            raise InputError(
                f"order entries must be residue variables, got {name!r}")
        order.append(zvar(int(name[1:])))
    numerator = parse_polynomial(num_text)
    dens = tuple(AffineForm.from_polynomial(parse_polynomial(t))
                 for t in den_texts)
    result = iterated_residue(
        ResidueForm(numerator, dens, tuple(order)), cap=cap)
    return {"residue": str(result)}
