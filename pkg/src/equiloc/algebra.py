"""Exact sparse multivariate polynomials over partitioned variable alphabets.

Variables come in four disjoint alphabets:

* residue variables ``z1, z2, ...`` (the only ones that may carry negative
  exponents, and only inside :class:`LaurentSeries`),
* weight variables ``l1, l2, ...`` (torus weights),
* Chern symbols ``c1, c2, ...`` (graded: ``ci`` counts with degree ``i``),
* named scalars (``h``, ``d``, ``delta``, ``m``, jet coordinates, ...).

A scalar may be declared nilpotent of order ``t`` (``x^(t+1) == 0``); the
reduction happens when monomials are built, so a polynomial never stores a
dead power.  Coefficients are exact rationals (stored as ``int`` when the
denominator is 1).  The canonical term order used for serialization is
graded lexicographic over the fixed variable order, largest first, which
makes all printed output byte-stable.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import InputError, NotDivisible, NotSymmetric

RESIDUE, WEIGHT, CHERN, SCALAR = 0, 1, 2, 3
_KIND_NAMES = {RESIDUE: "residue", WEIGHT: "weight", CHERN: "chern", SCALAR: "scalar"}


class Var:
    """Interned variable; identity equality, fixed total order."""

    __slots__ = ("kind", "index", "name", "nilpotency", "sort_key", "_hash")
    _registry: dict[tuple, "Var"] = {}

    def __new__(cls, kind, index, name, nilpotency=None):
        key = (kind, index, name, nilpotency)
        v = cls._registry.get(key)
        if v is None:
            v = object.__new__(cls)
            v.kind = kind
            v.index = index
            v.name = name
            v.nilpotency = nilpotency
            v.sort_key = (kind, index if index is not None else 0, name)
            v._hash = hash(key)
            cls._registry[key] = v
        return v

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return f"Var({self.name})"


def zvar(i: int) -> Var:
    return Var(RESIDUE, i, f"z{i}")


def wvar(i: int) -> Var:
    return Var(WEIGHT, i, f"l{i}")


def cvar(i: int) -> Var:
    return Var(CHERN, i, f"c{i}")


def svar(name: str, nilpotency: int | None = None) -> Var:
    """Named scalar; ``nilpotency=t`` declares ``name^(t+1) == 0``."""
    return Var(SCALAR, None, name, nilpotency)


def evar(i: int) -> Var:
    """Symbol for the i-th elementary symmetric polynomial of the weights."""
    return svar(f"e{i}")


def _num(c):
    """Normalize a coefficient to int (when integral) or Fraction."""
    if type(c) is int:
        return c
    f = Fraction(c)
    return f.numerator if f.denominator == 1 else f


class Monomial:
    """Product of variable powers; exponents nonzero, sorted by variable."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps):
        self.exps = exps  # sorted tuple of (Var, exp)
        self._hash = hash(exps)

    @classmethod
    def make(cls, pairs) -> "Monomial | None":
        """Build from (var, exp) pairs; None when a nilpotent cap kills it."""
        acc: dict[Var, int] = {}
        for v, e in pairs:
            acc[v] = acc.get(v, 0) + e
        items = []
        for v, e in sorted(acc.items(), key=lambda p: p[0].sort_key):
            if e == 0:
                continue
            if v.nilpotency is not None and e > v.nilpotency:
                return None
            items.append((v, e))
        return cls(tuple(items))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self.exps == other.exps

    def __mul__(self, other) -> "Monomial | None":
        if not self.exps:
            return other
        if not other.exps:
            return self
        return Monomial.make(self.exps + other.exps)

    def exponent(self, v: Var) -> int:
        for w, e in self.exps:
            if w is v:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exps)

    def weighted_degree(self, weight) -> int:
        return sum(e * weight(v) for v, e in self.exps)

    def variables(self):
        return [v for v, _ in self.exps]

    def divides(self, other: "Monomial") -> bool:
        it = dict(other.exps)
        return all(e <= it.get(v, 0) for v, e in self.exps)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        quot = dict(self.exps)
        for v, e in other.exps:
            quot[v] = quot.get(v, 0) - e
        m = Monomial.make(quot.items())
        assert m is not None
        return m

    def __repr__(self):
        if not self.exps:
            return "1"
        return "*".join(v.name if e == 1 else f"{v.name}^{e}" for v, e in self.exps)


ONE_MONO = Monomial(())


def _grlex_key(m: Monomial, var_order: list[Var]):
    exp = dict(m.exps)
    return (m.degree, tuple(exp.get(v, 0) for v in var_order))


def _sorted_terms(terms):
    """Terms in canonical graded-lex order, largest monomial first."""
    var_order = sorted({v for m in terms for v in m.variables()},
                       key=lambda v: v.sort_key)
    return sorted(terms.items(), key=lambda t: _grlex_key(t[0], var_order),
                  reverse=True)


def _format_terms(terms) -> str:
    if not terms:
        return "0"
    parts = []
    for m, c in _sorted_terms(terms):
        sign = "-" if (c < 0) else "+"
        a = -c if c < 0 else c
        if not m.exps:
            body = str(a)
        elif a == 1:
            body = repr(m)
        else:
            body = f"{a}*{m!r}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _add_into(acc: dict, terms, scale=1):
    for m, c in terms.items():
        nc = acc.get(m, 0) + c * scale
        if nc:
            acc[m] = nc
        elif m in acc:
            del acc[m]


def _mul_terms(a: dict, b: dict) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma * mb
            if m is None:
                continue
            nc = out.get(m, 0) + ca * cb
            if nc:
                out[m] = nc
            elif m in out:
                del out[m]
    return out


class Polynomial:
    """Immutable exact polynomial; no negative exponents, no zero terms."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        for m in terms:
            if any(e < 0 for _, e in m.exps):
                raise ValueError(f"negative exponent in polynomial term {m!r}")
        self.terms = terms

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({ONE_MONO: 1})

    @classmethod
    def rational(cls, c) -> "Polynomial":
        c = _num(c)
        return cls({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "Polynomial":
        m = Monomial.make([(v, exp)])
        return cls({m: 1} if m is not None else {})

    @classmethod
    def from_terms(cls, pairs) -> "Polynomial":
        """pairs: iterable of (coefficient, [(var, exp), ...])."""
        acc: dict = {}
        for c, mexps in pairs:
            m = Monomial.make(mexps)
            if m is None:
                continue
            _add_into(acc, {m: _num(c)})
        return cls(acc)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return Polynomial(acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return Polynomial(acc)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        other = _coerce(other)
        return Polynomial(_mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.rational(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not m.exps for m in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return Fraction(self.terms[ONE_MONO])

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v in m.variables()}

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree for m in self.terms), default=-1)

    def degree_in(self, v: Var) -> int:
        return max((m.exponent(v) for m in self.terms), default=0)

    def weighted_degrees(self, weight) -> set[int]:
        return {m.weighted_degree(weight) for m in self.terms}

    def coefficient(self, v: Var, k: int) -> "Polynomial":
        """The coefficient of ``v^k``, as a polynomial without ``v``."""
        acc: dict = {}
        for m, c in self.terms.items():
            if m.exponent(v) == k:
                rest = Monomial(tuple(p for p in m.exps if p[0] is not v))
                acc[rest] = acc.get(rest, 0) + c
        return Polynomial({m: c for m, c in acc.items() if c})

    def subs(self, mapping) -> "Polynomial":
        """Substitute variables by polynomials or rationals, exactly."""
        mapping = {v: _coerce(p) for v, p in mapping.items()}
        out: dict = {}
        for m, c in self.terms.items():
            keep = [p for p in m.exps if p[0] not in mapping]
            term = Polynomial({Monomial(tuple(keep)): c})
            for v, e in m.exps:
                if v in mapping:
                    term = term * mapping[v] ** e
            _add_into(out, term.terms)
        return Polynomial(out)

    def evaluate(self, assignment) -> "Polynomial":
        """Partial evaluation at rational values; other variables stay."""
        return self.subs({v: Polynomial.rational(c)
                          for v, c in assignment.items()})

    def __str__(self):
        return _format_terms(self.terms)

    def __repr__(self):
        return f"Polynomial({self})"


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial.rational(x)
    raise TypeError(f"cannot coerce {x!r} to Polynomial")


class LaurentSeries:
    """Truncated Laurent expansion: residue variables may have negative
    exponents, every other alphabet stays polynomial.

    ``window`` maps a residue variable to an inclusive degree interval
    ``(lo, hi)``; ``None`` in either slot means unbounded on that side, and
    a variable missing from the window is unconstrained (exact support).
    Adding or multiplying two series intersects their validity windows.
    """

    __slots__ = ("terms", "window")

    def __init__(self, terms: dict, window: dict | None = None):
        self.window = dict(window) if window else {}
        for m in terms:
            for v, e in m.exps:
                if e < 0 and v.kind != RESIDUE:
                    raise ValueError(
                        f"negative exponent on non-residue variable {v.name}")
        self.terms = {m: c for m, c in terms.items() if self._inside(m)}

    def _inside(self, m: Monomial) -> bool:
        for v, (lo, hi) in self.window.items():
            e = m.exponent(v)
            if lo is not None and e < lo:
                return False
            if hi is not None and e > hi:
                return False
        return True

    @classmethod
    def from_polynomial(cls, p: Polynomial, window: dict | None = None):
        return cls(dict(p.terms), window)

    @staticmethod
    def _meet(wa: dict, wb: dict) -> dict:
        out = dict(wa)
        for v, (lo, hi) in wb.items():
            if v in out:
                alo, ahi = out[v]
                lo = alo if lo is None else (lo if alo is None else max(lo, alo))
                hi = ahi if hi is None else (hi if ahi is None else min(hi, ahi))
            out[v] = (lo, hi)
        return out

    @staticmethod
    def _coerce(other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries.from_polynomial(_coerce(other))

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return LaurentSeries(acc, self._meet(self.window, other.window))

    def __sub__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return LaurentSeries(acc, self._meet(self.window, other.window))

    def __mul__(self, other):
        other = self._coerce(other)
        return LaurentSeries(_mul_terms(self.terms, other.terms),
                             self._meet(self.window, other.window))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, LaurentSeries)
                and self.terms == other.terms and self.window == other.window)

    def coefficient(self, v: Var, k: int) -> "LaurentSeries":
        acc: dict = {}
        for m, c in self.terms.items():
            if m.exponent(v) == k:
                rest = Monomial(tuple(p for p in m.exps if p[0] is not v))
                acc[rest] = acc.get(rest, 0) + c
        w = {u: b for u, b in self.window.items() if u is not v}
        return LaurentSeries({m: c for m, c in acc.items() if c}, w)

    def __str__(self):
        return _format_terms(self.terms)

    def __repr__(self):
        return f"LaurentSeries({self})"


# -- exact division ----------------------------------------------------

def _leading(p: Polynomial, var_order):
    return max(p.terms, key=lambda m: _grlex_key(m, var_order))


def exact_divide(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact quotient ``q`` with ``q*den == num``; NotDivisible otherwise."""
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    var_order = sorted(num.variables() | den.variables(),
                       key=lambda v: v.sort_key)
    rem = dict(num.terms)
    lm_den = _leading(den, var_order)
    lc_den = den.terms[lm_den]
    quot: dict = {}
    while rem:
        lm = max(rem, key=lambda m: _grlex_key(m, var_order))
        if not lm_den.divides(lm):
            raise NotDivisible(f"({num}) is not divisible by ({den})")
        m = lm / lm_den
        c = _num(Fraction(rem[lm]) / lc_den)
        quot[m] = c
        _add_into(rem, _mul_terms({m: c}, den.terms), -1)
    return Polynomial(quot)


# -- symmetric reduction ----------------------------------------------

def elementary_symmetric(i: int, vs) -> Polynomial:
    """e_i of the given variables."""
    vs = list(vs)
    acc: dict = {}
    for comb in itertools.combinations(vs, i):
        m = Monomial.make([(v, 1) for v in comb])
        acc[m] = acc.get(m, 0) + 1
    return Polynomial(acc) if i > 0 else Polynomial.one()


def symmetric_reduce(p: Polynomial, n: int | None = None) -> Polynomial:
    """Rewrite a polynomial symmetric in the weights ``l1..ln`` in the
    elementary symmetric symbols ``e1..en`` (triangular elimination by
    graded-lex leading terms).  Raises NotSymmetric when any transposition
    of adjacent weights changes ``p``.
    """
    weight_vars = sorted((v for v in p.variables() if v.kind == WEIGHT),
                         key=lambda v: v.index)
    if n is None:
        n = weight_vars[-1].index if weight_vars else 0
    mus = [wvar(i) for i in range(1, n + 1)]
    for i in range(n - 1):
        swapped = p.subs({mus[i]: Polynomial.var(mus[i + 1]),
                          mus[i + 1]: Polynomial.var(mus[i])})
        if swapped != p:
            raise NotSymmetric(
                f"not symmetric under swapping l{i + 1} and l{i + 2}")
    e_expand = {i: elementary_symmetric(i, mus) for i in range(1, n + 1)}
    rem = p
    out = Polynomial.zero()
    while True:
        mu_terms = {m: c for m, c in rem.terms.items()
                    if any(v.kind == WEIGHT for v in m.variables())}
        if not mu_terms:
            return out + rem
        lm = max(mu_terms, key=lambda m: _grlex_key(m, mus))
        c = mu_terms[lm]
        exps = [lm.exponent(v) for v in mus]
        coeff_rest = Monomial(tuple(pr for pr in lm.exps
                                    if pr[0].kind != WEIGHT))
        e_mono = Polynomial({coeff_rest: c})
        back = Polynomial({coeff_rest: c})
        for i in range(1, n + 1):
            step = exps[i - 1] - (exps[i] if i < n else 0)
            if step < 0:
                raise NotSymmetric(f"leading term {lm!r} is not dominant")
            if step:
                e_mono = e_mono * Polynomial.var(evar(i)) ** step
                back = back * e_expand[i] ** step
        out = out + e_mono
        rem = rem - back


# -- text grammar -------------------------------------------------------

_VAR_KINDS = {"z": zvar, "l": wvar, "c": cvar}


def _classify(name: str) -> Var:
    head, tail = name[0], name[1:]
    if head in _VAR_KINDS and tail.isdigit():
        return _VAR_KINDS[head](int(tail))
    return svar(name)


def _tokenize(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield ("int", int(text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield ("var", text[i:j])
            i = j
        elif ch in "+-*^()/":
            yield (ch, ch)
            i += 1
        else:
            raise InputError(f"unexpected character {ch!r} in polynomial text")
    yield ("end", None)


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise InputError(f"expected {kind!r}, found {tok[1]!r}")
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek() != "end":
            raise InputError(f"trailing input at {self.tokens[self.pos][1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.next()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek() in "+-":
            op = self.next()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.power()
        while self.peek() == "*":
            self.next()
            acc = acc * self.power()
        return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^":
            self.next()
            exp = self.expect("int")[1]
            return base ** exp
        return base

    def atom(self) -> Polynomial:
        kind, value = self.next()
        if kind == "int":
            if self.peek() == "/":
                self.next()
                den = self.expect("int")[1]
                if den == 0:
                    raise InputError("zero denominator in rational literal")
                return Polynomial.rational(Fraction(value, den))
            return Polynomial.rational(value)
        if kind == "var":
            return Polynomial.var(_classify(value))
        if kind == "-":
            return -self.atom()
        if kind == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise InputError(f"unexpected token {value!r} in polynomial text")


def parse_polynomial(text: str) -> Polynomial:
    """Parse the CLI/JSON polynomial grammar: rationals ``a`` or ``a/b``,
    variables ``z1.. l1.. c1.. h d delta m``, operators ``+ - * ^`` and
    parentheses; whitespace is insignificant."""
    return _Parser(text).parse()


def term_list(p: Polynomial) -> list[tuple[str, Fraction]]:
    """(monomial, coefficient) pairs in the canonical serialization order."""
    return [(repr(m), Fraction(c)) for m, c in _sorted_terms(p.terms)]
