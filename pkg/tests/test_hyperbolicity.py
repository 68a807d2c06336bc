"""Hypersurface intersection polynomial, leading-constant identities and
the jet-sheaf Euler characteristic against direct curve geometry."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from equiloc.algebra import Polynomial, parse_polynomial
from equiloc.errors import MissingQ
from equiloc.hyperbolicity import (D_VAR, DELTA_VAR, M_VAR, EulerResult,
                                   euler_characteristic,
                                   intersection_polynomial, leading_constant,
                                   positivity_threshold, top_intersection)
P = Polynomial


@pytest.fixture(scope="module")
def gg():
    return {n: intersection_polynomial(n) for n in (1, 2, 3)}


class TestLeadingConstant:
    def test_curve_case_is_one(self):
        assert leading_constant(1) == 1

    @pytest.mark.parametrize("n", [2, 3])
    def test_positive(self, n):
        assert leading_constant(n) > 0

    def test_missing_q(self):
        with pytest.raises(MissingQ):
            leading_constant(5)


class TestIntersectionPolynomial:
    def test_curve_oracle(self, gg):
        # direct geometry of a smooth plane curve of degree d: canonical
        # class (d-3)h, hyperplane self-intersection d
        assert gg[1].polynomial == parse_polynomial("(d - 3)*(1 - delta)")
        assert gg[1].theta == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_leading_coefficient_identity(self, gg, n):
        factor = math.comb(n + 1, 2) * n * n
        expected = (parse_polynomial(f"1 - {factor}*delta")
                    * P.rational(gg[n].theta))
        assert gg[n].leading == expected

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_delta_root(self, gg, n):
        root = Fraction(2, n ** 3 * (n + 1))
        assert gg[n].leading.evaluate({DELTA_VAR: root}).is_zero

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_degree_bounds(self, gg, n):
        assert gg[n].polynomial.degree_in(D_VAR) <= n
        assert gg[n].polynomial.degree_in(DELTA_VAR) <= 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_explicit_positivity_threshold(self, gg, n):
        delta = Fraction(1, n ** 3 * (n + 1))  # half the root
        d0 = positivity_threshold(gg[n], delta)
        poly = gg[n].polynomial.evaluate({DELTA_VAR: delta})
        for d in (d0, d0 + 7, 10 * d0):
            assert poly.evaluate({D_VAR: d}).constant_value() > 0


class TestEulerCharacteristic:
    def test_curve_riemann_roch(self):
        # chi(m) = deg(m K) + 1 - g = d(d-3) m - d(d-3)/2 for a plane curve
        result = euler_characteristic(1)
        expected = parse_polynomial("d*(d - 3)*m - 1/2*d*(d - 3)")
        assert result.chi == expected

    def test_numeric_degree(self):
        result = euler_characteristic(1, d=4)
        assert result.chi == parse_polynomial("4*m - 2")
        assert result.chi.evaluate({M_VAR: 0}) == -2  # 1 - g for g = 3

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_degree_in_m_bounded_by_fiber_dimension(self, n):
        result = euler_characteristic(n, d=9)
        assert result.chi.degree_in(M_VAR) <= n * n

    def test_value_at_zero_is_constant(self):
        chi = euler_characteristic(2, d=5).chi
        at_zero = chi.evaluate({M_VAR: 0})
        assert at_zero.degree_in(M_VAR) == 0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_top_power_matches_intersection_route(self, n):
        chi = euler_characteristic(n).chi
        lead = chi.coefficient(M_VAR, n * n)
        assert lead * math.factorial(n * n) == top_intersection(n)

    def test_surface_asymptotics(self):
        # independent surface-geometry oracle: for X in P^3 of degree d,
        # adjunction gives c1(X) = (4-d)h and c2(X) integrating to
        # (d^2-4d+6)d; the order-2 jet sheaf at weight w has top term
        # w^4 (13 c1^2 - 9 c2)/648, and our m counts weight 3m
        lead = euler_characteristic(2).chi.coefficient(M_VAR, 4)
        oracle = parse_polynomial(
            "81/648*(13*(4 - d)^2*d - 9*(d^2 - 4*d + 6)*d)")
        assert lead == oracle

    def test_coefficients_are_rational(self):
        chi = euler_characteristic(2, d=7).chi
        for _, c in chi.terms.items():
            Fraction(c)  # exact by construction; must not raise

    def test_missing_q(self):
        with pytest.raises(MissingQ):
            euler_characteristic(6)

    def test_result_record(self):
        result = euler_characteristic(1, d=5)
        assert isinstance(result, EulerResult)
        assert result.d == 5
        assert euler_characteristic(1).d is None
