"""Reparametrization matrices, the jet embedding and its invariant minors."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from equiloc.algebra import Polynomial, parse_polynomial, svar
from equiloc.errors import SingularLinearPart, TooFewColumns
from equiloc.jets import (JetCurve, ReparamJet, compose, compose_reparam,
                          gk_matrix, invariant_minors, kxk_minors, rho,
                          sym_basis, sym_dimension)

P = Polynomial


def rational_jet(rng: random.Random, n: int, k: int,
                 regular: bool = True) -> JetCurve:
    rows = [[Fraction(rng.randint(-6, 6), rng.randint(1, 4))
             for _ in range(n)] for _ in range(k)]
    if regular and all(x == 0 for x in rows[0]):
        rows[0][0] = Fraction(1)
    return JetCurve(rows)


def random_reparam(rng: random.Random, k: int,
                   unipotent: bool = False) -> ReparamJet:
    head = Fraction(1) if unipotent else \
        Fraction(rng.choice([x for x in range(-5, 6) if x]), rng.randint(1, 3))
    tail = [Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            for _ in range(k - 1)]
    return ReparamJet([head] + tail)


class TestGkMatrix:
    def test_order_two_symbolic(self):
        a1, a2 = P.var(svar("a1")), P.var(svar("a2"))
        g = gk_matrix(ReparamJet((a1, a2)))
        assert g == [[a1, a2], [P.zero(), a1 ** 2]]

    def test_identity(self):
        g = gk_matrix(ReparamJet.identity(3))
        assert g == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_order_three_entry(self):
        a1, a2, a3 = (P.var(svar(f"a{i}")) for i in (1, 2, 3))
        g = gk_matrix(ReparamJet((a1, a2, a3)))
        assert g[1][2] == 2 * a1 * a2
        assert g[2][2] == a1 ** 3
        assert g[1][0] == P.zero()

    def test_upper_triangular_with_power_diagonal(self):
        rng = random.Random(3)
        phi = random_reparam(rng, 4)
        g = gk_matrix(phi)
        for i in range(4):
            assert g[i][i] == phi.alphas[0] ** (i + 1)
            for j in range(i):
                assert g[i][j] == 0

    def test_singular_linear_part(self):
        with pytest.raises(SingularLinearPart):
            ReparamJet((0, 1))

    def test_composition_is_matrix_product(self):
        rng = random.Random(17)
        for _ in range(25):
            p1 = random_reparam(rng, 3)
            p2 = random_reparam(rng, 3)
            g = gk_matrix(compose_reparam(p1, p2))
            g1, g2 = gk_matrix(p1), gk_matrix(p2)
            product = [[sum(g1[i][t] * g2[t][j] for t in range(3))
                        for j in range(3)] for i in range(3)]
            assert g == product


class TestCompose:
    def test_identity(self):
        rng = random.Random(1)
        gamma = rational_jet(rng, 2, 3)
        assert compose(gamma, ReparamJet.identity(3)) == gamma

    def test_line_example(self):
        gamma = JetCurve(((1,), (0,)))
        assert compose(gamma, ReparamJet((1, 1))).coefficients == \
            ((Fraction(1),), (Fraction(1),))

    def test_associativity(self):
        rng = random.Random(23)
        for _ in range(25):
            gamma = rational_jet(rng, 2, 3)
            p1 = random_reparam(rng, 3)
            p2 = random_reparam(rng, 3)
            assert compose(compose(gamma, p1), p2) == \
                compose(gamma, compose_reparam(p1, p2))

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            compose(JetCurve(((1, 0),)), ReparamJet((1, 1)))


class TestRho:
    def test_basis_order(self):
        assert sym_basis(2, 2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        assert sym_dimension(2, 4) == 14
        assert sym_dimension(3, 3) == 19

    def test_order_two_rows(self):
        v11, v12, v21, v22 = (P.var(svar(s))
                              for s in ("v11", "v12", "v21", "v22"))
        matrix = rho(JetCurve(((v11, v12), (v21, v22))))
        assert matrix[0] == [v11, v12, P.zero(), P.zero(), P.zero()]
        assert matrix[1] == [v21, v22, v11 ** 2, 2 * v11 * v12, v12 ** 2]

    def test_first_row_is_linear_block(self):
        rng = random.Random(5)
        gamma = rational_jet(rng, 3, 3)
        matrix = rho(gamma)
        assert matrix[0][:3] == list(gamma.coefficients[0])
        assert all(x == 0 for x in matrix[0][3:])

    def test_from_derivatives_normalization(self):
        direct = JetCurve(((1, 2), (Fraction(3, 2), 0)))
        derived = JetCurve.from_derivatives(((1, 2), (3, 0)))
        assert direct == derived

    def test_regularity_flag(self):
        assert JetCurve(((1, 0), (0, 0))).is_regular
        assert not JetCurve(((0, 0), (1, 0))).is_regular


class TestMinors:
    def test_single(self):
        assert invariant_minors(JetCurve(((Fraction(5),),))) == [5]

    def test_too_few_columns(self):
        with pytest.raises(TooFewColumns):
            kxk_minors([[1, 2], [3, 4], [5, 6]])

    def test_lexicographic_column_order(self):
        minors = kxk_minors([[1, 0, 2]])
        assert minors == [1, 0, 2]

    @pytest.mark.parametrize("n,k,rounds", [(2, 3, 20), (2, 4, 15), (3, 3, 20)])
    def test_unipotent_invariance(self, n, k, rounds):
        rng = random.Random(100 * n + k)
        for _ in range(rounds):
            gamma = rational_jet(rng, n, k)
            phi = random_reparam(rng, k, unipotent=True)
            assert invariant_minors(compose(gamma, phi)) == \
                invariant_minors(gamma)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_scaling_covariance(self, k):
        # rows scale by alpha^j, so every maximal minor scales by
        # alpha^(1 + 2 + ... + k) whatever columns it uses
        rng = random.Random(k)
        gamma = rational_jet(rng, 2, k)
        alpha = Fraction(3)
        phi = ReparamJet((alpha,) + (0,) * (k - 1))
        scaled = invariant_minors(compose(gamma, phi))
        base = invariant_minors(gamma)
        factor = alpha ** (k * (k + 1) // 2)
        assert scaled == [factor * b for b in base]


GOLDEN_JET = JetCurve.from_derivatives(
    [[P.var(svar(f"f1{d}")), P.var(svar(f"f2{d}"))]
     for d in ("p", "pp", "ppp", "pppp")])


def golden_matrix():
    """The order-4 embedding matrix of a symbolic plane jet, with the
    pure-power blocks carrying their multinomial coefficients."""
    rows_text = [
        # degree 1..4 blocks per row
        ["f1p", "f2p"] + ["0"] * 12,
        ["1/2*f1pp", "1/2*f2pp", "f1p^2", "2*f1p*f2p", "f2p^2"] + ["0"] * 9,
        ["1/6*f1ppp", "1/6*f2ppp",
         "f1p*f1pp", "f1p*f2pp + f1pp*f2p", "f2p*f2pp",
         "f1p^3", "3*f1p^2*f2p", "3*f1p*f2p^2", "f2p^3"] + ["0"] * 5,
        ["1/24*f1pppp", "1/24*f2pppp",
         "1/3*f1p*f1ppp + 1/4*f1pp^2",
         "1/3*(f1p*f2ppp + f1ppp*f2p) + 1/2*f1pp*f2pp",
         "1/3*f2p*f2ppp + 1/4*f2pp^2",
         "3/2*f1p^2*f1pp",
         "3/2*(f1p^2*f2pp + 2*f1p*f2p*f1pp)",
         "3/2*(f2p^2*f1pp + 2*f2p*f1p*f2pp)",
         "3/2*f2p^2*f2pp",
         "f1p^4", "4*f1p^3*f2p", "6*f1p^2*f2p^2", "4*f1p*f2p^3", "f2p^4"],
    ]
    return [[parse_polynomial(t) for t in row] for row in rows_text]


class TestGoldenEmbedding:
    def test_shape(self):
        matrix = rho(GOLDEN_JET)
        assert len(matrix) == 4
        assert all(len(row) == 14 for row in matrix)

    def test_entrywise(self):
        assert rho(GOLDEN_JET) == golden_matrix()
