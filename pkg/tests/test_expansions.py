from fractions import Fraction

import pytest
import sympy as sp

from conftest import CATALOG, cyclo, delta, jones_table, loop, loop_with_polys
from mmrloop.cyclotomic import cyclotomic_taylor
from mmrloop.expansions import (
    InconsistentFit,
    LoopData,
    NoPolynomialInWindow,
    ScaledJonesTaylor,
    extract_loop_series,
    lemma_compare_check,
    lemma_compare_full,
    loop_data_from_jones,
    mmr_check,
    reconstruct_loop_polynomial,
    scaled_jones_taylor,
)
from mmrloop.knots import MIRRORED, colored_jones
from mmrloop.laurent import LaurentPolynomial as L, TruncatedSeries, series_of_laurent_at_exp

ONE = L.constant(1)


class TestScaledTaylor:
    def test_unknot(self):
        t = scaled_jones_taylor(ONE, 5, 4)
        assert list(t.coeffs.coeffs) == [1, 0, 0, 0, 0]

    @pytest.mark.parametrize("name", ["3_1", "5_2", "6_1"])
    def test_constant_term(self, name):
        for n, J in jones_table(name, 6).items():
            assert scaled_jones_taylor(J, n, 3).coeffs[0] == 1

    def test_figure_eight_color_two(self):
        J2 = jones_table("4_1", 2)[2]
        # sum of a_j j^2 over q^2 - q + 1 - q^-1 + q^-2 is 6; divide by n^2 * 2!
        assert scaled_jones_taylor(J2, 2, 2).coeffs[2] == Fraction(3, 4)

    def test_symbolic_oracle(self):
        h = sp.symbols("h")
        J = jones_table("5_2", 4)[4]
        expr = sum(c * sp.exp(sp.Rational(e, 4) * h) for e, c in J.items())
        ref = sp.series(expr, h, 0, 7).removeO()
        got = scaled_jones_taylor(J, 4, 6).coeffs
        assert [sp.Rational(str(Fraction(c))) for c in got.coeffs] == [ref.coeff(h, i) for i in range(7)]


class TestExtraction:
    def test_unknot(self):
        data = loop("unknot", 6)
        assert data.R[0].coeffs[0] == 1 and not any(data.R[0].coeffs[1:])
        assert all(r.is_zero() for r in data.R[1:])

    def test_second_coefficient(self):
        assert loop("3_1", 4).R[0][2] == -1
        assert loop("4_1", 4).R[0][2] == 1

    def test_held_out_colors_recorded(self):
        data = loop("5_2", 8)
        assert all(len(v) >= 2 for v in data.fit.held_out.values())
        assert data.fit.held_out[8] == [10, 11]

    def test_fit_exposes_finite_type_coefficients(self):
        data = loop("3_1", 6)
        # c_{K,i,j}: coefficient of n^j h^i in J_n(e^h); the top one is R_0's x^i coefficient
        for i in range(7):
            assert data.fit.finite_type[(i, i)] == data.R[0][i]

    def test_inconsistent_input(self):
        J = jones_table("3_1", 8)
        tables = [scaled_jones_taylor(J[n], n, 5) for n in range(1, 9)]
        bad = tables[-1].coeffs.coeffs
        tables[-1] = ScaledJonesTaylor(8, TruncatedSeries(bad[:3] + (bad[3] + 1,) + bad[4:], 5))
        with pytest.raises(InconsistentFit):
            extract_loop_series(tables, 5)

    def test_needs_extra_colors(self):
        J = jones_table("3_1", 6)
        with pytest.raises(ValueError):
            extract_loop_series([scaled_jones_taylor(J[n], n, 5) for n in range(1, 7)], 5)

    def test_color_two_consistent_with_loop_expansion(self):
        M = 8
        data = loop("5_2", M)
        t = scaled_jones_taylor(jones_table("5_2", 2)[2], 2, M)
        for m in range(M + 1):
            assert t.coeffs[m] == sum(Fraction(data.R[k][m - k]) / 2 ** k for k in range(m + 1))


class TestMMR:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_exact_at_order_eight(self, name):
        rep = mmr_check(loop(name, 8), 8)
        assert rep.passed and all(r == 0 for r in rep.residuals)

    def test_wrong_alexander_fails_at_second_order(self):
        rep = mmr_check(loop("3_1", 8), 8, delta=delta("4_1"))
        assert not rep.passed and rep.first_nonzero == 2


class TestLoopPolynomials:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_first_is_one(self, name):
        data = loop(name, 8)
        assert reconstruct_loop_polynomial(data, 0) == ONE

    def test_unknot_higher_loops_vanish(self):
        data = loop("unknot", 8)
        assert reconstruct_loop_polynomial(data, 1).is_zero()
        assert reconstruct_loop_polynomial(data, 2).is_zero()

    @pytest.mark.parametrize("name", ["3_1", "4_1"])
    def test_first_loop_reproduces_series(self, name):
        data = loop_with_polys(name)
        P1, d = data.P[1], data.delta
        o = data.R[1].order
        lhs = series_of_laurent_at_exp(P1, o)
        rhs = data.R[1] * series_of_laurent_at_exp(d, o) ** 3
        assert lhs == rhs
        assert P1 == P1.mirror()

    def test_trefoil_first_loop(self):
        assert loop_with_polys("3_1").P[1] == L({2: 1, 1: -2, 0: 2, -1: -2, -2: 1})

    def test_figure_eight_first_loop(self):
        assert loop_with_polys("4_1").P[1].is_zero()

    def test_mirror_convention(self):
        # J(1/q) at q = e^h turns R_k(x) into (-1)^k R_k(-x)
        J = {n: colored_jones(CATALOG["3_1"], n, MIRRORED) for n in range(1, 17)}
        mirrored = loop_data_from_jones(J, delta("3_1"), 13)
        plain = loop("3_1", 13)
        for k in (0, 1):
            expected = reconstruct_loop_polynomial(plain, k).mirror() * (-1) ** k
            assert reconstruct_loop_polynomial(mirrored, k) == expected

    def test_short_series_is_reported(self):
        with pytest.raises(NoPolynomialInWindow):
            reconstruct_loop_polynomial(loop("3_1", 6), 1)

    def test_cap_is_reported(self):
        with pytest.raises(NoPolynomialInWindow):
            reconstruct_loop_polynomial(loop("3_1", 13), 1, window=1, cap=1)

    def test_json_round_trip(self):
        data = loop_with_polys("3_1")
        back = LoopData.from_json(data.to_json())
        assert back.R == data.R and back.P == data.P and back.delta == data.delta


class TestCyclotomicIdentities:
    @pytest.mark.parametrize("name", ["unknot", "3_1", "4_1", "5_2", "6_1"])
    def test_low_loop_identities(self, name):
        reps = lemma_compare_check(cyclotomic_taylor(cyclo(name), 3), loop(name, 11), 8)
        assert [r.k for r in reps] == [0, 1, 2, 3]
        assert all(r.passed for r in reps)

    def test_figure_eight_first_loop_vanishes(self):
        data = loop("4_1", 11)
        assert data.R[1].is_zero()

    def test_corruption_is_detected(self):
        data = loop("3_1", 11)
        broken = LoopData(data.delta, [data.R[0], data.R[1], data.R[2] + TruncatedSeries([0, 0, 0, 0, 1], 9),
                                       data.R[3]])
        reps = lemma_compare_check(cyclotomic_taylor(cyclo("3_1"), 3), broken, 8)
        assert [r.passed for r in reps] == [True, True, False, True]
        assert reps[2].first_failure == 4

    @pytest.mark.parametrize("name", ["unknot", "4_1", "3_1"])
    def test_two_variable_identity(self, name):
        rep = lemma_compare_full(cyclo(name), loop(name, 11), 8, 3)
        assert rep.passed and rep.verified_x_order == 8

    def test_h_order_zero_slice_is_mmr(self):
        rep = lemma_compare_full(cyclo("5_2"), loop("5_2", 8), 8, 0)
        assert rep.passed
