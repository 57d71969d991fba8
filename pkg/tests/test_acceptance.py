"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one PASS/FAIL line; the lines are also collected into the
terminal summary.
"""

import math
import time
from fractions import Fraction

import mpmath

from conftest import ACCEPTANCE_LINES, CATALOG
from mmrloop import asymptotics as asy
from mmrloop.cyclotomic import (
    CyclotomicCoefficients,
    cyclotomic_from_jones,
    cyclotomic_taylor,
    integrality_check,
    jones_from_cyclotomic,
)
from mmrloop.expansions import (
    extract_loop_series,
    lemma_compare_check,
    loop_data_from_jones,
    mmr_check,
    reconstruct_loop_polynomial,
    scaled_jones_taylor,
)
from mmrloop.knots import alexander, colored_jones
from mmrloop.laurent import LaurentPolynomial as L

ALPHA = 0.05j
COLORS = [200, 400, 800, 1600, 3200]


def verdict(number, passed, detail):
    line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert passed, line


def fresh_jones(name, nmax):
    return {n: colored_jones(CATALOG[name], n) for n in range(1, nmax + 1)}


def test_criterion_01_exact_mmr():
    start = time.perf_counter()
    failures = []
    for name in ("unknot", "3_1", "4_1", "5_2"):
        loop = loop_data_from_jones(fresh_jones(name, 11), alexander(CATALOG[name]), 8)
        rep = mmr_check(loop, 8)
        if not (rep.passed and all(r == 0 for r in rep.residuals)):
            failures.append(f"{name} at x^{rep.first_nonzero}")
    elapsed = time.perf_counter() - start
    verdict(1, not failures and elapsed < 300,
            f"R_0 = 1/Delta(e^x) through x^8, residuals exactly zero; failures={failures}; {elapsed:.1f}s")


def test_criterion_02_round_trip_and_integrality():
    start = time.perf_counter()
    problems = []
    for name in sorted(CATALOG):
        J = fresh_jones(name, 13)
        C = cyclotomic_from_jones(J, 12, name)
        if any(jones_from_cyclotomic(C, n) != J[n] for n in range(1, 14)):
            problems.append(f"{name}: round trip")
        rep = integrality_check(C)
        if not rep.passed:
            problems.append(f"{name}: integrality at k={rep.first_failure}")
    elapsed = time.perf_counter() - start
    verdict(2, not problems and elapsed < 600,
            f"round trip n<=13 and integral C_K,k for k<=12 on {len(CATALOG)} knots; "
            f"problems={problems}; {elapsed:.1f}s")


def test_criterion_03_figure_eight_coefficients():
    C = cyclotomic_from_jones(fresh_jones("4_1", 13), 12)
    ones = [c == L.constant(1) for c in C.coeffs]
    verdict(3, all(ones) and len(ones) == 13, f"C_4_1,k = 1 for k=0..12: {sum(ones)}/13")


def test_criterion_04_inverse_color_polynomials():
    bad = []
    for name in sorted(CATALOG):
        J = fresh_jones(name, 11)
        for m in range(9):
            tables = [scaled_jones_taylor(J[n], n, m) for n in range(1, m + 4)]
            try:
                extract_loop_series(tables, m, extra=2)
            except ArithmeticError as exc:
                bad.append(f"{name} m={m}: {exc}")
    verdict(4, not bad, f"fits from colors 1..m+1 predict m+2, m+3 exactly for m<=8; bad={bad}")


def test_criterion_05_cyclotomic_identities():
    results = {}
    for name in ("3_1", "4_1"):
        J = fresh_jones(name, 14)
        C = cyclotomic_from_jones(J, 12)
        loop = loop_data_from_jones(J, alexander(CATALOG[name]), 11)
        results[name] = lemma_compare_check(cyclotomic_taylor(C, 3), loop, 8)
    ok = all(r.passed and r.order == 8 for reps in results.values() for r in reps)
    summary = {n: [r.passed for r in reps] for n, reps in results.items()}
    verdict(5, ok, f"R_0..R_3 identities with zero residual through x^8: {summary}")


def test_criterion_06_loop_polynomials():
    problems, found = [], {}
    for name in sorted(CATALOG):
        top = 1 if name in ("3_1", "4_1") else 0
        M = 13 if top else 8
        loop = loop_data_from_jones(fresh_jones(name, M + 3), alexander(CATALOG[name]), M)
        try:
            if reconstruct_loop_polynomial(loop, 0) != L.constant(1):
                problems.append(f"{name}: P_0 != 1")
            if top:
                found[name] = str(reconstruct_loop_polynomial(loop, 1, slack=4))
        except ArithmeticError as exc:
            problems.append(f"{name}: {exc}")
    verdict(6, not problems and len(found) == 2,
            f"P_0 = 1 on all knots; P_1 (>=4 consistency orders) = {found}; problems={problems}")


def _figure_eight_loop():
    J = fresh_jones("4_1", 16)
    loop = loop_data_from_jones(J, alexander(CATALOG["4_1"]), 13)
    reconstruct_loop_polynomial(loop, 0)
    reconstruct_loop_polynomial(loop, 1)
    return loop, cyclotomic_from_jones(J, 12)


def test_criterion_07_order_zero_convergence():
    start = time.perf_counter()
    loop, C = _figure_eight_loop()
    scan = asy.convergence_scan("4_1", [ALPHA], COLORS, 0, loop,
                                lambda a, n: asy.eval_cyclotomic(C, a, n))
    p = scan.points[0]
    elapsed = time.perf_counter() - start
    order_ok = p.decay_order is not None and abs(p.decay_order - 1.0) <= 0.15
    verdict(7, p.discrepancy < 1e-3 and order_ok and elapsed < 120,
            f"|J_3200 - 1/Delta| = {p.discrepancy:.3e} (< 1e-3), fitted decay order "
            f"{p.decay_order} (want 1.0 +- 0.15), {elapsed:.1f}s")


def test_criterion_08_order_one_limit():
    loop, C = _figure_eight_loop()
    scan = asy.convergence_scan("4_1", [ALPHA], COLORS, 1, loop,
                                lambda a, n: asy.eval_cyclotomic(C, a, n))
    p = scan.points[0]
    order_ok = p.decay_order is not None and abs(p.decay_order - 1.0) <= 0.15
    verdict(8, p.relative_discrepancy < 0.02 and order_ok,
            f"target P_1(e^a)/Delta(e^a)^3 = {p.target}, P_1 = {loop.P[1]}; relative discrepancy "
            f"{p.relative_discrepancy} (want < 0.02); next-correction order {p.decay_order} "
            f"(want 1.0 +- 0.15)")


def test_criterion_09_derivative_limits():
    reps = {}
    for name in ("3_1", "4_1"):
        reps[name] = asy.derivative_limit_check(fresh_jones(name, 9), alexander(CATALOG[name]), 6)
    second = {n: r.limits[2] for n, r in reps.items()}
    ok = all(r.passed for r in reps.values()) and second == {"3_1": -2, "4_1": 2}
    verdict(9, ok, f"exact limits equal m! coeff(1/Delta) for m<=6; m=2 limits {second}")


def test_criterion_10_bound_consistency():
    C = cyclotomic_from_jones(fresh_jones("3_1", 13), 12)
    fit = asy.degree_growth_fit(C)
    a = fit.constants["min_a"]
    deg_ok = abs(a - (-0.5)) <= 0.1
    kern = asy.kernel_estimate_check([50], list(range(1, 11)), [0.1])
    slope = kern.slopes[(0.1 + 0j, 50)]
    C1 = kern.fit.constants["C1"]
    kern_ok = slope < 0 and C1 * math.log(0.1) < 0
    verdict(10, deg_ok and kern_ok,
            f"mindeg quadratic coefficient {a:.4f} (want -0.5 +- 20%); kernel log-slope per step "
            f"{slope:.3f} (ratio {math.exp(slope):.4f}), fitted C1 = {C1:.3f}")


def test_criterion_11_negative_controls():
    J = fresh_jones("4_1", 13)
    C = cyclotomic_from_jones(J, 12)
    corrupted = CyclotomicCoefficients(list(C.coeffs))
    corrupted.coeffs[5] = corrupted.coeffs[5] + L.constant(Fraction(1, 2))
    integ = integrality_check(corrupted)
    loop = loop_data_from_jones(fresh_jones("3_1", 11), alexander(CATALOG["3_1"]), 8)
    wrong = mmr_check(loop, 8, delta=alexander(CATALOG["4_1"]))
    kern = asy.kernel_estimate_check([50, 100], list(range(1, 11)), [0.1, 0.05])
    region = asy.region_estimate(asy.trivial_fit(C=0.0), kern.fit)
    outside = 3 * region.radius_at_axis
    try:
        v = asy.eval_cyclotomic(C, outside, 400)
        diverged = abs(v) > 1e3
        tail = f"value {mpmath.nstr(abs(v), 5)}"
    except asy.TailNotCertified as exc:
        diverged, tail = True, f"TailNotCertified ({exc})"
    ok = (not integ.passed and integ.first_failure == 5 and not wrong.passed
          and wrong.first_nonzero == 2 and diverged and not region.contains(outside))
    verdict(11, ok, f"corrupted table fails integrality at k={integ.first_failure}; wrong-Delta MMR "
                    f"fails at m={wrong.first_nonzero}; alpha={outside:.3f} outside U_K "
                    f"(r={region.radius_at_axis:.3f}): {tail}")
