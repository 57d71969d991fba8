"""Loop expansion of the colored Jones function, extracted exactly.

For every m the h^m coefficient of J_{K,n}(e^{h/n}) is a polynomial of
degree m in 1/n; its 1/n^k coefficient is the x^(m-k) coefficient of
R_{K,k}(x).  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cyclotomic import CyclotomicCoefficients
from .laurent import (
    LaurentPolynomial,
    TruncatedSeries,
    series_invert,
    series_of_laurent_at_exp,
)


class InconsistentFit(ArithmeticError):
    """Held-out colors do not lie on the fitted 1/n polynomial."""


class NoPolynomialInWindow(ArithmeticError):
    """No Laurent polynomial reproduces the loop series inside the degree cap."""


@dataclass(frozen=True)
class ScaledJonesTaylor:
    n: int
    coeffs: TruncatedSeries


def scaled_jones_taylor(jones_n: LaurentPolynomial, n: int, order: int) -> ScaledJonesTaylor:
    """Taylor coefficients of J_{K,n}(e^{h/n}) in h."""
    if n < 1:
        raise ValueError("color must be >= 1")
    return ScaledJonesTaylor(n, series_of_laurent_at_exp(jones_n, order, Fraction(1, n)))


def _interpolate(points: Sequence[Tuple[Fraction, Fraction]]) -> List[Fraction]:
    """Monomial coefficients of the interpolating polynomial (Newton form, exact)."""
    xs = [Fraction(x) for x, _ in points]
    dd = [Fraction(y) for _, y in points]
    size = len(xs)
    for level in range(1, size):
        for i in range(size - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level])
    coeffs = [Fraction(0)] * size
    # expand sum dd[i] * prod_{j<i} (x - xs[j]) by Horner on the Newton basis
    for i in range(size - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - xs[i] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[i]
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass
class FitDiagnostics:
    """Per-order fit data; ``finite_type[(i, j)]`` is c_{K,i,j}."""

    held_out: Dict[int, List[int]] = field(default_factory=dict)
    finite_type: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)


@dataclass
class LoopData:
    delta: LaurentPolynomial
    R: List[TruncatedSeries]
    P: Dict[int, LaurentPolynomial] = field(default_factory=dict)
    knot: Optional[str] = None
    fit: FitDiagnostics = field(default_factory=FitDiagnostics)
    status: Dict[str, object] = field(default_factory=dict)

    @property
    def orders(self) -> Tuple[int, int]:
        return len(self.R) - 1, self.R[0].order if self.R else -1

    def to_json(self) -> dict:
        return {
            "knot": self.knot,
            "delta": self.delta.to_json(),
            "R": [r.to_json() for r in self.R],
            "P": {str(k): p.to_json() for k, p in sorted(self.P.items())},
            "orders": list(self.orders),
            "status": self.status,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LoopData":
        return cls(
            LaurentPolynomial.from_json(obj["delta"]),
            [TruncatedSeries.from_json(r) for r in obj["R"]],
            {int(k): LaurentPolynomial.from_json(p) for k, p in obj.get("P", {}).items()},
            obj.get("knot"),
            status=dict(obj.get("status", {})),
        )


def extract_loop_series(tables: Sequence[ScaledJonesTaylor], order: int,
                        delta: Optional[LaurentPolynomial] = None, extra: int = 2,
                        knot: Optional[str] = None) -> LoopData:
    """Recover R_{K,0..order} from the h-expansions at several colors.

    For each m <= order the first m+1 colors fix the degree-m polynomial in
    1/n and at least ``extra`` further colors must satisfy it exactly.
    """
    tables = sorted(tables, key=lambda t: t.n)
    if len({t.n for t in tables}) != len(tables):
        raise ValueError("colors must be distinct")
    if len(tables) < order + 1 + extra:
        raise ValueError(f"order {order} needs {order + 1 + extra} colors, got {len(tables)}")
    if any(t.coeffs.order < order for t in tables):
        raise ValueError("Taylor tables are truncated below the requested order")
    rcoef: List[List[Fraction]] = [[Fraction(0)] * (order - k + 1) for k in range(order + 1)]
    diag = FitDiagnostics()
    for m in range(order + 1):
        pts = [(Fraction(1, t.n), Fraction(t.coeffs[m])) for t in tables]
        poly = _interpolate(pts[: m + 1])
        held = []
        for (u, y), t in zip(pts[m + 1:], tables[m + 1:]):
            if _poly_eval(poly, u) != y:
                raise InconsistentFit(f"h^{m} coefficient at n={t.n} is off the degree-{m} fit in 1/n")
            held.append(t.n)
        diag.held_out[m] = held
        for k in range(m + 1):
            rcoef[k][m - k] = poly[k]
            diag.finite_type[(m, m - k)] = poly[k]
    R = [TruncatedSeries(rcoef[k], order - k) for k in range(order + 1)]
    return LoopData(delta if delta is not None else LaurentPolynomial.constant(1), R,
                    knot=knot, fit=diag)


def inverse_alexander_series(delta: LaurentPolynomial, order: int) -> TruncatedSeries:
    return series_invert(series_of_laurent_at_exp(delta, order))


@dataclass
class MMRReport:
    residuals: List[Fraction]
    passed: bool
    first_nonzero: Optional[int]


def mmr_check(loop: LoopData, order: int, delta: Optional[LaurentPolynomial] = None) -> MMRReport:
    """Exact residuals coeff(R_0, x^m) - coeff(1/Delta(e^x), x^m), m <= order."""
    delta = loop.delta if delta is None else delta
    if loop.R[0].order < order:
        raise ValueError(f"R_0 known only through x^{loop.R[0].order}")
    target = inverse_alexander_series(delta, order)
    res = [Fraction(loop.R[0][m]) - Fraction(target[m]) for m in range(order + 1)]
    first = next((m for m, r in enumerate(res) if r), None)
    return MMRReport(res, first is None, first)


def _solve_exact(A: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    size = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(size):
        piv = next(r for r in range(col, size) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(size):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][size] for r in range(size)]


def reconstruct_loop_polynomial(loop: LoopData, k: int, window: Optional[int] = None,
                                cap: int = 64, slack: int = 4) -> LaurentPolynomial:
    """Find P_{K,k} with P(e^x) = R_k(x) * Delta(e^x)^(2k+1) inside a symmetric window.

    The window [-D, D] starts at (k+1)*span(Delta) and doubles while the
    orders beyond 2D disagree.  At least ``slack`` orders past 2D are
    required as a consistency margin.
    """
    span = loop.delta.maxdeg() - loop.delta.mindeg()
    D = window if window is not None else max(1, (k + 1) * span)
    r = loop.R[k]
    o = r.order
    target = r * series_of_laurent_at_exp(loop.delta, o) ** (2 * k + 1)
    while D <= cap:
        if 2 * D + slack > o:
            raise NoPolynomialInWindow(
                f"P_{k}: window D={D} needs series order {2 * D + slack}, have {o}")
        exps = list(range(-D, D + 1))
        A = [[Fraction(e) ** i for e in exps] for i in range(2 * D + 1)]
        rhs = [Fraction(target[i]) * factorial(i) for i in range(2 * D + 1)]
        sol = _solve_exact(A, rhs)
        p = LaurentPolynomial(dict(zip(exps, sol)))
        if series_of_laurent_at_exp(p, o) == target.truncate(o):
            loop.P[k] = p
            return p
        D *= 2
    raise NoPolynomialInWindow(f"P_{k}: no Laurent polynomial with exponents within +-{cap}")


def _z2_series(order: int) -> TruncatedSeries:
    """(e^{x/2} - e^{-x/2})^2 = e^x - 2 + e^{-x}."""
    return TruncatedSeries.exp(1, order) + TruncatedSeries.exp(-1, order) - 2


@dataclass
class IdentityResult:
    k: int
    order: int
    passed: bool
    first_failure: Optional[int]


def lemma_compare_check(cyclo_taylor: Mapping[int, TruncatedSeries], loop: LoopData,
                        z_order: int) -> List[IdentityResult]:
    """Check the k <= 3 identities tying R_{K,k} to Taylor data of C_{K,l}."""
    results = []
    for k in range(min(4, len(loop.R))):
        L = min(z_order, loop.R[k].order)
        z2 = _z2_series(L)
        need_l = L // 2 + 1
        if max(cyclo_taylor) < need_l:
            raise ValueError(f"identity for R_{k} through x^{L} needs C_K up to l={need_l}")
        rhs = TruncatedSeries.constant(0, L)
        zpow = TruncatedSeries.constant(1, L)  # z^(2l)
        prev = None  # z^(2l-2)
        for l in range(need_l + 1):
            tl = cyclo_taylor[l]
            rhs = rhs + zpow * tl[k]
            if k >= 2 and l >= 1:
                s = Fraction(l * (l + 1) * (2 * l + 1), 6)
                rhs = rhs - prev * (tl[k - 2] * s)
            prev = zpow
            zpow = zpow * z2
        diff = loop.R[k].truncate(L) - rhs
        first = next((i for i, c in enumerate(diff.coeffs) if c), None)
        results.append(IdentityResult(k, L, first is None, first))
    return results


class _Bivariate:
    """Dense truncated series in (x, h): entry [i][j] is the x^i h^j coefficient."""

    def __init__(self, A: int, B: int, data=None):
        self.A, self.B = A, B
        self.c = data or [[Fraction(0)] * (B + 1) for _ in range(A + 1)]

    @classmethod
    def from_x(cls, s: TruncatedSeries, A: int, B: int) -> "_Bivariate":
        out = cls(A, B)
        for i in range(A + 1):
            out.c[i][0] = Fraction(s[i])
        return out

    @classmethod
    def from_h(cls, s: TruncatedSeries, A: int, B: int) -> "_Bivariate":
        out = cls(A, B)
        for j in range(B + 1):
            out.c[0][j] = Fraction(s[j])
        return out

    def __add__(self, o):
        return _Bivariate(self.A, self.B, [[a + b for a, b in zip(r, s)] for r, s in zip(self.c, o.c)])

    def __sub__(self, o):
        return _Bivariate(self.A, self.B, [[a - b for a, b in zip(r, s)] for r, s in zip(self.c, o.c)])

    def __mul__(self, o):
        out = _Bivariate(self.A, self.B)
        for i1 in range(self.A + 1):
            for j1 in range(self.B + 1):
                a = self.c[i1][j1]
                if not a:
                    continue
                for i2 in range(self.A + 1 - i1):
                    row = o.c[i2]
                    orow = out.c[i1 + i2]
                    for j2 in range(self.B + 1 - j1):
                        if row[j2]:
                            orow[j1 + j2] += a * row[j2]
        return out


@dataclass
class BivariateReport:
    x_order: int
    h_order: int
    residual_nonzero: List[Tuple[int, int]]
    verified_x_order: int
    passed: bool


def lemma_compare_full(cyclo: CyclotomicCoefficients, loop: LoopData,
                       x_order: int, h_order: int) -> BivariateReport:
    """Compare sum_k R_k(x) h^k with sum_l C_l(e^h) prod_j (z^2 - w_j^2) in Q[[x,h]]."""
    A, B = x_order, h_order
    if len(loop.R) <= B or any(loop.R[k].order < A for k in range(B + 1)):
        raise ValueError(f"loop data too short for (x^{A}, h^{B})")
    lmax = (A + B) // 2
    if cyclo.k_max < lmax:
        raise ValueError(f"need cyclotomic coefficients up to l={lmax}")
    lhs = _Bivariate(A, B)
    for k in range(B + 1):
        for i in range(A + 1):
            lhs.c[i][k] = Fraction(loop.R[k][i])
    z2 = _Bivariate.from_x(_z2_series(A), A, B)
    rhs = _Bivariate(A, B)
    prod = _Bivariate.from_x(TruncatedSeries.constant(1, A), A, B)
    for l in range(lmax + 1):
        if l >= 1:
            w2 = TruncatedSeries.exp(l, B) + TruncatedSeries.exp(-l, B) - 2
            prod = prod * (z2 - _Bivariate.from_h(w2, A, B))
        cl = _Bivariate.from_h(series_of_laurent_at_exp(cyclo[l], B), A, B)
        rhs = rhs + cl * prod
    diff = lhs - rhs
    bad = [(i, j) for i in range(A + 1) for j in range(B + 1) if diff.c[i][j]]
    verified = min((i for i, _ in bad), default=A + 1) - 1
    return BivariateReport(A, B, bad, verified, not bad)


def loop_data_from_jones(jones: Mapping[int, LaurentPolynomial], delta: LaurentPolynomial,
                         order: int, extra: int = 2, knot: Optional[str] = None) -> LoopData:
    """Extract R_0..R_order from J_1..J_{order+1+extra}."""
    colors = range(1, order + 2 + extra)
    tables = [scaled_jones_taylor(jones[n], n, order) for n in colors]
    return extract_loop_series(tables, order, delta, extra, knot)
