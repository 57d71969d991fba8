"""Numerical harness for J_{K,n}(e^{alpha/n}) at large color.

Evaluation goes through one of three paths (exact polynomial, numeric state
sum, cyclotomic sum).  Scans produce residual tables exported as CSV; bound
fits are least-squares constant fits, reported as consistency evidence only.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .cyclotomic import CyclotomicCoefficients, cyclotomic_from_jones
from .expansions import LoopData, extract_loop_series, inverse_alexander_series, scaled_jones_taylor
from .knots import STANDARD, BraidWord, colored_jones, colored_jones_numeric
from .laurent import LaurentPolynomial
from .precision import DEFAULT_PRECISION, PrecisionComplex, PrecisionExhausted, context, eval_complex

PATHS = ("exact-poly", "numeric-sum", "cyclotomic")
TAIL_RATIO = 0.9


class TailNotCertified(ArithmeticError):
    """Cyclotomic terms are not shrinking fast enough to bound the truncated tail."""


class DegenerateData(ValueError):
    """Too little variation in the data to fit the model."""


# ---------------------------------------------------------------------------
# angle grids

@dataclass(frozen=True)
class AngleGrid:
    points: Tuple[complex, ...]
    description: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if any(p == 0 for p in pts):
            raise ValueError("alpha = 0 is excluded from angle grids")
        object.__setattr__(self, "points", pts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    @classmethod
    def imaginary_axis(cls, ts: Sequence[float]) -> "AngleGrid":
        return cls(tuple(1j * t for t in ts), {"kind": "imaginary", "t": list(ts)})

    @classmethod
    def radial(cls, direction: complex, radii: Sequence[float]) -> "AngleGrid":
        u = direction / abs(direction)
        return cls(tuple(u * r for r in radii), {"kind": "radial", "direction": [u.real, u.imag],
                                                 "radii": list(radii)})

    @classmethod
    def disk(cls, radius: float, rings: int = 2, per_ring: int = 8) -> "AngleGrid":
        pts = [radius * (r + 1) / rings * complex(math.cos(t), math.sin(t))
               for r in range(rings)
               for t in (2 * math.pi * j / per_ring for j in range(per_ring))]
        return cls(tuple(pts), {"kind": "disk", "radius": radius, "rings": rings,
                                "per_ring": per_ring})

    @classmethod
    def default(cls) -> "AngleGrid":
        axis, disk = cls.imaginary_axis([0.01, 0.02, 0.05]), cls.disk(0.05)
        return cls(axis.points + disk.points, {"kind": "default", "parts": [dict(axis.description),
                                                                         dict(disk.description)]})


# ---------------------------------------------------------------------------
# evaluation

@lru_cache(maxsize=None)
def _cyclotomic_cached(braid: BraidWord, k_max: int, convention: str) -> CyclotomicCoefficients:
    jones = {n: colored_jones(braid, n, convention) for n in range(1, k_max + 2)}
    return cyclotomic_from_jones(jones, k_max, braid.name, convention)


def _mp_alpha(alpha: complex, prec: int):
    return context(prec).mpc(alpha)


def cyclotomic_terms(C: CyclotomicCoefficients, alpha: complex, n: int,
                     prec: int = DEFAULT_PRECISION) -> List[PrecisionComplex]:
    """Terms C_{n,k}(q) C_{K,k}(q) at q = e^{alpha/n}, k = 0..min(n-1, k_max)."""
    a = _mp_alpha(alpha, prec)
    q0 = PrecisionComplex.exp(a / n, prec)
    qn = PrecisionComplex.exp(a, prec)
    top = qn + qn.reciprocal()
    kernel = PrecisionComplex(1, 0, prec)
    terms = []
    for k in range(min(n - 1, C.k_max) + 1):
        if k:
            qj = PrecisionComplex.exp(a * k / n, prec)
            kernel = kernel * (top - qj - qj.reciprocal())
        terms.append(kernel * eval_complex(C[k], q0))
    return terms


def _tail_bound(terms: Sequence[PrecisionComplex]) -> mpmath.mpf:
    """Geometric extrapolation from the last three term magnitudes."""
    if len(terms) < 3:
        raise TailNotCertified("fewer than three terms available for tail extrapolation")
    t = [abs(x) + x.radius for x in terms[-3:]]
    if t[0] == 0 and t[1] == 0 and t[2] == 0:
        return mpmath.mpf(0)
    if t[0] == 0 or t[1] == 0:
        raise TailNotCertified("term magnitudes vanish irregularly")
    ratio = max(t[1] / t[0], t[2] / t[1])
    if ratio >= TAIL_RATIO:
        raise TailNotCertified(f"term ratio {mpmath.nstr(ratio, 4)} >= {TAIL_RATIO}")
    return t[2] * ratio / (1 - ratio)


def eval_scaled_jones(knot: BraidWord, alpha: complex, n: int, path: str = "cyclotomic", *,
                      cyclo: Optional[CyclotomicCoefficients] = None, k_max: int = 12,
                      convention: str = STANDARD, prec: int = DEFAULT_PRECISION,
                      tol=None) -> PrecisionComplex:
    """J_{K,n}(e^{alpha/n}) with a tracked error radius."""
    if n < 1:
        raise ValueError("color must be >= 1")
    if path not in PATHS:
        raise ValueError(f"unknown evaluation path {path!r}")
    if path == "exact-poly":
        q0 = PrecisionComplex.exp(_mp_alpha(alpha, prec) / n, prec)
        return eval_complex(colored_jones(knot, n, convention), q0, tol)
    if path == "numeric-sum":
        q0 = PrecisionComplex.exp(_mp_alpha(alpha, prec) / n, prec)
        return colored_jones_numeric(knot, n, q0, convention, tol)
    if cyclo is None:
        cyclo = _cyclotomic_cached(knot, k_max, convention)
    return eval_cyclotomic(cyclo, alpha, n, prec, tol)


def eval_cyclotomic(cyclo: CyclotomicCoefficients, alpha: complex, n: int,
                    prec: int = DEFAULT_PRECISION, tol=None) -> PrecisionComplex:
    terms = cyclotomic_terms(cyclo, alpha, n, prec)
    total = PrecisionComplex(0, 0, prec)
    for t in terms:
        total = total + t
    if n - 1 > cyclo.k_max:
        total = PrecisionComplex(total.value, total.radius + _tail_bound(terms), prec)
    return total.require(tol)


# ---------------------------------------------------------------------------
# residual scans

@dataclass
class ResidualTable:
    knot: str
    entries: Dict[Tuple[complex, int, int], PrecisionComplex] = field(default_factory=dict)

    def usable(self, key) -> bool:
        r = self.entries[key]
        return r.radius <= abs(r) / 100

    CSV_COLUMNS = ("knot", "alpha_re", "alpha_im", "n", "N", "residual_re", "residual_im",
                   "error_radius")

    def rows(self) -> List[List[str]]:
        out = []
        for (alpha, n, N) in sorted(self.entries, key=lambda k: (k[0].real, k[0].imag, k[2], k[1])):
            r = self.entries[(alpha, n, N)]
            out.append([self.knot, repr(alpha.real), repr(alpha.imag), str(n), str(N),
                        mpmath.nstr(r.value.real, 17), mpmath.nstr(r.value.imag, 17),
                        mpmath.nstr(r.radius, 6)])
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.CSV_COLUMNS)
        w.writerows(self.rows())
        return buf.getvalue()


@dataclass
class PointSummary:
    alpha: complex
    target: Optional[complex]
    decay_order: Optional[float]
    discrepancy: Optional[float]
    relative_discrepancy: Optional[float]
    status: str  # "ok", "exact", "inconclusive", "uncertified"
    message: str = ""


@dataclass
class ScanResult:
    table: ResidualTable
    N: int
    points: List[PointSummary]

    def summary(self) -> dict:
        return {"knot": self.table.knot, "N": self.N, "points": [
            {"alpha": [p.alpha.real, p.alpha.imag],
             "target": None if p.target is None else [p.target.real, p.target.imag],
             "decay_order": p.decay_order, "discrepancy": p.discrepancy,
             "relative_discrepancy": p.relative_discrepancy, "status": p.status,
             "message": p.message} for p in self.points]}


def loop_limit(loop: LoopData, k: int, alpha: complex, prec: int = DEFAULT_PRECISION) -> PrecisionComplex:
    """R_{K,k}(alpha) = P_{K,k}(e^alpha) / Delta(e^alpha)^(2k+1)."""
    if k not in loop.P:
        raise KeyError(f"loop polynomial P_{k} has not been reconstructed")
    ea = PrecisionComplex.exp(_mp_alpha(alpha, prec), prec)
    return eval_complex(loop.P[k], ea) / eval_complex(loop.delta, ea) ** (2 * k + 1)


def fit_decay_order(ns: Sequence[int], values: Sequence[float]) -> float:
    """Negative log-log slope of |values| against n."""
    if len(ns) < 2:
        raise DegenerateData("need at least two colors")
    x, y = np.log(np.asarray(ns, float)), np.log(np.asarray(values, float))
    slope, _ = np.polyfit(x, y, 1)
    return float(-slope)


def residuals(J: PrecisionComplex, alpha: complex, n: int, N: int,
              limits: Sequence[PrecisionComplex]) -> List[PrecisionComplex]:
    """r_0..r_N with r_0 = J and r_k = (n/alpha)(r_{k-1} - limit_{k-1})."""
    scale = PrecisionComplex(_mp_alpha(alpha, J.prec), 0, J.prec).reciprocal() * n
    out = [J]
    for k in range(1, N + 1):
        out.append((out[-1] - limits[k - 1]) * scale)
    return out


def convergence_scan(knot: str, grid: Iterable[complex], n_list: Sequence[int], N: int,
                     loop: LoopData, evaluate: Callable[[complex, int], PrecisionComplex],
                     prec: int = DEFAULT_PRECISION, min_points: int = 4) -> ScanResult:
    """Residuals r_N(n, alpha) and fitted decay of |r_N - R_N(alpha)|.

    ``evaluate(alpha, n)`` supplies J_{K,n}(e^{alpha/n}); the loop data must
    hold P_0..P_{N-1} (and P_N for a target).
    """
    ns = sorted(n_list)
    if ns != list(n_list) or len(set(ns)) != len(ns):
        raise ValueError("n_list must be strictly increasing")
    table = ResidualTable(knot)
    points = []
    for alpha in grid:
        alpha = complex(alpha)
        limits = [loop_limit(loop, k, alpha, prec) for k in range(N)]
        target = loop_limit(loop, N, alpha, prec) if N in loop.P else None
        diffs, used, msg = [], [], ""
        exact = True
        try:
            for n in ns:
                J = evaluate(alpha, n)
                r = residuals(J, alpha, n, N, limits)[-1]
                table.entries[(alpha, n, N)] = r
                if target is not None:
                    d = r - target
                    exact = exact and abs(d) <= d.radius
                    if table.usable((alpha, n, N)) and d.radius < abs(d):
                        diffs.append(float(abs(d)))
                        used.append(n)
        except (TailNotCertified, PrecisionExhausted) as exc:
            points.append(PointSummary(alpha, None if target is None else complex(target),
                                       None, None, None, "uncertified", str(exc)))
            continue
        if target is None:
            points.append(PointSummary(alpha, None, None, None, None, "inconclusive",
                                       f"no loop polynomial P_{N} for a target"))
            continue
        last = table.entries[(alpha, ns[-1], N)]
        disc = float(abs(last - target))
        tabs = float(abs(target))
        rel = disc / tabs if tabs else math.inf
        if exact:
            order, status = None, "exact"
            msg = "residual indistinguishable from the limit at every color"
        elif len(used) >= min_points and used[-1] >= 8 * used[0]:
            order, status = fit_decay_order(used, diffs), "ok"
        else:
            order, status = None, "inconclusive"
            msg = f"only {len(used)} resolvable colors"
        points.append(PointSummary(alpha, complex(target), order, disc, rel, status, msg))
    return ScanResult(table, N, points)


@dataclass
class BoundScan:
    maximum: float
    argmax: Optional[Tuple[complex, int]]
    at_boundary: bool
    uncertified: List[Tuple[complex, int, str]]
    per_color_max: Dict[int, float]


def uniform_bound_scan(grid: Iterable[complex], n_list: Sequence[int],
                       evaluate: Callable[[complex, int], PrecisionComplex]) -> BoundScan:
    """Empirical sup of |J_{K,n}(e^{alpha/n})| over grid x colors."""
    best, arg = 0.0, None
    per_n: Dict[int, float] = {}
    bad = []
    for alpha in grid:
        for n in n_list:
            try:
                v = float(abs(evaluate(complex(alpha), n)))
            except (TailNotCertified, PrecisionExhausted) as exc:
                bad.append((complex(alpha), n, str(exc)))
                continue
            per_n[n] = max(per_n.get(n, 0.0), v)
            if v > best:
                best, arg = v, (complex(alpha), n)
    top = max(per_n) if per_n else None
    boundary = bool(per_n) and len(per_n) > 1 and per_n[top] > max(
        v for n, v in per_n.items() if n != top) * (1 + 1e-9)
    return BoundScan(best, arg, boundary, bad, dict(sorted(per_n.items())))


@dataclass
class DerivativeReport:
    limits: List[Fraction]
    targets: List[Fraction]
    derivatives: Dict[int, List[Fraction]]
    passed: bool


def derivative_limit_check(jones: Mapping[int, LaurentPolynomial], delta: LaurentPolynomial,
                           m_max: int, n_list: Optional[Sequence[int]] = None) -> DerivativeReport:
    """Exact: the 1/n-fit constant term of m! [h^m] J_n(e^{h/n}) against m! [x^m] 1/Delta(e^x)."""
    n_list = list(n_list) if n_list is not None else list(range(1, m_max + 4))
    tables = [scaled_jones_taylor(jones[n], n, m_max) for n in n_list]
    loop = extract_loop_series(tables, m_max, delta)
    inv = inverse_alexander_series(delta, m_max)
    limits = [Fraction(loop.R[0][m]) * factorial(m) for m in range(m_max + 1)]
    targets = [Fraction(inv[m]) * factorial(m) for m in range(m_max + 1)]
    derivs = {t.n: [Fraction(t.coeffs[m]) * factorial(m) for m in range(m_max + 1)] for t in tables}
    return DerivativeReport(limits, targets, derivs, limits == targets)


# ---------------------------------------------------------------------------
# bound fits

@dataclass
class BoundFit:
    model: str
    constants: Dict[str, float]
    residual_stats: Dict[str, float]
    slack: float = 0.0
    notes: str = ""

    def to_json(self) -> dict:
        return {"model": self.model, "constants": self.constants,
                "residual_stats": self.residual_stats, "slack": self.slack, "notes": self.notes}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("model", "name", "value"))
        for k in sorted(self.constants):
            w.writerow((self.model, k, repr(self.constants[k])))
        for k in sorted(self.residual_stats):
            w.writerow((self.model, "residual_" + k, repr(self.residual_stats[k])))
        w.writerow((self.model, "slack", repr(self.slack)))
        return buf.getvalue()


def _lstsq(X: np.ndarray, y: np.ndarray, names: Sequence[str], model: str, notes: str = "") -> BoundFit:
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    stats = {"max": float(np.max(np.abs(res))), "rms": float(np.sqrt(np.mean(res ** 2)))}
    return BoundFit(model, {n: float(c) for n, c in zip(names, coef)}, stats,
                    slack=float(max(0.0, np.max(res))), notes=notes)


def norm_growth_fit(C: CyclotomicCoefficients, k_min: int = 6) -> BoundFit:
    """log ||C_{K,k}||_1 ~ C k + C' log k + c."""
    if C.k_max < k_min:
        raise ValueError(f"need coefficients up to k={k_min}")
    ks = [k for k in range(1, C.k_max + 1) if not C[k].is_zero()]
    norms = [float(C[k].l1_norm()) for k in ks]
    if len(set(norms)) <= 1:
        raise DegenerateData(f"cyclotomic norms are constant ({norms[:1] or [0]}); trivially bounded")
    k = np.asarray(ks, float)
    X = np.column_stack([k, np.log(k), np.ones_like(k)])
    fit = _lstsq(X, np.log(norms), ["C", "C_prime", "const"], "C*k + C'*log(k) + c")
    fit.notes = "consistent with bound" if fit.residual_stats["max"] < 1 else "residuals not small"
    return fit


def degree_growth_fit(C: CyclotomicCoefficients, k_min: int = 6) -> BoundFit:
    """maxdeg and mindeg of C_{K,k} against a k^2 + b k + c."""
    if C.k_max < k_min:
        raise ValueError(f"need coefficients up to k={k_min}")
    ks = [k for k in range(C.k_max + 1) if not C[k].is_zero()]
    hi = [C[k].maxdeg() for k in ks]
    lo = [C[k].mindeg() for k in ks]
    if not any(hi) and not any(lo):
        raise DegenerateData("all degrees are zero")
    k = np.asarray(ks, float)
    X = np.column_stack([k ** 2, k, np.ones_like(k)])
    up = _lstsq(X, np.asarray(hi, float), ["max_a", "max_b", "max_c"], "a*k^2 + b*k + c")
    down = _lstsq(X, np.asarray(lo, float), ["min_a", "min_b", "min_c"], "a*k^2 + b*k + c")
    return BoundFit("a*k^2 + b*k + c", {**up.constants, **down.constants},
                    {"max": max(up.residual_stats["max"], down.residual_stats["max"]),
                     "rms": max(up.residual_stats["rms"], down.residual_stats["rms"])},
                    slack=max(up.slack, down.slack))


def kernel_value(n: int, k: int, alpha: complex, prec: int = DEFAULT_PRECISION) -> PrecisionComplex:
    a = _mp_alpha(alpha, prec)
    qn = PrecisionComplex.exp(a, prec)
    top = qn + qn.reciprocal()
    out = PrecisionComplex(1, 0, prec)
    for j in range(1, k + 1):
        qj = PrecisionComplex.exp(a * j / n, prec)
        out = out * (top - qj - qj.reciprocal())
    return out


@dataclass
class KernelReport:
    fit: BoundFit
    slopes: Dict[Tuple[complex, int], float]
    n_variation: Dict[Tuple[complex, int], float]
    samples: Dict[Tuple[complex, int, int], float]
    max_variation: float
    passed: bool


def kernel_estimate_check(n_list: Sequence[int], k_list: Sequence[int], alpha_list: Sequence[complex],
                          variation_limit: float = 10.0, prec: int = DEFAULT_PRECISION) -> KernelReport:
    """Fit log|C_{n,k}(e^{alpha/n})| <= C1 k log|alpha| + C2 log k + C3 and check decay in k."""
    samples = {}
    for alpha in alpha_list:
        for n in n_list:
            for k in k_list:
                if 1 <= k < n:
                    samples[(complex(alpha), n, k)] = float(abs(kernel_value(n, k, alpha, prec)))
    keys = [key for key, v in samples.items() if v > 0]
    if not keys:
        raise DegenerateData("no nonzero kernel samples")
    X = np.array([[k * math.log(abs(a)), math.log(k), 1.0] for a, _, k in keys])
    y = np.log([samples[key] for key in keys])
    fit = _lstsq(X, y, ["C1", "C2", "C3"], "C1*k*log|alpha| + C2*log(k) + C3")
    slopes = {}
    for alpha in alpha_list:
        for n in n_list:
            pts = sorted((k, samples[(complex(alpha), n, k)]) for (a, m, k) in keys
                         if a == complex(alpha) and m == n)
            if len(pts) >= 2:
                slopes[(complex(alpha), n)] = float(np.polyfit([p[0] for p in pts],
                                                               np.log([p[1] for p in pts]), 1)[0])
    variation = {}
    for alpha in alpha_list:
        for k in k_list:
            vals = [samples[(complex(alpha), n, k)] for n in n_list if (complex(alpha), n, k) in samples]
            if len(vals) >= 2 and min(vals) > 0:
                variation[(complex(alpha), k)] = max(vals) / min(vals)
    worst = max(variation.values(), default=1.0)
    decays = all(s < 0 for s in slopes.values())
    c1_ok = all(fit.constants["C1"] * math.log(abs(a)) < 0 for a in alpha_list if abs(a) < 1)
    fit.notes = "consistent with bound" if decays and c1_ok else "violates fitted bound"
    return KernelReport(fit, slopes, variation, samples, worst,
                        decays and c1_ok and worst < variation_limit)


@dataclass
class RegionEstimate:
    C: float
    C2: float
    C1: float
    empty: bool
    radius_at_axis: float
    boundary: List[complex]

    def radius(self, re_abs: float) -> float:
        """Bound on |alpha| given |Re alpha|."""
        if self.empty:
            return 0.0
        return math.exp(-(self.C + self.C2 * re_abs) / self.C1)

    def contains(self, alpha: complex) -> bool:
        return not self.empty and abs(alpha) < self.radius(abs(alpha.real))

    def to_json(self) -> dict:
        return {"C": self.C, "C_double_prime": self.C2, "C1": self.C1, "empty": self.empty,
                "radius_at_axis": self.radius_at_axis,
                "inequality": "C + C''*|Re(alpha)| + C1*log|alpha| < 0",
                "boundary": [[z.real, z.imag] for z in self.boundary]}


def region_estimate(norm_fit: BoundFit, kernel_fit: BoundFit, degree_fit: Optional[BoundFit] = None,
                    directions: int = 16) -> RegionEstimate:
    """Solve C + C''|Re a| + C1 log|a| < 0 for the fitted constants.

    C'' is read off the quadratic degree growth when a degree fit is given.
    """
    C = norm_fit.constants.get("C", 0.0)
    C1 = kernel_fit.constants.get("C1", 0.0)
    C2 = 0.0
    if degree_fit is not None:
        C2 = max(abs(degree_fit.constants.get("max_a", 0.0)), abs(degree_fit.constants.get("min_a", 0.0)))
    if C1 <= 0:
        return RegionEstimate(C, C2, C1, True, 0.0, [])
    r0 = math.exp(-C / C1) if -C / C1 < 700 else math.inf
    if r0 == 0.0 or not math.isfinite(r0):
        return RegionEstimate(C, C2, C1, r0 == 0.0, r0, [])
    boundary = []
    for j in range(directions):
        theta = 2 * math.pi * j / directions
        c = abs(math.cos(theta))
        # g(r) = C + C2 r c + C1 log r is increasing in r; find its root
        lo, hi = 0.0, r0
        for _ in range(200):
            mid = (lo + hi) / 2
            if mid > 0 and C + C2 * mid * c + C1 * math.log(mid) < 0:
                lo = mid
            else:
                hi = mid
        boundary.append(lo * complex(math.cos(theta), math.sin(theta)))
    return RegionEstimate(C, C2, C1, False, r0, boundary)


def trivial_fit(model: str = "degenerate", **constants: float) -> BoundFit:
    """Stand-in fit for degenerate data (e.g. constant norms)."""
    return BoundFit(model, dict(constants), {"max": 0.0, "rms": 0.0}, notes="degenerate data")
