"""Command-line driver: ``mmrloop compute|verify|report``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import shutil
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import asymptotics as asy
from .cache import ArtifactCache, CacheMismatch, write_json
from .cyclotomic import (
    CyclotomicCoefficients,
    cyclotomic_from_jones,
    cyclotomic_taylor,
    integrality_check,
)
from .expansions import (
    LoopData,
    NoPolynomialInWindow,
    lemma_compare_check,
    lemma_compare_full,
    loop_data_from_jones,
    mmr_check,
    reconstruct_loop_polynomial,
)
from .knots import CONVENTIONS, STANDARD, BraidWord, NotAKnot, alexander, colored_jones, load_catalog
from .laurent import LaurentPolynomial
from .precision import PrecisionExhausted

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3
SUITES = ("mmr", "loops", "lemma21", "bounds", "asymptotics")
DECAY_TOLERANCE = 0.15


class ConfigError(ValueError):
    pass


class MissingArtifacts(RuntimeError):
    pass


class CheckFailed(RuntimeError):
    pass


@dataclass
class RunConfig:
    catalog_path: Optional[str] = None
    cache_dir: str = ".mmrloop-cache"
    k_max: int = 12
    series_order: int = 8
    loop_order: int = 1
    precision_bits: int = 128
    mirror_convention: str = STANDARD
    alphas: List[List[float]] = field(default_factory=lambda: [[0.0, 0.05]])
    n_list: List[int] = field(default_factory=lambda: [200, 400, 800, 1600, 3200])
    out: Optional[str] = None

    def validate(self) -> "RunConfig":
        for name in ("k_max", "series_order", "loop_order"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.precision_bits < 64:
            raise ConfigError("precision must be at least 64 bits")
        if self.mirror_convention not in CONVENTIONS:
            raise ConfigError(f"mirror convention must be one of {CONVENTIONS}")
        if not self.n_list or any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("n list must be strictly increasing")
        if self.n_list[0] < 1:
            raise ConfigError("colors must be >= 1")
        if any(complex(*a) == 0 for a in self.alphas):
            raise ConfigError("alpha = 0 is not a valid angle")
        return self

    @property
    def angles(self) -> List[complex]:
        return [complex(re, im) for re, im in self.alphas]

    @property
    def report_dir(self) -> Path:
        return Path(self.cache_dir) / "reports"


# ---------------------------------------------------------------------------
# argument parsing

def parse_alpha(text: str) -> List[float]:
    try:
        re, im = text.split(",")
        return [float(re), float(im)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must look like 're,im', got {text!r}") from None


def parse_colors(text: str) -> List[int]:
    """'50' or 'a..b' or 'a..b..step'."""
    try:
        parts = [int(p) for p in text.split("..")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad color range {text!r}") from None
    if len(parts) == 1:
        return parts
    if len(parts) in (2, 3):
        step = parts[2] if len(parts) == 3 else 1
        if step < 1:
            raise argparse.ArgumentTypeError("color step must be positive")
        return list(range(parts[0], parts[1] + 1, step))
    raise argparse.ArgumentTypeError(f"bad color range {text!r}")


_FLAG_FIELDS = {"catalog": "catalog_path", "cache": "cache_dir", "kmax": "k_max",
                "order": "series_order", "loops": "loop_order", "precision": "precision_bits",
                "mirror": "mirror_convention", "alpha": "alphas", "n": "n_list", "out": "out"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat JSON file of settings")
    common.add_argument("--catalog")
    common.add_argument("--cache")
    common.add_argument("--kmax", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("--loops", type=int)
    common.add_argument("--precision", type=int)
    common.add_argument("--mirror", choices=CONVENTIONS)
    common.add_argument("--alpha", type=parse_alpha, action="append")
    common.add_argument("--n", type=parse_colors, action="append")
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="mmrloop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("compute", parents=[common], help="compute and cache exact invariants")
    p.add_argument("knot")
    p.add_argument("what", choices=("jones", "alexander", "cyclotomic"))
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("knot")
    p.add_argument("suite", choices=SUITES)
    p = sub.add_parser("report", parents=[common], help="bundle per-knot verification results")
    p.add_argument("knots", nargs="*")
    p.add_argument("--all", action="store_true", help="every knot in the catalog")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the JSON file, then command-line flags."""
    values = asdict(RunConfig())
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a flat JSON object")
        for key, val in doc.items():
            name = _FLAG_FIELDS.get(key, key)
            if name not in values:
                raise ConfigError(f"unknown config key {key!r}")
            values[name] = val
    for flag, name in _FLAG_FIELDS.items():
        val = getattr(args, flag, None)
        if val is None:
            continue
        if flag == "n":
            val = [c for chunk in val for c in chunk]
        values[name] = val
    try:
        cfg = RunConfig(**values)
        cfg.alphas = [list(map(float, a)) for a in cfg.alphas]
        cfg.n_list = [int(n) for n in cfg.n_list]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    return cfg.validate()


# ---------------------------------------------------------------------------
# pipeline

class Pipeline:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.catalog = load_catalog(Path(cfg.catalog_path) if cfg.catalog_path else None)
        self.cache = ArtifactCache(Path(cfg.cache_dir))

    def braid(self, name: str) -> BraidWord:
        try:
            return self.catalog[name]
        except KeyError:
            raise ConfigError(f"knot {name!r} is not in the catalog") from None

    def _key(self, name: str, **params) -> dict:
        return {"knot": name, "braid": self.braid(name).to_json(),
                "convention": self.cfg.mirror_convention, **params}

    def jones(self, name: str, nmax: int, verify: bool = False) -> Dict[int, LaurentPolynomial]:
        b, conv = self.braid(name), self.cfg.mirror_convention
        payload = self.cache.get_or_compute(
            name, "jones", f"n{nmax}", self._key(name, nmax=nmax),
            lambda: {str(n): colored_jones(b, n, conv).to_json() for n in range(1, nmax + 1)},
            verify)
        return {int(n): LaurentPolynomial.from_json(p) for n, p in payload.items()}

    def alexander(self, name: str, verify: bool = False) -> LaurentPolynomial:
        b = self.braid(name)
        payload = self.cache.get_or_compute(name, "alexander", "all", self._key(name),
                                            lambda: alexander(b).to_json(), verify)
        return LaurentPolynomial.from_json(payload)

    def cyclotomic(self, name: str, verify: bool = False) -> CyclotomicCoefficients:
        k = self.cfg.k_max
        payload = self.cache.get_or_compute(
            name, "cyclotomic", f"k{k}", self._key(name, k_max=k),
            lambda: cyclotomic_from_jones(self.jones(name, k + 1), k, name,
                                          self.cfg.mirror_convention).to_json(), verify)
        return CyclotomicCoefficients.from_json(payload)

    def loop_data(self, name: str, order: int) -> LoopData:
        return loop_data_from_jones(self.jones(name, order + 3), self.alexander(name), order, knot=name)

    def write_report(self, name: str, suite: str, report: dict) -> Path:
        path = self.cfg.report_dir / name / f"{suite}.json"
        write_json(path, report)
        return path

    # --- suites -------------------------------------------------------

    def suite_mmr(self, name: str) -> dict:
        M = self.cfg.series_order
        loop = self.loop_data(name, M)
        rep = mmr_check(loop, M)
        out = {"order": M, "residuals": [str(r) for r in rep.residuals], "passed": rep.passed,
               "verified_order": M if rep.passed else rep.first_nonzero - 1,
               "held_out": {str(m): v for m, v in loop.fit.held_out.items()}}
        if not rep.passed:
            out["failure"] = f"MMR identity failed at x^{rep.first_nonzero}"
        return out

    def suite_loops(self, name: str) -> dict:
        delta = self.alexander(name)
        span = delta.maxdeg() - delta.mindeg()
        top = self.cfg.loop_order
        M = max(self.cfg.series_order,
                max(k + 2 * max(1, (k + 1) * span) + 4 for k in range(top + 1)))
        loop = self.loop_data(name, M)
        found, failure = {}, None
        for k in range(top + 1):
            try:
                found[k] = reconstruct_loop_polynomial(loop, k)
            except NoPolynomialInWindow as exc:
                failure = f"loop polynomial reconstruction failed: {exc}"
                break
        if failure is None and found.get(0) != LaurentPolynomial.constant(1):
            failure = f"loop polynomial P_0 = {found.get(0)} is not 1"
        loop.status = {"series_order": M, "loop_order": top}
        out = {"series_order": M, "loop_data": loop.to_json(),
               "P": {str(k): str(p) for k, p in found.items()}, "passed": failure is None}
        if failure:
            out["failure"] = failure
        return out

    def suite_lemma21(self, name: str) -> dict:
        A = self.cfg.series_order
        B = 3
        cyclo = self.cyclotomic(name)
        integ = integrality_check(cyclo)
        if not integ.passed:
            return {"passed": False,
                    "failure": f"integrality (Habiro) failed at k={integ.first_failure}"}
        loop = self.loop_data(name, A + B)
        idents = lemma_compare_check(cyclotomic_taylor(cyclo, 3), loop, A)
        full = lemma_compare_full(cyclo, loop, A, B)
        out = {"identities": [{"k": r.k, "order": r.order, "passed": r.passed,
                               "first_failure": r.first_failure} for r in idents],
               "bivariate": {"x_order": A, "h_order": B, "verified_x_order": full.verified_x_order,
                             "nonzero": full.residual_nonzero},
               "passed": all(r.passed for r in idents) and full.passed}
        bad = next((r for r in idents if not r.passed), None)
        if bad:
            out["failure"] = f"cyclotomic identity for R_{bad.k} failed at x^{bad.first_failure}"
        elif not full.passed:
            out["failure"] = f"two-variable identity failed at x^i h^j = {full.residual_nonzero[0]}"
        return out

    def suite_bounds(self, name: str) -> dict:
        cyclo = self.cyclotomic(name)
        integ = integrality_check(cyclo)
        out: dict = {"k_max": cyclo.k_max, "integrality": integ.passed}
        if not integ.passed:
            out.update(passed=False, failure=f"integrality (Habiro) failed at k={integ.first_failure}")
            return out
        try:
            norm = asy.norm_growth_fit(cyclo)
            out["norm_fit"] = norm.to_json()
        except asy.DegenerateData as exc:
            norm = asy.trivial_fit(C=0.0)
            out["norm_fit"] = {"degenerate": str(exc)}
        try:
            deg = asy.degree_growth_fit(cyclo)
            out["degree_fit"] = deg.to_json()
        except asy.DegenerateData as exc:
            deg = None
            out["degree_fit"] = {"degenerate": str(exc)}
        kern = asy.kernel_estimate_check([50, 100], list(range(1, 11)), [0.1, 0.05],
                                         prec=self.cfg.precision_bits)
        out["kernel_fit"] = kern.fit.to_json()
        out["kernel_max_variation"] = kern.max_variation
        region = asy.region_estimate(norm, kern.fit, deg)
        out["region"] = region.to_json()
        out["passed"] = kern.passed
        if not kern.passed:
            out["failure"] = "kernel estimate failed (no geometric decay in k)"
        d = self.cfg.report_dir / name
        d.mkdir(parents=True, exist_ok=True)
        fits = [f for f in (norm if "degenerate" not in out["norm_fit"] else None, deg, kern.fit) if f]
        (d / "bounds.csv").write_text("".join(f.to_csv() for f in fits))
        return out

    def suite_asymptotics(self, name: str) -> dict:
        N = self.cfg.loop_order
        loops = self.suite_loops(name)
        if not loops["passed"]:
            return {"passed": False, "failure": loops["failure"]}
        loop = LoopData.from_json(loops["loop_data"])
        cyclo = self.cyclotomic(name)
        prec = self.cfg.precision_bits
        scan = asy.convergence_scan(name, self.cfg.angles, self.cfg.n_list, N, loop,
                                    lambda a, n: asy.eval_cyclotomic(cyclo, a, n, prec), prec)
        d = self.cfg.report_dir / name
        d.mkdir(parents=True, exist_ok=True)
        (d / f"residuals.N{N}.csv").write_text(scan.table.to_csv())
        out = {"scan": scan.summary(), "expected_order": 1, "tolerance": DECAY_TOLERANCE}
        for p in scan.points:
            if p.status == "uncertified":
                raise asy.TailNotCertified(f"alpha={p.alpha}: {p.message}")
            if p.status == "exact":
                continue
            if p.status != "ok" or abs(p.decay_order - 1) > DECAY_TOLERANCE:
                got = "inconclusive" if p.decay_order is None else f"{p.decay_order:.3f}"
                out.update(passed=False, failure=f"convergence order at N={N}, alpha={p.alpha}: "
                                                 f"{got}, expected 1 +- {DECAY_TOLERANCE}")
                return out
        out["passed"] = True
        return out


# ---------------------------------------------------------------------------
# commands

def cmd_compute(pipe: Pipeline, knot: str, what: str) -> int:
    if what == "jones":
        J = pipe.jones(knot, pipe.cfg.k_max + 1, verify=True)
        print(f"{knot}: colored Jones n=1..{max(J)} cached")
    elif what == "alexander":
        print(f"{knot}: Delta = {pipe.alexander(knot, verify=True)}")
    else:
        C = pipe.cyclotomic(knot, verify=True)
        rep = integrality_check(C)
        if not rep.passed:
            raise CheckFailed(f"integrality (Habiro) failed at k={rep.first_failure}")
        print(f"{knot}: cyclotomic coefficients k=0..{C.k_max} cached, integral")
    return EXIT_PASS


def cmd_verify(pipe: Pipeline, knot: str, suite: str) -> int:
    report = getattr(pipe, f"suite_{suite}")(knot)
    report = {"knot": knot, "suite": suite, "config": _config_echo(pipe.cfg), **report}
    path = pipe.write_report(knot, suite, report)
    if pipe.cfg.out:
        shutil.copytree(path.parent, Path(pipe.cfg.out) / knot, dirs_exist_ok=True)
    status = "PASS" if report["passed"] else "FAIL"
    print(f"{knot} {suite}: {status} ({path})")
    if not report["passed"]:
        raise CheckFailed(report.get("failure", f"{suite} check failed"))
    return EXIT_PASS


def _config_echo(cfg: RunConfig) -> dict:
    return {"k_max": cfg.k_max, "series_order": cfg.series_order, "loop_order": cfg.loop_order,
            "precision_bits": cfg.precision_bits, "mirror_convention": cfg.mirror_convention,
            "alphas": cfg.alphas, "n_list": cfg.n_list}


REPORT_COLUMNS = ("knot", "delta", "k_max", "integrality", "mmr_order_verified", "loop_polynomials",
                  "norm_C", "kernel_C1", "degree_min_a", "region_radius")


def collect_row(pipe: Pipeline, knot: str) -> dict:
    rdir = pipe.cfg.report_dir / knot
    needed = {s: rdir / f"{s}.json" for s in ("mmr", "loops", "bounds")}
    missing = [s for s, p in needed.items() if not p.exists()]
    cyc = pipe.cache.path(knot, "cyclotomic", f"k{pipe.cfg.k_max}")
    alex = pipe.cache.path(knot, "alexander", "all")
    missing += [p.name for p in (cyc, alex) if not p.exists()]
    if missing:
        raise MissingArtifacts(f"{knot}: missing artifacts {', '.join(missing)}")
    rep = {s: json.loads(p.read_text()) for s, p in needed.items()}
    bounds = rep["bounds"]
    C = pipe.cyclotomic(knot)
    return {
        "knot": knot,
        "delta": str(pipe.alexander(knot)),
        "k_max": C.k_max,
        "integrality": integrality_check(C).passed,
        "mmr_order_verified": rep["mmr"]["verified_order"],
        "loop_polynomials": rep["loops"]["P"],
        "norm_C": bounds.get("norm_fit", {}).get("constants", {}).get("C"),
        "kernel_C1": bounds["kernel_fit"]["constants"]["C1"],
        "degree_min_a": bounds.get("degree_fit", {}).get("constants", {}).get("min_a"),
        "region_radius": bounds["region"]["radius_at_axis"],
    }


def cmd_report(pipe: Pipeline, knots: Sequence[str], out: Path) -> int:
    rows = [collect_row(pipe, k) for k in knots]
    bundle = {"schema": list(REPORT_COLUMNS), "config": _config_echo(pipe.cfg), "knots": rows}
    write_json(out / "report.json", bundle)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow([json.dumps(r[c], sort_keys=True) if isinstance(r[c], dict) else r[c]
                    for c in REPORT_COLUMNS])
    (out / "report.csv").write_text(buf.getvalue())
    print(f"report for {len(rows)} knot(s) written to {out}")
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        pipe = Pipeline(cfg)
        if args.command == "compute":
            return cmd_compute(pipe, args.knot, args.what)
        if args.command == "verify":
            return cmd_verify(pipe, args.knot, args.suite)
        knots = sorted(pipe.catalog) if args.all else list(args.knots)
        for k in knots:
            pipe.braid(k)
        out = Path(cfg.out) if cfg.out else Path(cfg.cache_dir) / "bundle"
        return cmd_report(pipe, knots, out)
    except (ConfigError, NotAKnot) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionExhausted, asy.TailNotCertified) as exc:
        print(f"precision/certification failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (CheckFailed, CacheMismatch, MissingArtifacts) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
