import json
import subprocess
import sys

import pytest

from mmrloop.cache import digest
from mmrloop.cli import (
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_PRECISION,
    EXIT_USAGE,
    build_parser,
    main,
    parse_colors,
    resolve_config,
)
from mmrloop.laurent import LaurentPolynomial as L


@pytest.fixture
def run(tmp_path):
    cache = tmp_path / "cache"

    def _run(*argv):
        return main([*argv, "--cache", str(cache)])

    _run.cache = cache
    _run.tmp = tmp_path
    return _run


def read_payload(path):
    return json.loads(path.read_text())["payload"]


class TestCompute:
    def test_unknot_jones(self, run):
        assert run("compute", "unknot", "jones", "--kmax", "4") == EXIT_PASS
        payload = read_payload(run.cache / "unknot" / "jones.n5.json")
        assert all(L.from_json(p) == L.constant(1) for p in payload.values()) and len(payload) == 5

    def test_figure_eight_cyclotomic(self, run):
        assert run("compute", "4_1", "cyclotomic", "--kmax", "6") == EXIT_PASS
        payload = read_payload(run.cache / "4_1" / "cyclotomic.k6.json")
        assert all(L.from_json(c) == L.constant(1) for c in payload["coeffs"])

    def test_recompute_is_idempotent(self, run):
        assert run("compute", "3_1", "alexander") == EXIT_PASS
        before = (run.cache / "3_1" / "alexander.all.json").read_bytes()
        assert run("compute", "3_1", "alexander") == EXIT_PASS
        assert (run.cache / "3_1" / "alexander.all.json").read_bytes() == before

    def test_flipped_convention_is_a_cache_mismatch(self, run, capsys):
        assert run("compute", "3_1", "jones", "--kmax", "3") == EXIT_PASS
        assert run("compute", "3_1", "jones", "--kmax", "3", "--mirror", "mirrored") == EXIT_FAIL
        assert "convention" in capsys.readouterr().err

    def test_corrupt_cache(self, run, capsys):
        run("compute", "3_1", "jones", "--kmax", "3")
        path = run.cache / "3_1" / "jones.n4.json"
        doc = json.loads(path.read_text())
        doc["payload"]["2"] = L.constant(7).to_json()
        path.write_text(json.dumps(doc))
        assert run("compute", "3_1", "jones", "--kmax", "3") == EXIT_FAIL
        assert "hash" in capsys.readouterr().err

    def test_stale_but_consistent_cache_is_caught_on_recompute(self, run):
        run("compute", "3_1", "jones", "--kmax", "3")
        path = run.cache / "3_1" / "jones.n4.json"
        doc = json.loads(path.read_text())
        doc["payload"]["2"] = L.constant(7).to_json()
        doc["hash"] = digest(doc["payload"])
        path.write_text(json.dumps(doc))
        assert run("compute", "3_1", "jones", "--kmax", "3") == EXIT_FAIL


class TestVerify:
    @pytest.mark.parametrize("suite", ["mmr", "loops", "lemma21", "bounds", "asymptotics"])
    def test_unknot_passes_everything(self, run, suite):
        assert run("verify", "unknot", suite) == EXIT_PASS
        report = json.loads((run.cache / "reports" / "unknot" / f"{suite}.json").read_text())
        assert report["passed"] is True

    def test_figure_eight_mmr(self, run):
        assert run("verify", "4_1", "mmr") == EXIT_PASS
        report = json.loads((run.cache / "reports" / "4_1" / "mmr.json").read_text())
        assert report["residuals"] == ["0"] * 9

    def test_figure_eight_asymptotics(self, run, tmp_path):
        out = tmp_path / "out"
        assert run("verify", "4_1", "asymptotics", "--out", str(out)) == EXIT_PASS
        assert (out / "4_1" / "residuals.N1.csv").read_text().startswith("knot,alpha_re,alpha_im")

    def test_outside_region_is_a_certification_failure(self, run, capsys):
        code = run("verify", "4_1", "asymptotics", "--alpha", "3,0", "--n", "200", "--n", "400",
                   "--n", "800", "--n", "1600")
        assert code == EXIT_PRECISION
        assert "ratio" in capsys.readouterr().err

    def test_failure_names_the_check(self, run, capsys):
        assert run("compute", "4_1", "cyclotomic", "--kmax", "6") == EXIT_PASS
        path = run.cache / "4_1" / "cyclotomic.k6.json"
        doc = json.loads(path.read_text())
        doc["payload"]["coeffs"][3] = L({0: "1/2"}).to_json()
        doc["hash"] = digest(doc["payload"])
        path.write_text(json.dumps(doc))
        assert run("verify", "4_1", "bounds", "--kmax", "6") == EXIT_FAIL
        assert "integrality (Habiro) failed at k=3" in capsys.readouterr().err


class TestReport:
    def test_empty_bundle(self, run):
        out = run.tmp / "bundle"
        assert run("report", "--out", str(out)) == EXIT_PASS
        bundle = json.loads((out / "report.json").read_text())
        assert bundle["knots"] == [] and "knot" in bundle["schema"]
        assert (out / "report.csv").read_text().startswith("knot,delta,")

    def test_missing_artifacts(self, run, capsys):
        assert run("report", "3_1") == EXIT_FAIL
        assert "missing artifacts" in capsys.readouterr().err

    def test_full_catalog_is_deterministic(self, run):
        names = ["unknot", "3_1", "4_1", "5_2", "6_1"]
        for name in names:
            for suite in ("mmr", "loops", "bounds"):
                assert run("verify", name, suite) == EXIT_PASS
        out = run.tmp / "bundle"
        assert run("report", "--all", "--out", str(out)) == EXIT_PASS
        first = (out / "report.json").read_bytes(), (out / "report.csv").read_bytes()
        bundle = json.loads(first[0])
        assert [r["knot"] for r in bundle["knots"]] == sorted(names)
        assert all(set(r) == set(bundle["schema"]) for r in bundle["knots"])
        assert all(r["integrality"] and r["mmr_order_verified"] == 8 for r in bundle["knots"])
        assert len(first[1].decode().splitlines()) == 6
        assert run("report", "--all", "--out", str(out)) == EXIT_PASS
        assert ((out / "report.json").read_bytes(), (out / "report.csv").read_bytes()) == first


class TestConfig:
    def test_color_ranges(self):
        assert parse_colors("7") == [7]
        assert parse_colors("10..40..10") == [10, 20, 30, 40]
        assert parse_colors("3..5") == [3, 4, 5]

    def test_precedence(self, tmp_path):
        cfg_file = tmp_path / "c.json"
        cfg_file.write_text(json.dumps({"kmax": 6, "order": 5, "precision_bits": 96}))
        args = build_parser().parse_args(["verify", "3_1", "mmr", "--config", str(cfg_file), "--kmax", "5"])
        cfg = resolve_config(args)
        assert (cfg.k_max, cfg.series_order, cfg.precision_bits, cfg.loop_order) == (5, 5, 96, 1)

    @pytest.mark.parametrize("extra", [["--precision", "32"], ["--n", "50", "--n", "20"],
                                       ["--kmax", "0"], ["--alpha", "0,0"]])
    def test_invalid_values(self, run, extra):
        assert run("verify", "3_1", "mmr", *extra) == EXIT_USAGE

    def test_unknown_config_key(self, run, tmp_path):
        cfg_file = tmp_path / "c.json"
        cfg_file.write_text(json.dumps({"colour": 3}))
        assert run("verify", "3_1", "mmr", "--config", str(cfg_file)) == EXIT_USAGE

    def test_unknown_knot(self, run):
        assert run("compute", "9_42", "jones") == EXIT_USAGE

    def test_malformed_flag(self, run):
        with pytest.raises(SystemExit) as exc:
            run("verify", "3_1", "mmr", "--alpha", "0.1")
        assert exc.value.code == EXIT_USAGE


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mmrloop", "compute", "3_1", "alexander",
                           "--cache", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and "q - 1 + q^-1" in proc.stdout
