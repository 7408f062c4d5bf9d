import io
import json
import math

import pytest

from lisdist import cli


def run_cli(argv, tmp_path=None, env=None, monkeypatch=None):
    """Invoke main() with stdout captured; returns (exit code, text)."""
    buf = io.StringIO()
    import sys
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def run_to_file(argv, tmp_path, name):
    out = tmp_path / name
    code = cli.main(argv + ["-o", str(out)])
    return code, out.read_text()


class TestTw:
    def test_grid_and_monotonicity(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LISDIST_CACHE", str(tmp_path / "cache"))
        code, text = run_to_file(["tw", "--tmin", "-6", "--tmax", "4",
                                  "--step", "0.05"], tmp_path, "tw.csv")
        assert code == 0
        rows = [ln for ln in text.splitlines()
                if ln and not ln.startswith("#") and not ln.startswith("t,")]
        assert len(rows) == 201
        Fs = [float(r.split(",")[1]) for r in rows]
        assert all(b > a for a, b in zip(Fs, Fs[1:]))
        footer = json.loads(text.splitlines()[-1].split("# footer=")[1])
        assert abs(footer["mean"] - (-1.7711)) <= 5e-3
        assert abs(footer["variance"] - 0.8132) <= 5e-3

    def test_cache_does_not_change_results(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LISDIST_CACHE", str(tmp_path / "cache"))
        args = ["tw", "--tmin", "-2", "--tmax", "2", "--step", "0.5"]
        _, first = run_to_file(args, tmp_path, "a.csv")          # populates cache
        _, second = run_to_file(args, tmp_path, "b.csv")         # reads cache
        _, nocache = run_to_file(args + ["--no-cache"], tmp_path, "c.csv")
        assert first == second == nocache

    def test_json_document(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LISDIST_CACHE", str(tmp_path / "cache"))
        code, text = run_to_file(["tw", "--tmin", "-2", "--tmax", "2",
                                  "--step", "1.0", "--json"], tmp_path, "tw.json")
        doc = json.loads(text)
        assert doc["schema"] == "lisdist/1"
        assert doc["params"]["tmin"] == -2.0
        assert len(doc["rows"]) == 5


class TestExact:
    def test_single_value(self, tmp_path):
        code, text = run_to_file(["exact", "--N", "5", "--n", "3"], tmp_path, "e.csv")
        assert code == 0
        assert "103/120" in text

    def test_trivial(self, tmp_path):
        code, text = run_to_file(["exact", "--N", "1", "--n", "1"], tmp_path, "e.csv")
        assert "1/1" in text

    def test_all_n_monotone(self, tmp_path):
        code, text = run_to_file(["exact", "--N", "6", "--all-n"], tmp_path, "e.csv")
        vals = [float(ln.split(",")[2]) for ln in text.splitlines()
                if ln and ln[0].isdigit()]
        assert len(vals) == 6
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == 1.0

    def test_usage_error(self, tmp_path):
        code, _ = run_cli(["exact", "--N", "5"])
        assert code == cli.EXIT_USAGE

    def test_capacity_error(self, tmp_path):
        code, _ = run_cli(["exact", "--N", "70", "--n", "3"])
        assert code == cli.EXIT_DOMAIN


class TestPoisson:
    def test_routes_agree(self, tmp_path):
        code, text = run_to_file(["poisson", "--n", "1", "--lambda", "1"],
                                 tmp_path, "p.csv")
        assert code == 0
        footer = json.loads(text.splitlines()[-1].split("# footer=")[1])
        assert all(v <= 1e-9 for v in footer["deltas"].values())

    def test_zero_lambda_rejected(self):
        code, _ = run_cli(["poisson", "--n", "1", "--lambda", "0.0"])
        assert code == cli.EXIT_DOMAIN

    def test_single_route(self, tmp_path):
        code, text = run_to_file(["poisson", "--n", "2", "--lambda", "1",
                                  "--routes", "det"], tmp_path, "p.csv")
        footer = json.loads(text.splitlines()[-1].split("# footer=")[1])
        assert set(footer["values"]) == {"det"}

    def test_sweep_table(self, tmp_path):
        code, text = run_to_file(["poisson", "--n", "1", "--lambda", "4",
                                  "--sweep-n", "1:8"], tmp_path, "p.csv")
        assert code == 0
        rows = [ln.split(",") for ln in text.splitlines()
                if ln and ln[0].isdigit()]
        assert len(rows) == 8
        phis = [float(r[2]) for r in rows]
        assert all(b >= a for a, b in zip(phis, phis[1:]))
        kaps = [float(r[4]) for r in rows]
        assert all(0.0 < k <= 1.0 + 1e-12 for k in kaps)


class TestSampling:
    def test_deterministic_rerun(self, tmp_path):
        args = ["sample", "--N", "50", "--samples", "100", "--seed", "7"]
        _, a = run_to_file(args, tmp_path, "a.csv")
        _, b = run_to_file(args, tmp_path, "b.csv")
        assert a == b

    def test_dump_format(self, tmp_path):
        dump = tmp_path / "raw.txt"
        code, _ = run_to_file(["sample", "--N", "20", "--samples", "10",
                               "--seed", "1", "--dump", str(dump)], tmp_path, "s.csv")
        lines = dump.read_text().splitlines()
        header = json.loads(lines[0])
        assert header["N"] == 20 and header["seed"] == 1
        assert sum(header["shard_map"]) == 10
        assert len(lines) == 11
        assert all(1 <= int(v) <= 20 for v in lines[1:])

    def test_hammersley(self, tmp_path):
        code, text = run_to_file(["hammersley", "--lambda", "9", "--samples",
                                  "500", "--seed", "3"], tmp_path, "h.csv")
        assert code == 0
        footer = json.loads(text.splitlines()[-1].split("# footer=")[1])
        assert 3.0 <= footer["mean"] <= 8.0


class TestRatesAndEquilibrium:
    def test_rates_at_two(self, tmp_path):
        code, text = run_to_file(["rates", "--x", "2"], tmp_path, "r.csv")
        footer = json.loads(text.splitlines()[-1].split("# footer=")[1])
        assert footer["values"] == {"U": 0.0, "H": 0.0, "I": 0.0}

    def test_rates_domain(self):
        assert run_cli(["rates", "--x", "-1"])[0] == cli.EXIT_DOMAIN

    def test_rates_sweep(self, tmp_path):
        code, text = run_to_file(["rates", "--x", "0.5", "--x-max", "3.0",
                                  "--x-step", "0.5"], tmp_path, "r.csv")
        rows = [ln.split(",") for ln in text.splitlines()
                if ln and ln[0].isdigit()]
        assert len(rows) == 6
        # I is NaN below 2, U/H are NaN above 2
        assert rows[0][2] == "nan" and rows[-1][1] == "nan"

    def test_regime_verdict(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LISDIST_CACHE", str(tmp_path / "cache"))
        code, text = run_to_file(["regime", "--n", "100", "--lambda", "2500",
                                  "--json"], tmp_path, "g.json")
        doc = json.loads(text)
        assert doc["regime"] == "Critical"
        assert set(doc["thresholds"]) == {"delta5", "delta6", "delta7",
                                          "M5", "M6", "M7"}
        assert doc["log_phi_estimate"] is not None

    def test_equilibrium_gamma2(self, tmp_path):
        code, text = run_to_file(["equilibrium", "--gamma", "2", "--json"],
                                 tmp_path, "eq.json")
        doc = json.loads(text)
        assert doc["theta_c"] == pytest.approx(math.pi / 2, rel=1e-12)
        assert doc["lagrange_l"] == pytest.approx(math.log(2) - 1, rel=1e-12)
        assert doc["normalization"] == pytest.approx(1.0, abs=1e-10)


class TestVerify:
    def test_quick_passes(self, tmp_path):
        code, text = run_to_file(["verify", "--quick"], tmp_path, "v.txt")
        assert code == 0
        assert "PASS overall" in text
        assert "FAIL" not in text.replace("PASS overall", "")

    def test_quick_json(self, tmp_path):
        code, text = run_to_file(["verify", "--quick", "--json"], tmp_path, "v.json")
        doc = json.loads(text)
        assert doc["pass"] is True
        assert all(set(c) == {"check", "value", "tolerance", "pass"}
                   for c in doc["checks"])


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == cli.EXIT_USAGE
