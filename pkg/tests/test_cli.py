import json
import math
import os

import numpy as np
import pytest

import helsonspec as hs
from helsonspec import UsageError
from helsonspec.cli import main, parse_config

# Small discretization flags shared by the CLI runs to keep tests quick.
FAST = ["--t-min", "1e-8", "--t-max", "1e8",
        "--panels-per-decade", "3", "--nodes-per-panel", "10"]


def run_cli(args, tmp_path, subdir="out"):
    out = tmp_path / subdir
    cache = tmp_path / "cache"
    code = main(list(args) + ["--out-dir", str(out), "--cache-dir", str(cache)])
    return code, out


class TestParseConfig:
    def test_curve_log_spacing(self):
        cfg = parse_config(["curve", "--a-min", "0.05", "--a-max", "2.0",
                            "--a-steps", "40"])
        assert cfg.command == "curve"
        assert cfg.a_steps == 40
        from helsonspec.cli import _a_values
        vals = _a_values(cfg)
        assert len(vals) == 40
        assert vals[0] == pytest.approx(0.05) and vals[-1] == pytest.approx(2.0)
        ratios = np.diff(np.log(vals))
        assert np.allclose(ratios, ratios[0])  # log-spaced

    def test_critical_a_tolerance(self):
        cfg = parse_config(["critical-a", "--tol", "0.02"])
        assert cfg.command == "critical-a" and cfg.tol == 0.02

    def test_helson_a_zero_rejected(self):
        with pytest.raises(UsageError):
            parse_config(["matrix", "--family", "helson", "--a", "0"])

    def test_unknown_key_in_config_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("nonsense_key = 3\n")
        with pytest.raises(UsageError):
            parse_config(["spectrum", "--config", str(path)])

    def test_file_values_and_flag_override(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# comment\nfamily = mult-hilbert\nN = 32\nt-min = 1e-6\n")
        cfg = parse_config(["spectrum", "--config", str(path), "--N", "64"])
        assert cfg.family == "mult-hilbert"
        assert cfg.N == 64           # flag wins
        assert cfg.t_min == 1e-6     # file value survives

    def test_config_echo_roundtrip(self, tmp_path):
        cfg = parse_config(["spectrum", "--family", "mult-hilbert", "--N", "64"])
        echoed = cfg.canonical_dict()
        path = tmp_path / "echo.cfg"
        path.write_text("".join(f"{k} = {v}\n" for k, v in echoed.items()
                                if k != "command"))
        again = parse_config(["spectrum", "--config", str(path)])
        assert again.canonical_dict() == echoed

    def test_bad_value_type(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("N = not_an_int\n")
        with pytest.raises(UsageError):
            parse_config(["spectrum", "--config", str(path)])


class TestSpectrumCommand:
    def test_mult_hilbert_outputs(self, tmp_path):
        code, out = run_cli(["spectrum", "--family", "mult-hilbert", "--N", "64"],
                            tmp_path)
        assert code == 0
        csvs = sorted(out.glob("spectrum-*.csv"))
        jsons = sorted(out.glob("spectrum-*.json"))
        assert len(csvs) == 1 and len(jsons) == 1
        lines = csvs[0].read_text().splitlines()
        assert lines[0] == "index,eigenvalue"
        assert len(lines) == 1 + 63  # N=64 truncation on indices 2..64
        doc = json.loads(jsons[0].read_text())
        assert doc["results"]["count_above_pi"] == 0
        assert doc["results"]["count_below_zero"] == 0
        assert doc["version"] == hs.__version__
        assert doc["config"]["family"] == "mult-hilbert"

    def test_cache_hit_identical_bytes(self, tmp_path, capsys):
        args = ["spectrum", "--family", "mult-hilbert", "--N", "32"]
        code1, out1 = run_cli(args, tmp_path, "out1")
        first = {p.name: p.read_bytes() for p in out1.iterdir()}
        code2, out2 = run_cli(args, tmp_path, "out2")
        second = {p.name: p.read_bytes() for p in out2.iterdir()}
        assert code1 == code2 == 0
        assert first == second
        assert "cache hit" in capsys.readouterr().err

    def test_recompute_determinism(self, tmp_path):
        args = ["spectrum", "--family", "helson", "--a", "0.5", "--N", "32"]
        _, out1 = run_cli(args, tmp_path, "out1")
        # separate cache: forces a genuine recomputation
        out2 = tmp_path / "out2"
        main(args + ["--out-dir", str(out2), "--cache-dir", str(tmp_path / "cache2")])
        first = {p.name: p.read_bytes() for p in out1.iterdir()}
        second = {p.name: p.read_bytes() for p in out2.iterdir()}
        assert first == second

    def test_csv_renders_roundtrip_exact(self, tmp_path):
        # 17 significant digits make the decimal rendering roundtrip-exact
        _, out = run_cli(["spectrum", "--family", "mult-hilbert", "--N", "16"],
                         tmp_path)
        (csv,) = out.glob("spectrum-*.csv")
        (js,) = out.glob("spectrum-*.json")
        doc = json.loads(js.read_text())
        csv_vals = [float(line.split(",")[1])
                    for line in csv.read_text().splitlines()[1:]]
        assert csv_vals == doc["results"]["eigenvalues"]

    def test_format_csv_only(self, tmp_path):
        code, out = run_cli(["spectrum", "--family", "mult-hilbert", "--N", "16",
                             "--format", "csv"], tmp_path)
        assert code == 0
        assert len(list(out.glob("*.csv"))) == 1
        assert len(list(out.glob("*.json"))) == 0


class TestOtherCommands:
    def test_matrix_binary_dump(self, tmp_path):
        code, out = run_cli(["matrix", "--family", "carleman"] + FAST, tmp_path)
        assert code == 0
        (hspc,) = out.glob("matrix-*.hspc")
        m = hs.load_matrix(hspc)
        assert m.dim == 16 * 3 * 10
        (js,) = out.glob("matrix-*.json")
        doc = json.loads(js.read_text())
        assert doc["results"]["dim"] == m.dim

    def test_residual_single_line(self, tmp_path):
        code, out = run_cli(["residual", "--k", "0.5"], tmp_path)
        assert code == 0
        (csv,) = out.glob("residual-*.csv")
        lines = csv.read_text().splitlines()
        assert lines[0] == "k,residual"
        assert len(lines) == 2
        assert float(lines[1].split(",")[1]) <= 1e-3

    def test_equivalence_command(self, tmp_path):
        code, out = run_cli(["equivalence", "--a", "1.0", "--N", "128"], tmp_path)
        assert code == 0
        (js,) = out.glob("equivalence-*.json")
        doc = json.loads(js.read_text())
        assert doc["results"]["pair_disagreement"] <= 1e-10

    def test_curve_csv_header(self, tmp_path):
        code, out = run_cli(["curve", "--a-min", "0.5", "--a-max", "1.0",
                             "--a-steps", "2", "--N", "64"] + FAST, tmp_path)
        assert code == 0
        (csv,) = out.glob("curve-*.csv")
        lines = csv.read_text().splitlines()
        assert lines[0] == ("a,lambda_nystrom,lambda_trunc_N,"
                            "lambda_lower_bound,lambda_upper_bound,above_pi")
        assert len(lines) == 3

    def test_report_command(self, tmp_path):
        code, out = run_cli(["report", "--family", "hstar"] + FAST, tmp_path)
        assert code == 0
        (js,) = out.glob("report-*.json")
        doc = json.loads(js.read_text())
        assert "multiplicity" in doc["results"]
        (csv,) = out.glob("report-*.csv")
        assert csv.read_text().splitlines()[0] == "bin,lower,upper,count"


class TestExitCodes:
    def test_usage_error_is_2_and_writes_nothing(self, tmp_path):
        out = tmp_path / "out"
        code = main(["matrix", "--family", "helson", "--a", "0",
                     "--out-dir", str(out)])
        assert code == 2
        assert not out.exists()

    def test_unknown_command_is_2(self):
        assert main(["frobnicate"]) == 2

    def test_bad_flag_value_is_2(self):
        assert main(["spectrum", "--family", "nope"]) == 2

    def test_cache_env_var_used(self, tmp_path, monkeypatch):
        cache = tmp_path / "envcache"
        monkeypatch.setenv("HELSON_CACHE_DIR", str(cache))
        out = tmp_path / "out"
        code = main(["spectrum", "--family", "mult-hilbert", "--N", "16",
                     "--out-dir", str(out)])
        assert code == 0
        assert list(cache.glob("*.json"))
