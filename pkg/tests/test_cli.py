"""Command-line interface: subcommands, config handling, exit codes, output
formats, and determinism."""

import argparse
import json
import shutil
import subprocess

import numpy as np
import pytest

import isocert.cli as cli
from isocert.checker import ConditionSpec, check_condition
from isocert.cli import ConfigError, RunConfig, _dump_json, _parse_range, main
from isocert.convex import CostFunction
from isocert.entropy import log_entropy
from isocert.measure1d import builtin_measure


def read_text(path):
    return path.read_bytes().decode("utf-8")


class TestJsonDump:
    def test_non_finite_floats(self):
        out = _dump_json({"a": float("nan"), "b": float("inf"), "c": float("-inf")})
        assert out == '{"a":null,"b":"inf","c":"-inf"}'

    def test_seventeen_significant_digits(self):
        assert _dump_json(0.1) == "0.10000000000000001"
        assert _dump_json(1.0) == "1"

    def test_key_order_is_insertion_order(self):
        assert _dump_json({"zeta": 1, "alpha": 2}) == '{"zeta":1,"alpha":2}'

    def test_scalars_and_containers(self):
        assert _dump_json(True) == "true"
        assert _dump_json(None) == "null"
        assert _dump_json(np.int64(3)) == "3"
        assert _dump_json([1, (2.5, "x")]) == '[1,[2.5,"x"]]'
        assert _dump_json(np.array([1.0, 2.0])) == "[1,2]"

    def test_string_escaping(self):
        assert _dump_json('a"b\n\t') == '"a\\"b\\n\\u0009"'

    def test_unserializable_type_raises(self):
        with pytest.raises(TypeError):
            _dump_json(object())

    def test_output_is_standard_json(self):
        text = _dump_json({"x": [1.5, None, True], "y": "s"})
        assert json.loads(text) == {"x": [1.5, None, True], "y": "s"}


class TestParseRange:
    def test_three_part_range(self):
        assert _parse_range("0:10:2000", "grid") == (0.0, 10.0, 2000)

    def test_two_part_range(self):
        assert _parse_range("-3:4.5", "support", n_required=False) == (-3.0, 4.5)

    @pytest.mark.parametrize("bad", ["0:10", "a:b:c", "5:1:10", "0:1:1", "1:2:3:4"])
    def test_bad_three_part(self, bad):
        with pytest.raises(ConfigError):
            _parse_range(bad, "grid")

    @pytest.mark.parametrize("bad", ["1", "1:2:3", "x:y"])
    def test_bad_two_part(self, bad):
        with pytest.raises(ConfigError):
            _parse_range(bad, "support", n_required=False)


class TestConfigFile:
    def test_both_line_forms_and_comments(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text(
            "# a comment\n"
            "measure exp\n"
            "K = 3.5\n"
            "n 4096  # trailing comment\n"
            "\n"
            "t-min = 1e-10\n"
        )
        cfg = RunConfig.from_sources(str(cfg_file), argparse.Namespace())
        assert cfg.measure == "exp"
        assert cfg.K == 3.5
        assert cfg.n == 4096
        assert cfg.t_min == 1e-10

    def test_flags_override_config(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("K = 3.5\nmeasure exp\n")
        ns = argparse.Namespace(K=5.0)
        cfg = RunConfig.from_sources(str(cfg_file), ns)
        assert cfg.K == 5.0
        assert cfg.measure == "exp"

    def test_unknown_key(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("frobnicate = 1\n")
        with pytest.raises(ConfigError):
            RunConfig.from_sources(str(cfg_file), argparse.Namespace())

    def test_bad_numeric_value(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("K = banana\n")
        with pytest.raises(ConfigError):
            RunConfig.from_sources(str(cfg_file), argparse.Namespace())

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            RunConfig.from_sources("/nonexistent/run.cfg", argparse.Namespace())

    def test_config_error_exit_code_through_main(self, tmp_path, capsys):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("frobnicate = 1\n")
        assert main(["check", "--config", str(cfg_file)]) == 2
        assert "error:" in capsys.readouterr().err


class TestConjugateCommand:
    def test_closed_form_dual_csv(self, tmp_path):
        out = tmp_path / "dual.csv"
        rc = main(["conjugate", "--cost", "c:1:3", "--grid", "0:10:2000", "--out", str(out)])
        assert rc == 0
        lines = read_text(out).strip().split("\n")
        assert lines[0] == "x,c_star"
        assert len(lines) == 2001
        xs = np.array([float(l.split(",")[0]) for l in lines[1:]])
        got = np.array([float(l.split(",")[1]) for l in lines[1:]])
        # the dual of c_{1,3} has exponent beta = 3/2
        beta = 1.5
        want = np.where(xs <= 1.0, xs * xs / 2.0, xs ** beta / beta + (beta - 2.0) / (2.0 * beta))
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_sampled_cost_dual(self, tmp_path):
        out = tmp_path / "dual.csv"
        rc = main(["conjugate", "--cost", "expr:x^2/2", "--grid", "0:5:500", "--out", str(out)])
        assert rc == 0
        lines = read_text(out).strip().split("\n")
        ys = np.array([float(l.split(",")[0]) for l in lines[1:]])
        got = np.array([float(l.split(",")[1]) for l in lines[1:]])
        # x^2/2 is self-dual up to sampling error on the slope grid
        assert np.allclose(got, ys * ys / 2.0, atol=2e-3, rtol=1e-3)

    def test_stdout_default(self, capsys):
        assert main(["conjugate", "--grid", "0:1:5"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("x,c_star\n")

    def test_negative_grid_rejected(self, capsys):
        # equals form: a leading '-' in a separate token looks like a flag
        assert main(["conjugate", "--grid=-1:1:5"]) == 2
        assert "nonnegative" in capsys.readouterr().err


class TestProfileCommand:
    def test_two_sided_profile_csv(self, tmp_path):
        out = tmp_path / "prof.csv"
        rc = main(["profile", "--measure", "gauss", "--n", "4096",
                   "--t-grid", "0.1:0.5:3", "--out", str(out)])
        assert rc == 0
        lines = read_text(out).strip().split("\n")
        assert lines[0] == "t,u,v,tilde_I"
        assert len(lines) == 4
        t, u, v, ii = (np.array(col) for col in zip(*(map(float, l.split(",")) for l in lines[1:])))
        assert u[0] == pytest.approx(-1.2815515655446004, abs=1e-4)
        assert v[0] == pytest.approx(+1.2815515655446004, abs=1e-4)
        assert ii[-1] == pytest.approx(0.3989422804014327, abs=1e-4)  # peak density

    def test_ball_profile_csv_starts_at_zero(self, tmp_path):
        out = tmp_path / "prof.csv"
        rc = main(["profile", "--profile-kind", "if", "--measure", "gauss", "--n", "4096",
                   "--entropy", "log", "--grid", "0:8:40", "--out", str(out)])
        assert rc == 0
        lines = read_text(out).strip().split("\n")
        assert lines[0] == "r,s,I_F"
        first = [float(p) for p in lines[1].split(",")]
        assert first == [0.0, 1.0, 0.0]

    def test_bad_t_grid_rejected(self, capsys):
        assert main(["profile", "--t-grid", "0.1:0.9:5"]) == 2
        assert "t_grid" in capsys.readouterr().err


class TestCheckCommand:
    def test_finite_verdict_exits_zero(self, tmp_path):
        out = tmp_path / "check.json"
        rc = main(["check", "--measure", "gauss", "--entropy", "log",
                   "--cost", "quadratic:0.5", "--K", "2", "--n", "8192", "--out", str(out)])
        assert rc == 0
        payload = json.loads(read_text(out))
        assert payload["verdict"] == "FINITE"
        assert payload["delta"] == 0.5

    def test_divergent_verdict_also_exits_zero(self, tmp_path):
        out = tmp_path / "check.json"
        rc = main(["check", "--measure", "exp", "--entropy", "log",
                   "--cost", "quadratic:1", "--n", "8192", "--out", str(out)])
        assert rc == 0
        assert json.loads(read_text(out))["verdict"] == "DIVERGENT_LIKELY"

    def test_inconclusive_verdict_exits_three(self, tmp_path, monkeypatch, capsys):
        mu = builtin_measure("gauss", n=4096)
        grid = np.linspace(0.0, 2.0, 257)
        cost = CostFunction.from_samples(grid, grid * grid / 2.0)
        spec = ConditionSpec(measure=mu, F=log_entropy(), cost=cost, delta=0.5,
                             K=2.0, form="general")
        report = check_condition(spec)
        assert report.verdict == "INCONCLUSIVE"  # cost grid too short to trust
        monkeypatch.setattr(cli, "check_condition", lambda s, n_per_decade=256: report)
        rc = main(["check", "--measure", "gauss"])
        assert rc == 3
        assert json.loads(capsys.readouterr().out)["verdict"] == "INCONCLUSIVE"

    def test_unknown_measure_exits_two(self, capsys):
        assert main(["check", "--measure", "banana"]) == 2
        assert "unknown measure" in capsys.readouterr().err

    def test_unparsable_expression_exits_two(self, capsys):
        assert main(["check", "--measure", "expr:abs(x"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_argparse_rejects_unknown_choice(self):
        with pytest.raises(SystemExit) as exc:
            main(["check", "--form", "pentagonal"])
        assert exc.value.code == 2


class TestTestCommand:
    def test_out_writes_json_and_csv(self, tmp_path):
        base = tmp_path / "rep.json"
        rc = main(["test", "--measure", "gauss", "--entropy", "log", "--cost", "quadratic:1",
                   "--K", "2", "--params", "0.25,0.5", "--n", "8192", "--out", str(base)])
        assert rc == 0
        payload = json.loads(read_text(tmp_path / "rep.json"))
        assert set(payload) == {"family", "C_hat", "B_hat", "rows", "details"}
        assert payload["C_hat"] == pytest.approx(4.0, rel=1e-3)
        csv_lines = read_text(tmp_path / "rep.csv").strip().split("\n")
        assert csv_lines[0] == ("name,parameter,entropy_F,classical_entropy,variance,"
                                "grad_energy,modified_energy,median_energy,ratio,saturation")
        assert len(csv_lines) == 3

    def test_exp_power_display(self, capsys):
        rc = main(["test", "--display", "exp-power", "--alpha", "2", "--tau", "1",
                   "--A", "1", "--params", "0.25,0.5", "--n", "8192"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["C_hat"] == pytest.approx(2.0, rel=1e-3)

    def test_power_beta_display(self, capsys):
        rc = main(["test", "--display", "power-beta", "--measure", "exp_power:1.5",
                   "--alpha", "1.5", "--family", "stretched_exp", "--params", "0.5",
                   "--n", "8192"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert np.isfinite(payload["C_hat"]) and payload["C_hat"] > 0
        assert payload["details"]["beta"] == 3

    def test_bad_params_exit_two(self, capsys):
        assert main(["test", "--params", "abc"]) == 2
        assert "params" in capsys.readouterr().err

    def test_invalid_display_parameters_exit_two(self, capsys):
        rc = main(["test", "--display", "exp-power", "--alpha", "3", "--tau", "1", "--A", "1"])
        assert rc == 2


class TestCertifyCommand:
    def test_certified_run_exits_zero(self, tmp_path):
        out = tmp_path / "cert.json"
        rc = main(["certify", "--measure", "gauss", "--entropy", "log",
                   "--cost", "quadratic:0.5", "--K", "2", "--params", "0.25,0.5",
                   "--n", "8192", "--out", str(out)])
        assert rc == 0
        payload = json.loads(read_text(out))
        assert payload["certified"] is True
        assert payload["check"]["verdict"] == "FINITE"
        assert payload["test"]["C_hat"] > 0

    def test_divergent_certification_exits_four(self, tmp_path):
        out = tmp_path / "cert.json"
        rc = main(["certify", "--measure", "exp", "--entropy", "log",
                   "--cost", "quadratic:1", "--K", "2", "--params", "0.25,0.5",
                   "--n", "8192", "--out", str(out)])
        assert rc == 4
        assert json.loads(read_text(out))["certified"] is False


class TestPaperExamplesCommand:
    def test_repeat_runs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["paper-examples", "--out", str(a)]) == 0
        assert main(["paper-examples", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        payload = json.loads(read_text(a))
        fixtures = payload["fixtures"]
        assert set(fixtures) == {"loglog_quadratic", "exp_power_tau_upper",
                                 "exp_power_tau_lower", "power_entropy"}
        assert fixtures["loglog_quadratic"]["verdict"] == "FINITE"
        for name in ("exp_power_tau_upper", "exp_power_tau_lower"):
            assert fixtures[name]["run_cost"]["verdict"] == "FINITE"
            assert fixtures[name]["run_quadratic"]["verdict"] == "FINITE"
        assert fixtures["exp_power_tau_upper"]["q_star"] == 1.5
        assert np.isfinite(fixtures["power_entropy"]["C_hat"])

    def test_single_thread_matches_threaded(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["paper-examples", "--out", str(a)]) == 0
        monkeypatch.setenv("ISOCERT_THREADS", "1")
        assert main(["paper-examples", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_thread_env_exits_two(self, monkeypatch, capsys):
        monkeypatch.setenv("ISOCERT_THREADS", "lots")
        assert main(["paper-examples"]) == 2
        assert "ISOCERT_THREADS" in capsys.readouterr().err


class TestEntryPoints:
    def test_console_script_on_path(self, tmp_path):
        exe = shutil.which("isocert")
        assert exe is not None
        out = tmp_path / "dual.csv"
        proc = subprocess.run([exe, "conjugate", "--grid", "0:1:5", "--out", str(out)],
                              capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0
        assert read_text(out).startswith("x,c_star\n")

    def test_run_rejects_unknown_command(self):
        with pytest.raises(ConfigError):
            cli.run(RunConfig(), "frobnicate")
