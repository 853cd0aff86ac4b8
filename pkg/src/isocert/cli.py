"""Command-line front end: configure a measure, an entropy profile, and a
cost, then run conjugation tables, isoperimetric profiles, integrability
checks, empirical inequality tests, or the combined certification flow.

Exit codes: 0 success (for `check`, any decisive verdict), 2 configuration
error, 3 inconclusive verdict, 4 certification failure (divergent verdict or
a violated margin).  Output is deterministic: floats are printed with 17
significant digits, JSON key order is fixed, and CSV uses LF line endings.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .checker import ConditionSpec, check_condition, check_exp_power
from .convex import CostFunction, dual_cost, eval_cost, legendre_transform
from .entropy import EntropyFunction, F_tau, log_entropy
from .expr import ExprError, PotentialExpr, parse_potential
from .measure1d import I_F_profile, build_measure, builtin_measure, tilde_profile
from .tester import TestFamily, verify_theorem_1_1, verify_theorem_2_1, verify_theorem_4_4

__all__ = ["RunConfig", "PotentialExpr", "parse_potential", "main", "run"]


class ConfigError(ValueError):
    """Invalid configuration: unknown names or out-of-range parameters."""


# -- deterministic serialization ---------------------------------------------------


def _format_float(x: float) -> str:
    if x != x:
        return "null"
    if x == float("inf"):
        return '"inf"'
    if x == float("-inf"):
        return '"-inf"'
    text = "%.17g" % x
    return text


def _dump_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ch == "\n":
                out.append("\\n")
            elif ord(ch) < 0x20:
                out.append("\\u%04x" % ord(ch))
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{_dump_json(str(k))}:{_dump_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_dump_json(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _dump_json(list(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "wb") as fh:
            fh.write(text.encode("utf-8"))


# -- configuration ------------------------------------------------------------------


@dataclass
class RunConfig:
    """Flat run configuration; every field is settable from the config file
    (one `key = value` per line) and overridable by the same-named flag."""

    measure: str = "gauss"
    entropy: str = "log"
    cost: str = "quadratic:1"
    delta: Optional[float] = None
    K: float = 2.0
    t_min: float = 1e-12
    form: Optional[str] = None
    profile_choice: str = "tilde"
    n_per_decade: int = 256
    family: str = "exponential"
    params: str = "0.25,0.5,1"
    floor: float = 1e-6
    seed: int = 0
    scale: float = 0.5
    exponent: float = 0.7
    smoothing: float = 0.05
    display: str = "restricted"
    alpha: float = 1.5
    tau: float = 1.0
    A: float = 1.0
    n: int = 16384
    grid_kind: str = "hybrid"
    support: Optional[str] = None
    grid: Optional[str] = None
    t_grid: Optional[str] = None
    profile_kind: str = "tilde"
    out: Optional[str] = None

    @classmethod
    def from_sources(cls, config_path: Optional[str], ns: argparse.Namespace) -> "RunConfig":
        values = {}
        converters = {f.name: f for f in fields(cls)}
        if config_path is not None:
            try:
                lines = open(config_path, "r", encoding="utf-8").read().splitlines()
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}")
            for lineno, raw in enumerate(lines, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" in line:
                    key, _, val = line.partition("=")
                else:
                    parts = line.split(None, 1)
                    if len(parts) != 2:
                        raise ConfigError(f"config line {lineno}: expected 'key = value'")
                    key, val = parts
                key = key.strip().replace("-", "_")
                if key not in converters:
                    raise ConfigError(f"config line {lineno}: unknown key {key!r}")
                values[key] = val.strip()
        for name in converters:
            flag = getattr(ns, name, None)
            if flag is not None:
                values[name] = flag
        cfg = cls()
        for key, val in values.items():
            target_type = cls.__dataclass_fields__[key].type
            try:
                if isinstance(val, str) and ("float" in target_type and "str" not in target_type):
                    val = float(val)
                elif isinstance(val, str) and "int" in target_type:
                    val = int(val)
            except ValueError:
                raise ConfigError(f"bad numeric value for {key}: {val!r}")
            setattr(cfg, key, val)
        return cfg


def _parse_range(text: str, what: str, n_required: bool = True):
    parts = text.split(":")
    if n_required:
        if len(parts) != 3:
            raise ConfigError(f"{what} must look like lo:hi:n, got {text!r}")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"bad {what}: {text!r}")
        if n < 2 or not hi > lo:
            raise ConfigError(f"{what} needs hi > lo and n >= 2")
        return lo, hi, n
    if len(parts) != 2:
        raise ConfigError(f"{what} must look like lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"bad {what}: {text!r}")


def _build_measure(cfg: RunConfig):
    spec = cfg.measure.strip()
    support = (-np.inf, np.inf)
    if cfg.support is not None:
        support = _parse_range(cfg.support, "support", n_required=False)
    try:
        if spec in ("gauss", "exp", "loglog"):
            return builtin_measure(spec, n=cfg.n, support=support, grid_kind=cfg.grid_kind)
        if spec.startswith("exp_power"):
            alpha = cfg.alpha
            if ":" in spec:
                alpha = float(spec.split(":", 1)[1])
            return builtin_measure("exp_power", alpha=alpha, n=cfg.n, support=support, grid_kind=cfg.grid_kind)
        if spec.startswith("expr:"):
            expr = parse_potential(spec[5:])
            return build_measure(
                lambda x: np.asarray(expr(x), dtype=float),
                support=support,
                n=cfg.n,
                grid_kind=cfg.grid_kind,
                name=f"expr:{expr.to_text()}",
            )
    except (ExprError, ValueError) as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown measure {spec!r}")


def _build_entropy(cfg: RunConfig) -> EntropyFunction:
    spec = cfg.entropy.strip()
    try:
        if spec == "log":
            return log_entropy()
        if spec.startswith("ftau:"):
            return F_tau(float(spec.split(":", 1)[1]))
        if spec.startswith("expr:"):
            expr = parse_potential(spec[5:])
            return EntropyFunction(fn=lambda y: np.asarray(expr(y), dtype=float), name=f"expr:{expr.to_text()}")
    except (ExprError, ValueError) as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown entropy {spec!r}")


def _build_cost(cfg: RunConfig):
    """Returns (form, delta_from_cost, cost_or_none)."""
    spec = cfg.cost.strip()
    try:
        if spec.startswith("quadratic"):
            delta = 1.0
            if ":" in spec:
                delta = float(spec.split(":", 1)[1])
            if delta <= 0:
                raise ConfigError("quadratic delta must be positive")
            return "quadratic", delta, None
        if spec.startswith("c:"):
            parts = spec.split(":")
            if len(parts) != 3:
                raise ConfigError("cost must look like c:A:alpha")
            A, alpha = float(parts[1]), float(parts[2])
            return "general", None, CostFunction.closed_form(A, alpha)
        if spec.startswith("expr:"):
            expr = parse_potential(spec[5:])
            grid = np.linspace(0.0, 100.0, 4097)
            return "general", None, CostFunction.from_samples(grid, np.asarray(expr(grid), dtype=float))
    except (ExprError, ValueError) as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown cost {spec!r}")


def _build_family(cfg: RunConfig) -> TestFamily:
    try:
        params = tuple(float(p) for p in cfg.params.split(",") if p.strip() != "")
    except ValueError:
        raise ConfigError(f"bad family params {cfg.params!r}")
    try:
        return TestFamily(
            kind=cfg.family,
            params=params,
            floor=cfg.floor,
            seed=cfg.seed,
            scale=cfg.scale,
            exponent=cfg.exponent,
            smoothing=cfg.smoothing,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _checker_delta(cfg: RunConfig, cost_delta: Optional[float]) -> float:
    if cfg.delta is not None:
        return float(cfg.delta)
    if cost_delta is not None:
        return float(cost_delta)
    return 1.0


# -- subcommands --------------------------------------------------------------------


def _cmd_conjugate(cfg: RunConfig) -> int:
    form, _, cost = _build_cost(cfg)
    grid_spec = cfg.grid if cfg.grid is not None else "0:10:2000"
    lo, hi, n = _parse_range(grid_spec, "grid")
    if lo < 0:
        raise ConfigError("conjugate grid must be nonnegative")
    xs = np.linspace(lo, hi, n)
    if form == "quadratic":
        cost = CostFunction.closed_form(1.0, 2.0)
    if cost.kind == "closed_form_cAalpha":
        values = np.asarray(eval_cost(dual_cost(cost), xs), dtype=float)
    else:
        table = legendre_transform(cost, xs)
        values = np.asarray(table.values, dtype=float)
        if bool(np.any(table.truncated)):
            sys.stderr.write("warning: dual grid extends past the recoverable slope range\n")
    lines = ["x,c_star"]
    for x, v in zip(xs, values):
        lines.append("%.17g,%.17g" % (x, v))
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def _cmd_profile(cfg: RunConfig) -> int:
    mu = _build_measure(cfg)
    if cfg.profile_kind == "tilde":
        t_spec = cfg.t_grid if cfg.t_grid is not None else "0.000001:0.5:500"
        lo, hi, n = _parse_range(t_spec, "t_grid")
        if not (0.0 < lo < hi <= 0.5):
            raise ConfigError("t_grid must lie inside (0, 1/2]")
        t = np.linspace(lo, hi, n)
        prof = tilde_profile(mu, t)
        lines = ["t,u,v,tilde_I"]
        for ti, ui, vi, ii in zip(prof.t_grid, prof.u_t, prof.v_t, prof.tilde_I):
            lines.append("%.17g,%.17g,%.17g,%.17g" % (ti, ui, vi, ii))
    elif cfg.profile_kind == "if":
        F = _build_entropy(cfg)
        r_spec = cfg.grid if cfg.grid is not None else "0:8:400"
        lo, hi, n = _parse_range(r_spec, "grid")
        if lo < 0:
            raise ConfigError("radii must be nonnegative")
        r = np.linspace(lo, hi, n)
        prof = I_F_profile(mu, F, r)
        lines = ["r,s,I_F"]
        for ri, si, vi in zip(prof.r_grid, prof.s_values, prof.values):
            lines.append("%.17g,%.17g,%.17g" % (ri, si, vi))
    else:
        raise ConfigError(f"unknown profile kind {cfg.profile_kind!r}")
    _write_text(cfg.out, "\n".join(lines) + "\n")
    return 0


def _make_condition_spec(cfg: RunConfig):
    mu = _build_measure(cfg)
    F = _build_entropy(cfg)
    form, cost_delta, cost = _build_cost(cfg)
    if cfg.form is not None:
        form = cfg.form
    delta = _checker_delta(cfg, cost_delta)
    try:
        return ConditionSpec(
            measure=mu,
            F=F,
            cost=cost,
            delta=delta,
            K=cfg.K,
            form=form,
            profile_choice=cfg.profile_choice,
            t_min=cfg.t_min,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _cmd_check(cfg: RunConfig) -> int:
    spec = _make_condition_spec(cfg)
    report = check_condition(spec, n_per_decade=cfg.n_per_decade)
    _write_text(cfg.out, _dump_json(report.to_json_dict()) + "\n")
    return 3 if report.verdict == "INCONCLUSIVE" else 0


def _run_test_report(cfg: RunConfig):
    family = _build_family(cfg)
    if cfg.display == "restricted":
        mu = _build_measure(cfg)
        F = _build_entropy(cfg)
        form, _, cost = _build_cost(cfg)
        if form == "quadratic":
            cost = CostFunction.closed_form(1.0, 2.0)
        return verify_theorem_2_1(mu, F, cost, cfg.K, family)
    if cfg.display == "exp-power":
        measure = None
        if cfg.measure.strip() != "gauss" or cfg.support is not None:
            measure = _build_measure(cfg)
        return verify_theorem_1_1(cfg.alpha, cfg.tau, cfg.A, family, n_grid=cfg.n, measure=measure)
    if cfg.display == "power-beta":
        mu = _build_measure(cfg)
        return verify_theorem_4_4(mu, cfg.alpha, family)
    raise ConfigError(f"unknown display {cfg.display!r}")


def _cmd_test(cfg: RunConfig) -> int:
    try:
        report = _run_test_report(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc))
    json_text = _dump_json(report.to_json_dict()) + "\n"
    if cfg.out is None:
        sys.stdout.write(json_text)
    else:
        base = cfg.out[:-5] if cfg.out.endswith(".json") else cfg.out
        _write_text(base + ".json", json_text)
        _write_text(base + ".csv", report.to_csv_text())
    return 0


def _cmd_certify(cfg: RunConfig) -> int:
    spec = _make_condition_spec(cfg)
    check_report = check_condition(spec, n_per_decade=cfg.n_per_decade)
    family = _build_family(cfg)
    form, _, cost = _build_cost(cfg)
    if form == "quadratic" or cost is None:
        cost = CostFunction.closed_form(1.0, 2.0)
    test_report = verify_theorem_2_1(spec.measure, spec.F, cost, cfg.K, family)

    margins_ok = all(row["ok"] for row in test_report.details["step1"])
    b_finite = test_report.B_hat is not None and np.isfinite(test_report.B_hat)
    entropy_ok = all(r.entropy_F >= -1e-9 * max(1.0, abs(r.classical_entropy)) for r in test_report.rows)
    certified = check_report.verdict == "FINITE" and margins_ok and b_finite and entropy_ok

    payload = {
        "certified": bool(certified),
        "check": check_report.to_json_dict(),
        "test": test_report.to_json_dict(),
    }
    _write_text(cfg.out, _dump_json(payload) + "\n")
    if check_report.verdict == "INCONCLUSIVE":
        return 3
    if not certified:
        return 4
    return 0


def _thread_cap() -> int:
    workers = min(4, os.cpu_count() or 1)
    env = os.environ.get("ISOCERT_THREADS")
    if env is not None:
        try:
            workers = max(1, min(workers, int(env)))
        except ValueError:
            raise ConfigError(f"ISOCERT_THREADS must be an integer, got {env!r}")
    return workers


def _cmd_paper_examples(cfg: RunConfig) -> int:
    n = cfg.n

    def fixture_loglog():
        mu = builtin_measure("loglog", n=n)
        spec = ConditionSpec(measure=mu, F=log_entropy(), delta=0.5, K=2.0, form="quadratic")
        return check_condition(spec, n_per_decade=cfg.n_per_decade).to_json_dict()

    def fixture_exp_power_upper():
        return check_exp_power(1.5, 1.0, n_grid=n).to_json_dict()

    def fixture_exp_power_lower():
        return check_exp_power(1.5, 2.0 / 3.0, n_grid=n).to_json_dict()

    def fixture_power_entropy():
        mu = builtin_measure("exp_power", alpha=1.5, n=n)
        family = TestFamily(kind="stretched_exp", params=(0.25, 0.5, 1.0), exponent=0.7, smoothing=0.05)
        return verify_theorem_4_4(mu, 1.5, family).to_json_dict()

    fixtures = [
        ("loglog_quadratic", fixture_loglog),
        ("exp_power_tau_upper", fixture_exp_power_upper),
        ("exp_power_tau_lower", fixture_exp_power_lower),
        ("power_entropy", fixture_power_entropy),
    ]
    workers = _thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda item: item[1](), fixtures))
    else:
        results = [thunk() for _, thunk in fixtures]
    payload = {"fixtures": {name: res for (name, _), res in zip(fixtures, results)}}
    _write_text(cfg.out, _dump_json(payload) + "\n")
    return 0


# -- argument parsing ---------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="flat key = value config file")
    sub.add_argument("--measure", default=None, help="gauss | exp | exp_power:a | loglog | expr:V(x)")
    sub.add_argument("--entropy", default=None, help="log | ftau:t | expr:F(x)")
    sub.add_argument("--cost", default=None, help="quadratic:delta | c:A:alpha | expr:c(x)")
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--K", type=float, default=None)
    sub.add_argument("--t-min", dest="t_min", type=float, default=None)
    sub.add_argument("--form", default=None, choices=["quadratic", "general", "one_d_quadratic"])
    sub.add_argument("--profile-choice", dest="profile_choice", default=None, choices=["tilde", "lower_bound_model"])
    sub.add_argument("--n-per-decade", dest="n_per_decade", type=int, default=None)
    sub.add_argument("--family", default=None, choices=["exponential", "bump", "shifted_linear", "random_smooth", "stretched_exp"])
    sub.add_argument("--params", default=None, help="comma-separated family parameters")
    sub.add_argument("--floor", type=float, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--scale", type=float, default=None)
    sub.add_argument("--exponent", type=float, default=None)
    sub.add_argument("--smoothing", type=float, default=None)
    sub.add_argument("--display", default=None, choices=["restricted", "exp-power", "power-beta"])
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--tau", type=float, default=None)
    sub.add_argument("--A", type=float, default=None)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--grid-kind", dest="grid_kind", default=None, choices=["hybrid", "uniform"])
    sub.add_argument("--support", default=None, help="lo:hi")
    sub.add_argument("--grid", default=None, help="lo:hi:n")
    sub.add_argument("--t-grid", dest="t_grid", default=None, help="lo:hi:n in (0, 1/2]")
    sub.add_argument("--profile-kind", dest="profile_kind", default=None, choices=["tilde", "if"])
    sub.add_argument("--out", default=None, help="output path (default stdout)")


_COMMANDS = {
    "conjugate": _cmd_conjugate,
    "profile": _cmd_profile,
    "check": _cmd_check,
    "test": _cmd_test,
    "certify": _cmd_certify,
    "paper-examples": _cmd_paper_examples,
}


def run(config: RunConfig, command: str) -> int:
    """Run one subcommand against an assembled configuration."""
    handler = _COMMANDS.get(command)
    if handler is None:
        raise ConfigError(f"unknown command {command!r}")
    return handler(config)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="isocert",
        description="certify and test entropy--energy inequalities for 1-D measures",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        _add_common(subs.add_parser(name))
    ns = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_sources(ns.config, ns)
        return run(cfg, ns.command)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ExprError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
