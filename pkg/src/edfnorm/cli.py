"""Command-line interface: ``edfnorm {eigen,slopes,table,test,simulate}``.

Exit status is 0 on success, 2 on a configuration error and 1 when the
computation itself fails. Every output carries the effective configuration,
the package version and ``schema: 1``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .alternatives import TABLE_FAMILIES, parse_family
from .edf_tests import TEST_ORDER, Test, mc_pvalue
from .montecarlo import DEFAULT_GRID, null_distribution, simulate_process_cov
from .slopes import efficiency_table, null_constants, slope_report
from .spectral import DiscretizationConfig, leading_eigenvalue

SCHEMA = 1
FORMATS = ("json", "csv", "pretty")


class ConfigError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value file; command-line flags win")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out", type=Path, help="write output here instead of stdout")
    common.add_argument("--seed", type=int)

    spectral = argparse.ArgumentParser(add_help=False)
    spectral.add_argument("--m", type=int, help="Nyström nodes on the coarse grid (default 1024)")

    p = argparse.ArgumentParser(prog="edfnorm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"edfnorm {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eigen", parents=[common, spectral], help="top eigenvalues of W, A, U")
    e.add_argument("--validate-simple", action="store_true", default=None,
                   help="use the known-parameter kernel (exact spectra 1/(k²π²), 1/(k(k+1)))")

    s = sub.add_parser("slopes", parents=[common, spectral], help="slope report for one alternative")
    s.add_argument("--alt", help="lehmann | lp1 | lp2 | contam:MU:SIGMA2")

    sub.add_parser("table", parents=[common, spectral], help="efficiency table for six alternatives")

    t = sub.add_parser("test", parents=[common], help="test a data file for normality")
    t.add_argument("data", nargs="?", help="newline-delimited values; '-' or omitted reads stdin")
    t.add_argument("--test", help="D | W2 | A2 | G | U2 | all")
    t.add_argument("--replicates", type=int)

    m = sub.add_parser("simulate", parents=[common], help="Monte Carlo covariance or null distribution")
    group = m.add_mutually_exclusive_group()
    group.add_argument("--process", choices=("eta", "xi"))
    group.add_argument("--test", choices=[t.value for t in TEST_ORDER])
    m.add_argument("--n", type=int)
    m.add_argument("--replicates", type=int)
    m.add_argument("--grid", help="comma-separated points in [-3, 3]")
    return p


_DEFAULTS = {
    "format": "json",
    "seed": 0,
    "m": 1024,
    "validate_simple": False,
    "alt": "lehmann",
    "test": None,
    "replicates": 10_000,
    "n": 2000,
    "grid": ",".join(f"{g:g}" for g in DEFAULT_GRID),
    "process": None,
    "data": None,
    "out": None,
}


def _read_config(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _coerce(key: str, value):
    if value is None or not isinstance(value, str):
        return value
    if key in ("seed", "m", "replicates", "n"):
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if key == "validate_simple":
        return value.lower() in ("1", "true", "yes", "on")
    if key == "out":
        return Path(value)
    return value


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the optional config file and explicit flags."""
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, value in _read_config(args.config).items():
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            cfg[key] = _coerce(key, value)
    for key, value in vars(args).items():
        if key in ("config",) or value is None:
            continue
        cfg[key] = value
    cfg["command"] = args.command
    if cfg["format"] not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if cfg["m"] < 16:
        raise ConfigError("--m must be at least 16")
    return cfg


def _echo(cfg: dict) -> dict:
    keys = {
        "eigen": ("m", "validate_simple"),
        "slopes": ("alt", "m"),
        "table": ("m",),
        "test": ("test", "replicates", "data"),
        "simulate": ("process", "test", "n", "replicates", "grid"),
    }[cfg["command"]]
    echo = {"command": cfg["command"], "seed": cfg["seed"], "format": cfg["format"]}
    echo.update({k: (str(cfg[k]) if isinstance(cfg[k], Path) else cfg[k]) for k in keys})
    return echo


def _envelope(cfg: dict, result) -> dict:
    return {"schema": SCHEMA, "version": __version__, "config": _echo(cfg), "result": result}


def _csv(header: list, rows: list, cfg: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# edfnorm {__version__} schema {SCHEMA} config {json.dumps(_echo(cfg), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _emit(cfg: dict, result, header: list, rows: list, pretty: str) -> str:
    if cfg["format"] == "json":
        return json.dumps(_envelope(cfg, result), indent=2, sort_keys=True) + "\n"
    if cfg["format"] == "csv":
        return _csv(header, [[_fmt(v) for v in r] for r in rows], cfg)
    return pretty


def cmd_eigen(cfg: dict) -> str:
    config = DiscretizationConfig(nodes=cfg["m"])
    kernel = "K0" if cfg["validate_simple"] else None
    names = {"W": "lambda", "A": "nu", "U": "zeta"}
    ops = ("W", "A") if kernel else ("W", "A", "U")
    results = {op: leading_eigenvalue(op, config, kernel=kernel) for op in ops}
    result = {
        names[op]: {
            "operator": op,
            "leading_eigenvalues": list(r.leading_eigenvalues),
            "refinement_delta": r.refinement_delta,
            "nodes": r.config.nodes,
        }
        for op, r in results.items()
    }
    rows = [[op, *r.leading_eigenvalues, r.refinement_delta] for op, r in results.items()]
    pretty = "\n".join(
        f"{names[op]}1 = {r.largest:.6f}   (operator {op}, refinement delta {r.refinement_delta:.1e})"
        for op, r in results.items()
    ) + "\n"
    return _emit(cfg, result, ["operator", "ev1", "ev2", "ev3", "refinement_delta"], rows, pretty)


def cmd_slopes(cfg: dict) -> str:
    try:
        family = parse_family(cfg["alt"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = slope_report(family, constants=null_constants(DiscretizationConfig(nodes=cfg["m"])))
    rows = [[t.value, report.per_test[t], report.per_test_efficiency[t]] for t in TEST_ORDER]
    pretty = f"{report.label}  (k_LRT = {report.k_lrt:.6g})\n" + "".join(
        f"  {t.value:<3} k = {report.per_test[t]:.6g}   efficiency = {report.per_test_efficiency[t]:.3f}\n"
        for t in TEST_ORDER
    )
    return _emit(cfg, report.to_dict(), ["test", "k", "efficiency"], rows, pretty)


def cmd_table(cfg: dict) -> str:
    reports = efficiency_table(TABLE_FAMILIES, constants=null_constants(DiscretizationConfig(nodes=cfg["m"])))
    header = ["alternative"] + [t.value for t in TEST_ORDER]
    rows = [[r.family, *(f"{v:.3f}" for v in r.efficiencies())] for r in reports]
    result = {
        "columns": [t.value for t in TEST_ORDER],
        "rows": [{"family": r.family, "label": r.label,
                  "efficiency": [round(v, 3) for v in r.efficiencies()]} for r in reports],
    }
    width = max(len(r.label) for r in reports)
    pretty = f"{'alternative':<{width}}" + "".join(f"{h:>8}" for h in header[1:]) + "\n"
    pretty += "".join(
        f"{r.label:<{width}}" + "".join(f"{v:8.3f}" for v in r.efficiencies()) + "\n" for r in reports
    )
    return _emit(cfg, result, header, rows, pretty)


def _read_data(source) -> np.ndarray:
    if source in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read data file {source}: {exc}") from None
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ConfigError(f"line {lineno}: not a number: {line!r}") from None
    return np.array(values)


def cmd_test(cfg: dict) -> str:
    name = cfg["test"] or "all"
    try:
        tests = list(TEST_ORDER) if name.lower() == "all" else [Test(name)]
    except ValueError:
        raise ConfigError(f"unknown test {name!r}") from None
    if cfg["replicates"] < 1000:
        raise ConfigError("--replicates must be at least 1000")
    data = _read_data(cfg["data"])
    outcomes = [mc_pvalue(t, data, cfg["replicates"], cfg["seed"]) for t in tests]
    result = [o.to_dict() for o in outcomes]
    header = ["test", "statistic", "p_value", "mu_hat", "sigma2_hat", "n", "replicates", "clamped"]
    rows = [[o.test.value, o.statistic, o.p_value, o.mu_hat, o.sigma2_hat, o.n, o.mc_replicates, o.clamped]
            for o in outcomes]
    pretty = "".join(f"{o.test.value:<3} statistic = {o.statistic:.6g}   p = {o.p_value:.4f}\n" for o in outcomes)
    return _emit(cfg, result, header, rows, pretty)


def cmd_simulate(cfg: dict) -> str:
    if cfg["test"]:
        draws = null_distribution(cfg["test"], cfg["n"], cfg["replicates"], cfg["seed"])
        qs = (0.5, 0.9, 0.95, 0.99)
        quant = np.quantile(draws, qs)
        se = draws.std(ddof=1) / np.sqrt(draws.size)
        result = {"test": cfg["test"], "mean": float(draws.mean()), "mean_se": float(se),
                  "quantiles": {str(q): float(v) for q, v in zip(qs, quant)}}
        rows = [["mean", draws.mean(), se]] + [[f"q{q}", v, ""] for q, v in zip(qs, quant)]
        pretty = f"{cfg['test']}: mean {draws.mean():.6g} (se {se:.2g}); " + ", ".join(
            f"q{q} = {v:.4g}" for q, v in zip(qs, quant)) + "\n"
        return _emit(cfg, result, ["quantity", "estimate", "se"], rows, pretty)

    try:
        grid = [float(g) for g in str(cfg["grid"]).split(",")]
    except ValueError:
        raise ConfigError(f"bad --grid {cfg['grid']!r}") from None
    try:
        est = simulate_process_cov(cfg["process"] or "eta", cfg["n"], cfg["replicates"], grid, cfg["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    theory = est.theoretical()
    rows = [[x, y, est.empirical_cov[i, j], est.se_matrix[i, j], theory[i, j]]
            for i, x in enumerate(est.grid) for j, y in enumerate(est.grid) if j >= i]
    result = {"process": est.process.value, "grid": est.grid.tolist(),
              "empirical_cov": est.empirical_cov.tolist(), "se": est.se_matrix.tolist(),
              "kernel": theory.tolist()}
    pretty = "".join(f"K({x:g},{y:g}): {c:.5f} ± {s:.5f}  (kernel {k:.5f})\n" for x, y, c, s, k in rows)
    return _emit(cfg, result, ["x", "y", "empirical_cov", "se", "kernel"], rows, pretty)


_COMMANDS = {"eigen": cmd_eigen, "slopes": cmd_slopes, "table": cmd_table,
             "test": cmd_test, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        text = _COMMANDS[cfg["command"]](cfg)
    except ConfigError as exc:
        print(f"edfnorm: configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failure
        print(f"edfnorm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
