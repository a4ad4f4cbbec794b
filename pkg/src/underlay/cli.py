"""Command line front end: parameter sweeps and the validation run.

    underlay tradeoff    --config scenario.cfg --rho-out 0.01,0.1 --out fig3.csv
    underlay gamma-sweep --rho-cont-dbm -10,0 --format json
    underlay regime      --tau-start-ms 1 --tau-stop-ms 99 --points 50
    underlay validate    --seed 42 --trials 100000

Exit codes: 0 success, 1 usage, 2 evaluation error, 3 validation failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import itertools
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import __version__
from .power_control import NoRegimeBoundary, operating_regime_gamma
from .throughput import ideal_throughput
from .tradeoff import default_search, gamma_sweep, optimize_estimation_time, regime_at_optimum, tradeoff_curve
from .units import ParameterError, ScenarioParams, db_to_linear, default_scenario, linear_to_db, mw_to_dbm
from .validation import DEFAULT_TOLERANCES, run_validation

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_VALIDATION = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

# key -> (ScenarioParams field, converter to internal units)
_KEYS: dict[str, tuple[str, Callable[[float], Any]]] = {
    "fs_hz": ("f_s", float),
    "T_ms": ("T", lambda v: v * 1e-3),
    "sigma2_dbm": ("sigma2", db_to_linear),
    "ptran_dbm": ("P_tran", db_to_linear),
    "theta_I_dbm": ("theta_I", db_to_linear),
    "rho_out": ("rho_out", float),
    "rho_cont_dbm": ("rho_cont", db_to_linear),
    "Ns": ("N_s", int),
    "hp_db": ("g_p", db_to_linear),
    "hs_db": ("h_s", lambda v: math.sqrt(db_to_linear(v))),
    "sr_noise_dbm": ("snr_sr_denominator", db_to_linear),
}
_LIST_KEYS = {"rho_out", "rho_cont_dbm"}


@dataclass
class Config:
    params: ScenarioParams
    rho_out: list[float]
    rho_cont_dbm: list[float]


def _number(text: str, key: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {text!r}") from None
    if key == "Ns" and value != int(value):
        raise ConfigError(f"line {lineno}: Ns must be an integer, got {text!r}")
    return value


def load_config(path: Optional[str]) -> Config:
    """Read ``key = value`` lines; missing keys keep their default values.

    ``rho_out`` and ``rho_cont_dbm`` may hold comma-separated lists; the
    first entry goes into the scenario, the full list drives the sweeps.
    """
    changes: dict[str, Any] = {}
    lists: dict[str, list[float]] = {}
    where: dict[str, str] = {}
    text = Path(path).read_text() if path else ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        items = [v.strip() for v in value.split(",")] if key in _LIST_KEYS else [value]
        numbers = [_number(v, key, lineno) for v in items if v]
        if not numbers:
            raise ConfigError(f"line {lineno}: {key} has no value")
        field_name, convert = _KEYS[key]
        changes[field_name] = convert(numbers[0])
        where[field_name] = key
        if key in _LIST_KEYS:
            lists[key] = numbers

    for key in ("rho_out",):
        for v in lists.get(key, []):
            if not 0 < v < 1:
                raise ConfigError(f"rho_out must lie in (0, 1), got {v}")
    try:
        params = default_scenario().replace(**changes)
    except ParameterError as exc:
        msg = str(exc)
        for field_name, key in where.items():
            if msg.startswith(field_name + " "):
                msg = f"{key}: {msg}"
        raise ConfigError(msg) from None
    return Config(
        params=params,
        rho_out=lists.get("rho_out", [params.rho_out]),
        rho_cont_dbm=lists.get("rho_cont_dbm", [mw_to_dbm(params.rho_cont)]),
    )


def parse_config(path: Optional[str]) -> ScenarioParams:
    return load_config(path).params


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    variable: str  # "tau" (seconds) or "gamma" (dB)
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in ("tau", "gamma"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep start must be below stop")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"unknown scale {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log sweeps need a positive start")

    def values(self) -> list[float]:
        if self.scale == "log":
            vals = np.geomspace(self.start, self.stop, self.points)
        else:
            vals = np.linspace(self.start, self.stop, self.points)
        return [float(v) for v in vals]


@dataclass
class RunReport:
    command: str
    columns: list[str]
    rows: list[dict]
    scenario: dict
    footer: list[dict] = field(default_factory=list)
    checks_passed: Optional[bool] = None
    provenance: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row[c]) for c in self.columns])
        width = len(self.columns)
        for row in self.footer:
            cells = [_cell(v) for v in row.values()]
            writer.writerow(cells + [""] * (width - len(cells)))
        return buf.getvalue()

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "scenario": self.scenario,
            "provenance": self.provenance,
            "columns": self.columns,
            "rows": self.rows,
            "footer": self.footer,
        }
        if self.checks_passed is not None:
            body["passed"] = self.checks_passed
        return json.dumps(body, indent=2, allow_nan=False, default=_cell) + "\n"

    def write(self, out: Optional[str], fmt: str = "csv") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        if out in (None, "-"):
            sys.stdout.write(text)
            return
        Path(out).write_text(text, newline="")
        if fmt == "csv":
            meta = {"command": self.command, "scenario": self.scenario, "provenance": self.provenance}
            Path(str(out) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _scenario_echo(params: ScenarioParams) -> dict:
    echo = asdict(params)
    echo["gamma_db"] = linear_to_db(params.gamma)
    return echo


def _provenance(seed: Optional[int]) -> dict:
    return {
        "seed": seed,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _pool_map(fn, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _combos(config: Config) -> list[tuple[float, float]]:
    return list(itertools.product(config.rho_out, config.rho_cont_dbm))


def _scenario_for(config: Config, rho_out: float, rho_cont_dbm: float) -> ScenarioParams:
    return config.params.replace(rho_out=rho_out, rho_cont=db_to_linear(rho_cont_dbm))


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _tradeoff_job(args):
    params, taus = args
    return tradeoff_curve(params, taus), optimize_estimation_time(params)


def cmd_tradeoff(config: Config, sweep: SweepSpec, out_path: Optional[str] = None, fmt: str = "csv", workers: int = 1) -> RunReport:
    """Expected rate versus estimation time for every (rho_out, rho_cont)."""
    taus = sweep.values()
    combos = _combos(config)
    jobs = [(_scenario_for(config, r, c), taus) for r, c in combos]
    results = _pool_map(_tradeoff_job, jobs, workers)
    rows, footer = [], []
    for (rho_out, rho_cont_dbm), (params, _), (curve, best) in zip(combos, jobs, results):
        rate_im = ideal_throughput(params)
        for pt in curve:
            rows.append({
                "rho_out": rho_out,
                "rho_cont_dbm": rho_cont_dbm,
                "tau_ms": pt.tau * 1e3,
                "rate_em": pt.rate,
                "rate_im": rate_im,
                "p_cont_dbm": mw_to_dbm(pt.p_cont),
                "binding": pt.binding.value,
            })
        footer.append({"key": "tau_opt_ms", "rho_out": rho_out, "rho_cont_dbm": rho_cont_dbm, "value": best.tau_opt * 1e3})
        footer.append({"key": "rate_opt", "rho_out": rho_out, "rho_cont_dbm": rho_cont_dbm, "value": best.rate_opt})
    report = RunReport(
        "tradeoff",
        ["rho_out", "rho_cont_dbm", "tau_ms", "rate_em", "rate_im", "p_cont_dbm", "binding"],
        rows,
        _scenario_echo(config.params),
        footer=footer,
        provenance=_provenance(None),
    )
    if out_path is not None:
        report.write(out_path, fmt)
    return report


def _gamma_job(args):
    params, gammas_db = args
    try:
        star = regime_at_optimum(params).gamma_star_db
    except NoRegimeBoundary:
        star = None
    return gamma_sweep(params, gammas_db), star


def cmd_gamma_sweep(config: Config, sweep: SweepSpec, out_path: Optional[str] = None, fmt: str = "csv", workers: int = 1) -> RunReport:
    """Optimal rate versus gamma (varied through the interference gain).

    ``gamma_star_db`` is the regime boundary at the configured scenario's own
    optimal estimation time, one value per (rho_out, rho_cont).
    """
    gammas = sweep.values()
    combos = _combos(config)
    jobs = [(_scenario_for(config, r, c), gammas) for r, c in combos]
    rows = []
    for (rho_out, rho_cont_dbm), (points, star) in zip(combos, _pool_map(_gamma_job, jobs, workers)):
        for pt in points:
            rows.append({
                "rho_out": rho_out,
                "rho_cont_dbm": rho_cont_dbm,
                "gamma_db": pt.gamma_db,
                "rate_opt_em": pt.rate_opt,
                "tau_opt_ms": pt.tau_opt * 1e3,
                "rate_im": pt.rate_ideal,
                "gamma_star_db": star,
            })
    report = RunReport(
        "gamma-sweep",
        ["rho_out", "rho_cont_dbm", "gamma_db", "rate_opt_em", "tau_opt_ms", "rate_im", "gamma_star_db"],
        rows,
        _scenario_echo(config.params),
        provenance=_provenance(None),
    )
    if out_path is not None:
        report.write(out_path, fmt)
    return report


def _regime_job(args):
    params, tau = args
    try:
        return operating_regime_gamma(params, tau).gamma_star_db
    except NoRegimeBoundary:
        return None


def cmd_regime(config: Config, sweep: SweepSpec, out_path: Optional[str] = None, fmt: str = "csv", workers: int = 1) -> RunReport:
    """gamma*(tau) for every (rho_out, rho_cont); missing roots give empty cells."""
    taus = sweep.values()
    combos = _combos(config)
    jobs = [(_scenario_for(config, r, c), tau) for r, c in combos for tau in taus]
    stars = _pool_map(_regime_job, jobs, workers)
    rows = []
    for (params, tau), star in zip(jobs, stars):
        if star is None:
            log.warning("no regime boundary at tau=%g ms (rho_out=%g, rho_cont=%g dBm)",
                        tau * 1e3, params.rho_out, mw_to_dbm(params.rho_cont))
        rows.append({
            "rho_out": params.rho_out,
            "rho_cont_dbm": mw_to_dbm(params.rho_cont),
            "tau_ms": tau * 1e3,
            "gamma_star_db": star,
        })
    report = RunReport(
        "regime",
        ["rho_out", "rho_cont_dbm", "tau_ms", "gamma_star_db"],
        rows,
        _scenario_echo(config.params),
        provenance=_provenance(None),
    )
    if out_path is not None:
        report.write(out_path, fmt)
    return report


def cmd_validate(
    config: Config,
    out_path: Optional[str] = None,
    fmt: str = "csv",
    seed: int = 42,
    trials: int = 100_000,
    tolerances: Optional[dict] = None,
    workers: int = 1,
) -> RunReport:
    """Monte Carlo cross-checks of every analytic expression."""
    checks = run_validation(
        config.params, seed=seed, trials=trials, rho_outs=config.rho_out, tolerances=tolerances, workers=workers
    )
    rows = [
        {"check": c.name, "measured": c.measured, "tolerance": c.tolerance, "passed": "pass" if c.passed else "FAIL"}
        for c in checks
    ]
    prov = _provenance(seed)
    prov["trials"] = trials
    report = RunReport(
        "validate",
        ["check", "measured", "tolerance", "passed"],
        rows,
        _scenario_echo(config.params),
        checks_passed=all(c.passed for c in checks),
        provenance=prov,
    )
    if out_path is not None:
        report.write(out_path, fmt)
    return report


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(f"expected one of {sorted(DEFAULT_TOLERANCES)}=VALUE, got {text!r}")
    try:
        return key, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="underlay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file with 'key = value' lines")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=100_000)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--rho-out", type=_float_list, help="outage constraints, e.g. 0.01,0.1")
    common.add_argument("--rho-cont-dbm", type=_float_list, help="transmit caps in dBm, e.g. -10,0")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (("tradeoff", "rate versus estimation time"), ("regime", "gamma* versus estimation time")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--tau-start-ms", type=float, default=0.1)
        p.add_argument("--tau-stop-ms", type=float, default=10.0)
        p.add_argument("--points", type=int, default=100)
        p.add_argument("--scale", choices=("linear", "log"), default="linear")

    p = sub.add_parser("gamma-sweep", parents=[common], help="optimal rate versus gamma")
    p.add_argument("--gamma-start-db", type=float, default=-20.0)
    p.add_argument("--gamma-stop-db", type=float, default=10.0)
    p.add_argument("--points", type=int, default=31)
    p.add_argument("--scale", choices=("linear",), default="linear")

    p = sub.add_parser("validate", parents=[common], help="Monte Carlo cross-checks")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="KEY=VALUE",
                   help=f"override a tolerance ({', '.join(sorted(DEFAULT_TOLERANCES))})")
    return parser


_LIST_FLAGS = ("--rho-out", "--rho-cont-dbm")


def _join_list_flags(argv: Sequence[str]) -> list[str]:
    # "--rho-cont-dbm -10,0" would otherwise read "-10,0" as an option
    out, it = [], iter(argv)
    for token in it:
        if token in _LIST_FLAGS:
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_list_flags(argv))
    try:
        config = load_config(args.config)
        if args.rho_out:
            config.rho_out = args.rho_out
        if args.rho_cont_dbm:
            config.rho_cont_dbm = args.rho_cont_dbm
        for rho in config.rho_out:
            if not 0 < rho < 1:
                raise ConfigError(f"rho_out must lie in (0, 1), got {rho}")
        if args.command in ("tradeoff", "regime"):
            sweep = SweepSpec("tau", args.tau_start_ms * 1e-3, args.tau_stop_ms * 1e-3, args.points, args.scale)
        elif args.command == "gamma-sweep":
            sweep = SweepSpec("gamma", args.gamma_start_db, args.gamma_stop_db, args.points, args.scale)
        if args.trials < 1 or args.workers < 1:
            raise ConfigError("--trials and --workers must be positive")
    except (ConfigError, ParameterError, ValueError, OSError) as exc:
        print(f"underlay: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "tradeoff":
            report = cmd_tradeoff(config, sweep, workers=args.workers)
        elif args.command == "gamma-sweep":
            report = cmd_gamma_sweep(config, sweep, workers=args.workers)
        elif args.command == "regime":
            report = cmd_regime(config, sweep, workers=args.workers)
        else:
            report = cmd_validate(config, seed=args.seed, trials=args.trials,
                                  tolerances=dict(args.tol), workers=args.workers)
        report.write(args.out, args.format)
    except Exception as exc:
        print(f"underlay: evaluation failed: {exc}", file=sys.stderr)
        return EXIT_EVAL
    if report.checks_passed is False:
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
