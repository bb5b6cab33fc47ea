"""Command-line front end.

Subcommands::

    check    run one property on one (or, for closure, two) functions
    falsify  seeded random search for a counterexample
    suite    run the battery over a family set against recorded expectations
    report   summarize a saved JSON report and emit x,y,margin plot data

Settings come from defaults, then a ``--config`` JSON file, then flags.

Exit codes: ``check`` 0 PASS / 1 FAIL / 2 ERROR or bad config. ``falsify``
0 when nothing was found within budget and 1 when a counterexample was found.
``suite`` 0 when every asserted case matches, 1 otherwise. Bad configuration
is always 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from .harmonic import GridSpec
from .report import CheckReport, Verdict
from .suite import DEFAULT_C, DEFAULT_EXPECT, DEFAULT_FAMILIES, DEFAULT_M, DEFAULT_T, \
    DEFAULT_T_TARGET, run_suite
from .svf import parse_svf_spec
from .verifier import CHECKS, CheckConfig, POINTWISE, falsify, run_check


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    property: str | None = None
    svf: list[str] = field(default_factory=list)
    m: float | None = None
    c: float = 0.0
    t: float | None = None
    tol: float = 1e-9
    eps: float = 0.0
    depth: int = 8
    seed: int = 0
    budget: int = 1000
    grid: str = str(GridSpec())
    jobs: int = 1
    out: str | None = None
    format: str = "json"
    families: dict[str, str] | None = None
    m_values: list[float] = field(default_factory=lambda: list(DEFAULT_M))
    c_values: list[float] = field(default_factory=lambda: list(DEFAULT_C))
    t_target: float = DEFAULT_T_TARGET
    expect: dict[str, str] | None = None
    base_dir: str | None = None

    def check_config(self) -> CheckConfig:
        try:
            grid = GridSpec.parse(self.grid)
            return CheckConfig(m=1.0 if self.m is None else self.m, c=self.c, t_fixed=self.t,
                               grid=grid, tol=self.tol, eps=self.eps, dyadic_depth=self.depth,
                               seed=self.seed, sample_budget=self.budget, jobs=self.jobs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def echo(self) -> dict:
        skip = {"out", "base_dir", "command"}
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in skip}


_FLOAT_KEYS = {"m", "c", "t", "tol", "eps", "t_target"}
_INT_KEYS = {"depth", "seed", "budget", "jobs"}


def _coerce(key, value):
    if value is None:
        return None
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if key == "svf":
            return [value] if isinstance(value, str) else [str(v) for v in value]
        if key in ("m_values", "c_values"):
            return [float(v) for v in value]
        if key in ("families", "expect"):
            if not isinstance(value, dict):
                raise ValueError
            return {str(k): str(v) for k, v in value.items()}
        if key == "grid" and isinstance(value, (list, tuple)):
            return ",".join(str(int(v)) for v in value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None


def build_config(command: str, flags: dict, config_path: str | None) -> RunConfig:
    """Merge defaults, config-file keys and command-line flags, in that order."""
    known = {f.name for f in fields(RunConfig)} - {"command", "base_dir"}
    merged: dict = {}
    base_dir = None
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config {config_path} must hold a JSON object")
        data.pop("command", None)
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, value)
        base_dir = str(Path(config_path).parent)
    for key, value in flags.items():
        if value is not None:
            merged[key] = _coerce(key, value)
    cfg = RunConfig(command=command, base_dir=base_dir, **merged)
    if cfg.format not in ("json", "csv"):
        raise ConfigError(f"bad value for 'format': {cfg.format!r} (json or csv)")
    return cfg


def _require(cfg: RunConfig, key: str, flag: str):
    if getattr(cfg, key) is None:
        raise ConfigError(f"missing required setting {key!r} ({flag})")


def _svfs(cfg: RunConfig, n: int):
    if len(cfg.svf) != n:
        raise ConfigError(f"'svf': property {cfg.property} needs {n} function(s), got {len(cfg.svf)}")
    try:
        return [parse_svf_spec(s, cfg.base_dir) for s in cfg.svf]
    except (ValueError, OSError) as exc:
        raise ConfigError(f"'svf': {exc}") from None


def _emit(report: CheckReport, cfg: RunConfig):
    report.config_echo = cfg.echo()
    text = report.pairs_csv() if cfg.format == "csv" else report.to_json()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(report.summary().splitlines()[0], file=sys.stderr)


def cmd_check(cfg: RunConfig) -> int:
    _require(cfg, "property", "--property")
    _require(cfg, "m", "--m")
    prop = cfg.property
    if prop not in CHECKS and prop != "closure":
        raise ConfigError(f"'property': unknown {prop!r}; choose from {sorted(CHECKS) + ['closure']}")
    if prop in ("strong-m-t-concave", "kuhn", "chain-t-to-m", "bd-approx"):
        _require(cfg, "t", "--t")
    svfs = _svfs(cfg, 2 if prop == "closure" else 1)
    try:
        report = run_check(prop, svfs, cfg.check_config())
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    _emit(report, cfg)
    return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.ERROR: 2}[report.verdict]


def cmd_falsify(cfg: RunConfig) -> int:
    _require(cfg, "property", "--property")
    _require(cfg, "m", "--m")
    if cfg.property not in POINTWISE:
        raise ConfigError(f"'property': falsify supports {sorted(POINTWISE)}, got {cfg.property!r}")
    if cfg.property == "strong-m-t-concave":
        _require(cfg, "t", "--t")
    if cfg.budget <= 0:
        raise ConfigError("'budget' must be positive for falsify")
    (F,) = _svfs(cfg, 1)
    report = falsify(F, cfg.check_config(), cfg.property)
    _emit(report, cfg)
    return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.ERROR: 2}[report.verdict]


def cmd_suite(cfg: RunConfig) -> int:
    families_src = DEFAULT_FAMILIES if cfg.families is None else cfg.families
    if not families_src:
        raise ConfigError("'families' is empty")
    expect = cfg.expect
    if expect is None and cfg.families is None:
        expect = DEFAULT_EXPECT
    for key, value in (expect or {}).items():
        if value not in ("PASS", "FAIL", "ERROR"):
            raise ConfigError(f"'expect': bad status {value!r} for {key!r}")
    try:
        families = {k: parse_svf_spec(v, cfg.base_dir) for k, v in families_src.items()}
    except (ValueError, OSError) as exc:
        raise ConfigError(f"'families': {exc}") from None
    base = cfg.check_config()
    t = DEFAULT_T if cfg.t is None else cfg.t
    report = run_suite(families, base, cfg.m_values, cfg.c_values, t, cfg.t_target, expect)
    _emit(report, cfg)
    return 0 if report.verdict is Verdict.PASS else 1


def cmd_report(path: str, out: str | None = None) -> int:
    try:
        report = CheckReport.from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, ValueError, AttributeError) as exc:
        print(f"error: cannot read report {path}: {exc}", file=sys.stderr)
        return 2
    csv_path = Path(out) if out else Path(path).with_suffix(".csv")
    csv_path.write_text(report.pairs_csv())
    print(report.summary())
    tol = float(report.config_echo.get("tol", 1e-9))
    above = sum(1 for *_, mg in report.pairs if mg > tol)
    print(f"plot data: {csv_path} ({len(report.pairs)} rows, {above} with margin > tol)")
    return 0


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hmconcave", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with run settings")
        sp.add_argument("--m", type=float)
        sp.add_argument("--c", type=float)
        sp.add_argument("--t", type=float, help="fixed t (t-concave, kuhn, chain) or target t (bd-approx)")
        sp.add_argument("--tol", type=float)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--depth", type=int, help="dyadic depth")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--budget", type=int, help="random samples for falsify")
        sp.add_argument("--grid", help='"nx,ny,nt"')
        sp.add_argument("--jobs", type=int)
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"))

    for name in ("check", "falsify"):
        sp = sub.add_parser(name)
        sp.add_argument("--property")
        sp.add_argument("--svf", action="append", help='e.g. kind=box expr="x" domain=[0.5,8]')
        common(sp)
    common(sub.add_parser("suite"))
    rp = sub.add_parser("report")
    rp.add_argument("path")
    rp.add_argument("--out", help="CSV output (default: report path with .csv)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "report":
        return cmd_report(args.path, args.out)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = build_config(args.command, flags, args.config)
        return {"check": cmd_check, "falsify": cmd_falsify, "suite": cmd_suite}[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
