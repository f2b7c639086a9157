"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 under-resolved or
inconsistent hole geometry, 4 solver non-convergence.

Settings may also come from an INI-style file given with ``--config``; keys
live in a ``[run]`` section and use the long flag names with dashes or
underscores (``n = 16``, ``c0 = 0.5``, ``eps-list = 1/2,1/3``). Flags given
on the command line win over the file.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import analysis
from .errors import (
    GeometryError,
    InvalidConfigError,
    NonConvergenceError,
    ShapeError,
)
from .field import ScalarField, is_power_of_two, make_grid, norm
from .homogenized import HomogenizedProblem, solve_homogenized
from .multigrid import MgConfig
from .output import versions, write_atomic, write_json
from .perforated import build_mask, make_perforation, parse_epsilon, solve_perforated

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_NONCONVERGENCE = 4

COMMAND_DEFAULTS = {
    "solve-homogenized": {"n": 16},
    "solve-perforated": {"n": 256, "epsilon": "1/2"},
    "compare": {"n": 1024, "eps_list": "1/2,1/3"},
    "reproduce-table1": {},
    "calibrate": {},
}


@dataclass
class RunConfig:
    subcommand: str
    n: int = 16
    c0: float = 0.5
    epsilon: str | None = None
    eps_list: str | None = None
    f_const: float = 1.0
    f_file: str | None = None
    t: float = 10.0
    stop_tol: float | None = None
    cg_tol: float = 1e-10
    mg_pre: int = 2
    mg_post: int = 2
    mg_max_cycles: int = 50
    mg_tol: float = 1e-12
    mg_coarsest: int = 2
    jacobi: bool = False
    baseline_mu0: bool = False
    jobs: int = 1
    timings: bool = False
    out: str = "out"

    def mg(self) -> MgConfig:
        return MgConfig(
            pre_smooth=self.mg_pre,
            post_smooth=self.mg_post,
            max_cycles=self.mg_max_cycles,
            target_residual_linf=self.mg_tol,
            coarsest_n=self.mg_coarsest,
        )

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        d.pop("timings")
        return d


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw: str):
    kind = _TYPES[name]
    try:
        if kind == "bool":
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if kind == "int":
            return int(raw)
        if kind in ("float", "float | None"):
            return float(raw)
    except ValueError as exc:
        raise InvalidConfigError(f"bad value {raw!r} for {name}") from exc
    return raw.strip()


def load_config_file(path) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise InvalidConfigError(f"cannot read config file {path}: {exc}") from exc
    if not parser.has_section("run"):
        raise InvalidConfigError(f"config file {path} has no [run] section")
    out = {}
    for key, raw in parser.items("run"):
        name = key.replace("-", "_")
        if name not in _TYPES or name == "subcommand":
            raise InvalidConfigError(f"unknown config key {key!r}")
        out[name] = _coerce(name, raw)
    return out


def _add_common(p: argparse.ArgumentParser, *, grid=True, source=True):
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="INI file with a [run] section")
    p.add_argument("--out", default=S, help="output directory (default: out)")
    if grid:
        p.add_argument("--n", type=int, default=S, help="cells per side")
    if source:
        p.add_argument("--c0", type=float, default=S, help="hole-radius constant C0 (default 0.5)")
        p.add_argument("--f-const", dest="f_const", type=float, default=S, help="constant source (default 1)")
        p.add_argument("--f-file", dest="f_file", default=S, help="source field CSV in table layout")
        p.add_argument("--t", type=float, default=S, help="boundary temperature (default 10)")


def _add_mg(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    p.add_argument("--stop-tol", dest="stop_tol", type=float, default=S,
                   help="fixed-point stop tolerance on |G_k+1 - G_k| (default 1e-10 max(1,|f|))")
    p.add_argument("--mg-pre", dest="mg_pre", type=int, default=S)
    p.add_argument("--mg-post", dest="mg_post", type=int, default=S)
    p.add_argument("--mg-max-cycles", dest="mg_max_cycles", type=int, default=S)
    p.add_argument("--mg-tol", dest="mg_tol", type=float, default=S)
    p.add_argument("--mg-coarsest", dest="mg_coarsest", type=int, default=S)


def _add_cg(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    p.add_argument("--cg-tol", dest="cg_tol", type=float, default=S, help="CG relative residual (default 1e-10)")
    p.add_argument("--jacobi", action="store_true", default=S, help="diagonal-preconditioned CG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homogplate",
        description="Perforated plate vs. its homogenized limit with the strange absorption term.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve-homogenized", help="fixed-point multigrid solve of the limit problem")
    _add_common(p)
    _add_mg(p)

    p = sub.add_parser("solve-perforated", help="direct solve on the perforated plate")
    _add_common(p)
    _add_cg(p)
    p.add_argument("--eps", dest="epsilon", default=argparse.SUPPRESS, help="cell size as a fraction, e.g. 1/3")

    p = sub.add_parser("compare", help="epsilon sweep: perforated vs homogenized")
    _add_common(p)
    _add_mg(p)
    _add_cg(p)
    p.add_argument("--eps-list", dest="eps_list", default=argparse.SUPPRESS, help="comma-separated fractions")
    p.add_argument("--baseline-mu0", dest="baseline_mu0", action="store_true", default=argparse.SUPPRESS,
                   help="also compare against the mu = 0 solution")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="parallel epsilon solves (default 1)")
    p.add_argument("--timings", action="store_true", default=argparse.SUPPRESS,
                   help="write per-epsilon wall times to timings.json")

    p = sub.add_parser("reproduce-table1", help="the 16 x 16 preset table and its structural checks")
    _add_common(p, grid=False, source=False)
    _add_mg(p)

    p = sub.add_parser("calibrate", help="compare unit conventions against the published table")
    _add_common(p, grid=False, source=False)
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = dict(COMMAND_DEFAULTS[ns.subcommand])
    given = vars(ns).copy()
    cfg_path = given.pop("config", None)
    if cfg_path is not None:
        values.update(load_config_file(cfg_path))
    values.update(given)
    cfg = RunConfig(**values)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    needs_mg = cfg.subcommand in ("solve-homogenized", "compare")
    if cfg.n < 2:
        raise InvalidConfigError(f"--n must be >= 2, got {cfg.n}")
    if needs_mg and not is_power_of_two(cfg.n):
        raise InvalidConfigError(f"--n must be a power of two, got {cfg.n}")
    if not cfg.c0 > 0:
        raise InvalidConfigError("--c0 must be positive")
    if cfg.stop_tol is not None and not cfg.stop_tol > 0:
        raise InvalidConfigError("--stop-tol must be positive")
    if not cfg.cg_tol > 0:
        raise InvalidConfigError("--cg-tol must be positive")
    if cfg.jobs < 1:
        raise InvalidConfigError("--jobs must be >= 1")
    if cfg.subcommand == "solve-perforated":
        parse_epsilon(cfg.epsilon or "")
    if cfg.subcommand == "compare":
        eps = [e for e in (cfg.eps_list or "").split(",") if e.strip()]
        if not eps:
            raise InvalidConfigError("--eps-list is empty")
        for e in eps:
            parse_epsilon(e)
    cfg.mg()


def source_field(cfg: RunConfig, n: int) -> ScalarField:
    grid = make_grid(n)
    if cfg.f_file:
        try:
            values = analysis.read_table_csv(Path(cfg.f_file).read_text())
        except (OSError, ValueError) as exc:
            raise InvalidConfigError(f"cannot read source field {cfg.f_file}: {exc}") from exc
        if values.shape != grid.shape:
            raise InvalidConfigError(f"source field has shape {values.shape}, expected {grid.shape}")
        return ScalarField(grid, values)
    return ScalarField.constant(grid, cfg.f_const)


def _metadata(cfg: RunConfig, **results) -> dict:
    return {"command": cfg.subcommand, "config": cfg.echo(), "versions": versions(), "results": results}


def cmd_solve_homogenized(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    f = source_field(cfg, cfg.n)
    p = HomogenizedProblem(c0=cfg.c0, t_boundary=cfg.t, f=f)
    u, _, trace = solve_homogenized(p, cfg.mg(), cfg.stop_tol)
    write_atomic(out / "table.csv", analysis.table_csv(analysis.rounded_table(u)))
    write_atomic(out / "solution_full.csv", analysis.full_precision_csv(u))
    write_atomic(out / "trace.csv", analysis.trace_csv(trace))
    meta = _metadata(
        cfg,
        mu=p.mu,
        iterations=trace.iterations,
        final_delta=trace.deltas[-1],
        final_ratio=None if trace.iterations < 3 else trace.final_ratio,
        max_temperature=float(u.values.max()),
    )
    write_json(out / "metadata.json", meta)
    return meta


def cmd_solve_perforated(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    grid = make_grid(cfg.n)
    spec = make_perforation(cfg.epsilon, cfg.c0)
    mask = build_mask(spec, grid)
    f = source_field(cfg, cfg.n)
    u = solve_perforated(spec, grid, f, cfg.t, cfg.cg_tol, jacobi=cfg.jacobi, mask=mask)
    write_atomic(out / "solution.csv", analysis.full_precision_csv(u))
    meta = _metadata(
        cfg,
        holes=spec.count,
        radius=spec.radius,
        hole_nodes=int(mask.holes.sum()),
        active_nodes=int(mask.active.sum()),
        max_temperature=float(u.values.max()),
    )
    write_json(out / "metadata.json", meta)
    return meta


def _eps_slug(eps: str) -> str:
    return eps.replace("/", "-")


def cmd_compare(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    eps = [e.strip() for e in cfg.eps_list.split(",") if e.strip()]
    f = source_field(cfg, cfg.n)
    result = analysis.run_sweep(
        eps,
        cfg.c0,
        cfg.n,
        f,
        cfg.t,
        perforated_rel_tol=cfg.cg_tol,
        stop_tol=cfg.stop_tol,
        mg=cfg.mg(),
        baseline_mu0=cfg.baseline_mu0,
        jobs=cfg.jobs,
        keep_fields=True,
    )
    for name, u in result.fields.items():
        if name.startswith("perforated_extended["):
            name = "perforated_extended_eps_" + _eps_slug(name[len("perforated_extended[") : -1])
        write_atomic(out / f"{name}.csv", analysis.full_precision_csv(u))
    payload = {"config_echo": cfg.echo(), "versions": versions(), **result.to_dict()}
    write_json(out / "sweep.json", payload)
    if cfg.timings:
        write_json(out / "timings.json", {r.epsilon: r.runtime_seconds for r in result.records})
    return payload


def cmd_reproduce_table1(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    report = analysis.reproduce_table1(cfg.stop_tol, cfg.mg())
    write_atomic(out / "table1.csv", report.csv())
    write_atomic(out / "table1_full.csv", analysis.full_precision_csv(report.u))
    write_atomic(out / "trace.csv", analysis.trace_csv(report.trace))
    payload = {
        "preset": analysis.TABLE1_PRESET,
        "checks": report.checks,
        "all_checks_pass": report.ok,
        "iterations": report.trace.iterations,
        "centre_value": report.u.at(8, 8),
        "linf_of_G": norm(ScalarField(report.u.grid, report.u.values - 10.0), "linf"),
        "versions": versions(),
    }
    write_json(out / "table1_report.json", payload)
    print(report.format())
    return payload


def cmd_calibrate(cfg: RunConfig) -> dict:
    out = Path(cfg.out)
    report = analysis.calibrate_convention()
    write_json(out / "calibration.json", {**report, "versions": versions()})
    for row in report["candidates"]:
        flag = "" if row["fixed_point_converges"] else "  (fixed point diverges)"
        print(f"{row['convention']:<34} centre {row['centre_value']:.3f}  "
              f"max deviation {row['linf_deviation']:.3f}{flag}")
    print(report["summary"])
    return report


COMMANDS = {
    "solve-homogenized": cmd_solve_homogenized,
    "solve-perforated": cmd_solve_perforated,
    "compare": cmd_compare,
    "reproduce-table1": cmd_reproduce_table1,
    "calibrate": cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        cfg = resolve_config(ns)
        COMMANDS[cfg.subcommand](cfg)
    except (InvalidConfigError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
