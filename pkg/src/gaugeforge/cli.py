"""Command line entry point.

Exit codes: 0 ok, 1 negative verdict, 2 config error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from .calculus import energy_function, helmholtz_check, is_null
from .config import RunConfig, load_config
from .dynamics import NonOscillatoryWarning, derive_frequency, simulate, track_energy
from .errors import ConfigError, GaugeForgeError, NonFiniteState, NotSecondOrder
from .expr import parse
from .gauge import (
    LagrangianSpec,
    classify_gauges,
    convert_to_driven,
    extract_force,
    null_lagrangian_from_gauge,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _emit(report: dict, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _fail(message, code, stream=None):
    (stream or sys.stderr).write(f"error: {message}\n")
    return code


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _null_entry(args):
    label, gauge, constants, samples, tol = args
    L = null_lagrangian_from_gauge(gauge, certify=False)
    cert = is_null(L, samples, tol, constants=constants)
    return {"name": label, "lagrangian": str(L), **cert.to_dict()}


def _force_entry(args):
    label, gauge, constants = args
    force, shift = extract_force(gauge)
    return {
        "name": label,
        "force": str(force),
        "shift": str(shift),
        "classification": classify_gauges(gauge, constants=constants).to_dict(),
    }


def _collect(cfg: RunConfig, entries: list[dict]) -> dict:
    if len(entries) == 1:
        report = dict(entries[0])
        report.pop("name")
    else:
        report = {"entries": entries}
    report["config"] = cfg.resolved()
    return report


def cmd_verify_null(cfg: RunConfig, lagrangian: str | None, jobs: int) -> tuple[dict, int]:
    tol = cfg.tolerances
    if lagrangian is not None:
        L = cfg.expression(lagrangian, "--lagrangian")
        cert = is_null(L, tol["samples"], tol["null_tol"], constants=cfg.constants)
        entries = [{"name": "lagrangian", "lagrangian": str(L), **cert.to_dict()}]
    else:
        items = [(label, g, cfg.constants, tol["samples"], tol["null_tol"])
                 for label, g in cfg.gauge_sets().items()]
        entries = _map(_null_entry, items, jobs)
    code = EXIT_OK if all(e["overall"] for e in entries) else EXIT_NEGATIVE
    return _collect(cfg, entries), code


def cmd_derive_force(cfg: RunConfig, jobs: int) -> tuple[dict, int]:
    items = [(label, g, cfg.constants) for label, g in cfg.gauge_sets().items()]
    return _collect(cfg, _map(_force_entry, items, jobs)), EXIT_OK


def _lagrangian_spec(cfg: RunConfig, osc) -> LagrangianSpec:
    c, C_o = osc.stiffness, cfg.system["C_o"]
    if cfg.drive is not None:
        drive = (cfg.expression(cfg.drive["force"], "drive.force"),
                 cfg.expression(cfg.drive["shift"], "drive.shift"))
        return LagrangianSpec(c=c, C_o=C_o, drive=drive, constants=cfg.constants)
    if cfg.gauges:
        gauges = cfg.gauge_sets()
        if len(gauges) != 1:
            raise ConfigError("simulate takes a single gauge section", "gauge")
        (gauge,) = gauges.values()
        spec = LagrangianSpec(c=c, C_o=C_o, gauge=gauge, constants=cfg.constants)
        return convert_to_driven(spec)
    return LagrangianSpec(c=c, C_o=C_o, drive=(0, 0), constants=cfg.constants)


def cmd_simulate(cfg: RunConfig, out_dir: str, fmt: str) -> tuple[dict, int]:
    osc = cfg.oscillator()
    spec = _lagrangian_spec(cfg, osc)
    force, shift = spec.drive
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonOscillatoryWarning)
        omega = derive_frequency(osc)
        traj = simulate(osc, force / spec.C_o, cfg.constants)
    traj = track_energy(traj, spec)

    os.makedirs(out_dir, exist_ok=True)
    if fmt == "json":
        path = os.path.join(out_dir, "trajectory.json")
        with open(path, "w", newline="\n") as fh:
            json.dump(traj.to_dict(), fh)
            fh.write("\n")
    else:
        path = os.path.join(out_dir, "trajectory.csv")
        traj.to_csv(path)

    summary = {
        "omega": omega,
        "oscillatory": osc.oscillatory,
        "force": str(force),
        "shift": str(shift),
        "energy_function": str(energy_function(spec.assembled())),
        **traj.summary(),
        "balance_ok": traj.max_balance_residual <= cfg.tolerances["balance_tol"],
        "trajectory": path,
        "warnings": sorted({str(w.message) for w in caught}),
        "config": cfg.resolved(),
    }
    summary["config"]["output"].update({"dir": out_dir, "format": fmt})
    with open(os.path.join(out_dir, "summary.json"), "w", newline="\n") as fh:
        _emit(summary, fh)
    return summary, EXIT_OK


def cmd_check_helmholtz(cfg: RunConfig, ode: str | None) -> tuple[dict, int]:
    text = ode if ode is not None else cfg.helmholtz.get("ode")
    if text is None:
        raise ConfigError("no ODE given (use --ode or [helmholtz] ode)", "helmholtz.ode")
    phi = parse(text) if not cfg.constants else cfg.expression(text, "ode")
    tol = cfg.tolerances
    report = helmholtz_check(phi, tol["samples"], tol["null_tol"], constants=cfg.constants).to_dict()
    report["config"] = cfg.resolved()
    return report, EXIT_OK if report["overall"] else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="run configuration file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS,
                        help="trajectory file format")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="parallel workers for gauge sweeps")

    parser = argparse.ArgumentParser(prog="gaugeforge", parents=[common],
                                     description="Gauge functions, null Lagrangians and driven oscillators.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify-null", parents=[common], help="certify the gauge null Lagrangian")
    p.add_argument("--lagrangian", help="check this Lagrangian instead of the gauge block")
    sub.add_parser("derive-force", parents=[common], help="extract F(t), G(t) and classify gauges")
    sub.add_parser("simulate", parents=[common], help="integrate the driven oscillator")
    p = sub.add_parser("check-helmholtz", parents=[common], help="scalar Helmholtz conditions")
    p.add_argument("--ode", help="ODE residual Phi(t, x, v, a)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config_path = getattr(args, "config", None)
    jobs = getattr(args, "jobs", 1)
    try:
        if config_path is not None:
            cfg = load_config(config_path)
        elif args.command == "verify-null" and args.lagrangian is not None:
            cfg = RunConfig(system={}, output={}, tolerances=_default_tolerances())
        elif args.command == "check-helmholtz" and args.ode is not None:
            cfg = RunConfig(system={}, output={}, tolerances=_default_tolerances())
        else:
            return _fail("--config is required for this command", EXIT_CONFIG)

        if args.command == "verify-null":
            report, code = cmd_verify_null(cfg, args.lagrangian, jobs)
        elif args.command == "derive-force":
            report, code = cmd_derive_force(cfg, jobs)
        elif args.command == "simulate":
            out_dir = getattr(args, "out", None) or cfg.output["dir"]
            fmt = getattr(args, "format", None) or cfg.output["format"]
            report, code = cmd_simulate(cfg, out_dir, fmt)
        else:
            try:
                report, code = cmd_check_helmholtz(cfg, args.ode)
            except NotSecondOrder as exc:
                return _fail(str(exc), EXIT_CONFIG)
    except NonFiniteState as exc:
        return _fail(str(exc), EXIT_NUMERIC)
    except ConfigError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    except GaugeForgeError as exc:
        return _fail(str(exc), EXIT_CONFIG)
    _emit(report)
    return code


def _default_tolerances():
    from .config import DEFAULTS

    return dict(DEFAULTS["tolerances"])


if __name__ == "__main__":
    sys.exit(main())
