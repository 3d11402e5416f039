"""Run configuration files.

INI-style text with ``[section]`` headers and ``key = value`` lines.
Expression values may be quoted. Sections:

============  ==========================================================
[system]      mode, one of omega0 | k,m | g,L_pend | c, x0, v0, t0,
              t_end, dt, C_o
[gauge]       f1, f2, f4, f6 (all four required). Several sections
              named ``[gauge:<label>]`` form a sweep.
[drive]       force, shift: explicit F(t), G(t) used instead of a gauge
[constants]   name = value for every named constant
[output]      dir, format (csv|json)
[tolerances]  null_tol, balance_tol, samples
[helmholtz]   ode
============  ==========================================================

Defaults for every optional key live in :data:`DEFAULTS`.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError, ExprSyntaxError, GaugeForgeError, UnknownIdentifier
from .expr import Expr, parse

DEFAULTS = {
    "system": {"mode": "oscillator", "x0": 1.0, "v0": 0.0, "t0": 0.0, "t_end": 10.0,
               "dt": 1e-3, "C_o": 1.0},
    "output": {"dir": "gaugeforge-out", "format": "csv"},
    "tolerances": {"null_tol": 1e-9, "balance_tol": 1e-5, "samples": 1000},
}

SYSTEM_KEYS = {"mode", "omega0", "k", "m", "g", "L_pend", "c", "x0", "v0", "t0", "t_end", "dt", "C_o"}
GAUGE_KEYS = ("f1", "f2", "f4", "f6")
DRIVE_KEYS = {"force", "shift"}
SECTIONS = {"system", "drive", "constants", "output", "tolerances", "helmholtz"}


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
        return value[1:-1]
    return value


def _number(value, key) -> float:
    try:
        return float(_unquote(str(value)))
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}", key) from None


@dataclass
class RunConfig:
    system: dict = field(default_factory=dict)
    gauges: dict[str, dict[str, str]] = field(default_factory=dict)
    drive: dict[str, str] | None = None
    constants: dict[str, float] = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    helmholtz: dict[str, str] = field(default_factory=dict)

    def expression(self, text: str, key: str) -> Expr:
        """Parse ``text`` allowing only the declared constants."""
        try:
            return parse(text, constants=self.constants)
        except (ExprSyntaxError, UnknownIdentifier) as exc:
            raise ConfigError(str(exc), key) from None

    def resolved(self) -> dict:
        """Config with defaults filled in, as echoed in every report."""
        out = {
            "system": dict(self.system),
            "constants": dict(self.constants),
            "output": dict(self.output),
            "tolerances": dict(self.tolerances),
        }
        if self.gauges:
            out["gauge"] = {name: dict(g) for name, g in self.gauges.items()}
        if self.drive is not None:
            out["drive"] = dict(self.drive)
        if self.helmholtz:
            out["helmholtz"] = dict(self.helmholtz)
        return out

    def gauge_sets(self):
        """``{label: GaugeSet}`` for every gauge section."""
        from .gauge import GaugeSet

        if not self.gauges:
            raise ConfigError("no [gauge] section", "gauge")
        out = {}
        for label, block in self.gauges.items():
            exprs = {k: self.expression(block[k], f"{label}.{k}") for k in GAUGE_KEYS}
            try:
                out[label] = GaugeSet(**exprs)
            except GaugeForgeError as exc:
                raise ConfigError(str(exc), label) from None
        return out

    def oscillator(self):
        from .dynamics import OscillatorConfig

        sys = self.system
        kwargs = {k: sys[k] for k in sys if k not in ("C_o",)}
        try:
            return OscillatorConfig(**kwargs)
        except GaugeForgeError as exc:
            raise ConfigError(str(exc), "system") from None


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    parser.optionxform = str  # keep C_o, L_pend, constant names as written
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None

    cfg = RunConfig()
    for section in parser.sections():
        if section == "gauge" or section.startswith("gauge:"):
            block = {k: _unquote(v) for k, v in parser[section].items()}
            missing = [k for k in GAUGE_KEYS if k not in block]
            if missing:
                raise ConfigError("missing key", f"{section}.{missing[0]}")
            unknown = sorted(set(block) - set(GAUGE_KEYS))
            if unknown:
                raise ConfigError("unknown key", f"{section}.{unknown[0]}")
            cfg.gauges[section] = block
        elif section not in SECTIONS:
            raise ConfigError("unknown section", section)

    if parser.has_section("constants"):
        cfg.constants = {k: _number(v, f"constants.{k}") for k, v in parser["constants"].items()}

    system = dict(DEFAULTS["system"])
    if parser.has_section("system"):
        for k, v in parser["system"].items():
            if k not in SYSTEM_KEYS:
                raise ConfigError("unknown key", f"system.{k}")
            system[k] = _unquote(v) if k == "mode" else _number(v, f"system.{k}")
    cfg.system = system

    if parser.has_section("drive"):
        block = {k: _unquote(v) for k, v in parser["drive"].items()}
        unknown = sorted(set(block) - DRIVE_KEYS)
        if unknown:
            raise ConfigError("unknown key", f"drive.{unknown[0]}")
        if "force" not in block:
            raise ConfigError("missing key", "drive.force")
        block.setdefault("shift", "0")
        cfg.drive = block

    output = dict(DEFAULTS["output"])
    if parser.has_section("output"):
        output.update({k: _unquote(v) for k, v in parser["output"].items()})
    if output["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json", "output.format")
    cfg.output = output

    tol = dict(DEFAULTS["tolerances"])
    if parser.has_section("tolerances"):
        for k, v in parser["tolerances"].items():
            if k not in tol:
                raise ConfigError("unknown key", f"tolerances.{k}")
            tol[k] = _number(v, f"tolerances.{k}")
    tol["samples"] = int(tol["samples"])
    for k, v in tol.items():
        if not v > 0:
            raise ConfigError("must be positive", f"tolerances.{k}")
    cfg.tolerances = tol

    if parser.has_section("helmholtz"):
        cfg.helmholtz = {k: _unquote(v) for k, v in parser["helmholtz"].items()}
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)
