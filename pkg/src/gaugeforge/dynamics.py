"""Fixed-step RK4 integration of x'' + c x = F(t) with energy tracking.

Pendulum mode is the linear (small-angle) pendulum: x is the angle in
radians and c = g / L_pend.
"""
from __future__ import annotations

import io
import math
import warnings
from dataclasses import asdict, dataclass, replace
from typing import Callable, Mapping

import numpy as np

from .calculus import energy_balance_residual, energy_function
from .errors import (
    ConflictingParameters,
    ForceContainsState,
    InvalidParameter,
    NonFiniteState,
    NotSecondOrder,
)
from .expr import ZERO, as_expr, compile_expr, diff, is_zero, simplify, substitute, variables

MODES = ("oscillator", "pendulum")


class NonOscillatoryWarning(UserWarning):
    """c <= 0: solutions grow or drift instead of oscillating."""


@dataclass(frozen=True)
class OscillatorConfig:
    """System parameters, initial state and time grid.

    Give exactly one of ``omega0``, ``(k, m)``, ``(g, L_pend)`` or ``c``.
    """

    mode: str = "oscillator"
    omega0: float | None = None
    k: float | None = None
    m: float | None = None
    g: float | None = None
    L_pend: float | None = None
    c: float | None = None
    x0: float = 1.0
    v0: float = 0.0
    t0: float = 0.0
    t_end: float = 10.0
    dt: float = 1e-3

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidParameter(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.dt > 0:
            raise InvalidParameter(f"dt must be positive, got {self.dt}")
        if not self.t_end > self.t0:
            raise InvalidParameter(f"t_end ({self.t_end}) must exceed t0 ({self.t0})")
        self.parameterization  # validates

    @property
    def parameterization(self) -> str:
        given = {
            "omega0": self.omega0 is not None,
            "spring": self.k is not None or self.m is not None,
            "gravity": self.g is not None or self.L_pend is not None,
            "c": self.c is not None,
        }
        chosen = [name for name, present in given.items() if present]
        if len(chosen) != 1:
            raise ConflictingParameters(
                f"give exactly one of omega0, (k, m), (g, L_pend) or c; got {chosen or 'none'}")
        kind = chosen[0]
        pairs = {"spring": ("k", "m"), "gravity": ("g", "L_pend")}
        for name in pairs.get(kind, ()):
            value = getattr(self, name)
            if value is None:
                raise InvalidParameter(f"{name} is required with the {kind} parameterization")
            if not value > 0:
                raise InvalidParameter(f"{name} must be positive, got {value}")
        if kind == "omega0" and not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise InvalidParameter(f"omega0 must be finite and non-negative, got {self.omega0}")
        return kind

    @property
    def stiffness(self) -> float:
        """The coefficient c in x'' + c x = F(t)."""
        if self.parameterization == "c":
            return float(self.c)
        return derive_frequency(self) ** 2

    @property
    def oscillatory(self) -> bool:
        return self.stiffness > 0


def derive_frequency(cfg: OscillatorConfig) -> float:
    """Characteristic frequency sqrt(k/m), sqrt(g/L_pend), omega0 or sqrt(c).

    For c <= 0 there is no oscillation; the returned value is the rate
    sqrt(|c|) and a :class:`NonOscillatoryWarning` is issued.
    """
    kind = cfg.parameterization
    if kind == "omega0":
        w = float(cfg.omega0)
    elif kind == "spring":
        w = math.sqrt(cfg.k / cfg.m)
    elif kind == "gravity":
        w = math.sqrt(cfg.g / cfg.L_pend)
    else:
        c = float(cfg.c)
        if c <= 0:
            warnings.warn(f"c = {c} <= 0: the system is not oscillatory", NonOscillatoryWarning,
                          stacklevel=2)
        w = math.sqrt(abs(c))
    if not math.isfinite(w):
        raise InvalidParameter(f"derived frequency is not finite ({w})")
    return w


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    E: np.ndarray | None = None
    H: np.ndarray | None = None
    balance_residual: np.ndarray | None = None

    COLUMNS = ("t", "x", "v", "E", "H", "balance_residual")

    def __len__(self):
        return len(self.t)

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.E - self.E[0])))

    @property
    def hamiltonian_drift(self) -> float:
        return float(np.max(np.abs(self.H - self.H[0])))

    @property
    def max_balance_residual(self) -> float:
        return float(np.max(np.abs(self.balance_residual)))

    def summary(self) -> dict:
        out = {"samples": len(self)}
        if self.E is not None:
            out["max_energy_drift"] = self.energy_drift
        if self.H is not None:
            out["max_hamiltonian_drift"] = self.hamiltonian_drift
        if self.balance_residual is not None:
            out["max_balance_residual"] = self.max_balance_residual
        return out

    def to_csv(self, path=None) -> str:
        """CSV with header ``t,x,v,E,H,balance_residual`` at 17 significant digits.

        Missing columns are left empty. Returns the text and also writes it
        to ``path`` when given.
        """
        cols = [getattr(self, name) for name in self.COLUMNS]
        buf = io.StringIO()
        buf.write(",".join(self.COLUMNS) + "\n")
        for i in range(len(self)):
            buf.write(",".join("" if c is None else format(float(c[i]), ".17g") for c in cols))
            buf.write("\n")
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="\n") as fh:
                fh.write(text)
        return text

    def to_dict(self) -> dict:
        return {name: None if getattr(self, name) is None else getattr(self, name).tolist()
                for name in self.COLUMNS}


def time_grid(t0: float, t_end: float, dt: float) -> np.ndarray:
    """Uniform grid from t0 with step dt; the last point is exactly t_end.

    When the span is not a whole number of steps the final step is shorter.
    """
    span = t_end - t0
    n = int(math.floor(span / dt + 1e-9))
    t = t0 + dt * np.arange(n + 1)
    if abs(t[-1] - t_end) <= 1e-9 * max(1.0, abs(t_end)):
        t[-1] = t_end
    else:
        t = np.append(t, t_end)
    return t


def integrate(accel: Callable[[float, float, float], float], x0: float, v0: float,
              times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical RK4 for x' = v, v' = accel(t, x, v) on the given time points.

    ``times`` may be non-uniform or decreasing. Raises
    :class:`NonFiniteState` at the first step that overflows.
    """
    times = np.asarray(times, dtype=float).tolist()
    n = len(times)
    xs = np.empty(n)
    vs = np.empty(n)
    x, v = float(x0), float(v0)
    xs[0], vs[0] = x, v
    for i in range(n - 1):
        t, h = times[i], times[i + 1] - times[i]
        half = 0.5 * h
        k1x, k1v = v, accel(t, x, v)
        k2x, k2v = v + half * k1v, accel(t + half, x + half * k1x, v + half * k1v)
        k3x, k3v = v + half * k2v, accel(t + half, x + half * k2x, v + half * k2v)
        k4x, k4v = v + h * k3v, accel(t + h, x + h * k3x, v + h * k3v)
        x = x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        if not (math.isfinite(x) and math.isfinite(v)):
            raise NonFiniteState(i + 1, times[i + 1])
        xs[i + 1], vs[i + 1] = x, v
    return xs, vs


def _force_table(force, times, constants):
    """F at every grid point and step midpoint, keyed by time."""
    mids = times[:-1] + 0.5 * np.diff(times)
    points = np.concatenate([times, mids])
    values = np.broadcast_to(compile_expr(force)({"t": points, **constants}), points.shape)
    return dict(zip(points.tolist(), values.tolist()))


def simulate(cfg: OscillatorConfig, force=ZERO, constants: Mapping[str, float] | None = None) -> Trajectory:
    """Integrate x'' + c x = F(t) from (x0, v0) over [t0, t_end]."""
    force = simplify(as_expr(force))
    state = variables(force) - {"t"}
    if state:
        raise ForceContainsState(f"force may depend on t only, found {sorted(state)}")
    constants = dict(constants or {})
    c = cfg.stiffness
    if c <= 0:
        warnings.warn(f"c = {c} <= 0: integrating a non-oscillatory system", NonOscillatoryWarning,
                      stacklevel=2)
    times = time_grid(cfg.t0, cfg.t_end, cfg.dt)
    if is_zero(force):
        def accel(t, x, v):
            return -c * x
    else:
        table = _force_table(force, times, constants)
        fn = compile_expr(force)

        def accel(t, x, v):
            f = table.get(t)
            if f is None:
                f = float(fn({"t": t, **constants}))
            return f - c * x

    xs, vs = integrate(accel, cfg.x0, cfg.v0, times)
    return Trajectory(times, xs, vs)


def simulate_residual(cfg: OscillatorConfig, residual, constants: Mapping[str, float] | None = None) -> Trajectory:
    """Integrate the equation ``residual(t, x, v, a) = 0`` solved for a.

    Only the time grid and initial state of ``cfg`` are used.
    """
    residual = simplify(as_expr(residual))
    lead = diff(residual, "a")
    if is_zero(lead) or not is_zero(diff(lead, "a")):
        raise NotSecondOrder(f"{residual} is not affine in a with a non-zero coefficient")
    accel_expr = simplify(-substitute(residual, {"a": 0}) / lead)
    fn = compile_expr(accel_expr)
    constants = dict(constants or {})

    def accel(t, x, v):
        return float(fn({"t": t, "x": x, "v": v, **constants}))

    times = time_grid(cfg.t0, cfg.t_end, cfg.dt)
    xs, vs = integrate(accel, cfg.x0, cfg.v0, times)
    return Trajectory(times, xs, vs)


def track_energy(traj: Trajectory, spec) -> Trajectory:
    """Attach the energy function, the Hamiltonian 1/2 (v^2 + c x^2) and the balance residual.

    ``spec`` is a :class:`~gaugeforge.gauge.LagrangianSpec`; the energy is
    that of its assembled Lagrangian, evaluated sample by sample.
    """
    L = spec.assembled()
    bindings = {"t": traj.t, "x": traj.x, "v": traj.v, **spec.constants}
    shape = traj.t.shape
    E = np.broadcast_to(compile_expr(energy_function(L))(bindings), shape).astype(float)
    H_expr = simplify(as_expr(0.5) * (as_expr("v^2") + spec.c * as_expr("x^2")))
    H = np.broadcast_to(compile_expr(H_expr)(bindings), shape).astype(float)
    residual = energy_balance_residual(L, traj, spec.constants)
    return replace(traj, E=E, H=H, balance_residual=residual)


def config_dict(cfg: OscillatorConfig) -> dict:
    return asdict(cfg)
