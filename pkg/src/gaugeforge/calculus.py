"""Variational operators on Lagrangians L(t, x, v).

The Helmholtz check works on a single second-order equation
``Phi(t, x, v, a) = 0`` that is affine in ``a``. For one dependent
variable the three classical self-adjointness conditions reduce to

(i)   nondegeneracy: ``dPhi/da`` is nowhere zero;
(ii)  first-derivative condition: ``dPhi/dv = D(dPhi/da)``;
(iii) the t-derivative of (ii): ``D(dPhi/dv) = D(D(dPhi/da))``;

where ``D`` is the total time derivative with ``a`` eliminated through the
equation itself. The antisymmetric condition on ``dPhi/dx`` is void with a
single coordinate, so (iii) is what remains of it. The conditions are
checked on ``Phi`` as written, without searching for a multiplier.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError, InvalidLagrangian, NotSecondOrder, TrajectoryTooShort
from .expr import (
    Expr,
    Number,
    as_expr,
    compile_expr,
    constants as constant_names,
    diff,
    evaluate,
    is_zero,
    simplify,
    substitute,
    total_time_derivative,
    variables,
)

VARIABLE_RANGE = 10.0
CONSTANT_RANGE = 5.0
DEFAULT_SAMPLES = 1000
DEFAULT_TOL = 1e-9
SEED_ENV = "GAUGEFORGE_SEED"


def default_seed() -> int:
    """Sampling seed from ``GAUGEFORGE_SEED`` (0 when unset)."""
    return int(os.environ.get(SEED_ENV, "0"))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(default_seed() if seed is None else seed)


def sample_bindings(e: Expr, n: int, rng, fixed: Mapping[str, float] | None = None,
                    names=("t", "x", "v", "a")) -> dict[str, np.ndarray]:
    """Random bindings for every free symbol of ``e``.

    Variables are uniform in [-10, 10] and constants uniform in [-5, 5],
    independently per sample. Names in ``fixed`` keep their given value.
    """
    fixed = dict(fixed or {})
    out = {}
    for name in names:
        out[name] = rng.uniform(-VARIABLE_RANGE, VARIABLE_RANGE, n)
    for name in sorted(constant_names(e)):
        if name in fixed:
            out[name] = np.full(n, float(fixed[name]))
        else:
            out[name] = rng.uniform(-CONSTANT_RANGE, CONSTANT_RANGE, n)
    return out


def _sampled_values(e, bindings, n):
    """Evaluate ``e`` at each sample; samples that hit a pole become NaN."""
    try:
        vals = compile_expr(e)(bindings)
        return np.broadcast_to(np.asarray(vals, dtype=float), (n,)).copy()
    except DomainError:
        pass
    out = np.empty(n)
    for i in range(n):
        try:
            out[i] = evaluate(e, {k: float(val[i]) for k, val in bindings.items()})
        except DomainError:
            out[i] = np.nan
    return out


def _binding_at(bindings, i):
    return {k: float(val[i]) for k, val in bindings.items()}


@dataclass(frozen=True)
class ELResidual:
    """Euler-Lagrange expression ``d/dt(dL/dv) - dL/dx`` of ``source``."""

    residual: Expr
    source: Expr

    def __str__(self):
        return str(self.residual)


def _check_lagrangian(L):
    L = as_expr(L)
    if "a" in variables(L):
        raise InvalidLagrangian("a Lagrangian may depend on t, x and v only, found 'a'")
    return L


def euler_lagrange(L) -> ELResidual:
    L = _check_lagrangian(L)
    residual = simplify(total_time_derivative(diff(L, "v")) - diff(L, "x"))
    return ELResidual(residual, L)


@dataclass(frozen=True)
class NullCertificate:
    """Outcome of :func:`is_null`.

    ``kind`` is ``"certified_symbolic"``, ``"certified_numeric"`` or
    ``"not_null"``; ``witness`` holds the first violating binding.
    """

    kind: str
    max_residual: float
    residual: Expr
    n_samples: int
    tol: float
    witness: dict | None = None

    @property
    def certified(self) -> bool:
        return self.kind != "not_null"

    def to_dict(self) -> dict:
        return {
            "overall": self.certified,
            "certificate": self.kind,
            "residual": str(self.residual),
            "conditions": [
                {"name": "symbolic_zero", "passed": self.kind == "certified_symbolic",
                 "max_violation": None if self.kind == "certified_symbolic" else self.max_residual},
                {"name": "sampled_residual", "passed": self.certified,
                 "max_violation": self.max_residual},
            ],
            "witness": self.witness,
        }


def is_null(L, n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL, *,
            seed=None, constants: Mapping[str, float] | None = None) -> NullCertificate:
    """Certify that ``L`` has an identically vanishing Euler-Lagrange expression.

    The symbolic tier accepts when the simplified residual is literally 0.
    Otherwise the residual is sampled at ``n_samples`` random bindings and
    the first sample with ``|residual| > tol`` is returned as a witness.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    residual = euler_lagrange(L).residual
    if is_zero(residual):
        return NullCertificate("certified_symbolic", 0.0, residual, n_samples, tol)

    rng = _rng(seed)
    bindings = sample_bindings(residual, n_samples, rng, constants)
    values = np.abs(_sampled_values(residual, bindings, n_samples))
    bad = np.flatnonzero(values > tol)
    max_residual = float(np.nanmax(values)) if np.isfinite(values).any() else float("nan")
    if bad.size:
        return NullCertificate("not_null", max_residual, residual, n_samples, tol,
                               witness=_binding_at(bindings, bad[0]))
    return NullCertificate("certified_numeric", max_residual, residual, n_samples, tol)


def vanishes_identically(e, n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL, *,
                         seed=None, constants: Mapping[str, float] | None = None) -> bool:
    """Structural zero test with a sampled fallback."""
    e = as_expr(e)
    if is_zero(e):
        return True
    bindings = sample_bindings(e, n_samples, _rng(seed), constants)
    values = np.abs(_sampled_values(e, bindings, n_samples))
    return bool(np.all(values[np.isfinite(values)] <= tol))


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    max_violation: float
    expression: Expr

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "max_violation": self.max_violation}


@dataclass(frozen=True)
class HelmholtzReport:
    conditions: tuple[ConditionResult, ...]
    equation: Expr
    witness: dict | None = field(default=None)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.conditions)

    def __getitem__(self, name) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "equation": str(self.equation),
            "conditions": [c.to_dict() for c in self.conditions],
            "witness": self.witness,
        }


def helmholtz_check(ode_residual, n_samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL, *,
                    seed=None, constants: Mapping[str, float] | None = None) -> HelmholtzReport:
    """Check the scalar Helmholtz conditions for ``ode_residual = 0``.

    Each condition is first tested symbolically; when the simplifier cannot
    reduce it to 0 it is sampled at ``n_samples`` points of [-10, 10]^3 in
    (t, x, v) with constants drawn from [-5, 5].
    """
    phi = simplify(as_expr(ode_residual))
    lead = diff(phi, "a")
    if is_zero(lead):
        raise NotSecondOrder(f"{phi} does not depend on the acceleration a")
    if not is_zero(diff(lead, "a")):
        raise NotSecondOrder(f"{phi} is not affine in the acceleration a")

    rest = simplify(substitute(phi, {"a": 0}))
    accel = -rest / lead

    def on_shell(e):
        return simplify(substitute(e, {"a": accel}))

    def D(e):
        return on_shell(total_time_derivative(on_shell(e)))

    phi_v = on_shell(diff(phi, "v"))
    first = simplify(phi_v - D(lead))
    second = simplify(D(phi_v) - D(D(lead)))

    rng = _rng(seed)
    probe = simplify(lead + first + second)
    bindings = sample_bindings(probe, n_samples, rng, constants, names=("t", "x", "v"))
    witness = None

    def sampled(e):
        if is_zero(e):
            return np.zeros(n_samples)
        return np.abs(_sampled_values(e, bindings, n_samples))

    lead_abs = sampled(lead) if not isinstance(lead, Number) else np.full(n_samples, abs(float(lead.value)))
    degenerate = lead_abs <= tol
    results = [ConditionResult("nondegeneracy", not degenerate.any(),
                               float(np.max(np.maximum(tol - lead_abs, 0.0))), lead)]
    if degenerate.any():
        witness = _binding_at(bindings, np.flatnonzero(degenerate)[0])

    for name, expr in (("first_derivative", first), ("second_derivative", second)):
        values = sampled(expr)
        finite = values[np.isfinite(values)]
        worst = float(finite.max()) if finite.size else 0.0
        passed = worst <= tol
        if not passed and witness is None:
            witness = _binding_at(bindings, int(np.nanargmax(values)))
        results.append(ConditionResult(name, passed, worst, expr))
    return HelmholtzReport(tuple(results), phi, witness)


def energy_function(L) -> Expr:
    """Energy function ``v*dL/dv - L``."""
    L = _check_lagrangian(L)
    return simplify(as_expr("v") * diff(L, "v") - L)


def _stencil_weights(t: np.ndarray, width: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """First-derivative finite-difference weights on an arbitrary grid.

    Interior points get the centred ``width``-point stencil, points near
    the ends a one-sided one of the same width (fourth order for 5 points).
    Returns ``(index, weights)`` both shaped (n, width).
    """
    n = len(t)
    width = min(width, n)
    start = np.clip(np.arange(n) - width // 2, 0, n - width)
    index = start[:, None] + np.arange(width)[None, :]
    h = np.diff(t).mean()
    offsets = (t[index] - t[:, None]) / h
    powers = np.arange(width)
    # Vandermonde rows: sum_j w_j * offset_j^k = k==1
    vander = offsets[:, None, :] ** powers[None, :, None]
    rhs = np.zeros((n, width))
    rhs[:, 1] = 1.0
    weights = np.linalg.solve(vander, rhs[..., None])[..., 0] / h
    return index, weights


def time_derivative(series, t) -> np.ndarray:
    """d(series)/dt from samples, fourth-order accurate when n >= 5."""
    series = np.asarray(series, dtype=float)
    t = np.asarray(t, dtype=float)
    if len(t) < 3:
        raise TrajectoryTooShort(f"need at least 3 samples, got {len(t)}")
    index, weights = _stencil_weights(t)
    return np.sum(weights * series[index], axis=1)


def energy_balance_residual(L, traj, constants: Mapping[str, float] | None = None) -> np.ndarray:
    """Per-sample ``dE/dt + dL/dt|explicit`` along a sampled trajectory.

    ``dE/dt`` comes from finite differences of the sampled energy function
    so the check applies to numerically integrated trajectories; the
    explicit time derivative of ``L`` is evaluated symbolically.
    """
    L = _check_lagrangian(L)
    t = np.asarray(traj.t, dtype=float)
    if len(t) < 3:
        raise TrajectoryTooShort(f"need at least 3 samples, got {len(t)}")
    bindings = {"t": t, "x": np.asarray(traj.x, float), "v": np.asarray(traj.v, float)}
    bindings.update(constants or {})
    shape = t.shape
    energy = np.broadcast_to(compile_expr(energy_function(L))(bindings), shape)
    explicit = np.broadcast_to(compile_expr(diff(L, "t"))(bindings), shape)
    return time_derivative(energy, t) + explicit
