"""Gauge functions, the null Lagrangians they generate, and the forces they define.

A gauge set holds four functions of time f1, f2, f4, f6 which multiply the
partial gauge functions

    phi1 = f1 x^2 / 2,  phi2 = f2 x t,  phi3 = f4 x,  phi4 = f6 t.

Their total time derivative is a null Lagrangian. Added to the standard
oscillator Lagrangian it leaves the equation of motion unchanged but
shifts the energy function by ``-dPhi/dt|explicit``, and that shift is
read off as a driving force ``F(t) = f2 + t f2' + f4'`` and an energy
offset ``G(t) = f6 + t f6'``. All quantities are per unit mass.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple

from .calculus import energy_function, is_null, vanishes_identically
from .errors import InternalNullViolation, InvalidGauge
from .expr import (
    Expr,
    T,
    V,
    X,
    ZERO,
    as_expr,
    diff,
    simplify,
    total_time_derivative,
    variables,
)

HALF = as_expr(0.5)


def _time_function(value, label) -> Expr:
    e = simplify(as_expr(value))
    extra = variables(e) - {"t"}
    if extra:
        raise InvalidGauge(f"{label} must depend on t only, found {sorted(extra)}")
    return e


@dataclass(frozen=True)
class GaugeSet:
    """The four coefficient functions of a gauge function.

    There is no f3 or f5: the null condition forces the ``x t``
    coefficient to zero and ties the ``x`` coefficient to f2, so the shape
    of the gauge function already encodes it.
    """

    f1: Expr = ZERO
    f2: Expr = ZERO
    f4: Expr = ZERO
    f6: Expr = ZERO

    def __post_init__(self):
        for name in ("f1", "f2", "f4", "f6"):
            object.__setattr__(self, name, _time_function(getattr(self, name), name))

    @property
    def primary(self) -> bool:
        """True when every coefficient is a constant."""
        return all("t" not in variables(f) for f in self.functions())

    def functions(self) -> tuple[Expr, Expr, Expr, Expr]:
        return (self.f1, self.f2, self.f4, self.f6)

    def __add__(self, other: "GaugeSet") -> "GaugeSet":
        return GaugeSet(*(a + b for a, b in zip(self.functions(), other.functions())))

    def scaled(self, k) -> "GaugeSet":
        return GaugeSet(*(as_expr(k) * f for f in self.functions()))

    def to_dict(self) -> dict:
        return {"f1": str(self.f1), "f2": str(self.f2), "f4": str(self.f4),
                "f6": str(self.f6), "primary": self.primary}


def primary_gauge(C1=0, C2=0, C4=0, C6=0) -> GaugeSet:
    """Gauge set with constant coefficients (numbers or constant names)."""
    return GaugeSet(C1, C2, C4, C6)


@dataclass(frozen=True)
class LagrangianSpec:
    """Structured Lagrangian ``C_o/2 (v^2 - c x^2) + dPhi/dt + F(t) x + G(t)``.

    ``c`` is omega0^2 (or omega_p^2 for a pendulum). The gauge and drive
    parts are optional; ``drive`` is a ``(force, shift)`` pair.
    ``constants`` binds named constants for numerical evaluation.
    """

    c: Expr = field(default_factory=lambda: as_expr("omega0^2"))
    C_o: Expr = field(default_factory=lambda: as_expr(1))
    gauge: GaugeSet | None = None
    drive: tuple[Expr, Expr] | None = None
    constants: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "c", as_expr(self.c))
        object.__setattr__(self, "C_o", as_expr(self.C_o))
        if self.drive is not None:
            force, shift = self.drive
            object.__setattr__(self, "drive", (_time_function(force, "force"),
                                               _time_function(shift, "shift")))
        object.__setattr__(self, "constants", dict(self.constants))

    def standard(self) -> Expr:
        return simplify(HALF * self.C_o * (V**2 - self.c * X**2))

    def assembled(self) -> Expr:
        """The full Lagrangian with every configured part."""
        L = self.standard()
        if self.gauge is not None:
            L = L + null_lagrangian_from_gauge(self.gauge)
        if self.drive is not None:
            force, shift = self.drive
            L = L + force * X + shift
        return simplify(L)


def gauge_scalar(g: GaugeSet) -> Expr:
    """Phi(t, x) = f1 x^2/2 + f2 x t + f4 x + f6 t."""
    return simplify(HALF * g.f1 * X**2 + g.f2 * X * T + g.f4 * X + g.f6 * T)


def partial_gauges(g: GaugeSet) -> tuple[Expr, Expr, Expr, Expr]:
    return (
        simplify(HALF * g.f1 * X**2),
        simplify(g.f2 * X * T),
        simplify(g.f4 * X),
        simplify(g.f6 * T),
    )


def null_lagrangian_from_gauge(g: GaugeSet, *, certify: bool = True) -> Expr:
    """Total time derivative of the gauge function.

    With ``certify`` the result is checked null before it is returned; a
    failure means the expression machinery is broken.
    """
    L = total_time_derivative(gauge_scalar(g))
    if certify:
        cert = is_null(L)
        if not cert.certified:
            raise InternalNullViolation(
                f"dPhi/dt for {g.to_dict()} is not null: residual {cert.residual}, "
                f"witness {cert.witness}")
    return L


def extract_force(g: GaugeSet) -> tuple[Expr, Expr]:
    """Driving force F(t) = f2 + t f2' + f4' and energy shift G(t) = f6 + t f6'."""
    d = lambda f: diff(f, "t")  # noqa: E731
    force = simplify(g.f2 + d(g.f2) * T + d(g.f4))
    shift = simplify(g.f6 + d(g.f6) * T)
    return force, shift


def frequency_shift(g: GaugeSet, c) -> Expr:
    """Effective squared frequency ``c (1 - f1'/c) = c - f1'``."""
    return simplify(as_expr(c) - diff(g.f1, "t"))


class EnergyDecomposition(NamedTuple):
    standard: Expr
    gauge: Expr
    total: Expr


def energy_decomposition(spec: LagrangianSpec) -> EnergyDecomposition:
    """Split the energy function into the standard and gauge/drive parts.

    ``standard`` is C_o/2 (v^2 + c x^2). ``gauge`` is

        -(f1'/2 x^2 + f2' x t) - ((f2 + f4') x + f6 + f6' t)

    minus ``F(t) x + G(t)`` when a drive is configured.
    """
    standard = simplify(HALF * spec.C_o * (V**2 + spec.c * X**2))
    extra = ZERO
    if spec.gauge is not None:
        g = spec.gauge
        d1, d2, d4, d6 = (diff(f, "t") for f in g.functions())
        extra = -(HALF * d1 * X**2 + d2 * X * T) - ((g.f2 + d4) * X + g.f6 + d6 * T)
    if spec.drive is not None:
        force, shift = spec.drive
        extra = extra - (force * X + shift)
    extra = simplify(extra)
    return EnergyDecomposition(standard, extra, simplify(standard + extra))


def convert_to_driven(spec: LagrangianSpec) -> LagrangianSpec:
    """Replace the gauge part of ``spec`` by the drive it defines.

    The result is ``L_gs + F(t) x + G(t)``; any drive already present is
    added to the extracted one.
    """
    if spec.gauge is None:
        return spec
    force, shift = extract_force(spec.gauge)
    if spec.drive is not None:
        force, shift = simplify(force + spec.drive[0]), simplify(shift + spec.drive[1])
    return replace(spec, gauge=None, drive=(force, shift))


def driven_lagrangian(spec: LagrangianSpec) -> Expr:
    """``C_o/2 (v^2 - c x^2) + F(t) x + G(t)`` from ``spec.drive``.

    Its Euler-Lagrange expression is ``C_o (a + c x) - F(t)``.
    """
    if spec.drive is None:
        raise ValueError("spec has no drive; use convert_to_driven or set drive=(force, shift)")
    force, shift = spec.drive
    return simplify(spec.standard() + force * X + shift)


@dataclass(frozen=True)
class PartialGaugeVerdict:
    name: str
    contributes_to_energy: bool
    contributes_to_force: bool
    role_name: str

    def to_dict(self):
        return {"contributes_to_energy": self.contributes_to_energy,
                "contributes_to_force": self.contributes_to_force,
                "role": self.role_name}


@dataclass(frozen=True)
class GaugeClassification:
    phi1: PartialGaugeVerdict
    phi2: PartialGaugeVerdict
    phi3: PartialGaugeVerdict
    phi4: PartialGaugeVerdict

    def __iter__(self):
        return iter((self.phi1, self.phi2, self.phi3, self.phi4))

    def roles(self) -> dict[str, str]:
        return {p.name: p.role_name for p in self}

    def to_dict(self) -> dict:
        return {p.name: p.to_dict() for p in self}


def classify_gauges(g: GaugeSet, *, constants: Mapping[str, float] | None = None) -> GaugeClassification:
    """Which partial gauge functions reach the energy function and the force.

    phi2 is the F-gauge when f2 + t f2' is not identically zero, phi4 the
    E-gauge when f6 + t f6' is not. phi1 only shifts the frequency (through
    f1') and phi3 only adds the force term f4'; with constant coefficients
    both are inert.
    """
    def nonzero(e):
        return not vanishes_identically(e, constants=constants)

    d1, d2, d4, d6 = (diff(f, "t") for f in g.functions())
    f_part = nonzero(simplify(g.f2 + d2 * T))
    e_part = nonzero(simplify(g.f6 + d6 * T))
    shift1 = nonzero(d1)
    force3 = nonzero(d4)
    return GaugeClassification(
        PartialGaugeVerdict("phi1", shift1, False, "frequency-shift" if shift1 else "inert"),
        PartialGaugeVerdict("phi2", f_part, f_part, "F-gauge" if f_part else "inert"),
        PartialGaugeVerdict("phi3", force3, force3, "force-only" if force3 else "inert"),
        PartialGaugeVerdict("phi4", e_part, False, "E-gauge" if e_part else "inert"),
    )


def check_energy_identity(spec: LagrangianSpec) -> Expr:
    """Difference between the decomposition and the energy of the assembled Lagrangian.

    Simplifies to 0 whenever the decomposition is right.
    """
    return simplify(energy_decomposition(spec).total - energy_function(spec.assembled()))
