"""Gauge functions for the harmonic oscillator: null Lagrangians, energy functions and driving forces."""
from . import calculus, dynamics, expr, gauge
from .calculus import (
    ELResidual,
    HelmholtzReport,
    NullCertificate,
    energy_balance_residual,
    energy_function,
    euler_lagrange,
    helmholtz_check,
    is_null,
)
from .dynamics import OscillatorConfig, Trajectory, derive_frequency, simulate, simulate_residual, track_energy
from .expr import Expr, diff, evaluate, parse, simplify, total_time_derivative
from .gauge import (
    GaugeSet,
    LagrangianSpec,
    classify_gauges,
    convert_to_driven,
    driven_lagrangian,
    energy_decomposition,
    extract_force,
    gauge_scalar,
    null_lagrangian_from_gauge,
    primary_gauge,
)

__version__ = "0.1.0"
