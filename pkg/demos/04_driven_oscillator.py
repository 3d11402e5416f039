"""
Simulating the driven oscillator
================================

RK4 integration of x'' + omega0^2 x = F(t), with the energy function,
the Hamiltonian and the energy balance dE/dt + dL/dt = 0 tracked along
the run.
"""
import numpy as np

from gaugeforge import LagrangianSpec, OscillatorConfig, convert_to_driven, primary_gauge, simulate
from gaugeforge.dynamics import track_energy

# Constant force from the primary gauge with C2 = 0.5, C6 = 1
cfg = OscillatorConfig(omega0=1.0, x0=0.0, v0=0.0)
spec = convert_to_driven(LagrangianSpec(c=1.0, gauge=primary_gauge(0, 0.5, 0, 1)))
traj = track_energy(simulate(cfg, spec.drive[0]), spec)
print("force:", spec.drive[0], " shift:", spec.drive[1])
print("max |x - F/w^2 (1 - cos t)| =", np.max(np.abs(traj.x - 0.5 * (1 - np.cos(traj.t)))))
print("E drift =", traj.energy_drift, " (conserved)")
print("H drift =", traj.hamiltonian_drift, " (not conserved)")

# Resonant drive: the amplitude grows linearly
cfg = OscillatorConfig(omega0=1.0, x0=0.0, v0=0.0, t_end=20.0)
spec = LagrangianSpec(c=1.0, drive=("0.2*sin(t)", "0"))
traj = track_energy(simulate(cfg, spec.drive[0]), spec)
exact = 0.1 * (np.sin(traj.t) - traj.t * np.cos(traj.t))
print("resonance max error =", np.max(np.abs(traj.x - exact)))
print("balance residual    =", traj.max_balance_residual)

# A pendulum with g / L_pend = omega0^2 follows the same trajectory bit for bit
pend = simulate(OscillatorConfig(mode="pendulum", g=9.8, L_pend=9.8, x0=0.1))
osc = simulate(OscillatorConfig(omega0=1.0, x0=0.1))
print("pendulum == oscillator:", np.array_equal(pend.x, osc.x))

print(traj.to_csv().splitlines()[0])
