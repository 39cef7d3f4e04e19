"""Entanglement sudden death and revival for Bell-like states.

Two qubits share one Lorentzian reservoir at Omega = 5 Gamma.  Times are in
units of 1/gamma0 with gamma0 = 4 Omega^2 / Gamma.
"""

import numpy as np

from ewldyn import BellPhi, BellPsi, ReservoirParams, detect_events, propagate
from ewldyn.measures import concurrence_components, entropy_components

params = ReservoirParams.strong_coupling()
times = np.linspace(0.0, 100.0, 2001)

# %% Unbalanced two-excitation state: dark periods, then revivals
traj = propagate(BellPsi(0.05), params, times)
ev = detect_events(traj)
print("Bell Psi, alpha^2 = 0.05")
for lo, hi in ev.dark_periods:
    print(f"  dark from {lo:8.3f} to {hi:8.3f}")
print(f"  revivals: {ev.revivals}")

# concurrence and entropy every 10 time units
comp = traj.components()
conc = concurrence_components(*comp)
ent = entropy_components(*comp)
for k in range(0, len(times), 200):
    print(f"  t={times[k]:6.1f}  C={conc[k]:.4f}  S={ent[k]:.4f}")

# %% Balanced state: the concurrence dips but never vanishes
ev = detect_events(propagate(BellPsi(0.5), params, times))
print("\nBell Psi, alpha^2 = 0.5: dark periods", ev.dark_periods)

# %% One excitation: zeros are isolated instants, never intervals
ev = detect_events(propagate(BellPhi(0.2, 0.0), params, times))
print("\nBell Phi, alpha^2 = 0.2: isolated zeros at",
      ", ".join(f"{t:.3f}" for t in ev.isolated_zeros))
