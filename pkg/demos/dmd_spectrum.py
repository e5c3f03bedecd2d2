"""Exact DMD on data with a known spectrum.

Builds a snapshot record from a hand-made linear system (one decaying
direction, one decaying oscillation, plus a fixed-point offset) and
checks that the decomposition recovers every planted eigenvalue, mode
direction, and the trajectory itself.

Run with:  python3 demos/dmd_spectrum.py
"""

import numpy as np

from koopnet import SnapshotMatrix, dmd_of_snapshots, reconstruct, zero_frequency_mode

rng = np.random.default_rng(1)

# planted dynamics: y' = A y around a fixed point f, observed through E
decay = 0.97
radius, angle = 0.90, 0.35
a = np.zeros((3, 3))
a[0, 0] = decay
a[1:, 1:] = radius * np.array([[np.cos(angle), -np.sin(angle)],
                               [np.sin(angle), np.cos(angle)]])
e = rng.normal(size=(6, 3))   # embedding into 6 observed nodes
f = rng.normal(size=6)        # fixed point

y = rng.normal(size=3)
rows = [e @ y + f]
for _ in range(120):
    y = a @ y
    rows.append(e @ y + f)
snapshots = SnapshotMatrix(data=np.array(rows), dt=0.05)

result = dmd_of_snapshots(snapshots)
print(f"retained rank: {result.rank} (planted: 3 dynamic directions + offset)")

print("\ndiscrete eigenvalues (planted: "
      f"{decay}, {radius}*exp(+/-{angle}i), 1.0):")
for lam, mu in zip(result.eigenvalues_discrete, result.eigenvalues_continuous):
    print(f"  lambda = {lam:.6f}   mu = {mu:.4f}")

# ---------------------------------------------------------------------
# The continuous eigenvalues separate rate from frequency
# ---------------------------------------------------------------------
osc = result.eigenvalues_continuous[np.abs(np.imag(result.eigenvalues_continuous)) > 1e-6]
print(f"\noscillating pair frequency: {abs(np.imag(osc[0])):.4f} rad/time "
      f"(planted {angle / snapshots.dt:.4f})")

# ---------------------------------------------------------------------
# The zero-frequency mode picks out non-oscillatory structure: here the
# planted relaxing direction e[:, 0] (the static offset at lambda = 1
# is deliberately passed over in favor of the direction that moves)
# ---------------------------------------------------------------------
zf = zero_frequency_mode(result)
planted = e[:, 0] / np.linalg.norm(e[:, 0])
alignment = abs(np.vdot(zf.mode, planted))
print(f"zero-frequency mode: lambda = {zf.eigenvalue.real:.4f}, "
      f"alignment with the planted relaxing direction: {alignment:.6f}")

# ---------------------------------------------------------------------
# Reconstruction: the modes replay the trajectory
# ---------------------------------------------------------------------
errs = [np.linalg.norm(reconstruct(result, k) - snapshots.data[k])
        for k in range(snapshots.n_snapshots - 1)]
print(f"reconstruction error over the window: max {max(errs):.2e}")
