"""
Fidelity versus probability under detector loss
===============================================

Inefficient trigger detectors let events with extra reflected photons look
like successes.  Lowering the reflectivity trades probability for fidelity.
This writes the parametric (P, F) curves to ``fig2.csv``.
"""

# %%
import math

from heraldsim import SetupParams, lossy_herald, psi_n
from heraldsim.formulas import MAX_PROBABILITY
from heraldsim.sweep import SweepSpec, curve_maximum, run_sweep, write_csv

theta = math.pi / 4
out = lossy_herald(psi_n(3), SetupParams(theta, theta), 0.8)
for w, ket in out.conditional.branches:
    print(f"{w:.3e}  {ket}")
print(f"P = {out.probability:.4e}, F = {out.fidelity:.4f}")

# %%
spec = SweepSpec(theta_steps=101)
rows = run_sweep(spec, check=True)
write_csv(rows, "fig2.csv")

# %%
# Every curve with eta >= 2/3 reaches the same maximum probability.
for eta in spec.etas:
    t_max, p_max = curve_maximum(eta)
    print(f"eta={eta:.1f}  max P/(2/9)^3 = {p_max / MAX_PROBABILITY:.8f}  at theta={t_max:.4f}")
