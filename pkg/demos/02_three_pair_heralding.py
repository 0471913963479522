"""
Heralding a Bell pair from three down-converted pairs
=====================================================

The three-pair component is the lowest order that can fire all four
trigger detectors, and when it does, the outputs hold exactly
``(|1,0;1,0> + |0,1;0,1>)/sqrt(2)``.
"""

# %%
import math

import numpy as np

from heraldsim import (
    SetupParams,
    ideal_herald,
    intermediate_collapse,
    p_ideal_formula,
    psi_n,
    serialize,
)

setup = SetupParams.from_power_transmission(1 / 3)
out = ideal_herald(psi_n(3), setup)
print(f"P = {out.probability:.6f}   (2/9)^3 = {(2 / 9) ** 3:.6f}   F = {out.fidelity:.12f}")
(weight, state), = out.conditional.branches
print(serialize(state))

# %%
# Step by step: one click in each of e_x, e_y leaves the b-beam in a
# superposition that the f-detectors then collapse onto the Bell state.
print(intermediate_collapse(psi_n(3), setup).compact().normalized())

# %%
# Efficiency against power transmission of both beam splitters.
for t in np.linspace(0.1, 0.9, 9):
    theta = math.acos(math.sqrt(t))
    sim = ideal_herald(psi_n(3), SetupParams(theta, theta)).probability
    print(f"cos^2 = {t:.1f}   P_sim = {sim:.6e}   P_formula = {p_ideal_formula(theta, theta):.6e}")

# %%
# The four-pair term contaminates the herald at a comparable rate.
print(f"P(n=4) = {ideal_herald(psi_n(4), setup).probability:.4e}")
