"""
Why two pairs never herald
==========================

With two pairs, a fourfold click needs both photons of the b-beam in
``(f_x, f_y)`` as one photon each.  The half-wave rotation turns that into
``(|2,0> - |0,2>)/sqrt(2)``, so the two f-detectors never fire together.
"""

# %%
# Start from the two-pair component and look at the b-arm after BS2.
import math

from heraldsim import PureState, SetupParams, apply_transform, half_wave_rotation, ideal_herald, psi_n

print(psi_n(2))

# %%
# One photon in each of f_x and f_y, rotated by the half-wave plate:
hwp = half_wave_rotation("f_x", "f_y", "f_x'", "f_y'")
print(apply_transform(PureState(("f_x", "f_y"), {(1, 1): 1}), hwp).compact())

# %%
# The coincidence probability is zero for every pair of beam-splitter angles.
for deg in (15, 30, 45, 60, 75):
    theta = math.radians(deg)
    out = ideal_herald(psi_n(2), SetupParams(theta, theta))
    print(f"theta={deg:2d} deg   P(n=2) = {out.raw_probability:.3e}")
