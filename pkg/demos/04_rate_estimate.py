"""
Heralded pairs per second
=========================

Converting the per-three-pair probability into a rate needs the pair
statistics of the source.  The answer depends on what "5% pair
probability" is taken to mean.
"""

# %%
import math

from heraldsim import rate_estimate

theta = math.acos(math.sqrt(1 / 3))
for meaning in ("exact-one", "at-least-one"):
    est = rate_estimate(0.05, 100e6, theta, eta=1.0, meaning=meaning)
    print(
        f"{meaning:>13}: r = {est.r:.4f}, "
        f"P(fourfold) = {est.coincidence_probability:.3e}, "
        f"{est.pairs_per_second:.1f} pairs/s at 100 MHz"
    )
