"""Second-order correlation of the transmitted light.

G2(tau) starts at |1/pi - bound-state weight|^2 and settles onto 1/pi^2. The
approach is quickest at the exceptional point, which makes the EP visible in
a photon-counting experiment.
"""
# %%
import math

import numpy as np

from fewphoton import SystemParams, g2_curve, g2_resonant

g = 0.1
params = SystemParams.resonant(1.0, g, 4 * g)
print("G2(0) =", g2_resonant(params, 0.0), " (11/(5 pi))^2 =", (11 / (5 * math.pi)) ** 2)

# %%
for ratio in (2.0, 3.0, 4.0, 5.0, 6.0):
    p = params.replace(kappa=ratio * g)
    curve = g2_curve(p, 12 / min(p.kappa / 4, g))
    print(f"kappa/g = {ratio}: asymptote {curve.asymptote:.6f}, approach rate / g = {curve.approach_rate / g:.4f}")
