"""Slowest-decaying part of the N-photon bound state.

At large separations the N-photon bound state is a product of one two-photon
factor f and N-2 single-photon factors g over the ordered coordinates.
"""
# %%
import numpy as np

from fewphoton import SystemParams, envelope_general, envelope_resonant, f_tau, g_tau, gap_decay_rate

params = SystemParams.resonant(1.0, 0.1, 0.3)
x = np.array([12.0, 3.0, 0.0])
print("envelope:", envelope_resonant(params, x).value)
print("f * g   :", f_tau(params, 9.0) * g_tau(params, 3.0))
print("shuffled:", envelope_resonant(params, x[[2, 0, 1]]).value)

# %% The general form for arbitrary incident frequencies.
print("detuned photons:", envelope_general(params, [0.95, 1.0, 1.05], x).value)

# %% Each gap decays fastest at the exceptional point.
for ratio in (3.0, 4.0, 5.0):
    p = params.replace(kappa=ratio * 0.1)
    print(f"kappa/g = {ratio}: gap rates / g =",
          [round(gap_decay_rate(p, 3, i) / 0.1, 4) for i in (0, 1)])
