"""Two-photon bound state across the exceptional point.

On resonance the bound-state profile is a damped oscillator in the photon
separation: underdamped below kappa = 4g, critically damped at it and
overdamped above. The critically damped profile vanishes fastest.
"""
# %%
import numpy as np

from fewphoton import (SystemParams, default_tau_grid, oracle_bound_profile, resonant_profile,
                       tail_decay_rate)

g = 0.1
for ratio in (2.0, 4.0, 6.0):
    params = SystemParams.resonant(1.0, g, ratio * g)
    profile = resonant_profile(params)
    print(f"kappa/g = {ratio}: {profile.regime.value:12s} tail rate / g = {tail_decay_rate(profile) / g:.4f}")

# %% The closed form against direct quadrature of the S-matrix integral.
params = SystemParams.resonant(1.0, g, 4 * g)
tau = np.linspace(0, 100, 41)
closed = resonant_profile(params, tau).amplitude
oracle = oracle_bound_profile(params, 1.0, 1.0, tau)
print("relative sup difference:", np.max(np.abs(oracle.amplitude - closed)) / np.max(np.abs(closed)))

# %% Which coupling gives the fastest decay?
kappas = np.arange(2.0, 8.01, 0.25) * g
rates = [tail_decay_rate(resonant_profile(params.replace(kappa=k))) for k in kappas]
print("fastest at kappa/g =", kappas[int(np.argmax(rates))] / g)
