"""Two routes to the one- and two-photon S matrices.

The closed forms and the sums over biorthogonal eigenstates are independent
computations; agreeing to rounding error is a strong check on both.
"""
# %%
import numpy as np

from fewphoton import (SystemParams, connected_amplitude, spectral_g, symmetrized_kernel_sum,
                       transmission)

params = SystemParams(omega=1.0, Omega=1.1, g=0.2, kappa=0.3)

# %% Single photon: 1 + G(k) against t_k, and |t_k| = 1.
k = np.linspace(0.5, 1.5, 5)
print("max |1 + G - t| =", np.max(np.abs(1 + spectral_g(params, k) - transmission(params, k))))
print("|t| =", np.abs(transmission(params, k)))

# %% Two photons: four kernel terms against the connected amplitude.
k1, k2 = 0.95, 1.2
for p1 in (0.3, 0.9, 1.6):
    closed = connected_amplitude(params, p1, k1, k2)
    spectral = symmetrized_kernel_sum(params, p1, k1, k2)
    print(f"p1={p1}: S^C = {closed:.6e}, kernel sum = {spectral:.6e}")
