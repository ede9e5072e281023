"""Excitation-sector spectra and their exceptional points.

Each excitation sector n of the Jaynes-Cummings system coupled to a waveguide
is a 2x2 non-Hermitian block. On resonance its two eigenvalues meet at
kappa = 4 sqrt(n) g, where the block becomes defective.
"""
# %%
import numpy as np

from fewphoton import SystemParams, build_sector, eigenvalues, exceptional_point_kappa, sweep_spectrum

params = SystemParams.resonant(Omega=1.0, g=0.025, kappa=0.0)

# %% Where do the sectors coalesce?
for n in (1, 2, 3):
    kappa = exceptional_point_kappa(params, n)
    e_plus, e_minus = eigenvalues(params.replace(kappa=kappa), n)
    print(f"n={n}: kappa_EP = {kappa:.6f}, E = {e_plus:.6f}, gap = {abs(e_plus - e_minus):.1e}")

# %% Below the EP the decay rates agree and the frequencies split; above it the reverse.
sweep = sweep_spectrum(params, [1], np.linspace(0.0, 0.25, 11))
for kappa, ep, em in zip(sweep.kappa, sweep.e_plus, sweep.e_minus):
    print(f"kappa={kappa:.3f}  E+ = {ep:.5f}  E- = {em:.5f}")

# %% Away from the EP the eigenvectors form a biorthonormal pair.
sector = build_sector(params.replace(kappa=0.05), 1)
print("left @ right =\n", np.round(sector.left_vecs @ sector.right_vecs, 12))
print("EP sector has eigenvectors:", build_sector(params.replace(kappa=0.1), 1).right_vecs is not None)
