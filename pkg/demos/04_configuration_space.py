"""Fill across the closed-configuration shape space.

A closed four-normal configuration has two shape parameters: the angle
theta between the first two normals and the position phi of the third on
its admissible circle.  This scans a coarse grid, locates the fill maximum,
and shows the phi -> phi + pi symmetry between the two crossed cuts.
"""

import math

import numpy as np

from tetrafill import (
    ClosedConfigParams,
    Spin,
    bipartition_entropies,
    build_basis,
    closed_config_vectors,
    coherent_intertwiner,
    embed,
    entropic_fill,
)

j = Spin(1)
spins = (j,) * 4
basis = build_basis(spins)

n_theta, n_phi = 24, 24
thetas = (np.arange(n_theta) + 0.5) * math.pi / n_theta
phis = 2 * math.pi * np.arange(n_phi) / n_phi

fill = np.empty((n_theta, n_phi))
e13 = np.empty((n_theta, n_phi))
e14 = np.empty((n_theta, n_phi))
for a, theta in enumerate(thetas):
    for b, phi in enumerate(phis):
        config = closed_config_vectors(ClosedConfigParams(theta, phi))
        state = embed(coherent_intertwiner(spins, config, basis=basis))
        result = entropic_fill(state)
        fill[a, b] = result.fill
        e13[a, b] = result.entropies.two_to_two[1]
        e14[a, b] = result.entropies.two_to_two[2]

peak = np.unravel_index(np.argmax(fill), fill.shape)
print(f"grid: {n_theta} theta x {n_phi} phi nodes at j = {j}")
print(f"max F4 = {fill[peak]:.6f} at theta = {thetas[peak[0]]:.3f}, phi = {phis[peak[1]]:.3f}")
print(f"regular-tetrahedron angle arccos(-1/3) = {math.acos(-1/3):.3f}")
shift = n_phi // 2
print(f"max |E13(theta,phi) - E14(theta,phi+pi)| = {np.abs(e13 - np.roll(e14, -shift, axis=1)).max():.2e}")

# coarse ASCII picture of F4 over the grid (rows: theta, cols: phi)
levels = " .:-=+*#%@"
print("\nF4 landscape (dark = low, bright = high):")
lo, hi = fill.min(), fill.max()
for a in range(n_theta):
    row = "".join(levels[int((fill[a, b] - lo) / (hi - lo + 1e-12) * (len(levels) - 1))]
                  for b in range(n_phi))
    print(f"  theta={thetas[a]:.2f}  {row}")
