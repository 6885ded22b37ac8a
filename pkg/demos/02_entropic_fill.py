"""The entropic fill F4 on hand-picked four-qubit states.

F4 solves the entropic-tetrahedron equations for the seven bipartite
entropies and reports the normalized tetrahedron volume: 1 for GHZ-like
states, 0 for anything separable across some cut.
"""

import numpy as np

from tetrafill import FourSpinState, Spin, entropic_fill

j = Spin(1)
spins = (j,) * 4


def show(name, amps):
    state = FourSpinState(spins, amps / np.linalg.norm(amps))
    result = entropic_fill(state)
    print(f"{name:24s} F4 = {result.fill:.6f}   sigma = "
          f"{np.array2string(result.sigmas.sigma, precision=4)}   "
          f"residual = {result.residual:.1e}")


ghz = np.zeros((2, 2, 2, 2), dtype=complex)
ghz[0, 0, 0, 0] = ghz[1, 1, 1, 1] = 1
show("GHZ", ghz)

w = np.zeros((2, 2, 2, 2), dtype=complex)
w[1, 0, 0, 0] = w[0, 1, 0, 0] = w[0, 0, 1, 0] = w[0, 0, 0, 1] = 1
show("W", w)

product = np.zeros((2, 2, 2, 2), dtype=complex)
product[0, 1, 0, 1] = 1
show("product |0101>", product)

singlet = np.zeros((2, 2), dtype=complex)
singlet[0, 1], singlet[1, 0] = 1, -1
pair = np.einsum("ab,cd->abcd", singlet, singlet)
show("singlet x singlet", pair)

rng = np.random.default_rng(1)
haar = rng.normal(size=(2, 2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2, 2))
show("random ray", haar)
