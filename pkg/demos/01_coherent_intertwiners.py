"""Coherent intertwiners and their entanglement entropies.

Builds the invariant subspace for four equal spins, projects coherent
product states onto it, and prints the seven bipartite entropies for a few
named normal configurations.
"""

import numpy as np

from tetrafill import (
    Spin,
    VectorConfiguration,
    bipartition_entropies,
    build_basis,
    closure_defect,
    coherent_intertwiner,
    embed,
)

j = Spin.parse("1/2")
spins = (j,) * 4
basis = build_basis(spins)
print(f"invariant subspace of four spin-{j} slots: dimension {len(basis)}")
print(f"channel labels: {[str(k) for k in basis.channel_labels]}")

# regular tetrahedron: the four cube-diagonal directions
regular = np.array([[1, -1, -1], [-1, -1, 1], [1, 1, 1], [-1, 1, -1]]) / np.sqrt(3)

# a squashed variant that still closes: push two normals toward each other
squashed = np.array([[0.6, 0.0, 0.8], [-0.6, 0.0, 0.8], [0.6, 0.0, -0.8], [-0.6, 0.0, -0.8]])
squashed = squashed / np.linalg.norm(squashed, axis=1, keepdims=True)

# an open (non-closing) configuration
open_cfg = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0], [0.6, 0.8, 0]])
open_cfg = open_cfg / np.linalg.norm(open_cfg, axis=1, keepdims=True)

for name, vectors in [("regular tetrahedron", regular),
                      ("squashed (closing)", squashed),
                      ("open configuration", open_cfg)]:
    config = VectorConfiguration.from_vectors(vectors)
    state = embed(coherent_intertwiner(spins, config, basis=basis))
    ent = bipartition_entropies(state)
    print(f"\n{name}")
    print(f"  closure defect       : {closure_defect(spins, config):.3e}")
    print(f"  one-to-other (norm.) : {np.array2string(ent.one_to_other, precision=6)}")
    print(f"  two-to-two   (norm.) : {np.array2string(ent.two_to_two, precision=6)}")
