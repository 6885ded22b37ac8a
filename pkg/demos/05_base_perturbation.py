"""Moving one normal of a fixed base configuration.

Keeps three normals of a closing base configuration fixed and scans the
first normal over the sphere, comparing fill at the closure position
against typical non-closing placements.
"""

from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np

from tetrafill import Spin
from tetrafill.experiments import CampaignConfig, run_base_perturbation

for base in ("regular", "disphenoid"):
    with TemporaryDirectory() as tmp:
        files = run_base_perturbation(
            CampaignConfig(
                campaign="base-perturbation",
                j=Spin(1),
                grid_a=24,
                grid_b=24,
                seed=7,
                base=base,
                output_dir=Path(tmp),
            )
        )
        lines = files[0].read_text().splitlines()
        header = lines[0].split(",")
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        defect = data[:, header.index("closure_defect")]
        fill = data[:, header.index("F4")]
        node = int(np.argmin(defect))
        print(f"{base:12s} closure node: defect = {defect[node]:.1e}, "
              f"F4 = {fill[node]:.6f}; grid mean F4 = {fill.mean():.4f}, "
              f"grid max F4 = {fill.max():.6f}")
