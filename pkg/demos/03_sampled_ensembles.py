"""Fill distributions of the four state ensembles at small scale.

Runs the distribution campaign for each ensemble kind at j = 1/2 and prints
the mean fill with its standard error.  Scale up --samples (and use the
tetrafill CLI with --workers) for production runs.
"""

from pathlib import Path
from tempfile import TemporaryDirectory

from tetrafill import EnsembleKind, Spin
from tetrafill.experiments import CampaignConfig, run_distribution

SAMPLES = 500

with TemporaryDirectory() as tmp:
    for kind in EnsembleKind:
        out = Path(tmp) / kind.value
        files = run_distribution(
            CampaignConfig(
                campaign="distribution",
                j=Spin(1),
                ensemble=kind,
                samples=SAMPLES,
                bins=100,
                seed=42,
                output_dir=out,
            )
        )
        summary = (out / "summary.csv").read_text().splitlines()[1].split(",")
        mean, stderr, failures = float(summary[0]), float(summary[1]), int(summary[2])
        print(f"{kind.value:16s} mean F4 = {mean:.4f} +- {stderr:.4f}   "
              f"({SAMPLES} samples, {failures} failures)")

print("\nwrote samples.csv / histogram.csv / summary.csv per ensemble (temp dir)")
