import math

import numpy as np
import pytest

from tetrafill import EnsembleKind, RngStream, Spin, entropic_fill, sample_arbitrary
from tetrafill.cli import main
from tetrafill.errors import ExcessFailures
from tetrafill.experiments import (
    BASE_CONFIGS,
    CampaignConfig,
    ensemble_statistics,
    run_base_perturbation,
    run_config_grid,
    run_distribution,
    run_means_given_theta,
    run_means_vs_j,
)

HALF = Spin(1)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def column(header, rows, name, cast=float):
    idx = header.index(name)
    return [cast(r[idx]) for r in rows]


class TestDistribution:
    def test_invariant_rows_have_maximal_one_to_other(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.INVARIANT,
            samples=40, bins=20, seed=3, output_dir=tmp_path,
        )
        files = run_distribution(config)
        header, rows = read_csv(files[0])
        assert len(rows) == 40
        for name in ("E1", "E2", "E3", "E4"):
            assert np.abs(np.array(column(header, rows, name)) - 1.0).max() <= 1e-9
        assert column(header, rows, "failed", int) == [0] * 40

    def test_closed_rows_record_parameters_and_closure(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.COHERENT_CLOSED,
            samples=25, bins=10, seed=5, output_dir=tmp_path,
        )
        files = run_distribution(config)
        header, rows = read_csv(files[0])
        assert {"theta", "phi", "closure_defect"} <= set(header)
        assert max(column(header, rows, "closure_defect")) <= 1e-12
        thetas = column(header, rows, "theta")
        assert all(0 < t < math.pi for t in thetas)

    def test_histogram_counts_match_successes(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.ARBITRARY,
            samples=60, bins=13, seed=1, output_dir=tmp_path,
        )
        files = run_distribution(config)
        sh, srows = read_csv(files[0])
        hh, hrows = read_csv(files[1])
        mh, mrows = read_csv(files[2])
        failed = sum(column(sh, srows, "failed", int))
        assert len(hrows) == 13
        assert sum(column(hh, hrows, "count", int)) == 60 - failed
        assert int(mrows[0][mh.index("failures")]) == failed

    def test_summary_statistics_match_recomputation(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.ARBITRARY,
            samples=50, bins=10, seed=9, output_dir=tmp_path,
        )
        files = run_distribution(config)
        sh, srows = read_csv(files[0])
        mh, mrows = read_csv(files[2])
        fills = np.array(column(sh, srows, "F4"))
        assert float(mrows[0][mh.index("mean_F4")]) == pytest.approx(fills.mean(), abs=1e-15)
        assert float(mrows[0][mh.index("stderr_F4")]) == pytest.approx(
            fills.std(ddof=1) / math.sqrt(len(fills)), abs=1e-15
        )

    def test_rows_match_direct_evaluation(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.ARBITRARY,
            samples=8, bins=4, seed=21, output_dir=tmp_path,
        )
        files = run_distribution(config)
        header, rows = read_csv(files[0])
        for idx in (0, 5):
            gen = RngStream(21, idx).generator()
            state = sample_arbitrary(HALF, gen)
            result = entropic_fill(state, rng=gen)
            assert float(rows[idx][header.index("F4")]) == result.fill

    def test_reruns_are_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            run_distribution(
                CampaignConfig(
                    campaign="distribution", j=HALF, ensemble=EnsembleKind.ARBITRARY,
                    samples=30, bins=10, seed=7, output_dir=out,
                )
            )
        for name in ("samples.csv", "histogram.csv", "summary.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_worker_count_does_not_change_output(self, tmp_path):
        outputs = []
        for workers in (1, 2):
            out = tmp_path / f"w{workers}"
            run_distribution(
                CampaignConfig(
                    campaign="distribution", j=HALF, ensemble=EnsembleKind.COHERENT_CLOSED,
                    samples=24, bins=8, seed=11, output_dir=out, workers=workers,
                )
            )
            outputs.append((out / "samples.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_excess_failures_raise(self, tmp_path):
        config = CampaignConfig(
            campaign="distribution", j=HALF, ensemble=EnsembleKind.ARBITRARY,
            samples=10, bins=4, seed=2, tolerance=1e-30, max_restarts=0,
            output_dir=tmp_path,
        )
        with pytest.raises(ExcessFailures):
            run_distribution(config)
        # outputs are still written for post-mortem inspection
        assert (tmp_path / "samples.csv").exists()


class TestMeansVsJ:
    def test_covers_all_ensembles_per_spin(self, tmp_path):
        config = CampaignConfig(
            campaign="means-vs-j", j=Spin(2), samples=12, seed=13, output_dir=tmp_path,
        )
        files = run_means_vs_j(config)
        header, rows = read_csv(files[0])
        assert header == ["j", "ensemble", "mean_F4", "stderr", "mean_one_minus_F4"]
        assert len(rows) == 2 * 4
        js = column(header, rows, "j")
        assert js == [0.5] * 4 + [1.0] * 4
        kinds = column(header, rows, "ensemble", str)
        assert kinds[:4] == ["Arbitrary", "Invariant", "CoherentOpen", "CoherentClosed"]

    def test_mean_one_minus_f4_consistency(self, tmp_path):
        config = CampaignConfig(
            campaign="means-vs-j", j=HALF, samples=10, seed=4, output_dir=tmp_path,
        )
        files = run_means_vs_j(config)
        header, rows = read_csv(files[0])
        for row in rows:
            mean = float(row[header.index("mean_F4")])
            dist = float(row[header.index("mean_one_minus_F4")])
            assert dist == pytest.approx(1.0 - mean, abs=1e-15)

    def test_ensemble_statistics_matches_campaign_row(self, tmp_path):
        samples, seed = 15, 13
        config = CampaignConfig(
            campaign="means-vs-j", j=HALF, samples=samples, seed=seed, output_dir=tmp_path,
        )
        files = run_means_vs_j(config)
        header, rows = read_csv(files[0])
        mean, stderr, failures = ensemble_statistics(
            HALF, EnsembleKind.ARBITRARY, samples, seed
        )
        assert float(rows[0][header.index("mean_F4")]) == pytest.approx(mean, abs=1e-15)
        assert float(rows[0][header.index("stderr")]) == pytest.approx(stderr, abs=1e-15)
        assert failures == 0


class TestConfigGrid:
    def test_grid_layout_and_translation_symmetry(self, tmp_path):
        config = CampaignConfig(
            campaign="config-grid", j=HALF, grid_a=6, grid_b=8, seed=1, output_dir=tmp_path,
        )
        files = run_config_grid(config)
        header, rows = read_csv(files[0])
        assert len(rows) == 6 * 8
        thetas = np.array(column(header, rows, "theta")).reshape(6, 8)
        phis = np.array(column(header, rows, "phi")).reshape(6, 8)
        assert np.allclose(thetas[:, 0], (np.arange(6) + 0.5) * math.pi / 6)
        assert np.allclose(phis[0], 2 * math.pi * np.arange(8) / 8)
        e13 = np.array(column(header, rows, "E13")).reshape(6, 8)
        e14 = np.array(column(header, rows, "E14")).reshape(6, 8)
        # shifting phi by half the grid exchanges the two crossed cuts
        assert np.abs(e13 - np.roll(e14, -4, axis=1)).max() <= 1e-9
        assert sum(column(header, rows, "failed", int)) == 0

    def test_log_distance_column(self, tmp_path):
        config = CampaignConfig(
            campaign="config-grid", j=HALF, grid_a=4, grid_b=4, seed=1, output_dir=tmp_path,
        )
        files = run_config_grid(config)
        header, rows = read_csv(files[0])
        f4 = np.array(column(header, rows, "F4"))
        logd = np.array(column(header, rows, "log10_one_minus_F4"))
        expected = np.log10(np.maximum(1 - f4, 1e-16))
        assert np.allclose(logd, expected, atol=1e-12)


class TestMeansGivenTheta:
    def test_crossed_cut_means_coincide(self, tmp_path):
        config = CampaignConfig(
            campaign="means-given-theta", j=HALF, grid_a=5, grid_b=8, seed=1,
            output_dir=tmp_path,
        )
        files = run_means_given_theta(config)
        header, rows = read_csv(files[0])
        assert len(rows) == 5
        e13 = np.array(column(header, rows, "mean_E13"))
        e14 = np.array(column(header, rows, "mean_E14"))
        assert np.abs(e13 - e14).max() <= 1e-9


class TestBasePerturbation:
    @pytest.mark.parametrize("base", ["regular", "disphenoid"])
    def test_closure_node_present(self, tmp_path, base):
        config = CampaignConfig(
            campaign="base-perturbation", j=HALF, grid_a=8, grid_b=8, seed=1,
            base=base, output_dir=tmp_path,
        )
        files = run_base_perturbation(config)
        header, rows = read_csv(files[0])
        assert len(rows) == 64
        defects = np.array(column(header, rows, "closure_defect"))
        node = int(np.argmin(defects))
        assert defects[node] <= 1e-12
        theta1, phi1 = BASE_CONFIGS[base][0]
        assert float(rows[node][header.index("cos_theta1")]) == pytest.approx(
            math.cos(theta1), abs=1e-12
        )
        assert float(rows[node][header.index("phi1")]) == pytest.approx(phi1, abs=1e-12)

    def test_regular_closure_node_reaches_maximal_fill(self, tmp_path):
        config = CampaignConfig(
            campaign="base-perturbation", j=HALF, grid_a=6, grid_b=6, seed=1,
            base="regular", output_dir=tmp_path,
        )
        files = run_base_perturbation(config)
        header, rows = read_csv(files[0])
        defects = np.array(column(header, rows, "closure_defect"))
        fills = np.array(column(header, rows, "F4"))
        node = int(np.argmin(defects))
        assert fills[node] == pytest.approx(1.0, abs=1e-6)
        assert fills[node] > fills.mean()


class TestCli:
    def test_usage_error_exit_code(self, capsys):
        assert main(["no-such-campaign"]) == 1
        assert main(["distribution", "--j", "0.3"]) == 1
        assert main(["distribution"]) == 1  # missing ensemble

    def test_small_run_succeeds(self, tmp_path, capsys):
        code = main([
            "distribution", "--j", "1/2", "--ensemble", "Invariant",
            "--samples", "10", "--bins", "5", "--seed", "2",
            "--out", str(tmp_path),
        ])
        assert code == 0
        assert (tmp_path / "samples.csv").exists()
        printed = capsys.readouterr().out.splitlines()
        assert len(printed) == 3

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "j = 1/2\nensemble = Invariant\nsamples = 6\nbins = 3\nseed = 4\n"
            f"out = {tmp_path / 'from_file'}\n"
        )
        code = main(["distribution", "--config", str(cfg), "--samples", "9"])
        assert code == 0
        lines = (tmp_path / "from_file" / "samples.csv").read_text().splitlines()
        assert len(lines) == 10  # header + overridden sample count

    def test_unknown_config_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("samples = 5\nnot_a_key = 1\n")
        assert main(["distribution", "--config", str(cfg)]) == 1

    def test_excess_failures_exit_code(self, tmp_path):
        code = main([
            "distribution", "--j", "1/2", "--ensemble", "Arbitrary",
            "--samples", "8", "--bins", "4", "--seed", "2",
            "--tolerance", "1e-30", "--max-restarts", "0",
            "--out", str(tmp_path),
        ])
        assert code == 2

    def test_grid_flag_parsing(self, tmp_path):
        code = main([
            "config-grid", "--j", "1/2", "--grid", "4x6", "--seed", "1",
            "--out", str(tmp_path),
        ])
        assert code == 0
        lines = (tmp_path / "grid.csv").read_text().splitlines()
        assert len(lines) == 1 + 4 * 6
