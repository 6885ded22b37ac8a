"""Campaign runners: ensemble distributions, spin sweeps, and configuration scans.

Every campaign is a deterministic function of its seed.  Rows are computed
from per-index random streams and assembled in index order, so output files
are byte-identical for any worker count.  Floats are written with 17
significant digits so CSVs round-trip exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .entanglement import bipartition_entropies
from .errors import DegenerateConfig, ExcessFailures, NoConvergence, ZeroProjection
from .fill import fill_from_entropies
from .intertwiner import (
    VectorConfiguration,
    build_basis,
    closure_defect,
    coherent_intertwiner,
    embed,
)
from .sampling import (
    ClosedConfigParams,
    EnsembleKind,
    RngStream,
    closed_config_vectors,
    sample_arbitrary,
    sample_coherent_closed,
    sample_coherent_open,
    sample_invariant,
)
from .su2 import SphericalDirection, Spin

__all__ = [
    "CampaignConfig",
    "BASE_CONFIGS",
    "run_distribution",
    "run_means_vs_j",
    "run_config_grid",
    "run_means_given_theta",
    "run_base_perturbation",
    "run_campaign",
    "ensemble_statistics",
]

CAMPAIGNS = (
    "distribution",
    "means-vs-j",
    "config-grid",
    "means-given-theta",
    "base-perturbation",
)

_FAILURE_FRACTION = 0.001
_LOG_CLAMP = 1e-16

# fixed scan bases: polar coordinates (theta_i, phi_i) of the four normals;
# both close exactly, so scanning n1 recovers closure at the base's own n1
_SQ3 = 1 / math.sqrt(3)
BASE_CONFIGS = {
    "regular": tuple(
        (math.acos(c), p % (2 * math.pi))
        for c, p in zip(
            (-_SQ3, _SQ3, _SQ3, -_SQ3),
            (-math.pi / 4, -3 * math.pi / 4, math.pi / 4, 3 * math.pi / 4),
        )
    ),
    "disphenoid": tuple(
        (t, p % (2 * math.pi))
        for t, p in zip(
            (math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi / 2),
            (-math.pi / 2, 3 * math.pi / 4, -math.pi / 2, math.pi / 4),
        )
    ),
}


@dataclass(frozen=True)
class CampaignConfig:
    campaign: str
    j: Spin = Spin(1)
    ensemble: EnsembleKind | None = None
    samples: int = 1000
    bins: int = 1000
    seed: int = 0
    grid_a: int = 300
    grid_b: int = 300
    base: str = "regular"
    tolerance: float = 1e-10
    max_restarts: int = 32
    output_dir: Path = field(default_factory=lambda: Path("out"))
    workers: int = 1

    def __post_init__(self):
        if self.campaign not in CAMPAIGNS:
            raise ValueError(f"unknown campaign {self.campaign!r}")
        if self.samples < 1 or self.bins < 1:
            raise ValueError("samples and bins must be at least 1")
        if self.grid_a < 2 or self.grid_b < 2:
            raise ValueError("grid resolutions must be at least 2")
        if self.base not in BASE_CONFIGS:
            raise ValueError(f"unknown base {self.base!r}")
        if self.campaign == "distribution" and self.ensemble is None:
            raise ValueError("distribution campaign needs an ensemble")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def _log_distance(f4: float) -> float:
    return math.log10(max(1.0 - f4, _LOG_CLAMP))


# ---------------------------------------------------------------------------
# per-row evaluation (module level so worker processes can pickle the tasks)

_BASIS_CACHE: dict = {}


def _cached_basis(twice_j: int):
    basis = _BASIS_CACHE.get(twice_j)
    if basis is None:
        basis = build_basis((Spin(twice_j),) * 4)
        _BASIS_CACHE[twice_j] = basis
    return basis


# failure codes in the `failed` CSV column
_OK, _SOLVER_FAILURE, _GEOMETRY_FAILURE = 0, 1, 2


def _solve_entropies(ent, ctx, gen):
    """Fill solve with failure bookkeeping: returns (f4, residual, restarts, failed)."""
    try:
        result = fill_from_entropies(
            ent, tolerance=ctx["tolerance"], max_restarts=ctx["max_restarts"], rng=gen
        )
        return result.fill, result.residual, result.restarts_used, _OK
    except NoConvergence as err:
        return math.nan, err.best_residual, err.restarts, _SOLVER_FAILURE


def _distribution_row(ctx, index):
    gen = RngStream(ctx["seed"], ctx.get("stream_base", 0) + index).generator()
    j = Spin(ctx["twice_j"])
    kind = EnsembleKind(ctx["ensemble"])
    theta = phi = defect = None
    if kind is EnsembleKind.ARBITRARY:
        state = sample_arbitrary(j, gen)
    elif kind is EnsembleKind.INVARIANT:
        state = embed(sample_invariant(j, _cached_basis(j.twice_j), gen))
    elif kind is EnsembleKind.COHERENT_OPEN:
        drawn = sample_coherent_open(j, _cached_basis(j.twice_j), gen)
        state = embed(drawn.state)
        defect = closure_defect((j,) * 4, drawn.config)
    else:
        drawn = sample_coherent_closed(j, _cached_basis(j.twice_j), gen)
        state = embed(drawn.state)
        theta, phi = drawn.params.theta, drawn.params.phi
        defect = closure_defect((j,) * 4, drawn.config)
    ent = bipartition_entropies(state)
    f4, residual, restarts, failed = _solve_entropies(ent, ctx, gen)
    row = [index, f4]
    row += list(ent.one_to_other) + list(ent.two_to_two)
    row += list(ent.raw_one_to_other) + list(ent.raw_two_to_two)
    row += [residual, restarts]
    if theta is not None:
        row += [theta, phi]
    if defect is not None:
        row += [defect]
    row += [failed]
    return row


def _closed_grid_row(ctx, index):
    grid_b = ctx["grid_b"]
    i, k = divmod(index, grid_b)
    theta = (i + 0.5) * math.pi / ctx["grid_a"]
    phi = 2 * math.pi * k / grid_b
    gen = RngStream(ctx["seed"], index).generator()
    j = Spin(ctx["twice_j"])
    try:
        config = closed_config_vectors(ClosedConfigParams(theta, phi))
        state = embed(coherent_intertwiner((j,) * 4, config, basis=_cached_basis(j.twice_j)))
    except (DegenerateConfig, ZeroProjection):
        nan = math.nan
        return [theta, phi, nan, nan, nan, nan, nan, nan, _GEOMETRY_FAILURE]
    ent = bipartition_entropies(state)
    f4, residual, restarts, failed = _solve_entropies(ent, ctx, gen)
    log_d = _log_distance(f4) if not failed else math.nan
    return [theta, phi, ent.two_to_two[0], ent.two_to_two[1], ent.two_to_two[2], f4, log_d, residual, failed]


def _perturbation_row(ctx, index):
    grid_b = ctx["grid_b"]
    i, k = divmod(index, grid_b)
    cos_t1 = ctx["cos_grid"][i]
    phi1 = ctx["phi_grid"][k]
    gen = RngStream(ctx["seed"], index).generator()
    j = Spin(ctx["twice_j"])
    fixed = ctx["fixed_dirs"]
    dirs = (SphericalDirection(math.acos(max(-1.0, min(1.0, cos_t1))), phi1),) + fixed
    config = VectorConfiguration(dirs)
    defect = closure_defect((j,) * 4, config)
    try:
        state = embed(coherent_intertwiner((j,) * 4, config, basis=_cached_basis(j.twice_j)))
    except ZeroProjection:
        return [cos_t1, phi1, math.nan, math.nan, defect, math.nan, _GEOMETRY_FAILURE]
    ent = bipartition_entropies(state)
    f4, residual, restarts, failed = _solve_entropies(ent, ctx, gen)
    log_d = _log_distance(f4) if not failed else math.nan
    return [cos_t1, phi1, f4, log_d, defect, residual, failed]


def _means_vs_j_row(ctx, index):
    samples = ctx["samples"]
    group, i = divmod(index, samples)
    j_idx, ens_idx = divmod(group, 4)
    sub = dict(ctx)
    sub["twice_j"] = ctx["twice_j_list"][j_idx]
    sub["ensemble"] = ctx["ensembles"][ens_idx]
    row = _distribution_row(sub, index)
    # keep only what the aggregation needs: (F4, failed)
    return [row[1], row[-1]]


_ROW_FUNCS = {
    "distribution": _distribution_row,
    "config-grid": _closed_grid_row,
    "means-given-theta": _closed_grid_row,
    "base-perturbation": _perturbation_row,
    "means-vs-j": _means_vs_j_row,
}


def _run_chunk(args):
    kind, ctx, start, stop = args
    func = _ROW_FUNCS[kind]
    return [func(ctx, i) for i in range(start, stop)]


def _evaluate_rows(kind, ctx, total, workers):
    """All rows in index order; fans out over a process pool when workers > 1."""
    if workers <= 1 or total < 2 * workers:
        return _run_chunk((kind, ctx, 0, total))
    chunk = max(1, math.ceil(total / (4 * workers)))
    tasks = [(kind, ctx, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    rows = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_run_chunk, tasks):
            rows.extend(part)
    return rows


# ---------------------------------------------------------------------------
# campaigns


def _mean_stderr(values):
    values = np.asarray(values, dtype=float)
    ok = values[~np.isnan(values)]
    if len(ok) == 0:
        return math.nan, math.nan
    if len(ok) == 1:
        return float(ok[0]), 0.0
    return float(ok.mean()), float(ok.std(ddof=1) / math.sqrt(len(ok)))


def _check_failures(rows, total):
    """Abort on excess solver failures; geometry failures are flagged rows only."""
    solver_failures = sum(1 for r in rows if r[-1] == _SOLVER_FAILURE)
    if solver_failures > _FAILURE_FRACTION * total:
        raise ExcessFailures(solver_failures, total)


def run_distribution(config: CampaignConfig):
    """Sample one ensemble and write samples.csv, histogram.csv, summary.csv."""
    kind = config.ensemble
    ctx = {
        "seed": config.seed,
        "twice_j": config.j.twice_j,
        "ensemble": kind.value,
        "tolerance": config.tolerance,
        "max_restarts": config.max_restarts,
    }
    rows = _evaluate_rows("distribution", ctx, config.samples, config.workers)
    header = ["index", "F4", "E1", "E2", "E3", "E4", "E12", "E13", "E14"]
    header += ["raw_E1", "raw_E2", "raw_E3", "raw_E4", "raw_E12", "raw_E13", "raw_E14"]
    header += ["residual", "restarts"]
    if kind is EnsembleKind.COHERENT_CLOSED:
        header += ["theta", "phi"]
    if kind in (EnsembleKind.COHERENT_OPEN, EnsembleKind.COHERENT_CLOSED):
        header += ["closure_defect"]
    header += ["failed"]
    out = Path(config.output_dir)
    files = [_write_csv(out / "samples.csv", header, rows)]

    fills = np.array([r[1] for r in rows], dtype=float)
    failed = np.array([r[-1] for r in rows], dtype=int)
    good = fills[failed == 0]
    counts, edges = np.histogram(np.clip(good, 0.0, 1.0), bins=config.bins, range=(0.0, 1.0))
    files.append(
        _write_csv(
            out / "histogram.csv",
            ["bin_left", "bin_right", "count"],
            [(edges[i], edges[i + 1], counts[i]) for i in range(config.bins)],
        )
    )
    mean, stderr = _mean_stderr(good)
    files.append(
        _write_csv(out / "summary.csv", ["mean_F4", "stderr_F4", "failures"],
                   [(mean, stderr, int((failed != 0).sum()))])
    )
    _check_failures(rows, config.samples)
    return files


def ensemble_statistics(j, kind: EnsembleKind, samples, seed, tolerance=1e-10,
                        max_restarts=32, workers=1, stream_base=0):
    """Mean fill and standard error over one ensemble; used by the spin sweep."""
    ctx = {
        "seed": seed,
        "twice_j": Spin.parse(j).twice_j,
        "ensemble": kind.value,
        "tolerance": tolerance,
        "max_restarts": max_restarts,
        "samples": samples,
        "twice_j_list": [Spin.parse(j).twice_j],
        "ensembles": [kind.value],
        "stream_base": stream_base,
    }
    rows = _evaluate_rows("means-vs-j", ctx, samples, workers)
    fills = np.array([r[0] for r in rows], dtype=float)
    failures = sum(1 for r in rows if r[1] != _OK)
    mean, stderr = _mean_stderr(fills)
    return mean, stderr, failures


def run_means_vs_j(config: CampaignConfig):
    """Sweep j from 1/2 to config.j over all four ensembles; write means.csv."""
    twice_js = list(range(1, config.j.twice_j + 1))
    ensembles = [k.value for k in EnsembleKind]
    ctx = {
        "seed": config.seed,
        "tolerance": config.tolerance,
        "max_restarts": config.max_restarts,
        "samples": config.samples,
        "twice_j_list": twice_js,
        "ensembles": ensembles,
        "twice_j": twice_js[0],
        "ensemble": ensembles[0],
    }
    total = len(twice_js) * 4 * config.samples
    rows = _evaluate_rows("means-vs-j", ctx, total, config.workers)
    out_rows = []
    for g in range(len(twice_js) * 4):
        j_idx, ens_idx = divmod(g, 4)
        block = rows[g * config.samples : (g + 1) * config.samples]
        fills = np.array([r[0] for r in block], dtype=float)
        mean, stderr = _mean_stderr(fills)
        out_rows.append(
            (Spin(twice_js[j_idx]).j, ensembles[ens_idx], mean, stderr, 1.0 - mean)
        )
    path = _write_csv(
        Path(config.output_dir) / "means.csv",
        ["j", "ensemble", "mean_F4", "stderr", "mean_one_minus_F4"],
        out_rows,
    )
    _check_failures(rows, total)
    return [path]


def _grid_ctx(config):
    return {
        "seed": config.seed,
        "twice_j": config.j.twice_j,
        "tolerance": config.tolerance,
        "max_restarts": config.max_restarts,
        "grid_a": config.grid_a,
        "grid_b": config.grid_b,
    }


def run_config_grid(config: CampaignConfig):
    """Evaluate the closed-configuration (theta, phi) grid; write grid.csv.

    theta spans (0, pi) with grid_a interior nodes offset by half a step from
    the degenerate endpoints; phi spans [0, 2pi) with grid_b nodes.
    """
    total = config.grid_a * config.grid_b
    rows = _evaluate_rows("config-grid", _grid_ctx(config), total, config.workers)
    path = _write_csv(
        Path(config.output_dir) / "grid.csv",
        ["theta", "phi", "E12", "E13", "E14", "F4", "log10_one_minus_F4", "residual", "failed"],
        rows,
    )
    _check_failures(rows, total)
    return [path]


def run_means_given_theta(config: CampaignConfig):
    """Average the grid rows over phi for each theta; write theta_means.csv."""
    total = config.grid_a * config.grid_b
    rows = _evaluate_rows("config-grid", _grid_ctx(config), total, config.workers)
    out_rows = []
    for i in range(config.grid_a):
        block = rows[i * config.grid_b : (i + 1) * config.grid_b]
        ok = [r for r in block if not r[-1]]
        theta = block[0][0]
        e12 = np.mean([r[2] for r in ok])
        e13 = np.mean([r[3] for r in ok])
        e14 = np.mean([r[4] for r in ok])
        f4 = np.mean([r[5] for r in ok])
        out_rows.append((theta, e12, e13, e14, f4))
    path = _write_csv(
        Path(config.output_dir) / "theta_means.csv",
        ["theta", "mean_E12", "mean_E13", "mean_E14", "mean_F4"],
        out_rows,
    )
    _check_failures(rows, total)
    return [path]


def _anchored_grid(anchor, low, span, count):
    """Regular grid of `count` nodes with spacing span/count inside [low, low+span),
    shifted so that `anchor` is exactly one of the nodes."""
    step = span / count
    offset = (anchor - low) % step
    return low + offset + step * np.arange(count)


def run_base_perturbation(config: CampaignConfig):
    """Scan the first normal over a (cos theta1, phi1) grid around a fixed base.

    The grid is anchored so the closure position of the base (its own first
    normal) is exactly one node.  Writes perturbation.csv.
    """
    base = BASE_CONFIGS[config.base]
    anchor_cos = math.cos(base[0][0])
    anchor_phi = base[0][1]
    ctx = _grid_ctx(config)
    ctx["cos_grid"] = _anchored_grid(anchor_cos, -1.0, 2.0, config.grid_a)
    ctx["phi_grid"] = _anchored_grid(anchor_phi, 0.0, 2 * math.pi, config.grid_b)
    ctx["fixed_dirs"] = tuple(SphericalDirection(t, p) for t, p in base[1:])
    total = config.grid_a * config.grid_b
    rows = _evaluate_rows("base-perturbation", ctx, total, config.workers)
    path = _write_csv(
        Path(config.output_dir) / "perturbation.csv",
        ["cos_theta1", "phi1", "F4", "log10_one_minus_F4", "closure_defect", "residual", "failed"],
        rows,
    )
    _check_failures(rows, total)
    return [path]


_RUNNERS = {
    "distribution": run_distribution,
    "means-vs-j": run_means_vs_j,
    "config-grid": run_config_grid,
    "means-given-theta": run_means_given_theta,
    "base-perturbation": run_base_perturbation,
}


def run_campaign(config: CampaignConfig):
    return _RUNNERS[config.campaign](config)
