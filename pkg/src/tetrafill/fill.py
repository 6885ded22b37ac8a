"""Entropic-fill measure of genuine four-party entanglement.

The seven bipartite entropies of a pure four-party state fix an "entropic
tetrahedron": six areas sigma_ij (the inscribed-sphere face triangles) obey

    sigma_ij + sigma_ik + sigma_il                                  = E_i
    -sqrt(sigma_ij sigma_kl) + sqrt(sigma_ik sigma_jl)
                             + sqrt(sigma_il sigma_jk)              = lambda E_(ij)(kl)

for all index choices (four linear face equations, three pairing equations
sharing a single auxiliary lambda).  The tetrahedron volume then yields the
fill value

    F4 = (3^(7/6) / 2) V^(2/3),

normalized so that F4 = 1 at the regular solution sigma = 1/3 (reached when
the one-to-other entropies are maximal and the two-to-two entropies agree).

The solver parametrizes sigma = t^2 and lambda = l^2, which keeps both
non-negative without constraints, and minimizes the seven-component defect
with damped Gauss-Newton steps (Levenberg-Marquardt), restarting from
log-uniform perturbations of the initial guess when stuck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entanglement import BipartitionEntropies, bipartition_entropies
from .errors import InvalidGeometry, NoConvergence
from .intertwiner import FourSpinState

__all__ = [
    "SigmaSet",
    "FillResult",
    "PAIR_ORDER",
    "solve_sigmas",
    "equation_residual",
    "tetrahedron_volume",
    "fill_from_entropies",
    "entropic_fill",
]

# sigma component order; index pairs name the two faces meeting at the edge
PAIR_ORDER = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

# faces -> the three sigma components containing that face index
_FACE = ((0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5))

# opposite-edge products entering the pairing equations: (12,34), (13,24), (14,23)
_OPP = ((0, 5), (1, 4), (2, 3))

_AREA_TOL = 1e-9
_DEGENERATE_TOL = 1e-12
_INIT_EPS = 1e-6
_F4_PREFACTOR = 3 ** (7 / 6) / 2


@dataclass(frozen=True)
class SigmaSet:
    """Solved sigma areas (order sigma_12, 13, 14, 23, 24, 34) and the auxiliary lambda."""

    sigma: np.ndarray
    lam: float

    def __post_init__(self):
        if len(self.sigma) != 6 or np.any(np.asarray(self.sigma) < 0):
            raise ValueError("sigma must be six non-negative reals")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")

    def opposite_edge_areas(self) -> np.ndarray:
        """(A0, A1, A2, A3): signed combinations of sqrt(sigma_ij sigma_kl)."""
        p = np.array([math.sqrt(self.sigma[a] * self.sigma[b]) for a, b in _OPP])
        return np.array(
            [p[0] + p[1] + p[2], -p[0] + p[1] + p[2], p[0] - p[1] + p[2], p[0] + p[1] - p[2]]
        )


@dataclass(frozen=True)
class FillResult:
    """Entropies, solved geometry, and the fill value of one state."""

    entropies: BipartitionEntropies
    sigmas: SigmaSet
    volume: float
    fill: float
    residual: float
    restarts_used: int


def equation_residual(entropies: BipartitionEntropies, sigmas: SigmaSet) -> float:
    """Root-sum-square defect of the seven defining equations."""
    e1 = entropies.one_to_other
    e2 = entropies.two_to_two
    s = np.asarray(sigmas.sigma)
    r = [s[list(f)].sum() - e1[i] for i, f in enumerate(_FACE)]
    a = sigmas.opposite_edge_areas()
    r += [a[1 + k] - sigmas.lam * e2[k] for k in range(3)]
    return float(np.linalg.norm(r))


def _residual_jacobian(x, e1, e2):
    """Defect vector and analytic Jacobian in the squared parametrization."""
    t = x[:6]
    el = x[6]
    s = t * t
    r = np.empty(7)
    jac = np.zeros((7, 7))
    for i, (a, b, c) in enumerate(_FACE):
        r[i] = s[a] + s[b] + s[c] - e1[i]
        jac[i, a] = 2 * t[a]
        jac[i, b] = 2 * t[b]
        jac[i, c] = 2 * t[c]
    p = [abs(t[a] * t[b]) for a, b in _OPP]
    ll = el * el
    r[4] = -p[0] + p[1] + p[2] - ll * e2[0]
    r[5] = p[0] - p[1] + p[2] - ll * e2[1]
    r[6] = p[0] + p[1] - p[2] - ll * e2[2]
    sg = [math.copysign(1.0, t[a] * t[b]) if t[a] * t[b] != 0 else 0.0 for a, b in _OPP]
    for row, coef in ((4, (-1, 1, 1)), (5, (1, -1, 1)), (6, (1, 1, -1))):
        for k, (a, b) in enumerate(_OPP):
            jac[row, a] = coef[k] * sg[k] * t[b]
            jac[row, b] = coef[k] * sg[k] * t[a]
        jac[row, 6] = -2 * el * e2[row - 4]
    return r, jac


def _lm_minimize(x, e1, e2, max_iter=200):
    """Damped Gauss-Newton descent on the squared defect; returns (x, residual)."""
    mu = 1e-3
    eye = np.eye(7)
    r, jac = _residual_jacobian(x, e1, e2)
    cost = r @ r
    for _ in range(max_iter):
        g = jac.T @ r
        step = np.linalg.solve(jac.T @ jac + mu * eye, -g)
        xn = x + step
        rn, jn = _residual_jacobian(xn, e1, e2)
        cn = rn @ rn
        if cn < cost:
            x, r, jac, cost = xn, rn, jn, cn
            mu = max(mu / 3, 1e-14)
            if cost < 1e-30:
                break
        else:
            mu *= 3
            if mu > 1e12:
                break
    return x, math.sqrt(cost)


def _initial_guess(e1):
    t = np.empty(7)
    for k, (i, j) in enumerate(PAIR_ORDER):
        t[k] = math.sqrt(max((e1[i - 1] + e1[j - 1]) / 6, _INIT_EPS))
    t[6] = 1.0
    return t


def _solve(entropies, tolerance, max_restarts, rng):
    e1 = np.asarray(entropies.one_to_other, dtype=float)
    e2 = np.asarray(entropies.two_to_two, dtype=float)

    # all-zero entropies: a fully separable state, nothing to solve
    if max(e1.max(initial=0.0), e2.max(initial=0.0)) < _DEGENERATE_TOL:
        sig = SigmaSet(np.zeros(6), 0.0)
        res = equation_residual(entropies, sig)
        if res <= tolerance:
            return sig, res, 0

    # equal faces and equal pairings solve in closed form: sigma = E/3
    if np.ptp(e1) <= _DEGENERATE_TOL and np.ptp(e2) <= _DEGENERATE_TOL and e2[0] > _DEGENERATE_TOL:
        sig = SigmaSet(np.full(6, e1[0] / 3), e1[0] / (3 * e2[0]))
        res = equation_residual(entropies, sig)
        if res <= tolerance:
            return sig, res, 0

    if rng is None:
        rng = np.random.default_rng(0)
    x0 = _initial_guess(e1)
    best_x, best_res = None, math.inf
    for restart in range(max_restarts + 1):
        if restart == 0:
            x = x0.copy()
        else:
            x = x0 * np.exp(rng.uniform(-1.0, 1.0, size=7))
        x, res = _lm_minimize(x, e1, e2)
        if res < best_res:
            best_x, best_res = x, res
        if best_res <= tolerance:
            return (
                SigmaSet(best_x[:6] ** 2, float(best_x[6] ** 2)),
                best_res,
                restart,
            )
    raise NoConvergence(best_res, max_restarts)


def solve_sigmas(
    entropies: BipartitionEntropies,
    tolerance: float = 1e-10,
    max_restarts: int = 32,
    rng=None,
) -> SigmaSet:
    """Solve the defining equations for (sigma, lambda).

    Restart perturbations draw from ``rng`` (a numpy Generator); passing the
    per-sample stream keeps campaign output reproducible.  Raises
    NoConvergence with the best residual if every restart stays above
    tolerance.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    sigmas, _, _ = _solve(entropies, tolerance, max_restarts, rng)
    return sigmas


def tetrahedron_volume(sigmas: SigmaSet) -> float:
    """Volume of the tetrahedron with inscribed-sphere triangle areas sigma.

    V = (sqrt(2)/3) sqrt(S) (A0 A1 A2 A3)^(1/4) with S = 2 sum(sigma).
    Slightly negative A_i within 1e-9 are clipped to zero (flat tetrahedron);
    beyond that the sigma set is rejected.
    """
    areas = sigmas.opposite_edge_areas()
    if np.any(areas < -_AREA_TOL):
        raise InvalidGeometry(f"negative opposite-edge area: {areas.min():.3e}")
    areas = np.maximum(areas, 0.0)
    s_total = 2 * float(np.sum(sigmas.sigma))
    return float(math.sqrt(2) / 3 * math.sqrt(s_total) * np.prod(areas) ** 0.25)


def fill_from_entropies(
    entropies: BipartitionEntropies,
    tolerance: float = 1e-10,
    max_restarts: int = 32,
    rng=None,
) -> FillResult:
    """Solve for sigma and evaluate the fill from precomputed entropies."""
    sigmas, residual, restarts = _solve(entropies, tolerance, max_restarts, rng)
    volume = tetrahedron_volume(sigmas)
    fill = _F4_PREFACTOR * volume ** (2 / 3)
    return FillResult(entropies, sigmas, volume, fill, residual, restarts)


def entropic_fill(
    state: FourSpinState,
    tolerance: float = 1e-10,
    max_restarts: int = 32,
    rng=None,
) -> FillResult:
    """Bipartition entropies, sigma solve, and fill value for one state."""
    return fill_from_entropies(
        bipartition_entropies(state), tolerance=tolerance, max_restarts=max_restarts, rng=rng
    )
