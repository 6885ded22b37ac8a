"""Rotation-invariant subspace of four coupled spins.

The channel basis couples slots (1,2) and (3,4) to a common intermediate
spin k and contracts the pair with the two-spin singlet, giving an
orthonormal real basis of the total-spin-zero subspace.  Group averaging of
a product state over SU(2) equals its orthogonal projection onto this
subspace, which is how coherent intertwiners are built; an Euler-angle
quadrature of the group integral is kept alongside as an independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ZeroProjection
from .su2 import CoherentSpinState, SphericalDirection, Spin, _cg, coherent_state, spin_matrices

__all__ = [
    "FourSpinState",
    "InvariantBasis",
    "InvariantState",
    "VectorConfiguration",
    "channel_labels",
    "build_basis",
    "embed",
    "project",
    "coherent_intertwiner",
    "group_average_quadrature",
    "closure_defect",
]

ZERO_PROJECTION_TOL = 1e-10


@dataclass(frozen=True)
class FourSpinState:
    """Normalized amplitude tensor of four spins in the magnetic product basis.

    Axis i is indexed by m_i = j_i, j_i - 1, ..., -j_i (descending).
    """

    spins: tuple
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(s.dim for s in self.spins)
        if self.amplitudes.shape != dims:
            raise ValueError(f"amplitude shape {self.amplitudes.shape} != {dims}")
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: |psi| = {nrm}")

    @property
    def dims(self):
        return tuple(s.dim for s in self.spins)


@dataclass(frozen=True)
class VectorConfiguration:
    """Four unit normals; closure of sum(j_i n_i) is a diagnostic, not a constraint."""

    directions: tuple

    def __post_init__(self):
        if len(self.directions) != 4:
            raise ValueError("a configuration holds exactly four directions")

    @classmethod
    def from_vectors(cls, vectors) -> "VectorConfiguration":
        return cls(tuple(SphericalDirection.from_vector(v) for v in vectors))

    def vectors(self) -> np.ndarray:
        return np.stack([d.unit_vector() for d in self.directions])


class InvariantBasis:
    """Orthonormal channel basis of the invariant subspace, labelled by intermediate spin.

    Immutable after construction; the stacked coefficient matrix used for
    projections is cached on first use.
    """

    def __init__(self, spins, channel_labels, basis_tensors):
        self.spins = tuple(spins)
        self.channel_labels = list(channel_labels)
        self.basis_tensors = list(basis_tensors)
        self._matrix = None

    def __len__(self):
        return len(self.channel_labels)

    @property
    def dims(self):
        return tuple(s.dim for s in self.spins)

    def matrix(self) -> np.ndarray:
        """Basis tensors flattened into rows, shape (len(basis), prod(dims))."""
        if self._matrix is None:
            if len(self) == 0:
                self._matrix = np.zeros((0, int(np.prod(self.dims))))
            else:
                self._matrix = np.stack(
                    [t.amplitudes.ravel() for t in self.basis_tensors]
                ).real
            self._matrix.flags.writeable = False
        return self._matrix


@dataclass(frozen=True)
class InvariantState:
    """Coefficients of a state over an InvariantBasis."""

    basis: InvariantBasis
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.coefficients) != len(self.basis):
            raise ValueError("coefficient length must match basis size")
        nrm = np.linalg.norm(self.coefficients)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"coefficients not normalized: |c| = {nrm}")


def channel_labels(spins) -> list:
    """Intermediate spins k coupling (j1,j2) and (j3,j4) to total spin zero."""
    tj1, tj2, tj3, tj4 = (s.twice_j for s in spins)
    if (tj1 + tj2) % 2 != (tj3 + tj4) % 2:
        return []
    lo = max(abs(tj1 - tj2), abs(tj3 - tj4))
    hi = min(tj1 + tj2, tj3 + tj4)
    return [Spin(tk) for tk in range(lo, hi + 1, 2)]


def _pair_coupling_matrix(tja: int, tjb: int, tk: int) -> np.ndarray:
    """Columns <ja ma; jb mb | k mu> over mu descending; rows flatten (ma, mb) descending."""
    da, db, dk = tja + 1, tjb + 1, tk + 1
    out = np.zeros((da * db, dk))
    for ia in range(da):
        tma = tja - 2 * ia
        for ib in range(db):
            tmb = tjb - 2 * ib
            tmu = tma + tmb
            if abs(tmu) > tk:
                continue
            out[ia * db + ib, (tk - tmu) // 2] = _cg(tja, tma, tjb, tmb, tk, tmu)
    return out


def build_basis(spins) -> InvariantBasis:
    """Construct the (12)(34) channel basis of the invariant subspace.

    Each basis tensor contracts <j1 j2 | k> and <j3 j4 | k> with the singlet
    pairing <k mu; k mu' | 0 0> = (-1)^(k - mu) delta(mu, -mu') / sqrt(2k+1).
    An empty basis is a valid result (no total spin zero).
    """
    spins = tuple(Spin.parse(s) for s in spins)
    dims = tuple(s.dim for s in spins)
    labels = channel_labels(spins)
    tensors = []
    for k in labels:
        tk = k.twice_j
        m12 = _pair_coupling_matrix(spins[0].twice_j, spins[1].twice_j, tk)
        m34 = _pair_coupling_matrix(spins[2].twice_j, spins[3].twice_j, tk)
        # mu runs descending in columns; -mu is the reversed column order
        mus = np.arange(tk, -tk - 1, -2)
        signs = np.where(((tk - mus) // 2) % 2 == 0, 1.0, -1.0) / math.sqrt(tk + 1)
        flat = (m12 * signs) @ m34[:, ::-1].T
        tensor = flat.reshape(dims).astype(complex)
        tensors.append(FourSpinState(spins, tensor))
    return InvariantBasis(spins, labels, tensors)


def embed(state: InvariantState) -> FourSpinState:
    """Expand channel coefficients into the full product-basis tensor."""
    basis = state.basis
    flat = state.coefficients @ basis.matrix()
    return FourSpinState(basis.spins, flat.reshape(basis.dims))


def project(tensor: FourSpinState, basis: InvariantBasis):
    """Project a tensor onto the invariant subspace.

    Returns (coefficients, projection_norm).  Coefficients are the raw
    overlaps <I_k | tensor> and are not renormalized here.
    """
    if tensor.spins != basis.spins:
        raise ValueError("tensor and basis spins differ")
    coeff = basis.matrix() @ tensor.amplitudes.ravel()
    return coeff, float(np.linalg.norm(coeff))


def closure_defect(spins, config: VectorConfiguration) -> float:
    """Euclidean norm of sum(j_i n_i)."""
    js = np.array([Spin.parse(s).j for s in spins])
    return float(np.linalg.norm((js[:, None] * config.vectors()).sum(axis=0)))


def coherent_product(spins, config: VectorConfiguration) -> np.ndarray:
    """Tensor product of the four coherent spin states (not yet invariant)."""
    states = [
        coherent_state(Spin.parse(s), d).amplitudes
        for s, d in zip(spins, config.directions)
    ]
    return np.einsum("a,b,c,d->abcd", *states)


def coherent_intertwiner(spins, config: VectorConfiguration, basis=None) -> InvariantState:
    """Normalized projection of a coherent product state onto the invariant subspace.

    Passing a prebuilt basis avoids rebuilding coupling tables in loops.
    Raises ZeroProjection when the product has no invariant component
    (e.g. all normals aligned).
    """
    spins = tuple(Spin.parse(s) for s in spins)
    if basis is None:
        basis = build_basis(spins)
    if len(basis) == 0:
        raise ZeroProjection("invariant subspace is empty for these spins")
    prod = coherent_product(spins, config)
    coeff = basis.matrix() @ prod.ravel()
    norm = np.linalg.norm(coeff)
    if norm < ZERO_PROJECTION_TOL:
        raise ZeroProjection(f"projection norm {norm:.3e} below {ZERO_PROJECTION_TOL:.0e}")
    return InvariantState(basis, coeff / norm)


def group_average_quadrature(spins, config: VectorConfiguration, order: int) -> FourSpinState:
    """Average the coherent product over the rotation group by quadrature.

    Euler-angle product rule: uniform nodes in alpha and gamma, Gauss-Legendre
    in cos(beta).  Exact (to rounding) once order exceeds twice the total spin;
    intended for small spins as an independent check of the projection route.
    """
    if order < 8:
        raise ValueError("order must be at least 8")
    spins = tuple(Spin.parse(s) for s in spins)
    if sum(s.twice_j for s in spins) % 2 != 0:
        raise ZeroProjection("total spin is half-integer; no invariant component")
    alphas = 2 * np.pi * np.arange(order) / order
    gammas = 2 * np.pi * np.arange(order) / order
    u, gl_w = np.polynomial.legendre.leggauss(order)
    betas = np.arccos(u)

    flat_states = []
    for s, d in zip(spins, config.directions):
        v = coherent_state(s, d).amplitudes
        m = np.array([(s.twice_j - 2 * i) / 2 for i in range(s.dim)])
        wy, vy = np.linalg.eigh(spin_matrices(s)[1])
        # D(a,b,g) v = diag(e^{-i a m}) . e^{-i b Jy} . diag(e^{-i g m}) v
        w_g = np.exp(-1j * np.outer(gammas, m)) * v[None, :]
        vdw = w_g @ vy.conj()
        phase_b = np.exp(-1j * np.outer(betas, wy))
        x = np.einsum("bd,md,gd->bgm", phase_b, vy, vdw)
        y = np.exp(-1j * np.outer(alphas, m))[:, None, None, :] * x[None, :, :, :]
        flat_states.append(y.reshape(-1, s.dim))

    w_a = np.full(order, 1.0 / order)
    weights = np.einsum("a,b,c->abc", w_a, gl_w / 2, w_a).ravel()
    avg = np.einsum("ga,gb,gc,gd,g->abcd", *flat_states, weights)
    norm = np.linalg.norm(avg)
    if norm < ZERO_PROJECTION_TOL:
        raise ZeroProjection(f"averaged norm {norm:.3e} below {ZERO_PROJECTION_TOL:.0e}")
    return FourSpinState(spins, avg / norm)
