"""SU(2) representation primitives.

Half-integer spins are stored exactly as twice their value, so triangle
inequalities and parity checks are pure integer arithmetic.  On top of that
this module provides Clebsch-Gordan coefficients (Condon-Shortley phases),
spin matrices, rotation matrices of the irreducible representations, and
coherent spin states labelled by a point on the unit sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "Spin",
    "MagneticIndex",
    "SphericalDirection",
    "CoherentSpinState",
    "log_factorial",
    "clebsch_gordan",
    "coherent_state",
    "wigner_rotation",
    "spin_matrices",
]


@dataclass(frozen=True, order=True)
class Spin:
    """A spin quantum number j, stored as the integer 2j."""

    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, (int, np.integer)) or self.twice_j < 0:
            raise ValueError(f"twice_j must be a non-negative integer, got {self.twice_j!r}")

    @classmethod
    def parse(cls, text) -> "Spin":
        """Accept '3/2', '1.5', '3', or a number; must be a half-integer >= 0."""
        if isinstance(text, Spin):
            return text
        frac = Fraction(str(text))
        twice = frac * 2
        if twice.denominator != 1 or twice < 0:
            raise ValueError(f"not a non-negative half-integer: {text!r}")
        return cls(int(twice))

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        """Dimension of the spin-j representation, 2j+1."""
        return self.twice_j + 1

    def magnetic_range(self):
        """All valid magnetic indices, ordered m = j, j-1, ..., -j."""
        return [MagneticIndex(tm) for tm in range(self.twice_j, -self.twice_j - 1, -2)]

    def __str__(self):
        if self.twice_j % 2 == 0:
            return str(self.twice_j // 2)
        return f"{self.twice_j}/2"


@dataclass(frozen=True)
class MagneticIndex:
    """A magnetic quantum number m, stored as the integer 2m."""

    twice_m: int

    def valid_for(self, spin: Spin) -> bool:
        return abs(self.twice_m) <= spin.twice_j and (self.twice_m - spin.twice_j) % 2 == 0

    @property
    def m(self) -> float:
        return self.twice_m / 2


@dataclass(frozen=True)
class SphericalDirection:
    """A unit direction given by polar angle theta in [0, pi] and azimuth phi in [0, 2pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta out of [0, pi]: {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi out of [0, 2pi): {self.phi}")

    @classmethod
    def from_vector(cls, v) -> "SphericalDirection":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if not math.isclose(n, 1.0, abs_tol=1e-12):
            raise ValueError(f"direction vector not unit: |v| = {n}")
        theta = math.acos(min(1.0, max(-1.0, v[2] / n)))
        phi = math.atan2(v[1], v[0]) % (2 * math.pi)
        return cls(theta, phi)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )


@dataclass(frozen=True)
class CoherentSpinState:
    """Spin-j state of minimal uncertainty about a direction on the sphere.

    ``amplitudes[i]`` is the component on |j, m> with m = j - i (descending order).
    """

    spin: Spin
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.amplitudes) != self.spin.dim:
            raise ValueError("amplitude length must equal 2j+1")
        nrm = np.linalg.norm(self.amplitudes)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"coherent state not normalized: |a| = {nrm}")


@lru_cache(maxsize=None)
def log_factorial(k: int) -> float:
    """ln(k!) for non-negative integer k, cached."""
    if k < 0:
        raise ValueError("factorial of a negative integer")
    return math.lgamma(k + 1)


def clebsch_gordan(
    j1: Spin,
    m1: MagneticIndex,
    j2: Spin,
    m2: MagneticIndex,
    J: Spin,
    M: MagneticIndex,
) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> with Condon-Shortley phases.

    Returns 0 for couplings that violate m1 + m2 = M, the triangle
    inequality, or spin/index parity.  Invalid magnetic indices raise.
    """
    for spin, idx in ((j1, m1), (j2, m2), (J, M)):
        if not idx.valid_for(spin):
            raise ValueError(f"magnetic index 2m={idx.twice_m} invalid for spin {spin}")
    return _cg(j1.twice_j, m1.twice_m, j2.twice_j, m2.twice_m, J.twice_j, M.twice_m)


@lru_cache(maxsize=None)
def _cg(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> float:
    """Racah sum formula on twice-integer arguments."""
    if tm1 + tm2 != tM:
        return 0.0
    if tJ < abs(tj1 - tj2) or tJ > tj1 + tj2 or (tj1 + tj2 + tJ) % 2 != 0:
        return 0.0
    lf = log_factorial
    h = lambda x: x // 2  # halve an even twice-integer (may be negative in bounds)
    log_pref = (
        math.log(tJ + 1)
        + lf(h(tj1 + tj2 - tJ))
        + lf(h(tj1 - tj2 + tJ))
        + lf(h(-tj1 + tj2 + tJ))
        - lf(h(tj1 + tj2 + tJ) + 1)
        + lf(h(tJ + tM))
        + lf(h(tJ - tM))
        + lf(h(tj1 - tm1))
        + lf(h(tj1 + tm1))
        + lf(h(tj2 - tm2))
        + lf(h(tj2 + tm2))
    )
    t_min = max(0, h(tj2 - tJ - tm1), h(tj1 + tm2 - tJ))
    t_max = min(h(tj1 + tj2 - tJ), h(tj1 - tm1), h(tj2 + tm2))
    if t_max < t_min:
        return 0.0
    # sign-tracked sum of exp(log) terms, largest factored out for stability
    terms = []
    for t in range(t_min, t_max + 1):
        log_den = (
            lf(t)
            + lf(h(tj1 + tj2 - tJ) - t)
            + lf(h(tj1 - tm1) - t)
            + lf(h(tj2 + tm2) - t)
            + lf(h(tJ - tj2 + tm1) + t)
            + lf(h(tJ - tj1 - tm2) + t)
        )
        terms.append((1.0 if t % 2 == 0 else -1.0, -log_den))
    peak = max(e for _, e in terms)
    total = sum(sign * math.exp(e - peak) for sign, e in terms)
    return math.exp(0.5 * log_pref + peak) * total


def coherent_state(j: Spin, direction: SphericalDirection) -> CoherentSpinState:
    """Coherent spin state for a unit direction.

    Components on |j, m> are sqrt((2j)! / ((j-m)!(j+m)!)) xi^(j-m) / (1+|xi|^2)^j
    with xi = exp(-i phi) tan(theta/2), evaluated in the numerically stable
    half-angle form cos(theta/2)^(j+m) sin(theta/2)^(j-m) exp(-i (j-m) phi).
    At theta = pi the state is exactly exp(-2ij phi) |j, -j>.
    """
    tj = j.twice_j
    d = j.dim
    amps = np.zeros(d, dtype=complex)
    if direction.theta == math.pi:
        amps[-1] = np.exp(-1j * tj * direction.phi)
        return CoherentSpinState(j, amps)
    c = math.cos(direction.theta / 2)
    s = math.sin(direction.theta / 2)
    lf = log_factorial
    for i in range(d):
        k = i  # k = j - m
        mag = math.exp(0.5 * (lf(tj) - lf(k) - lf(tj - k))) * c ** (tj - k) * s**k
        amps[i] = mag * np.exp(-1j * k * direction.phi)
    amps /= np.linalg.norm(amps)
    return CoherentSpinState(j, amps)


@lru_cache(maxsize=None)
def spin_matrices(j: Spin):
    """(Jx, Jy, Jz) in the descending-m basis; read-only arrays."""
    tj = j.twice_j
    d = j.dim
    m = np.array([(tj - 2 * i) / 2 for i in range(d)])
    jz = np.diag(m).astype(complex)
    jp = np.zeros((d, d), dtype=complex)
    jj = tj / 2
    for i in range(1, d):
        jp[i - 1, i] = math.sqrt(jj * (jj + 1) - m[i] * (m[i] + 1))
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    for a in (jx, jy, jz):
        a.flags.writeable = False
    return jx, jy, jz


def wigner_rotation(j: Spin, axis, angle: float) -> np.ndarray:
    """Rotation matrix exp(-i angle axis.J) of the spin-j representation.

    The axis must be unit within 1e-12.  Diagonal convention: rotation about
    z by alpha gives diag(exp(-i alpha m)) with m descending.
    """
    axis = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise ValueError("rotation axis must be a unit vector")
    jx, jy, jz = spin_matrices(j)
    h = axis[0] * jx + axis[1] * jy + axis[2] * jz
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T
