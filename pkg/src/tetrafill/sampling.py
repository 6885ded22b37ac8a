"""Reproducible ensemble sampling and the closed-configuration parametrization.

Randomness is organized as counter-based Philox streams: one stream per
sample index, each a pure function of (seed, stream_index).  Workers can
therefore evaluate sample indices in any order and still reproduce byte-for-
byte identical output.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateConfig, ZeroProjection
from .intertwiner import (
    FourSpinState,
    InvariantBasis,
    InvariantState,
    VectorConfiguration,
    coherent_intertwiner,
)
from .su2 import SphericalDirection, Spin

__all__ = [
    "EnsembleKind",
    "ClosedConfigParams",
    "RngStream",
    "sample_arbitrary",
    "sample_invariant",
    "sample_coherent_open",
    "sample_coherent_closed",
    "closed_config_vectors",
    "OpenSample",
    "ClosedSample",
]

_THETA_EDGE = 1e-9


class EnsembleKind(enum.Enum):
    """The four sampled state families."""

    ARBITRARY = "Arbitrary"
    INVARIANT = "Invariant"
    COHERENT_OPEN = "CoherentOpen"
    COHERENT_CLOSED = "CoherentClosed"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ClosedConfigParams:
    """The two shape degrees of freedom of a closed four-normal configuration."""

    theta: float  # angle between n1 and n2, strictly inside (0, pi)
    phi: float  # position of n3 on the intersection circle, [0, 2pi)

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi:
            raise ValueError(f"theta must lie strictly inside (0, pi): {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi out of [0, 2pi): {self.phi}")


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream addressed by (seed, stream_index)."""

    seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        key = self.seed & (2**128 - 1)
        return np.random.Generator(np.random.Philox(key=key, counter=self.stream_index << 128))


class OpenSample(NamedTuple):
    state: InvariantState
    config: VectorConfiguration
    retries: int


class ClosedSample(NamedTuple):
    state: InvariantState
    config: VectorConfiguration
    params: ClosedConfigParams
    retries: int


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    return rng


def sample_arbitrary(j, rng) -> FourSpinState:
    """Uniform random ray in the full product space (normalized complex Gaussians)."""
    j = Spin.parse(j)
    gen = _as_generator(rng)
    shape = (j.dim,) * 4
    amps = gen.normal(size=shape) + 1j * gen.normal(size=shape)
    amps /= np.linalg.norm(amps)
    return FourSpinState((j,) * 4, amps)


def sample_invariant(j, basis: InvariantBasis, rng) -> InvariantState:
    """Uniform random ray in the invariant subspace."""
    if len(basis) == 0:
        raise ValueError("basis is empty")
    gen = _as_generator(rng)
    coeff = gen.normal(size=len(basis)) + 1j * gen.normal(size=len(basis))
    coeff /= np.linalg.norm(coeff)
    return InvariantState(basis, coeff)


def draw_uniform_direction(gen) -> SphericalDirection:
    """Uniform point on the unit sphere (cos(theta) flat, phi flat)."""
    cos_t = gen.uniform(-1.0, 1.0)
    phi = gen.uniform(0.0, 2 * math.pi)
    return SphericalDirection(math.acos(cos_t), phi % (2 * math.pi))


def draw_closed_params(gen) -> ClosedConfigParams:
    """Shape parameters of a uniformly random closed configuration.

    theta comes from the density sin(theta/2)/2 by inverse CDF,
    theta = 2 arccos(1 - u); phi is flat on the circle.  Draws landing within
    1e-9 of the degenerate endpoints are redrawn.
    """
    while True:
        u = gen.uniform()
        theta = 2 * math.acos(max(-1.0, min(1.0, 1.0 - u)))
        if _THETA_EDGE < theta < math.pi - _THETA_EDGE:
            break
    phi = gen.uniform(0.0, 2 * math.pi) % (2 * math.pi)
    return ClosedConfigParams(theta, phi)


def closed_config_vectors(params: ClosedConfigParams) -> VectorConfiguration:
    """Four closing unit normals from the two shape parameters.

    n1 = y-hat and n2 = (sin theta, cos theta, 0).  The endpoints of n3 and
    n4 lie on the circle where the unit sphere meets the unit sphere centered
    at -(n1+n2); n3 sits at angle phi in the frame (z-hat, (n1+n2)/|..| x z-hat)
    and n4 = -(n1+n2)-n3 is its antipode on that circle.
    """
    theta, phi = params.theta, params.phi
    if theta < _THETA_EDGE or theta > math.pi - _THETA_EDGE:
        raise DegenerateConfig(f"theta = {theta} too close to 0 or pi")
    n1 = np.array([0.0, 1.0, 0.0])
    n2 = np.array([math.sin(theta), math.cos(theta), 0.0])
    csum = n1 + n2
    norm_c = np.linalg.norm(csum)
    radius = math.sqrt(max(1.0 - norm_c**2 / 4, 0.0))
    e1 = np.array([0.0, 0.0, 1.0])
    e2 = np.cross(csum / norm_c, e1)
    n3 = -csum / 2 + radius * (math.cos(phi) * e1 + math.sin(phi) * e2)
    n4 = -csum - n3
    return VectorConfiguration.from_vectors([n1, n2, n3 / np.linalg.norm(n3), n4 / np.linalg.norm(n4)])


_MAX_RETRIES = 64


def sample_coherent_open(j, basis: InvariantBasis, rng) -> OpenSample:
    """Coherent intertwiner of four independent uniform normals (closure not imposed)."""
    j = Spin.parse(j)
    gen = _as_generator(rng)
    retries = 0
    while True:
        config = VectorConfiguration(tuple(draw_uniform_direction(gen) for _ in range(4)))
        try:
            state = coherent_intertwiner((j,) * 4, config, basis=basis)
            return OpenSample(state, config, retries)
        except ZeroProjection:
            retries += 1
            if retries > _MAX_RETRIES:
                raise


def sample_coherent_closed(j, basis: InvariantBasis, rng) -> ClosedSample:
    """Coherent intertwiner of a uniformly random closed configuration."""
    j = Spin.parse(j)
    gen = _as_generator(rng)
    retries = 0
    while True:
        params = draw_closed_params(gen)
        config = closed_config_vectors(params)
        try:
            state = coherent_intertwiner((j,) * 4, config, basis=basis)
            return ClosedSample(state, config, params, retries)
        except ZeroProjection:
            retries += 1
            if retries > _MAX_RETRIES:
                raise
