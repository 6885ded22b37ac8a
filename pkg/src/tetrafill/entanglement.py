"""Reduced density matrices and bipartite von Neumann entropies.

A pure four-party state has seven inequivalent bipartitions: four
one-against-rest cuts and three two-against-two cuts.  Entropies are
computed in bits and also normalized by their maximum so that every value
lies in [0, 1] regardless of local dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDensity
from .intertwiner import FourSpinState

__all__ = [
    "Bipartition",
    "BipartitionEntropies",
    "ONE_TO_OTHER",
    "TWO_TO_TWO",
    "reduced_density",
    "von_neumann_entropy",
    "bipartition_entropies",
]

_EIG_FLOOR = -1e-8
_TRACE_TOL = 1e-8


@dataclass(frozen=True)
class Bipartition:
    """Kept slots (1-based) of a bipartition; two-slot cuts are canonicalized to contain slot 1.

    The complement cut has the same entropy for a pure global state, so the
    canonical representatives {1},{2},{3},{4},{1,2},{1,3},{1,4} cover all
    seven cases.
    """

    kept_slots: frozenset

    def __init__(self, kept_slots):
        kept = frozenset(kept_slots)
        if not kept <= {1, 2, 3, 4} or len(kept) not in (1, 2):
            raise ValueError(f"kept slots must be 1 or 2 of {{1,2,3,4}}, got {set(kept_slots)}")
        if len(kept) == 2 and 1 not in kept:
            kept = frozenset({1, 2, 3, 4}) - kept
        object.__setattr__(self, "kept_slots", kept)

    @property
    def axes(self):
        """Zero-based tensor axes of the kept slots, sorted."""
        return tuple(sorted(s - 1 for s in self.kept_slots))


ONE_TO_OTHER = tuple(Bipartition({i}) for i in (1, 2, 3, 4))
TWO_TO_TWO = tuple(Bipartition(p) for p in ({1, 2}, {1, 3}, {1, 4}))


@dataclass(frozen=True)
class BipartitionEntropies:
    """All seven bipartite entropies of a four-party pure state.

    ``one_to_other`` and ``two_to_two`` are normalized to [0, 1]; the raw
    values in bits are kept alongside.
    """

    one_to_other: np.ndarray = field(repr=False)
    two_to_two: np.ndarray = field(repr=False)
    raw_one_to_other: np.ndarray = field(repr=False)
    raw_two_to_two: np.ndarray = field(repr=False)


def reduced_density(state: FourSpinState, part: Bipartition) -> np.ndarray:
    """Partial trace over the complement of the kept slots.

    Reshapes the tensor to a (kept, traced) matrix M and returns M M+,
    so the complement's density matrix is never materialized.
    """
    axes = part.axes
    others = tuple(i for i in range(4) if i not in axes)
    dims = state.dims
    d_kept = int(np.prod([dims[i] for i in axes]))
    m = np.transpose(state.amplitudes, axes + others).reshape(d_kept, -1)
    return m @ m.conj().T


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy -sum(lambda log2 lambda) of a density matrix, in bits.

    Eigenvalues in [-1e-8, 0) are clipped to zero as rounding debris; below
    that, or if the trace is off unity by more than 1e-8, the matrix is
    rejected as InvalidDensity.
    """
    trace = np.trace(rho).real
    if abs(trace - 1.0) > _TRACE_TOL:
        raise InvalidDensity(f"trace deviates from 1 by {abs(trace - 1.0):.3e}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > _TRACE_TOL:
        raise InvalidDensity(f"Hermiticity residual {herm:.3e}")
    lam = np.linalg.eigvalsh(rho)
    if lam[0] < _EIG_FLOOR:
        raise InvalidDensity(f"eigenvalue {lam[0]:.3e} below {_EIG_FLOOR:.0e}")
    lam = np.clip(lam, 0.0, 1.0)
    nz = lam[lam > 0]
    return float(-(nz * np.log2(nz)).sum())


def bipartition_entropies(state: FourSpinState) -> BipartitionEntropies:
    """All seven entropies, raw (bits) and normalized by the kept-side maximum."""
    dims = state.dims
    raw1 = np.array([von_neumann_entropy(reduced_density(state, p)) for p in ONE_TO_OTHER])
    raw2 = np.array([von_neumann_entropy(reduced_density(state, p)) for p in TWO_TO_TWO])
    cap1 = np.array([math.log2(dims[p.axes[0]]) for p in ONE_TO_OTHER])
    cap2 = np.array([math.log2(dims[p.axes[0]] * dims[p.axes[1]]) for p in TWO_TO_TWO])
    # dimension-1 slots carry no entanglement; avoid 0/0 on their zero caps
    return BipartitionEntropies(
        one_to_other=np.divide(raw1, cap1, out=np.zeros(4), where=cap1 > 0),
        two_to_two=np.divide(raw2, cap2, out=np.zeros(3), where=cap2 > 0),
        raw_one_to_other=raw1,
        raw_two_to_two=raw2,
    )
