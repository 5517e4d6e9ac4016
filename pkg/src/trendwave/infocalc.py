"""Shannon entropies, mutual / configurational information and mutual redundancy.

All quantities are in bits. Joint tables have one axis per dimension (at
most three); subsets of dimensions are given as 0-based axis indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

RENORMALIZE_TOL = 1e-9
MAX_DIMS = 3


@dataclass(frozen=True)
class JointDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim < 1 or p.ndim > MAX_DIMS:
            raise ValueError(f"expected 1 to {MAX_DIMS} dimensions, got {p.ndim}")
        if p.size == 0:
            raise ValueError("empty probability table")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ValueError("probabilities must be finite and non-negative")
        total = p.sum()
        if abs(total - 1.0) > RENORMALIZE_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def dims(self) -> int:
        return self.probabilities.ndim

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return self.probabilities.shape

    def marginal(self, subset) -> "JointDistribution":
        keep = _normalize_subset(subset, self.dims)
        drop = tuple(ax for ax in range(self.dims) if ax not in keep)
        m = self.probabilities.sum(axis=drop) if drop else self.probabilities
        # order the kept axes as requested
        order = np.argsort(np.argsort(keep))
        return JointDistribution(np.transpose(m, order) if m.ndim > 1 else m)

    def transpose(self, axes) -> "JointDistribution":
        return JointDistribution(np.transpose(self.probabilities, axes))


def _normalize_subset(subset, dims: int) -> tuple[int, ...]:
    subset = tuple(int(s) for s in subset)
    if not subset:
        raise ValueError("subset of dimensions must be non-empty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"repeated dimension in {subset}")
    if any(s < 0 or s >= dims for s in subset):
        raise ValueError(f"subset {subset} outside dimensions 0..{dims - 1}")
    return subset


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(dist: JointDistribution, subset=None) -> float:
    """Entropy in bits of the marginal over ``subset`` (all dimensions if omitted)."""
    if subset is None:
        subset = range(dist.dims)
    return max(_entropy_bits(dist.marginal(subset).probabilities), 0.0)


def mutual_information_2(dist: JointDistribution) -> float:
    """``T12 = H1 + H2 - H12``."""
    if dist.dims != 2:
        raise ValueError(f"mutual information needs 2 dimensions, got {dist.dims}")
    h = lambda *s: shannon_entropy(dist, s)
    return max(h(0) + h(1) - h(0, 1), 0.0)


def configurational_information_3(dist: JointDistribution) -> float:
    """``T123 = H1 + H2 + H3 - H12 - H13 - H23 + H123``; can be negative."""
    if dist.dims != 3:
        raise ValueError(f"configurational information needs 3 dimensions, got {dist.dims}")
    h = lambda *s: shannon_entropy(dist, s)
    return (h(0) + h(1) + h(2)
            - h(0, 1) - h(0, 2) - h(1, 2)
            + h(0, 1, 2))


def mutual_redundancy(dist: JointDistribution) -> float:
    """``R12 = -T12`` for two dimensions, ``R123 = T123`` for three."""
    if dist.dims == 2:
        return -mutual_information_2(dist)
    if dist.dims == 3:
        return configurational_information_3(dist)
    raise ValueError(f"mutual redundancy needs 2 or 3 dimensions, got {dist.dims}")


def entropy_report(dist: JointDistribution) -> dict:
    """Entropies of every dimension subset plus T and R, keyed like ``H12``."""
    out = {"dims": dist.dims, "H": {}}
    for r in range(1, dist.dims + 1):
        for sub in combinations(range(dist.dims), r):
            out["H"]["".join(str(s + 1) for s in sub)] = shannon_entropy(dist, sub)
    if dist.dims == 2:
        out["T"] = mutual_information_2(dist)
    elif dist.dims == 3:
        out["T"] = configurational_information_3(dist)
    if dist.dims >= 2:
        out["R"] = mutual_redundancy(dist)
    return out
