"""Noise-level estimation, threshold choice and detail-coefficient masking.

A detail coefficient survives when its own magnitude, or the magnitude of
some earlier detail nested inside its data region, exceeds the threshold
("connected" rule: surviving coefficients form whole branches).  The two
linked details of a pair/pair merge are then kept or dropped together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import as_series
from .tguw import Decomposition, MergeType

#: Standard normal quantile at 3/4, pinned so the core has no dependency
#: on special-function libraries.
PHI_INV_THREE_QUARTERS = 0.6744897501960817

_MAD_DENOM = PHI_INV_THREE_QUARTERS * math.sqrt(6.0)

DEFAULT_THRESHOLD_CONST = 1.3


def mad_sigma(x) -> float:
    """Robust noise-level estimate from second differences.

    Median of |X_t - 2 X_{t+1} + X_{t+2}| rescaled to be consistent for
    the standard deviation of iid Gaussian noise; the second difference
    annihilates any linear trend, so the estimate is invariant to adding
    a line to the data.  Even-length medians average the two central
    order statistics.
    """
    x = as_series(x, min_length=3)
    second = x[:-2] - 2.0 * x[1:-1] + x[2:]
    return float(np.median(np.abs(second)) / _MAD_DENOM)


@dataclass(frozen=True)
class ThresholdSpec:
    """Threshold lam = constant_c * sigma_hat * sqrt(2 ln T)."""

    constant_c: float
    sigma_hat: float
    lam: float


def threshold_value(length: int, constant_c: float = DEFAULT_THRESHOLD_CONST,
                    sigma: float = 1.0) -> ThresholdSpec:
    """Universal-style threshold for a series of the given length."""
    if length < 2:
        raise ValueError(f"threshold needs length >= 2, got {length}")
    if constant_c <= 0.0:
        raise ValueError("constant_c must be positive")
    if sigma < 0.0:
        raise ValueError("sigma must be non-negative")
    lam = constant_c * sigma * math.sqrt(2.0 * math.log(length))
    return ThresholdSpec(constant_c, sigma, lam)


def apply_connected_rule(decomp: Decomposition, lam: float) -> np.ndarray:
    """Keep flags for records whose branch carries a detail above ``lam``.

    One chronological pass replays the merge structure, maintaining per
    active region the running maximum |detail| already emitted inside it;
    a record is kept iff max(own |detail|, running max of its region) is
    strictly greater than ``lam``.  The second record of a pair/pair
    merge sees the first one; the reverse direction is handled by
    :func:`apply_two_together_rule`.
    """
    n = decomp.n_records
    keep = np.zeros(n, dtype=bool)
    types = decomp.merge_types
    regions = decomp.regions
    absd = np.abs(decomp.details)
    region_max: dict[int, float] = {}  # region start -> max |detail| inside

    i = 0
    while i < n:
        p, q, r = (int(regions[i, 0]), int(regions[i, 1]), int(regions[i, 2]))
        t = int(types[i])
        if t == int(MergeType.TYPE1):
            prior = 0.0
        elif t == int(MergeType.TYPE2_LEFT):
            prior = region_max.pop(p + 1, 0.0)
        elif t == int(MergeType.TYPE2_RIGHT):
            prior = region_max.pop(p, 0.0)
        else:  # pair/pair: two constituent regions, two chained records
            prior = max(region_max.pop(p, 0.0), region_max.pop(q + 1, 0.0))
            mid = max(prior, absd[i])
            keep[i] = mid > lam
            i += 1
            new_max = max(mid, absd[i])
            keep[i] = new_max > lam
            region_max[p] = new_max
            i += 1
            continue
        new_max = max(prior, absd[i])
        keep[i] = new_max > lam
        region_max[p] = new_max
        i += 1
    return keep


def apply_two_together_rule(mask: np.ndarray, decomp: Decomposition) -> np.ndarray:
    """Keep both linked pair/pair details whenever either one is kept."""
    out = np.asarray(mask, dtype=bool).copy()
    first = np.flatnonzero(decomp.merge_types == int(MergeType.TYPE3_FIRST))
    if first.size:
        second = first + 1
        both = out[first] | out[second]
        out[first] = both
        out[second] = both
    return out


def threshold_mask(decomp: Decomposition, lam: float) -> np.ndarray:
    """Connected rule followed by the pair-keeping rule."""
    return apply_two_together_rule(apply_connected_rule(decomp, lam), decomp)
