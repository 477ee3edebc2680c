"""Inverse transform, change-point extraction and dense-basis utilities."""

from __future__ import annotations

import numpy as np

from .errors import CapExceeded, MaskLengthMismatch
from .series import as_series
from .tguw import Decomposition, MergeType

BASIS_CAP_DEFAULT = 2048


def _checked_mask(decomp: Decomposition, mask) -> np.ndarray:
    if mask is None:
        return np.ones(decomp.n_records, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (decomp.n_records,):
        raise MaskLengthMismatch(
            f"mask has shape {mask.shape}, expected ({decomp.n_records},)")
    return mask


def tguw_inverse(decomp: Decomposition, mask=None) -> np.ndarray:
    """Rebuild a length-T signal from masked details and the two smooths.

    Kept records contribute their original detail value, dropped ones
    contribute 0; the recorded orthonormal merges are then replayed in
    reverse chronological order with transposed matrices.
    """
    mask = _checked_mask(decomp, mask)
    v = np.zeros(decomp.length)
    v[decomp.slots[:, 2]] = np.where(mask, decomp.details, 0.0)
    v[decomp.smooth_slots[0]] = decomp.smooth1
    v[decomp.smooth_slots[1]] = decomp.smooth2

    scales = decomp.scales
    types = decomp.merge_types
    n = decomp.n_records
    # records of one scale touch disjoint slots except the two halves of a
    # pair/pair merge, which must be undone second-half first
    starts = np.searchsorted(scales, np.arange(1, decomp.n_scales + 2))
    for j in range(decomp.n_scales, 0, -1):
        a, b = int(starts[j - 1]), int(starts[j])
        if a == b:
            continue
        blk = slice(a, b)
        first_half = types[blk] == int(MergeType.TYPE3_FIRST)
        _undo_batch(v, decomp, np.arange(a, b)[~first_half])
        _undo_batch(v, decomp, np.arange(a, b)[first_half])
    return v


def _undo_batch(v: np.ndarray, decomp: Decomposition, idx: np.ndarray) -> None:
    if idx.size == 0:
        return
    sl = decomp.slots[idx]
    vals = v[sl]
    v[sl] = np.einsum("kij,ki->kj", decomp.matrices[idx], vals)


def extract_changepoints(decomp: Decomposition, mask=None) -> list[int]:
    """Sorted distinct boundaries q of all kept records.

    The two records of a pair/pair merge share their q and contribute it
    once.  Locations follow the last-index-of-segment convention.
    """
    mask = _checked_mask(decomp, mask)
    qs = decomp.regions[mask, 1]
    return sorted(int(q) for q in set(qs.tolist()))


def materialize_basis(decomp: Decomposition, cap: int = BASIS_CAP_DEFAULT) -> np.ndarray:
    """Dense T x T orthonormal matrix whose rows generate the coefficients.

    Rows: the two smooth-generating vectors first, then one row per
    record in chronological order.  Built by replaying the merges on the
    identity; O(T^2) memory, so guarded by ``cap``.
    """
    t = decomp.length
    if t > cap:
        raise CapExceeded(f"T = {t} exceeds the materialization cap {cap}")
    p = np.eye(t)
    for i in range(decomp.n_records):
        sl = decomp.slots[i]
        p[sl, :] = decomp.matrices[i] @ p[sl, :]
    rows = [p[decomp.smooth_slots[0]], p[decomp.smooth_slots[1]]]
    return np.vstack(rows + [p[decomp.slots[:, 2]]])


def second_difference_kinks(f, threshold: float | None = None) -> list[int]:
    """Interior positions t (1-based) where |f_{t-1} - 2 f_t + f_{t+1}| is large.

    Default threshold: 1e-7 * max(1, sup-norm of f).
    """
    f = as_series(f, min_length=3)
    if threshold is None:
        threshold = 1e-7 * max(1.0, float(np.abs(f).max()))
    dd = f[:-2] - 2.0 * f[1:-1] + f[2:]
    return [int(i) + 2 for i in np.flatnonzero(np.abs(dd) > threshold)]


def cross_check_changepoints(f, changepoints, threshold: float | None = None) -> dict:
    """Compare extracted change-points against a second-difference scan of f.

    A change-point at eta (last index of a segment) shows up as a kink at
    eta and/or eta+1.  Disagreements are reported, never resolved.
    """
    kinks = second_difference_kinks(f, threshold)
    cps = sorted(int(c) for c in changepoints)
    explained = set()
    for c in cps:
        explained.add(c)
        explained.add(c + 1)
    unexplained = [k for k in kinks if k not in explained]
    silent = [c for c in cps if c not in kinks and (c + 1) not in kinks]
    return {
        "changepoints": cps,
        "scan_kinks": kinks,
        "unexplained_kinks": unexplained,
        "changepoints_without_kink": silent,
        "consistent": not unexplained and not silent,
    }
