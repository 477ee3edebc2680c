"""Optional pruning of an initial change-point estimate, plus segment fits.

Stage 1 re-runs the merge loop on the fitted signal greedily (one merge
per pass) and stops at the first merge whose detail would exceed the
threshold; the boundaries still separating active regions at that point
survive.  Stage 2 then repeatedly removes the change-point with the
smallest local detail, computed from scratch over a window straddling it,
while that detail is within the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange
from .series import as_series
from .tguw import (DEFAULT_ZERO_TOL, TransformOptions, TransformState,
                   _candidate_summaries, _enumerate_candidates, _RecordStore,
                   _apply_candidates, compute_detail_filter,
                   complete_orthonormal)


@dataclass(frozen=True)
class SegmentFit:
    """A fitted segment: OLS line, or the raw value for a single point."""

    start: int
    end: int
    intercept: float
    slope: float
    is_anomaly: bool

    def values(self) -> np.ndarray:
        t = np.arange(self.start, self.end + 1, dtype=np.float64)
        return self.intercept + self.slope * t


def ols_segment_fit(x, start: int, end: int) -> SegmentFit:
    """Least-squares line over x[start..end] (1-based, inclusive).

    A single-point segment cannot carry a regression; it is flagged as an
    anomaly and fitted by its own value.
    """
    x = as_series(x, min_length=1)
    if not 1 <= start <= end <= x.size:
        raise IndexOutOfRange(f"segment [{start}, {end}] outside 1..{x.size}")
    if start == end:
        return SegmentFit(start, end, float(x[start - 1]), 0.0, True)
    t = np.arange(start, end + 1, dtype=np.float64)
    y = x[start - 1:end]
    tc = t - t.mean()
    slope = float(np.dot(tc, y) / np.dot(tc, tc))
    intercept = float(y.mean() - slope * t.mean())
    return SegmentFit(start, end, intercept, slope, False)


def segments_from_changepoints(x, changepoints) -> list[SegmentFit]:
    """Tile 1..T with per-segment fits; boundaries are last-index positions."""
    x = as_series(x, min_length=1)
    bounds = [0] + sorted(set(int(c) for c in changepoints)) + [x.size]
    return [ols_segment_fit(x, lo + 1, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]


def evaluate_segments(segments: list[SegmentFit], length: int) -> np.ndarray:
    out = np.empty(length)
    for seg in segments:
        out[seg.start - 1:seg.end] = seg.values()
    return out


def stage1(f_tilde, x, lam: float,
           options: TransformOptions | None = None) -> tuple[list[int], np.ndarray]:
    """Greedy re-merge of the fitted signal; returns (change-points, refit).

    One merge per pass, always the global minimum summary detail; the
    loop stops before applying a merge whose summary exceeds ``lam``.
    The output signal refits x by least squares on each surviving
    segment (single points keep their raw value).
    """
    f_tilde = as_series(f_tilde, min_length=1)
    x = as_series(x, min_length=1)
    if f_tilde.size != x.size:
        raise IndexOutOfRange("fitted signal and data must have equal length")
    opts = options if options is not None else TransformOptions()
    cps: list[int] = []
    if f_tilde.size >= 3:
        state = TransformState(f_tilde, opts)
        store = _RecordStore(f_tilde.size - 2)
        scale = 0
        while state.smooth_count() >= 3:
            scale += 1
            cand = _enumerate_candidates(state)
            summary = _candidate_summaries(state, cand)
            order = np.lexsort((cand.r, cand.p, summary))
            best = int(order[0])
            if summary[best] > lam:
                break
            _apply_candidates(state, cand, [best], scale, store)
        cps = [int(e) for e in state.u_end[:-1]]
    segments = segments_from_changepoints(x, cps)
    return cps, evaluate_segments(segments, x.size)


def _pair_representation(x: np.ndarray, start: int, end: int, tol: float):
    """Two-coefficient summary of x[start..end] with its weight pairs.

    Windows of length >= 3 are merged left to right with the transform
    arithmetic; a 2-point window keeps its raw values (identity basis).
    Returns (s_pair, wc_pair, wl_pair).
    """
    length = end - start + 1
    if length == 2:
        s = np.array([x[start - 1], x[end - 1]])
        wc = np.array([1.0, 1.0])
        wl = np.array([float(start), float(end)])
        return s, wc, wl
    sv = x[start - 1:end]
    s = np.array([sv[0], sv[1], sv[2]])
    wc = np.ones(3)
    wl = np.array([start, start + 1, start + 2], dtype=np.float64)
    s, wc, wl = _reduce_triplet(s, wc, wl, tol)
    for k in range(3, length):
        s = np.array([s[0], s[1], sv[k]])
        wc = np.array([wc[0], wc[1], 1.0])
        wl = np.array([wl[0], wl[1], float(start + k)])
        s, wc, wl = _reduce_triplet(s, wc, wl, tol)
    return s, wc, wl


def _reduce_triplet(s, wc, wl, tol):
    h = compute_detail_filter(wc, wl, tol)
    l1, l2 = complete_orthonormal(h, tol)
    return (np.array([l1 @ s, l2 @ s]),
            np.array([l1 @ wc, l2 @ wc]),
            np.array([l1 @ wl, l2 @ wl]))


def _snap(d: float, s3: np.ndarray, tol: float) -> float:
    local = max(1.0, float(np.abs(s3).max()))
    return 0.0 if abs(d) <= tol * local else float(d)


def local_detail(x, p: int, q: int, r: int,
                 tol: float = DEFAULT_ZERO_TOL) -> float:
    """|summary detail| of the window [p, r] split at q, from scratch.

    Each half is condensed to at most two coefficients and the halves are
    contrasted exactly as the transform would contrast two adjacent
    regions; a window of fewer than three points has no contrast and
    yields 0.
    """
    x = as_series(x, min_length=1)
    if not 1 <= p <= q < r <= x.size:
        raise IndexOutOfRange(f"window ({p}, {q}, {r}) outside 1..{x.size}")
    reps = []
    for a, b in ((p, q), (q + 1, r)):
        if a == b:
            reps.append((np.array([x[a - 1]]), np.array([1.0]),
                         np.array([float(a)])))
        else:
            reps.append(_pair_representation(x, a, b, tol))
    (s_l, wc_l, wl_l), (s_r, wc_r, wl_r) = reps
    k = s_l.size + s_r.size
    if k == 2:
        return 0.0
    if k == 3:
        s3 = np.concatenate([s_l, s_r])
        wc3 = np.concatenate([wc_l, wc_r])
        wl3 = np.concatenate([wl_l, wl_r])
        h = compute_detail_filter(wc3, wl3, tol)
        return abs(_snap(float(h @ s3), s3, tol))
    s3 = np.array([s_l[0], s_l[1], s_r[0]])
    wc3 = np.array([wc_l[0], wc_l[1], wc_r[0]])
    wl3 = np.array([wl_l[0], wl_l[1], wl_r[0]])
    h = compute_detail_filter(wc3, wl3, tol)
    d1 = _snap(float(h @ s3), s3, tol)
    s2_, wc2_, wl2_ = _reduce_triplet(s3, wc3, wl3, tol)
    s3b = np.array([s2_[0], s2_[1], s_r[1]])
    wc3b = np.array([wc2_[0], wc2_[1], wc_r[1]])
    wl3b = np.array([wl2_[0], wl2_[1], wl_r[1]])
    h2 = compute_detail_filter(wc3b, wl3b, tol)
    d2 = _snap(float(h2 @ s3b), s3b, tol)
    return max(abs(d1), abs(d2))


def stage2(x, changepoints, lam: float,
           tol: float = DEFAULT_ZERO_TOL) -> tuple[list[int], list[SegmentFit]]:
    """Prune change-points whose local detail is within ``lam``.

    For boundaries eta_0 = 0 < eta_1 < ... < eta_N < eta_{N+1} = T the
    candidate window for eta_i is p = floor((eta_{i-1} + eta_i)/2) + 1,
    q = eta_i, r = ceil((eta_i + eta_{i+1})/2).  The argmin detail (ties
    to the smaller index) is removed while it is <= lam.  Returns the
    surviving change-points and the per-segment fits.
    """
    x = as_series(x, min_length=1)
    t = x.size
    cps = sorted(set(int(c) for c in changepoints))
    if cps and not 1 <= cps[0] <= cps[-1] <= t - 1:
        raise IndexOutOfRange(f"change-points must lie in 1..{t - 1}")

    def window(bounds: list[int], i: int) -> tuple[int, int, int]:
        p = (bounds[i - 1] + bounds[i]) // 2 + 1
        q = bounds[i]
        r = -(-(bounds[i] + bounds[i + 1]) // 2)
        return p, q, r

    details: list[float] = []
    bounds = [0] + cps + [t]
    details = [local_detail(x, *window(bounds, i), tol=tol)
               for i in range(1, len(cps) + 1)]
    while cps:
        i0 = min(range(len(cps)), key=lambda i: (details[i], i))
        if details[i0] > lam:
            break
        cps.pop(i0)
        details.pop(i0)
        bounds = [0] + cps + [t]
        # only the windows adjacent to the removed boundary change
        for i in (i0, i0 + 1):
            if 1 <= i <= len(cps):
                details[i - 1] = local_detail(x, *window(bounds, i), tol=tol)
    return cps, segments_from_changepoints(x, cps)
