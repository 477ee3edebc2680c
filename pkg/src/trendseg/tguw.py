"""Bottom-up adaptive unbalanced wavelet transform of a univariate series.

The forward pass repeatedly replaces a triplet of adjacent smooth
coefficients by two updated smooth coefficients plus one frozen detail
coefficient, using a data-adaptive orthonormal 3x3 matrix.  The detail
filter (third matrix row) is chosen orthogonal to the running constancy
and linearity weight triplets of the merged regions, so a detail is zero
exactly when the underlying raw data stretch is perfectly linear.  Up to
``max(2, ceil(rho * n_smooth))`` non-overlapping merges are performed per
pass over the data ("tail-greediness"), which keeps the whole transform
at O(T log^2 T).

Merged regions carry a *pair* of smooth coefficients encoding the local
least-squares line; the pair is never split by later merges ("two
together" rule).  Three merge shapes exist: three single points, a single
point next to a paired region (either side), and two paired regions.  The
last one is executed as two chained sub-merges that share one region
boundary and emit two linked detail records.

All region positions (p, q, r / start, end) are 1-based; slot indices
into the working arrays are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import DegenerateWeights, SeriesTooShort
from .series import as_series

DEFAULT_RHO = 0.04
DEFAULT_ZERO_TOL = 1e-12


class MergeType(IntEnum):
    """Shape of a single recorded merge."""

    TYPE1 = 1         # three single points
    TYPE2_LEFT = 2    # single point followed by a paired region
    TYPE2_RIGHT = 3   # paired region followed by a single point
    TYPE3_FIRST = 4   # pair/pair merge, first sub-merge (also tags the candidate)
    TYPE3_SECOND = 5  # pair/pair merge, second sub-merge


@dataclass(frozen=True)
class TransformOptions:
    """Tuning knobs for the forward transform.

    ``rho`` bounds the fraction of smooth coefficients that may be merged
    away in a single pass; ``zero_tolerance`` is the magnitude (relative
    to max(1, local triplet size)) below which a computed detail is
    snapped to exactly 0.0.
    """

    rho: float = DEFAULT_RHO
    zero_tolerance: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.zero_tolerance < 0.0:
            raise ValueError("zero_tolerance must be >= 0")


@dataclass(frozen=True)
class ActiveUnit:
    """A contiguous region owning one (single point) or two (paired) slots."""

    start: int
    end: int
    slots: tuple[int, ...]
    paired: bool

    @property
    def kind(self) -> str:
        return "paired" if self.paired else "initial"


@dataclass(frozen=True)
class Candidate:
    """A legal merge of adjacent units, with its summary detail size.

    For a pair/pair candidate ``merge_type`` is ``TYPE3_FIRST`` and
    ``summary`` is the larger of the two sub-merge detail magnitudes.
    """

    cand_id: int
    merge_type: MergeType
    p: int
    q: int
    r: int
    slots: tuple[int, ...]
    summary: float


@dataclass(frozen=True)
class MergeRecord:
    """One recorded orthonormal merge (inspection view).

    ``lambda_matrix`` rows are the two low-pass filters followed by the
    detail filter; ``slots`` are the transformed working-array positions
    in increasing order, the last of which holds the frozen detail.
    """

    scale: int
    merge_type: MergeType
    region: tuple[int, int, int]
    slots: tuple[int, int, int]
    lambda_matrix: np.ndarray
    detail: float
    pair_id: Optional[int]


# ---------------------------------------------------------------------------
# filter construction


def _fix_signs(v: np.ndarray, tol: float) -> np.ndarray:
    """Flip rows of ``v`` so the first entry with magnitude > tol is positive."""
    lead = np.argmax(np.abs(v) > tol, axis=-1)
    lead_vals = np.take_along_axis(v, lead[..., None], axis=-1)
    sign = np.where(lead_vals < 0.0, -1.0, 1.0)
    return v * sign


def _detail_filters(wc3: np.ndarray, wl3: np.ndarray, tol: float) -> np.ndarray:
    """Unit vectors orthogonal to paired rows of ``wc3`` and ``wl3``.

    Inputs have shape (m, 3); the result row i is the normalized cross
    product wc3[i] x wl3[i] with the leading-entry sign convention.
    """
    h = np.cross(wc3, wl3)
    nrm = np.sqrt(np.einsum("ij,ij->i", h, h))
    floor = tol * np.linalg.norm(wc3, axis=-1) * np.linalg.norm(wl3, axis=-1)
    if np.any(nrm <= floor):
        raise DegenerateWeights("constancy and linearity weight triplets are parallel")
    h /= nrm[:, None]
    return _fix_signs(h, tol)


def _lowpass_rows(h: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Complete unit rows ``h`` (m, 3) to orthonormal 3x3 matrices.

    Deterministic: seed with the two coordinate axes least aligned with h
    (ties to the lower index), orthonormalize in index order, apply the
    leading-sign convention to each row.
    """
    m = h.shape[0]
    order = np.argsort(np.abs(h), axis=1, kind="stable")
    rows = np.arange(m)
    l1 = np.zeros((m, 3))
    l1[rows, order[:, 0]] = 1.0
    l1 -= np.einsum("ij,ij->i", l1, h)[:, None] * h
    l1 /= np.sqrt(np.einsum("ij,ij->i", l1, l1))[:, None]
    l1 = _fix_signs(l1, tol)
    l2 = np.zeros((m, 3))
    l2[rows, order[:, 1]] = 1.0
    l2 -= np.einsum("ij,ij->i", l2, h)[:, None] * h
    l2 -= np.einsum("ij,ij->i", l2, l1)[:, None] * l1
    l2 /= np.sqrt(np.einsum("ij,ij->i", l2, l2))[:, None]
    l2 = _fix_signs(l2, tol)
    return l1, l2


def _snapped_details(h: np.ndarray, s3: np.ndarray, tol: float) -> np.ndarray:
    """Contract filters with coefficient triplets, snapping fp residue to 0.

    Threshold is tol * max(1, triplet magnitude): large enough to absorb
    rounding error of the contraction, far below any meaningful contrast.
    """
    d = np.einsum("ij,ij->i", h, s3)
    local = np.maximum(1.0, np.abs(s3).max(axis=1))
    d[np.abs(d) <= tol * local] = 0.0
    return d


def compute_detail_filter(wc3, wl3, tol: float = DEFAULT_ZERO_TOL) -> np.ndarray:
    """Detail filter for one merge: unit 3-vector orthogonal to both weights.

    Raises DegenerateWeights when the two triplets are numerically
    parallel.
    """
    wc3 = np.asarray(wc3, dtype=np.float64).reshape(1, 3)
    wl3 = np.asarray(wl3, dtype=np.float64).reshape(1, 3)
    if not (np.all(np.isfinite(wc3)) and np.all(np.isfinite(wl3))):
        raise DegenerateWeights("weight triplets must be finite")
    return _detail_filters(wc3, wl3, tol)[0]


def complete_orthonormal(h, tol: float = DEFAULT_ZERO_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Two low-pass rows completing unit vector ``h`` to an orthonormal matrix."""
    h = np.asarray(h, dtype=np.float64).reshape(1, 3)
    l1, l2 = _lowpass_rows(h, tol)
    return l1[0], l2[0]


# ---------------------------------------------------------------------------
# working state


class TransformState:
    """Mutable state of the forward pass.

    ``s`` (working coefficients), ``wc`` (constancy weights, initially all
    ones) and ``wl`` (linearity weights, initially 1..T) all have length
    T.  Positions merged away hold a frozen detail in ``s`` and exact
    zeros in ``wc``/``wl``.  Active regions are tracked as contiguous
    units in left-to-right order.
    """

    __slots__ = ("s", "wc", "wl", "u_start", "u_end", "u_slot1", "u_slot2",
                 "u_paired", "options")

    def __init__(self, x, options: TransformOptions | None = None):
        x = as_series(x, min_length=1)
        n = x.size
        self.options = options if options is not None else TransformOptions()
        self.s = x.copy()
        self.wc = np.ones(n)
        self.wl = np.arange(1, n + 1, dtype=np.float64)
        self.u_start = np.arange(1, n + 1, dtype=np.int64)
        self.u_end = np.arange(1, n + 1, dtype=np.int64)
        self.u_slot1 = np.arange(n, dtype=np.int64)
        self.u_slot2 = np.full(n, -1, dtype=np.int64)
        self.u_paired = np.zeros(n, dtype=bool)

    @property
    def n_units(self) -> int:
        return self.u_start.size

    def smooth_count(self) -> int:
        """Number of live smooth coefficients (1 per point, 2 per pair)."""
        return self.u_start.size + int(np.count_nonzero(self.u_paired))

    @property
    def units(self) -> list[ActiveUnit]:
        out = []
        for i in range(self.u_start.size):
            if self.u_paired[i]:
                slots = (int(self.u_slot1[i]), int(self.u_slot2[i]))
            else:
                slots = (int(self.u_slot1[i]),)
            out.append(ActiveUnit(int(self.u_start[i]), int(self.u_end[i]),
                                  slots, bool(self.u_paired[i])))
        return out


class _CandidateArrays:
    """Columnar view of all current merge candidates."""

    __slots__ = ("ctype", "left", "span", "sl", "p", "q", "r", "summary")

    def __init__(self, ctype, left, span, sl, p, q, r):
        self.ctype = ctype
        self.left = left
        self.span = span
        self.sl = sl
        self.p = p
        self.q = q
        self.r = r
        self.summary: np.ndarray | None = None

    def __len__(self) -> int:
        return self.ctype.size


def _enumerate_candidates(state: TransformState) -> _CandidateArrays:
    """All merges of adjacent units legal under the "two together" rule.

    Each unit is the left end of at most one candidate: three adjacent
    single points, point+pair, pair+point, or pair+pair.
    """
    nu = state.n_units
    paired = state.u_paired
    ctype = np.zeros(max(nu - 1, 0), dtype=np.int8)
    if nu >= 2:
        la = paired[:-1]
        ra = paired[1:]
        ctype[~la & ra] = int(MergeType.TYPE2_LEFT)
        ctype[la & ~ra] = int(MergeType.TYPE2_RIGHT)
        ctype[la & ra] = int(MergeType.TYPE3_FIRST)
    if nu >= 3:
        t1 = ~paired[:-2] & ~paired[1:-1] & ~paired[2:]
        ctype[: nu - 2][t1] = int(MergeType.TYPE1)
    idx = np.flatnonzero(ctype)
    m = idx.size
    ct = ctype[idx]
    sl = np.full((m, 4), -1, dtype=np.int64)
    p = state.u_start[idx]
    q = np.empty(m, dtype=np.int64)
    r = np.empty(m, dtype=np.int64)
    span = np.where(ct == int(MergeType.TYPE1), 3, 2).astype(np.int64)

    sl[:, 0] = state.u_slot1[idx]
    is_t1 = ct == int(MergeType.TYPE1)
    is_t2l = ct == int(MergeType.TYPE2_LEFT)
    is_t2r = ct == int(MergeType.TYPE2_RIGHT)
    is_t3 = ct == int(MergeType.TYPE3_FIRST)

    sl[is_t1, 1] = state.u_slot1[idx[is_t1] + 1]
    sl[is_t1, 2] = state.u_slot1[idx[is_t1] + 2]
    sl[is_t2l, 1] = state.u_slot1[idx[is_t2l] + 1]
    sl[is_t2l, 2] = state.u_slot2[idx[is_t2l] + 1]
    sl[is_t2r, 1] = state.u_slot2[idx[is_t2r]]
    sl[is_t2r, 2] = state.u_slot1[idx[is_t2r] + 1]
    sl[is_t3, 1] = state.u_slot2[idx[is_t3]]
    sl[is_t3, 2] = state.u_slot1[idx[is_t3] + 1]
    sl[is_t3, 3] = state.u_slot2[idx[is_t3] + 1]

    r[:] = state.u_end[idx + 1]
    r[is_t1] = state.u_end[idx[is_t1] + 2]
    q[:] = state.u_end[idx]          # point+pair: q = p; pair+*: q = boundary
    q[is_t1] = state.u_start[idx[is_t1] + 1]

    return _CandidateArrays(ct, idx, span, sl, p, q, r)


def _candidate_summaries(state: TransformState, cand: _CandidateArrays) -> np.ndarray:
    """Summary |detail| per candidate; pair/pair looks one sub-merge ahead.

    The look-ahead is computed on scratch values so rejected candidates
    leave no trace in the state.
    """
    tol = state.options.zero_tolerance
    tri = cand.sl[:, :3]
    wc3 = state.wc[tri]
    wl3 = state.wl[tri]
    s3 = state.s[tri]
    h1 = _detail_filters(wc3, wl3, tol)
    d1 = _snapped_details(h1, s3, tol)
    summary = np.abs(d1)
    m3 = cand.ctype == int(MergeType.TYPE3_FIRST)
    if np.any(m3):
        l1, l2 = _lowpass_rows(h1[m3], tol)
        s3m, wc3m, wl3m = s3[m3], wc3[m3], wl3[m3]
        third = cand.sl[m3, 3]
        s3b = np.stack([np.einsum("ij,ij->i", l1, s3m),
                        np.einsum("ij,ij->i", l2, s3m),
                        state.s[third]], axis=1)
        wc3b = np.stack([np.einsum("ij,ij->i", l1, wc3m),
                         np.einsum("ij,ij->i", l2, wc3m),
                         state.wc[third]], axis=1)
        wl3b = np.stack([np.einsum("ij,ij->i", l1, wl3m),
                         np.einsum("ij,ij->i", l2, wl3m),
                         state.wl[third]], axis=1)
        h2 = _detail_filters(wc3b, wl3b, tol)
        d2 = _snapped_details(h2, s3b, tol)
        summary[m3] = np.maximum(summary[m3], np.abs(d2))
    cand.summary = summary
    return summary


def merge_budget(rho: float, alpha: int) -> int:
    """Per-pass detail allowance: max(2, ceil(rho * alpha)).

    The lower bound of 2 is what makes a pair/pair merge (two details)
    possible at all.
    """
    return max(2, math.ceil(rho * alpha))


def _select_candidates(cand: _CandidateArrays, rho: float, alpha: int) -> list[int]:
    """Greedy non-overlapping selection in (summary, p, r) order.

    The budget counts emitted detail coefficients, so a pair/pair
    candidate costs two; candidates that overlap an earlier selection or
    do not fit in the remaining budget are skipped and the scan goes on.
    """
    m = len(cand)
    if m == 0:
        return []
    order = np.lexsort((cand.r, cand.p, cand.summary)).tolist()
    budget = merge_budget(rho, alpha)
    claimed = bytearray(int(cand.left.max()) + 3 + 1)
    left = cand.left.tolist()
    span = cand.span.tolist()
    t3 = int(MergeType.TYPE3_FIRST)
    cost = [2 if c == t3 else 1 for c in cand.ctype.tolist()]
    chosen: list[int] = []
    used = 0
    for ci in order:
        i0 = left[ci]
        k = span[ci]
        if claimed[i0] or claimed[i0 + 1] or (k == 3 and claimed[i0 + 2]):
            continue
        if used + cost[ci] > budget:
            continue
        for u in range(i0, i0 + k):
            claimed[u] = 1
        chosen.append(ci)
        used += cost[ci]
        if used >= budget:
            break
    return chosen


class _RecordStore:
    """Preallocated columnar storage for merge records."""

    def __init__(self, capacity: int):
        self.scales = np.zeros(capacity, dtype=np.int32)
        self.merge_types = np.zeros(capacity, dtype=np.int8)
        self.regions = np.zeros((capacity, 3), dtype=np.int64)
        self.slots = np.zeros((capacity, 3), dtype=np.int64)
        self.matrices = np.zeros((capacity, 3, 3))
        self.details = np.zeros(capacity)
        self.pair_ids = np.full(capacity, -1, dtype=np.int64)
        self.cursor = 0


def _merge_step(state: TransformState, tri: np.ndarray, pos: np.ndarray,
                rec_type: np.ndarray, regions: np.ndarray, pair: np.ndarray,
                scale: int, store: _RecordStore) -> None:
    """Apply one batch of disjoint triplet merges and record them.

    ``tri`` (k, 3) holds slot triplets in increasing order; the first two
    slots receive the updated smooth pair, the third freezes the detail.
    The transformed weight entries at the detail slot are set to exact 0.
    """
    tol = state.options.zero_tolerance
    wc3 = state.wc[tri]
    wl3 = state.wl[tri]
    s3 = state.s[tri]
    h = _detail_filters(wc3, wl3, tol)
    l1, l2 = _lowpass_rows(h, tol)
    d = _snapped_details(h, s3, tol)

    c0, c1, c2 = tri[:, 0], tri[:, 1], tri[:, 2]
    state.s[c0] = np.einsum("ij,ij->i", l1, s3)
    state.s[c1] = np.einsum("ij,ij->i", l2, s3)
    state.s[c2] = d
    state.wc[c0] = np.einsum("ij,ij->i", l1, wc3)
    state.wc[c1] = np.einsum("ij,ij->i", l2, wc3)
    state.wc[c2] = 0.0
    state.wl[c0] = np.einsum("ij,ij->i", l1, wl3)
    state.wl[c1] = np.einsum("ij,ij->i", l2, wl3)
    state.wl[c2] = 0.0

    store.scales[pos] = scale
    store.merge_types[pos] = rec_type
    store.regions[pos] = regions
    store.slots[pos] = tri
    store.matrices[pos] = np.stack([l1, l2, h], axis=1)
    store.details[pos] = d
    store.pair_ids[pos] = pair


def _apply_candidates(state: TransformState, cand: _CandidateArrays,
                      chosen: Sequence[int], scale: int,
                      store: _RecordStore) -> None:
    """Apply the chosen (disjoint) candidates; update units and records.

    Records land in selection order; the two records of a pair/pair merge
    are adjacent, first sub-merge first, and share a pair id equal to the
    chronological index of the first one.
    """
    if not chosen:
        return
    sel = np.asarray(chosen, dtype=np.int64)
    ct = cand.ctype[sel]
    is_t3 = ct == int(MergeType.TYPE3_FIRST)
    nrec = np.where(is_t3, 2, 1)
    pos = store.cursor + np.concatenate(([0], np.cumsum(nrec[:-1])))
    total = int(nrec.sum())

    single = sel[~is_t3]
    if single.size:
        regions = np.stack([cand.p[single], cand.q[single], cand.r[single]], axis=1)
        _merge_step(state, cand.sl[single, :3], pos[~is_t3], ct[~is_t3],
                    regions, np.full(single.size, -1, dtype=np.int64), scale, store)

    pairs = sel[is_t3]
    if pairs.size:
        pos3 = pos[is_t3]
        regions = np.stack([cand.p[pairs], cand.q[pairs], cand.r[pairs]], axis=1)
        first_type = np.full(pairs.size, int(MergeType.TYPE3_FIRST), dtype=np.int8)
        _merge_step(state, cand.sl[pairs, :3], pos3, first_type,
                    regions, pos3, scale, store)
        tri2 = np.stack([cand.sl[pairs, 0], cand.sl[pairs, 1], cand.sl[pairs, 3]], axis=1)
        second_type = np.full(pairs.size, int(MergeType.TYPE3_SECOND), dtype=np.int8)
        _merge_step(state, tri2, pos3 + 1, second_type, regions, pos3, scale, store)

    store.cursor += total

    # collapse each merged window into one paired unit sitting at the left slot
    i0 = cand.left[sel]
    state.u_end[i0] = cand.r[sel]
    state.u_paired[i0] = True
    state.u_slot1[i0] = cand.sl[sel, 0]
    state.u_slot2[i0] = cand.sl[sel, 1]
    keep = np.ones(state.n_units, dtype=bool)
    keep[i0 + 1] = False
    t1 = cand.span[sel] == 3
    keep[i0[t1] + 2] = False
    state.u_start = state.u_start[keep]
    state.u_end = state.u_end[keep]
    state.u_slot1 = state.u_slot1[keep]
    state.u_slot2 = state.u_slot2[keep]
    state.u_paired = state.u_paired[keep]


# ---------------------------------------------------------------------------
# public candidate-level API


def candidate_details(state: TransformState) -> list[Candidate]:
    """Enumerate current legal merges with their summary detail sizes."""
    cand = _enumerate_candidates(state)
    summary = _candidate_summaries(state, cand)
    out = []
    for i in range(len(cand)):
        ns = 4 if cand.ctype[i] == int(MergeType.TYPE3_FIRST) else 3
        out.append(Candidate(
            cand_id=i,
            merge_type=MergeType(int(cand.ctype[i])),
            p=int(cand.p[i]), q=int(cand.q[i]), r=int(cand.r[i]),
            slots=tuple(int(v) for v in cand.sl[i, :ns]),
            summary=float(summary[i]),
        ))
    return out


def extract_merge_set(candidates: Sequence[Candidate], rho: float,
                      alpha_j: int) -> list[int]:
    """Candidate ids filling a budget of max(2, ceil(rho*alpha_j)) details.

    Scanned in non-decreasing summary order with ties broken by smaller
    p, then smaller r; a candidate is skipped when its data region [p, r]
    overlaps one already selected or when its detail count (two for a
    pair/pair merge, one otherwise) exceeds the remaining budget.
    """
    if not candidates:
        return []
    order = sorted(range(len(candidates)),
                   key=lambda i: (candidates[i].summary, candidates[i].p,
                                  candidates[i].r))
    budget = merge_budget(rho, alpha_j)
    taken: list[tuple[int, int]] = []
    chosen: list[int] = []
    used = 0
    for i in order:
        c = candidates[i]
        cost = 2 if c.merge_type == MergeType.TYPE3_FIRST else 1
        if used + cost > budget:
            continue
        if any(c.p <= hi and lo <= c.r for lo, hi in taken):
            continue
        taken.append((c.p, c.r))
        chosen.append(c.cand_id)
        used += cost
        if used >= budget:
            break
    return chosen


def apply_merge(state: TransformState, candidate: Candidate,
                scale: int = 1, pair_id_base: int = 0) -> list[MergeRecord]:
    """Apply one candidate to ``state``; return its record(s).

    A pair/pair candidate emits two chained records computed with the
    instantly-updated weights, sharing a pair id.
    """
    cand = _enumerate_candidates(state)
    cid = None
    for i in range(len(cand)):
        if (int(cand.p[i]), int(cand.q[i]), int(cand.r[i])) == (candidate.p, candidate.q, candidate.r):
            cid = i
            break
    if cid is None:
        raise ValueError(f"candidate {candidate} is not legal for the current units")
    store = _RecordStore(2)
    store.cursor = 0
    _apply_candidates(state, cand, [cid], scale, store)
    recs = []
    for i in range(store.cursor):
        pid = int(store.pair_ids[i])
        recs.append(MergeRecord(
            scale=int(store.scales[i]),
            merge_type=MergeType(int(store.merge_types[i])),
            region=tuple(int(v) for v in store.regions[i]),
            slots=tuple(int(v) for v in store.slots[i]),
            lambda_matrix=store.matrices[i].copy(),
            detail=float(store.details[i]),
            pair_id=(pid + pair_id_base) if pid >= 0 else None,
        ))
    return recs


# ---------------------------------------------------------------------------
# decomposition container and forward driver


class Decomposition:
    """Complete record of the forward transform; sufficient to invert.

    Holds the T-2 merge records in chronological order (columnar arrays)
    plus the two terminal smooth coefficients and the slots they occupy.
    """

    def __init__(self, length: int, options: TransformOptions,
                 store: _RecordStore, smooth_slots: tuple[int, int],
                 smooth1: float, smooth2: float, n_scales: int):
        if store.cursor != length - 2:
            raise AssertionError("decomposition must hold exactly T-2 records")
        self.length = length
        self.options = options
        self.scales = store.scales
        self.merge_types = store.merge_types
        self.regions = store.regions
        self.slots = store.slots
        self.matrices = store.matrices
        self.details = store.details
        self.pair_ids = store.pair_ids
        self.smooth_slots = smooth_slots
        self.smooth1 = smooth1
        self.smooth2 = smooth2
        self.n_scales = n_scales

    @property
    def n_records(self) -> int:
        return self.details.size

    def __len__(self) -> int:
        return self.n_records

    def record(self, i: int) -> MergeRecord:
        pid = int(self.pair_ids[i])
        return MergeRecord(
            scale=int(self.scales[i]),
            merge_type=MergeType(int(self.merge_types[i])),
            region=tuple(int(v) for v in self.regions[i]),
            slots=tuple(int(v) for v in self.slots[i]),
            lambda_matrix=self.matrices[i].copy(),
            detail=float(self.details[i]),
            pair_id=pid if pid >= 0 else None,
        )

    def records(self) -> Iterator[MergeRecord]:
        for i in range(self.n_records):
            yield self.record(i)

    def coefficient_energy(self) -> float:
        """Sum of squared details plus squared terminal smooths."""
        return float(np.dot(self.details, self.details)
                     + self.smooth1 ** 2 + self.smooth2 ** 2)


def tguw_forward(x, options: TransformOptions | None = None) -> Decomposition:
    """Run the full forward transform on ``x`` (length T >= 3).

    Passes over the data at increasing scales, each time enumerating the
    legal merges, ranking them by summary detail size and applying up to
    the tail-greedy budget of non-overlapping smallest ones, until only
    two smooth coefficients remain.  Deterministic for fixed input and
    options.
    """
    opts = options if options is not None else TransformOptions()
    x = as_series(x, min_length=1)
    if x.size < 3:
        raise SeriesTooShort(f"transform needs T >= 3, got T = {x.size}")
    state = TransformState(x, opts)
    store = _RecordStore(x.size - 2)
    scale = 0
    while state.smooth_count() >= 3:
        scale += 1
        cand = _enumerate_candidates(state)
        _candidate_summaries(state, cand)
        chosen = _select_candidates(cand, opts.rho, state.smooth_count())
        _apply_candidates(state, cand, chosen, scale, store)
    slot1 = int(state.u_slot1[0])
    slot2 = int(state.u_slot2[0])
    return Decomposition(x.size, opts, store, (slot1, slot2),
                         float(state.s[slot1]), float(state.s[slot2]), scale)
