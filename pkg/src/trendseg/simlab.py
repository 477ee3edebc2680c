"""Signal generators, noise generators, metrics and the Monte-Carlo loop."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidSpec, LengthMismatch
from .pipeline import DetectionOptions, trendsegment
from .series import as_series

NOISE_KINDS = ("gauss_iid", "ar1", "t5_scaled", "laplace")

BIN_LABELS = ("<=-3", "-2", "-1", "0", "1", "2", ">=3")

_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def splitmix64(base: int, index: int) -> int:
    """Deterministic 64-bit seed for stream ``index`` of stream family ``base``."""
    z = (base + (index + 1) * _SPLITMIX_GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SignalSpec:
    """A piecewise-linear signal with optional point anomalies.

    Segment ``k`` covers t in [breakpoints[k-1]+1, breakpoints[k]]
    (1-based, with implicit outer bounds 0 and T) and takes the value
    intercepts[k] + slopes[k] * t.  Anomalies are (position, offset)
    pairs added on top; each creates two adjacent change-points.
    """

    family: str
    length: int
    breakpoints: tuple[int, ...]
    intercepts: tuple[float, ...]
    slopes: tuple[float, ...]
    anomalies: tuple[tuple[int, float], ...] = ()


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "gauss_iid"
    sigma: float = 1.0
    phi: float = 0.3
    seed: int = 0


def generate_signal(spec: SignalSpec) -> tuple[np.ndarray, list[int]]:
    """Materialize the signal and its declared change-points.

    Every declared change-point is checked against the defining
    condition: continuing the left segment's line one step must not
    reproduce the next value (single-point segments count as slope 0).
    """
    t_len = spec.length
    bps = list(spec.breakpoints)
    if any(not 1 <= b <= t_len - 1 for b in bps) or sorted(set(bps)) != bps:
        raise InvalidSpec("breakpoints must be strictly increasing within 1..T-1")
    if len(spec.intercepts) != len(bps) + 1 or len(spec.slopes) != len(bps) + 1:
        raise InvalidSpec("need one (intercept, slope) pair per segment")
    f = np.empty(t_len)
    bounds = [0] + bps + [t_len]
    for k in range(len(bounds) - 1):
        lo, hi = bounds[k], bounds[k + 1]
        tt = np.arange(lo + 1, hi + 1, dtype=np.float64)
        f[lo:hi] = spec.intercepts[k] + spec.slopes[k] * tt

    cps = set(bps)
    for pos, offset in spec.anomalies:
        if not 2 <= pos <= t_len - 1:
            raise InvalidSpec(f"anomaly position {pos} must lie in 2..T-1")
        f[pos - 1] += offset
        cps.add(pos - 1)
        cps.add(pos)
    true_cps = sorted(cps)

    scale = max(1.0, float(np.abs(f).max()))
    tol = 1e-9 * scale
    all_bounds = [0] + true_cps + [t_len]
    for i, eta in enumerate(true_cps, start=1):
        lo = all_bounds[i - 1]
        slope = f[eta - 1] - f[eta - 2] if eta - lo >= 2 else 0.0
        if abs(f[eta - 1] + slope - f[eta]) <= tol:
            raise InvalidSpec(
                f"declared change-point {eta} does not change the trend")
    return f, true_cps


def generate_noise(spec: NoiseSpec, length: int) -> np.ndarray:
    """Seed-reproducible noise with unit marginal variance, scaled by sigma."""
    if spec.kind not in NOISE_KINDS:
        raise ValueError(f"unknown noise kind {spec.kind!r}")
    if spec.sigma == 0.0:
        return np.zeros(length)
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "gauss_iid":
        eps = rng.standard_normal(length)
    elif spec.kind == "ar1":
        phi = spec.phi
        if not -1.0 < phi < 1.0:
            raise ValueError("ar1 needs |phi| < 1")
        innov = rng.standard_normal(length) * math.sqrt(1.0 - phi * phi)
        eps = np.empty(length)
        prev = rng.standard_normal()  # stationary start, unit variance
        for i in range(length):
            prev = phi * prev + innov[i]
            eps[i] = prev
    elif spec.kind == "t5_scaled":
        eps = rng.standard_t(5, size=length) * math.sqrt(3.0 / 5.0)
    else:  # laplace with unit variance
        eps = rng.laplace(0.0, 1.0 / math.sqrt(2.0), size=length)
    return eps * spec.sigma


def hausdorff(true_cps, est_cps, length: int) -> float:
    """Scaled two-sided nearest-neighbour distance between location sets.

    Both sets are augmented with the endpoints 0 and T before taking the
    larger of the two directed max-min distances, divided by T.
    """
    a = np.unique(np.concatenate([[0], np.asarray(true_cps, dtype=np.int64),
                                  [length]]))
    b = np.unique(np.concatenate([[0], np.asarray(est_cps, dtype=np.int64),
                                  [length]]))
    dist = np.abs(a[:, None] - b[None, :])
    d_ab = dist.min(axis=1).max()
    d_ba = dist.min(axis=0).max()
    return float(max(d_ab, d_ba)) / length


def mse(f, f_hat) -> float:
    f = as_series(f)
    f_hat = as_series(f_hat)
    if f.size != f_hat.size:
        raise LengthMismatch(f"length {f.size} vs {f_hat.size}")
    diff = f - f_hat
    return float(np.dot(diff, diff) / f.size)


@dataclass
class SimulationReport:
    """Aggregate of one Monte-Carlo experiment."""

    model: str
    length: int
    noise: str
    sigma: float
    runs: int
    seed: int
    true_n: int
    bins: list[int]               # counts of (n_hat - true_n) per BIN_LABELS
    mean_mse: float
    mean_hausdorff: float
    mean_time_ms: float

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "model": self.model,
            "length": self.length,
            "noise": self.noise,
            "sigma": self.sigma,
            "runs": self.runs,
            "seed": self.seed,
            "true_n": self.true_n,
            "bins": {label: count for label, count in zip(BIN_LABELS, self.bins)},
            "mean_mse": self.mean_mse,
            "mean_hausdorff": self.mean_hausdorff,
        }
        if include_timing:
            out["mean_time_ms"] = self.mean_time_ms
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)

    def to_table(self, include_timing: bool = False) -> str:
        headers = ["model"] + list(BIN_LABELS) + ["MSE", "dH(x100)"]
        row = ([self.model] + [str(c) for c in self.bins]
               + [f"{self.mean_mse:.3f}", f"{self.mean_hausdorff * 100:.2f}"])
        if include_timing:
            headers.append("time(s)")
            row.append(f"{self.mean_time_ms / 1e3:.2f}")
        widths = [max(len(h), len(v)) for h, v in zip(headers, row)]
        fmt = "  ".join(f"{{:>{w}}}" for w in widths)
        return fmt.format(*headers) + "\n" + fmt.format(*row)


def _one_run(args) -> tuple[int, float, float, float, list[int]]:
    f, true_cps, noise, options, run_index = args
    eps = generate_noise(replace(noise, seed=splitmix64(noise.seed, run_index)),
                         f.size)
    t0 = time.perf_counter()
    res = trendsegment(f + eps, options)
    elapsed = (time.perf_counter() - t0) * 1e3
    return (res.n_hat, mse(f, res.fitted),
            hausdorff(true_cps, res.changepoints, f.size), elapsed,
            res.changepoints)


def run_simulation(signal: SignalSpec, noise: NoiseSpec, runs: int,
                   options: DetectionOptions | None = None,
                   threads: int = 1) -> SimulationReport:
    """Detect on ``runs`` independent noisy copies of the signal.

    Run i draws its noise from a stream seeded with splitmix64(seed, i),
    so reports are reproducible and independent of worker scheduling.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    options = options if options is not None else DetectionOptions()
    f, true_cps = generate_signal(signal)
    jobs = [(f, true_cps, noise, options, i) for i in range(runs)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_one_run, jobs, chunksize=max(1, runs // (4 * threads))))
    else:
        results = [_one_run(job) for job in jobs]

    true_n = len(true_cps)
    bins = [0] * len(BIN_LABELS)
    sum_mse = sum_dh = sum_ms = 0.0
    for n_hat, run_mse, run_dh, run_ms, _ in results:
        delta = max(-3, min(3, n_hat - true_n))
        bins[delta + 3] += 1
        sum_mse += run_mse
        sum_dh += run_dh
        sum_ms += run_ms
    return SimulationReport(
        model=signal.family, length=signal.length, noise=noise.kind,
        sigma=noise.sigma, runs=runs, seed=noise.seed, true_n=true_n,
        bins=bins, mean_mse=sum_mse / runs, mean_hausdorff=sum_dh / runs,
        mean_time_ms=sum_ms / runs,
    )
