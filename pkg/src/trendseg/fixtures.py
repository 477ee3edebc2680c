"""Built-in signal families for the simulation lab and the CLI.

Each builder returns a SignalSpec for a requested length; knots scale
proportionally with the length.  The shapes are in-house re-creations of
the usual benchmark flavours (continuous wave, discontinuous wave,
constant/linear mixes with or without point anomalies, short segments,
isolated spikes, piecewise-constant teeth, plain line); the exact knots,
slopes and jump sizes are repository constants and nothing more.
"""

from __future__ import annotations

from .simlab import SignalSpec

FAMILIES = ("wave1", "wave2", "mix1", "mix2", "mix3", "lin_sgmts", "teeth", "lin")

CANONICAL_LENGTH = {
    "wave1": 1280,
    "wave2": 1280,
    "mix1": 1536,
    "mix2": 1536,
    "mix3": 1408,
    "lin_sgmts": 1280,
    "teeth": 512,
    "lin": 1000,
}


def _even_breaks(length: int, n_segments: int) -> list[int]:
    step = length / n_segments
    return [int(round(step * k)) for k in range(1, n_segments)]


def _chain_intercepts(breaks: list[int], slopes: list[float], start_value: float,
                      jumps: list[float]) -> list[float]:
    """Intercepts anchoring segment k halfway past its left knot.

    The line of segment k, extended back to eta + 0.5 (eta = breaks[k-1]),
    passes ``jumps[k-1]`` above the left segment's line there.  A zero
    jump gives a continuous kink whose corner falls between samples, so
    no sample lies on both lines and the segmentation is unambiguous.
    """
    intercepts = [start_value - slopes[0] * 1.0]
    bounds = [0] + breaks
    for k in range(1, len(slopes)):
        anchor = bounds[k] + 0.5
        left_value = intercepts[k - 1] + slopes[k - 1] * anchor
        intercepts.append(left_value + jumps[k - 1] - slopes[k] * anchor)
    return intercepts


def wave1(length: int) -> SignalSpec:
    """Continuous zig-zag: slopes alternate sign, no jumps."""
    breaks = _even_breaks(length, 8)
    seg = length / 8
    amp = 8.0
    slopes = [amp / seg if k % 2 == 0 else -amp / seg for k in range(8)]
    intercepts = _chain_intercepts(breaks, slopes, 0.0, [0.0] * 7)
    return SignalSpec("wave1", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def wave2(length: int) -> SignalSpec:
    """Discontinuous sawtooth: constant up-slope, a down-jump at every knot."""
    breaks = _even_breaks(length, 8)
    seg = length / 8
    slope = 8.0 / seg
    slopes = [slope] * 8
    intercepts = _chain_intercepts(breaks, slopes, 0.0, [-8.0] * 7)
    return SignalSpec("wave2", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def _mix_base(length: int) -> tuple[list[int], list[float], list[float]]:
    # flat, rise, flat, flat (down-jump), fall, flat (up-jump)
    fractions = (0.18, 0.34, 0.55, 0.72, 0.87)
    breaks = [int(round(length * f)) for f in fractions]
    rise_len = breaks[1] - breaks[0]
    fall_len = breaks[4] - breaks[3]
    slopes = [0.0, 7.0 / rise_len, 0.0, 0.0, -6.0 / fall_len, 0.0]
    jumps = [0.0, 0.0, -4.0, 0.0, 5.0]
    intercepts = _chain_intercepts(breaks, slopes, 0.0, jumps)
    return breaks, intercepts, slopes


def mix1(length: int) -> SignalSpec:
    """Mix of constant and linear segments, continuous and jump changes."""
    breaks, intercepts, slopes = _mix_base(length)
    return SignalSpec("mix1", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def mix2(length: int) -> SignalSpec:
    """The mix1 shape plus two point anomalies."""
    breaks, intercepts, slopes = _mix_base(length)
    anomalies = ((int(round(length * 0.45)), 10.0),
                 (int(round(length * 0.80)), -9.0))
    return SignalSpec("mix2", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes), anomalies)


def mix3(length: int) -> SignalSpec:
    """Constant/linear mix with two particularly short segments."""
    short = max(6, length // 110)
    b1 = int(round(length * 0.25))
    b3 = int(round(length * 0.60))
    breaks = [b1, b1 + short, b3, b3 + 2 * short]
    rise_len = breaks[2] - breaks[1]
    slopes = [0.0, 0.0, 9.0 / rise_len, 0.0, 0.0]
    jumps = [6.0, -6.0, 5.0, -14.0]
    intercepts = _chain_intercepts(breaks, slopes, 0.0, jumps)
    return SignalSpec("mix3", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def lin_sgmts(length: int) -> SignalSpec:
    """Flat baseline with three isolated short high plateaus."""
    width = max(5, length // 180)
    starts = [int(round(length * f)) for f in (0.22, 0.52, 0.80)]
    breaks: list[int] = []
    jumps: list[float] = []
    for s in starts:
        breaks.extend([s, s + width])
        jumps.extend([7.0, -7.0])
    slopes = [0.0] * (len(breaks) + 1)
    intercepts = _chain_intercepts(breaks, slopes, 0.0, jumps)
    return SignalSpec("lin_sgmts", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def teeth(length: int) -> SignalSpec:
    """Piecewise-constant alternation between two levels."""
    n_seg = 8
    breaks = _even_breaks(length, n_seg)
    slopes = [0.0] * n_seg
    jumps = [3.0 if k % 2 == 0 else -3.0 for k in range(n_seg - 1)]
    intercepts = _chain_intercepts(breaks, slopes, 0.0, jumps)
    return SignalSpec("teeth", length, tuple(breaks), tuple(intercepts),
                      tuple(slopes))


def lin(length: int) -> SignalSpec:
    """One line, no change-points."""
    return SignalSpec("lin", length, (), (1.0 - 4.0 / length,), (4.0 / length,))


_BUILDERS = {
    "wave1": wave1,
    "wave2": wave2,
    "mix1": mix1,
    "mix2": mix2,
    "mix3": mix3,
    "lin_sgmts": lin_sgmts,
    "teeth": teeth,
    "lin": lin,
}


def default_signal(family: str, length: int | None = None) -> SignalSpec:
    """The built-in spec for a family, at its canonical or a custom length."""
    if family not in _BUILDERS:
        raise KeyError(f"unknown signal family {family!r}; choose from {FAMILIES}")
    if length is None:
        length = CANONICAL_LENGTH[family]
    if length < 16:
        raise ValueError(f"family {family!r} needs length >= 16, got {length}")
    return _BUILDERS[family](length)
