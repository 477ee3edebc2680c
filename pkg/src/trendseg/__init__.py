"""Detection of linear trend changes and point anomalies in 1-D series.

The pipeline decomposes the data bottom-up into an adaptive unbalanced
wavelet representation, thresholds the detail coefficients, inverts, and
optionally post-processes, yielding change-point locations (1-based,
last index of each segment) and per-segment least-squares fits.
"""

from .errors import (CapExceeded, DegenerateWeights, IndexOutOfRange,
                     InvalidSpec, LengthMismatch, MaskLengthMismatch,
                     NonFiniteInput, SeriesTooShort, TrendsegError)
from .pipeline import DetectionOptions, DetectionResult, trendsegment
from .postprocess import (SegmentFit, evaluate_segments, local_detail,
                          ols_segment_fit, segments_from_changepoints,
                          stage1, stage2)
from .reconstruct import (cross_check_changepoints, extract_changepoints,
                          materialize_basis, second_difference_kinks,
                          tguw_inverse)
from .shrink import (ThresholdSpec, apply_connected_rule,
                     apply_two_together_rule, mad_sigma, threshold_mask,
                     threshold_value)
from .simlab import (NoiseSpec, SignalSpec, SimulationReport, generate_noise,
                     generate_signal, hausdorff, mse, run_simulation)
from .tguw import (ActiveUnit, Candidate, Decomposition, MergeRecord,
                   MergeType, TransformOptions, TransformState, apply_merge,
                   candidate_details, complete_orthonormal,
                   compute_detail_filter, extract_merge_set, tguw_forward)

__version__ = "0.1.0"

__all__ = [
    "ActiveUnit", "Candidate", "CapExceeded", "Decomposition",
    "DegenerateWeights", "DetectionOptions", "DetectionResult",
    "IndexOutOfRange", "InvalidSpec", "LengthMismatch", "MaskLengthMismatch",
    "MergeRecord", "MergeType", "NoiseSpec", "NonFiniteInput", "SegmentFit",
    "SeriesTooShort", "SignalSpec", "SimulationReport", "ThresholdSpec",
    "TransformOptions", "TransformState", "TrendsegError", "apply_connected_rule",
    "apply_merge", "apply_two_together_rule", "candidate_details",
    "complete_orthonormal", "compute_detail_filter", "cross_check_changepoints",
    "evaluate_segments", "extract_changepoints", "extract_merge_set",
    "generate_noise", "generate_signal", "hausdorff", "local_detail",
    "mad_sigma", "materialize_basis", "mse", "ols_segment_fit",
    "run_simulation", "second_difference_kinks", "segments_from_changepoints",
    "stage1", "stage2", "tguw_forward", "tguw_inverse", "threshold_mask",
    "threshold_value", "trendsegment",
]
