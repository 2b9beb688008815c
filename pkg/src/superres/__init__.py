"""Super-resolving two-source interferometry: states, measurements, inference.

The package models the detection and separation estimation of a faint
secondary point source next to a bright primary with a two-collector
interferometer, tracks how much information the binary fringe measurement
retains compared to the quantum limit and to direct imaging, and provides
deterministic photon-level simulation plus the estimation and hypothesis
testing machinery to analyze the recorded clicks.
"""

from .errors import (ConfigError, FlatPosteriorError, GridError, NumericsError,
                     ParaxialError, SupportError)
from .inference import (CountPosterior, EstimateRecord, FourierPosterior,
                        TestReport, calibrate_threshold, estimate_theta,
                        llr_test, log_likelihood_ratio, map_phase, mse,
                        posterior_from_counts, posterior_init,
                        posterior_update, run_discrimination,
                        run_estimation_trial, stein_prediction,
                        type1_error_mc, type2_error_mc)
from .measurement import (Interferometer, OutcomeDist, PsfModel,
                          classical_fisher_info, classical_relative_entropy,
                          classical_relative_entropy_variance,
                          cre_of_measurement, di_fisher_info,
                          di_relative_entropy, fringe_probs, hypothesis_probs,
                          maximize_cre, outcome_probs)
from .quantum import (DensityMatrix2, PureState2, hypothesis_states,
                      qfi_closed_form, qfi_separation, qre_exact,
                      qre_small_angle, relative_entropy,
                      relative_entropy_variance, source_states)
from .scene import (Baseline, PhasePair, Scene, angular_separation,
                    optimal_alpha, phases)
from .simulate import (GENERATOR_ID, CalibrationEstimate, EventStream,
                       ThermalSample, estimate_calibration, g2_zero,
                       interleaved_run, make_rng, sample_thermal,
                       simulate_events)

__version__ = "0.1.0"

__all__ = [
    "Baseline", "CalibrationEstimate", "ConfigError", "CountPosterior",
    "DensityMatrix2", "EstimateRecord", "EventStream", "FlatPosteriorError",
    "FourierPosterior", "GENERATOR_ID", "GridError", "Interferometer",
    "NumericsError", "OutcomeDist", "ParaxialError", "PhasePair", "PsfModel",
    "PureState2", "Scene", "SupportError", "TestReport", "ThermalSample",
    "angular_separation", "calibrate_threshold", "classical_fisher_info",
    "classical_relative_entropy", "classical_relative_entropy_variance",
    "cre_of_measurement", "di_fisher_info", "di_relative_entropy",
    "estimate_calibration", "estimate_theta", "fringe_probs", "g2_zero",
    "hypothesis_probs", "hypothesis_states", "interleaved_run", "llr_test",
    "log_likelihood_ratio", "make_rng", "map_phase", "maximize_cre", "mse",
    "optimal_alpha", "outcome_probs", "phases", "posterior_from_counts",
    "posterior_init", "posterior_update", "qfi_closed_form", "qfi_separation",
    "qre_exact", "qre_small_angle", "relative_entropy",
    "relative_entropy_variance", "run_discrimination", "run_estimation_trial",
    "sample_thermal", "simulate_events", "source_states", "stein_prediction",
    "type1_error_mc", "type2_error_mc", "__version__",
]
