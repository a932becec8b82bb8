"""Collapse/revival physics of discrete inhomogeneous two-level ensembles.

Simulates Ramsey and rephasing-echo delay scans over a comb of damped
modes, provides the closed-form multi-mode revival model as an
independent oracle, and extracts decay constants and scaling laws from
the resulting contrast traces.
"""

from .core import (
    GROUND,
    BlochState,
    ContrastEnvelope,
    EnsembleSpec,
    FitResult,
    FringeTrace,
    ModeSpec,
    PulseSpec,
    planck_constant_mev_ps,
)
from .bloch import apply_pulse_delta, evolve_finite_pulse, evolve_free
from .analytic import (
    effective_t2star,
    linewidth_from_t2,
    revival_envelope,
    revival_signal,
    revival_times,
    t2_from_linewidth,
)
from .experiments import (
    echo_contrast,
    echo_scan,
    extract_contrast,
    find_revival_peaks,
    ramsey_contrast,
    ramsey_scan,
    t2_from_revival_peaks,
)
from .fitting import (
    FitDegenerateError,
    fit_exp_decay,
    fit_exp_temperature,
    fit_power_law,
)
from .propagate import detuning_grid_ensemble, lobe_area_profile, propagate_map
from .presets import five_mode_ensemble, reference_ensemble
from .sweep import run_sweep

__version__ = "0.1.0"

__all__ = [
    "GROUND",
    "BlochState",
    "ContrastEnvelope",
    "EnsembleSpec",
    "FitResult",
    "FringeTrace",
    "ModeSpec",
    "PulseSpec",
    "planck_constant_mev_ps",
    "apply_pulse_delta",
    "evolve_finite_pulse",
    "evolve_free",
    "effective_t2star",
    "linewidth_from_t2",
    "revival_envelope",
    "revival_signal",
    "revival_times",
    "t2_from_linewidth",
    "echo_contrast",
    "echo_scan",
    "extract_contrast",
    "find_revival_peaks",
    "ramsey_contrast",
    "ramsey_scan",
    "t2_from_revival_peaks",
    "FitDegenerateError",
    "fit_exp_decay",
    "fit_exp_temperature",
    "fit_power_law",
    "detuning_grid_ensemble",
    "lobe_area_profile",
    "propagate_map",
    "five_mode_ensemble",
    "reference_ensemble",
    "run_sweep",
    "__version__",
]
