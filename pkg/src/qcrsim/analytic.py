"""Closed-form multi-mode collapse/revival model.

Serves as the independent oracle for the delay-scan simulator: the
carrier-resolved response of N uncoupled damped modes and its slowly
varying envelope, plus the revival-time bookkeeping and the effective
inhomogeneous decay-time fit.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ContrastEnvelope, EnsembleSpec, PLANCK_MEV_PS
from . import fitting

__all__ = [
    "revival_signal",
    "revival_envelope",
    "revival_times",
    "mean_detuning_spacing",
    "linewidth_from_t2",
    "t2_from_linewidth",
    "effective_t2star",
]

#: Maximum relative deviation of detuning spacings tolerated by the
#: uniform-comb revival-time model.
SPACING_TOLERANCE = 0.10


def _check_times(t_fs) -> np.ndarray:
    t = np.asarray(t_fs, dtype=float)
    if np.any(t < 0):
        raise ValueError("t_fs must be non-negative")
    return t


def revival_signal(t_fs, ensemble: EnsembleSpec, t2_ps: float) -> np.ndarray:
    """Carrier-resolved response exp(-t/T2) * sum_k a_k sin(2 pi t / period_k)."""
    t = _check_times(t_fs)
    weights = ensemble.weights()
    periods = ensemble.periods_fs()
    phases = 2.0 * np.pi * np.multiply.outer(t, 1.0 / periods)
    total = np.sin(phases) @ weights
    return np.exp(-t / (1000.0 * t2_ps)) * total


def revival_envelope(t_fs, ensemble: EnsembleSpec, t2_ps: float) -> np.ndarray:
    """Slowly varying magnitude exp(-t/T2) * |sum_k a_k exp(2i pi df_k t)|.

    df_k are the mode detunings from the ensemble reference period; only
    detunings enter, so the envelope is invariant under a rigid shift of
    all mode frequencies together with the reference.
    """
    t = _check_times(t_fs)
    weights = ensemble.weights()
    det = ensemble.detunings_inv_fs()
    phases = 2.0j * np.pi * np.multiply.outer(t, det)
    total = np.abs(np.exp(phases) @ weights.astype(complex))
    return np.exp(-t / (1000.0 * t2_ps)) * total


def mean_detuning_spacing(ensemble: EnsembleSpec) -> float:
    """Mean spacing of the sorted mode detunings (inverse fs).

    Raises ValueError when the spacing deviates from uniform by 10% or
    more, which breaks the comb picture behind the revival times.
    """
    det = np.sort(ensemble.detunings_inv_fs())
    if det.size < 2:
        raise ValueError("need at least two modes for a detuning spacing")
    spacings = np.diff(det)
    mean = float(spacings.mean())
    if mean <= 0:
        raise ValueError("degenerate detunings")
    deviation = float(np.max(np.abs(spacings - mean)) / mean)
    if deviation >= SPACING_TOLERANCE:
        raise ValueError(
            f"detuning spacing non-uniformity {deviation:.3f} exceeds "
            f"{SPACING_TOLERANCE}; revival times are ill-defined"
        )
    return mean


def revival_times(
    ensemble: EnsembleSpec, horizon_fs: float = 15000.0
) -> list[tuple[float, str]]:
    """Expected coherence-revival times up to `horizon_fs`.

    Full revivals at multiples of 1/spacing, fractional revivals at odd
    multiples of half that period, sorted ascending as (time_fs, kind).
    A single-mode ensemble has nothing to rephase and yields [].
    """
    if ensemble.n_modes < 2:
        return []
    period = 1.0 / mean_detuning_spacing(ensemble)
    out: list[tuple[float, str]] = []
    m = 1
    while m * period / 2.0 <= horizon_fs:
        t = m * period / 2.0
        out.append((t, "full" if m % 2 == 0 else "fractional"))
        m += 1
    return out


def linewidth_from_t2(t2_ps: float) -> float:
    """Full energy width (meV) of a mode with dephasing time T2: 2h/T2."""
    if not t2_ps > 0:
        raise ValueError("t2_ps must be positive")
    return 2.0 * PLANCK_MEV_PS / t2_ps


def t2_from_linewidth(energy_mev: float) -> float:
    """Inverse of linewidth_from_t2."""
    if not energy_mev > 0:
        raise ValueError("energy_mev must be positive")
    return 2.0 * PLANCK_MEV_PS / energy_mev


def _first_local_min(values: np.ndarray) -> int | None:
    for i in range(1, values.size - 1):
        if values[i] < values[i - 1] and values[i] <= values[i + 1]:
            return i
    return None


def effective_t2star(
    ensemble: EnsembleSpec,
    t2_ps: float = math.inf,
    n_grid: int = 4096,
) -> float:
    """Effective inhomogeneous decay time of the initial envelope collapse.

    Fits A*exp(-2t/T) to the envelope from t=0 to its first local minimum
    and returns T in ps.  The search horizon is 1.2 revival periods.
    """
    if ensemble.n_modes < 2:
        raise ValueError("effective_t2star needs an inhomogeneous ensemble (>= 2 modes)")
    period = 1.0 / mean_detuning_spacing(ensemble)
    t = np.linspace(0.0, 1.2 * period, n_grid)
    env = revival_envelope(t, ensemble, t2_ps)
    i_min = _first_local_min(env)
    if i_min is None:
        raise ValueError("envelope has no minimum within the search horizon")
    fit = fitting.fit_exp_decay(
        ContrastEnvelope(t[: i_min + 1], env[: i_min + 1]), exponent_factor=2
    )
    return fit.params["tau_ps"]
