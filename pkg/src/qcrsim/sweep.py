"""Scaling-law sweeps: plant T2(x) / T2*(x), re-extract, fit across points.

For each sweep point an ensemble is synthesized whose homogeneous T2 and
inhomogeneous spread realize the planted values, then both time constants
are recovered the same way a measurement would recover them: the
two-pulse contrast collapse is fitted with exp(-2t/T), the echo contrast
with exp(-4t/T).  Fitting the recovered constants across sweep points
closes the round trip on the planted power law / exponential law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic, experiments, fitting
from .config import ConfigError
from .core import ContrastEnvelope, EnsembleSpec, FitResult
from .presets import REFERENCE_SPACING_FS, five_mode_ensemble

__all__ = ["SweepPoint", "SweepResult", "run_sweep"]

_COLLAPSE_WINDOW_FRACTION = 0.55  # of the full revival period
_RAMSEY_GRID_POINTS = 1200
_ECHO_GRID_POINTS = 80


@dataclass(frozen=True)
class SweepPoint:
    x: float
    planted_t2_ps: float
    planted_t2star_ps: float
    recovered_t2_ps: float
    recovered_t2star_ps: float


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: tuple[SweepPoint, ...]
    t2_fit: FitResult
    t2star_fit: FitResult


def _collapse_fit_tau(ensemble: EnsembleSpec, noise_rms: float, rng) -> float:
    """Two-pulse collapse time: exponent-2 fit up to the first contrast minimum."""
    period = 1.0 / analytic.mean_detuning_spacing(ensemble)
    delays = np.linspace(0.0, _COLLAPSE_WINDOW_FRACTION * period, _RAMSEY_GRID_POINTS)
    contrast = experiments.ramsey_contrast(
        ensemble, math.pi / 2, delays, min_delay_fs=0.0
    ).contrast
    if noise_rms > 0:
        contrast = np.clip(contrast * (1.0 + noise_rms * rng.standard_normal(contrast.size)), 0.0, None)
    i_min = int(np.argmin(contrast))
    if i_min < 3:
        raise ValueError("contrast minimum too close to zero delay")
    fit = fitting.fit_exp_decay(
        ContrastEnvelope(delays[: i_min + 1], contrast[: i_min + 1]), exponent_factor=2
    )
    return fit.params["tau_ps"]


def _echo_fit_tau(ensemble: EnsembleSpec, t2_ps: float, noise_rms: float, rng) -> float:
    delays = np.linspace(0.0, 1.5 * 1000.0 * t2_ps, _ECHO_GRID_POINTS)
    contrast = experiments.echo_contrast(ensemble, delays, min_delay_fs=0.0).contrast
    if noise_rms > 0:
        contrast = np.clip(contrast * (1.0 + noise_rms * rng.standard_normal(contrast.size)), 0.0, None)
    fit = fitting.fit_exp_decay(ContrastEnvelope(delays, contrast), exponent_factor=4)
    return fit.params["tau_ps"]


def _calibrate_spread_constant() -> float:
    """K such that the undamped collapse fit returns K / spacing (ps)."""
    ens = five_mode_ensemble(spacing_fs=REFERENCE_SPACING_FS, t2_ps=math.inf)
    rng = np.random.default_rng(0)  # unused at zero noise
    tau_ref = _collapse_fit_tau(ens, 0.0, rng)
    return tau_ref * REFERENCE_SPACING_FS


def _spread_for_targets(t2_ps: float, t2star_ps: float, k_const: float) -> float:
    """Spacing whose combined collapse fit returns t2star_ps under T2 damping.

    Log-slopes add, so the pure-envelope collapse time tau_env satisfies
    2/t2star = 2/tau_env + 1/T2.
    """
    denom = 2.0 / t2star_ps - 1.0 / t2_ps
    if denom <= 0:
        raise ConfigError(
            f"unreachable targets: T2*={t2star_ps} ps needs T2* < 2*T2 (T2={t2_ps} ps)"
        )
    tau_env = 2.0 / denom
    return k_const / tau_env


def run_sweep(
    axis: str,
    points,
    *,
    beta_t2: float = 0.38,
    beta_t2star: float = 0.48,
    t0_t2_K: float = 284.0,
    t0_t2star_K: float = 62.0,
    anchor_x: float | None = None,
    anchor_t2_ps: float = 5.22,
    anchor_t2star_ps: float = 1.27,
    noise_rms: float = 0.0,
    rng: np.random.Generator | None = None,
) -> SweepResult:
    """Synthesize, scan, extract and fit a bias or temperature sweep.

    axis="bias": T2 and T2* follow x**(-beta) power laws anchored at
    anchor_x (default 4.7).  axis="temperature": exp(-T/T0) laws anchored
    at anchor_x kelvin (default 295).
    """
    if axis not in ("bias", "temperature"):
        raise ConfigError(f"unknown sweep axis {axis!r}")
    xs = np.asarray(points, dtype=float)
    if xs.ndim != 1 or xs.size < 3:
        raise ConfigError("sweep needs at least 3 points")
    if axis == "bias" and np.any(xs <= 0):
        raise ConfigError("bias sweep points must be positive")
    if anchor_x is None:
        anchor_x = 4.7 if axis == "bias" else 295.0
    if rng is None:
        rng = np.random.default_rng(0)

    if axis == "bias":
        t2_of = lambda x: anchor_t2_ps * (x / anchor_x) ** (-beta_t2)
        t2star_of = lambda x: anchor_t2star_ps * (x / anchor_x) ** (-beta_t2star)
    else:
        t2_of = lambda x: anchor_t2_ps * math.exp(-(x - anchor_x) / t0_t2_K)
        t2star_of = lambda x: anchor_t2star_ps * math.exp(-(x - anchor_x) / t0_t2star_K)

    k_const = _calibrate_spread_constant()
    rows = []
    for x in xs:
        t2 = t2_of(x)
        t2star = t2star_of(x)
        spacing = _spread_for_targets(t2, t2star, k_const)
        ens = five_mode_ensemble(spacing_fs=spacing, t2_ps=t2)
        rec_t2star = _collapse_fit_tau(ens, noise_rms, rng)
        rec_t2 = _echo_fit_tau(ens, t2, noise_rms, rng)
        rows.append(SweepPoint(float(x), t2, t2star, rec_t2, rec_t2star))

    rec_t2_arr = np.array([p.recovered_t2_ps for p in rows])
    rec_t2star_arr = np.array([p.recovered_t2star_ps for p in rows])
    if axis == "bias":
        t2_fit = fitting.fit_power_law(xs, rec_t2_arr)
        t2star_fit = fitting.fit_power_law(xs, rec_t2star_arr)
    else:
        t2_fit = fitting.fit_exp_temperature(xs, rec_t2_arr)
        t2star_fit = fitting.fit_exp_temperature(xs, rec_t2star_arr)
    return SweepResult(axis, tuple(rows), t2_fit, t2star_fit)
