"""Parameter extraction by log-linear least squares.

All three models used by the toolkit are log-linearizable, so the
canonical fits are deterministic linear regressions:

  contrast ~ A * exp(-c*t/tau)   (c in {1, 2, 4}, t in fs, tau in ps)
  y ~ C * x**(-beta)
  y ~ C * exp(-T/T0)             (T in kelvin)
"""

from __future__ import annotations

import numpy as np

from .core import ContrastEnvelope, FitResult

__all__ = [
    "FitDegenerateError",
    "fit_exp_decay",
    "fit_power_law",
    "fit_exp_temperature",
    "DEFAULT_NOISE_FLOOR",
]

#: Contrast samples below this fraction of the maximum are excluded from
#: exponential fits (between revivals the trace is noise).
DEFAULT_NOISE_FLOOR = 1e-3

_FLAT_SLOPE = 1e-12  # 1/fs resp. 1/K; anything flatter is degenerate


class FitDegenerateError(RuntimeError):
    """Raised when the data carry no usable trend for the requested model."""


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def fit_exp_decay(
    envelope: ContrastEnvelope,
    exponent_factor: int,
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> FitResult:
    """Fit contrast ~ amplitude * exp(-c * t / tau) in log space.

    Args:
        envelope: delays in fs, non-negative contrast.
        exponent_factor: the fixed convention factor c, one of 1, 2, 4.
        noise_floor: fraction of the contrast maximum below which samples
            are dropped before taking the logarithm.

    Returns:
        FitResult with params tau_ps and amplitude; rms_residual is in
        log space.

    Raises:
        ValueError: fewer than 3 usable samples.
        FitDegenerateError: no decay detected (flat or growing data).
    """
    if exponent_factor not in (1, 2, 4):
        raise ValueError(f"exponent_factor must be 1, 2 or 4, got {exponent_factor}")
    t = envelope.delays_fs
    y = envelope.contrast
    if y.size == 0 or not np.any(y > 0):
        raise ValueError("need positive contrast samples to fit a decay")
    floor = noise_floor * float(y.max())
    keep = y > floor
    t, y = t[keep], y[keep]
    if t.size < 3:
        raise ValueError(f"only {t.size} usable samples above the noise floor; need >= 3")
    slope, intercept, rms = _linear_fit(t, np.log(y))
    if slope >= -_FLAT_SLOPE:
        raise FitDegenerateError("no decay detected")
    tau_ps = -exponent_factor / slope / 1000.0
    return FitResult(
        params={"tau_ps": tau_ps, "amplitude": float(np.exp(intercept))},
        rms_residual=rms,
        n_points=int(t.size),
    )


def fit_power_law(x, y) -> FitResult:
    """Fit y ~ prefactor * x**(-beta) by regressing log y on log x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if x.size < 3:
        raise ValueError(f"need >= 3 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit requires strictly positive x and y")
    slope, intercept, rms = _linear_fit(np.log(x), np.log(y))
    return FitResult(
        params={"beta": -slope, "prefactor": float(np.exp(intercept))},
        rms_residual=rms,
        n_points=int(x.size),
    )


def fit_exp_temperature(x, y) -> FitResult:
    """Fit y ~ prefactor * exp(-T/T0) by regressing log y on temperature."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if x.size < 3:
        raise ValueError(f"need >= 3 points, got {x.size}")
    if np.any(y <= 0):
        raise ValueError("temperature fit requires strictly positive y")
    slope, intercept, rms = _linear_fit(x, np.log(y))
    if abs(slope) < _FLAT_SLOPE:
        raise FitDegenerateError("no temperature dependence")
    return FitResult(
        params={"t0_K": -1.0 / slope, "prefactor": float(np.exp(intercept))},
        rms_residual=rms,
        n_points=int(x.size),
    )
