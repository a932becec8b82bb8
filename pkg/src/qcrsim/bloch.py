"""Time evolution of a single mode's Bloch vector in the rotating frame.

Pulses rotate the Bloch vector about an equatorial axis set by the pulse
phase (right-hand rule, phase 0 = the +u axis).  Free evolution is the
closed-form damped precession: positive detuning rotates (u, v)
counter-clockwise, so a mode whose period is shorter than the reference
period accumulates positive phase.
"""

from __future__ import annotations

import math

import numpy as np

from .core import BlochState, PulseSpec

__all__ = ["apply_pulse_delta", "evolve_free", "evolve_finite_pulse"]


def apply_pulse_delta(
    state: BlochState,
    area_rad: float | np.ndarray,
    phase_rad: float | np.ndarray = 0.0,
) -> BlochState:
    """Instantaneous pulse: rotate by `area_rad` about (cos phase, sin phase, 0).

    The rotation is orthogonal, so the Bloch norm is preserved exactly.
    """
    if not np.all(np.isfinite(area_rad)):
        raise ValueError("pulse area must be finite")
    c = np.cos(area_rad)
    s = np.sin(area_rad)
    cp = np.cos(phase_rad)
    sp = np.sin(phase_rad)
    u, v, w = state.u, state.v, state.w
    ndot = u * cp + v * sp
    return BlochState(
        u * c + sp * w * s + cp * ndot * (1.0 - c),
        v * c - cp * w * s + sp * ndot * (1.0 - c),
        w * c + (cp * v - sp * u) * s,
    )


def evolve_free(
    state: BlochState,
    duration_fs: float | np.ndarray,
    detuning_inv_fs: float | np.ndarray,
    t2_ps: float | np.ndarray = math.inf,
    t1_ps: float | np.ndarray = math.inf,
    w_eq: float = -1.0,
) -> BlochState:
    """Damped free precession for `duration_fs` (closed form, no integration error).

    (u, v) rotates by 2*pi*detuning*duration and contracts by exp(-t/T2);
    (w - w_eq) contracts by exp(-t/T1).  w_eq is the equilibrium inversion
    (-1 absorber, +1 pumped gain medium).
    """
    d = np.asarray(duration_fs, dtype=float)
    if np.any(d < 0):
        raise ValueError("duration_fs must be non-negative")
    theta = 2.0 * np.pi * detuning_inv_fs * d
    ct = np.cos(theta)
    st = np.sin(theta)
    decay2 = np.exp(-d / (1000.0 * t2_ps))
    decay1 = np.exp(-d / (1000.0 * t1_ps))
    u, v, w = state.u, state.v, state.w
    return BlochState(
        (u * ct - v * st) * decay2,
        (u * st + v * ct) * decay2,
        w_eq + (w - w_eq) * decay1,
    )


def _envelope_amplitude(envelope: str, fwhm_fs: float, area_rad: float):
    """Peak Rabi rate and shape function for a truncated pulse envelope.

    The envelope is truncated at +-4*FWHM and rescaled so that the Rabi
    rate integrates to exactly `area_rad` over the truncated window, which
    keeps the area theorem exact under truncation.  fwhm_fs is the
    intensity FWHM; the Rabi rate follows the field envelope.
    """
    half = 4.0 * fwhm_fs
    if envelope == "gaussian":
        sigma = fwhm_fs / (2.0 * math.sqrt(math.log(2.0)))
        integral = sigma * math.sqrt(2.0 * math.pi) * math.erf(half / (sigma * math.sqrt(2.0)))

        def shape(t):
            return np.exp(-(t * t) / (2.0 * sigma * sigma))

    elif envelope == "sech":
        tau_s = fwhm_fs / (2.0 * math.acosh(math.sqrt(2.0)))
        integral = 2.0 * tau_s * math.atan(math.sinh(half / tau_s))

        def shape(t):
            return 1.0 / np.cosh(t / tau_s)

    else:
        raise ValueError(f"unsupported envelope {envelope!r}")
    return area_rad / integral, shape, half


def evolve_finite_pulse(
    state: BlochState,
    pulse: PulseSpec,
    detuning_inv_fs: float,
    t2_ps: float = math.inf,
    t1_ps: float = math.inf,
    dt_fs: float = 1.0,
    w_eq: float = -1.0,
) -> BlochState:
    """Integrate the damped optical Bloch equations through a finite pulse.

    Classical fixed-step 4th-order Runge-Kutta over the truncated window
    [arrival - 4*FWHM, arrival + 4*FWHM]; detuning and damping act
    throughout the window.  The input state is taken at the window start
    and the returned state is at the window end.

    Args:
        pulse: must have a non-delta envelope.
        dt_fs: integration step; required <= fwhm_fs / 20.
    """
    if pulse.envelope == "delta":
        raise ValueError("delta pulses must use apply_pulse_delta")
    if not dt_fs > 0:
        raise ValueError("dt_fs must be positive")
    if dt_fs > pulse.fwhm_fs / 20.0:
        raise ValueError(
            f"dt_fs={dt_fs} too large; need dt_fs <= fwhm_fs/20 = {pulse.fwhm_fs / 20.0}"
        )

    amp, shape, half = _envelope_amplitude(pulse.envelope, pulse.fwhm_fs, pulse.area_rad)
    n_steps = int(math.ceil(2.0 * half / dt_fs))
    h = 2.0 * half / n_steps

    delta = 2.0 * np.pi * detuning_inv_fs
    g2 = 1.0 / (1000.0 * t2_ps)
    g1 = 1.0 / (1000.0 * t1_ps)
    cp = np.cos(pulse.phase_rad)
    sp = np.sin(pulse.phase_rad)

    def deriv(t_rel, u, v, w):
        omega = amp * shape(t_rel)
        du = -delta * v - g2 * u + omega * sp * w
        dv = delta * u - g2 * v - omega * cp * w
        dw = -g1 * (w - w_eq) + omega * (cp * v - sp * u)
        return du, dv, dw

    u = np.asarray(state.u, dtype=float)
    v = np.asarray(state.v, dtype=float)
    w = np.asarray(state.w, dtype=float)
    t = -half
    for _ in range(n_steps):
        k1 = deriv(t, u, v, w)
        k2 = deriv(t + h / 2, u + h / 2 * k1[0], v + h / 2 * k1[1], w + h / 2 * k1[2])
        k3 = deriv(t + h / 2, u + h / 2 * k2[0], v + h / 2 * k2[1], w + h / 2 * k2[2])
        k4 = deriv(t + h, u + h * k3[0], v + h * k3[1], w + h * k3[2])
        u = u + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v = v + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        w = w + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        t += h
    return BlochState(u, v, w)
