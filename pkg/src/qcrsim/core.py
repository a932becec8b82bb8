"""Shared domain types, units, and physical constants.

Canonical units everywhere in the toolkit: femtoseconds for delays and
optical periods, picoseconds for relaxation times, meV for energies,
kelvin for temperatures.  All types are immutable value objects and safe
to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

FS_PER_PS = 1000.0

#: Planck constant h in meV*ps (CODATA value truncated to toolkit precision).
PLANCK_MEV_PS = 4.135667

#: Numerical slack allowed on the Bloch-vector norm.
NORM_SLACK = 1e-9


def planck_constant_mev_ps() -> float:
    """Planck constant h in meV*ps."""
    return PLANCK_MEV_PS


def fs_to_ps(t_fs: float) -> float:
    return t_fs / FS_PER_PS


def ps_to_fs(t_ps: float) -> float:
    return t_ps * FS_PER_PS


def energy_mev_to_freq_inv_fs(energy_mev: float) -> float:
    """Convert a photon energy in meV to a frequency in inverse fs (f = E/h)."""
    return energy_mev / (PLANCK_MEV_PS * FS_PER_PS)


def freq_inv_fs_to_energy_mev(freq_inv_fs: float) -> float:
    """Convert a frequency in inverse fs to a photon energy in meV."""
    return freq_inv_fs * PLANCK_MEV_PS * FS_PER_PS


@dataclass(frozen=True)
class ModeSpec:
    """One homogeneous subgroup of the ensemble.

    Attributes:
        period_fs: oscillation period of the transition (fs).
        weight: dimensionless amplitude of the mode.
        t2_ps: homogeneous transverse relaxation (dephasing) time (ps).
        t1_ps: population relaxation time (ps); defaults to unbounded.
    """

    period_fs: float
    weight: float
    t2_ps: float
    t1_ps: float = math.inf

    def __post_init__(self) -> None:
        if not self.period_fs > 0:
            raise ValueError(f"period_fs must be positive, got {self.period_fs}")
        if not self.weight > 0:
            raise ValueError(f"weight must be positive, got {self.weight}")
        if not self.t2_ps > 0:
            raise ValueError(f"t2_ps must be positive, got {self.t2_ps}")
        if math.isfinite(self.t1_ps) and self.t1_ps < self.t2_ps / 2.0:
            raise ValueError(
                f"t1_ps={self.t1_ps} violates t1 >= t2/2 (t2={self.t2_ps})"
            )


@dataclass(frozen=True)
class EnsembleSpec:
    """Discrete inhomogeneous ensemble: an ordered set of modes plus the
    carrier period used as the rotating-frame reference.
    """

    modes: tuple[ModeSpec, ...]
    reference_period_fs: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(self.modes) < 1:
            raise ValueError("ensemble needs at least one mode")
        periods = [m.period_fs for m in self.modes]
        if len(set(periods)) != len(periods):
            raise ValueError("mode periods must be distinct")
        if not self.reference_period_fs > 0:
            raise ValueError("reference_period_fs must be positive")

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def periods_fs(self) -> np.ndarray:
        return np.array([m.period_fs for m in self.modes])

    def weights(self) -> np.ndarray:
        return np.array([m.weight for m in self.modes])

    def weight_sum(self) -> float:
        return float(self.weights().sum())

    def t2s_ps(self) -> np.ndarray:
        return np.array([m.t2_ps for m in self.modes])

    def t1s_ps(self) -> np.ndarray:
        return np.array([m.t1_ps for m in self.modes])

    def detunings_inv_fs(self) -> np.ndarray:
        """Per-mode detuning 1/period - 1/reference_period, in inverse fs."""
        return 1.0 / self.periods_fs() - 1.0 / self.reference_period_fs


PULSE_ENVELOPES = ("delta", "gaussian", "sech")


@dataclass(frozen=True)
class PulseSpec:
    """One excitation pulse.

    area_rad is the time integral of the Rabi rate; phase_rad the optical
    carrier phase in the rotating frame; fwhm_fs the intensity FWHM
    (ignored for delta pulses).
    """

    area_rad: float
    arrival_fs: float = 0.0
    phase_rad: float = 0.0
    envelope: str = "delta"
    fwhm_fs: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.area_rad) and self.area_rad >= 0):
            raise ValueError(f"area_rad must be finite and >= 0, got {self.area_rad}")
        if self.envelope not in PULSE_ENVELOPES:
            raise ValueError(f"unknown envelope {self.envelope!r}")
        if self.envelope != "delta" and not self.fwhm_fs > 0:
            raise ValueError("fwhm_fs must be positive for a finite-duration pulse")


@dataclass(frozen=True, eq=False)
class BlochState:
    """Real Bloch vector (u, v, w) encoding a two-level density matrix.

    u = 2 Re rho_12, v = -2 Im rho_12, w = rho_22 - rho_11.  Components may
    be scalars or numpy arrays of a common shape (for batched evolution).
    The trace of the implied density matrix is 1 by construction.
    """

    u: float | np.ndarray
    v: float | np.ndarray
    w: float | np.ndarray

    def __post_init__(self) -> None:
        n2 = np.asarray(self.u) ** 2 + np.asarray(self.v) ** 2 + np.asarray(self.w) ** 2
        assert np.all(n2 <= (1.0 + NORM_SLACK) ** 2), (
            f"Bloch vector norm exceeds 1 + {NORM_SLACK}: max |B|^2 = {np.max(n2)}"
        )

    def norm(self) -> float | np.ndarray:
        return np.sqrt(
            np.asarray(self.u) ** 2 + np.asarray(self.v) ** 2 + np.asarray(self.w) ** 2
        )

    def as_array(self) -> np.ndarray:
        return np.stack(np.broadcast_arrays(self.u, self.v, self.w))


#: Two-level system in its ground state.
GROUND = BlochState(0.0, 0.0, -1.0)


def _as_1d_float(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


@dataclass(frozen=True, eq=False)
class FringeTrace:
    """Delay-scan readout: signal values on a strictly increasing delay grid."""

    delays_fs: np.ndarray
    signal: np.ndarray
    baseline: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "delays_fs", _as_1d_float(self.delays_fs, "delays_fs"))
        object.__setattr__(self, "signal", _as_1d_float(self.signal, "signal"))
        if self.delays_fs.shape != self.signal.shape:
            raise ValueError("delays_fs and signal must have equal length")
        if self.delays_fs.size and np.any(np.diff(self.delays_fs) <= 0):
            raise ValueError("delays_fs must be strictly increasing")


@dataclass(frozen=True, eq=False)
class ContrastEnvelope:
    """Non-negative fringe-contrast envelope sampled on a delay grid."""

    delays_fs: np.ndarray
    contrast: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "delays_fs", _as_1d_float(self.delays_fs, "delays_fs"))
        object.__setattr__(self, "contrast", _as_1d_float(self.contrast, "contrast"))
        if self.delays_fs.shape != self.contrast.shape:
            raise ValueError("delays_fs and contrast must have equal length")
        if np.any(self.contrast < 0):
            raise ValueError("contrast values must be non-negative")


@dataclass(frozen=True)
class FitResult:
    """Named parameter estimates with residual diagnostics."""

    params: dict[str, float]
    rms_residual: float
    n_points: int

    def __post_init__(self) -> None:
        if self.rms_residual < 0:
            raise ValueError("rms_residual must be non-negative")
        if self.n_points < len(self.params) + 1:
            raise ValueError(
                f"n_points={self.n_points} too small for {len(self.params)} parameters"
            )
