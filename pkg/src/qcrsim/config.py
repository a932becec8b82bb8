"""Flat key = value configuration with named presets.

Configs are INI files with one section per subsystem.  Resolution order:
built-in defaults, then the named preset (if any), then the user file.
The effective (fully merged) config is what commands serialize next to
their outputs, so a run can be reproduced from its artifacts alone.
"""

from __future__ import annotations

import configparser
import io
import math
from pathlib import Path

from .presets import (
    ECHO_BENCH_SPACING_FS,
    ECHO_BENCH_T2_PS,
    REFERENCE_PERIOD_FS,
    REFERENCE_SPACING_FS,
)

__all__ = ["ConfigError", "Config", "load_config", "PRESET_NAMES"]


class ConfigError(ValueError):
    """Malformed configuration or preset."""


def _periods(spacing: float) -> str:
    return ",".join(
        f"{REFERENCE_PERIOD_FS + k * spacing:.17g}" for k in range(-2, 3)
    )


_WEIGHTS = ",".join(f"{w:.17g}" for w in (1 / 3, 1 / 2, 1.0, 1 / 2, 1 / 3))

DEFAULTS: dict[str, dict[str, str]] = {
    "ensemble": {
        "reference_period_fs": "5.109",
        "periods_fs": _periods(REFERENCE_SPACING_FS),
        "weights": _WEIGHTS,
        "t2_ps": "4.64",
        "t1_ps": "inf",
    },
    "scan": {
        "start_fs": "600",
        "stop_fs": "15000",
        "step_fs": "0.5",
        "min_delay_fs": "600",
        "pulse_area_rad": f"{math.pi / 2:.17g}",
        "noise_rms": "0",
        "peak_prominence": "0.02",
    },
    "analytic": {
        "start_fs": "0",
        "stop_fs": "15000",
        "step_fs": "0.5",
    },
    "propagate": {
        "pair_delay_fs": "1000",
        "z_steps": "8",
        "gain_per_step": "1",
        "n_channels": "1024",
        "span_inv_fs": "0.005",
        "base_area_rad": f"{math.pi / 2:.17g}",
        "lobe_width_inv_fs": "0",
        "channel_t2_ps": "inf",
    },
    "sweep": {
        "axis": "bias",
        "bias_points": "2,3,4.7,7.15,10",
        "temp_points_K": "280,295,310,325,340",
        "beta_t2": "0.38",
        "beta_t2star": "0.48",
        "t0_t2_K": "284",
        "t0_t2star_K": "62",
        "anchor_bias": "4.7",
        "anchor_temp_K": "295",
        "anchor_t2_ps": "5.22",
        "anchor_t2star_ps": "1.27",
        "noise_rms": "0",
    },
    "run": {
        "seed": "0",
    },
}

PRESETS: dict[str, dict[str, dict[str, str]]] = {
    # Collapse/revival scan: five-mode comb, T2 = 4.64 ps, 600 fs - 15 ps.
    "paper-fig2": {},
    # Two- vs three-pulse comparison: T2 = 5.22 ps with the spread
    # calibrated so the two-pulse collapse fit gives 1.27 ps.
    "paper-fig4": {
        "ensemble": {
            "periods_fs": _periods(ECHO_BENCH_SPACING_FS),
            "t2_ps": f"{ECHO_BENCH_T2_PS}",
        },
        "scan": {"stop_fs": "8000", "step_fs": "2"},
    },
    # Bias / temperature scaling sweeps.
    "paper-fig5": {},
}
PRESETS["paper-defaults"] = PRESETS["paper-fig2"]
PRESET_NAMES = tuple(PRESETS)


class Config:
    """Merged configuration with typed accessors."""

    def __init__(self, sections: dict[str, dict[str, str]]):
        self._sections = sections

    def get(self, section: str, key: str) -> str:
        try:
            return self._sections[section][key]
        except KeyError:
            raise ConfigError(f"missing config key [{section}] {key}") from None

    def get_float(self, section: str, key: str) -> float:
        raw = self.get(section, key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a number") from None

    def get_int(self, section: str, key: str) -> int:
        raw = self.get(section, key)
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not an integer") from None

    def get_floats(self, section: str, key: str) -> list[float]:
        raw = self.get(section, key)
        try:
            return [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a number list") from None

    def set(self, section: str, key: str, value: str) -> None:
        self._sections.setdefault(section, {})[key] = value

    def serialize(self) -> str:
        parser = configparser.ConfigParser()
        for section in DEFAULTS:
            parser[section] = dict(self._sections.get(section, {}))
        for section in self._sections:
            if section not in DEFAULTS:
                parser[section] = dict(self._sections[section])
        buf = io.StringIO()
        parser.write(buf)
        return buf.getvalue()


def _merge(base: dict[str, dict[str, str]], overlay: dict[str, dict[str, str]]) -> None:
    for section, kv in overlay.items():
        if section not in base:
            base[section] = {}
        base[section].update(kv)


def load_config(path: str | Path | None = None, preset: str | None = None) -> Config:
    """Defaults, overlaid by `preset`, overlaid by the INI file at `path`."""
    sections = {s: dict(kv) for s, kv in DEFAULTS.items()}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {', '.join(PRESET_NAMES)}"
            )
        _merge(sections, PRESETS[preset])
    if path is not None:
        parser = configparser.ConfigParser()
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh)
        except FileNotFoundError:
            raise
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
        file_sections = {s: dict(parser[s]) for s in parser.sections()}
        _merge(sections, file_sections)
    return Config(sections)
