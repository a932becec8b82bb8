"""Command-line entry point.

Subcommands reproduce the toolkit's standard artifacts as CSV/JSON files:

  analytic    dense closed-form signal and envelope
  ramsey      two-pulse delay scan with contrast and revival summary
  echo        three-pulse rephasing scan with fitted T2
  fit         log-linear fits of two-column CSV data
  propagate   spectral maps of inversion and coherence along the medium
  sweep       bias/temperature scaling-law round trip

Every command is deterministic given (config, seed); outputs are written
with 17 significant digits and stable JSON key order so reruns are
byte-identical.  Exit codes: 0 success, 2 config error, 3 numerical
failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import analytic, experiments, fitting, propagate
from .config import Config, ConfigError, PRESET_NAMES, load_config
from .core import ContrastEnvelope, EnsembleSpec, FitResult, ModeSpec
from .fitting import FitDegenerateError
from .sweep import run_sweep

FIT_MODELS = ("exp1", "exp2", "exp4", "power", "arrhenius-like")


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    n = len(columns[0])
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _fit_payload(fit: FitResult) -> dict:
    return {
        "params": {k: float(v) for k, v in fit.params.items()},
        "rms_residual": float(fit.rms_residual),
        "n_points": int(fit.n_points),
    }


def _ensemble_from_config(cfg: Config) -> EnsembleSpec:
    periods = cfg.get_floats("ensemble", "periods_fs")
    weights = cfg.get_floats("ensemble", "weights")
    if len(periods) != len(weights):
        raise ConfigError(
            f"{len(periods)} periods but {len(weights)} weights in [ensemble]"
        )
    t2 = cfg.get_float("ensemble", "t2_ps")
    t1 = cfg.get_float("ensemble", "t1_ps")
    ref = cfg.get_float("ensemble", "reference_period_fs")
    try:
        modes = tuple(
            ModeSpec(period_fs=p, weight=w, t2_ps=t2, t1_ps=t1)
            for p, w in zip(periods, weights)
        )
        return EnsembleSpec(modes, ref)
    except ValueError as exc:
        raise ConfigError(f"invalid ensemble: {exc}") from exc


def _grid(cfg: Config, section: str) -> np.ndarray:
    start = cfg.get_float(section, "start_fs")
    stop = cfg.get_float(section, "stop_fs")
    step = cfg.get_float(section, "step_fs")
    if step <= 0 or stop < start:
        raise ConfigError(f"bad [{section}] grid: start={start} stop={stop} step={step}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def _resolve_threads(arg_threads: int | None) -> int:
    if arg_threads is not None:
        return max(1, arg_threads)
    env = os.environ.get("QCR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"QCR_THREADS={env!r} is not an integer") from None
    return 1


def _scan_chunked(delays: np.ndarray, threads: int, func) -> list:
    """Apply `func` to contiguous delay chunks, preserving order.

    Chunks are independent work items, so the assembled result does not
    depend on the thread count.
    """
    if threads <= 1 or delays.size < 4 * threads:
        return [func(delays)]
    chunks = np.array_split(delays, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, chunks))


def _write_effective_config(cfg: Config, out: Path, seed: int) -> None:
    cfg.set("run", "seed", str(seed))
    (out / "effective_config.ini").write_text(cfg.serialize(), encoding="utf-8")


# ----------------------------- commands -----------------------------


def _cmd_analytic(cfg: Config, out: Path, seed: int, threads: int) -> int:
    ens = _ensemble_from_config(cfg)
    t2 = cfg.get_float("ensemble", "t2_ps")
    t = _grid(cfg, "analytic")
    signal = analytic.revival_signal(t, ens, t2)
    envelope = analytic.revival_envelope(t, ens, t2)
    _write_csv(out / "analytic.csv", ["time_fs", "signal", "envelope"], [t, signal, envelope])
    _write_effective_config(cfg, out, seed)
    return 0


def _run_scan(cfg: Config, ens: EnsembleSpec, threads: int, kind: str):
    delays = _grid(cfg, "scan")
    min_delay = cfg.get_float("scan", "min_delay_fs")
    area = cfg.get_float("scan", "pulse_area_rad")
    if kind == "ramsey":
        func = lambda d: (
            experiments.ramsey_scan(ens, area, d, min_delay_fs=min_delay).signal,
            experiments.ramsey_contrast(ens, area, d, min_delay_fs=min_delay).contrast,
        )
    else:
        func = lambda d: (
            experiments.echo_scan(ens, d, min_delay_fs=min_delay).signal,
            experiments.echo_contrast(ens, d, min_delay_fs=min_delay).contrast,
        )
    parts = _scan_chunked(delays, threads, func)
    signal = np.concatenate([p[0] for p in parts])
    contrast = np.concatenate([p[1] for p in parts])
    return delays, signal, contrast


def _apply_noise(signal, contrast, noise_rms: float, seed: int):
    if noise_rms <= 0:
        return signal, contrast
    rng = np.random.default_rng(seed)
    scale = noise_rms * float(np.max(np.abs(signal))) if signal.size else 0.0
    signal = signal + scale * rng.standard_normal(signal.size)
    contrast = np.clip(
        contrast * (1.0 + noise_rms * rng.standard_normal(contrast.size)), 0.0, None
    )
    return signal, contrast


def _cmd_ramsey(cfg: Config, out: Path, seed: int, threads: int) -> int:
    ens = _ensemble_from_config(cfg)
    delays, signal, contrast = _run_scan(cfg, ens, threads, "ramsey")
    signal, contrast = _apply_noise(signal, contrast, cfg.get_float("scan", "noise_rms"), seed)
    cmax = float(contrast.max()) if contrast.size else 1.0
    norm = contrast / cmax if cmax > 0 else contrast
    _write_csv(out / "ramsey.csv", ["delay_fs", "signal", "contrast"], [delays, signal, norm])

    envelope = ContrastEnvelope(delays, norm)
    peaks = experiments.find_revival_peaks(envelope, cfg.get_float("scan", "peak_prominence"))
    summary = {
        "n_peaks": len(peaks),
        "peaks": [{"time_fs": t, "height": h} for t, h in peaks],
        "contrast_max": cmax,
        "t2_fit_ps": None,
    }
    if len(peaks) >= 3:
        fit = experiments.t2_from_revival_peaks(peaks, ens)
        summary["t2_fit_ps"] = float(fit.params["tau_ps"])
    _write_json(out / "ramsey_summary.json", summary)
    _write_effective_config(cfg, out, seed)
    return 0


def _cmd_echo(cfg: Config, out: Path, seed: int, threads: int) -> int:
    ens = _ensemble_from_config(cfg)
    delays, signal, contrast = _run_scan(cfg, ens, threads, "echo")
    signal, contrast = _apply_noise(signal, contrast, cfg.get_float("scan", "noise_rms"), seed)
    cmax = float(contrast.max()) if contrast.size else 1.0
    norm = contrast / cmax if cmax > 0 else contrast
    _write_csv(out / "echo.csv", ["delay_fs", "signal", "contrast"], [delays, signal, norm])
    fit = fitting.fit_exp_decay(ContrastEnvelope(delays, norm), exponent_factor=4)
    summary = {
        "t2_fit_ps": float(fit.params["tau_ps"]),
        "n_points": int(fit.n_points),
        "rms_residual": float(fit.rms_residual),
        "contrast_max": cmax,
    }
    _write_json(out / "echo_summary.json", summary)
    _write_effective_config(cfg, out, seed)
    return 0


def _read_xy_csv(path: Path) -> tuple[np.ndarray, np.ndarray]:
    xs: list[float] = []
    ys: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            tokens = line.split(",")
            if len(tokens) < 2:
                raise ConfigError(f"{path} line {lineno}: expected two comma-separated columns")
            try:
                x, y = float(tokens[0]), float(tokens[1])
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise ConfigError(f"{path} line {lineno}: could not parse {line!r}") from None
            xs.append(x)
            ys.append(y)
    if not xs:
        raise ConfigError(f"{path}: no data rows")
    return np.array(xs), np.array(ys)


def _cmd_fit(model: str, input_path: Path, out: Path) -> int:
    x, y = _read_xy_csv(input_path)
    if model in ("exp1", "exp2", "exp4"):
        factor = int(model[3])
        fit = fitting.fit_exp_decay(ContrastEnvelope(x, y), exponent_factor=factor)
    elif model == "power":
        fit = fitting.fit_power_law(x, y)
    elif model == "arrhenius-like":
        fit = fitting.fit_exp_temperature(x, y)
    else:
        raise ConfigError(f"unknown fit model {model!r}; choose from {', '.join(FIT_MODELS)}")
    _write_json(out / "fit.json", _fit_payload(fit))
    return 0


def _cmd_propagate(cfg: Config, out: Path, seed: int, threads: int) -> int:
    ref = cfg.get_float("ensemble", "reference_period_fs")
    channels = propagate.detuning_grid_ensemble(
        ref,
        cfg.get_float("propagate", "span_inv_fs"),
        cfg.get_int("propagate", "n_channels"),
        cfg.get_float("propagate", "channel_t2_ps"),
    )
    profile = None
    lobe_width = cfg.get_float("propagate", "lobe_width_inv_fs")
    if lobe_width > 0:
        source = _ensemble_from_config(cfg)
        profile = propagate.lobe_area_profile(
            channels.detunings_inv_fs(),
            source.detunings_inv_fs(),
            source.weights(),
            lobe_width,
        )
    pmap = propagate.propagate_map(
        channels,
        cfg.get_float("propagate", "pair_delay_fs"),
        cfg.get_int("propagate", "z_steps"),
        cfg.get_float("propagate", "gain_per_step"),
        cfg.get_float("propagate", "base_area_rad"),
        area_profile=profile,
    )

    header = ["z_index"] + [_fmt(d) for d in pmap.detunings_inv_fs]
    for name, matrix in (("inversion", pmap.inversion), ("coherence", pmap.coherence)):
        scale = float(np.max(np.abs(matrix)))
        normed = matrix / scale if scale > 0 else matrix
        z_col = np.arange(matrix.shape[0], dtype=float)
        cols = [z_col] + [normed[:, k] for k in range(matrix.shape[1])]
        _write_csv(out / f"propagate_{name}.csv", header, cols)

    tau = cfg.get_float("propagate", "pair_delay_fs")
    spacing = propagate.spectral_peak_spacing(pmap.detunings_inv_fs, pmap.inversion[0])
    y = pmap.inversion[0]
    n_peaks = sum(
        1 for i in range(1, y.size - 1) if y[i] > y[i - 1] and y[i] >= y[i + 1]
    )
    summary = {
        "fringe_spacing_inv_fs": spacing,
        "expected_spacing_inv_fs": (1.0 / tau) if tau > 0 else None,
        "n_fringe_peaks": int(n_peaks),
        "zmean_coherence_max": float(pmap.coherence.mean(axis=0).max()),
    }
    _write_json(out / "propagate_summary.json", summary)
    _write_effective_config(cfg, out, seed)
    return 0


def _cmd_sweep(cfg: Config, out: Path, seed: int, threads: int) -> int:
    axis = cfg.get("sweep", "axis")
    if axis == "bias":
        points = cfg.get_floats("sweep", "bias_points")
        anchor = cfg.get_float("sweep", "anchor_bias")
    elif axis == "temperature":
        points = cfg.get_floats("sweep", "temp_points_K")
        anchor = cfg.get_float("sweep", "anchor_temp_K")
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}")
    result = run_sweep(
        axis,
        points,
        beta_t2=cfg.get_float("sweep", "beta_t2"),
        beta_t2star=cfg.get_float("sweep", "beta_t2star"),
        t0_t2_K=cfg.get_float("sweep", "t0_t2_K"),
        t0_t2star_K=cfg.get_float("sweep", "t0_t2star_K"),
        anchor_x=anchor,
        anchor_t2_ps=cfg.get_float("sweep", "anchor_t2_ps"),
        anchor_t2star_ps=cfg.get_float("sweep", "anchor_t2star_ps"),
        noise_rms=cfg.get_float("sweep", "noise_rms"),
        rng=np.random.default_rng(seed),
    )
    xs = np.array([p.x for p in result.points])
    _write_csv(
        out / "sweep.csv",
        ["x", "T2_ps", "T2star_ps"],
        [xs,
         np.array([p.recovered_t2_ps for p in result.points]),
         np.array([p.recovered_t2star_ps for p in result.points])],
    )
    planted = (
        {"beta_t2": cfg.get_float("sweep", "beta_t2"),
         "beta_t2star": cfg.get_float("sweep", "beta_t2star")}
        if axis == "bias"
        else {"t0_t2_K": cfg.get_float("sweep", "t0_t2_K"),
              "t0_t2star_K": cfg.get_float("sweep", "t0_t2star_K")}
    )
    summary = {
        "axis": axis,
        "planted": planted,
        "t2_fit": _fit_payload(result.t2_fit),
        "t2star_fit": _fit_payload(result.t2star_fit),
        "points": [asdict(p) for p in result.points],
    }
    _write_json(out / "sweep_summary.json", summary)
    _write_effective_config(cfg, out, seed)
    return 0


# ----------------------------- wiring -----------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcrsim",
        description="Collapse/revival simulation and analysis toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("analytic", "dense closed-form signal and envelope CSV"),
        ("ramsey", "two-pulse delay scan CSV + revival summary JSON"),
        ("echo", "three-pulse rephasing scan CSV + fitted-T2 JSON"),
        ("propagate", "spectral inversion/coherence matrices CSV"),
        ("sweep", "bias/temperature scaling round trip CSV + JSON"),
        ("fit", "fit a two-column CSV with a named model"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None, help="INI config file")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default from config)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (fallback: QCR_THREADS, then 1)")
        p.add_argument("--preset", choices=PRESET_NAMES, default=None,
                       help="named parameter preset")
        if name == "fit":
            p.add_argument("--input", type=Path, required=True, help="two-column CSV")
            p.add_argument("--model", required=True, choices=FIT_MODELS)
    return parser


_DISPATCH = {
    "analytic": _cmd_analytic,
    "ramsey": _cmd_ramsey,
    "echo": _cmd_echo,
    "propagate": _cmd_propagate,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        cfg = load_config(ns.config, ns.preset)
        seed = ns.seed if ns.seed is not None else cfg.get_int("run", "seed")
        threads = _resolve_threads(ns.threads)
        ns.out.mkdir(parents=True, exist_ok=True)
        if ns.command == "fit":
            return _cmd_fit(ns.model, ns.input, ns.out)
        return _DISPATCH[ns.command](cfg, ns.out, seed, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FitDegenerateError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
