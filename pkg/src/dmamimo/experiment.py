"""Seeded Monte Carlo sum-rate experiments across front-end architectures.

Every trial draws one channel realization that is shared by all architectures
and all SNR points, so architecture comparisons are paired. Trials are
independent given their index (see :func:`dmamimo.channel.trial_rng`) and
can be farmed out to worker processes without changing the result.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import STREAM_DROP, STREAM_FADING, ScenarioConfig, generate_channel, trial_rng
from .element import FeasibleSet
from .errors import ConfigError, NumericalError
from .optimizer import OptimizerOptions, optimize_dma, optimize_phase_shifter_hybrid
from .rates import rate_from_singular_values, summarize_rates, whitened_singular_values
from .waveguide import ArrayGeometry

__all__ = [
    "ARCHITECTURES",
    "CSV_HEADER",
    "ExperimentSpec",
    "preset",
    "load_config",
    "spec_from_dict",
    "run_experiment",
    "write_csv",
]

log = logging.getLogger(__name__)

ARCHITECTURES = (
    "digital-N",
    "dma-lorentzian",
    "dma-binary",
    "dma-unconstrained",
    "hybrid-full",
    "digital-M",
)

_DMA_SETS = {
    "dma-lorentzian": FeasibleSet.LORENTZIAN_PHASE,
    "dma-binary": FeasibleSet.BINARY_AMPLITUDE,
    "dma-unconstrained": FeasibleSet.UNCONSTRAINED,
}

CSV_HEADER = ("architecture", "snr_db", "mean_rate_bpshz", "ci95", "trials", "seed")

# per-trial rates may not exceed the fully digital capacity by more than this
DPI_TOL = 1e-9


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioConfig
    geometry: ArrayGeometry
    architectures: tuple = ARCHITECTURES
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    output_path: str | None = None

    def __post_init__(self):
        archs = tuple(self.architectures)
        if not archs:
            raise ConfigError("at least one architecture is required")
        unknown = [a for a in archs if a not in ARCHITECTURES]
        if unknown:
            raise ConfigError(f"unknown architectures {unknown}; choose from {list(ARCHITECTURES)}")
        if len(set(archs)) != len(archs):
            raise ConfigError("architectures must not repeat")
        object.__setattr__(self, "architectures", archs)


def preset(name):
    """Named experiment configurations.

    ``desk``: 32 elements on 8 microstrips of 4, 8 users, 200 trials.
    ``paper``: 160 elements on 16 microstrips of 10, 64 users in a 400 m
    cell at 3.5 GHz, 20 trials.
    """
    snr_grid = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0)
    if name == "desk":
        scenario = ScenarioConfig(num_users=8, num_trials=200, snr_grid=snr_grid, rng_seed=42)
        geometry = ArrayGeometry.default(8, 4, scenario.carrier_frequency)
    elif name == "paper":
        scenario = ScenarioConfig(num_users=64, num_trials=20, snr_grid=snr_grid, rng_seed=42)
        geometry = ArrayGeometry.default(16, 10, scenario.carrier_frequency)
    else:
        raise ConfigError(f"unknown preset {name!r}; choose 'desk' or 'paper'")
    return ExperimentSpec(scenario=scenario, geometry=geometry)


def _merge(cls, base, updates, section):
    names = {f.name for f in dataclasses.fields(cls)}
    if not isinstance(updates, dict):
        raise ConfigError(f"'{section}' must be an object")
    unknown = sorted(set(updates) - names)
    if unknown:
        raise ConfigError(f"unknown keys in '{section}': {unknown}")
    try:
        return dataclasses.replace(base, **updates)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid '{section}': {exc}") from exc


_TOP_KEYS = {"preset", "scenario", "geometry", "architectures", "optimizer", "output_path"}


def spec_from_dict(cfg):
    """Build an :class:`ExperimentSpec` from a parsed JSON config.

    Sections override the named ``preset`` (default ``desk``) field by field;
    unknown keys raise :class:`ConfigError`.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"unknown top-level keys: {unknown}")
    base = preset(cfg.get("preset", "desk"))
    scenario_updates = cfg.get("scenario", {})
    if isinstance(scenario_updates, dict) and "cell_radius" in scenario_updates:
        # keep the gain anchored at the (new) cell edge unless set explicitly
        scenario_updates = {"reference_distance": None, **scenario_updates}
    scenario = _merge(ScenarioConfig, base.scenario, scenario_updates, "scenario")
    geometry = _merge(ArrayGeometry, base.geometry, cfg.get("geometry", {}), "geometry")
    optimizer = _merge(OptimizerOptions, base.optimizer, cfg.get("optimizer", {}), "optimizer")
    archs = cfg.get("architectures", base.architectures)
    if isinstance(archs, str) or not isinstance(archs, (list, tuple)):
        raise ConfigError("'architectures' must be a list of names")
    out = cfg.get("output_path")
    if out is not None and not isinstance(out, str):
        raise ConfigError("'output_path' must be a string")
    return ExperimentSpec(scenario, geometry, tuple(archs), optimizer, out)


def load_config(path):
    """Read a JSON experiment config from ``path``."""
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return spec_from_dict(cfg)


def _front_end_singular_values(arch, H, spec):
    geo = spec.geometry
    M = geo.num_microstrips
    if arch == "digital-N":
        return np.linalg.svd(H, compute_uv=False), []
    if arch == "digital-M":
        return np.linalg.svd(H[:M], compute_uv=False), []
    if arch == "hybrid-full":
        A = optimize_phase_shifter_hybrid(H, M, spec.optimizer)
        return whitened_singular_values(A, H), []
    A, diag = optimize_dma(H, geo, _DMA_SETS[arch], spec.optimizer, full_output=True)
    return whitened_singular_values(A, H), diag.revived


def run_trial(spec, trial):
    """Rates of every architecture at every SNR for trial ``trial``.

    Returns an array of shape ``(len(architectures), len(snr_grid))`` and the
    list of ``(architecture, iteration, microstrip)`` revival events.
    """
    sc = spec.scenario
    chan = generate_channel(
        sc,
        spec.geometry,
        trial_rng(sc.rng_seed, trial, STREAM_DROP),
        trial_rng(sc.rng_seed, trial, STREAM_FADING),
    )
    H = chan.matrix
    snr = 10.0 ** (np.asarray(sc.snr_grid) / 10.0)
    cap = rate_from_singular_values(np.linalg.svd(H, compute_uv=False), snr)
    rates = np.empty((len(spec.architectures), len(snr)))
    events = []
    for i, arch in enumerate(spec.architectures):
        s, revived = _front_end_singular_values(arch, H, spec)
        rates[i] = rate_from_singular_values(s, snr)
        events.extend((arch, it, m) for it, m in revived)
        excess = rates[i] - cap
        if np.any(excess > DPI_TOL * np.maximum(1.0, cap)):
            raise NumericalError(
                f"trial {trial}: {arch} rate exceeds fully digital capacity by {excess.max():.3g}"
            )
    return rates, events


def _run_trial_args(args):
    return run_trial(*args)


def _check_writable(path):
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if p.is_dir():
        raise IsADirectoryError(f"output path {p} is a directory")
    if not parent.is_dir():
        raise FileNotFoundError(f"output directory {parent} does not exist")
    if not os.access(parent, os.W_OK) or (p.exists() and not os.access(p, os.W_OK)):
        raise PermissionError(f"output path {p} is not writable")


def run_experiment(spec, workers=1, *, full_output=False):
    """Run all trials of ``spec`` and aggregate per architecture and SNR.

    Results are ordered by architecture (in ``spec.architectures`` order), then SNR.
    When ``spec.output_path`` is set the CSV table is written there; the path
    is checked for writability before any trial runs.

    With ``full_output`` the per-trial revival events are also returned as a
    dict keyed by trial index.
    """
    if spec.output_path is not None:
        _check_writable(spec.output_path)
    sc = spec.scenario
    jobs = [(spec, t) for t in range(sc.num_trials)]
    if workers <= 1:
        outputs = [_run_trial_args(j) for j in jobs]
    else:
        chunk = max(1, len(jobs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_trial_args, jobs, chunksize=chunk))

    per_trial = np.stack([r for r, _ in outputs])  # trials x archs x snrs
    events = {t: ev for t, (_, ev) in enumerate(outputs) if ev}
    for t, ev in events.items():
        log.warning("trial %d: zero microstrip rows revived: %s", t, ev)

    results = [
        summarize_rates(arch, snr_db, per_trial[:, i, j])
        for i, arch in enumerate(spec.architectures)
        for j, snr_db in enumerate(sc.snr_grid)
    ]
    if spec.output_path is not None:
        write_csv(spec.output_path, results, sc.rng_seed)
    if full_output:
        return results, events
    return results


def write_csv(dest, results, seed):
    """Write the aggregated rate table to a path or an open text stream."""
    if hasattr(dest, "write"):
        _write_rows(dest, results, seed)
        return
    with open(dest, "w", newline="") as fh:
        _write_rows(fh, results, seed)


def _write_rows(fh, results, seed):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow([
            r.architecture,
            f"{r.snr_db:g}",
            f"{r.mean_rate:.6f}",
            f"{r.ci95_halfwidth:.6f}",
            r.trials,
            seed,
        ])
