"""Multi-user uplink channels for users dropped in a circular cell.

Random streams are derived from one master seed with
:class:`numpy.random.SeedSequence` using ``spawn_key = (trial, purpose)``.
The key is a pure function of the trial index, so a trial's draws do not
depend on which worker runs it or in what order trials are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ScenarioConfig",
    "ChannelRealization",
    "STREAM_DROP",
    "STREAM_FADING",
    "trial_rng",
    "drop_users",
    "pathloss_gain",
    "generate_channel",
]

STREAM_DROP = 0
STREAM_FADING = 1

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class ScenarioConfig:
    """Single-cell uplink scenario.

    ``reference_distance`` is the distance at which the pathloss gain is 1;
    left as ``None`` it defaults to the cell radius so that SNR values are
    cell-edge SNRs.
    """

    num_users: int
    cell_radius: float = 400.0
    min_distance: float = 10.0
    pathloss_exponent: float = 3.0
    reference_distance: float | None = None
    snr_grid: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0)
    num_trials: int = 200
    rng_seed: int = 42
    carrier_frequency: float = 3.5e9

    def __post_init__(self):
        if int(self.num_users) != self.num_users or self.num_users < 1:
            raise ValueError("num_users must be a positive integer")
        if not 0 < self.min_distance < self.cell_radius:
            raise ValueError("need 0 < min_distance < cell_radius")
        if not self.pathloss_exponent >= 2:
            raise ValueError("pathloss_exponent must be >= 2")
        if self.reference_distance is None:
            object.__setattr__(self, "reference_distance", float(self.cell_radius))
        if not self.reference_distance > 0:
            raise ValueError("reference_distance must be positive")
        object.__setattr__(self, "snr_grid", tuple(float(s) for s in self.snr_grid))
        if not self.snr_grid:
            raise ValueError("snr_grid must be non-empty")
        if not all(np.isfinite(self.snr_grid)):
            raise ValueError("snr_grid values must be finite")
        if int(self.num_trials) != self.num_trials or self.num_trials < 1:
            raise ValueError("num_trials must be a positive integer")
        if int(self.rng_seed) != self.rng_seed or not 0 <= self.rng_seed < _SEED_LIMIT:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")
        if not self.carrier_frequency > 0:
            raise ValueError("carrier_frequency must be positive")


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """``N x K`` uplink channel and the large-scale parameters behind it."""

    matrix: np.ndarray
    user_distances: np.ndarray = field(repr=False)
    pathloss_gains: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.matrix, self.user_distances, self.pathloss_gains):
            arr.setflags(write=False)


def trial_rng(seed, trial, purpose):
    """Independent generator for ``(trial, purpose)`` under a master seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial), int(purpose)))
    return np.random.default_rng(ss)


def drop_users(cfg, rng):
    """Drop ``K`` users uniformly by area over the annulus ``[r_min, R]``.

    Returns
    -------
    distances, angles : ndarray
        Distances in meters and azimuths in radians, each of length ``K``.
    """
    K = cfg.num_users
    r2 = rng.uniform(cfg.min_distance**2, cfg.cell_radius**2, size=K)
    angles = rng.uniform(0.0, 2 * np.pi, size=K)
    return np.sqrt(r2), angles


def pathloss_gain(cfg, distance):
    """Log-distance gain ``(d_ref / distance) ** gamma``.

    Accepts a scalar or an array of distances.
    """
    d = np.asarray(distance, dtype=float)
    if np.any(d < cfg.min_distance):
        raise ValueError(f"distance below min_distance ({cfg.min_distance} m)")
    g = (cfg.reference_distance / d) ** cfg.pathloss_exponent
    return float(g) if g.ndim == 0 else g


def generate_channel(cfg, geo, rng, fading_rng=None):
    """Draw one Rayleigh-faded channel ``H[:, k] = sqrt(gain_k) w_k``.

    ``rng`` drives the user drop and, when ``fading_rng`` is omitted, the
    small-scale fading as well.
    """
    if fading_rng is None:
        fading_rng = rng
    N, K = geo.num_elements, cfg.num_users
    distances, _ = drop_users(cfg, rng)
    gains = np.asarray(pathloss_gain(cfg, distances), dtype=float)
    w = (fading_rng.standard_normal((N, K)) + 1j * fading_rng.standard_normal((N, K))) / np.sqrt(2)
    H = w * np.sqrt(gains)[None, :]
    return ChannelRealization(H, distances, gains)
