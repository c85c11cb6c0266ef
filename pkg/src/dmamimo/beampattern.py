"""Far-field patterns of a single microstrip and holographic beam steering.

The array factor of one microstrip is

    AF(theta) = | sum_l q_l g_l exp(j k0 l d sin(theta)) |

with an isotropic element pattern. Holographic tuning picks each ``q_l`` so
that the guided-wave phase ``g_l`` and the free-space path phase cancel toward
the target, then projects onto the element's feasible set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._measure import crossing_width
from .element import ElementWeight, FeasibleSet, project
from .waveguide import propagation_gains

__all__ = [
    "DEFAULT_ANGLE_STEP",
    "PatternResult",
    "DegeneratePatternError",
    "angle_grid",
    "array_factor",
    "holographic_tuning",
]

DEFAULT_ANGLE_STEP = 0.1
_DB_FLOOR = -300.0


class DegeneratePatternError(ValueError):
    """All element weights are zero, so the pattern cannot be normalized."""


def angle_grid(step=DEFAULT_ANGLE_STEP):
    """Angles from -90 to 90 degrees inclusive at ``step`` spacing."""
    n = int(round(180.0 / step))
    return np.round(-90.0 + step * np.arange(n + 1), 10)


@dataclass(frozen=True, eq=False)
class PatternResult:
    angles: np.ndarray
    magnitudes_db: np.ndarray
    peak_angle: float
    half_power_beamwidth: float

    def peak_sidelobe_db(self):
        """Highest level outside the main lobe (bounded by its first minima).

        Returns ``-inf`` when the main lobe spans the whole grid.
        """
        y = self.magnitudes_db
        peak = int(np.argmax(y))
        lo = peak
        while lo > 0 and y[lo - 1] <= y[lo]:
            lo -= 1
        hi = peak
        while hi < len(y) - 1 and y[hi + 1] <= y[hi]:
            hi += 1
        outside = np.concatenate([y[:lo], y[hi + 1:]])
        return float(outside.max()) if outside.size else float("-inf")


def _weight_values(weights):
    return np.array([getattr(w, "value", w) for w in weights], dtype=complex)


def array_factor(geo, weights, angles=None):
    """Normalized single-microstrip pattern for element weights ``weights``.

    Parameters
    ----------
    geo : ArrayGeometry
    weights : sequence of ElementWeight or complex, length L
    angles : array_like of degrees in [-90, 90], optional
        Strictly increasing; defaults to a 0.1 degree grid.
    """
    q = _weight_values(weights)
    L = geo.elements_per_microstrip
    if q.shape != (L,):
        raise ValueError(f"expected {L} weights, got {q.shape}")
    if not np.any(q != 0):
        raise DegeneratePatternError("all element weights are zero")
    angles = angle_grid() if angles is None else np.asarray(angles, dtype=float)
    if angles.ndim != 1 or angles.size == 0:
        raise ValueError("angles must be a non-empty 1-D sequence")
    if np.any(np.abs(angles) > 90) or np.any(np.diff(angles) <= 0):
        raise ValueError("angles must be strictly increasing within [-90, 90]")

    rho = geo.element_positions()
    sin_t = np.sin(np.deg2rad(angles))
    steer = np.exp(1j * geo.wavenumber * np.outer(sin_t, rho))
    af = np.abs(steer @ (q * propagation_gains(geo)))
    peak = int(np.argmax(af))
    if af[peak] == 0:
        raise DegeneratePatternError("pattern vanishes on the whole angle grid")
    lin = af / af[peak]
    with np.errstate(divide="ignore"):
        db = np.maximum(20 * np.log10(lin), _DB_FLOOR)
    hpbw = crossing_width(angles, lin, peak, 1 / np.sqrt(2))
    return PatternResult(angles, db, float(angles[peak]), hpbw)


def holographic_tuning(geo, theta_target, fset):
    """Element weights steering one microstrip's beam toward ``theta_target`` degrees."""
    if not np.isfinite(theta_target) or abs(theta_target) > 90:
        raise ValueError("theta_target must lie in [-90, 90] degrees")
    rho = geo.element_positions()
    ideal = np.exp(-1j * geo.wavenumber * rho * np.sin(np.deg2rad(theta_target)))
    ideal = ideal / propagation_gains(geo)
    q = project(ideal, fset)
    return [ElementWeight(v, fset) for v in q]
