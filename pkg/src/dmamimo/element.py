"""Metamaterial element model.

Each element is a driven resonator whose complex response follows the
Lorentzian polarizability

    a(f) = F f^2 / (f0^2 - f^2 + j chi f)

with oscillator strength ``F``, resonance frequency ``f0`` and damping ``chi``.
For narrowband work the response at the carrier is reduced to a single complex
weight ``q`` drawn from one of the feasible sets in :class:`FeasibleSet`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._measure import crossing_width
from .errors import DomainError

__all__ = [
    "LorentzianTuning",
    "FeasibleSet",
    "ElementWeight",
    "frequency_response",
    "normalized_response_curve",
    "half_power_bandwidth",
    "lorentzian_phase_weight",
    "project",
    "project_weight",
    "is_member",
    "MEMBERSHIP_TOL",
]

MEMBERSHIP_TOL = 1e-12

LORENTZIAN_CENTER = 0.5j
LORENTZIAN_RADIUS = 0.5


@dataclass(frozen=True)
class LorentzianTuning:
    """Externally controllable resonator parameters of one element.

    Parameters
    ----------
    oscillator_strength : float
        Dimensionless coupling strength ``F`` (> 0).
    damping_factor : float
        Damping ``chi`` in Hz (>= 0).
    resonance_frequency : float
        Resonance ``f0`` in Hz (> 0).
    """

    oscillator_strength: float
    damping_factor: float
    resonance_frequency: float

    def __post_init__(self):
        if not self.oscillator_strength > 0:
            raise ValueError("oscillator_strength must be positive")
        if not self.damping_factor >= 0:
            raise ValueError("damping_factor must be non-negative")
        if not self.resonance_frequency > 0:
            raise ValueError("resonance_frequency must be positive")


class FeasibleSet(enum.Enum):
    """Sets of complex element weights an analog front-end can realize."""

    LORENTZIAN_PHASE = "lorentzian"
    BINARY_AMPLITUDE = "binary"
    UNIT_MODULUS = "unit-modulus"
    UNCONSTRAINED = "unconstrained"


def is_member(q, fset, tol=MEMBERSHIP_TOL):
    """Elementwise membership test of ``q`` in ``fset``."""
    q = np.asarray(q, dtype=complex)
    if fset is FeasibleSet.LORENTZIAN_PHASE:
        return np.abs(np.abs(q - LORENTZIAN_CENTER) - LORENTZIAN_RADIUS) <= tol
    if fset is FeasibleSet.BINARY_AMPLITUDE:
        return (np.abs(q) <= tol) | (np.abs(q - 1) <= tol)
    if fset is FeasibleSet.UNIT_MODULUS:
        return np.abs(np.abs(q) - 1) <= tol
    if fset is FeasibleSet.UNCONSTRAINED:
        return np.isfinite(q)
    raise TypeError(f"not a FeasibleSet: {fset!r}")


@dataclass(frozen=True)
class ElementWeight:
    """A complex element weight together with the set it belongs to.

    ``phase`` holds the generating angle for weights built with
    :func:`lorentzian_phase_weight`, and is ``None`` otherwise.
    """

    value: complex
    set: FeasibleSet
    phase: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if not bool(is_member(self.value, self.set)):
            raise ValueError(f"{self.value!r} is not a member of {self.set.name}")


def frequency_response(tuning, f):
    """Complex Lorentzian response of an element at frequency ``f`` (Hz).

    ``f`` may be a scalar or an array. Raises :class:`DomainError` when the
    element is undamped and evaluated exactly at resonance.
    """
    f_arr = np.asarray(f, dtype=float)
    if np.any(~np.isfinite(f_arr)) or np.any(f_arr <= 0):
        raise ValueError("frequencies must be finite and positive")
    F = tuning.oscillator_strength
    f0 = tuning.resonance_frequency
    chi = tuning.damping_factor
    if chi == 0 and np.any(f_arr == f0):
        raise DomainError(f"undamped element evaluated at its resonance {f0} Hz")
    out = F * f_arr**2 / (f0**2 - f_arr**2 + 1j * chi * f_arr)
    if out.ndim == 0:
        return complex(out)
    return out


def normalized_response_curve(tuning, f_grid):
    """Response magnitude on ``f_grid`` divided by its maximum over the grid."""
    f_grid = np.asarray(f_grid, dtype=float)
    if f_grid.ndim != 1 or f_grid.size == 0:
        raise ValueError("f_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(f_grid) <= 0):
        raise ValueError("f_grid must be strictly increasing")
    mag = np.abs(frequency_response(tuning, f_grid))
    return mag / mag.max()


def half_power_bandwidth(f_grid, curve):
    """-3 dB (half-power) width in Hz of a normalized magnitude curve.

    The band is the contiguous region around the curve's maximum where the
    magnitude stays at or above ``1/sqrt(2)``; it is truncated at the grid
    edges when the curve never drops that low.
    """
    curve = np.asarray(curve, dtype=float)
    peak = int(np.argmax(curve))
    return crossing_width(f_grid, curve / curve[peak], peak, 1 / math.sqrt(2))


def lorentzian_phase_weight(phi):
    """Lorentzian-constrained weight ``q = (j + exp(j phi)) / 2``.

    ``phi = pi/2`` gives the maximally radiating state ``q = j``;
    ``phi = -pi/2`` switches the element off.
    """
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError("phi must be finite")
    phi = math.remainder(phi, 2 * math.pi)
    value = (1j + complex(math.cos(phi), math.sin(phi))) / 2
    return ElementWeight(value, FeasibleSet.LORENTZIAN_PHASE, phase=phi)


def project(z, fset):
    """Vectorized Euclidean projection of ``z`` onto ``fset``.

    Ties are broken toward radiating states: the circle center maps to ``j``,
    zero maps to ``1`` on the unit circle, and the binary midpoint maps to 1.
    """
    z = np.asarray(z, dtype=complex)
    def unit(w, r):
        # rescale by the larger component first so that subnormal inputs
        # keep full precision; then divide component-wise
        m = np.maximum(np.abs(w.real), np.abs(w.imag))
        m = np.where(r > 0, m, 1.0)
        ws = w.real / m + 1j * (w.imag / m)
        rs = np.where(r > 0, np.abs(ws), 1.0)
        return ws.real / rs + 1j * (ws.imag / rs)

    if fset is FeasibleSet.UNCONSTRAINED:
        return z.copy()
    if fset is FeasibleSet.LORENTZIAN_PHASE:
        w = z - LORENTZIAN_CENTER
        r = np.abs(w)
        return np.where(r > 0, LORENTZIAN_CENTER + LORENTZIAN_RADIUS * unit(w, r), 1j)
    if fset is FeasibleSet.UNIT_MODULUS:
        r = np.abs(z)
        return np.where(r > 0, unit(z, r), 1.0 + 0j)
    if fset is FeasibleSet.BINARY_AMPLITUDE:
        return np.where(np.abs(z - 1) <= np.abs(z), 1.0 + 0j, 0j)
    raise TypeError(f"not a FeasibleSet: {fset!r}")


def project_weight(z, fset):
    """Closest member of ``fset`` to the complex number ``z``."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    q = complex(project(z, fset))
    phase = None
    if fset is FeasibleSet.LORENTZIAN_PHASE:
        phase = math.atan2(2 * q.imag - 1, 2 * q.real)
    return ElementWeight(q, fset, phase=phase)
