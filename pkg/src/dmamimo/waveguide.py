"""Microstrip geometry and the block-sparse analog combiner it induces.

A DMA with ``M`` microstrips of ``L`` elements each is seen by the digital
back-end as an ``M x N`` matrix (``N = M L``).  Element ``l`` of microstrip
``m`` sits in column ``n = m L + l`` and contributes ``q[m, l] * g[l]``, where
``g[l]`` is the guided-wave propagation between that element and the port.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .element import ElementWeight, FeasibleSet, is_member

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayGeometry",
    "AnalogCombiner",
    "propagation_gain",
    "propagation_gains",
    "assemble_combiner",
    "combiner_from_array",
]

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class ArrayGeometry:
    """Physical layout shared by every microstrip of the array.

    Parameters
    ----------
    num_microstrips : int
        Number of waveguides / RF chains ``M``.
    elements_per_microstrip : int
        Elements per waveguide ``L``.
    element_spacing : float
        Element pitch ``d`` in meters.
    guide_wavenumber : float
        Guided-wave phase constant ``beta_g`` in rad/m.
    waveguide_attenuation : float
        Guided-wave attenuation ``alpha`` in Np/m.
    carrier_frequency : float
        Carrier ``f_c`` in Hz.
    """

    num_microstrips: int
    elements_per_microstrip: int
    element_spacing: float
    guide_wavenumber: float
    waveguide_attenuation: float = 0.0
    carrier_frequency: float = 3.5e9

    def __post_init__(self):
        if int(self.num_microstrips) != self.num_microstrips or self.num_microstrips < 1:
            raise ValueError("num_microstrips must be a positive integer")
        if (
            int(self.elements_per_microstrip) != self.elements_per_microstrip
            or self.elements_per_microstrip < 1
        ):
            raise ValueError("elements_per_microstrip must be a positive integer")
        if not self.element_spacing > 0:
            raise ValueError("element_spacing must be positive")
        if not self.guide_wavenumber >= 0:
            raise ValueError("guide_wavenumber must be non-negative")
        if not self.waveguide_attenuation >= 0:
            raise ValueError("waveguide_attenuation must be non-negative")
        if not self.carrier_frequency > 0:
            raise ValueError("carrier_frequency must be positive")
        if self.element_spacing >= self.wavelength:
            warnings.warn(
                f"element spacing {self.element_spacing:.4g} m is not sub-wavelength "
                f"(lambda = {self.wavelength:.4g} m)",
                stacklevel=3,
            )

    @classmethod
    def default(cls, num_microstrips, elements_per_microstrip, carrier_frequency=3.5e9):
        """Lossless geometry with ``d = lambda/5`` and ``beta_g = 1.4 k0``."""
        lam = SPEED_OF_LIGHT / carrier_frequency
        return cls(
            num_microstrips=num_microstrips,
            elements_per_microstrip=elements_per_microstrip,
            element_spacing=lam / 5,
            guide_wavenumber=1.4 * 2 * np.pi / lam,
            waveguide_attenuation=0.0,
            carrier_frequency=carrier_frequency,
        )

    @property
    def num_elements(self):
        return self.num_microstrips * self.elements_per_microstrip

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def wavenumber(self):
        """Free-space wavenumber ``k0`` at the carrier."""
        return 2 * np.pi / self.wavelength

    def element_positions(self):
        """Distance of each element from the feed, ``l * d``."""
        return np.arange(self.elements_per_microstrip) * self.element_spacing


def propagation_gains(geo):
    """Vector of ``exp(-(alpha + j beta_g) l d)`` for ``l = 0..L-1``."""
    rho = geo.element_positions()
    return np.exp(-(geo.waveguide_attenuation + 1j * geo.guide_wavenumber) * rho)


def propagation_gain(geo, l):
    """Complex propagation gain between the feed and element ``l``."""
    if int(l) != l or not 0 <= l < geo.elements_per_microstrip:
        raise ValueError(f"element index {l} out of range [0, {geo.elements_per_microstrip})")
    rho = l * geo.element_spacing
    return complex(np.exp(-(geo.waveguide_attenuation + 1j * geo.guide_wavenumber) * rho))


@dataclass(frozen=True, eq=False)
class AnalogCombiner:
    """An ``M x N`` DMA combining matrix and the tuning that produced it.

    ``weights`` is the ``M x L`` array of element weights ``q``; ``matrix`` is
    read-only.
    """

    matrix: np.ndarray
    geometry: ArrayGeometry
    set: FeasibleSet
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.matrix.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def shape(self):
        return self.matrix.shape

    def element_weights(self):
        """Weights as a nested list of :class:`ElementWeight`."""
        return [[ElementWeight(q, self.set) for q in row] for row in self.weights]


def combiner_from_array(geo, q, fset, *, check=True):
    """Assemble the combiner from an ``M x L`` complex array of weights."""
    M, L = geo.num_microstrips, geo.elements_per_microstrip
    q = np.array(q, dtype=complex)
    if q.shape != (M, L):
        raise ValueError(f"weights have shape {q.shape}, geometry needs {(M, L)}")
    if check and not np.all(is_member(q, fset)):
        raise ValueError(f"weights are not all members of {fset.name}")
    A = np.zeros((M, M * L), dtype=complex)
    blocks = q * propagation_gains(geo)[None, :]
    for m in range(M):
        A[m, m * L:(m + 1) * L] = blocks[m]
    return AnalogCombiner(A, geo, fset, q)


def assemble_combiner(geo, weights):
    """Build the :class:`AnalogCombiner` for an ``M x L`` table of :class:`ElementWeight`.

    Every weight must belong to the same feasible set.
    """
    M, L = geo.num_microstrips, geo.elements_per_microstrip
    if len(weights) != M or any(len(row) != L for row in weights):
        raise ValueError(f"weight table must be {M} x {L}")
    sets = {w.set for row in weights for w in row}
    if len(sets) != 1:
        raise ValueError(f"weights mix feasible sets: {sorted(s.name for s in sets)}")
    q = np.array([[w.value for w in row] for row in weights], dtype=complex)
    return combiner_from_array(geo, q, sets.pop(), check=False)
