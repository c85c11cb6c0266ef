"""Front-end configuration for rate maximization.

The DMA is configured by matching the rate-optimal rank-``M`` combiner ``B``
up to an invertible digital transform: minimize ``||B - T A||_F`` jointly over
``T`` (``M x M``) and the structured ``A``. The rate is invariant to
``A -> T A``, and for fixed ``T`` the objective separates over elements, each
element reducing to a projection onto its feasible set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .element import FeasibleSet, project
from .errors import NumericalError, SingularFrontEndError
from .rates import fully_digital_sum_capacity, uplink_sum_rate
from .waveguide import combiner_from_array, propagation_gains

__all__ = [
    "OptimizerOptions",
    "DmaDiagnostics",
    "unconstrained_combiner",
    "optimize_dma",
    "optimize_phase_shifter_hybrid",
]

log = logging.getLogger(__name__)

MONOTONE_TOL = 1e-10


@dataclass(frozen=True)
class OptimizerOptions:
    """Iteration budget and optional rate-ascent refinement.

    ``refine_grid = 0`` disables refinement. A positive value enables a
    coordinate ascent on the sum-rate at linear SNR ``refine_snr`` after the
    alternating minimization (DMA) or the phase projection (hybrid), trying
    ``refine_grid`` phases per element; binary elements try both states.
    """

    max_iters: int = 100
    rel_tol: float = 1e-6
    refine_grid: int = 0
    refine_snr: float = 1.0

    def __post_init__(self):
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if int(self.refine_grid) != self.refine_grid or self.refine_grid < 0:
            raise ValueError("refine_grid must be a non-negative integer")
        if not self.refine_snr >= 0:
            raise ValueError("refine_snr must be non-negative")


@dataclass
class DmaDiagnostics:
    """Trace of one :func:`optimize_dma` run.

    ``objective`` holds ``||B - T A||_F`` after every half-step, starting with
    the value at initialization. ``revived`` lists ``(iteration, microstrip)``
    pairs where an all-zero row had to be forced back on; the half-step
    containing a revival is exempt from the monotonicity guarantee.
    ``refined_rates`` is the sum-rate after each refinement sweep (empty when
    refinement is off).
    """

    objective: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    revived: list = field(default_factory=list)
    refined_rates: list = field(default_factory=list)


def unconstrained_combiner(H, M):
    """Rows are the conjugated top-``M`` left singular vectors of ``H``."""
    H = np.asarray(getattr(H, "matrix", H))
    N = H.shape[0]
    if int(M) != M or not 1 <= M <= N:
        raise ValueError(f"M must be an integer in [1, {N}]")
    U, _, _ = np.linalg.svd(H, full_matrices=True)
    return U[:, : int(M)].conj().T


def _digital_transform(B, A_diag_gram, A):
    # A A^H is diagonal for block-sparse A
    return (B @ A.conj().T) / A_diag_gram[None, :]


def _initial_weight(fset):
    # every element radiating: q = j on the Lorentzian circle, "on" for binary
    if fset is FeasibleSet.BINARY_AMPLITUDE:
        return 1.0 + 0j
    return complex(project(1j, fset))


def _revive_point(fset, z):
    if fset is FeasibleSet.BINARY_AMPLITUDE:
        return 1.0 + 0j
    if fset is FeasibleSet.LORENTZIAN_PHASE:
        return 1j
    if fset is FeasibleSet.UNIT_MODULUS:
        return complex(project(z, fset))
    return z if z != 0 else 1.0 + 0j


def optimize_dma(H, geo, fset, opts=None, *, full_output=False):
    """Configure DMA element weights for uplink sum-rate.

    Starts with every element radiating and alternates a least-squares
    update of ``T`` with per-element projections until the relative decrease
    of ``||B - T A||_F`` drops below ``opts.rel_tol``.

    Parameters
    ----------
    H : array_like or ChannelRealization, shape (N, K)
    geo : ArrayGeometry
    fset : FeasibleSet
        Constraint on the element weights.
    opts : OptimizerOptions, optional
    full_output : bool
        Also return a :class:`DmaDiagnostics`.

    Returns
    -------
    AnalogCombiner, or (AnalogCombiner, DmaDiagnostics) if ``full_output``.
    """
    opts = opts or OptimizerOptions()
    H = np.asarray(getattr(H, "matrix", H))
    M, L = geo.num_microstrips, geo.elements_per_microstrip
    N = geo.num_elements
    if H.shape[0] != N:
        raise ValueError(f"channel has {H.shape[0]} rows, geometry has {N} elements")

    B = unconstrained_combiner(H, M)
    g = propagation_gains(geo)
    g2 = np.abs(g) ** 2
    rows = np.arange(M)

    def structured(q):
        # M x N block-sparse matrix with entries q[m, l] g[l]
        A = np.zeros((M, N), dtype=complex)
        A.reshape(M, M, L)[rows, rows] = q * g
        return A

    def objective(T, A):
        return float(np.linalg.norm(B - T @ A))

    diag = DmaDiagnostics()
    q = np.full((M, L), _initial_weight(fset), dtype=complex)
    A = structured(q)
    T = _digital_transform(B, (np.abs(q) ** 2 * g2).sum(axis=1), A)
    prev = objective(T, A)
    diag.objective.append(prev)

    for it in range(1, opts.max_iters + 1):
        # element step: per-element closed-form minimizer, then projection
        C = (T.conj().T @ B).reshape(M, M, L)[rows, rows]
        tnorm2 = np.sum(np.abs(T) ** 2, axis=0)
        live = tnorm2 > 0
        q_unc = np.where(live[:, None], C / (np.where(live, tnorm2, 1.0)[:, None] * g[None, :]), q)
        q_new = project(q_unc, fset)
        q_new[~live] = q[~live]
        dead = np.flatnonzero(np.all(q_new == 0, axis=1))
        for m in dead:
            l = int(np.argmax(np.abs(q_unc[m])))
            q_new[m, l] = _revive_point(fset, q_unc[m, l])
            diag.revived.append((it, int(m)))
            log.info("optimize_dma: microstrip %d projected to zero at iteration %d; revived element %d", m, it, l)
        q = q_new
        A = structured(q)
        cur = objective(T, A)
        if dead.size == 0 and cur > diag.objective[-1] * (1 + MONOTONE_TOL) + MONOTONE_TOL:
            raise NumericalError(f"objective increased in element step ({diag.objective[-1]} -> {cur})")
        diag.objective.append(cur)

        # digital step: least-squares T for fixed A
        T = _digital_transform(B, (np.abs(q) ** 2 * g2).sum(axis=1), A)
        cur = objective(T, A)
        if cur > diag.objective[-1] * (1 + MONOTONE_TOL) + MONOTONE_TOL:
            raise NumericalError(f"objective increased in digital step ({diag.objective[-1]} -> {cur})")
        diag.objective.append(cur)

        diag.iterations = it
        if prev - cur <= opts.rel_tol * prev:
            diag.converged = True
            break
        prev = cur

    if opts.refine_grid > 0:
        q = _refine_elements(H, geo, q, fset, opts, diag)

    combiner = combiner_from_array(geo, q, fset, check=False)
    if full_output:
        return combiner, diag
    return combiner


def _candidates(fset, q, grid):
    ring = np.exp(2j * np.pi * np.arange(grid) / grid)
    if fset is FeasibleSet.BINARY_AMPLITUDE:
        return np.array([0, 1], dtype=complex)
    if fset is FeasibleSet.LORENTZIAN_PHASE:
        return (1j + ring) / 2
    if fset is FeasibleSet.UNIT_MODULUS:
        return ring
    return abs(q) * ring


def _refine_elements(H, geo, q, fset, opts, diag):
    """Coordinate ascent on the actual sum-rate, one element at a time.

    Candidates that leave a microstrip singular are skipped. Sweeps repeat
    until one makes no improvement or ``opts.max_iters`` sweeps have run.
    """
    q = q.copy()
    snr = opts.refine_snr
    best = uplink_sum_rate(combiner_from_array(geo, q, fset, check=False), H, snr)
    for _ in range(opts.max_iters):
        improved = False
        for m in range(q.shape[0]):
            for l in range(q.shape[1]):
                keep = q[m, l]
                for c in _candidates(fset, keep, opts.refine_grid):
                    if c == keep:
                        continue
                    q[m, l] = c
                    try:
                        r = uplink_sum_rate(combiner_from_array(geo, q, fset, check=False), H, snr)
                    except SingularFrontEndError:
                        continue
                    if r > best * (1 + 1e-12):
                        best, keep, improved = r, c, True
                q[m, l] = keep
        diag.refined_rates.append(best)
        if not improved:
            break
    if best > fully_digital_sum_capacity(H, snr) * (1 + 1e-9) + 1e-9:
        raise NumericalError("refined DMA rate exceeds fully digital capacity")
    return q


def optimize_phase_shifter_hybrid(H, M, opts=None):
    """Fully connected phase-shifter front-end, ``A = exp(j angle(B))``.

    With ``opts.refine_grid > 0`` each entry's phase is then swept over that
    many uniformly spaced values, keeping a new phase only when it raises the
    sum-rate at ``opts.refine_snr``. One sweep over all entries is made.
    """
    opts = opts or OptimizerOptions()
    H = np.asarray(getattr(H, "matrix", H))
    B = unconstrained_combiner(H, M)
    A = np.exp(1j * np.angle(B))
    if opts.refine_grid == 0:
        return A

    phases = np.exp(2j * np.pi * np.arange(opts.refine_grid) / opts.refine_grid)
    best = uplink_sum_rate(A, H, opts.refine_snr)
    for m in range(A.shape[0]):
        for n in range(A.shape[1]):
            keep = A[m, n]
            for p in phases:
                A[m, n] = p
                r = uplink_sum_rate(A, H, opts.refine_snr)
                if r > best:
                    best, keep = r, p
            A[m, n] = keep
    cap = fully_digital_sum_capacity(H, opts.refine_snr)
    if best > cap * (1 + 1e-9) + 1e-9:
        raise NumericalError("refined hybrid rate exceeds fully digital capacity")
    return A
