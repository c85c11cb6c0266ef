"""Quick randomized invariant checks behind ``dmamimo validate``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .element import FeasibleSet, project
from .optimizer import optimize_dma
from .rates import fully_digital_sum_capacity, uplink_sum_rate
from .waveguide import ArrayGeometry, combiner_from_array

__all__ = ["Check", "run_invariant_suite"]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _check_projection(rng, n):
    phis = np.linspace(-np.pi, np.pi, 100_000, endpoint=False)
    circle = 0.5j + 0.5 * np.exp(1j * phis)
    worst = -np.inf
    for z in 2 * _crandn(rng, n):
        gap = abs(z - complex(project(z, FeasibleSet.LORENTZIAN_PHASE))) - np.abs(z - circle).min()
        worst = max(worst, gap)
    return Check("lorentzian projection optimal", worst <= 1e-8, f"worst excess {worst:.2e}")


def _check_dpi(rng, n):
    worst = -np.inf
    for _ in range(n):
        M, N, K = rng.integers(1, 6), rng.integers(6, 12), rng.integers(1, 8)
        A, H = _crandn(rng, M, N), _crandn(rng, N, K)
        snr = 10 ** rng.uniform(-2, 3)
        worst = max(worst, uplink_sum_rate(A, H, snr) - fully_digital_sum_capacity(H, snr))
    return Check("data-processing inequality", worst <= 1e-9, f"max excess {worst:.2e}")


def _check_left_invariance(rng, n):
    worst = 0.0
    for _ in range(n):
        A, H, T = _crandn(rng, 4, 10), _crandn(rng, 10, 5), _crandn(rng, 4, 4)
        r0 = uplink_sum_rate(A, H, 10.0)
        worst = max(worst, abs(uplink_sum_rate(T @ A, H, 10.0) - r0) / r0)
    return Check("left invariance", worst < 1e-9, f"max rel diff {worst:.2e}")


def _check_block_gram(rng, n):
    geo = ArrayGeometry.default(4, 6)
    ok = True
    for _ in range(n):
        q = project(_crandn(rng, 4, 6), FeasibleSet.LORENTZIAN_PHASE)
        G = combiner_from_array(geo, q, FeasibleSet.LORENTZIAN_PHASE).matrix
        G = G @ G.conj().T
        ok &= bool(np.all(G[~np.eye(4, dtype=bool)] == 0))
    return Check("combiner gram diagonal", ok, "off-diagonal entries exactly zero" if ok else "nonzero off-diagonal")


def _check_optimizer(rng, n):
    geo = ArrayGeometry.default(4, 4)
    worst = -np.inf
    for _ in range(n):
        H = _crandn(rng, 16, 4)
        _, diag = optimize_dma(H, geo, FeasibleSet.LORENTZIAN_PHASE, full_output=True)
        steps = np.diff(diag.objective)
        worst = max(worst, steps.max() if steps.size else 0.0)
    return Check("optimizer objective monotone", worst <= 1e-10, f"max increase {worst:.2e}")


def run_invariant_suite(seed=0, n=200):
    """Run every check with ``n`` random instances; returns a list of :class:`Check`."""
    rng = np.random.default_rng(seed)
    return [
        _check_projection(rng, n),
        _check_dpi(rng, n),
        _check_left_invariance(rng, n),
        _check_block_gram(rng, n),
        _check_optimizer(rng, max(1, n // 10)),
    ]
