"""Achievable uplink sum-rates behind an analog front-end.

Noise is white with unit variance at the ``N`` receiving elements and is
filtered by the front-end ``A`` along with the signal, so the rate of the
multiple-access channel seen by the ``M`` ports is

    log2 det(I + snr (A A^H)^-1 A H H^H A^H).

It is evaluated by whitening with the Cholesky factor ``A A^H = C C^H``:
with ``B = C^-1 A H`` the rate is ``sum log2(1 + snr s_i^2)`` over the
singular values ``s_i`` of ``B``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.stats

from .errors import SingularFrontEndError

__all__ = [
    "COND_LIMIT",
    "RateResult",
    "whitened_singular_values",
    "rate_from_singular_values",
    "uplink_sum_rate",
    "fully_digital_sum_capacity",
    "digital_subarray_capacity",
    "summarize_rates",
]

COND_LIMIT = 1e12


def _as_matrix(x):
    return np.asarray(getattr(x, "matrix", x))


def _check_snr(snr):
    snr = np.asarray(snr, dtype=float)
    if np.any(~np.isfinite(snr)) or np.any(snr < 0):
        raise ValueError("snr must be finite and non-negative")
    return snr


def _offending_rows(G, eigvals, eigvecs):
    weak = eigvals <= eigvals[-1] / COND_LIMIT
    rows = set()
    for v in eigvecs[:, weak].T:
        mag = np.abs(v)
        rows.update(np.flatnonzero(mag >= 0.1 * mag.max()).tolist())
    return sorted(rows)


def whitened_singular_values(A, H):
    """Singular values of the noise-whitened effective channel ``C^-1 A H``.

    Raises :class:`SingularFrontEndError` when ``cond(A A^H)`` exceeds
    ``COND_LIMIT``.
    """
    A = _as_matrix(A)
    H = _as_matrix(H)
    if A.ndim != 2 or H.ndim != 2 or A.shape[1] != H.shape[0]:
        raise ValueError(f"incompatible shapes A{A.shape}, H{H.shape}")
    G = A @ A.conj().T
    w, V = np.linalg.eigh(G)
    if not w[-1] > 0 or w[0] <= w[-1] / COND_LIMIT:
        cond = np.inf if w[0] <= 0 else w[-1] / w[0]
        raise SingularFrontEndError(_offending_rows(G, w, V), cond)
    C = np.linalg.cholesky(G)
    B = scipy.linalg.solve_triangular(C, A @ H, lower=True)
    return np.linalg.svd(B, compute_uv=False)


def rate_from_singular_values(s, snr):
    """``sum log2(1 + snr s^2)``; ``snr`` may be an array of linear SNRs."""
    snr = _check_snr(snr)
    s2 = np.asarray(s, dtype=float) ** 2
    out = np.log2(1.0 + np.multiply.outer(snr, s2)).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def uplink_sum_rate(A, H, snr):
    """Sum-rate in bps/Hz of the uplink MAC observed through front-end ``A``.

    Parameters
    ----------
    A : AnalogCombiner or array_like, shape (M, N)
        Analog front-end; must have full row rank.
    H : ChannelRealization or array_like, shape (N, K)
        Uplink channel.
    snr : float
        Linear per-user SNR (>= 0).
    """
    snr = _check_snr(snr)
    return rate_from_singular_values(whitened_singular_values(A, H), snr)


def fully_digital_sum_capacity(H, snr):
    """``log2 det(I_N + snr H H^H)``: every element has its own RF chain."""
    snr = _check_snr(snr)
    H = _as_matrix(H)
    return rate_from_singular_values(np.linalg.svd(H, compute_uv=False), snr)


def digital_subarray_capacity(H, M, snr):
    """Sum-capacity of an ``M``-antenna digital array (first ``M`` rows of ``H``)."""
    H = _as_matrix(H)
    if int(M) != M or not 1 <= M <= H.shape[0]:
        raise ValueError(f"M must be an integer in [1, {H.shape[0]}]")
    return fully_digital_sum_capacity(H[: int(M)], snr)


@dataclass(frozen=True)
class RateResult:
    """Monte Carlo sum-rate statistics of one architecture at one SNR."""

    architecture: str
    snr_db: float
    per_trial_rates: tuple
    mean_rate: float
    ci95_halfwidth: float

    @property
    def trials(self):
        return len(self.per_trial_rates)


def summarize_rates(architecture, snr_db, rates):
    """Mean and Student-t 95% confidence half-width of per-trial rates."""
    rates = np.asarray(rates, dtype=float)
    if rates.ndim != 1 or rates.size == 0:
        raise ValueError("need a non-empty 1-D sequence of rates")
    if np.any(rates < 0):
        raise ValueError("rates must be non-negative")
    n = rates.size
    mean = float(rates.mean())
    if n > 1:
        ci = float(scipy.stats.t.ppf(0.975, n - 1) * rates.std(ddof=1) / np.sqrt(n))
    else:
        ci = float("nan")
    return RateResult(architecture, float(snr_db), tuple(rates.tolist()), mean, ci)
