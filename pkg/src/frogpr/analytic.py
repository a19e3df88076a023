"""Discrete analytic signals: construction and the spectral membership test.

A length-N signal z is analytic when its spectrum is supported on the
nonnegative-frequency half and the boundary coefficients are real:

    N even:  s = (s_0, s_1, ..., s_{N/2}, 0, ..., 0),  s_0 and s_{N/2} real
    N odd:   s = (s_0, s_1, ..., s_{(N-1)/2}, 0, ..., 0),  s_0 real

``make_analytic`` builds the analytic companion of a real signal by doubling
the positive frequencies (keeping the DC and, for even N, Nyquist terms), so
that Re(z) reproduces the input and Re(z), Im(z) are orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import as_signal, dft, idft

__all__ = [
    "AnalyticityReport",
    "make_analytic",
    "is_analytic",
    "random_analytic_signal",
]


@dataclass(frozen=True)
class AnalyticityReport:
    """Outcome of the spectral analyticity test.

    max_violation is the worst offender: the largest modulus among
    coefficients required to vanish, or the largest |imag| among coefficients
    required to be real, whichever is bigger.
    """

    is_analytic: bool
    max_violation: float


def _spectral_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (required-zero, required-real) for length n."""
    if n % 2 == 0:
        zero = np.arange(n // 2 + 1, n)
        real = np.array([0, n // 2])
    else:
        zero = np.arange((n - 1) // 2 + 1, n)
        real = np.array([0])
    return zero, real


def make_analytic(x) -> np.ndarray:
    """Analytic companion of a real signal (doubled positive frequencies)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError(f"expected a real 1-D signal of length >= 2, got shape {x.shape}")
    n = x.size
    gain = np.zeros(n)
    if n % 2 == 0:
        gain[0] = 1.0
        gain[1 : n // 2] = 2.0
        gain[n // 2] = 1.0
    else:
        gain[0] = 1.0
        gain[1 : (n - 1) // 2 + 1] = 2.0
    return idft(dft(x) * gain)


def is_analytic(s, tol: float | None = None) -> AnalyticityReport:
    """Test spectrum s against the analytic support/reality pattern.

    tol defaults to 1e-9 relative to the largest coefficient modulus; pass an
    absolute tolerance to override.
    """
    s = as_signal(s)
    if tol is None:
        tol = 1e-9 * float(np.abs(s).max())
    elif tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    zero_idx, real_idx = _spectral_masks(s.size)
    zero_viol = float(np.abs(s[zero_idx]).max()) if zero_idx.size else 0.0
    real_viol = float(np.abs(s[real_idx].imag).max())
    worst = max(zero_viol, real_viol)
    return AnalyticityReport(is_analytic=bool(worst <= tol), max_violation=worst)


def random_analytic_signal(n: int, rng: np.random.Generator, floor: float = 1e-6) -> np.ndarray:
    """Generic analytic signal: analytic companion of a standard-normal draw.

    Draws are rejected (probability ~0) while |s_0| or |s_1| falls below
    floor * max|s_k|, so the nonvanishing conditions the recovery stages
    divide by hold numerically.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    while True:
        z = make_analytic(rng.standard_normal(n))
        s = dft(z)
        if min(abs(s[0]), abs(s[1])) >= floor * np.abs(s).max():
            return z
