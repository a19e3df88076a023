"""DFT conventions and roots of unity.

Conventions used throughout the library:

    forward   s_k = sum_{n=0}^{N-1} z_n exp(-2i pi k n / N)      (unnormalized)
    inverse   z_n = (1/N) sum_{k=0}^{N-1} s_k exp(+2i pi k n / N)

so ``idft(dft(z)) == z`` and Parseval reads ``sum |s_k|^2 == N sum |z_n|^2``.
Signals and spectra are 1-D complex ndarrays of length N >= 2, with indices
understood N-periodically wherever a shifted index appears.
"""

from __future__ import annotations

import numpy as np

__all__ = ["as_signal", "dft", "idft", "root_of_unity"]


def as_signal(values) -> np.ndarray:
    """Coerce to a 1-D complex128 array of length >= 2 with finite entries."""
    z = np.asarray(values, dtype=np.complex128)
    if z.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {z.shape}")
    if z.size < 2:
        raise ValueError(f"signal length must be >= 2, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise ValueError("signal contains non-finite values")
    return z


def dft(z) -> np.ndarray:
    """Unnormalized forward DFT, s_k = sum_n z_n e^{-2i pi kn/N}."""
    return np.fft.fft(as_signal(z))


def idft(s) -> np.ndarray:
    """Inverse DFT with the 1/N factor, z_n = (1/N) sum_k s_k e^{2i pi kn/N}."""
    return np.fft.ifft(as_signal(s))


def root_of_unity(r: int, m: int) -> complex:
    """e^{2i pi m / r}, the m-th power of the primitive r-th root of unity.

    The exponent is reduced mod r before evaluating, so large |m| loses no
    accuracy; the result has unit modulus to ~1e-16.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return complex(np.exp(2j * np.pi * ((m % r) / r)))
