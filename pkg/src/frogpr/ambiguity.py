"""Symmetry transforms that FROG intensities cannot distinguish.

For even-length analytic signals the ambiguity group is finite: sign flips
{+1, -1} x integer cyclic translations Z_N x {identity, reflection}, i.e.
4N elements. Every group word reduces to the normal form

    g(z) = rotation_sign * translate(reflect^b(z), l)

because reflect o translate_l = translate_{-l} o reflect and the sign
commutes with everything. ``equivalent_up_to_group`` searches that normal
form exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .spectral import as_signal, dft, idft

__all__ = [
    "GroupElement",
    "EquivalenceReport",
    "rotate",
    "translate",
    "reflect",
    "apply_element",
    "group_elements",
    "equivalent_up_to_group",
]


@dataclass(frozen=True)
class GroupElement:
    """One ambiguity-group element in normal form (reflect, then shift, then sign)."""

    rotation_sign: int  # +1 or -1
    translation: int  # integer shift in [0, N)
    reflected: bool

    def sort_key(self) -> tuple[int, int, bool]:
        return (self.rotation_sign, self.translation, self.reflected)


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    best_element: GroupElement
    residual: float


def rotate(z, theta: float) -> np.ndarray:
    """Multiply the whole signal by the unit phase e^{i theta}."""
    return as_signal(z) * np.exp(1j * theta)


def translate(z, gamma: float) -> np.ndarray:
    """Shift by gamma samples, defined spectrally for arbitrary real gamma.

    Coefficient k is multiplied by e^{2i pi k gamma / N}; for integer gamma
    this is the exact cyclic shift z[n] -> z[n + gamma].
    """
    z = as_signal(z)
    n = z.size
    phases = np.exp(2j * np.pi * np.arange(n) * (gamma / n))
    return idft(dft(z) * phases)


def reflect(z) -> np.ndarray:
    """Time-reversed conjugate, result[n] = conj(z[(-n) mod N]).

    Spectrally this conjugates every DFT coefficient in place.
    """
    z = as_signal(z)
    return np.conj(np.roll(z[::-1], 1))


def apply_element(g: GroupElement, z) -> np.ndarray:
    """Apply a group element in its normal form (exact: no FFT round trip)."""
    z = as_signal(z)
    if g.reflected:
        z = reflect(z)
    # integer translation z[n] -> z[n + l] is a cyclic roll by -l
    return g.rotation_sign * np.roll(z, -g.translation)


def group_elements(n: int) -> Iterator[GroupElement]:
    """All 4N elements in lexicographic (rotation_sign, translation, reflected) order."""
    for sign in (-1, 1):
        for shift in range(n):
            for refl in (False, True):
                yield GroupElement(sign, shift, refl)


def equivalent_up_to_group(z, w, tol: float = 1e-6) -> EquivalenceReport:
    """Minimize ||g(z) - w|| / max(||z||, ||w||) over the 4N-element group.

    Ties in the residual are broken by the elements' lexicographic order, so
    the reported minimizer is deterministic. Two zero signals are equivalent
    (residual 0); a zero signal never matches a nonzero one.
    """
    z = as_signal(z)
    w = as_signal(w)
    if z.size != w.size:
        raise ValueError(f"length mismatch: {z.size} vs {w.size}")
    scale = max(float(np.linalg.norm(z)), float(np.linalg.norm(w)))
    if scale == 0.0:
        return EquivalenceReport(True, GroupElement(-1, 0, False), 0.0)
    best: GroupElement | None = None
    best_res = np.inf
    for g in group_elements(z.size):
        res = float(np.linalg.norm(apply_element(g, z) - w)) / scale
        if res < best_res:
            best, best_res = g, res
    assert best is not None
    return EquivalenceReport(bool(best_res <= tol), best, best_res)
