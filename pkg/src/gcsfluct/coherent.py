"""Coherent states of the 1-D oscillator in a truncated Fock basis (hbar = omega = 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffError, DomainError

MOMENT_TOL = 1e-10


@dataclass(frozen=True)
class FockVector:
    coeffs: np.ndarray

    @property
    def cutoff(self) -> int:
        return self.coeffs.size - 1

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)


def recommended_cutoff(z: complex) -> int:
    a = abs(z)
    return math.ceil(a * a + 6 * a + 10)


def tail_bound(z: complex, cutoff: int) -> float:
    """Upper bound on the probability weight above level `cutoff`.

    The leading Poisson term e^{-x} x^{N+1}/(N+1)! with x = |z|^2, times the
    geometric-series factor (N+2)/(N+2-x) that bounds the rest of the tail.
    """
    x = abs(z) ** 2
    if x == 0.0:
        return 0.0
    m = cutoff + 1
    if x >= m + 1:
        return 1.0
    lead = math.exp(-x + m * math.log(x) - math.lgamma(m + 1))
    return min(1.0, lead * (m + 1) / (m + 1 - x))


def coherent_state_vector(z: complex, cutoff: int, tol: float | None = None) -> FockVector:
    """Fock amplitudes c_n = e^{-|z|^2/2} z^n / sqrt(n!), n = 0..cutoff.

    With `tol` given, raises CutoffError when the discarded tail may exceed it.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be non-negative")
    if not np.isfinite(complex(z)):
        raise DomainError("amplitude must be finite")
    if tol is not None and tail_bound(z, cutoff) > tol:
        raise CutoffError(
            f"cutoff {cutoff} too small for |z|={abs(z):.4g}: tail bound "
            f"{tail_bound(z, cutoff):.3g} > {tol:.3g}; try {recommended_cutoff(z)}"
        )
    c = np.empty(cutoff + 1, dtype=complex)
    c[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(cutoff):
        c[n + 1] = c[n] * z / math.sqrt(n + 1)
    c.setflags(write=False)
    return FockVector(c)


def annihilation_matrix(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1)


def eigen_residual(z: complex, state: FockVector) -> float:
    """|| (A - z) c || in the truncated space."""
    a = annihilation_matrix(state.cutoff)
    return float(np.linalg.norm(a @ state.coeffs - z * state.coeffs))


def oscillator_moments(z: complex, cutoff: int, tol: float = MOMENT_TOL) -> tuple[float, float]:
    """(<H>, Delta H) for H = diag(n + 1/2) in the normalised truncated state."""
    state = coherent_state_vector(z, cutoff, tol=tol)
    p = np.abs(state.coeffs) ** 2
    p /= p.sum()
    levels = np.arange(cutoff + 1) + 0.5
    mean = float(p @ levels)
    var = float(p @ (levels - mean) ** 2)
    return mean, math.sqrt(var)


def relative_fluctuation(z: complex) -> float:
    """Delta H / <H> = |z| / (|z|^2 + 1/2)."""
    a = abs(z)
    if a == 0:
        raise DomainError("relative fluctuation is undefined at z = 0")
    return a / (a * a + 0.5)


def kahler_potential(z: complex) -> float:
    return abs(z) ** 2
