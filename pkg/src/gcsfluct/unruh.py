"""Accelerated frames, the Unruh phase chain, and the B-field line integral.

The wavefunction is tracked only through its global phase factor.  Time may
be complex (the de Broglie thermal time is purely imaginary); phase and
exponent functions accept complex t and return complex values in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .gcs import TwoForm, interior_product

COMPONENT = "component"
MATRIX = "matrix"
DERIV_TOL = 1e-6


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    c: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        if min(self.hbar, self.c, self.k_B) <= 0:
            raise DomainError("physical constants must be positive")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        return cls()

    @classmethod
    def si(cls) -> "PhysicalConstants":
        return cls(hbar=1.054571817e-34, c=299792458.0, k_B=1.380649e-23)


NATURAL = PhysicalConstants()


@dataclass(frozen=True)
class FrameSpec:
    alpha: float
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError("mass must be positive")
        if not math.isfinite(self.alpha):
            raise DomainError("acceleration must be finite")


@dataclass(frozen=True)
class TrajectorySpec:
    """Phase-space path (x(tau), p(tau)) with its time derivatives."""

    x_of_t: Callable[[float], float]
    p_of_t: Callable[[float], float]
    dx_dt: Callable[[float], float]
    dp_dt: Callable[[float], float]

    @classmethod
    def accelerated(cls, fs: FrameSpec) -> "TrajectorySpec":
        """Particle at rest at the accelerated origin: x = alpha t^2/2, p = m alpha t."""
        a, m = fs.alpha, fs.m
        return cls(
            x_of_t=lambda t: 0.5 * a * t * t,
            p_of_t=lambda t: m * a * t,
            dx_dt=lambda t: a * t,
            dp_dt=lambda t: m * a + 0.0 * t,
        )

    def check_derivatives(self, t_end: float, samples: int = 9, tol: float = DERIV_TOL):
        """Compare the derivative fields against central differences on [0, t_end]."""
        span = max(abs(t_end), 1.0)
        h = 1e-4 * span
        for tau in np.linspace(0.0, t_end, samples):
            for path, deriv, name in ((self.x_of_t, self.dx_dt, "x"), (self.p_of_t, self.dp_dt, "p")):
                fd = (path(tau + h) - path(tau - h)) / (2 * h)
                d = deriv(tau)
                if abs(fd - d) > tol * (1 + abs(d)):
                    raise DomainError(
                        f"trajectory d{name}/dt inconsistent at tau={tau:.6g}: "
                        f"given {d:.10g}, finite difference {fd:.10g}"
                    )


@dataclass(frozen=True)
class BFieldSpec:
    """Coefficient B(x, p) of the 2-form B(x, p) dx ^ dp."""

    coefficient: Callable[[float, float], float] = field(default=lambda x, p: 2.0 / 3.0)

    @classmethod
    def constant(cls, value: float) -> "BFieldSpec":
        value = float(value)
        return cls(lambda x, p: value)


def accelerated_coords(xp: float, t: float, fs: FrameSpec) -> float:
    """Inertial x of a point with accelerated-frame coordinate x' at time t."""
    return xp + 0.5 * fs.alpha * t * t


def transformed_hamiltonian(H: float, p_x: float, t: float, fs: FrameSpec) -> tuple[float, float]:
    """(H', p') = (H - p_x alpha t + m alpha^2 t^2 / 2, p_x - m alpha t)."""
    a, m = fs.alpha, fs.m
    return H - p_x * a * t + 0.5 * m * a * a * t * t, p_x - m * a * t


def unruh_phase(fs: FrameSpec, t, pc: PhysicalConstants = NATURAL):
    """phi = m alpha^2 t^3 / (3 hbar); psi' = exp(i phi) psi."""
    return fs.m * fs.alpha**2 * t**3 / (3.0 * pc.hbar)


def general_phase(fs: FrameSpec, p_x: float, t, pc: PhysicalConstants = NATURAL):
    """Phase before substituting p_x = m alpha t: -(m a^2 t^3/6 - p_x a t^2/2)/hbar."""
    a = fs.alpha
    return -(fs.m * a * a * t**3 / 6.0 - 0.5 * p_x * a * t**2) / pc.hbar


def debroglie_time(T: float, pc: PhysicalConstants = NATURAL) -> complex:
    """Solve -i/t = k_B T / hbar for t."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    return -1j * pc.hbar / (pc.k_B * T)


def unruh_temperature(alpha: float, pc: PhysicalConstants = NATURAL) -> float:
    if alpha < 0:
        raise DomainError("acceleration must be non-negative")
    return pc.hbar * alpha / (2 * math.pi * pc.c * pc.k_B)


def acceleration_of(T: float, pc: PhysicalConstants = NATURAL) -> float:
    if T < 0:
        raise DomainError("temperature must be non-negative")
    return 2 * math.pi * pc.c * pc.k_B * T / pc.hbar


def thermal_exponent(m: float, T: float, pc: PhysicalConstants = NATURAL) -> float:
    """E = -(4 pi^2 / 3) m c^2 / (k_B T); the Boltzmann-like factor is exp(E)."""
    if not T > 0:
        raise DomainError("temperature must be positive")
    if not m > 0:
        raise DomainError("mass must be positive")
    return -(4 * math.pi**2 / 3) * m * pc.c**2 / (pc.k_B * T)


def imaginary_time_exponent(fs: FrameSpec, T: float, pc: PhysicalConstants = NATURAL) -> complex:
    """i * phi evaluated at the de Broglie time t = -i hbar / (k_B T)."""
    return complex(1j * unruh_phase(fs, debroglie_time(T, pc), pc))


def thermal_chain(m: float, T: float, pc: PhysicalConstants = NATURAL) -> complex:
    """The phase exponent with t = -i hbar/(k_B T) and alpha = 2 pi c k_B T / hbar.

    Computed in complex arithmetic; the result should be real and equal to
    `thermal_exponent(m, T, pc)`.
    """
    return imaginary_time_exponent(FrameSpec(alpha=acceleration_of(T, pc), m=m), T, pc)


def _simpson(y, h):
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def delta_xi_integrand(b: BFieldSpec, traj: TrajectorySpec, tau: float,
                       convention: str = COMPONENT) -> float:
    """Pull-back of i_X B to the trajectory, X = position vector (x, p).

    COMPONENT: x B dp/dtau + p B dx/dtau (both terms positive).
    MATRIX: the antisymmetric contraction B_ij X^j of the gcs module paired
    with the velocity (dx/dtau, dp/dtau).
    """
    x, p = traj.x_of_t(tau), traj.p_of_t(tau)
    coef = b.coefficient(x, p)
    if not math.isfinite(coef):
        raise DomainError(f"B-field coefficient not finite at tau={tau:.6g}")
    dx, dp = traj.dx_dt(tau), traj.dp_dt(tau)
    if convention == COMPONENT:
        return x * coef * dp + p * coef * dx
    if convention == MATRIX:
        form = interior_product([x, p], TwoForm([[0.0, coef], [-coef, 0.0]]))
        return float(form @ [dx, dp])
    raise DomainError(f"unknown contraction convention {convention!r}")


def delta_xi(b: BFieldSpec, t: float, fs: FrameSpec, traj: TrajectorySpec | None = None,
             steps: int = 64, convention: str = COMPONENT) -> float:
    """Line integral of i_X B along the trajectory over [0, t] (composite Simpson).

    steps must be a power of two >= 16.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    if steps < 16 or steps & (steps - 1):
        raise DomainError("steps must be a power of two >= 16")
    if traj is None:
        traj = TrajectorySpec.accelerated(fs)
    if t == 0:
        return 0.0
    traj.check_derivatives(t)
    taus = np.linspace(0.0, t, steps + 1)
    y = np.array([delta_xi_integrand(b, traj, tau, convention) for tau in taus])
    return float(_simpson(y, t / steps))


def delta_xi_constant(B: float, fs: FrameSpec, t: float) -> float:
    """Closed form for constant B on the default trajectory: B m alpha^2 t^3 / 2."""
    return 0.5 * B * fs.m * fs.alpha**2 * t**3


def transform_wavefunction_phase(delta_xi_value: float, pc: PhysicalConstants = NATURAL) -> complex:
    """exp(i Delta xi / hbar)."""
    return complex(np.exp(1j * delta_xi_value / pc.hbar))
