"""Gaussian thermodynamic fluctuations and the three average functionals.

Conventions: k_B defaults to 1.  Averages integrate over fluctuation
coordinates with the metric (or form) frozen at the equilibrium point, so
the sqrt(g), sqrt(h) and Liouville prefactors are constants and cancel
between numerator and normalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .gcs import SymplecticForm

GRID = "tensor-grid"
MONTE_CARLO = "monte-carlo"
MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class ThermoState:
    T: float
    V: float
    C_V: float
    dPdV_T: float
    P: float = float("nan")
    S: float = float("nan")
    k_B: float = 1.0

    def __post_init__(self):
        if not (self.T > 0 and self.V > 0):
            raise DomainError("T and V must be positive")
        if not self.C_V > 0:
            raise DomainError(f"thermodynamic inequality C_V > 0 violated (C_V={self.C_V})")
        if not self.dPdV_T < 0:
            raise DomainError(
                f"thermodynamic inequality (dP/dV)_T < 0 violated (dPdV_T={self.dPdV_T})"
            )
        if not self.k_B > 0:
            raise DomainError("k_B must be positive")


@dataclass(frozen=True)
class IdealGasRefs:
    S0: float = 1.0
    P0: float = 1.0
    V0: float = 1.0
    T0: float = 1.0

    def __post_init__(self):
        if min(self.S0, self.P0, self.V0, self.T0) <= 0:
            raise DomainError("ideal-gas reference values must be positive")


@dataclass(frozen=True)
class FluctuationMetric:
    g_TT: float
    g_VV: float

    def __post_init__(self):
        if not (self.g_TT > 0 and self.g_VV > 0):
            raise DomainError(f"metric not positive definite: ({self.g_TT}, {self.g_VV})")

    @property
    def det(self) -> float:
        return self.g_TT * self.g_VV


class DarbouxPoint(NamedTuple):
    p1: float
    q1: float
    p2: float
    q2: float


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = GRID
    points: int = 201
    truncation: float = 8.0
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in (GRID, MONTE_CARLO):
            raise DomainError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points < 2:
            raise DomainError("quadrature needs at least 2 points/samples")
        if not self.truncation > 0:
            raise DomainError("truncation must be positive")


class Estimate(NamedTuple):
    """An average and its standard error (0 for deterministic quadrature)."""

    value: float
    stderr: float = 0.0


@dataclass(frozen=True)
class Rectangle:
    """Oriented coordinate rectangle in Darboux plane 1 or 2."""

    plane: int
    dp: float
    dq: float
    orientation: int = 1


# -- probabilities and metric ----------------------------------------------

def fluctuation_metric(state: ThermoState) -> FluctuationMetric:
    return FluctuationMetric(
        g_TT=state.C_V / (2 * state.k_B * state.T**2),
        g_VV=-state.dPdV_T / (2 * state.k_B * state.T),
    )


def gaussian_fluct_logprob_tv(state: ThermoState, dT: float, dV: float) -> float:
    g = fluctuation_metric(state)
    return -(g.g_TT * dT**2 + g.g_VV * dV**2)


def gaussian_fluct_prob_tv(state: ThermoState, dT: float, dV: float) -> float:
    """W/W0 for a (dT, dV) fluctuation in the Gaussian approximation."""
    return math.exp(gaussian_fluct_logprob_tv(state, dT, dV))


def to_darboux(P: float, V: float, T: float, S: float, refs: IdealGasRefs) -> DarbouxPoint:
    if min(P, V, T, S) <= 0:
        raise DomainError("P, V, T, S must be positive")
    return DarbouxPoint(
        -math.log(P / refs.P0), math.log(V / refs.V0), math.log(T / refs.T0), S / refs.S0
    )


def darboux_deltas(P, V, T, S, dP, dV, dT, dS, refs: IdealGasRefs) -> DarbouxPoint:
    """Exact change of Darboux coordinates under a finite fluctuation."""
    a = to_darboux(P, V, T, S, refs)
    b = to_darboux(P + dP, V + dV, T + dT, S + dS, refs)
    return DarbouxPoint(*(y - x for x, y in zip(a, b)))


def fluct_prob_physical(P, V, T, dP, dV, dT, dS, refs: IdealGasRefs,
                        k_B: float = 1.0, rtol: float = 1e-9) -> float:
    """W/W0 for an ideal gas PV = S0 T in terms of physical fluctuations."""
    if min(P, V, T) <= 0:
        raise DomainError("P, V, T must be positive")
    if abs(P * V - refs.S0 * T) > rtol * abs(refs.S0 * T):
        raise DomainError(f"state violates PV = S0 T (PV={P * V}, S0 T={refs.S0 * T})")
    expo = -(-refs.S0 * dP * dV / (P * V) + dT * dS / T) / (2 * k_B)
    return math.exp(expo)


def fluct_prob_darboux(dp1, dq1, dp2, dq2, S0: float = 1.0, k_B: float = 1.0) -> float:
    return math.exp(-(S0 / (2 * k_B)) * (dp1 * dq1 + dp2 * dq2))


def symplectic_area(patches: Sequence[Rectangle]) -> float:
    """Signed area sum of dp ^ dq over rectangles in the two Darboux planes."""
    total = 0.0
    for r in patches:
        if r.plane not in (1, 2):
            raise DomainError(f"unknown Darboux plane {r.plane!r}")
        total += r.orientation * r.dp * r.dq
    return total


# -- Poisson bracket --------------------------------------------------------

def _gradient(f, x, h):
    grad = np.empty_like(x)
    for i in range(x.size):
        step = h if h is not None else 1e-5 * (1 + abs(x[i]))
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (f(x + e) - f(x - e)) / (2 * step)
    return grad


def poisson_bracket(f: Callable, g: Callable, omega: SymplecticForm, point,
                    h: float | None = None) -> float:
    """{f, g} = pi^{jk} d_j f d_k g with pi = omega^{-1}, by central differences.

    f and g take a 1-D coordinate array.  Default step is 1e-5 (1 + |x_i|).
    """
    x = np.asarray(point, dtype=float).ravel()
    if x.size != omega.mat.shape[0]:
        raise DomainError(f"point has {x.size} coordinates, form acts on {omega.mat.shape[0]}")
    if h is not None and not h > 0:
        raise DomainError("finite-difference step must be positive")
    pi = omega.inverse()
    return float(_gradient(f, x, h) @ pi @ _gradient(g, x, h))


# -- quadrature helpers -----------------------------------------------------

def _trapezoid_nodes(half_width, points):
    x = np.linspace(-half_width, half_width, points)
    w = np.full(points, x[1] - x[0])
    w[0] = w[-1] = 0.5 * w[0]
    return x, w


def _tensor(nodes, weights):
    grids = np.meshgrid(*nodes, indexing="ij")
    pts = np.stack([gr.ravel() for gr in grids], axis=-1)
    w = weights[0]
    for wk in weights[1:]:
        w = np.multiply.outer(w, wk)
    return pts, w.ravel()


def _weighted_mean(values, weights):
    values = np.asarray(values, dtype=float)
    if values.shape != weights.shape:
        values = np.broadcast_to(values, weights.shape)
    num = values * weights
    if not np.all(np.isfinite(num)):
        raise DomainError("integrand is not finite on the quadrature domain")
    return float(num.sum() / weights.sum())


def _chunk_sizes(total):
    full, rest = divmod(total, MC_CHUNK)
    return [MC_CHUNK] * full + ([rest] if rest else [])


def _mc_estimate(sampler, f, samples, seed):
    """Chunked Monte-Carlo mean with independently seeded Philox streams."""
    children = np.random.SeedSequence(seed).spawn(len(_chunk_sizes(samples)))
    s1 = s2 = 0.0
    for size, child in zip(_chunk_sizes(samples), children):
        rng = np.random.Generator(np.random.Philox(child))
        vals = np.broadcast_to(np.asarray(f(sampler(rng, size)), dtype=float), (size,))
        if not np.all(np.isfinite(vals)):
            raise DomainError("integrand is not finite on sampled points")
        s1 += vals.sum()
        s2 += (vals**2).sum()
    mean = s1 / samples
    var = max(s2 / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    return Estimate(float(mean), float(math.sqrt(var / samples)))


# -- averages -----------------------------------------------------------------

def riemann_average(f: Callable, metric: FluctuationMetric,
                    quad: QuadratureSpec = QuadratureSpec()) -> Estimate:
    """Average of f(T, V) under exp(-g_TT T^2 - g_VV V^2).

    f is called with array arguments (T, V) and must broadcast.
    """
    sig = np.array([1 / math.sqrt(2 * metric.g_TT), 1 / math.sqrt(2 * metric.g_VV)])
    if quad.scheme == MONTE_CARLO:
        return _mc_estimate(
            lambda rng, size: rng.standard_normal((size, 2)) * sig,
            lambda x: f(x[:, 0], x[:, 1]), quad.points, quad.seed,
        )
    nodes, weights = zip(*(_trapezoid_nodes(quad.truncation * s, quad.points) for s in sig))
    pts, w = _tensor(nodes, weights)
    w = w * np.exp(-metric.g_TT * pts[:, 0] ** 2 - metric.g_VV * pts[:, 1] ** 2)
    return Estimate(_weighted_mean(f(pts[:, 0], pts[:, 1]), w))


def liouville_density(omega: SymplecticForm) -> float:
    """|Pf(omega)|, the constant Liouville density omega^n / n! (= sqrt|det|)."""
    return math.sqrt(abs(np.linalg.det(omega.mat)))


def symplectic_average(f: Callable, omega: SymplecticForm, domain,
                       quad: QuadratureSpec = QuadratureSpec(points=16)) -> Estimate:
    """Liouville average of f over a bounded box.

    domain is a sequence of (lo, hi) pairs, one per coordinate; f takes an
    array of shape (m, 2n).  Grid quadrature is tensor Gauss-Legendre.
    """
    box = np.asarray(domain, dtype=float)
    dim = omega.mat.shape[0]
    if box.shape != (dim, 2):
        raise DomainError(f"domain must give (lo, hi) for each of {dim} coordinates")
    if not np.all(np.isfinite(box)) or np.any(box[:, 1] <= box[:, 0]):
        raise DomainError("domain must be a bounded, non-empty box")
    dens = liouville_density(omega)
    if dens == 0.0:
        raise DomainError("degenerate symplectic form")
    lo, hi = box[:, 0], box[:, 1]
    if quad.scheme == MONTE_CARLO:
        return _mc_estimate(
            lambda rng, size: lo + (hi - lo) * rng.random((size, dim)),
            f, quad.points, quad.seed,
        )
    x, w = np.polynomial.legendre.leggauss(quad.points)
    nodes = [0.5 * (h - l) * x + 0.5 * (h + l) for l, h in zip(lo, hi)]
    weights = [0.5 * (h - l) * w for l, h in zip(lo, hi)]
    pts, wt = _tensor(nodes, weights)
    return Estimate(_weighted_mean(f(pts), dens * wt))


def hermitian_average(f: Callable, h, quad: QuadratureSpec = QuadratureSpec()) -> Estimate:
    """Average of f(z) under exp(-conj(z)^T h z) on C^n.

    h is a Hermitian positive-definite n x n matrix (or a positive scalar).
    f takes a complex array of shape (m, n).  The Gaussian is diagonalised,
    h = U diag(d) U^H, and integrated in the eigen-coordinates w = U^H z.
    """
    hm = np.atleast_2d(np.asarray(h, dtype=complex))
    if hm.shape[0] != hm.shape[1] or not np.allclose(hm, hm.conj().T, rtol=0, atol=1e-12):
        raise DomainError("h must be a square Hermitian matrix")
    d, U = np.linalg.eigh(hm)
    if not np.all(d > 0):
        raise DomainError(f"h is not positive definite (eigenvalues {d})")
    n = d.size
    sig = np.concatenate([1 / np.sqrt(2 * d)] * 2)

    def to_z(x):
        return (x[:, :n] + 1j * x[:, n:]) @ U.T

    if quad.scheme == MONTE_CARLO:
        return _mc_estimate(
            lambda rng, size: rng.standard_normal((size, 2 * n)) * sig,
            lambda x: f(to_z(x)), quad.points, quad.seed,
        )
    nodes, weights = zip(*(_trapezoid_nodes(quad.truncation * s, quad.points) for s in sig))
    pts, w = _tensor(nodes, weights)
    dd = np.concatenate([d, d])
    w = w * np.exp(-(pts**2 * dd).sum(axis=1))
    return Estimate(_weighted_mean(f(to_z(pts)), w))
