"""Property suites behind the ``verify`` command.

Each suite returns a list of `Check` records (name, residual, tolerance).
Residuals are maxima over the trials of the suite.
"""

from __future__ import annotations

import math

import numpy as np

from . import coherent, fluctuations as fl, gcs, unruh
from .gcs import Check


def _max(values):
    return float(max(values)) if values else 0.0


def gcs_suite(n: int, rng: np.random.Generator, trials: int = 20) -> list[Check]:
    axioms, closed, inverse, vec_iso = [], [], [], []
    type_err = 0
    for _ in range(trials):
        omega = gcs.random_symplectic(rng, n)
        j = gcs.random_complex(rng, n)
        b = gcs.random_two_form(rng, n)
        gs, gc = gcs.build_symplectic_gcs(omega), gcs.build_complex_gcs(j)
        gsb, gcb = gcs.b_transform_gcs(gs, b), gcs.b_transform_gcs(gc, b)
        for g in (gs, gc, gsb, gcb):
            axioms.append(gcs.verify_gcs(g).max_residual)
        closed.append(np.abs(gsb.mat - gcs.b_transform_symplectic_blocks(omega, b).mat).max())
        closed.append(np.abs(gcb.mat - gcs.b_transform_complex_blocks(j, b).mat).max())
        inverse.append(np.abs(gcs.b_transform_gcs(gsb, -b).mat - gs.mat).max())
        type_err += abs(gcs.gcs_type(gs)) + abs(gcs.gcs_type(gsb))
        type_err += abs(gcs.gcs_type(gc) - n) + abs(gcs.gcs_type(gcb) - n)
        v = gcs.GeneralizedVector(rng.standard_normal(2 * n), rng.standard_normal(2 * n))
        w = gcs.GeneralizedVector(rng.standard_normal(2 * n), rng.standard_normal(2 * n))
        vec_iso.append(abs(
            gcs.inner_product(gcs.b_transform_vector(v, b), gcs.b_transform_vector(w, b))
            - gcs.inner_product(v, w)
        ))
    pos, neg = gcs.signature(gcs.inner_product_matrix(n))
    return [
        Check(f"gcs.axioms[n={n}]", _max(axioms), gcs.GCS_TOL),
        Check(f"gcs.b_transform_closed_form[n={n}]", _max(closed), 1e-12),
        Check(f"gcs.b_transform_inverse[n={n}]", _max(inverse), 1e-12),
        Check(f"gcs.type[n={n}]", float(type_err), 0.0),
        Check(f"gcs.vector_isometry[n={n}]", _max(vec_iso), 1e-12),
        Check(f"gcs.signature[n={n}]", float(abs(pos - 2 * n) + abs(neg - 2 * n)), 0.0),
    ]


def candidate_suite(g: gcs.Gcs) -> list[Check]:
    """Axiom checks for a user-supplied matrix."""
    return [
        Check(f"candidate.{c.name}", c.residual, c.tol) for c in gcs.verify_gcs(g).checks
    ]


def fluctuation_suite(rng: np.random.Generator) -> list[Check]:
    log_err = []
    for _ in range(20):
        state = fl.ThermoState(T=rng.uniform(0.5, 2), V=rng.uniform(0.5, 2),
                               C_V=rng.uniform(0.5, 3), dPdV_T=-rng.uniform(0.5, 3))
        dT, dV = rng.normal(scale=0.3, size=2)
        g = fl.fluctuation_metric(state)
        log_err.append(abs(fl.gaussian_fluct_logprob_tv(state, dT, dV)
                           + (g.g_TT * dT**2 + g.g_VV * dV**2)))

    refs = fl.IdealGasRefs(S0=1.0)
    direction = np.array([0.7, -0.4, 0.5, 0.9])
    diffs = []
    for eps in (1e-1, 5e-2, 2.5e-2):
        d = eps * direction
        dd = fl.darboux_deltas(1.0, 1.0, 1.0, 1.0, *d, refs)
        lp = math.log(fl.fluct_prob_physical(1.0, 1.0, 1.0, *d, refs))
        ld = math.log(fl.fluct_prob_darboux(*dd, S0=refs.S0))
        diffs.append(abs(lp - ld))
    order = min(math.log2(diffs[i] / diffs[i + 1]) for i in range(2))

    metric = fl.FluctuationMetric(1.0, 2.0)
    one_r = fl.riemann_average(lambda T, V: np.ones_like(T), metric).value
    t2 = fl.riemann_average(lambda T, V: T**2, metric).value
    v2 = fl.riemann_average(lambda T, V: V**2, metric).value
    one_h = fl.hermitian_average(lambda z: np.ones(z.shape[0]), 2.0).value
    z2 = fl.hermitian_average(lambda z: (np.abs(z) ** 2).sum(axis=1), 2.0).value
    omega = gcs.SymplecticForm.darboux(1)
    q = fl.symplectic_average(lambda x: x[:, 0], omega, [(0, 1), (0, 1)]).value
    return [
        Check("fluct.log_consistency", _max(log_err), 0.0),
        Check("fluct.darboux_order_deficit", max(0.0, 2.7 - order), 0.0),
        Check("fluct.riemann_normalisation", abs(one_r - 1), 1e-9),
        Check("fluct.riemann_second_moment", max(abs(t2 - 0.5), abs(v2 - 0.25)), 1e-6),
        Check("fluct.hermitian_normalisation", abs(one_h - 1), 1e-9),
        Check("fluct.hermitian_second_moment", abs(z2 - 0.5), 1e-6),
        Check("fluct.symplectic_uniform_mean", abs(q - 0.5), 1e-9),
    ]


def coherent_suite() -> list[Check]:
    moment_err = []
    for z in (0, 0.5, 1, 1 + 1j, 2j, 2):
        mean, dh = coherent.oscillator_moments(z, 64)
        moment_err.append(max(abs(mean - (abs(z) ** 2 + 0.5)), abs(dh - abs(z))))
    rel = coherent.relative_fluctuation(10)
    return [
        Check("coherent.moments", _max(moment_err), 1e-8),
        Check("coherent.relative_fluctuation_z10", abs(rel * 10 - 1), 5e-3),
    ]


def unruh_suite() -> list[Check]:
    b = unruh.BFieldSpec.constant(2 / 3)
    equiv, closed = [], []
    for m in (0.5, 1, 2):
        for a in (0.5, 1, 2):
            fs = unruh.FrameSpec(alpha=a, m=m)
            for t in np.linspace(0.1, 3, 30):
                dx = unruh.delta_xi(b, t, fs)
                ph = unruh.unruh_phase(fs, t)
                equiv.append(abs(dx - ph) / abs(ph))
                exact = unruh.delta_xi_constant(2 / 3, fs, t)
                closed.append(abs(dx - exact) / max(1.0, abs(exact)))
    chain, resid = [], []
    for m in (0.5, 1, 3):
        for T in (0.25, 1, 4):
            e = unruh.thermal_chain(m, T)
            ref = unruh.thermal_exponent(m, T)
            chain.append(abs(e.real - ref) / abs(ref))
            resid.append(abs(e.imag))
    return [
        Check("unruh.phase_equivalence", _max(equiv), 1e-9),
        Check("unruh.constant_b_closed_form", _max(closed), 1e-12),
        Check("unruh.thermal_chain", _max(chain), 1e-12),
        Check("unruh.thermal_chain_imag", _max(resid), 1e-12),
    ]


def run_all(n: int, seed: int, candidate: gcs.Gcs | None = None) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    for k in range(1, n + 1):
        checks += gcs_suite(k, rng)
    if candidate is not None:
        checks += candidate_suite(candidate)
    checks += fluctuation_suite(rng)
    checks += coherent_suite()
    checks += unruh_suite()
    return checks
