import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from gcsfluct import fluctuations as fl
from gcsfluct.errors import DomainError
from gcsfluct.gcs import SymplecticForm, random_symplectic

STATE = fl.ThermoState(T=1.0, V=1.0, C_V=1.5, dPdV_T=-1.0)
REFS = fl.IdealGasRefs(S0=1.0, P0=1.0, V0=1.0, T0=1.0)

positive = st.floats(0.1, 10)
small = st.floats(-2, 2)


def gaussian_moment_oracle(g, power):
    """int x^power e^{-g x^2} / int e^{-g x^2} by adaptive quadrature."""
    num = integrate.quad(lambda x: x**power * math.exp(-g * x * x), -np.inf, np.inf)[0]
    den = integrate.quad(lambda x: math.exp(-g * x * x), -np.inf, np.inf)[0]
    return num / den


def polar_oracle(h):
    """<|z|^2> for weight e^{-h |z|^2} on C, in polar coordinates."""
    num = integrate.quad(lambda r: r**3 * math.exp(-h * r * r), 0, np.inf)[0]
    den = integrate.quad(lambda r: r * math.exp(-h * r * r), 0, np.inf)[0]
    return num / den


class TestProbabilities:
    def test_no_fluctuation(self):
        assert fl.gaussian_fluct_prob_tv(STATE, 0.0, 0.0) == 1.0

    def test_example(self):
        # hand evaluation: -1.5 * 0.01 / 2 + (-1) * 0.04 / 2 = -0.0275
        assert fl.gaussian_fluct_prob_tv(STATE, 0.1, 0.2) == pytest.approx(math.exp(-0.0275), rel=1e-15)
        assert fl.gaussian_fluct_prob_tv(STATE, 0.1, 0.2) == pytest.approx(0.972875, abs=5e-7)

    @given(positive, positive, positive, positive, small, small)
    def test_log_matches_metric(self, T, V, cv, k, dT, dV):
        state = fl.ThermoState(T=T, V=V, C_V=cv, dPdV_T=-k)
        g = fl.fluctuation_metric(state)
        assert fl.gaussian_fluct_logprob_tv(state, dT, dV) == -(g.g_TT * dT**2 + g.g_VV * dV**2)
        p = fl.gaussian_fluct_prob_tv(state, dT, dV)
        assert p <= 1
        if g.g_TT * dT**2 + g.g_VV * dV**2 < 700:  # exp underflows beyond this
            assert p > 0
        if dT == 0 and dV == 0:
            assert p == 1.0

    def test_strictly_below_one(self):
        assert fl.gaussian_fluct_prob_tv(STATE, 1e-3, 0.0) < 1.0

    @pytest.mark.parametrize("kw", [{"C_V": 0.0}, {"C_V": -1.0}, {"dPdV_T": 0.0}, {"dPdV_T": 2.0}])
    def test_thermodynamic_inequalities(self, kw):
        args = dict(T=1.0, V=1.0, C_V=1.5, dPdV_T=-1.0)
        args.update(kw)
        with pytest.raises(DomainError, match="thermodynamic inequality"):
            fl.ThermoState(**args)


class TestMetric:
    def test_example(self):
        g = fl.fluctuation_metric(STATE)
        assert (g.g_TT, g.g_VV) == (0.75, 0.5)

    def test_small_heat_capacity(self):
        g = fl.fluctuation_metric(fl.ThermoState(T=1.0, V=1.0, C_V=1e-12, dPdV_T=-1.0))
        assert 0 < g.g_TT < 1e-11

    def test_temperature_scaling(self):
        g1 = fl.fluctuation_metric(STATE)
        g2 = fl.fluctuation_metric(fl.ThermoState(T=2.0, V=1.0, C_V=1.5, dPdV_T=-1.0))
        assert g2.g_TT == g1.g_TT / 4
        assert g2.g_VV == g1.g_VV / 2


class TestDarboux:
    def test_reference_point(self):
        assert fl.to_darboux(1.0, 1.0, 1.0, 1.0, REFS) == (0.0, 0.0, 0.0, 1.0)

    def test_logs(self):
        assert fl.to_darboux(math.exp(-1), 1.0, 1.0, 1.0, REFS).p1 == pytest.approx(1.0, abs=1e-15)
        assert fl.to_darboux(1.0, math.exp(2), 1.0, 1.0, REFS).q1 == pytest.approx(2.0, abs=1e-15)

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            fl.to_darboux(0.0, 1.0, 1.0, 1.0, REFS)

    def test_physical_example(self):
        p = fl.fluct_prob_physical(1.0, 1.0, 1.0, 0.01, 0.02, 0.01, 0.03, REFS)
        assert math.log(p) == pytest.approx(-5e-5, rel=1e-9)
        assert p == pytest.approx(0.99995, abs=1e-8)
        assert fl.fluct_prob_physical(1.0, 1.0, 1.0, 0, 0, 0, 0, REFS) == 1.0

    def test_positive_ts_fluctuation_suppressed(self):
        assert fl.fluct_prob_physical(1.0, 1.0, 1.0, 0, 0, 0.1, 0.1, REFS) < 1

    def test_equation_of_state_enforced(self):
        with pytest.raises(DomainError, match="PV = S0 T"):
            fl.fluct_prob_physical(2.0, 1.0, 1.0, 0, 0, 0, 0, REFS)

    def test_darboux_prob(self):
        assert fl.fluct_prob_darboux(0, 0, 0, 0) == 1.0
        assert fl.fluct_prob_darboux(0.1, 0.2, 0, 0) == pytest.approx(math.exp(-0.01), rel=1e-15)
        assert fl.fluct_prob_darboux(0.1, 0.2, 0, 0) == pytest.approx(0.990050, abs=5e-7)

    @pytest.mark.parametrize("direction", [(0.7, -0.4, 0.5, 0.9), (1.0, 1.0, 1.0, 1.0), (-0.3, 0.8, 0.2, -0.6)])
    def test_third_order_agreement(self, direction):
        P, V, T, S = 2.0, 1.5, 3.0, 4.0
        refs = fl.IdealGasRefs(S0=1.0, P0=1.0, V0=2.0, T0=1.0)
        diffs = []
        for eps in (1e-1, 5e-2, 2.5e-2, 1.25e-2):
            d = eps * np.asarray(direction)
            dd = fl.darboux_deltas(P, V, T, S, *d, refs)
            lp = math.log(fl.fluct_prob_physical(P, V, T, *d, refs))
            ld = math.log(fl.fluct_prob_darboux(*dd, S0=refs.S0))
            diffs.append(abs(lp - ld))
        ratios = [diffs[i] / diffs[i + 1] for i in range(3)]
        assert min(math.log2(r) for r in ratios) >= 2.7
        assert ratios[-1] == pytest.approx(8, rel=0.15)


class TestSymplecticArea:
    def test_rectangle(self):
        assert fl.symplectic_area([fl.Rectangle(1, 2.0, 3.0)]) == 6.0

    def test_additivity(self):
        a, b = fl.Rectangle(1, 2.0, 3.0), fl.Rectangle(2, 0.5, -4.0)
        assert fl.symplectic_area([a, b]) == fl.symplectic_area([a]) + fl.symplectic_area([b])

    def test_orientation(self):
        assert fl.symplectic_area([fl.Rectangle(1, 2.0, 3.0, orientation=-1)]) == -6.0

    def test_area_identity(self):
        patches = [fl.Rectangle(1, 0.1, 0.2), fl.Rectangle(2, 0.3, 0.4)]
        area = fl.symplectic_area(patches)
        assert area == pytest.approx(0.14, abs=1e-15)
        for S0, k in [(1.0, 1.0), (2.5, 0.7)]:
            assert fl.fluct_prob_darboux(0.1, 0.2, 0.3, 0.4, S0, k) == pytest.approx(
                math.exp(-(S0 / (2 * k)) * area), rel=1e-15)

    def test_unknown_plane(self):
        with pytest.raises(DomainError):
            fl.symplectic_area([fl.Rectangle(3, 1.0, 1.0)])


class TestPoissonBracket:
    omega = SymplecticForm.darboux(1)  # dp ^ dq in (q, p) order

    def test_canonical(self):
        q = lambda x: x[0]
        p = lambda x: x[1]
        assert fl.poisson_bracket(q, p, self.omega, [0.3, -1.2]) == pytest.approx(1.0, abs=1e-10)
        assert fl.poisson_bracket(p, q, self.omega, [0.3, -1.2]) == pytest.approx(-1.0, abs=1e-10)

    def test_self_bracket(self):
        f = lambda x: math.sin(x[0]) * x[1] ** 3
        assert abs(fl.poisson_bracket(f, f, self.omega, [0.4, 0.9])) <= 1e-10

    def test_chain_rule(self):
        # symbolic oracle: {q^2, p} = 2 q {q, p}
        val = fl.poisson_bracket(lambda x: x[0] ** 2, lambda x: x[1], self.omega, [3.0, 0.5])
        assert val == pytest.approx(6.0, abs=1e-6)

    def test_singular(self):
        with pytest.raises(DomainError):
            fl.poisson_bracket(lambda x: x[0], lambda x: x[1], SymplecticForm(np.zeros((2, 2))), [0, 0])

    def test_antisymmetry_and_jacobi(self):
        rng = np.random.default_rng(5)
        omega = random_symplectic(rng, 2)
        c = rng.standard_normal((3, 4))
        f = lambda x: c[0] @ x + x[0] * x[2]
        g = lambda x: c[1] @ x * x[1]
        h = lambda x: (c[2] @ x) ** 2 + x[3]
        pb = lambda a, b: (lambda x: fl.poisson_bracket(a, b, omega, x, h=1e-3))
        for _ in range(5):
            pt = rng.standard_normal(4)
            assert abs(pb(f, g)(pt) + pb(g, f)(pt)) <= 1e-10
            jac = pb(f, pb(g, h))(pt) + pb(g, pb(h, f))(pt) + pb(h, pb(f, g))(pt)
            assert abs(jac) <= 1e-5


class TestAverages:
    def test_riemann_normalisation(self):
        est = fl.riemann_average(lambda T, V: np.ones_like(T), fl.FluctuationMetric(1.3, 0.4))
        assert est.value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("g", [(1.0, 1.0), (2.0, 1.0), (0.3, 5.0)])
    def test_riemann_second_moment(self, g):
        metric = fl.FluctuationMetric(*g)
        oracle = gaussian_moment_oracle(g[0], 2)
        assert oracle == pytest.approx(1 / (2 * g[0]), rel=1e-9)
        assert fl.riemann_average(lambda T, V: T**2, metric).value == pytest.approx(oracle, abs=1e-6)
        assert fl.riemann_average(lambda T, V: V**2, metric).value == pytest.approx(1 / (2 * g[1]), abs=1e-6)

    def test_riemann_examples(self):
        one = fl.FluctuationMetric(1.0, 1.0)
        assert fl.riemann_average(lambda T, V: T**2, one).value == pytest.approx(0.5, abs=1e-6)
        two = fl.FluctuationMetric(2.0, 1.0)
        assert fl.riemann_average(lambda T, V: T**2, two).value == pytest.approx(0.25, abs=1e-6)

    def test_riemann_monte_carlo(self):
        quad = fl.QuadratureSpec(scheme=fl.MONTE_CARLO, points=200_000, seed=7)
        est = fl.riemann_average(lambda T, V: T**2, fl.FluctuationMetric(1.0, 1.0), quad)
        assert abs(est.value - 0.5) <= 3 * est.stderr

    @pytest.mark.filterwarnings("ignore:divide by zero")
    def test_divergent_integrand(self):
        with pytest.raises(DomainError, match="not finite"):
            fl.riemann_average(lambda T, V: 1 / (T * 0.0), fl.FluctuationMetric(1.0, 1.0))

    def test_symplectic_normalisation(self):
        omega = SymplecticForm.darboux(1)
        assert fl.symplectic_average(lambda x: np.ones(len(x)), omega, [(0, 1), (-2, 3)]).value == pytest.approx(1.0, abs=1e-12)

    def test_symplectic_uniform_mean(self):
        est = fl.symplectic_average(lambda x: x[:, 0], SymplecticForm.standard(1), [(0, 1), (0, 1)])
        assert est.value == pytest.approx(0.5, abs=1e-12)

    def test_symplectic_n2_against_sampling(self):
        omega = SymplecticForm(np.kron(np.diag([1.0, 3.0]), [[0.0, 1.0], [-1.0, 0.0]]))
        box = [(0, 1)] * 4
        grid = fl.symplectic_average(lambda x: x[:, 0], omega, box).value
        assert grid == pytest.approx(0.5, abs=1e-12)
        # brute-force oracle: constant Liouville density means plain uniform sampling
        rng = np.random.default_rng(11)
        s = rng.random((400_000, 4))[:, 0]
        se = s.std(ddof=1) / math.sqrt(s.size)
        assert abs(grid - s.mean()) <= 3 * se
        mc = fl.symplectic_average(lambda x: x[:, 0], omega, box,
                                   fl.QuadratureSpec(scheme=fl.MONTE_CARLO, points=400_000, seed=11))
        assert abs(mc.value - 0.5) <= 3 * mc.stderr

    def test_symplectic_unbounded(self):
        with pytest.raises(DomainError):
            fl.symplectic_average(lambda x: x[:, 0], SymplecticForm.standard(1), [(0, np.inf), (0, 1)])

    def test_hermitian_normalisation(self):
        h = np.array([[2.0, 0.5 - 0.3j], [0.5 + 0.3j, 1.0]])
        est = fl.hermitian_average(lambda z: np.ones(len(z)), h, fl.QuadratureSpec(points=41))
        assert est.value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("h", [1.0, 2.0, 0.25])
    def test_hermitian_second_moment(self, h):
        oracle = polar_oracle(h)
        est = fl.hermitian_average(lambda z: np.abs(z[:, 0]) ** 2, h)
        assert est.value == pytest.approx(oracle, abs=1e-6)
        assert est.value == pytest.approx(1 / h, abs=1e-6)

    def test_hermitian_non_diagonal(self):
        # <z_i conj(z_j)> = (h^{-1})_{ij} for a complex Gaussian
        h = np.array([[2.0, 0.5 - 0.3j], [0.5 + 0.3j, 1.0]])
        est = fl.hermitian_average(lambda z: np.abs(z[:, 1]) ** 2, h, fl.QuadratureSpec(points=41))
        assert est.value == pytest.approx(np.linalg.inv(h)[1, 1].real, abs=1e-6)

    def test_hermitian_not_positive(self):
        with pytest.raises(DomainError, match="positive definite"):
            fl.hermitian_average(lambda z: z[:, 0], -1.0)

    def test_monte_carlo_is_deterministic(self):
        quad = fl.QuadratureSpec(scheme=fl.MONTE_CARLO, points=150_000, seed=3)
        f = lambda z: np.abs(z[:, 0]) ** 2
        assert fl.hermitian_average(f, 2.0, quad) == fl.hermitian_average(f, 2.0, quad)

    def test_quadrature_spec_validation(self):
        with pytest.raises(DomainError):
            fl.QuadratureSpec(points=1)
        with pytest.raises(DomainError):
            fl.QuadratureSpec(scheme="simpson")
        with pytest.raises(DomainError):
            fl.QuadratureSpec(truncation=0)
