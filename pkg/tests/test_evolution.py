import numpy as np
import pytest
import scipy.integrate
from scipy.stats import unitary_group

import qge
from qge import (
    AssemblyError,
    MetricGraph,
    Observable,
    ParameterError,
    ValidationError,
    build_assembly,
    classical_map,
    constant_observable,
    draw_lengths,
    eigenbasis,
    equi_transmitting_sigma,
    evolution,
    fejer,
    fejer_kernel,
    generate_random_regular,
    kirchhoff_sigma,
    lemma_a_sides,
    m_tilde,
    parity_observable,
    spectrum_scan,
    trace_correlator,
    variance_estimate,
)

from conftest import cage46, k5


@pytest.fixture(scope="module")
def k5_metric():
    g = k5()
    mg = MetricGraph(graph=g, lengths=draw_lengths(g.B, seed=11))
    a = build_assembly(mg, equi_transmitting_sigma(4))
    return g, mg, a


class TestAssembly:
    def test_et_rows(self, k5_metric):
        g, _, a = k5_metric
        sq = np.abs(a.S) ** 2
        assert np.allclose(sq.sum(axis=1), 1.0, atol=1e-12)
        assert np.all((sq > 1e-15).sum(axis=1) == 3)

    def test_et_no_backscatter(self, k5_metric):
        g, _, a = k5_metric
        bi = g.bond_index
        assert np.all(a.S[np.arange(2 * g.B), bi.rev] == 0.0)
        assert a.no_backscatter

    def test_kirchhoff_reflection(self):
        g = k5()
        a = build_assembly(g, kirchhoff_sigma(4))
        bi = g.bond_index
        refl = a.S[np.arange(2 * g.B), bi.rev]
        assert np.allclose(refl, -0.5)
        assert not a.no_backscatter

    def test_unitarity(self, k5_metric):
        _, _, a = k5_metric
        dev = np.max(np.abs(a.S @ a.S.conj().T - np.eye(a.S.shape[0])))
        assert dev < 1e-10

    def test_support_pattern(self, k5_metric):
        g, _, a = k5_metric
        bi = g.bond_index
        for b in range(2 * g.B):
            for c in range(2 * g.B):
                if a.S[b, c] != 0:
                    assert bi.heads[b] == bi.tails[c]

    def test_size_mismatch(self):
        with pytest.raises(AssemblyError):
            build_assembly(k5(), equi_transmitting_sigma(8))

    def test_per_vertex_rule(self):
        g = k5()
        a = build_assembly(g, [kirchhoff_sigma(4)] * 5)
        assert a.vertex_rule == ("kirchhoff[d=4]",) * 5

    def test_rule_length_mismatch(self):
        with pytest.raises(AssemblyError):
            build_assembly(k5(), [kirchhoff_sigma(4)] * 4)


class TestEvolution:
    def test_k0_is_s(self, k5_metric):
        _, mg, a = k5_metric
        assert np.array_equal(evolution(a, mg, 0.0), a.S)

    def test_equal_length_periodicity(self):
        g = k5()
        mg = MetricGraph(graph=g, lengths=np.full(g.B, 1.5))
        a = build_assembly(mg, equi_transmitting_sigma(4))
        u1 = evolution(a, mg, 0.8)
        u2 = evolution(a, mg, 0.8 + 2 * np.pi / 1.5)
        assert np.max(np.abs(u1 - u2)) < 1e-12

    def test_random_k_unitarity(self, k5_metric):
        _, mg, a = k5_metric
        rng = np.random.default_rng(0)
        n = a.S.shape[0]
        for k in rng.uniform(0, 100, size=25):
            u = evolution(a, mg, k)
            assert np.max(np.abs(u @ u.conj().T - np.eye(n))) < 1e-10


class TestEigenbasis:
    def test_identity(self):
        theta, q = eigenbasis(np.eye(6, dtype=complex))
        assert np.allclose(theta, 0.0)
        assert np.allclose(q.conj().T @ q, np.eye(6), atol=1e-12)

    def test_diag_i_minus_i(self):
        theta, _ = eigenbasis(np.diag([1j, -1j]))
        assert sorted(np.round(theta, 12)) == [0.25, 0.75]

    def test_reconstruction(self, k5_metric):
        _, mg, a = k5_metric
        u = evolution(a, mg, 17.3)
        theta, q = eigenbasis(u)
        lam = np.exp(2j * np.pi * theta)
        assert np.max(np.abs(u - (q * lam[None, :]) @ q.conj().T)) < 1e-8

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            eigenbasis(2.0 * np.eye(4, dtype=complex))


class TestSpectrumScan:
    def test_equal_lengths_closed_form(self):
        # all lengths 1: roots are exactly -arg(lambda) mod 2pi over the
        # eigenvalues lambda of S
        g = k5()
        mg = MetricGraph(graph=g, lengths=np.ones(g.B))
        a = build_assembly(mg, equi_transmitting_sigma(4))
        lam = np.linalg.eigvals(a.S)
        lo = 0.01
        expected = sorted({k for k in ((-np.angle(lam)) % (2 * np.pi)) if k > lo + 1e-9})
        roots = spectrum_scan(a, mg, (lo, lo + 2 * np.pi - 0.02), 0.005)
        assert len(roots) == len(expected)
        assert np.allclose(roots, expected, atol=1e-6)

    def test_empty_window(self, k5_metric):
        _, mg, a = k5_metric
        roots = spectrum_scan(a, mg, (1e-4, 2e-4), 1e-5)
        assert roots == []

    def test_resolution_stability(self, k5_metric):
        _, mg, a = k5_metric
        coarse = spectrum_scan(a, mg, (0.05, 3.0), 0.02)
        fine = spectrum_scan(a, mg, (0.05, 3.0), 0.01)
        for r in coarse:
            assert min(abs(r - f) for f in fine) < 1e-6

    def test_empty_range_error(self, k5_metric):
        _, mg, a = k5_metric
        with pytest.raises(ParameterError):
            spectrum_scan(a, mg, (1.0, 1.0), 0.01)


class TestVarianceEstimate:
    def test_constant_observable_zero(self, k5_metric):
        g, mg, a = k5_metric
        f = constant_observable(g.bond_index, 3.0 - 1.0j)
        est = variance_estimate(a, mg, f, 40.0, 40)
        assert est.estimate < 1e-26

    def test_scaling(self, k5_metric):
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        e1 = variance_estimate(a, mg, f, 40.0, 40)
        e2 = variance_estimate(a, mg, Observable.from_vector(2.5 * f.f), 40.0, 40)
        assert e2.estimate == pytest.approx(2.5**2 * e1.estimate, rel=1e-12)

    def test_sample_count_consistency(self, k5_metric):
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        e1 = variance_estimate(a, mg, f, 200.0, 200)
        e2 = variance_estimate(a, mg, f, 200.0, 400)
        tol = 3 * np.hypot(e1.stderr, e2.stderr)
        assert abs(e1.estimate - e2.estimate) <= tol

    def test_mc_sampler_seeded(self, k5_metric):
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        e1 = variance_estimate(a, mg, f, 40.0, 30, seed=5, sampler="mc")
        e2 = variance_estimate(a, mg, f, 40.0, 30, seed=5, sampler="mc")
        assert e1.estimate == e2.estimate

    def test_json_contract(self, k5_metric):
        g, mg, a = k5_metric
        est = variance_estimate(a, mg, parity_observable(g.bond_index), 10.0, 5)
        assert set(est.to_json_dict()) == {"B", "K", "samples", "estimate", "stderr"}

    def test_parameter_errors(self, k5_metric):
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        with pytest.raises(ParameterError):
            variance_estimate(a, mg, f, 10.0, 0)
        with pytest.raises(ParameterError):
            variance_estimate(a, mg, f, -1.0, 10)


class TestTraceCorrelator:
    def test_t0(self, k5_metric):
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        val = trace_correlator(a, mg, f, 0, 2.2)
        assert val == pytest.approx(float(np.sum(np.abs(f.f) ** 2)), rel=1e-12)

    def test_constant(self, k5_metric):
        g, mg, a = k5_metric
        f = constant_observable(g.bond_index, 2.0)
        for t in (0, 1, 3):
            assert trace_correlator(a, mg, f, t, 1.1) == pytest.approx(
                4.0 * 2 * g.B, rel=1e-10
            )

    def test_matches_quadratic_form_on_same_grid(self, k5_metric):
        # Expanding the trace gives <f, avg|U^t|^2 f> exactly, k by k
        g, mg, a = k5_metric
        f = parity_observable(g.bond_index)
        t, k_max, samples = 3, 37.0, 50
        mt = m_tilde(a, mg, t, k_max, samples)
        ks = (np.arange(samples) + 0.5) * (k_max / samples)
        avg = np.mean([trace_correlator(a, mg, f, t, k) for k in ks])
        quad = float(np.real(np.conj(f.f) @ mt @ f.f))
        assert abs(avg - quad) < 1e-10 * max(1.0, abs(quad))


class TestMTilde:
    def test_t0_identity(self, k5_metric):
        _, mg, a = k5_metric
        assert np.array_equal(m_tilde(a, mg, 0, 10.0, 4), np.eye(a.S.shape[0]))

    def test_t1_equals_m(self, k5_metric):
        # single-step phases cancel in modulus, so no k dependence at t=1
        _, mg, a = k5_metric
        m = classical_map(a)
        assert np.max(np.abs(m_tilde(a, mg, 1, 10.0, 4) - m)) < 1e-14

    def test_doubly_stochastic(self, k5_metric):
        _, mg, a = k5_metric
        mt = m_tilde(a, mg, 4, 60.0, 40)
        assert np.max(np.abs(mt.sum(axis=0) - 1)) < 1e-8
        assert np.max(np.abs(mt.sum(axis=1) - 1)) < 1e-8

    def test_large_girth_row_matches_walk_power(self):
        # girth 6: no bond is near a 4-cycle, so every row of the t=2
        # average equals the walk matrix squared, at any sample count
        g = cage46()
        assert qge.near_cycle_census(g, 2) == frozenset()
        mg = MetricGraph(graph=g, lengths=draw_lengths(g.B, seed=42))
        a = build_assembly(mg, equi_transmitting_sigma(4))
        m2 = np.linalg.matrix_power(classical_map(a), 2)
        for samples in (20, 60):
            mt = m_tilde(a, mg, 2, 120.0, samples)
            assert np.max(np.abs(mt - m2)) < 1e-12


class TestFejer:
    def test_values(self):
        w = fejer(4)
        assert w.weight(0) == pytest.approx(0.25)
        assert w.weight(1) == pytest.approx(0.1875)
        assert w.weight(4) == 0.0
        assert w.weight(-2) == w.weight(2)

    def test_t1_concentrates(self):
        w = fejer(1)
        assert w.weight(0) == 1.0
        assert w.weight(1) == 0.0

    @pytest.mark.parametrize("T", list(range(1, 65)))
    def test_normalisation(self, T):
        assert abs(np.sum(fejer(T).values) - 1.0) < 1e-12

    def test_kernel_at_zero(self):
        assert fejer_kernel(7, 0.0) == 1.0

    def test_kernel_nonnegative(self):
        xs = np.linspace(-20, 20, 2001)
        assert all(fejer_kernel(5, x) >= 0.0 for x in xs)

    def test_kernel_matches_quadrature(self):
        # oracle: numeric quadrature of the window transform
        # integral_{-T}^{T} w_hat(t) e^{i t x} dt, evaluated at 20 points
        T = 6
        for x in np.linspace(-3.0, 3.0, 20):
            integrand = lambda t: (1 - abs(t) / T) / T * np.cos(t * x)
            val, _ = scipy.integrate.quad(integrand, -T, T, limit=200)
            assert abs(val - fejer_kernel(T, x)) < 1e-6

    def test_parameter_error(self):
        with pytest.raises(ParameterError):
            fejer(0)


class TestLemmaA:
    def test_identity_observable_equality(self):
        u = unitary_group.rvs(16, random_state=np.random.default_rng(0))
        lhs, rhs = lemma_a_sides(u, np.eye(16), 5)
        assert lhs == pytest.approx(1.0, abs=1e-10)
        assert rhs == pytest.approx(1.0, abs=1e-10)

    def test_u_identity_diagonal(self):
        a = np.diag(np.arange(1.0, 9.0))
        lhs, rhs = lemma_a_sides(np.eye(8, dtype=complex), a, 4)
        expected = float(np.sum(np.arange(1.0, 9.0) ** 2)) / 8
        assert lhs == pytest.approx(expected, rel=1e-12)
        assert rhs == pytest.approx(expected, rel=1e-12)

    def test_random_triples(self):
        rng = np.random.default_rng(1)
        for i in range(20):
            u = unitary_group.rvs(16, random_state=rng)
            a = np.diag(rng.normal(size=16) + 1j * rng.normal(size=16))
            for T in (2, 5, 10):
                lhs, rhs = lemma_a_sides(u, a, T)
                assert lhs <= rhs + 1e-8

    def test_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            lemma_a_sides(np.ones((4, 4)), np.eye(4), 3)


class TestObservable:
    def test_parity_traceless(self):
        g = generate_random_regular(20, 4, seed=2)
        f = parity_observable(g.bond_index, 1.0)
        assert f.traceless
        assert abs(f.trace()) < 1e-12 * 2 * g.B
        assert f.kappa == pytest.approx(1.0)

    def test_parity_odd_n_recentres(self):
        f = parity_observable(k5().bond_index, 1.0)
        assert f.traceless
        assert f.kappa == pytest.approx(1.2)

    def test_bound_enforced(self):
        with pytest.raises(ValidationError):
            Observable.from_vector([3.0, 0.0], kappa=1.0)

    def test_metric_graph_validation(self):
        g = k5()
        with pytest.raises(ValidationError):
            MetricGraph(graph=g, lengths=np.ones(3))
        with pytest.raises(ValidationError):
            MetricGraph(graph=g, lengths=np.zeros(g.B))
