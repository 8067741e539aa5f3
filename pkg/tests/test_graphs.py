import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qge import (
    Graph,
    ParameterError,
    ParseError,
    SamplingError,
    ValidationError,
    export_graph,
    generate_random_regular,
    girth,
    import_graph,
    is_ramanujan,
    spectral_report,
)

from conftest import cage46, k5, k5_chain, oracle_girth, petersen


class TestGraphInvariants:
    def test_k5_counts(self):
        g = k5()
        assert g.B == 10
        assert 2 * g.B == g.n * g.d

    def test_adjacency_row_sums(self):
        g = petersen()
        c = g.adjacency
        assert np.array_equal(c, c.T)
        assert np.all(np.diag(c) == 0)
        assert np.all(c.sum(axis=1) == g.d)

    def test_rejects_self_loop(self):
        with pytest.raises(ValidationError, match="self-loop"):
            Graph(n=2, d=2, edges=((0, 0), (0, 1)))

    def test_rejects_repeated_edge(self):
        edges = tuple((u, v) for u in range(5) for v in range(u + 1, 5))
        with pytest.raises(ValidationError, match="repeated"):
            Graph(n=5, d=4, edges=edges[:-1] + (edges[0],))

    def test_rejects_wrong_degree(self):
        with pytest.raises(ValidationError, match="degree"):
            Graph(n=4, d=3, edges=((0, 1), (1, 2), (2, 3), (3, 0), (0, 2)))


class TestGenerator:
    def test_k4_unique(self):
        # the only simple 3-regular graph on 4 vertices is complete
        g = generate_random_regular(4, 3, seed=123)
        assert frozenset(map(frozenset, g.edges)) == frozenset(
            frozenset((u, v)) for u in range(4) for v in range(u + 1, 4)
        )

    def test_k5_unique(self):
        g = generate_random_regular(5, 4, seed=9)
        assert g.B == 10

    def test_n20_d4(self):
        g = generate_random_regular(20, 4, seed=1)
        assert g.B == 40
        assert np.all(g.adjacency.sum(axis=1) == 4)

    def test_deterministic(self):
        a = generate_random_regular(20, 4, seed=7)
        b = generate_random_regular(20, 4, seed=7)
        assert a.edges == b.edges

    def test_seed_dependence(self):
        a = generate_random_regular(30, 4, seed=1)
        b = generate_random_regular(30, 4, seed=2)
        assert a.edges != b.edges

    def test_parity_error(self):
        with pytest.raises(ParameterError):
            generate_random_regular(5, 3, seed=0)

    def test_range_errors(self):
        with pytest.raises(ParameterError):
            generate_random_regular(4, 4, seed=0)
        with pytest.raises(ParameterError):
            generate_random_regular(10, 2, seed=0)

    def test_rejection_budget(self):
        with pytest.raises(SamplingError):
            generate_random_regular(20, 4, seed=0, max_attempts=0)

    @settings(max_examples=20, deadline=None)
    @given(
        n=st.sampled_from([8, 10, 12, 14, 16]),
        d=st.sampled_from([3, 4]),
        seed=st.integers(min_value=0, max_value=2**63 - 1),
    )
    def test_generated_graphs_valid(self, n, d, seed):
        if (n * d) % 2:
            n += 1
        g = generate_random_regular(n, d, seed)
        assert np.all(g.adjacency.sum(axis=1) == d)
        assert 2 * g.B == g.n * g.d


class TestImportExport:
    def test_round_trip_k5(self):
        g = k5()
        text = export_graph(g)
        assert text.splitlines()[0] == "5 4"
        g2 = import_graph(text)
        assert g2.edges == g.edges

    def test_repeated_edge_rejected(self):
        text = "3 2\n0 1\n0 1\n1 2\n"
        with pytest.raises(ValidationError, match="repeated"):
            import_graph(text)

    def test_degree_violation_rejected(self):
        # header claims d=4 but vertex degrees are 3
        pet = petersen()
        text = "10 4\n" + "\n".join(f"{u} {v}" for u, v in pet.edges) + "\n"
        with pytest.raises(ValidationError):
            import_graph(text)

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            import_graph("")
        with pytest.raises(ParseError):
            import_graph("5\n0 1\n")
        with pytest.raises(ParseError):
            import_graph("2 1\n0 x\n")

    def test_edge_count_mismatch(self):
        with pytest.raises(ValidationError, match="edges"):
            import_graph("4 3\n0 1\n")


class TestSpectralReport:
    def test_k5(self):
        rep = spectral_report(k5())
        assert rep.mu[0] == pytest.approx(4.0, abs=1e-9)
        assert rep.mu[1:] == pytest.approx((-1.0,) * 4, abs=1e-9)
        assert rep.beta == pytest.approx(3.0, abs=1e-9)
        assert rep.girth == 3
        assert rep.is_connected and not rep.is_bipartite

    def test_petersen(self):
        # oracle: eigensolve directly on the hard-coded adjacency
        pet = petersen()
        mu_oracle = np.sort(np.linalg.eigvalsh(pet.adjacency.astype(float)))[::-1]
        rep = spectral_report(pet)
        assert np.allclose(rep.mu, mu_oracle, atol=1e-9)
        # known spectrum: 3 once, 1 five times, -2 four times
        assert rep.mu[0] == pytest.approx(3.0, abs=1e-9)
        assert rep.mu[1:6] == pytest.approx((1.0,) * 5, abs=1e-9)
        assert rep.mu[6:] == pytest.approx((-2.0,) * 4, abs=1e-9)
        assert rep.beta == pytest.approx(1.0, abs=1e-9)
        assert rep.girth == 5

    def test_cage_bipartite(self):
        rep = spectral_report(cage46())
        assert rep.is_bipartite
        assert rep.girth == 6
        assert rep.mu[-1] == pytest.approx(-4.0, abs=1e-9)

    def test_disconnected_components(self):
        edges = k5().edges
        shifted = tuple((u + 5, v + 5) for u, v in edges)
        g = Graph(n=10, d=4, edges=edges + shifted)
        rep = spectral_report(g)
        assert not rep.is_connected
        # two +4 eigenvalues, both trivial
        assert rep.mu[0] == pytest.approx(4.0, abs=1e-9)
        assert rep.mu[1] == pytest.approx(4.0, abs=1e-9)
        assert rep.beta == pytest.approx(3.0, abs=1e-9)

    def test_girth_matches_bond_walk_oracle(self):
        for g in [k5(), petersen(), cage46(), k5_chain(4)]:
            assert girth(g) == oracle_girth(g)
        for seed in range(5):
            g = generate_random_regular(24, 4, seed=seed)
            assert girth(g) == oracle_girth(g)


class TestRamanujan:
    def test_k5_true(self):
        assert is_ramanujan(spectral_report(k5())) is True

    def test_petersen_true(self):
        # non-trivial |mu| <= 2 <= 2 sqrt(2)
        assert is_ramanujan(spectral_report(petersen())) is True

    def test_gadget_chain_false(self):
        # long chain of K5 gadgets imported from text: tiny measured gap
        g = import_graph(export_graph(k5_chain(6)))
        rep = spectral_report(g)
        assert rep.beta < 0.2
        assert is_ramanujan(rep) is False
        # oracle: direct eigensolve comparison against the threshold
        mu = np.sort(np.linalg.eigvalsh(g.adjacency.astype(float)))[::-1]
        assert np.max(np.abs(mu[1:])) > 2 * np.sqrt(3) + 1e-9

    def test_bipartite_rejected(self):
        with pytest.raises(ValidationError):
            is_ramanujan(spectral_report(cage46()))

    def test_disconnected_rejected(self):
        edges = k5().edges
        shifted = tuple((u + 5, v + 5) for u, v in edges)
        rep = spectral_report(Graph(n=10, d=4, edges=edges + shifted))
        with pytest.raises(ValidationError):
            is_ramanujan(rep)


def test_bond_index_involution():
    bi = petersen().bond_index
    for b in range(bi.num_directed):
        assert bi.rev[bi.rev[b]] == b
        assert bi.rev[b] != b
        assert bi.heads[b] == bi.tails[bi.rev[b]]


def test_bond_index_slots_consistent():
    bi = k5().bond_index
    # the incoming slot of b at head(b) equals the outgoing slot of rev(b)
    for b in range(bi.num_directed):
        assert bi.slot[b] == bi.slot_out[bi.rev[b]]
