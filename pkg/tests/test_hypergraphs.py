from itertools import combinations

import numpy as np
import pytest

from oracles import ref_alpha, ref_contains_embedding
from stepup.colorings import Exhaustive, Sampled, random_coloring
from stepup.constructions import build_hypergraph
from stepup.errors import BudgetExceededError
from stepup.hypergraphs import (
    Certificate,
    Hypergraph,
    Rejection,
    alpha_clique,
    alpha_pattern,
    certify_er_upper,
    complete_hypergraph,
    contains_pattern,
    count_edges_within,
    empty_hypergraph,
    hypergraph_from_text,
    hypergraph_to_text,
    is_clique_free,
    random_hypergraph,
    verify_certificate,
)


class TestHypergraphBasics:
    def test_edge_validation(self):
        with pytest.raises(ValueError):
            Hypergraph(4, 10, edges=np.array([[0, 2, 1, 3]]))
        with pytest.raises(ValueError):
            Hypergraph(4, 4, edges=np.array([[0, 1, 2, 4]]))
        with pytest.raises(ValueError):
            Hypergraph(4, 6, edges=np.array([[0, 1, 2, 3], [0, 1, 2, 3]]))

    def test_has_edge_any_order(self):
        H = Hypergraph(4, 8, edges=np.array([[0, 1, 2, 3]]))
        assert H.has_edge((3, 1, 0, 2))
        assert not H.has_edge((0, 1, 2, 4))
        with pytest.raises(ValueError):
            H.has_edge((0, 1, 2))

    def test_file_roundtrip(self):
        H = random_hypergraph(9, 4, 0.3, seed=2)
        text = hypergraph_to_text(H)
        back = hypergraph_from_text(text)
        assert back.k == 4 and back.N == 9
        assert (back.edges == H.edges).all()
        assert text.splitlines()[0] == "format=1 k=4 N=9"

    def test_oracle_list_consistency(self):
        edges = [[0, 1, 2, 3], [1, 2, 3, 4]]
        es = set(map(tuple, edges))
        H = Hypergraph(4, 6, edges=np.array(edges), oracle=lambda t: t in es)
        assert H.check_oracle_consistency()
        H_bad = Hypergraph(4, 6, edges=np.array(edges), oracle=lambda t: False)
        assert not H_bad.check_oracle_consistency()


class TestContainsPattern:
    def test_complete_k5(self):
        H = complete_hypergraph(5, 4)
        w = contains_pattern(H, range(5), 4)
        assert w == (0, 1, 2, 3, 4)

    def test_empty(self):
        H = empty_hypergraph(10, 4)
        assert contains_pattern(H, range(10), 1) is None

    def test_t_validation(self):
        H = empty_hypergraph(10, 4)
        with pytest.raises(ValueError):
            contains_pattern(H, range(10), 6)

    def test_agrees_with_embedding_search(self):
        # the edge-count criterion against explicit pattern embeddings
        rng = np.random.default_rng(0)
        for trial in range(15):
            H = random_hypergraph(10, 4, rng.uniform(0.05, 0.6), seed=trial)
            es = set(map(tuple, H.edges.tolist()))
            for t in (1, 2, 3, 4, 5):
                got = contains_pattern(H, range(10), t)
                brute = None
                for W in combinations(range(10), 5):
                    if ref_contains_embedding(es, W, 4, t):
                        brute = W
                        break
                assert (got is None) == (brute is None), (trial, t)
                if got is not None:
                    assert count_edges_within(H, got) >= t

    def test_edge_count_iff_embedding(self):
        # on five vertices: >= t edges <=> a t-edge pattern embeds
        rng = np.random.default_rng(1)
        for trial in range(40):
            H = random_hypergraph(5, 4, rng.uniform(0, 1), seed=100 + trial)
            es = set(map(tuple, H.edges.tolist()))
            W = tuple(range(5))
            for t in (1, 2, 3, 4, 5):
                assert (count_edges_within(H, W) >= t) == ref_contains_embedding(
                    es, W, 4, t
                )


class TestCliqueFree:
    def test_complete_k6_not_free(self):
        H = complete_hypergraph(6, 4)
        rep = is_clique_free(H, 6)
        assert not rep.free and rep.witness == (0, 1, 2, 3, 4, 5)

    def test_empty_free(self):
        for s in (5, 6, 7):
            assert is_clique_free(empty_hypergraph(12, 4), s).free

    def test_small_n_trivially_free(self):
        assert is_clique_free(complete_hypergraph(5, 4), 6).free

    def test_s_validation(self):
        with pytest.raises(ValueError):
            is_clique_free(empty_hypergraph(10, 4), 4)

    def test_budget(self):
        H = empty_hypergraph(128, 4)
        with pytest.raises(BudgetExceededError):
            is_clique_free(H, 6, Exhaustive(), max_subsets=10**6)

    def test_exhaustive_free_implies_sampled_free(self, rs4):
        phi = random_coloring(5, 3)
        H = build_hypergraph(rs4, phi)
        assert is_clique_free(H, 6, Exhaustive()).free
        for seed in range(3):
            assert is_clique_free(H, 6, Sampled(2000, seed=seed)).free

    def test_planted_clique_found_sampled(self):
        # plant a 6-clique in an otherwise sparse graph; the sampled scan
        # over a lazy oracle must eventually hit it
        clique = (1, 2, 3, 4, 5, 6)
        cset = set(combinations(clique, 4))
        H = Hypergraph(4, 16, oracle=lambda t: t in cset, provenance={"source": "planted"})
        rep = is_clique_free(H, 6, Sampled(40000, seed=1))
        assert not rep.free and rep.witness == clique

    def test_generic_s_scan(self):
        # s=5 exhaustive over an explicit graph
        H = complete_hypergraph(7, 4)
        rep = is_clique_free(H, 5)
        assert not rep.free and rep.witness == (0, 1, 2, 3, 4)


class TestAlpha:
    def test_empty_pattern_t1(self):
        res = alpha_pattern(empty_hypergraph(10, 4), 1)
        assert res.value == 10

    def test_complete_k5_pattern_t4(self):
        res = alpha_pattern(complete_hypergraph(5, 4), 4)
        assert res.value == 4

    def test_complete_k5_clique_t4(self):
        res = alpha_clique(complete_hypergraph(5, 4), 4)
        assert res.value == 3

    def test_empty_clique(self):
        assert alpha_clique(empty_hypergraph(9, 4), 4).value == 9

    def test_h1_freeness_of_edge_sized_sets(self):
        # a k-set that is an edge still hosts no (k+1)-vertex pattern
        H = complete_hypergraph(5, 4)
        res = alpha_pattern(H, 1)
        assert res.value == 4
        assert count_edges_within(H, res.witness) >= 1  # witness spans an edge

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            alpha_pattern(empty_hypergraph(80, 4), 2, max_n=64)

    def test_against_enumeration_oracle(self):
        rng = np.random.default_rng(9)
        for trial in range(8):
            H = random_hypergraph(12, 4, rng.uniform(0.1, 0.7), seed=200 + trial)
            rows = H.edges.tolist()
            prev = 0
            for t in (1, 2, 3, 4, 5):
                res = alpha_pattern(H, t)
                want, _ = ref_alpha(12, 4, rows, t, "pattern")
                assert res.value == want, (trial, t)
                assert contains_pattern(H, res.witness, t) is None
                assert res.value >= prev  # monotone in t
                prev = res.value
            for t in (4, 5):
                res = alpha_clique(H, t)
                want, _ = ref_alpha(12, 4, rows, t, "clique")
                assert res.value == want, (trial, t)

    def test_witness_is_valid_and_optimal_size(self):
        H = random_hypergraph(12, 4, 0.4, seed=77)
        res = alpha_pattern(H, 2)
        assert len(res.witness) == res.value
        assert contains_pattern(H, res.witness, 2) is None


class TestCertificates:
    def test_er_upper_clique_family_k5(self):
        H = complete_hypergraph(5, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")
        assert isinstance(cert, Certificate)
        assert cert.m == 4  # alpha_clique = 3
        assert cert.s_or_t == {"s": 6, "t": 4}
        assert verify_certificate(cert, H)

    def test_er_upper_rejects_clique(self):
        H = complete_hypergraph(6, 4)
        rej = certify_er_upper(H, 6, 1)
        assert isinstance(rej, Rejection)
        assert rej.reason == "clique-found"
        assert rej.witness == (0, 1, 2, 3, 4, 5)

    def test_er_upper_rejects_large_alpha(self):
        H = empty_hypergraph(8, 4)
        rej = certify_er_upper(H, 6, 1, m=5)
        assert isinstance(rej, Rejection)
        assert rej.reason == "alpha-not-below-m"

    def test_er_upper_section4_n32(self, rs4):
        phi = random_coloring(5, 21)
        H = build_hypergraph(rs4, phi)
        cert = certify_er_upper(H, 6, 2, family="pattern")
        assert isinstance(cert, Certificate)
        alpha = alpha_pattern(H, 2)
        assert cert.m == alpha.value + 1
        assert cert.provenance["ruleset"] == "section4"
        assert verify_certificate(cert, H)

    def test_json_roundtrip(self):
        cert = Certificate(
            kind="AlphaBound", k=4, s_or_t={"t": 2}, N=32, m=14,
            witness=(1, 2, 3), provenance={"ruleset": "section4"},
            recheck="alpha_pattern(t=2).value == 13",
        )
        back = Certificate.from_json(cert.to_json())
        assert back == cert
        assert cert.to_json().startswith('{\n  "format": 1')

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            Certificate("Nope", 4, 6, 5, None, (), {}, "")

    def test_verify_certificate_kinds(self):
        H = complete_hypergraph(6, 4)
        clique_cert = Certificate(
            "CliqueFound", 4, 6, 6, None, (0, 1, 2, 3, 4, 5), {}, ""
        )
        assert verify_certificate(clique_cert, H)
        pat_cert = Certificate("PatternFound", 4, {"t": 3}, 6, None, (0, 1, 2, 3, 4), {}, "")
        assert verify_certificate(pat_cert, H)
        free_cert = Certificate("FreenessChecked", 4, 7, 6, None, (), {}, "")
        assert verify_certificate(free_cert, H)  # only 6 vertices: 7-free
        assert not verify_certificate(clique_cert, empty_hypergraph(6, 4))
