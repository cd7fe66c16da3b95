from fractions import Fraction

import pytest

from stepup.bounds import (
    BoundStatement,
    OverflowCapError,
    corollary_arithmetic,
    er_upper_from_certificate,
    external_er_lower,
    floor_scaled_sqrt,
    log2_floor_root,
    ramsey_lower_from_witness,
    ramsey_tower_statement,
    recursion_bound,
    twr,
)
from stepup.hypergraphs import certify_er_upper, complete_hypergraph, empty_hypergraph


class TestTower:
    @pytest.mark.parametrize("i,x,expect", [(1, 5, 5), (3, 2, 16), (4, 2, 65536)])
    def test_examples(self, i, x, expect):
        assert twr(i, x) == expect

    def test_monotone_in_both_arguments(self):
        for x in (2, 3, 4):
            assert twr(1, x) < twr(2, x) < twr(3, x)
        for i in (1, 2, 3):
            assert twr(i, 2) < twr(i, 3) < twr(i, 4)

    def test_height_validation(self):
        with pytest.raises(ValueError):
            twr(0, 3)

    def test_digit_cap(self):
        with pytest.raises(OverflowCapError):
            twr(4, 5)  # 2^(2^32) is far past a million digits
        assert twr(3, 5) == 1 << 32


class TestRamseyFromWitness:
    def test_k5_pipeline(self):
        H = complete_hypergraph(5, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")
        stmt = ramsey_lower_from_witness(cert, 4)
        assert stmt.kind == "RamseyLower"
        assert stmt.params == {"k": 4, "s": 6, "n": 4, "N": 5}
        assert stmt.value == 5
        assert len(stmt.provenance) == 1
        assert "certificate" in stmt.provenance[0]

    def test_monotone_in_n(self):
        H = complete_hypergraph(5, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")  # alpha=3, m=4
        for n in (4, 5, 10):
            assert ramsey_lower_from_witness(cert, n).params["n"] == n
        with pytest.raises(ValueError):
            ramsey_lower_from_witness(cert, 3)  # n <= alpha gives nothing

    def test_empty_graph_rejected_below_alpha(self):
        H = empty_hypergraph(8, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")  # alpha = 8, m = 9
        with pytest.raises(ValueError):
            ramsey_lower_from_witness(cert, 8)
        assert ramsey_lower_from_witness(cert, 9).value == 8

    def test_pattern_family_needs_t1(self):
        H = empty_hypergraph(8, 4)
        cert = certify_er_upper(H, 6, 2, family="pattern")
        with pytest.raises(ValueError):
            ramsey_lower_from_witness(cert, 20)

    def test_pattern_t1_accepted(self):
        H = empty_hypergraph(8, 4)
        cert = certify_er_upper(H, 6, 1, family="pattern")  # alpha = 8
        stmt = ramsey_lower_from_witness(cert, 9)
        assert stmt.params["N"] == 8


class TestRecursion:
    def test_inner_argument_examples(self):
        assert log2_floor_root(1 << 16, 3) == 4  # floor(sqrt(16))
        assert log2_floor_root(1 << 81, 4) == 4  # floor(81^(1/3))
        assert log2_floor_root(1 << 80, 4) == 4
        assert log2_floor_root(1 << 124, 4) == 4
        assert log2_floor_root(1 << 125, 4) == 5

    def test_lift_and_chain(self):
        base = external_er_lower(k=2, t=3, s=4, N=4, value=2)
        lvl3 = recursion_bound(3, 4, 5, 1 << 16, base)
        assert lvl3.value == 2
        assert lvl3.params == {"k": 3, "t": 4, "s": 5, "N": 1 << 16}
        # chain once more: need floor((log2 N)^(1/3)) = 16 -> N = 2^(16^3)
        lvl3b = external_er_lower(k=3, t=3, s=5, N=4, value=7)
        lvl4 = recursion_bound(4, 4, 6, 1 << 81, lvl3b)
        assert lvl4.value == 7
        assert len(lvl4.provenance) == 2
        assert lvl4.provenance[-1].startswith("asserted-external:")

    def test_argument_mismatch_rejected(self):
        base = external_er_lower(k=2, t=3, s=4, N=5, value=2)
        with pytest.raises(ValueError):
            recursion_bound(3, 4, 5, 1 << 16, base)  # needs N=4, not 5
        base2 = external_er_lower(k=2, t=2, s=4, N=4, value=2)
        with pytest.raises(ValueError):
            recursion_bound(3, 4, 5, 1 << 16, base2)  # t mismatch


class TestCorollaryArithmetic:
    def test_example(self):
        assert corollary_arithmetic(1, 16) == 65536

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            corollary_arithmetic(1, 4)

    def test_monotone_in_n(self):
        vals = [corollary_arithmetic(Fraction(1, 2), n) for n in range(5, 40)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_exact_floor(self):
        assert floor_scaled_sqrt(Fraction(1, 2), 16) == 2
        assert floor_scaled_sqrt(Fraction(3, 2), 9) == 4
        assert floor_scaled_sqrt(Fraction(1), 2) == 1

    def test_statement_labeled_external(self):
        stmt = ramsey_tower_statement(Fraction(1, 2), 16)
        assert stmt.provenance == ("asserted-external:double-exponential-corollary",)
        assert stmt.params["c"] == "1/2"


class TestBoundStatement:
    def test_json_roundtrip(self):
        H = complete_hypergraph(5, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")
        stmt = ramsey_lower_from_witness(cert, 4)
        back = BoundStatement.from_json(stmt.to_json())
        assert back == stmt

    def test_er_upper_statement(self):
        H = complete_hypergraph(5, 4)
        cert = certify_er_upper(H, 6, 4, family="clique")
        stmt = er_upper_from_certificate(cert)
        assert stmt.kind == "ErUpper" and stmt.value == 3
        assert stmt.params["F"] == "K4"

    def test_unlabeled_provenance_rejected(self):
        with pytest.raises(ValueError):
            BoundStatement("ErLower", {}, 1, ("trust me",))
        with pytest.raises(ValueError):
            BoundStatement("ErLower", {}, 1, ())

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            BoundStatement("Nope", {}, 1, ("asserted-external:x",))
