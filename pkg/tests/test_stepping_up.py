import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ref_delta, ref_monotone_run
from stepup import stepping_up as su
from stepup.stepping_up import (
    DeltaSequence,
    ExtremumClass,
    VertexLabel,
    check_property,
    classify,
    count_property_violations,
    delta,
    delta_sequence,
    delta_value,
    find_monotone_run,
    random_increasing_tuples,
)


def V(x, D=8):
    return VertexLabel(x, D)


class TestDelta:
    @pytest.mark.parametrize("u,v,expect", [(0, 1, 0), (3, 4, 2), (5, 6, 1)])
    def test_examples(self, u, v, expect):
        assert delta(V(u), V(v)) == expect

    def test_equal_inputs_rejected(self):
        with pytest.raises(ValueError):
            delta(V(7), V(7))

    def test_width_mismatch_rejected(self):
        with pytest.raises(su.WidthError):
            delta(VertexLabel(1, 4), VertexLabel(1, 5))

    def test_width_cap(self):
        with pytest.raises(su.WidthError):
            VertexLabel(0, 64)
        VertexLabel((1 << 63) - 1, 63)  # max width is fine

    def test_bit_accessor(self):
        v = VertexLabel(0b1011, 4)
        assert [v.bit(i) for i in range(4)] == [1, 1, 0, 1]
        assert v.value == sum(v.bit(i) << i for i in range(4))

    @given(st.integers(0, 2**20 - 1), st.integers(0, 2**20 - 1))
    def test_symmetric_and_matches_reference(self, u, v):
        if u == v:
            return
        d = delta_value(u, v)
        assert d == delta_value(v, u) == ref_delta(u, v, 20)


class TestDeltaSequence:
    @pytest.mark.parametrize(
        "S,expect",
        [
            ((1, 2, 4), (1, 2)),
            ((0, 2, 4, 8), (1, 2, 3)),
            ((0, 16, 18, 22), (4, 1, 2)),
        ],
    )
    def test_examples(self, S, expect):
        assert delta_sequence(S).deltas == expect

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            delta_sequence((2, 1, 4))

    def test_too_short(self):
        with pytest.raises(ValueError):
            delta_sequence((3,))

    @given(st.lists(st.integers(0, 2**16 - 1), min_size=2, max_size=10, unique=True))
    def test_consecutive_deltas_differ(self, vals):
        seq = delta_sequence(sorted(vals))
        assert all(a != b for a, b in zip(seq.deltas, seq.deltas[1:]))


class TestClassify:
    @pytest.mark.parametrize(
        "deltas,i,expect",
        [
            ((1, 3, 2), 2, ExtremumClass.LOCAL_MAX),
            ((3, 1, 2), 2, ExtremumClass.LOCAL_MIN),
            ((1, 2, 3), 2, ExtremumClass.LOCAL_MONOTONE),
        ],
    )
    def test_examples(self, deltas, i, expect):
        seq = DeltaSequence(source=(), bit_width=8, deltas=deltas)
        assert classify(seq, i) == expect

    def test_boundary_rejected(self):
        seq = DeltaSequence(source=(), bit_width=8, deltas=(1, 3, 2))
        for i in (0, 1, 3, 4):
            with pytest.raises(IndexError):
                classify(seq, i)

    @given(st.lists(st.integers(0, 2**14 - 1), min_size=4, max_size=12, unique=True))
    def test_non_monotone_has_extremum(self, vals):
        # distinct consecutive values that are not monotone contain a local
        # extremum (the basic alternation fact)
        seq = delta_sequence(sorted(vals))
        if su.is_monotone(seq.deltas):
            return
        classes = {classify(seq, i) for i in range(2, len(seq.deltas))}
        assert classes & {ExtremumClass.LOCAL_MIN, ExtremumClass.LOCAL_MAX}


class TestProperties:
    def test_property_i_example(self):
        assert check_property("I", (1, 2, 3))

    def test_property_ii_example(self):
        assert check_property("II", (1, 2, 4))
        assert delta_value(1, 4) == 2

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            check_property("I", (1, 2, 3, 4))
        with pytest.raises(ValueError):
            check_property("III", (1, 2, 3))
        with pytest.raises(ValueError):
            check_property("nope", (1, 2, 3))

    @given(st.lists(st.integers(0, 2**18 - 1), min_size=3, max_size=3, unique=True))
    def test_property_i_random(self, vals):
        assert check_property("I", sorted(vals))

    @given(st.lists(st.integers(0, 2**18 - 1), min_size=2, max_size=9, unique=True))
    def test_property_ii_random(self, vals):
        assert check_property("II", sorted(vals))

    @given(st.lists(st.integers(0, 2**18 - 1), min_size=4, max_size=4, unique=True))
    def test_property_iii_random(self, vals):
        assert check_property("III", sorted(vals))

    @given(st.lists(st.integers(0, 2**12 - 1), min_size=4, max_size=8, unique=True))
    @settings(max_examples=50)
    def test_property_iv_random(self, vals):
        assert check_property("IV", sorted(vals))

    def test_bulk_sweep_small(self):
        for which, arity in (("I", 3), ("II", 5), ("III", 4)):
            tuples = random_increasing_tuples(20_000, arity, 20, seed=42)
            assert count_property_violations(which, tuples) == 0

    def test_bulk_counts_rows(self):
        tuples = random_increasing_tuples(1000, 3, 10, seed=1)
        assert tuples.shape == (1000, 3)
        assert (np.diff(tuples, axis=1) > 0).all()


class TestMonotoneRun:
    def test_example_first_window(self):
        seq = DeltaSequence(source=(), bit_width=8, deltas=(1, 2, 3, 4))
        assert find_monotone_run(seq, 3) == 1  # 1-based start

    def test_example_absent(self):
        seq = DeltaSequence(source=(), bit_width=8, deltas=(1, 3, 2, 5, 4))
        assert find_monotone_run(seq, 3) is None

    def test_decreasing_found(self):
        seq = DeltaSequence(source=(), bit_width=8, deltas=(5, 9, 7, 4, 2, 6))
        assert find_monotone_run(seq, 3) == 2  # (9,7,4) at delta_2

    def test_n_too_small(self):
        seq = DeltaSequence(source=(), bit_width=8, deltas=(1, 2))
        with pytest.raises(ValueError):
            find_monotone_run(seq, 1)

    def test_against_window_scan_oracle(self):
        rng = np.random.default_rng(5)
        for trial in range(30):
            deltas = rng.integers(0, 12, size=1000)
            for n in (2, 3, 4, 6):
                got = su.find_monotone_run_raw(deltas, n)
                want = ref_monotone_run(deltas, n)
                assert got == (-1 if want is None else want), (trial, n)
