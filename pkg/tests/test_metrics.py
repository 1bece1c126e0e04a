import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asciikit.metrics import (
    ZeroVariance,
    calibrate,
    fractional_ranks,
    mean_squared_error,
    pearson,
    spearman,
)
from oracles import oracle_mse, oracle_pearson, oracle_spearman, random_vector_pair


class TestRanks:
    def test_plain(self):
        assert list(fractional_ranks([10, 30, 20])) == [1, 3, 2]

    def test_average_ties(self):
        assert list(fractional_ranks([1, 2, 2, 3])) == [1, 2.5, 2.5, 4]

    def test_all_tied(self):
        assert list(fractional_ranks([5, 5, 5])) == [2, 2, 2]


class TestCalibrate:
    def test_identical_vectors(self):
        rep = calibrate([0.1, 0.4, 0.9], [0.1, 0.4, 0.9])
        assert rep.pearson == pytest.approx(1.0)
        assert rep.spearman == pytest.approx(1.0)
        assert rep.mse == 0.0

    def test_rank_reversal(self):
        rep = calibrate([1, 2, 3, 4], [9, 7, 5, 3])
        assert rep.spearman == pytest.approx(-1.0)

    def test_frozen_example(self):
        # oracle-computed: d = (-1, 1, -1, 1, 0) on identity ranks
        rep = calibrate([1, 2, 3, 4, 5], [2, 1, 4, 3, 5])
        assert rep.spearman == pytest.approx(0.8, abs=1e-12)
        assert rep.pearson == pytest.approx(0.8, abs=1e-12)
        assert rep.mse == pytest.approx(0.8, abs=1e-12)

    def test_zero_variance_keeps_mse(self):
        with pytest.raises(ZeroVariance) as exc:
            calibrate([1.0, 1.0, 1.0], [0.0, 1.0, 2.0])
        assert exc.value.mse == pytest.approx((1 + 0 + 1) / 3)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            calibrate([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(ValueError):
            calibrate([1], [1])

    def test_matches_oracle_on_random_pairs(self):
        rng = random.Random(7)
        for _ in range(100):
            x, y = random_vector_pair(rng, max_len=40)
            rep = calibrate(x, y)
            assert rep.pearson == pytest.approx(oracle_pearson(x, y), abs=1e-9)
            assert rep.spearman == pytest.approx(oracle_spearman(x, y), abs=1e-9)
            assert rep.mse == pytest.approx(oracle_mse(x, y), abs=1e-9)


class TestSpearmanProperties:
    @given(
        st.lists(st.integers(min_value=0, max_value=8), min_size=2, max_size=30).filter(
            lambda v: len(set(v)) > 1
        ),
        st.lists(st.integers(min_value=0, max_value=8), min_size=2, max_size=30).filter(
            lambda v: len(set(v)) > 1
        ),
    )
    @settings(max_examples=200, deadline=None)
    def test_monotone_transform_invariance(self, x, y):
        n = min(len(x), len(y))
        x, y = x[:n], y[:n]
        if len(set(x)) < 2 or len(set(y)) < 2:
            return
        base = spearman(x, y)
        stretched = [3.0 * v + 1.0 for v in x]
        cubed = [v**3 for v in y]
        assert spearman(stretched, y) == pytest.approx(base, abs=1e-9)
        assert spearman(x, cubed) == pytest.approx(base, abs=1e-9)

    def test_bounds(self):
        rng = random.Random(3)
        for _ in range(50):
            x, y = random_vector_pair(rng, max_len=30)
            assert -1.0 - 1e-12 <= spearman(x, y) <= 1.0 + 1e-12


def test_mse_requires_equal_length():
    with pytest.raises(ValueError):
        mean_squared_error([1.0], [1.0, 2.0])


def test_pearson_rejects_matrices():
    with pytest.raises(ValueError):
        pearson([[1.0, 2.0]], [[1.0, 2.0]])
