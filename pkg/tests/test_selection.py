"""DS, DW, and DWS combiners plus the static baselines."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drs.selection import (
    ds_predict,
    dw_predict,
    dw_weights,
    dws_predict,
    static_mean,
    static_median,
)

SCORES = st.lists(
    st.floats(min_value=1e-9, max_value=1e6, allow_nan=False), min_size=1, max_size=40
)
PREDS = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestDs:
    def test_picks_lowest_score(self):
        value, winner = ds_predict([0.5, 0.1, 0.9], [10.0, 20.0, 30.0])
        assert (value, winner) == (20.0, 1)

    def test_tie_goes_to_lowest_index(self):
        value, winner = ds_predict([2.0, 1.0, 1.0], [5.0, 6.0, 7.0])
        assert (value, winner) == (6.0, 1)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_output_is_a_member_prediction(self, data):
        scores = data.draw(SCORES)
        preds = data.draw(
            st.lists(PREDS, min_size=len(scores), max_size=len(scores))
        )
        value, winner = ds_predict(scores, preds)
        assert value == preds[winner]
        assert scores[winner] == min(scores)


class TestDwWeights:
    def test_worked_example(self):
        w = dw_weights([0.04, 0.16])
        assert np.allclose(w.alpha, [2 / 3, 1 / 3], atol=1e-12)
        assert w.selected.all()

    @settings(max_examples=300, deadline=None)
    @given(SCORES)
    def test_sum_to_one_and_monotone(self, scores):
        w = dw_weights(scores)
        assert w.alpha.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(w.alpha > 0)
        order = np.argsort(scores, kind="stable")
        assert np.all(np.diff(w.alpha[order]) <= 1e-12)  # lower score, higher weight

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(
            st.floats(min_value=1e-3, max_value=1e6, allow_nan=False),
            min_size=1,
            max_size=40,
        ),
        st.floats(min_value=1e-3, max_value=1e3),
    )
    def test_invariant_to_positive_rescaling(self, scores, c):
        # scaled scores stay far above the zero-score tolerance, where the
        # weight rule switches to uniform sharing and invariance ends
        a = dw_weights(scores).alpha
        b = dw_weights(np.asarray(scores) * c).alpha
        assert np.max(np.abs(a - b)) < 1e-9

    def test_zero_score_takes_all_weight(self):
        w = dw_weights([0.0, 4.0])
        assert np.array_equal(w.alpha, [1.0, 0.0])

    def test_multiple_zero_scores_share_uniformly(self):
        w = dw_weights([0.0, 2.0, 0.0])
        assert np.array_equal(w.alpha, [0.5, 0.0, 0.5])

    def test_negative_scores_rejected(self):
        with pytest.raises(ValueError, match="nonneg"):
            dw_weights([0.5, -0.1])

    def test_accepts_score_container(self, two_neighbor_region):
        from drs.measures import score_all

        scores = score_all("m3", two_neighbor_region)
        assert dw_weights(scores).alpha[0] == 1.0


class TestDwPredict:
    def test_weighted_mean(self):
        w = dw_weights([0.04, 0.16])
        assert dw_predict(w, [3.0, 9.0]) == pytest.approx(5.0, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_within_member_range(self, data):
        scores = data.draw(SCORES)
        preds = np.array(
            data.draw(st.lists(PREDS, min_size=len(scores), max_size=len(scores)))
        )
        value = dw_predict(dw_weights(scores), preds)
        assert preds.min() - 1e-9 <= value <= preds.max() + 1e-9


class TestDws:
    def test_discards_upper_half_of_score_interval(self):
        value, w = dws_predict([1.0, 2.0, 10.0], [1.0, 1.0, 9.0])
        assert list(w.selected) == [True, True, False]
        assert value == pytest.approx(1.0, abs=1e-12)
        assert w.alpha[2] == 0.0

    def test_keeps_scores_equal_to_threshold(self):
        # interval [0, 10] has midpoint 5; a score of exactly 5 survives
        _, w = dws_predict([0.0, 5.0, 10.0], [0.0, 0.0, 0.0])
        assert list(w.selected) == [True, True, False]

    def test_equal_scores_keep_everyone(self):
        value, w = dws_predict([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])
        assert w.selected.all()
        assert value == pytest.approx(2.0)

    def test_literal_threshold_can_discard_everyone_then_falls_back(self):
        # scores [5, 6, 7]: (max-min)/2 = 1 excludes all; best member kept
        value, w = dws_predict([5.0, 6.0, 7.0], [10.0, 20.0, 30.0], literal_threshold=True)
        assert list(w.selected) == [True, False, False]
        assert value == 10.0

    def test_literal_threshold_differs_from_midpoint(self):
        scores = [5.0, 6.0, 7.0]
        _, mid = dws_predict(scores, [0.0, 0.0, 0.0])
        _, lit = dws_predict(scores, [0.0, 0.0, 0.0], literal_threshold=True)
        assert list(mid.selected) == [True, True, False]
        assert list(lit.selected) == [True, False, False]

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_survivors_nonempty_include_best_and_bound_output(self, data):
        scores = np.array(data.draw(SCORES))
        preds = np.array(
            data.draw(st.lists(PREDS, min_size=len(scores), max_size=len(scores)))
        )
        value, w = dws_predict(scores, preds)
        assert w.selected.any()
        assert w.selected[np.argmin(scores)]
        kept = preds[w.selected]
        assert kept.min() - 1e-9 <= value <= kept.max() + 1e-9
        assert w.alpha[~w.selected].sum() == 0.0
        assert w.alpha.sum() == pytest.approx(1.0, abs=1e-9)


class TestStaticBaselines:
    def test_mean(self):
        assert static_mean([1.0, 2.0, 6.0]) == 3.0

    def test_median_odd_and_even(self):
        assert static_median([5.0, 1.0, 3.0]) == 3.0
        assert static_median([1.0, 2.0, 3.0, 10.0]) == 2.5
