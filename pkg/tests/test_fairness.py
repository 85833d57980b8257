import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ricbox.env.network import AllocationAction
from ricbox.fairness import FairnessLedger, RewardConfig, fairness_ratio, fairness_shares, reward, update_ledger


def _grant(ue, share=12, bs=0):
    return AllocationAction(((bs, ue, share),))


def test_ledger_counts_accumulate():
    led = FairnessLedger(3, window=100)
    update_ledger(led, _grant(0))
    update_ledger(led, _grant(2, 4))
    update_ledger(led, AllocationAction.empty())
    assert led.counts.tolist() == [12, 0, 4]
    assert len(led.history) == 3


def test_ledger_window_evicts_old_slots():
    led = FairnessLedger(2, window=2)
    update_ledger(led, _grant(0))
    update_ledger(led, _grant(1))
    update_ledger(led, _grant(1))
    assert led.counts.tolist() == [0, 24]


def test_ledger_rejects_unknown_ue():
    with pytest.raises(ValueError):
        update_ledger(FairnessLedger(2), _grant(5))


def test_ledger_copy_is_independent():
    a = FairnessLedger(2)
    update_ledger(a, _grant(0))
    b = a.copy()
    update_ledger(b, _grant(1))
    assert a.counts.tolist() == [12, 0]
    assert b.counts.tolist() == [12, 12]


@pytest.mark.parametrize(
    "counts, ratio",
    [([0, 0, 0], 1.0), ([5, 5], 1.0), ([12, 0, 6], 0.0), ([10, 5], 0.5), ([4, 8, 6], 0.5)],
)
def test_fairness_ratio_examples(counts, ratio):
    assert fairness_ratio(np.array(counts)) == ratio


def test_shares_examples():
    assert fairness_shares(np.array([0, 0])).tolist() == [1.0, 1.0]
    assert fairness_shares(np.array([2, 8, 4])).tolist() == [0.25, 1.0, 0.5]


counts_st = st.lists(st.integers(0, 10_000), min_size=1, max_size=12)


@pytest.mark.invariant
@given(counts_st)
def test_ratio_bounds(counts):
    r = fairness_ratio(np.array(counts))
    assert 0.0 <= r <= 1.0
    if len(set(counts)) == 1:
        assert r == 1.0


@pytest.mark.invariant
@given(counts_st, st.randoms())
def test_ratio_permutation_invariant(counts, rnd):
    perm = list(counts)
    rnd.shuffle(perm)
    assert fairness_ratio(np.array(counts)) == fairness_ratio(np.array(perm))


@pytest.mark.invariant
@given(st.lists(st.integers(0, 1000), min_size=2, max_size=10), st.integers(1, 100))
def test_topping_up_the_minimum_never_lowers_ratio(counts, extra):
    c = np.array(counts)
    before = fairness_ratio(c)
    c2 = c.copy()
    lo = int(np.argmin(c2))
    c2[lo] = min(c2[lo] + extra, c2.max()) if c2.max() > 0 else c2[lo]
    assert fairness_ratio(c2) >= before


@pytest.mark.invariant
@given(counts_st)
def test_shares_in_unit_interval(counts):
    s = fairness_shares(np.array(counts))
    assert np.all((s >= 0) & (s <= 1))
    assert s.max() == 1.0


def test_reward_none_connected_is_penalty():
    assert reward(np.zeros(4), np.ones(4), np.zeros(4, bool), 1.0) == -1.0
    assert reward(np.zeros(4), np.ones(4), np.zeros(4, bool), 0.3, RewardConfig(failure_penalty=-7.0)) == -7.0


def test_reward_examples():
    d = np.ones(4)
    # one of four UEs fully served, fairness 1
    assert reward(np.array([1.0, 0, 0, 0]), d, np.array([1, 0, 0, 0], bool), 1.0) == 0.25
    # two connected at half rate, fairness 0.5
    assert reward(np.array([0.5, 0.5, 0, 0]), d, np.array([1, 1, 0, 0], bool), 0.5) == pytest.approx(0.5 * 0.5 * 0.5)
    # everyone served fully and fairly
    assert reward(d, d, np.ones(4, bool), 1.0) == 1.0
    assert reward(d, d, np.ones(4, bool), 1.0, RewardConfig(full_reward=3.0)) == 3.0


@pytest.mark.invariant
@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=10), st.floats(0, 1))
def test_reward_bounds(ues, fr):
    rates = np.array([r for r, _ in ues])
    conn = np.array([c for _, c in ues])
    r = reward(rates, np.ones(len(ues)), conn, fr)
    if conn.any():
        assert 0.0 <= r <= 1.0
    else:
        assert r == -1.0
