import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from banditrmhc.bandit import (
    TIE_BREAK,
    ArmStats,
    GeneBandit,
    GeneBanditArray,
    UndefinedMeanError,
    arm_mean,
    record_outcome,
    select_gene,
    urgency,
    urgencies,
    write_bandit_stats,
)
from banditrmhc.fitness import PreconditionError, make_rng

EXPLORE_1 = math.sqrt(math.log(2) / 2)  # 0.588705...


def gene(p0=0, s0=0.0, p1=0, s1=0.0):
    return GeneBandit((ArmStats(p0, s0), ArmStats(p1, s1)))


def test_arm_mean_examples():
    assert arm_mean(ArmStats(1, 1.0)) == 1.0
    assert arm_mean(ArmStats(2, 1.0)) == 0.5
    with pytest.raises(UndefinedMeanError):
        arm_mean(ArmStats(0, 0.0))


def test_arm_stats_invariant():
    with pytest.raises(PreconditionError):
        ArmStats(0, 1.0)


def test_urgency_examples():
    rng = make_rng(0)
    assert urgency(gene(), rng) == math.inf
    u = urgency(gene(p1=1, s1=1.0), rng)
    assert abs(u - (-0.4113)) < 1e-4
    assert -1 + EXPLORE_1 <= u <= -1 + EXPLORE_1 + TIE_BREAK
    u = urgency(gene(p0=1, s0=-1.0), rng)
    assert 1 + EXPLORE_1 <= u <= 1 + EXPLORE_1 + TIE_BREAK
    assert abs(u - 1.5887) < 1e-4


def test_urgency_uses_best_arm_pulls():
    # best arm is arm 1 (mean 0.5, 2 pulls); arm 0 has mean -1 over 3 pulls
    u = urgency(gene(3, -3.0, 2, 1.0), make_rng(0))
    expected = -0.5 + math.sqrt(math.log(6) / 4)
    assert expected <= u <= expected + TIE_BREAK


def test_urgency_total_override():
    u = urgency(gene(p1=1, s1=1.0), make_rng(0), total=99)
    expected = -1 + math.sqrt(math.log(100) / 2)
    assert expected <= u <= expected + TIE_BREAK


def test_record_outcome_examples():
    arr = GeneBanditArray(4)
    record_outcome(arr, 2, 1, 1.0)
    g = arr[2]
    assert g.total == 1 and g.arms[1].pulls == 1 and arm_mean(g.arms[1]) == 1.0
    record_outcome(arr, 2, 1, 0.0)
    g = arr[2]
    assert g.arms[1].pulls == 2 and arm_mean(g.arms[1]) == 0.5
    record_outcome(arr, 2, 0, -1.0)
    g = arr[2]
    assert g.total == 3 and g.arms[0].pulls == 1 and arm_mean(g.arms[0]) == -1.0
    assert arm_mean(g.arms[1]) == 0.5
    assert arr.total_selections == 3
    assert arr.gene_totals().tolist() == [0, 0, 3, 0]


def test_record_outcome_rejects_bad_input():
    arr = GeneBanditArray(3)
    with pytest.raises(PreconditionError):
        record_outcome(arr, 3, 0, 1.0)
    with pytest.raises(PreconditionError):
        record_outcome(arr, 0, 2, 1.0)


def test_empty_array_rejected():
    with pytest.raises(PreconditionError):
        GeneBanditArray(0)


def test_select_unvisited_first():
    arr = GeneBanditArray(2)
    record_outcome(arr, 1, 1, 5.0)
    assert select_gene(arr, make_rng(0)) == 0


def test_select_larger_urgency_wins():
    arr = GeneBanditArray(2)
    record_outcome(arr, 0, 0, -1.0)  # urgency ~ 1.5887
    record_outcome(arr, 1, 1, 1.0)   # urgency ~ -0.4113
    rng = make_rng(1)
    assert all(select_gene(arr, rng) == 0 for _ in range(100))


def test_select_symmetric_ties_are_uniform():
    n, trials = 4, 100_000
    arr = GeneBanditArray(n)
    for i in range(n):
        record_outcome(arr, i, 1, 1.0)
    rng = make_rng(2024)
    counts = np.bincount([select_gene(arr, rng) for _ in range(trials)], minlength=n)
    freq = counts / trials
    three_sigma = 3 * math.sqrt(0.25 * 0.75 / trials)
    assert np.all(np.abs(freq - 0.25) <= three_sigma)


def test_bandit_stats_dump(tmp_path):
    arr = GeneBanditArray(2)
    record_outcome(arr, 0, 1, 2.0)
    path = tmp_path / "stats.csv"
    write_bandit_stats(arr, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "gene_index,N0,N1,mean_delta0,mean_delta1"
    assert lines[1] == "0,0,1,,2.0"
    assert lines[2] == "1,0,0,,"


outcomes = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 1),
                              st.floats(-10, 10, allow_nan=False)), max_size=60)


@given(outcomes)
def test_accounting(events):
    arr = GeneBanditArray(6)
    for i, j, d in events:
        record_outcome(arr, i, j, d)
    assert arr.total_selections == len(events)
    assert int(arr.pulls.sum()) == len(events)


@given(st.integers(1, 40), st.integers(0, 2**32))
def test_first_n_selections_are_distinct(n, seed):
    arr = GeneBanditArray(n)
    rng = make_rng(seed)
    chosen = []
    for _ in range(n):
        i = select_gene(arr, rng)
        assert arr.gene_totals()[i] == 0
        chosen.append(i)
        record_outcome(arr, i, int(rng.integers(2)), float(rng.normal()))
    assert sorted(chosen) == list(range(n))


@given(st.integers(1, 20), st.integers(0, 20), st.floats(-5, 5), st.floats(0.001, 5))
def test_urgency_decreasing_in_best_mean(pulls, other, mean, bump):
    lo = gene(other, -10.0 * other, pulls, mean * pulls)
    hi = gene(other, -10.0 * other, pulls, (mean + bump) * pulls)
    total = pulls + other
    # same tie-break draw for both
    assert urgency(hi, make_rng(0), total) < urgency(lo, make_rng(0), total)


@given(st.integers(1, 20), st.integers(1, 10_000), st.integers(1, 10_000))
def test_exploration_increasing_in_count(pulls, t1, extra):
    g = gene(p1=pulls, s1=0.5 * pulls)
    t1 = max(t1, pulls)
    assert urgency(g, make_rng(0), t1) < urgency(g, make_rng(0), t1 + extra)


@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_tie_break_is_bounded(seed):
    arr = GeneBanditArray(3)
    record_outcome(arr, 0, 1, 0.0)
    record_outcome(arr, 1, 1, 0.0)
    record_outcome(arr, 2, 1, TIE_BREAK)  # lower urgency by exactly the bound
    picks = {select_gene(arr, make_rng(seed)) for _ in range(5)}
    assert 2 not in picks


@given(st.integers(0, 2**32))
def test_selection_is_deterministic(seed):
    def trajectory():
        arr = GeneBanditArray(8)
        rng = make_rng(seed)
        out = []
        for _ in range(30):
            i = select_gene(arr, rng)
            out.append(i)
            record_outcome(arr, i, int(rng.integers(2)), float(rng.normal()))
        return out
    assert trajectory() == trajectory()


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 1),
                          st.floats(-3, 3, allow_nan=False)), min_size=1, max_size=40))
def test_vectorised_urgency_matches_scalar(events):
    arr = GeneBanditArray(5)
    for i, j, d in events:
        record_outcome(arr, i, j, d)
    vec = urgencies(arr, make_rng(0))
    for i in range(5):
        g = arr[i]
        scalar = urgency(g, make_rng(1), arr.total_selections)
        if math.isinf(scalar):
            assert math.isinf(vec[i])
            continue
        means = [arm_mean(a) for a in g.arms if a.pulls]
        if len(means) == 2 and means[0] == means[1] and g.arms[0].pulls != g.arms[1].pulls:
            continue  # best arm chosen at random on exact ties
        assert abs(vec[i] - scalar) <= TIE_BREAK
