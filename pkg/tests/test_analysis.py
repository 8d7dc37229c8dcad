import math

import pytest

from scalablemax.analysis import (
    BoundReport,
    d_tail_bound,
    description_length,
    is_good_state,
    normal_cdf,
    success_bound,
    success_bound_from_cdf,
)
from scalablemax.bitseq import AgentSequence, Estimate, true_max_index

from conftest import make_agents


def test_normal_cdf_values():
    assert normal_cdf(0.0) == pytest.approx(0.5)
    assert normal_cdf(2.0) == pytest.approx(0.9772498680518208, abs=1e-12)
    for z in (-1.7, 0.4, 2.3):
        assert normal_cdf(-z) == pytest.approx(1.0 - normal_cdf(z), abs=1e-12)


def test_description_length_single_agent():
    assert description_length([AgentSequence(prefix=(), tail_seed=5)]) == 0


def test_description_length_two_agents():
    a = AgentSequence(prefix=(0,), tail_seed=1)
    b = AgentSequence(prefix=(1,), tail_seed=2)
    assert description_length([a, b]) == 1


def test_description_length_three_agents():
    agents = [
        AgentSequence(prefix=(0, 0), tail_seed=1),
        AgentSequence(prefix=(0, 1), tail_seed=2),
        AgentSequence(prefix=(1, 0), tail_seed=3),
    ]
    assert description_length(agents) == 2


def test_description_length_monotone_under_growth():
    agents = make_agents(25, seed=4)
    previous = 0
    for k in range(1, len(agents) + 1):
        d = description_length(agents[:k])
        assert d >= previous
        previous = d


def test_description_length_rejects_empty():
    with pytest.raises(ValueError):
        description_length([])


def test_success_bound_noiseless():
    assert success_bound(0, 2, 0.0) == 1.0
    assert success_bound(37, 8, 0.0) == 1.0


def test_success_bound_frozen_values():
    # Phi(2)^30 and Phi(1)^30, from tabulated CDF values
    assert success_bound(9, 8, 1.0) == pytest.approx(0.5013818563615447, rel=1e-9)
    assert success_bound(9, 8, 2.0) == pytest.approx(0.005613317549406347, rel=1e-9)


def test_success_bound_monotone():
    assert success_bound(5, 8, 1.0) > success_bound(6, 8, 1.0)
    assert success_bound(5, 8, 1.0) > success_bound(5, 8, 2.0)
    assert success_bound(5, 4, 1.0) < success_bound(5, 8, 1.0)


def test_success_bound_generic_cdf_matches_gaussian():
    sigma = 1.3
    got = success_bound_from_cdf(7, lambda c: normal_cdf(c / sigma), 8)
    assert got == pytest.approx(success_bound(7, 8, sigma), rel=1e-12)


def test_success_bound_validation():
    with pytest.raises(ValueError):
        success_bound(-1, 8, 1.0)
    with pytest.raises(ValueError):
        success_bound(3, 5, 1.0)
    with pytest.raises(ValueError):
        success_bound(3, 8, -1.0)


def test_d_tail_bound_values():
    assert d_tail_bound(2, 0, 1.0) == pytest.approx(0.0)
    assert d_tail_bound(1000, 0, 0.01) == pytest.approx(25.573981342229228, abs=1e-9)
    # doubling n adds about two to the threshold
    delta = d_tail_bound(2000, 0, 0.01) - d_tail_bound(1000, 0, 0.01)
    assert delta == pytest.approx(2.0, abs=0.01)
    # explicit prefix bits shift the bound one-for-one
    assert d_tail_bound(100, 16, 0.05) == pytest.approx(
        d_tail_bound(100, 0, 0.05) + 16, rel=1e-12
    )


def test_d_tail_bound_validation():
    with pytest.raises(ValueError):
        d_tail_bound(1, 0, 0.5)
    with pytest.raises(ValueError):
        d_tail_bound(10, -1, 0.5)
    with pytest.raises(ValueError):
        d_tail_bound(10, 0, 0.0)
    with pytest.raises(ValueError):
        d_tail_bound(10, 0, 1.5)


def test_good_state_two_agents_empty_estimate():
    assert is_good_state(make_agents(2, seed=1), Estimate.empty(), 2)


def test_good_state_false_at_max_prefix():
    agents = make_agents(30, seed=8)
    top = agents[true_max_index(agents)]
    s = Estimate(tuple(top.digits_upto(30)))
    # only the max remains active: |A| = 1 < m/2
    assert not is_good_state(agents, s, 8)


def test_good_state_protest_half():
    # estimate strictly below m/2 agents breaks the protest half
    agents = [AgentSequence(prefix=(1,), tail_seed=i) for i in range(4)]
    agents += [AgentSequence(prefix=(0, 0), tail_seed=10 + i) for i in range(4)]
    assert not is_good_state(agents, Estimate((0,)), 8)


def test_bound_report():
    report = BoundReport.compute(d=9, m=8, sigma=1.0)
    assert report.bound == pytest.approx(success_bound(9, 8, 1.0))
    assert (report.d, report.m, report.sigma) == (9, 8, 1.0)
