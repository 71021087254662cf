"""Closed-form queueing results against an independent brute-force
birth-death solve and known exact values."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from statefaas import queueing
from statefaas.queueing import (UNSTABLE, erlang_b, erlang_c, is_unstable,
                                mm1_response, mmc_response,
                                remote_stability_bound, scenario1_latency,
                                scenario1_optimal_split, stability_frontier)


def birth_death_wait_probability(c, a, tail_tol=1e-16):
    """P(wait) for M/M/c via the truncated stationary distribution.

    Unnormalized p_n: a^n/n! below c, then geometric decay with ratio
    a/c. The geometric tail above the truncation point is summed in
    closed form, so the truncation error is exactly zero.
    """
    rho = a / c
    assert rho < 1.0
    weights = [1.0]
    for n in range(1, c):
        weights.append(weights[-1] * a / n)
    w_c = weights[-1] * a / c  # p_c (unnormalized)
    below = sum(weights)
    at_and_above = w_c / (1.0 - rho)  # geometric series from n=c
    return at_and_above / (below + at_and_above)


class TestErlang:
    def test_known_exact_values(self):
        assert erlang_c(1, 0.5) == pytest.approx(0.5, abs=1e-12)
        assert erlang_c(2, 1.0) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_single_server_equals_rho(self):
        # with one server P(wait) is the utilization
        for a in (0.1, 0.25, 0.9, 0.999):
            assert erlang_c(1, a) == pytest.approx(a, abs=1e-12)

    def test_low_load_many_servers(self):
        p = erlang_c(30, 9.0)
        assert 0.0 < p < 1e-3

    def test_against_birth_death(self):
        for c in (1, 2, 3, 5, 8, 13, 21, 40):
            for a in (0.1, 0.5 * c, 0.9 * c, 0.99 * c):
                expect = birth_death_wait_probability(c, a)
                assert erlang_c(c, a) == pytest.approx(expect, abs=1e-9), \
                    f"c={c} a={a}"

    def test_zero_load(self):
        assert erlang_c(5, 0.0) == 0.0

    def test_saturated_is_unstable(self):
        assert is_unstable(erlang_c(4, 4.0))
        assert is_unstable(erlang_c(4, 7.5))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            erlang_c(0, 1.0)
        with pytest.raises(ValueError):
            erlang_c(2.5, 1.0)
        with pytest.raises(ValueError):
            erlang_c(3, -0.1)

    def test_erlang_b_two_servers(self):
        # B(2, a) = (a^2/2) / (1 + a + a^2/2)
        for a in (0.5, 1.0, 3.0):
            expect = (a * a / 2) / (1 + a + a * a / 2)
            assert erlang_b(2, a) == pytest.approx(expect, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(c=hst.integers(min_value=1, max_value=60),
           load=hst.floats(min_value=0.0, max_value=0.999))
    def test_probability_bounds(self, c, load):
        p = erlang_c(c, load * c)
        assert 0.0 <= p < 1.0

    @settings(max_examples=100, deadline=None)
    @given(c=hst.integers(min_value=1, max_value=40),
           load=hst.floats(min_value=0.01, max_value=0.98))
    def test_monotone_in_load(self, c, load):
        a = load * c
        assert erlang_c(c, a) <= erlang_c(c, a * 1.01) + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(c=hst.integers(min_value=1, max_value=39),
           load=hst.floats(min_value=0.01, max_value=0.99))
    def test_extra_server_helps(self, c, load):
        a = load * c
        assert erlang_c(c + 1, a) <= erlang_c(c, a) + 1e-12


class TestResponseTimes:
    def test_mm1_default_parameters(self):
        # 1/(1 - 0.075) for a dedicated container at rate 1
        got = mm1_response(0.075, 1.0)
        assert got == pytest.approx(1.0 / 0.925, abs=1e-12)
        assert got == pytest.approx(1.0810810810810811, abs=1e-12)

    def test_mm1_saturation(self):
        assert is_unstable(mm1_response(1.0, 1.0))
        assert is_unstable(mm1_response(2.0, 1.0))

    def test_mm1_rejects_bad_rates(self):
        with pytest.raises(ValueError):
            mm1_response(-0.1, 1.0)
        with pytest.raises(ValueError):
            mm1_response(0.5, 0.0)

    def test_mmc_reduces_to_mm1(self):
        assert mmc_response(0.5, 1.0, 1) == pytest.approx(
            mm1_response(0.5, 1.0), abs=1e-12)

    def test_mmc_against_birth_death(self):
        lam, mu, c = 3.0, 1.0 / 3.0, 30
        p = birth_death_wait_probability(c, lam / mu)
        expect = 1.0 / mu + p / (c * mu - lam)
        assert mmc_response(lam, mu, c) == pytest.approx(expect, abs=1e-9)

    def test_mmc_saturation(self):
        assert is_unstable(mmc_response(10.0, 1.0 / 3.0, 30))


class TestStaticSplitCurve:
    def test_reference_point(self):
        # N=50, L=10: 10 dedicated M/M/1 plus a 30-server remote block
        w_local = 1.0 / (1.0 - 0.075)
        p = birth_death_wait_probability(30, 40 * 0.075 * 3.0)
        w_remote = 3.0 + p / (30 / 3.0 - 40 * 0.075)
        expect = (10 * w_local + 40 * w_remote) / 50
        got = scenario1_latency(50, 10)
        assert got == pytest.approx(expect, abs=1e-9)
        assert got == pytest.approx(2.616, abs=5e-4)

    def test_all_local_is_pure_mm1(self):
        assert scenario1_latency(40, 40) == pytest.approx(
            mm1_response(0.075, 1.0), abs=1e-12)

    def test_unstable_split(self):
        # N=110, L=20: 90 remote clients on 20 servers, load 6.75 vs 6.67
        assert is_unstable(scenario1_latency(110, 20))

    def test_rejects_bad_split(self):
        with pytest.raises(ValueError):
            scenario1_latency(50, -1)
        with pytest.raises(ValueError):
            scenario1_latency(50, 41)
        with pytest.raises(ValueError):
            scenario1_latency(30, 35)

    def test_optimal_split_is_argmin(self):
        for n in (50, 70, 90, 110):
            lstar, wstar = scenario1_optimal_split(n)
            curve = [scenario1_latency(n, l)
                     for l in range(min(n, 40) + 1)]
            assert wstar == min(curve)
            assert curve[lstar] == wstar
            # ties go to the smaller split
            assert all(c > wstar for c in curve[:lstar])

    def test_optimal_split_interior(self):
        for n in (50, 70, 90, 110):
            lstar, wstar = scenario1_optimal_split(n)
            assert 0 < lstar < min(n, 40)
            assert not is_unstable(wstar)

    def test_no_stable_split(self):
        # 178 clients overload 40 remote servers even at L=0, and L=C
        # leaves 138 clients with no containers at all
        lstar, wstar = scenario1_optimal_split(178)
        assert lstar is None and is_unstable(wstar)


class TestStabilityFrontier:
    def test_derived_frontiers(self):
        assert stability_frontier(50) == 37
        assert stability_frontier(110) == 19
        assert stability_frontier(178) == -1

    def test_frontier_by_direct_inequality(self):
        for n in (50, 70, 90, 110, 150):
            frontier = stability_frontier(n)
            for l in range(min(n, 40)):
                stable = (n - l) * 0.075 < (40 - l) * (1.0 / 3.0)
                assert stable == (l <= frontier), f"N={n} L={l}"

    def test_curve_diverges_past_frontier(self):
        for n in (50, 110):
            frontier = stability_frontier(n)
            assert not is_unstable(scenario1_latency(n, frontier))
            if frontier + 1 < n:
                assert is_unstable(scenario1_latency(n, frontier + 1))

    def test_remote_stability_bound(self):
        # pure remote pool: smallest C with N*lam < C*mu_r
        for n in (10, 40, 50, 110, 200, 400):
            c = remote_stability_bound(n)
            assert n * 0.075 < c * (1.0 / 3.0)
            assert not n * 0.075 < (c - 1) * (1.0 / 3.0)
            assert c == math.floor(0.225 * n) + 1


class TestCurveShape:
    def test_pointwise_ordering_in_population(self):
        for l in range(0, 20):
            w50 = scenario1_latency(50, l)
            w70 = scenario1_latency(70, l)
            w90 = scenario1_latency(90, l)
            w110 = scenario1_latency(110, l)
            assert w50 <= w70 <= w90 <= w110

    def test_larger_population_has_wider_range(self):
        # compared over the splits where both curves are stable; each
        # curve also diverges near its own frontier, which would dominate
        # any single-curve range
        common = stability_frontier(110) + 1

        def curve_range(n):
            vals = [scenario1_latency(n, l) for l in range(common)]
            assert not any(is_unstable(v) for v in vals)
            return max(vals) - min(vals)

        assert curve_range(110) > curve_range(50)
