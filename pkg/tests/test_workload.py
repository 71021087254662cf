"""Arrival process and the two-state preference chain."""

import math

import numpy as np
import pytest

from statefaas.kernel import ConfigurationError, RngStream
from statefaas.workload import PhaseProcess, next_arrival, phase_rates


class TestPhaseRates:
    def test_reference_rates(self):
        # f=0.2, 300 s local sojourn: leave local at 1/300, enter local
        # at 0.2/(0.8*300) = 1/1200
        r_r_to_l, r_l_to_r = phase_rates(0.2, 300.0)
        assert r_l_to_r == pytest.approx(1.0 / 300.0, abs=1e-15)
        assert r_r_to_l == pytest.approx(1.0 / 1200.0, abs=1e-15)

    def test_stationary_fraction_identity(self):
        # pi_local = r_RtoL / (r_RtoL + r_LtoR) must equal f
        for f in (0.0, 0.1, 0.25, 0.5, 0.9):
            r_r_to_l, r_l_to_r = phase_rates(f, 300.0)
            pi = r_r_to_l / (r_r_to_l + r_l_to_r)
            assert pi == pytest.approx(f, abs=1e-12)

    def test_mean_sojourns(self):
        r_r_to_l, r_l_to_r = phase_rates(0.4, 120.0)
        assert 1.0 / r_l_to_r == pytest.approx(120.0)
        # remote sojourn scales as (1-f)/f times the local one
        assert 1.0 / r_r_to_l == pytest.approx(120.0 * 0.6 / 0.4)

    def test_zero_fraction_never_enters_local(self):
        r_r_to_l, r_l_to_r = phase_rates(0.0, 300.0)
        assert r_r_to_l == 0.0 and r_l_to_r > 0.0

    def test_rejects_bad_arguments(self):
        with pytest.raises(ConfigurationError):
            phase_rates(1.0, 300.0)
        with pytest.raises(ConfigurationError):
            phase_rates(-0.1, 300.0)
        with pytest.raises(ConfigurationError):
            phase_rates(0.2, 0.0)


class TestPhaseProcess:
    def test_initial_preference_frequency(self):
        ph = PhaseProcess(0.3, 300.0)
        st = RngStream(21, 2, 0)
        hits = sum(ph.initial_prefers_local(st) for _ in range(100_000))
        assert 0.29 < hits / 100_000 < 0.31

    def test_zero_fraction_starts_remote(self):
        ph = PhaseProcess(0.0, 300.0)
        st = RngStream(1, 2, 0)
        assert not any(ph.initial_prefers_local(st) for _ in range(100))

    def test_sojourn_none_when_absorbed(self):
        # f=0 means the remote state is absorbing
        ph = PhaseProcess(0.0, 300.0)
        st = RngStream(1, 2, 0)
        assert ph.sojourn(False, st) is None
        assert ph.sojourn(True, st) is not None

    def test_long_run_local_fraction(self):
        # simulate the chain for 1e6 s and measure time preferring local
        ph = PhaseProcess(0.2, 300.0)
        st = RngStream(5, 2, 0)
        horizon = 4e6
        t, local_time = 0.0, 0.0
        prefers_local = ph.initial_prefers_local(st)
        while t < horizon:
            soj = min(ph.sojourn(prefers_local, st), horizon - t)
            if prefers_local:
                local_time += soj
            t += soj
            prefers_local = not prefers_local
        assert local_time / horizon == pytest.approx(0.2, abs=0.01)

    def test_mean_local_sojourn(self):
        ph = PhaseProcess(0.3, 250.0)
        st = RngStream(6, 2, 0)
        draws = np.array([ph.sojourn(True, st) for _ in range(100_000)])
        assert draws.mean() == pytest.approx(250.0, rel=0.02)


class TestArrivals:
    def test_mean_gap(self):
        st = RngStream(8, 0, 0)
        t = 0.0
        gaps = []
        for _ in range(200_000):
            nt = next_arrival(t, 0.075, st)
            gaps.append(nt - t)
            t = nt
        gaps = np.array(gaps)
        assert gaps.mean() == pytest.approx(1.0 / 0.075, rel=0.01)
        assert gaps.mean() == pytest.approx(13.333, rel=0.02)

    def test_median_gap(self):
        st = RngStream(9, 0, 0)
        gaps = np.array([next_arrival(0.0, 0.075, st) for _ in range(200_000)])
        # exponential median is ln(2)/rate
        assert np.median(gaps) == pytest.approx(math.log(2) / 0.075, rel=0.02)
        assert math.log(2) / 0.075 == pytest.approx(9.2420, abs=1e-4)

    def test_poisson_counts(self):
        # invocations in disjoint windows: variance/mean near 1
        st = RngStream(10, 0, 0)
        window = 100.0
        counts = []
        for _ in range(1000):
            t, n = 0.0, 0
            while True:
                t = next_arrival(t, 0.075, st)
                if t > window:
                    break
                n += 1
            counts.append(n)
        counts = np.array(counts, dtype=float)
        assert counts.mean() == pytest.approx(7.5, rel=0.05)
        assert 0.9 < counts.var() / counts.mean() < 1.1
