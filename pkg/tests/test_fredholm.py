"""Fredholm determinant, resolvent and counting statistics."""

import math

import numpy as np
import pytest

from hepearcey.fredholm import (
    GridSpec,
    convergence_pair,
    counting_mean,
    counting_mgf,
    counting_variance,
    gap_log_probability,
    resolvent_at_endpoint,
)
from hepearcey.pearcey import ModelParams

PARAMS = ModelParams(0.0, 0.0)


def test_grid_convergence_at_moderate_s():
    f1, f2 = convergence_pair(40.0, 0.5, PARAMS, 120)
    assert abs(f2 - f1) <= 1e-10


def test_gap_probability_decreasing_in_s():
    grid = GridSpec(m=120)
    vals = [gap_log_probability(s, 0.5, PARAMS, grid) for s in (10.0, 20.0, 40.0)]
    assert vals[0] > vals[1] > vals[2]


def test_gap_probability_decreasing_in_gamma():
    grid = GridSpec(m=120)
    vals = [gap_log_probability(30.0, g, PARAMS, grid) for g in (0.25, 0.5, 0.9)]
    assert vals[0] > vals[1] > vals[2]


def test_small_gamma_linear_response():
    # ln det(I - g K) = -g tr K + O(g^2)
    grid = GridSpec(m=120)
    g = 1e-5
    f = gap_log_probability(25.0, g, PARAMS, grid)
    tr = counting_mean(25.0, PARAMS, grid)
    assert f == pytest.approx(-g * tr, rel=1e-4)


def test_resolvent_is_df_ds():
    grid = GridSpec(m=160)
    h, s, g = 1e-3, 30.0, 0.5
    dfds = (
        gap_log_probability(s + h, g, PARAMS, grid)
        - gap_log_probability(s - h, g, PARAMS, grid)
    ) / (2.0 * h)
    assert dfds == pytest.approx(-resolvent_at_endpoint(s, g, PARAMS, grid), rel=1e-6)


def test_counting_variance_below_mean():
    # determinantal processes are negatively associated: Var N <= E N
    grid = GridSpec(m=120)
    for s in (10.0, 50.0):
        assert 0.0 < counting_variance(s, PARAMS, grid) < counting_mean(s, PARAMS, grid)


def test_mgf_reduces_to_gap_at_large_nu():
    # nu -> infinity gives P(N = 0) = det(I - K)
    grid = GridSpec(m=120)
    # the gap between the MGF and P(N = 0) is O(e^(-2 pi nu) / gap)
    mgf = counting_mgf(20.0, 6.0, PARAMS, grid)
    gap = math.exp(gap_log_probability(20.0, 1.0, PARAMS, grid))
    assert mgf == pytest.approx(gap, rel=1e-6)


def test_counting_mean_scaling_law():
    # E N grows like (3 sqrt 3 / 4 pi) s^(2/3)
    grid = GridSpec(m=160)
    m1 = counting_mean(50.0, PARAMS, grid)
    m2 = counting_mean(100.0, PARAMS, grid)
    slope = math.log(m2 / m1) / math.log(2.0)
    assert slope == pytest.approx(2.0 / 3.0, abs=0.02)
