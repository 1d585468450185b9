import math

import pytest
from hypothesis import given, settings, strategies as st

from cubature_adversary.bounds import (BoundReport, certificate_report, corollary_bound, d0_threshold, delta_for_p,
                                       fooling_certificate, log_c_r, min_points_thm2, min_points_thm3,
                                       optimal_p, sukharev_error, sukharev_report)
from cubature_adversary.constants import SQRT_18EPI
from cubature_adversary.errors import DivergentThresholdError, InputError, UnsupportedDimensionError
import oracles

# ln c_1 from the 50-digit oracle (tests/oracles.py::log_corollary with d = 1, eps -> 0)
LN_C1 = -7.4166337783193857533102412697e22


def test_thm2_512():
    rep = min_points_thm2(0.5, 10, 1 / (2 * SQRT_18EPI))
    assert rep.value == pytest.approx(512, rel=1e-13)
    assert rep.value == pytest.approx(math.exp(rep.log_value), rel=1e-12)


def test_thm2_d1_branch():
    assert min_points_thm2(0.25, 1, 0.7).value == pytest.approx(0.75, rel=1e-15)


def test_thm2_eps_to_one():
    assert min_points_thm2(1 - 1e-12, 3, 0.5).value < 1e-10


@pytest.mark.parametrize("kw", [dict(eps=0, d=2, delta=0.1), dict(eps=1, d=2, delta=0.1),
                                dict(eps=0.5, d=2, delta=0), dict(eps=0.5, d=2, delta=1.1),
                                dict(eps=0.5, d=0, delta=0.1)])
def test_thm2_rejects(kw):
    with pytest.raises(InputError):
        min_points_thm2(**kw)


def test_thm3_examples():
    assert min_points_thm3(0.3, 1, 2, 0.7).value == pytest.approx(0.7, rel=1e-15)
    # exponent p*d/(r+1) = 0.5 for r=1, p=1/4, d=4: d^0.5 = 2 times (1 - eps)
    assert min_points_thm3(0.5, 4, 1, 0.25).value == pytest.approx(1.0, rel=1e-14)
    assert min_points_thm3(0.5, 100, 2, 0.4).log_value == pytest.approx(60.70912196594794, rel=1e-13)
    with pytest.raises(InputError):
        min_points_thm3(0.5, 4, 0, 0.25)
    with pytest.raises(InputError):
        min_points_thm3(0.5, 4, 1, 0.0)


def test_delta_for_p():
    assert delta_for_p(1, 3, 0.2) == pytest.approx(0.08065690817304778, rel=1e-14)
    assert delta_for_p(4, 1, 1) == pytest.approx(0.04032845408652389, rel=1e-14)
    vals = [delta_for_p(d, 2, 0.3) for d in range(1, 200)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(0 < v <= 1 / SQRT_18EPI * (1 + 1e-15) for v in vals)


def test_d0():
    assert d0_threshold(1, 0.4).log_value == pytest.approx(50.35101643745565, rel=1e-13)
    assert d0_threshold(2, 0.4).log_value == pytest.approx(89.38946826738238, rel=1e-13)
    with pytest.raises(DivergentThresholdError):
        d0_threshold(1, 0.5)
    with pytest.raises(DivergentThresholdError):
        d0_threshold(1, 0.7)


def test_c_r():
    assert log_c_r(1)[0] == pytest.approx(LN_C1, rel=1e-12)
    assert optimal_p(1) == 0.4
    # beyond float range only the doubly-logged magnitude survives
    value, log_neg = log_c_r(10)
    assert value == -math.inf and math.isfinite(log_neg)


def test_corollary_examples():
    rep = corollary_bound(0.5, 1, 1)
    assert rep.log_value == pytest.approx(LN_C1 + math.log(0.5), rel=1e-12)
    assert rep.log_value <= math.log(0.5)
    reps = [corollary_bound(0.5, d, 2) for d in range(3, 60)]
    growth = [r.extras["log_without_c_r"] for r in reps]
    assert all(b > a for a, b in zip(growth, growth[1:]))
    logs = [r.log_value for r in reps]
    assert all(b >= a for a, b in zip(logs, logs[1:]))


def test_sukharev():
    assert sukharev_error(2, 16) == pytest.approx(1 / 12, rel=1e-15)
    assert sukharev_error(1, 1) == 0.25
    vals = [sukharev_error(3, n) for n in range(1, 500)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert sukharev_error(3, 10 ** 12) < 1e-4
    assert sukharev_report(2, 16).value == pytest.approx(1 / 12, rel=1e-14)


def test_certificate_examples():
    assert fooling_certificate(16, 2, 0.01) == pytest.approx(0.75405565438700127, rel=1e-13)
    assert fooling_certificate(10, 2, 0.01) == pytest.approx(0.84628478399187579, rel=1e-13)
    assert fooling_certificate(16, 2, 0.5) == 0.0
    with pytest.raises(UnsupportedDimensionError):
        fooling_certificate(3, 1, 0.1)
    rep = certificate_report(16, 2, 0.5)
    assert rep.value == 0.0 and rep.log_value == -math.inf
    assert rep.to_dict()["log_value"] is None


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10 ** 6), st.integers(2, 30), st.floats(1e-4, 1.0), st.floats(1.0, 3.0))
def test_certificate_monotone(n, d, delta, factor):
    c = fooling_certificate(n, d, delta)
    assert 0.0 <= c <= 1.0
    assert fooling_certificate(max(1, int(n * factor)), d, delta) <= c
    assert fooling_certificate(n, d, min(1.0, delta * factor)) <= c


def test_no_overflow_huge_d():
    for d in (10 ** 4, 10 ** 6):
        assert math.isfinite(min_points_thm2(0.5, d, 0.01).log_value)
        assert math.isfinite(min_points_thm3(0.5, d, 3, 0.4).log_value)
        assert math.isfinite(corollary_bound(0.5, d, 2).log_value)
        assert min_points_thm3(0.5, d, 3, 0.4).value is None


def test_report_value_consistency():
    rep = BoundReport("thm3", {}, 3.0)
    assert rep.value == pytest.approx(math.exp(3.0), rel=1e-12)
    assert BoundReport("thm3", {}, 1000.0).value is None
    with pytest.raises(ValueError):
        BoundReport("bogus", {}, 0.0)


@pytest.mark.parametrize("d", [2, 3, 7, 40])
@pytest.mark.parametrize("r", [1, 2, 4])
def test_corollary_below_thm3_at_pstar(d, r):
    p = optimal_p(r)
    assert corollary_bound(0.3, d, r).log_value <= min_points_thm3(0.3, d, r, p).log_value


def test_against_oracle_spot():
    got = min_points_thm2(0.5, 10, 0.0403278).log_value
    assert got == pytest.approx(float(oracles.log_thm2(0.5, 10, 0.0403278)), rel=1e-12)
