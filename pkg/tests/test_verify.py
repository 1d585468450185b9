import math

import numpy as np
import pytest

from cubature_adversary.bounds import delta_for_p
from cubature_adversary.errors import InputError
from cubature_adversary.fooling import FoolingFunction, Smoothed, SmoothingSchedule
from cubature_adversary.geometry import PointSet
from cubature_adversary.rules import uniform_random
from cubature_adversary.verify import (CheckOutcome, check_class_membership, check_constant_integral,
                                       check_derivative_lip, check_integral, check_lip, check_smooth_base,
                                       check_vanishing, class_bounds, derivative_bound)


def test_outcome_judgement():
    o = CheckOutcome.judge("conv_ii", 1.05, 1.0, 0.1, 3, 0)
    assert o.passed
    assert not CheckOutcome.judge("conv_ii", 1.2, 1.0, 0.1, 3, 0).passed
    with pytest.raises(ValueError):
        CheckOutcome.judge("nope", 0, 0, 0, 1, 0)


def test_vanishing_nodes():
    F = FoolingFunction(uniform_random(3, 6, 0), SmoothingSchedule(0.1, 2), 500, 1)
    o = check_vanishing(F, 10, 3)
    assert o.passed and o.observed == 0.0 and o.trials == 16


def _box_base(lo, hi, margin):
    # vanishes on the sup-norm neighborhood of [lo, hi]^d of width margin
    def f(X):
        gap = np.maximum(np.maximum(lo - margin - X, X - hi - margin), 0.0)
        return np.minimum(1.0, gap.max(axis=1) * 10)
    return f


def test_vanishing_box_base():
    d, delta = 2, 0.1
    sched = SmoothingSchedule(delta, 1)
    margin = delta * math.sqrt(d)
    S = Smoothed(_box_base(0.4, 0.6, margin), d, sched, 2000, 0)
    omega = np.random.default_rng(1).uniform(0.4, 0.6, (20, d))
    o = check_vanishing(S, 0, 0, omega)
    assert o.passed and o.observed == 0.0


def test_vanishing_negative_control():
    d, delta = 2, 0.1
    S = Smoothed(_box_base(0.4, 0.6, 0.0), d, SmoothingSchedule(delta, 1), 2000, 0)
    omega = np.array([[0.6, 0.6], [0.4, 0.5]])
    assert not check_vanishing(S, 0, 0, omega).passed


def test_vanishing_needs_omega_for_generic():
    S = Smoothed(lambda X: X[:, 0], 2, SmoothingSchedule(0.1, 1), 10, 0)
    with pytest.raises(InputError):
        check_vanishing(S)


def test_lip_d3():
    F = FoolingFunction(uniform_random(3, 10, 2), SmoothingSchedule(0.1, 1), 300, 0)
    o = check_lip(F, 400, 1)
    assert o.passed and o.bound == pytest.approx(1 / (0.1 * math.sqrt(3)))
    assert 0 < o.observed <= o.bound


def test_lip_negative_control():
    # base twice as steep as the claimed constant
    d, delta = 2, 0.1
    steep = 2 / (delta * math.sqrt(d))
    S = Smoothed(lambda X: steep * X[:, 0], d, SmoothingSchedule(delta, 1), 50, 0)
    o = check_lip(S, 50, 0, bound=1 / (delta * math.sqrt(d)))
    assert not o.passed


def test_derivative_bound_values():
    F = FoolingFunction(uniform_random(2, 3, 0), SmoothingSchedule(0.2, 1, (1.0,)), 10, 0)
    assert derivative_bound(F, 1) == pytest.approx(1 / (0.2 * math.sqrt(2)) / 0.2)
    G = FoolingFunction(uniform_random(3, 3, 0), SmoothingSchedule(0.1, 2), 10, 0)
    assert derivative_bound(G, 2) == pytest.approx(1 / (0.1 * math.sqrt(3)) * (2 / 0.1) ** 2)


def test_derivative_constant_base():
    S = Smoothed(lambda X: np.full(len(X), 0.4), 2, SmoothingSchedule(0.2, 2), 100, 0)
    o = check_derivative_lip(S, 2, 10, bound=1.0, seed=0)
    assert o.observed == 0.0 and o.passed


def test_derivative_order_validation():
    F = FoolingFunction(uniform_random(2, 3, 0), SmoothingSchedule(0.2, 1), 10, 0)
    with pytest.raises(InputError):
        check_derivative_lip(F, 2, 5)
    with pytest.raises(InputError):
        check_derivative_lip(F, 1, 5, h=0.0)


def test_derivative_scaling_with_delta():
    P = PointSet([[0.3, 0.3], [0.7, 0.6]])
    small = FoolingFunction(P, SmoothingSchedule(0.1, 1), 20_000, 0)
    large = FoolingFunction(P, SmoothingSchedule(0.2, 1), 20_000, 0)
    a = check_derivative_lip(small, 1, 40, seed=2)
    b = check_derivative_lip(large, 1, 40, seed=2)
    assert b.bound == pytest.approx(a.bound / 4)
    assert a.passed and b.passed


def test_derivative_inconclusive_when_noisy():
    F = FoolingFunction(uniform_random(3, 8, 1), SmoothingSchedule(0.1, 2), 200, 3)
    o = check_derivative_lip(F, 2, 10, seed=1)
    assert o.inconclusive and not o.failed


def test_derivative_negative_control():
    # sin base with large frequency: derivative Lipschitz constant far above the claimed bound
    w = np.array([40.0, 0.0])
    S = Smoothed(lambda X: np.sin(X @ w), 2, SmoothingSchedule(0.2, 1), 200, 0)
    o = check_derivative_lip(S, 1, 30, seed=0, bound=10.0, sampler=lambda rng: rng.uniform(0, 1, 2))
    assert not o.passed


def test_integral_checks():
    F = FoolingFunction(uniform_random(2, 4, 5), SmoothingSchedule(0.02, 1), 100, 0)
    assert check_integral(F, 5000, 1).passed
    o = check_constant_integral(0.3, 3, SmoothingSchedule(0.1, 2), 500, 20, 0)
    assert o.passed and o.observed == 0.0


def test_integral_negative_control():
    S = Smoothed(lambda X: np.zeros(len(X)), 2, SmoothingSchedule(0.1, 1), 10, 0)
    assert not check_integral(S, 1000, 0, lower=0.5).passed


def test_smooth_base_iv():
    o = check_smooth_base([3.0, 1.0], SmoothingSchedule(0.2, 2), 30, seed=1)
    assert o.passed and o.observed <= 1.0


def test_class_membership_d3_r2():
    F = FoolingFunction(uniform_random(3, 6, 0), SmoothingSchedule(0.1, 2), 50_000, 1)
    out = check_class_membership(F, 30, 2)
    assert [o.property_id for o in out] == ["class_norm", "class_lip", "class_dlip", "class_dlip"]
    assert [o.order for o in out[2:]] == [1, 2]
    assert all(o.passed for o in out)
    assert not any(o.inconclusive for o in out)


def test_class_membership_requires_equal_radii():
    F = FoolingFunction(uniform_random(2, 3, 0), SmoothingSchedule(0.1, 2, (0.7, 0.3)), 10, 0)
    with pytest.raises(InputError):
        check_class_membership(F, 5)


def test_tilde_bounds_equal_substituted_plain_bounds():
    for d, r, p in [(2, 1, 0.25), (3, 2, 0.4), (10, 3, 0.1)]:
        F = FoolingFunction(uniform_random(d, 2, 0), SmoothingSchedule(delta_for_p(d, r, p), r), 10, 0)
        _, lip, dlip = class_bounds(F)
        _, lip_t, dlip_t = class_bounds(F, p)
        assert lip_t == pytest.approx(lip, rel=1e-12)
        assert dlip_t == pytest.approx(dlip, rel=1e-12)


def test_tilde_membership():
    d, r, p = 2, 1, 0.25
    F = FoolingFunction(uniform_random(d, 4, 3), SmoothingSchedule(delta_for_p(d, r, p), r), 20_000, 0)
    out = check_class_membership(F, 20, 0, tilde_p=p)
    assert all(o.property_id == "tilde_class" for o in out)
    assert all(o.passed for o in out)
    with pytest.raises(InputError):
        check_class_membership(F, 5, 0, tilde_p=0.3)
