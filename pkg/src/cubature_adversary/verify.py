"""Statistical checks that smoothed fooling functions keep the properties the
lower bounds rely on: vanishing at the nodes, Lipschitz constants, integrals,
and Lipschitz constants of directional derivatives.

Every check returns a :class:`CheckOutcome` whose ``observed`` value must not
exceed ``bound * (1 + tolerance)``. Maxima over sampled points and directions
only bound the true suprema from below, so a pass is evidence, not proof.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _rng
from .bounds import delta_for_p
from .constants import SQRT_18EPI
from .errors import InputError
from .estimate import integral_unit_cube
from .fooling import FoolingFunction, Smoothed, SmoothingSchedule, _summarize
from .geometry import ball_volume

PROPERTIES = ("conv_i", "conv_ii", "conv_iii", "conv_iv", "conv_v",
              "class_norm", "class_lip", "class_dlip", "tilde_class")

STAT_TOLERANCE = 0.1


@dataclass(frozen=True)
class CheckOutcome:
    property_id: str
    passed: bool
    observed: float
    bound: float
    tolerance: float
    trials: int
    seed: int
    order: int | None = None
    inconclusive: bool = False
    note: str = ""

    @classmethod
    def judge(cls, property_id, observed, bound, tolerance, trials, seed, **kw):
        if property_id not in PROPERTIES:
            raise ValueError(f"unknown property id {property_id!r}")
        passed = bool(observed <= bound * (1 + tolerance))
        return cls(property_id, passed, float(observed), float(bound), float(tolerance), int(trials),
                   int(seed), **kw)

    @property
    def failed(self):
        return not self.passed and not self.inconclusive

    def to_dict(self):
        return asdict(self)


def _unit_vectors(rng, k, d):
    g = rng.standard_normal((k, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _check_count(name, v):
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise InputError(f"{name} must be a positive integer, got {v}")
    return int(v)


def _sample_near_nodes(F: FoolingFunction, rng, reach):
    # uniform over directions, uniform in distance up to reach
    i = rng.integers(F.nodes.n)
    u = _unit_vectors(rng, 1, F.d)[0]
    return F.nodes.points[i] + rng.uniform(0, reach) * u


def _enclosing_box(F):
    if isinstance(F, FoolingFunction):
        return F.nodes.bounding_box(3 * F.scale)
    return np.zeros(F.d), np.ones(F.d)


def check_vanishing(F: Smoothed, trials=0, seed=0, omega=None):
    """``f_r`` must be exactly 0 wherever the base vanishes on a full ``delta*sqrt(d)`` neighborhood.

    Evaluates by sampling, never by shortcut, at every point of ``omega``
    (default: the nodes) and again at ``trials`` randomly chosen points of
    ``omega`` with fresh streams.
    """
    if omega is None:
        if not isinstance(F, FoolingFunction):
            raise InputError("omega is required for a generic base")
        omega = F.nodes.points
    omega = np.atleast_2d(np.asarray(omega, dtype=np.float64))
    worst = 0.0
    for x in omega:
        worst = max(worst, abs(Smoothed.evaluate(F, x).value))
    pick = _rng.generator(seed, _rng.TAG_CHECK, 0)
    for t in range(int(trials)):
        x = omega[pick.integers(omega.shape[0])]
        res = Smoothed.evaluate(F, x, _rng.generator(seed, _rng.TAG_CHECK, 1, t))
        worst = max(worst, abs(res.value))
    return CheckOutcome.judge("conv_i", worst, 0.0, 0.0, omega.shape[0] + int(trials), seed)


def check_lip(F: Smoothed, pairs=1000, seed=0, bound=None, samples=None, property_id="conv_ii"):
    """Largest ``|f_r(x) - f_r(y)| / |x - y|`` over random pairs, with common random numbers.

    Half the pairs are independent uniform points in a box enclosing the
    active region; the other half are separated by at most ``2*delta*sqrt(d)``,
    where the ratio can approach the Lipschitz constant. Under common random
    numbers each sample already obeys the base's Lipschitz bound, so no
    tolerance is applied.
    """
    pairs = _check_count("pairs", pairs)
    if bound is None:
        if not isinstance(F, FoolingFunction):
            raise InputError("bound is required for a generic base")
        bound = F.lipschitz_base
    lo, hi = _enclosing_box(F)
    rng = _rng.generator(seed, _rng.TAG_CHECK, 2)
    worst = 0.0
    for t in range(pairs):
        x = rng.uniform(lo, hi)
        if t % 2:
            y = rng.uniform(lo, hi)
        else:
            y = x + rng.uniform(0, 2 * F.scale) * _unit_vectors(rng, 1, F.d)[0]
        gap = float(np.linalg.norm(x - y))
        if gap == 0:
            continue
        vals = F.sample_matrix(np.stack([x, y]), _rng.generator(seed, _rng.TAG_CHECK, 3, t), samples)
        a, _ = _summarize(vals[:, 0])
        b, _ = _summarize(vals[:, 1])
        worst = max(worst, abs(a - b) / gap)
    return CheckOutcome.judge(property_id, worst, bound, 0.0, pairs, seed)


def derivative_bound(F: Smoothed, k, lip_base=None):
    """``Lip(f_0) * prod 1/(delta*alpha_i)`` over the ``k`` largest relative radii."""
    if lip_base is None:
        lip_base = F.lipschitz_base
    alphas = sorted(F.schedule.alphas, reverse=True)[:k]
    out = lip_base
    for a in alphas:
        out /= F.schedule.delta * a
    return out


def stencil(anchor, thetas, h):
    """Points of the iterated central difference along ``thetas`` and their weights."""
    k = len(thetas)
    pts, weights = [], []
    for signs in itertools.product((1.0, -1.0), repeat=k):
        pts.append(anchor + h * np.dot(signs, thetas))
        weights.append(np.prod(signs))
    return np.array(pts), np.array(weights) / (2 * h) ** k


def derivative_quotient(F: Smoothed, x, x2, thetas, h, rng, samples=None):
    """Per-sample ``(D_h f(x) - D_h f(x2)) / |x - x2|`` for the iterated difference ``D_h``.

    All stencil points share the same ball draws. Returns (mean, std_error).
    """
    p1, w = stencil(x, thetas, h)
    p2, _ = stencil(x2, thetas, h)
    vals = F.sample_matrix(np.vstack([p1, p2]), rng, samples)
    s = len(w)
    per_sample = (vals[:, :s] @ w - vals[:, s:] @ w) / float(np.linalg.norm(x - x2))
    return _summarize(per_sample)


def check_derivative_lip(F: Smoothed, k, directions=200, h=None, seed=0, bound=None, samples=None,
                         tolerance=STAT_TOLERANCE, property_id="conv_v", sampler=None):
    """Empirical Lipschitz constant of the ``k``-th directional derivative of ``f_r``.

    For each trial: random unit directions ``theta_1..theta_k``, a base point
    and a neighbor at distance ``h``; the ``k``-th central difference with
    step ``h`` is formed at both and their gap divided by ``h``. A central
    difference is an average of the derivative over the stencil, so its
    Lipschitz constant cannot exceed the derivative's. The allowance
    ``(h/delta)^2`` is added to the tolerance. Trials whose 3-sigma noise
    exceeds ``tolerance * bound`` make the outcome inconclusive.
    """
    directions = _check_count("directions", directions)
    k = _check_count("k", k)
    if k > F.schedule.r:
        raise InputError(f"derivative order {k} exceeds the smoothness order r={F.schedule.r}")
    delta = F.schedule.delta
    h = delta / 20 if h is None else float(h)
    if not h > 0:
        raise InputError(f"step h must be positive, got {h}")
    if bound is None:
        bound = derivative_bound(F, k)
    allowance = (h / delta) ** 2
    rng = _rng.generator(seed, _rng.TAG_CHECK, 4, k)
    lo, hi = _enclosing_box(F)
    worst, worst_se = 0.0, 0.0
    for t in range(directions):
        if sampler is not None:
            x = sampler(rng)
        elif isinstance(F, FoolingFunction):
            x = _sample_near_nodes(F, rng, 3 * F.scale)
        else:
            x = rng.uniform(lo, hi)
        thetas = _unit_vectors(rng, k, F.d)
        x2 = x + h * _unit_vectors(rng, 1, F.d)[0]
        mean, se = derivative_quotient(F, x, x2, thetas, h, _rng.generator(seed, _rng.TAG_CHECK, 5, k, t), samples)
        if abs(mean) > worst:
            worst, worst_se = abs(mean), se
    inconclusive = 3 * worst_se > tolerance * bound
    note = f"noise at maximum: 3 sigma = {3 * worst_se:.6g}"
    return CheckOutcome.judge(property_id, worst, bound, tolerance + allowance, directions, seed,
                              order=k, inconclusive=inconclusive, note=note)


def check_integral(F: Smoothed, m=10_000, seed=0, lower=None):
    """The integral of ``f_r`` over the unit cube must reach the base's shifted-integral floor.

    For ``f_0`` that floor is ``1 - n * vol(ball of radius 2 delta sqrt(d))``:
    every shift of ``f_0`` by at most ``delta*sqrt(d)`` is below 1 only on the
    union of those balls. Passes when ``lower <= estimate + 3 sigma``.
    """
    if lower is None:
        if not isinstance(F, FoolingFunction):
            raise InputError("lower is required for a generic base")
        lower = max(0.0, 1.0 - F.nodes.n * ball_volume(F.d, 2 * F.scale))
    est = integral_unit_cube(F, F.d, m, seed)
    return CheckOutcome.judge("conv_iii", lower, est.mean + 3 * est.std_error, 0.0, m, seed,
                              note=f"integral estimate {est.mean:.6g} +/- {est.std_error:.3g}")


def check_constant_integral(c, d, schedule: SmoothingSchedule, m=1000, samples=100, seed=0):
    """Smoothing a constant leaves it unchanged, so its estimated integral must equal ``c`` exactly."""
    F = Smoothed(lambda X: np.full(X.shape[0], c, dtype=np.float64), d, schedule, samples, seed)
    est = integral_unit_cube(F, d, m, seed)
    return CheckOutcome.judge("conv_iii", abs(est.mean - c), 0.0, 0.0, m, seed,
                              note=f"integral estimate {est.mean!r} for constant {c!r}")


def cosine_base(w):
    """``x -> cos(w.x)``, for which ``Lip(D^theta f) = |w.theta| |w|``."""
    w = np.asarray(w, dtype=np.float64)
    return lambda X: np.cos(np.asarray(X) @ w)


def check_smooth_base(w, schedule: SmoothingSchedule, directions=100, h=None, seed=0, samples=2000,
                      tolerance=STAT_TOLERANCE):
    """Smoothing must not raise the Lipschitz constant of a first directional derivative.

    Uses the smooth base ``cos(w.x)``; each trial's quotient is normalized by the
    base's own constant ``|w.theta| |w|`` for its direction, so the bound is 1.
    """
    w = np.asarray(w, dtype=np.float64)
    d = w.shape[0]
    F = Smoothed(cosine_base(w), d, schedule, samples, seed)
    h = schedule.delta / 20 if h is None else float(h)
    rng = _rng.generator(seed, _rng.TAG_CHECK, 6)
    worst, worst_se = 0.0, 0.0
    norm_w = float(np.linalg.norm(w))
    for t in range(_check_count("directions", directions)):
        x = rng.uniform(0, 1, d)
        theta = _unit_vectors(rng, 1, d)
        x2 = x + h * _unit_vectors(rng, 1, d)[0]
        base_lip = abs(float(theta[0] @ w)) * norm_w
        if base_lip < 1e-3 * norm_w * norm_w:
            continue
        mean, se = derivative_quotient(F, x, x2, theta, h, _rng.generator(seed, _rng.TAG_CHECK, 7, t))
        if abs(mean) / base_lip > worst:
            worst, worst_se = abs(mean) / base_lip, se / base_lip
    return CheckOutcome.judge("conv_iv", worst, 1.0, tolerance, directions, seed, order=1,
                              inconclusive=3 * worst_se > tolerance,
                              note=f"noise at maximum: 3 sigma = {3 * worst_se:.6g}")


def class_bounds(F: FoolingFunction, tilde_p=None):
    """Bounds on ``(sup|f|, Lip f, Lip D^k f for k=1..r)`` for the plain or tilde class."""
    d, r, delta = F.d, F.schedule.r, F.schedule.delta
    if tilde_p is None:
        lip = 1.0 / (delta * math.sqrt(d))
        return 1.0, lip, [lip * (r / delta) ** k for k in range(1, r + 1)]
    p = tilde_p
    lip = d ** (-0.5 + p / (r + 1)) * SQRT_18EPI
    dlip = [d ** (-0.5 + p * (k + 1) / (r + 1)) * r ** k * SQRT_18EPI ** (k + 1) for k in range(1, r + 1)]
    return 1.0, lip, dlip


def check_norm(F: Smoothed, points=200, seed=0, property_id="class_norm"):
    lo, hi = _enclosing_box(F)
    rng = _rng.generator(seed, _rng.TAG_CHECK, 8)
    worst = 0.0
    for _ in range(_check_count("points", points)):
        worst = max(worst, abs(F.evaluate(rng.uniform(lo, hi)).value))
    return CheckOutcome.judge(property_id, worst, 1.0, 0.0, points, seed)


def check_class_membership(F: FoolingFunction, budget=200, seed=0, tilde_p=None, samples=None):
    """Sup-norm, Lipschitz and derivative-Lipschitz conditions for ``f_r``.

    With ``tilde_p`` the node function must have been built with
    ``delta = delta_for_p(d, r, tilde_p)`` and the bounds are those of the
    ``p``-parametrized class.
    """
    r = F.schedule.r
    if any(a != 1.0 / r for a in F.schedule.alphas):
        raise InputError("class membership assumes equal relative radii 1/r")
    if tilde_p is not None:
        expected = delta_for_p(F.d, r, tilde_p)
        if not math.isclose(F.schedule.delta, expected, rel_tol=1e-12):
            raise InputError(f"tilde class with p={tilde_p} needs delta={expected!r}, got {F.schedule.delta!r}")
    norm_b, lip_b, dlip_b = class_bounds(F, tilde_p)
    ids = ("class_norm", "class_lip", "class_dlip") if tilde_p is None else ("tilde_class",) * 3
    out = [
        check_norm(F, budget, seed, ids[0]),
        check_lip(F, budget, seed, lip_b, samples, ids[1]),
    ]
    for k, b in enumerate(dlip_b, start=1):
        out.append(check_derivative_lip(F, k, budget, seed=seed, bound=b, samples=samples, property_id=ids[2]))
    return out
