"""The base fooling function and its convolution smoothing.

``f_0(x) = min(1, dist(x, P_delta) / (delta*sqrt(d)))`` where ``P_delta`` is the
union of closed balls of radius ``delta*sqrt(d)`` about the nodes. Smoothing by
``r`` normalized ball indicators is evaluated as one expectation,
``f_r(x) = E[f_0(x + Y_1 + ... + Y_r)]`` with ``Y_j`` uniform in a ball of
radius ``alpha_j*delta*sqrt(d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .errors import InputError
from .geometry import PointSet, _CHUNK_ELEMS, dist_to_set, distances, sample_ball

DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class SmoothingSchedule:
    """Ball radii ``alpha_j * delta * sqrt(d)`` for ``r`` successive convolutions."""

    delta: float
    r: int
    alphas: tuple = None

    def __post_init__(self):
        delta = float(self.delta)
        if not (0 < delta <= 1):
            raise InputError(f"delta must lie in (0, 1], got {self.delta}")
        if isinstance(self.r, bool) or int(self.r) != self.r or self.r < 0:
            raise InputError(f"r must be a nonnegative integer, got {self.r}")
        r = int(self.r)
        alphas = (1.0 / max(r, 1),) * r if self.alphas is None else tuple(float(a) for a in self.alphas)
        if len(alphas) != r:
            raise InputError(f"expected {r} relative radii, got {len(alphas)}")
        if any(not (a > 0) for a in alphas):
            raise InputError("relative radii must be positive")
        # 1e-12 slack: r copies of 1/r need not sum to exactly 1.0
        if math.fsum(alphas) > 1 + 1e-12:
            raise InputError(f"relative radii sum to {math.fsum(alphas)} > 1")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "alphas", alphas)

    def scale(self, d):
        return self.delta * math.sqrt(d)

    def radii(self, d):
        s = self.scale(d)
        return tuple(a * s for a in self.alphas)


@dataclass(frozen=True)
class EvalResult:
    value: float
    std_error: float = 0.0
    exact: bool = False


def _summarize(vals):
    m = vals.shape[0]
    first = vals[0]
    # a constant sample has an exact mean; avoid summation rounding
    if np.all(vals == first):
        return float(first), 0.0
    mean = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(m)) if m > 1 else 0.0
    return mean, se


def f0_values(points, nodes, scale):
    """Vectorized ``f_0`` at an (m, d) array, given node coordinates and ``delta*sqrt(d)``."""
    nodes = np.asarray(nodes)
    pts = np.asarray(points, dtype=np.float64)
    out = np.empty(pts.shape[0])
    rows = max(1, _CHUNK_ELEMS // (nodes.shape[0] * nodes.shape[1]))
    for start in range(0, pts.shape[0], rows):
        diff = pts[start:start + rows, None, :] - nodes[None, :, :]
        dist = np.sqrt(np.min(np.sum(diff * diff, axis=2), axis=1))
        out[start:start + rows] = (dist - scale) / scale
    return np.clip(out, 0.0, 1.0)


def f0_eval(x, P: PointSet, delta):
    """``f_0`` at a point (float) or at an (m, d) array of points."""
    if not (0 < delta <= 1):
        raise InputError(f"delta must lie in (0, 1], got {delta}")
    scale = delta * math.sqrt(P.d)
    dist = dist_to_set(x, P)
    val = np.clip((np.asarray(dist) - scale) / scale, 0.0, 1.0)
    return float(val) if np.ndim(val) == 0 else val


class Smoothed:
    """Monte-Carlo evaluator of ``base * g_1 * ... * g_r`` for an arbitrary base.

    ``base`` maps an (m, d) array to m values. Single-point evaluation draws
    from a stream keyed by ``(master_seed, bits of x)``, so repeated calls at the
    same point agree exactly and distinct points are independent.
    """

    def __init__(self, base, d, schedule: SmoothingSchedule, samples_per_eval=DEFAULT_SAMPLES, master_seed=0):
        if int(d) != d or d < 1:
            raise InputError(f"dimension must be a positive integer, got {d}")
        if int(samples_per_eval) != samples_per_eval or samples_per_eval < 1:
            raise InputError(f"samples_per_eval must be a positive integer, got {samples_per_eval}")
        self.base = base
        self.d = int(d)
        self.schedule = schedule
        self.samples_per_eval = int(samples_per_eval)
        self.master_seed = _rng.check_seed(master_seed)
        self.scale = schedule.scale(self.d)
        self.radii = schedule.radii(self.d)

    def _point(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise InputError(f"expected a point of dimension {self.d}, got shape {x.shape}")
        return x

    def offsets(self, rng, m=None):
        """``m`` draws of ``Y_1 + ... + Y_r``; all zeros when ``r = 0``."""
        m = self.samples_per_eval if m is None else int(m)
        y = np.zeros((m, self.d))
        for radius in self.radii:
            y += sample_ball(self.d, radius, rng, m)
        return y

    def _base_values(self, cloud, anchors):
        return np.asarray(self.base(cloud), dtype=np.float64)

    def sample_matrix(self, points, rng, m=None):
        """Base values at ``points[k] + Y_i`` for shared draws ``Y_i``; shape (m, k)."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        y = self.offsets(rng, m)
        out = np.empty((y.shape[0], pts.shape[0]))
        for k, p in enumerate(pts):
            out[:, k] = self._base_values(p + y, pts)
        return out

    def evaluate(self, x, rng=None):
        x = self._point(x)
        if rng is None:
            rng = _rng.point_generator(self.master_seed, x)
        vals = self.sample_matrix(x[None, :], rng)[:, 0]
        mean, se = _summarize(vals)
        return EvalResult(mean, se, False)

    def evaluate_pair_crn(self, x, y, rng=None):
        """Evaluate at ``x`` and ``y`` with one shared set of ball draws."""
        x, y = self._point(x), self._point(y)
        if rng is None:
            rng = _rng.pair_generator(self.master_seed, x, y)
        vals = self.sample_matrix(np.stack([x, y]), rng)
        a, b = _summarize(vals[:, 0]), _summarize(vals[:, 1])
        return EvalResult(*a, False), EvalResult(*b, False)

    def __call__(self, X):
        """Batch evaluation for integration: returns (values, std_errors)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        vals = np.empty(X.shape[0])
        ses = np.empty(X.shape[0])
        for i, x in enumerate(X):
            res = self.evaluate(x)
            vals[i], ses[i] = res.value, res.std_error
        return vals, ses


class FoolingFunction(Smoothed):
    """``f_r`` for a node set, with the exact shortcuts at the nodes and far away.

    ``f_r(x) = 0`` when ``x`` is a node and ``f_r(x) = 1`` when the nearest node
    is at least ``3*delta*sqrt(d)`` away; everything in between is sampled.
    """

    def __init__(self, nodes: PointSet, schedule: SmoothingSchedule, samples_per_eval=DEFAULT_SAMPLES, master_seed=0):
        self.nodes = nodes
        super().__init__(self._f0_all, nodes.d, schedule, samples_per_eval, master_seed)
        # offsets never exceed the sum of the radii
        self._reach = math.fsum(self.radii)

    @property
    def lipschitz_base(self):
        return 1.0 / self.scale

    def _candidates(self, anchors):
        # nodes that can be nearest to some anchor + Y; the rest only matter
        # once f_0 already saturates at 1
        dmat = np.stack([distances(a, self.nodes) for a in anchors])
        dmin = dmat.min(axis=1, keepdims=True)
        cutoff = np.minimum(dmin + 2 * self._reach, np.maximum(self._reach + 2 * self.scale, dmin))
        keep = np.any(dmat <= cutoff * (1 + 1e-12) + 1e-300, axis=0)
        return self.nodes.points[keep]

    def _base_values(self, cloud, anchors):
        return f0_values(cloud, self._candidates(anchors), self.scale)

    def _f0_all(self, X):
        return f0_values(np.atleast_2d(X), self.nodes.points, self.scale)

    def evaluate(self, x, rng=None, fast_paths=True):
        x = self._point(x)
        if fast_paths:
            dist = dist_to_set(x, self.nodes)
            if dist == 0:
                return EvalResult(0.0, 0.0, True)
            if dist >= 3 * self.scale:
                return EvalResult(1.0, 0.0, True)
        return super().evaluate(x, rng)

    def __call__(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        dist = dist_to_set(X, self.nodes)
        vals = np.where(dist == 0, 0.0, 1.0)
        ses = np.zeros(X.shape[0])
        shell = np.nonzero((dist > 0) & (dist < 3 * self.scale))[0]
        for i in shell:
            res = Smoothed.evaluate(self, X[i])
            vals[i], ses[i] = res.value, res.std_error
        return vals, ses


def fr_eval(x, F: FoolingFunction, fast_paths=True):
    return F.evaluate(x, fast_paths=fast_paths)


def fr_eval_pair_crn(x, y, F: Smoothed, rng=None):
    """Common-random-number evaluation at two points; no shortcuts."""
    return F.evaluate_pair_crn(x, y, rng)


def conv_eval_generic(base, schedule: SmoothingSchedule, x, m=DEFAULT_SAMPLES, seed=0):
    """Estimate ``(base * g_1 * ... * g_r)(x)`` with ``m`` samples.

    Uses the same per-point stream as :func:`fr_eval`, so with ``base = f_0``
    the two agree exactly wherever ``fr_eval`` does not take a shortcut.
    """
    x = np.asarray(x, dtype=np.float64)
    return Smoothed(base, x.shape[0], schedule, m, seed).evaluate(x)
