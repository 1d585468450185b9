"""Point sets, Euclidean distances, ball volumes and uniform ball sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .constants import LN_2PIE, LN_PI
from .errors import InputError

# elements of the (rows, nodes, d) difference tensor materialized at once
_CHUNK_ELEMS = 1 << 22


@dataclass(frozen=True, eq=False)
class PointSet:
    """A cubature node set: ``n`` points in ``R^d``, stored as an (n, d) array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1 and pts.size:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError("a point set needs at least one point with at least one coordinate")
        if not np.all(np.isfinite(pts)):
            raise InputError("point coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.points.shape == other.points.shape and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash((self.points.shape, self.points.tobytes()))

    def bounding_box(self, margin=0.0):
        return self.points.min(axis=0) - margin, self.points.max(axis=0) + margin


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if not all(math.isfinite(v) for v in c):
            raise InputError("ball center must be finite")
        if not (self.radius >= 0) or not math.isfinite(self.radius):
            raise InputError(f"ball radius must be a finite nonnegative number, got {self.radius}")
        object.__setattr__(self, "center", c)

    @property
    def d(self):
        return len(self.center)

    def contains(self, x):
        diff = np.asarray(x, dtype=np.float64) - np.asarray(self.center)
        return bool(np.sqrt(np.sum(diff * diff)) <= self.radius)

    def volume(self, log_space=False):
        return ball_volume(self.d, self.radius, log_space=log_space)


def _as_queries(x, d):
    q = np.asarray(x, dtype=np.float64)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    if q.ndim != 2 or q.shape[1] != d:
        raise InputError(f"query dimension {q.shape[-1]} does not match point set dimension {d}")
    return q, single


def distances(x, P: PointSet):
    """All Euclidean distances between the query point ``x`` (shape (d,)) and the nodes."""
    q, single = _as_queries(x, P.d)
    if not single:
        raise InputError("distances() takes a single query point")
    diff = P.points - q[0]
    return np.sqrt(np.sum(diff * diff, axis=1))


def dist_to_set(x, P: PointSet):
    """Euclidean distance from ``x`` to the nearest node of ``P``.

    ``x`` may be a single point (returns a float) or an (m, d) array of
    points (returns an (m,) array). Exhaustive scan; exact up to rounding,
    and exactly 0 at the nodes themselves.
    """
    q, single = _as_queries(x, P.d)
    out = np.empty(q.shape[0])
    rows = max(1, _CHUNK_ELEMS // (P.n * P.d))
    for start in range(0, q.shape[0], rows):
        block = q[start:start + rows]
        diff = block[:, None, :] - P.points[None, :, :]
        out[start:start + rows] = np.sqrt(np.min(np.sum(diff * diff, axis=2), axis=1))
    return float(out[0]) if single else out


def _check_dim(d):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise InputError(f"dimension must be a positive integer, got {d}")
    return int(d)


def log_unit_ball_volume(d):
    """ln V_d with V_d = pi^(d/2) / Gamma(1 + d/2)."""
    d = _check_dim(d)
    return 0.5 * d * LN_PI - float(gammaln(1.0 + 0.5 * d))


def ball_volume(d, R, log_space=False):
    """Volume ``R^d * V_d`` of a closed ball of radius ``R`` in ``R^d``.

    With ``log_space`` the natural log is returned (``-inf`` for ``R = 0``),
    which stays finite far beyond the point where ``V_d`` underflows.
    """
    d = _check_dim(d)
    if not (R >= 0) or not math.isfinite(R):
        raise InputError(f"radius must be a finite nonnegative number, got {R}")
    if R == 0:
        return -math.inf if log_space else 0.0
    log_v = d * math.log(R) + log_unit_ball_volume(d)
    return log_v if log_space else math.exp(log_v)


def ball_volume_upper_bound(d, delta, log_space=False):
    """The bound ``(delta * sqrt(2 pi e))^d`` on the volume of a ball of radius ``delta*sqrt(d)``."""
    d = _check_dim(d)
    if not (delta > 0) or not math.isfinite(delta):
        raise InputError(f"delta must be positive, got {delta}")
    log_v = d * (math.log(delta) + 0.5 * LN_2PIE)
    return log_v if log_space else math.exp(log_v)


def slice_ratio(d):
    """``(2/sqrt(d)) * V_{d-1} / V_d``; never exceeds 1 for d >= 2."""
    d = _check_dim(d)
    if d < 2:
        raise InputError(f"slice_ratio needs d >= 2, got {d}")
    return math.exp(math.log(2.0) - 0.5 * math.log(d)
                    + log_unit_ball_volume(d - 1) - log_unit_ball_volume(d))


def sample_ball(d, R, rng, size=None):
    """Uniform draw(s) from the closed ball of radius ``R`` about the origin.

    Direction from normalized Gaussians, radius ``R * U**(1/d)``. Returns shape
    (d,) when ``size`` is None, else (size, d). Norms never exceed ``R``.
    """
    d = _check_dim(d)
    if not (R >= 0) or not math.isfinite(R):
        raise InputError(f"radius must be a finite nonnegative number, got {R}")
    m = 1 if size is None else int(size)
    if R == 0:
        out = np.zeros((m, d))
        return out[0] if size is None else out
    g = rng.standard_normal((m, d))
    norms = np.sqrt(np.sum(g * g, axis=1))
    # a zero Gaussian vector has probability 0; guard anyway
    norms[norms == 0] = 1.0
    radius = R * rng.random(m) ** (1.0 / d)
    out = g * (radius / norms)[:, None]
    _clip_norm(out, R)
    return out[0] if size is None else out


def _clip_norm(y, R):
    # rounding in the rescale can push a norm a few ulps above R
    for _ in range(4):
        norms = np.sqrt(np.sum(y * y, axis=1))
        over = norms > R
        if not over.any():
            return
        y[over] *= np.nextafter(R / norms[over], 0.0)[:, None]
    y[np.sqrt(np.sum(y * y, axis=1)) > R] = 0.0
