"""Monte-Carlo integrals over the unit cube, neighborhood measures, and the attack pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .bounds import fooling_certificate
from .errors import InputError, UnsupportedDimensionError
from .fooling import FoolingFunction, SmoothingSchedule, _summarize
from .geometry import PointSet, dist_to_set

# the batch partition is a function of m alone, so thread count never matters
BATCH = 8192
DEFAULT_MEASURE_SAMPLES = 100_000
DEFAULT_INTEGRAL_SAMPLES = 100_000
DEFAULT_INNER_SAMPLES = 1_000


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def to_dict(self):
        return {"mean": self.mean, "std_error": self.std_error, "samples": self.samples, "seed": self.seed}


def _check_m(m):
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise InputError(f"sample count must be an integer >= 2, got {m}")
    return int(m)


def _uniform_batches(d, m, seed, tag, fn):
    n_batches = -(-m // BATCH)

    def run(b):
        size = min(BATCH, m - b * BATCH)
        X = _rng.generator(seed, tag, b).random((size, d))
        return fn(X)

    return _rng.map_batches(run, n_batches)


def integral_unit_cube(f, d, m, seed=0):
    """Plain Monte-Carlo integral of ``f`` over ``[0,1]^d``.

    ``f`` maps an (k, d) array to k values, or to a ``(values, std_errors)``
    pair when each value is itself an inner Monte-Carlo mean. In the nested
    case the reported variance is the outer sample variance plus the mean
    inner variance, both divided by ``m``; this overstates the true error.
    """
    m = _check_m(m)
    seed = _rng.check_seed(seed)

    def run(X):
        out = f(X)
        if isinstance(out, tuple):
            vals, ses = out
            return np.asarray(vals, dtype=np.float64), np.asarray(ses, dtype=np.float64)
        return np.asarray(out, dtype=np.float64), None

    parts = _uniform_batches(d, m, seed, _rng.TAG_OUTER, run)
    vals = np.concatenate([p[0] for p in parts])
    mean, se = _summarize(vals)
    if parts[0][1] is not None:
        inner = np.concatenate([p[1] for p in parts])
        se = math.sqrt(se * se + float(np.mean(inner * inner)) / m)
    return MCEstimate(mean, se, m, seed)


def neighborhood_measure(P: PointSet, rho, m, seed=0):
    """Hit-fraction estimate of the volume of ``{x in [0,1]^d : dist(x, P) <= rho}``."""
    m = _check_m(m)
    seed = _rng.check_seed(seed)
    if not (rho >= 0) or not math.isfinite(rho):
        raise InputError(f"rho must be a finite nonnegative number, got {rho}")
    parts = _uniform_batches(P.d, m, seed, _rng.TAG_MEASURE,
                             lambda X: (dist_to_set(X, P) <= rho).astype(np.float64))
    mean, se = _summarize(np.concatenate(parts))
    return MCEstimate(mean, se, m, seed)


@dataclass(frozen=True)
class AttackReport:
    n: int
    d: int
    delta: float
    r: int
    certificate_analytic: float
    measure_estimate: MCEstimate
    certificate_mc: float
    confidence_radius: float
    integral_estimate: MCEstimate
    node_audit: float

    @property
    def combined_std_error(self):
        return math.hypot(self.integral_estimate.std_error, self.measure_estimate.std_error)

    def consistency(self):
        """The relations every run must satisfy, up to 3 standard errors."""
        return {
            "analytic_le_mc": self.certificate_analytic <= self.certificate_mc + self.confidence_radius,
            "integral_ge_mc": self.integral_estimate.mean >= self.certificate_mc - 3 * self.combined_std_error,
            "nodes_vanish": self.node_audit == 0.0,
        }

    def to_dict(self):
        return {
            "nodes": {"n": self.n, "d": self.d},
            "delta": self.delta,
            "r": self.r,
            "certificate_analytic": {"value": self.certificate_analytic, "label": "proved"},
            "measure_estimate": self.measure_estimate.to_dict(),
            "certificate_mc": {"value": self.certificate_mc, "confidence_radius": self.confidence_radius,
                               "label": "statistical"},
            "integral_estimate": self.integral_estimate.to_dict(),
            "node_audit": self.node_audit,
            "consistency": self.consistency(),
        }


def attack(P: PointSet, r=1, delta=0.05, m_measure=DEFAULT_MEASURE_SAMPLES, m_integral=DEFAULT_INTEGRAL_SAMPLES,
           samples_per_eval=DEFAULT_INNER_SAMPLES, seed=0):
    """Certify lower bounds on the worst-case error of any rule using the nodes ``P``.

    Builds the smooth fooling function for ``P`` and reports the proved bound
    ``1 - n (3 delta sqrt(2 pi e))^d`` next to its Monte-Carlo sharpening
    ``1 - vol(P_3delta within the cube)`` and an estimate of the fooling
    function's integral.
    """
    if P.d < 2:
        raise UnsupportedDimensionError("attack needs d >= 2")
    if isinstance(r, bool) or int(r) != r or r < 1:
        raise InputError(f"r must be a positive integer, got {r}")
    F = FoolingFunction(P, SmoothingSchedule(delta, int(r)), samples_per_eval, seed)
    analytic = fooling_certificate(P.n, P.d, delta)
    measure = neighborhood_measure(P, 3 * F.scale, m_measure, seed)
    integral = integral_unit_cube(F, P.d, m_integral, seed)
    # shortcuts off: every node is audited by sampling
    audit = max(abs(F.evaluate(x, fast_paths=False).value) for x in P.points)
    return AttackReport(
        n=P.n, d=P.d, delta=float(delta), r=int(r),
        certificate_analytic=analytic,
        measure_estimate=measure,
        certificate_mc=1.0 - measure.mean,
        confidence_radius=3 * measure.std_error,
        integral_estimate=integral,
        node_audit=float(audit),
    )
