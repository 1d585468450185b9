"""Closed-form lower bounds on the number of nodes needed for integration error eps.

Everything is carried as a natural log; linear values are attached only when
they fit in a double.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import LN_2PIE, LN_18EPI
from .errors import DivergentThresholdError, InputError, UnsupportedDimensionError

# exp() of anything larger overflows a double
LOG_OVERFLOW = math.log(2.0 ** 1023) + math.log(2.0 - 2.0 ** -52)

FORMULAS = ("thm2", "thm3", "corollary", "sukharev", "certificate", "d0")


@dataclass(frozen=True)
class BoundReport:
    formula_id: str
    parameters: dict
    log_value: float
    value: float | None = field(default=None)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.formula_id not in FORMULAS:
            raise ValueError(f"unknown formula id {self.formula_id!r}")
        if self.value is None and self.log_value <= LOG_OVERFLOW:
            object.__setattr__(self, "value", 0.0 if self.log_value == -math.inf else math.exp(self.log_value))

    def to_dict(self):
        return {
            "formula_id": self.formula_id,
            "parameters": dict(self.parameters),
            "log_value": self.log_value if math.isfinite(self.log_value) else None,
            "value": self.value,
            **self.extras,
        }


def _check_eps(eps):
    if not (0 < eps < 1):
        raise InputError(f"eps must lie in (0, 1), got {eps}")


def _check_delta(delta):
    if not (0 < delta <= 1):
        raise InputError(f"delta must lie in (0, 1], got {delta}")


def _check_posint(name, v, minimum=1):
    if isinstance(v, bool) or int(v) != v or v < minimum:
        raise InputError(f"{name} must be an integer >= {minimum}, got {v}")
    return int(v)


def _check_p(p):
    if not (p > 0) or not math.isfinite(p):
        raise InputError(f"p must be positive, got {p}")


def min_points_thm2(eps, d, delta):
    """``(1-eps) * (delta*sqrt(18 e pi))^-d`` for d >= 2, ``1-eps`` for d = 1."""
    _check_eps(eps)
    d = _check_posint("d", d)
    _check_delta(delta)
    log_v = math.log1p(-eps)
    if d >= 2:
        log_v -= d * (math.log(delta) + 0.5 * LN_18EPI)
    return BoundReport("thm2", {"eps": eps, "d": d, "delta": delta}, log_v)


def min_points_thm3(eps, d, r, p):
    """``(1-eps) * d^(p*d/(r+1))``."""
    _check_eps(eps)
    d = _check_posint("d", d)
    r = _check_posint("r", r)
    _check_p(p)
    log_v = math.log1p(-eps) + (p * d / (r + 1)) * math.log(d)
    return BoundReport("thm3", {"eps": eps, "d": d, "r": r, "p": p}, log_v)


def delta_for_p(d, r, p):
    """``d^(-p/(r+1)) / sqrt(18 e pi)``, the radius that turns thm2 into thm3."""
    d = _check_posint("d", d)
    r = _check_posint("r", r)
    _check_p(p)
    return math.exp(-(p / (r + 1)) * math.log(d) - 0.5 * LN_18EPI)


def d0_threshold(r, p):
    """Log of the dimension ``(r^r (18 e pi)^((r+1)/2))^(1/(1/2 - p))``."""
    r = _check_posint("r", r)
    _check_p(p)
    if p >= 0.5:
        raise DivergentThresholdError(f"the dimension threshold diverges for p >= 1/2 (p={p})")
    log_v = (r * math.log(r) + 0.5 * (r + 1) * LN_18EPI) / (0.5 - p)
    return BoundReport("d0", {"r": r, "p": p}, log_v)


def optimal_p(r):
    return (r + 1) / (2 * r + 3)


def log_c_r(r):
    """``ln c_r`` as a pair ``(value, ln(-value))``; value is ``-inf`` past float range."""
    r = _check_posint("r", r)
    p = optimal_p(r)
    log_d0 = d0_threshold(r, p).log_value
    # -ln c_r = (p/(r+1)) * d0 * ln d0, assembled in log space
    log_neg = math.log(p / (r + 1)) + log_d0 + math.log(log_d0)
    value = -math.exp(log_neg) if log_neg <= LOG_OVERFLOW else -math.inf
    return value, log_neg


def corollary_bound(eps, d, r):
    """``c_r (1-eps) d^(d/(2r+3))`` with ``c_r`` kept in log space."""
    _check_eps(eps)
    d = _check_posint("d", d)
    r = _check_posint("r", r)
    ln_c, ln_neg_ln_c = log_c_r(r)
    # ln c_r swamps the d-dependence in double precision, so report it separately
    growth = math.log1p(-eps) + (d / (2 * r + 3)) * math.log(d)
    return BoundReport(
        "corollary", {"eps": eps, "d": d, "r": r}, ln_c + growth,
        extras={"p_star": optimal_p(r), "log_c_r": ln_c if math.isfinite(ln_c) else None,
                "log_neg_log_c_r": ln_neg_ln_c, "log_without_c_r": growth},
    )


def sukharev_error(d, n):
    """Error ``(d/(2d+2)) n^(-1/d)`` of the product midpoint rule.

    This is the optimal error for functions Lipschitz in the sup-norm on the
    unit cube, a different class from the ones the other bounds concern.
    """
    d = _check_posint("d", d)
    n = _check_posint("n", n)
    return d / (2 * d + 2) * math.exp(-math.log(n) / d)


def sukharev_report(d, n):
    d = _check_posint("d", d)
    n = _check_posint("n", n)
    log_v = math.log(d / (2 * d + 2)) - math.log(n) / d
    return BoundReport("sukharev", {"d": d, "n": n}, log_v)


def _certificate_log_loss(n, d, delta):
    return math.log(n) + d * (math.log(3 * delta) + 0.5 * LN_2PIE)


def fooling_certificate(n, d, delta):
    """Worst-case error lower bound ``max(0, 1 - n (3 delta sqrt(2 pi e))^d)``.

    Holds for every algorithm that samples at any ``n`` points, ``d >= 2``.
    """
    n = _check_posint("n", n)
    d = _check_posint("d", d)
    _check_delta(delta)
    if d < 2:
        raise UnsupportedDimensionError("the fooling certificate needs d >= 2")
    loss = _certificate_log_loss(n, d, delta)
    if loss >= 0:
        return 0.0
    return -math.expm1(loss)


def certificate_report(n, d, delta):
    value = fooling_certificate(n, d, delta)
    loss = _certificate_log_loss(n, d, delta)
    if value == 0:
        log_v = -math.inf
    elif loss < -math.log(2):
        log_v = math.log1p(-math.exp(loss))
    else:
        log_v = math.log(-math.expm1(loss))
    return BoundReport("certificate", {"n": n, "d": d, "delta": delta}, log_v, value,
                       extras={"log_covered": loss})
