"""Smooth fooling functions and worst-case integration-error lower bounds."""
from .bounds import (BoundReport, corollary_bound, d0_threshold, delta_for_p, fooling_certificate,
                     min_points_thm2, min_points_thm3, sukharev_error)
from .errors import DivergentThresholdError, InputError, PointsParseError, UnsupportedDimensionError
from .estimate import AttackReport, MCEstimate, attack, integral_unit_cube, neighborhood_measure
from .fooling import (EvalResult, FoolingFunction, Smoothed, SmoothingSchedule, conv_eval_generic, f0_eval,
                      fr_eval, fr_eval_pair_crn)
from .geometry import (Ball, PointSet, ball_volume, ball_volume_upper_bound, dist_to_set, sample_ball,
                       slice_ratio)
from .rules import RuleSpec, load_points, midpoint_product, save_points, uniform_random

__version__ = "0.1.0"

__all__ = [
    "Ball", "PointSet", "ball_volume", "ball_volume_upper_bound", "dist_to_set", "sample_ball", "slice_ratio",
    "EvalResult", "FoolingFunction", "Smoothed", "SmoothingSchedule", "conv_eval_generic", "f0_eval", "fr_eval",
    "fr_eval_pair_crn",
    "BoundReport", "corollary_bound", "d0_threshold", "delta_for_p", "fooling_certificate", "min_points_thm2",
    "min_points_thm3", "sukharev_error",
    "AttackReport", "MCEstimate", "attack", "integral_unit_cube", "neighborhood_measure",
    "RuleSpec", "load_points", "midpoint_product", "save_points", "uniform_random",
    "DivergentThresholdError", "InputError", "PointsParseError", "UnsupportedDimensionError",
]
