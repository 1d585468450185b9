"""Transcendental constants, evaluated once at import in extended precision."""
import mpmath

with mpmath.workdps(40):
    _two_pi_e = 2 * mpmath.pi * mpmath.e
    _eighteen_e_pi = 18 * mpmath.e * mpmath.pi
    TWO_PI_E = float(_two_pi_e)
    LN_2PIE = float(mpmath.log(_two_pi_e))
    EIGHTEEN_E_PI = float(_eighteen_e_pi)
    LN_18EPI = float(mpmath.log(_eighteen_e_pi))
    SQRT_18EPI = float(mpmath.sqrt(_eighteen_e_pi))
    LN_PI = float(mpmath.log(mpmath.pi))

del _two_pi_e, _eighteen_e_pi
