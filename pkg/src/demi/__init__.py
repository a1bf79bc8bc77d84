"""Arbitrary-precision half-iterates of exp, ln, e**x - 1 and 1 + x**2."""

from .abel import A, A_inverse, A_prime, AbelSeriesConfig, solve_C
from .conj import h, h_inverse, h_limit, h_prime
from .halfexp import kappa, ln_half, psi, xi, xi_prime
from .numerics import PrecisionContext, parse_decimal, render
from .quad import f_deriv_origin, f_limit, f_prime, pq_limits

__version__ = "0.1.0"
