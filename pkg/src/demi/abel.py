"""Abel function of e**x - 1 through the iterated-logarithm orbit.

The orbit y_n = ln(1 + y_{n-1}) is run exactly for N steps and matched to the
truncated power-logarithmic series to recover the integration constant
C(y0).  The Abel function normalised by A(1) = 0 is then

    A(x) = C(1) - C(x)

and satisfies A(e**x - 1) = A(x) + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from mpmath.libmp import fone, mpf_add, mpf_exp, mpf_log, mpf_sub, round_nearest

from . import asympoly
from .errors import DomainError
from .numerics import PrecisionContext, central_derivative, expand_bracket, solve_monotone

__all__ = [
    "AbelSeriesConfig",
    "AbelConstant",
    "iterate_log",
    "iterate_expm1",
    "series_y",
    "series_recip",
    "solve_C",
    "C_one",
    "A",
    "A_inverse",
    "A_prime",
]

DEFAULT_K = 13

# Below this argument A is evaluated through A(x) = A(e**x - 1) - 1.
SMALL_X = "0.05"
# Below this level A_inverse is evaluated through ln(1 + A_inverse(a + 1)).
LOW_LEVEL = -10


def _log10_truncation(k: int, N: int) -> float:
    """log10 of (ln N)**k / N**(k+1)."""
    return k * math.log10(math.log(N)) - (k + 1) * math.log10(N)


@dataclass(frozen=True)
class AbelSeriesConfig:
    """Series length ``k`` and orbit depth ``N`` for the C solve."""

    k: int
    N: int
    ctx: PrecisionContext

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.N < 2:
            raise ValueError("N must be >= 2")
        bound = 1 + _log10_truncation(self.k, self.N)
        if bound >= -self.ctx.decimal_digits:
            raise ValueError(
                f"(k={self.k}, N={self.N}) truncation estimate 1e{bound:.1f} does not reach "
                f"{self.ctx.decimal_digits} digits"
            )

    @classmethod
    def default(cls, ctx: PrecisionContext, k: int = DEFAULT_K) -> "AbelSeriesConfig":
        return _default_config(ctx, k)

    @property
    def truncation_estimate(self) -> float:
        return 10 * 10 ** _log10_truncation(self.k, self.N)


@lru_cache(maxsize=None)
def _default_config(ctx: PrecisionContext, k: int) -> AbelSeriesConfig:
    N = 10
    while _log10_truncation(k, N) >= -ctx.decimal_digits - 10:
        N *= 10
    return AbelSeriesConfig(k, N, ctx)


@dataclass(frozen=True)
class AbelConstant:
    y0: object
    C: object
    config: AbelSeriesConfig
    form: str = "direct"


# -- exact orbit -------------------------------------------------------------

def iterate_log(y0, n: int, ctx: PrecisionContext):
    """y_n for y_{j} = ln(1 + y_{j-1}), by direct recursion."""
    y0 = ctx.mpf(y0)
    if y0 <= 0:
        raise DomainError("iterate_log needs y0 > 0")
    if n < 0:
        raise ValueError("n must be >= 0")
    wp = ctx.prec + 8
    v = y0._mpf_
    for _ in range(n):
        # exact 1 + y, so the log keeps full relative precision for small y
        v = mpf_log(mpf_add(v, fone), wp, round_nearest)
    return ctx.mp.make_mpf(v) + 0


def iterate_expm1(y, n: int, ctx: PrecisionContext):
    """Run the orbit backwards: n applications of y -> e**y - 1."""
    wp = ctx.prec + 8
    v = ctx.mpf(y)._mpf_
    for _ in range(n):
        _, man, exp, bc = v
        # exp(y) - 1 cancels about -log2(y) leading bits
        extra = max(0, -(exp + bc)) + 10 if man else 10
        v = mpf_sub(mpf_exp(v, wp + extra, round_nearest), fone, wp, round_nearest)
    return ctx.mp.make_mpf(v) + 0


# -- series ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _p_coeffs(k: int, ctx: PrecisionContext):
    return [[ctx.mpf(c) for c in p.coefficients] for p in asympoly.generate_p(k)]


@lru_cache(maxsize=None)
def _t_coeffs(k: int, ctx: PrecisionContext):
    return [[ctx.mpf(c) for c in t.coefficients] for t in asympoly.generate_t(k)]


def _horner(coeffs, y):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def series_y(C, n: int, k: int, ctx: PrecisionContext):
    """Truncated y_n ~ sum_{m<k} P_m(ln(n)/3 - C) 2/n**(m+1)."""
    if n < 2:
        raise ValueError("series_y needs n >= 2")
    mp = ctx.mp
    u = mp.log(n) / 3 - ctx.mpf(C)
    inv_n = mp.one / n
    acc = mp.zero
    scale = 2 * inv_n
    for coeffs in _p_coeffs(k, ctx):
        acc += _horner(coeffs, u) * scale
        scale *= inv_n
    return acc


def series_recip(C, n: int, k: int, ctx: PrecisionContext):
    """Truncated 2/y_n ~ n + sum_{m<k} T_{m+1}(-ln(n)/3 + C) / n**m.

    With k = 3 and W_n = ln(n) - 3C this is the four-term form
    n - W/3 + (W - 1/2)/(9n) + (W**2 - 3W + 7/5)/(54 n**2).
    """
    if n < 2:
        raise ValueError("series_recip needs n >= 2")
    mp = ctx.mp
    v = ctx.mpf(C) - mp.log(n) / 3
    inv_n = mp.one / n
    acc = mp.mpf(n)
    scale = mp.one
    for coeffs in _t_coeffs(k, ctx):
        acc += _horner(coeffs, v) * scale
        scale *= inv_n
    return acc


# -- the constant C(y0) -----------------------------------------------------

def solve_C(y0, config: AbelSeriesConfig, form: str = "direct") -> AbelConstant:
    """Match the series to the exact orbit value at depth N and solve for C.

    ``form`` selects the direct series (``"direct"``) or the reciprocal one
    (``"recip"``).
    """
    ctx = config.ctx
    mp = ctx.mp
    y0 = ctx.mpf(y0)
    if y0 <= 0:
        raise DomainError("C(y0) needs y0 > 0")
    N, k = config.N, config.k
    yN = iterate_log(y0, N, ctx)

    if form == "direct":
        def residual(C):
            return series_y(C, N, k, ctx) - yN
    elif form == "recip":
        target = 2 / yN

        def residual(C):
            return series_recip(C, N, k, ctx) - target
    else:
        raise ValueError(f"unknown series form {form!r}")

    # first-order estimate from 2/y_N ~ N - ln(N)/3 + C
    guess = 2 / yN - N + mp.log(N) / 3
    bracket = expand_bracket(residual, guess - 1, guess + 1)
    C = solve_monotone(residual, bracket, ctx.solver_tol * max(1, abs(guess)), ctx)
    return AbelConstant(y0, C, config, form)


@lru_cache(maxsize=None)
def C_one(config: AbelSeriesConfig):
    """C(1), i.e. -g(1); memoised per configuration."""
    return solve_C(1, config).C


def _config(ctx: PrecisionContext, config: AbelSeriesConfig | None) -> AbelSeriesConfig:
    if config is None:
        return AbelSeriesConfig.default(ctx)
    if config.ctx != ctx:
        raise ValueError("config was built for a different precision context")
    return config


def A(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """Abel function with A(e**x - 1) = A(x) + 1 and A(1) = 0."""
    config = _config(ctx, config)
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("A(x) needs x > 0")
    if x == 1:
        return ctx.mp.zero
    shift = 0
    small = ctx.mpf(SMALL_X)
    while x < small:
        x = ctx.mp.expm1(x)
        shift -= 1
    return C_one(config) - solve_C(x, config).C + shift


def A_inverse(a, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """x > 0 with A(x) = a.

    The series is evaluated at C = C(1) - a and the orbit is then run
    backwards N steps, so no root finding is involved.
    """
    config = _config(ctx, config)
    a = ctx.mpf(a)
    lifts = 0
    while a < LOW_LEVEL:
        a += 1
        lifts += 1
    yN = series_y(C_one(config) - a, config.N, config.k, ctx)
    x = iterate_expm1(yN, config.N, ctx)
    for _ in range(lifts):
        x = ctx.mp.log1p(x)
    return x


def A_prime(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """A'(x) by symmetric differences of A."""
    config = _config(ctx, config)
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("A'(x) needs x > 0")
    return central_derivative(lambda t: A(t, ctx, config), x, 1, ctx)
