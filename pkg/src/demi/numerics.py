"""Precision contexts, decimal I/O, bracketed root finding and finite differences.

Every public routine in the package takes a :class:`PrecisionContext`
explicitly.  Each context owns a private ``mpmath.MPContext`` so no routine
ever touches the global ``mpmath.mp`` precision.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable

import mpmath

from .errors import EvaluationFailure, NoConvergence, NoSignChange, ParseError

__all__ = [
    "PrecisionContext",
    "Bracket",
    "parse_decimal",
    "render",
    "matched_digits",
    "solve_monotone",
    "expand_bracket",
    "fd_weights",
    "central_derivative",
]

# MPFR's default exponent ceiling.  mpmath itself has unbounded exponents, so
# this is a cost limit: exp() of a number with more than ~2**30 bits of
# integer part is never attempted.
DEFAULT_MAX_EXPONENT = 2**30


def _env_max_exponent() -> int:
    raw = os.environ.get("DEMI_MAX_EXPONENT")
    return int(raw) if raw else DEFAULT_MAX_EXPONENT


@dataclass(frozen=True)
class PrecisionContext:
    """Target decimal digits plus guard digits; working precision derives from both.

    ``max_exponent`` is the binary-exponent ceiling used by the tower code to
    decide when e**x is treated as an overflow.
    """

    decimal_digits: int
    guard_digits: int | None = None
    max_exponent: int = field(default_factory=_env_max_exponent)

    def __post_init__(self):
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be positive")
        if self.guard_digits is None:
            object.__setattr__(self, "guard_digits", int(0.2 * self.decimal_digits) + 15)
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be >= 10")
        if self.max_exponent < 16:
            raise ValueError("max_exponent must be >= 16")

    @property
    def working_digits(self) -> int:
        return self.decimal_digits + self.guard_digits

    @property
    def prec(self) -> int:
        return max(64, math.ceil(self.working_digits * math.log2(10)))

    @cached_property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        m = mpmath.MPContext()
        m.prec = self.prec
        return m

    def mpf(self, x) -> mpmath.mpf:
        """Convert int, str, Fraction or mpf (from any context) into this context."""
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        if isinstance(x, float):
            raise TypeError("floats are not accepted; pass a string or exact value")
        return self.mp.mpf(x)

    def eps(self, digits: int | None = None):
        """10**-digits in this context (default: decimal_digits)."""
        return self.mp.mpf(10) ** -(self.decimal_digits if digits is None else digits)

    @property
    def tol(self):
        return self.eps()

    @property
    def solver_tol(self):
        """Per-stage tolerance for inner solves; kept near working precision."""
        return self.eps(self.working_digits - 3)

    def with_digits(self, decimal_digits: int, guard_digits: int | None = None) -> "PrecisionContext":
        return PrecisionContext(decimal_digits, guard_digits, self.max_exponent)

    def with_max_exponent(self, max_exponent: int) -> "PrecisionContext":
        return PrecisionContext(self.decimal_digits, self.guard_digits, max_exponent)


@dataclass(frozen=True)
class Bracket:
    lo: object
    hi: object
    f_lo_sign: int
    f_hi_sign: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bracket requires lo < hi")


# -- decimal I/O -------------------------------------------------------------

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_decimal(text: str, ctx: PrecisionContext):
    text = text.strip()
    if not _DECIMAL_RE.match(text):
        raise ParseError(f"not a decimal number: {text!r}")
    return ctx.mp.mpf(text)


def render(x, digits: int) -> str:
    """Decimal string with exactly ``digits`` significant digits.

    Fixed-point notation is used for decimal exponents in [-6, digits); outside
    that range the mantissa is followed by ``e±NN``.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    if not x:
        return "0." + "0" * digits
    mag = mpmath.libmp.to_str(x._mpf_, digits, strip_zeros=False, min_fixed=0, max_fixed=0)
    # mag looks like "-d.ddddde+NN" or "d.ddddd"
    mant, _, exp = mag.partition("e")
    e10 = int(exp) if exp else 0
    sign = "-" if mant.startswith("-") else ""
    body = mant.lstrip("-").replace(".", "")
    body = body.ljust(digits, "0")[:digits]
    if -6 <= e10 < digits:
        if e10 >= 0:
            whole, frac = body[: e10 + 1], body[e10 + 1:]
            return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"
        return f"{sign}0.{'0' * (-e10 - 1)}{body}"
    return f"{sign}{body[0]}.{body[1:]}e{'+' if e10 >= 0 else '-'}{abs(e10):02d}"


def matched_digits(value, reference: str) -> int:
    """Number of leading significant digits of ``value`` that agree with ``reference``.

    Agreement is measured through the relative difference, so a trailing
    ...999 versus ...000 rounding split still counts as matching.  The count
    is capped at the number of significant digits printed in ``reference``.
    """
    digits_in_ref = len(re.sub(r"[^0-9]", "", reference.split("e")[0]).lstrip("0")) or 1
    work = mpmath.MPContext()
    work.dps = digits_in_ref + 20
    ref = work.mpf(reference)
    val = work.mpf(value)
    if ref == 0:
        return digits_in_ref if abs(val) < work.mpf(10) ** -digits_in_ref else 0
    rel = abs(val - ref) / abs(ref)
    if rel == 0:
        return digits_in_ref
    return max(0, min(digits_in_ref, int(math.floor(-float(work.log10(rel))))))


# -- root finding ------------------------------------------------------------

def _sign(v) -> int:
    return (v > 0) - (v < 0)


def expand_bracket(f: Callable, lo, hi, *, grow: float = 2, max_expansions: int = 60,
                   lower_bound=None) -> Bracket:
    """Widen [lo, hi] geometrically until f changes sign.

    ``lower_bound`` clips expansion on the left (used when f is only defined
    above some value).
    """
    flo, fhi = f(lo), f(hi)
    width = hi - lo
    for _ in range(max_expansions):
        if _sign(flo) * _sign(fhi) <= 0:
            return Bracket(lo, hi, _sign(flo), _sign(fhi))
        width = width * grow
        # move the endpoint on the side where the root must lie
        increasing = fhi > flo
        if (flo > 0) == increasing:
            new_lo = lo - width
            if lower_bound is not None and new_lo <= lower_bound:
                new_lo = (lo + lower_bound) / 2
            lo, flo = new_lo, f(new_lo)
        else:
            hi = hi + width
            fhi = f(hi)
    raise NoSignChange(f"no sign change found after {max_expansions} expansions")


def solve_monotone(f: Callable, bracket: Bracket | tuple, tol, ctx: PrecisionContext,
                   max_iter: int | None = None):
    """Root of a continuous, strictly monotone ``f`` inside ``bracket``.

    Illinois-modified regula falsi with a bisection step whenever the
    interval fails to halve over two consecutive iterations.  Returns the
    midpoint of the final interval, whose width is below ``tol``.
    """
    mp = ctx.mp
    if isinstance(bracket, tuple):
        lo, hi = mp.mpf(bracket[0]), mp.mpf(bracket[1])
        flo, fhi = f(lo), f(hi)
    else:
        lo, hi = mp.mpf(bracket.lo), mp.mpf(bracket.hi)
        flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if _sign(flo) == _sign(fhi):
        raise NoSignChange(f"f has the same sign at both ends of [{lo}, {hi}]")
    if max_iter is None:
        max_iter = 10 * ctx.decimal_digits
    tol = mp.mpf(tol)

    side = 0
    width_before = hi - lo
    for it in range(max_iter):
        width = hi - lo
        if width < tol:
            return (lo + hi) / 2
        if it % 2 == 0:
            if it and width > width_before / 2:
                x = (lo + hi) / 2
            else:
                x = hi - fhi * (hi - lo) / (fhi - flo)
            width_before = width
        else:
            x = hi - fhi * (hi - lo) / (fhi - flo)
        if not lo < x < hi:
            x = (lo + hi) / 2
            if not lo < x < hi:
                # interval is already a single ulp wide
                return x
        fx = f(x)
        if fx == 0:
            return x
        if _sign(fx) == _sign(fhi):
            hi, fhi = x, fx
            if side == 1:
                flo = flo / 2
            side = 1
        else:
            lo, flo = x, fx
            if side == -1:
                fhi = fhi / 2
            side = -1
    raise NoConvergence(f"bracket width {mpmath.nstr(hi - lo, 5)} still above tolerance "
                        f"after {max_iter} iterations")


# -- finite differences ------------------------------------------------------

@lru_cache(maxsize=None)
def fd_weights(order: int, offsets: tuple[int, ...]) -> tuple[Fraction, ...]:
    """Exact finite-difference weights (Fornberg) for the ``order``-th derivative at 0.

    The stencil points are ``offsets`` times the step; the result ``w`` gives
    f^(order)(0) ~ sum_i w_i f(offsets_i * h) / h**order.
    """
    n = len(offsets)
    if order >= n:
        raise ValueError("stencil too small for the requested order")
    xs = [Fraction(o) for o in offsets]
    c = [[Fraction(0)] * (order + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = xs[0]
    for i in range(1, n):
        mn = min(i, order)
        c2 = Fraction(1)
        c5 = c4
        c4 = xs[i]
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(row[order] for row in c)


def _stencil_value(f, x, h, order, offsets, ctx):
    mp = ctx.mp
    weights = fd_weights(order, offsets)
    acc = mp.zero
    for w, o in zip(weights, offsets):
        if w:
            acc += ctx.mpf(w) * f(x + o * h)
    return acc / h**order


def _accuracy_order(order: int, npoints: int) -> int:
    # symmetric stencils gain one order for free when (npoints - order) is odd
    p = npoints - order
    return p + (p % 2)


def central_derivative(f: Callable, x, order: int, ctx: PrecisionContext, *,
                       step=None, half_width: int | None = None):
    """order-th derivative of ``f`` at ``x`` from symmetric differences plus one Richardson level.

    Defaults: stencil -order..order and step 10**(-d/(order+2)), d being the
    context's decimal_digits.
    """
    if order not in (1, 2, 4) and half_width is None:
        raise ValueError("order must be 1, 2 or 4")
    mp = ctx.mp
    x = ctx.mpf(x)
    m = order if half_width is None else half_width
    offsets = tuple(range(-m, m + 1))
    h = ctx.mpf(step) if step is not None else mp.mpf(10) ** (-mp.mpf(ctx.decimal_digits) / (order + 2))
    try:
        d1 = _stencil_value(f, x, h, order, offsets, ctx)
        d2 = _stencil_value(f, x, h / 2, order, offsets, ctx)
    except (ValueError, ZeroDivisionError) as exc:
        raise EvaluationFailure(str(exc)) from exc
    r = 2 ** _accuracy_order(order, len(offsets))
    return (r * d2 - d1) / (r - 1)
