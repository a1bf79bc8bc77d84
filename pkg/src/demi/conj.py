"""Conjugation function h with h(e**x) = e**h(x) - 1.

h is the limit of h_n(x) = ln(1 + h_{n-1}(e**x)), h_0(x) = x.  Unrolled, h_n
applies n nested ln(1 + .) to the n-th member of the tower x_0 = x,
x_j = e**x_{j-1}, which escapes any fixed exponent range within a few levels.
When x_n would overflow the context's exponent ceiling, ln(1 + x_n) is taken
from the expansion ln(x_n) + 1/x_n - 1/(2 x_n**2) + 1/(3 x_n**3) with
ln(x_n) = x_{n-1}.  The exponent range is symmetric, so whenever x_n
overflows the correction terms underflow and are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DepthError, DomainError, NoConvergence
from .numerics import PrecisionContext, expand_bracket, solve_monotone

__all__ = [
    "TowerValue",
    "HLimitResult",
    "tower",
    "h_iter",
    "h_limit",
    "h",
    "h_prime",
    "h_inverse",
    "h_asymptote",
]

DEFAULT_MAX_DEPTH = 64


@dataclass(frozen=True)
class TowerValue:
    level: int
    value: object  # None once overflowed
    overflow: bool
    predecessor_value: object


@dataclass(frozen=True)
class HLimitResult:
    value: object
    depth_used: int
    error_estimate: object
    converged: bool = True


def tower(x, n: int, ctx: PrecisionContext) -> list[TowerValue]:
    """x_0 .. x_n with overflow markers; level 0 has no predecessor."""
    mp = ctx.mp
    x = ctx.mpf(x)
    out = [TowerValue(0, x, False, None)]
    ln2 = mp.ln2
    for level in range(1, n + 1):
        prev = out[-1]
        if prev.overflow:
            out.append(TowerValue(level, None, True, None))
            continue
        # binary exponent of e**prev is about prev / ln 2
        if prev.value / ln2 > ctx.max_exponent:
            out.append(TowerValue(level, None, True, prev.value))
        else:
            out.append(TowerValue(level, mp.exp(prev.value), False, prev.value))
    return out


def _ln1p_tower(t: TowerValue, ctx: PrecisionContext):
    """ln(1 + x_n) for a tower entry, using the large-argument expansion on overflow."""
    if not t.overflow:
        return ctx.mp.log1p(t.value)
    if t.predecessor_value is None:
        raise DepthError(f"tower level {t.level} has no representable predecessor")
    # x_n overflowed, so 1/x_n = e**-x_{n-1} sits below the symmetric exponent
    # floor and the 1/x_n, 1/(2 x_n**2), 1/(3 x_n**3) corrections vanish.
    return t.predecessor_value


def _h_from_tower(levels: list[TowerValue], n: int, ctx: PrecisionContext):
    mp = ctx.mp
    if n == 0:
        return levels[0].value
    inner = levels[n]
    if inner.overflow and inner.predecessor_value is None:
        # x_{n-1} overflowed as well; peel levels until the expansion applies
        m = next(i for i in range(n, 0, -1) if levels[i].predecessor_value is not None
                 or not levels[i].overflow)
        return _h_from_tower(levels, m, ctx)
    z = _ln1p_tower(inner, ctx)
    for _ in range(n - 1):
        z = mp.log1p(z)
    return z


def h_iter(x, n: int, ctx: PrecisionContext):
    """h_n(x) with the overflow replacement applied to the innermost logarithm."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _h_from_tower(tower(x, n, ctx), n, ctx)


def _dropped_log10(levels: list[TowerValue], n: int) -> float:
    """log10 bound on the correction dropped at depth n, or -inf if none was dropped."""
    first = next((t for t in levels[1:n + 1] if t.overflow), None)
    if first is None or first.predecessor_value is None:
        return -math.inf
    return -float(first.predecessor_value) / math.log(10)


def h_limit(x, ctx: PrecisionContext, max_depth: int = DEFAULT_MAX_DEPTH) -> HLimitResult:
    """Raise n until |h_n(x) - h_{n-1}(x)| < 10**-(d+3)."""
    mp = ctx.mp
    x = ctx.mpf(x)
    target = ctx.eps(ctx.decimal_digits + 3)
    levels = tower(x, 1, ctx)
    prev = _h_from_tower(levels, 0, ctx)
    for n in range(1, max_depth + 1):
        if len(levels) <= n:
            levels = tower(x, n, ctx)
        cur = _h_from_tower(levels, n, ctx)
        diff = abs(cur - prev)
        if diff < target:
            dropped = _dropped_log10(levels, n)
            if dropped > -ctx.decimal_digits - 3:
                return HLimitResult(cur, n, max(diff, mp.mpf(10) ** dropped), False)
            return HLimitResult(cur, n, diff, True)
        prev = cur
    raise NoConvergence(f"h({mp.nstr(x, 10)}) not converged at depth {max_depth}")


def h(x, ctx: PrecisionContext):
    return h_limit(x, ctx).value


def h_asymptote(ctx: PrecisionContext):
    """lim_{x -> -inf} h(x) = ln(1 + h(0))."""
    return ctx.mp.log1p(h(0, ctx))


def h_prime(x, ctx: PrecisionContext):
    """h'(x) = prod_j exp(x_j - h(x_j)) over the tower x_j.

    Factors are accumulated as a sum of exponents; the product is cut once a
    term drops below 10**-(d+5), which happens as soon as x_j exceeds about
    (d+5) ln 10 since x - h(x) ~ -e**-x there.
    """
    mp = ctx.mp
    xj = ctx.mpf(x)
    cutoff = ctx.eps(ctx.decimal_digits + 5)
    big = (ctx.working_digits + 5) * math.log(10)
    total = mp.zero
    for _ in range(DEFAULT_MAX_DEPTH):
        if xj > big:
            return mp.exp(total)
        term = xj - h(xj, ctx)
        total += term
        if abs(term) < cutoff:
            return mp.exp(total)
        if xj / mp.ln2 > ctx.max_exponent:
            break
        xj = mp.exp(xj)
    raise NoConvergence("h' product did not settle before the tower overflowed")


def h_inverse(y, ctx: PrecisionContext):
    """x with h(x) = y; requires y above the asymptote ln(1 + h(0))."""
    mp = ctx.mp
    y = ctx.mpf(y)
    floor = h_asymptote(ctx)
    if y <= floor:
        raise DomainError(f"h_inverse needs y > ln(1 + h(0)) = {mp.nstr(floor, 15)}")

    def residual(t):
        return h(t, ctx) - y

    hi = y + 1
    lo = y - 2
    bracket = expand_bracket(residual, lo, hi)
    return solve_monotone(residual, bracket, ctx.solver_tol * max(1, abs(y)), ctx)
