"""Half-iterate f of 1 + x**2, i.e. 1 + f(x)**2 = f(1 + x**2).

f is the limit of f_n(x) = sqrt(f_{n-1}(1 + x**2) - 1) started from
f_0(x) = |x|**sqrt(2).  Unrolled over the orbit x_0 = |x|, x_j = 1 + x_{j-1}**2
this is n square roots applied to f_0(x_n), and the intermediate values of
that chain are exactly f_{n-j}(x_j).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NegativeRadicand, NoConvergence
from .numerics import PrecisionContext, central_derivative, fd_weights

__all__ = [
    "QuadOrbit",
    "PQResult",
    "quad_orbit",
    "f_iter",
    "f_limit",
    "pq_limits",
    "f_prime",
    "f_deriv_origin",
]


MIN_DEPTH = 3


@dataclass(frozen=True)
class QuadOrbit:
    x0: object
    values: tuple
    depth: int


@dataclass(frozen=True)
class PQResult:
    p: object
    q: object
    depth: int
    tail_bound: object


def quad_orbit(x0, depth: int, ctx: PrecisionContext) -> QuadOrbit:
    x = abs(ctx.mpf(x0))
    values = [x]
    for _ in range(depth):
        values.append(1 + values[-1] ** 2)
    return QuadOrbit(x, tuple(values), depth)


def _fits(orbit_top, ctx: PrecisionContext) -> bool:
    # squaring doubles the binary exponent; keep the next level under the ceiling
    _, man, exp, bc = orbit_top._mpf_
    return not man or 2 * (exp + bc) + 2 < ctx.max_exponent


def _chain(values, ctx: PrecisionContext) -> list:
    """[f_n(x_0), f_{n-1}(x_1), ..., f_0(x_n)] for the orbit ``values``."""
    mp = ctx.mp
    z = values[-1] ** mp.sqrt(2)
    out = [z]
    for j in range(len(values) - 2, -1, -1):
        r = z - 1
        if r < 0:
            raise NegativeRadicand(f"f chain hit {mp.nstr(r, 5)} at level {j}")
        z = mp.sqrt(r)
        out.append(z)
    out.reverse()
    return out


def f_iter(x, n: int, ctx: PrecisionContext):
    """f_n(x) by n square-root steps down the orbit of |x|."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _chain(quad_orbit(x, n, ctx).values, ctx)[0]


def f_limit(x, ctx: PrecisionContext, max_depth: int | None = None):
    """f(x) = lim f_n(x), stopping once |f_n - f_{n-1}| < 10**-(d+3).

    If the orbit reaches the exponent ceiling first, the deepest available
    f_n is returned: f_0 is then evaluated at an argument so large that it
    already equals f to working precision.
    """
    if max_depth is None:
        max_depth = 4 * ctx.decimal_digits
    target = ctx.eps(ctx.decimal_digits + 3)
    values = [abs(ctx.mpf(x))]
    prev = _chain(values, ctx)[0]
    for n in range(1, max_depth + 1):
        if not _fits(values[-1], ctx):
            return prev
        values.append(1 + values[-1] ** 2)
        cur = _chain(values, ctx)[0]
        # f_0(0) = f_1(0) = 0, so early agreement proves nothing
        if n >= MIN_DEPTH and abs(cur - prev) < target:
            return cur
        prev = cur
    raise NoConvergence(f"f({ctx.mp.nstr(x, 10)}) not converged within depth {max_depth}")


def pq_limits(x, ctx: PrecisionContext, literal: bool = True,
              max_depth: int | None = None) -> PQResult:
    """p(x) = lim prod_{j<n} x_j / x_n and q(x) = lim prod_{j<n} f_{n-j}(x_j) / f_0(x_n).

    ``literal=True`` uses the exact inner depths n - j (the chain values);
    ``literal=False`` substitutes the converged f(x_j).
    """
    mp = ctx.mp
    x = ctx.mpf(x)
    if x <= 0:
        raise ValueError("pq_limits needs x > 0")
    if max_depth is None:
        max_depth = 4 * ctx.decimal_digits
    target = ctx.eps(ctx.decimal_digits + 3)
    values = [x]
    p_prev = q_prev = None
    for n in range(1, max_depth + 1):
        if not _fits(values[-1], ctx):
            break
        values.append(1 + values[-1] ** 2)
        if literal:
            chain = _chain(values, ctx)
            inner = chain[:-1]
            top = chain[-1]
        else:
            inner = [f_limit(v, ctx) for v in values[:-1]]
            top = values[-1] ** mp.sqrt(2)
        p = mp.fprod(values[:-1]) / values[-1]
        q = mp.fprod(inner) / top
        if p_prev is not None:
            tail = abs(p - p_prev) + abs(q - q_prev)
            if tail < target:
                return PQResult(p, q, n, tail)
        p_prev, q_prev = p, q
    raise NoConvergence("p/q products did not settle")


def f_prime(x, ctx: PrecisionContext):
    """f'(x) = sqrt(2) p(x) / q(x); odd, so f'(0) = 0 and f'(-x) = -f'(x)."""
    mp = ctx.mp
    x = ctx.mpf(x)
    if x == 0:
        return central_derivative(lambda t: f_limit(t, ctx), x, 1, ctx)
    if x < 0:
        return -f_prime(-x, ctx)
    r = pq_limits(x, ctx)
    return mp.sqrt(2) * r.p / r.q


def f_deriv_origin(order: int, ctx: PrecisionContext, half_width: int | None = None):
    """f''(0) or f''''(0) from a symmetric stencil, reflected onto x >= 0.

    Step 10**(-d/8); the default stencil spans -(order/2 + 4) .. (order/2 + 4)
    and one Richardson level with the halved step is applied.
    """
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    mp = ctx.mp
    m = half_width if half_width is not None else order // 2 + 4
    offsets = tuple(range(-m, m + 1))
    weights = fd_weights(order, offsets)
    h = mp.mpf(10) ** (-mp.mpf(ctx.decimal_digits) / 8)

    def estimate(step):
        cache = {}
        acc = mp.zero
        for w, o in zip(weights, offsets):
            if not w:
                continue
            key = abs(o)
            if key not in cache:
                cache[key] = f_limit(key * step, ctx)
            acc += ctx.mpf(w) * cache[key]
        return acc / step**order

    d1, d2 = estimate(h), estimate(h / 2)
    p = 2 * m + 1 - order
    r = 2 ** (p + p % 2)
    return (r * d2 - d1) / (r - 1)
