"""Half-iterates of exp, ln and e**x - 1.

With A the Abel function of e**x - 1 and h the conjugation function,
A(h(.)) turns iteration of exp into a unit shift, so

    psi(x)     = h^-1( A^-1( A(h(e**x)) - 1/2 ) )      psi(psi(x)) = e**x
    ln_half(x) = h^-1( A^-1( A(h(x)) - 1/2 ) )         psi(ln_half(x)) = x
    xi(x)      = A^-1( A(x) + 1/2 )                    xi(xi(x)) = e**x - 1
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abel import A, A_inverse, A_prime, AbelSeriesConfig
from .conj import h, h_inverse
from .errors import DomainError
from .numerics import PrecisionContext

__all__ = [
    "HalfIterateValue",
    "half_iterate",
    "psi",
    "ln_half",
    "xi",
    "xi_prime",
    "kappa",
    "ln_kappa",
    "SpecialRow",
    "special_values",
]


@dataclass(frozen=True)
class HalfIterateValue:
    """Result plus the intermediate quantities of the construction.

    ``h_in`` is h(e**x) for exp_half, h(x) for ln_half and x itself for xi;
    ``shifted`` is A(h_in) shifted by the half step; ``h_out`` is
    A^-1(shifted) (equal to ``value`` for xi).
    """

    x: object
    value: object
    branch: str
    h_in: object
    shifted: object
    h_out: object


def half_iterate(x, branch: str, ctx: PrecisionContext,
                 config: AbelSeriesConfig | None = None) -> HalfIterateValue:
    mp = ctx.mp
    x = ctx.mpf(x)
    half = mp.mpf(1) / 2
    if branch == "exp_half":
        h_in = h(mp.exp(x), ctx)
        shifted = A(h_in, ctx, config) - half
    elif branch == "ln_half":
        if x <= ln_kappa(ctx, config):
            raise DomainError("ln_half(x) needs x > ln(kappa) = -0.69749...")
        h_in = h(x, ctx)
        shifted = A(h_in, ctx, config) - half
    elif branch == "xi":
        if x <= 0:
            raise DomainError("xi(x) needs x > 0")
        shifted = A(x, ctx, config) + half
        value = A_inverse(shifted, ctx, config)
        return HalfIterateValue(x, value, branch, x, shifted, value)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    h_out = A_inverse(shifted, ctx, config)
    return HalfIterateValue(x, h_inverse(h_out, ctx), branch, h_in, shifted, h_out)


def psi(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """exp^[1/2](x)."""
    return half_iterate(x, "exp_half", ctx, config).value


@lru_cache(maxsize=None)
def _kappa(ctx: PrecisionContext, config: AbelSeriesConfig | None):
    return psi(0, ctx, config)


def kappa(ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """psi(0), memoised per context and configuration."""
    return _kappa(ctx, config)


def ln_kappa(ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """ln(kappa) = lim_{x -> -inf} psi(x), the lower end of ln_half's domain."""
    return ctx.mp.log(kappa(ctx, config))


def ln_half(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """ln^[1/2](x), the inverse of psi; defined for x > ln(kappa)."""
    return half_iterate(x, "ln_half", ctx, config).value


def xi(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """Half-iterate of e**x - 1 on x > 0."""
    return half_iterate(x, "xi", ctx, config).value


def xi_prime(x, ctx: PrecisionContext, config: AbelSeriesConfig | None = None):
    """xi'(x) = A'(x) / A'(xi(x))."""
    x = ctx.mpf(x)
    if x <= 0:
        raise DomainError("xi'(x) needs x > 0")
    return A_prime(x, ctx, config) / A_prime(xi(x, ctx, config), ctx, config)


@dataclass(frozen=True)
class SpecialRow:
    label: str
    x: object
    exp_half: object  # None where undefined
    ln_half: object


def special_values(ctx: PrecisionContext, config: AbelSeriesConfig | None = None) -> list[SpecialRow]:
    """The seven landmark rows -inf, ln k, 0, k, 1, e**k, e with both half-iterates.

    Every finite entry is computed from psi / ln_half at that abscissa; the
    infinite ends use the limits ln(kappa) and -inf.
    """
    mp = ctx.mp
    k = kappa(ctx, config)
    lk = mp.log(k)
    rows = [SpecialRow("-inf", mp.ninf, lk, None),
            SpecialRow("ln(kappa)", lk, psi(lk, ctx, config), mp.ninf)]
    for label, x in (("0", mp.zero), ("kappa", k), ("1", mp.one),
                     ("exp(kappa)", mp.exp(k)), ("e", mp.e)):
        rows.append(SpecialRow(label, x, psi(x, ctx, config), ln_half(x, ctx, config)))
    return rows
