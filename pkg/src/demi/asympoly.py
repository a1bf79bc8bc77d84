"""Exact-rational polynomials of the power-logarithmic expansions of y_n = ln(1 + y_{n-1}).

Two expansions are covered::

    y_n   ~ sum_{m<k} P_m(ln(n)/3 - C) * 2 / n^(m+1)
    2/y_n ~ n + sum_{m<k} T_{m+1}(-ln(n)/3 + C) / n^m

Both families are stored as polynomials in one formal variable ``Y``.  The P
family is evaluated at ``u = ln(n)/3 - C`` and the T family at ``-u``; the
flip happens in :mod:`demi.abel`, never here.

``generate_p`` re-derives the P family by order matching in exact rational
arithmetic and ``generate_t`` obtains the T family as the formal reciprocal of
the P series.  The first few members of each family are also transcribed as
fixed tables for validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .errors import OutOfRange

__all__ = [
    "RationalPolynomial",
    "p_table",
    "t_table",
    "generate_p",
    "generate_t",
]


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial in ``Y``; ``coefficients[i]`` multiplies ``Y**i``."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable[Fraction | int | str]):
        coeffs = [Fraction(c) for c in coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs) or (Fraction(0),))

    @property
    def degree(self) -> int:
        if self.coefficients == (0,):
            return -1
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __call__(self, y):
        """Horner evaluation.  ``y`` may be a Fraction, int or mpf."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * y + _lift(c, y)
        return acc

    def to_json(self) -> str:
        return json.dumps([f"{c.numerator}/{c.denominator}" for c in self.coefficients])

    @classmethod
    def from_json(cls, text: str) -> "RationalPolynomial":
        return cls(Fraction(s) for s in json.loads(text))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0 and self.degree >= 0:
                continue
            mono = "" if i == 0 else ("Y" if i == 1 else f"Y^{i}")
            if i and c == 1:
                terms.append(mono)
            elif i and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _lift(c: Fraction, like):
    # Keep exact arithmetic for rational arguments, otherwise convert through
    # the argument's own type so mpf precision is respected.
    if isinstance(like, (int, Fraction)):
        return c
    return like.__class__(c.numerator) / c.denominator


_P_TABLE = (
    ("1",),
    ("0", "1"),
    ("1/18", "-1/3", "1"),
    ("-7/270", "5/18", "-5/6", "1"),
    ("67/4860", "-53/270", "5/6", "-13/9", "1"),
    ("-2701/408240", "653/4860", "-83/108", "101/54", "-77/36", "1"),
    ("92461/30618000", "-3449/40824", "89/135", "-175/81", "95/27", "-29/10", "1"),
)

_T_TABLE = (
    ("0", "1"),
    ("-1/18", "-1/3"),
    ("7/270", "1/6", "1/6"),
    ("-13/1215", "-29/270", "-2/9", "-1/9"),
    ("305/81648", "11/162", "127/540", "7/27", "1/12"),
    ("-3359/3402000", "-767/20412", "-347/1620", "-2/5", "-31/108", "-1/15"),
)


def p_table(m: int) -> RationalPolynomial:
    """Transcribed P_m for 0 <= m <= 6."""
    if not 0 <= m < len(_P_TABLE):
        raise OutOfRange(f"P_{m} is not tabulated (0..6); use generate_p")
    return RationalPolynomial(_P_TABLE[m])


def t_table(m: int) -> RationalPolynomial:
    """Transcribed T_m for 1 <= m <= 6."""
    if not 1 <= m <= len(_T_TABLE):
        raise OutOfRange(f"T_{m} is not tabulated (1..6); use generate_t")
    return RationalPolynomial(_T_TABLE[m - 1])


# -- truncated bivariate arithmetic ------------------------------------------
#
# A "series" is a list indexed by the power of eps = 1/n whose entries are
# polynomials in u, each a list of Fractions.  Everything is truncated at
# eps**order.

Poly = list  # list[Fraction]
Series = list  # list[Poly]


def _padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _pscale(a: Poly, s) -> Poly:
    return [c * s for c in a]


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pderiv(a: Poly) -> Poly:
    return [i * c for i, c in enumerate(a)][1:]


def _sadd(a: Series, b: Series) -> Series:
    return [_padd(x, y) for x, y in zip(a, b)]


def _smul(a: Series, b: Series, order: int) -> Series:
    out: Series = [[] for _ in range(order)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(order - i):
            if b[j]:
                out[i + j] = _padd(out[i + j], _pmul(x, b[j]))
    return out


def _spow_list(s: Series, top: int, order: int) -> list[Series]:
    powers = [[[Fraction(1)]] + [[] for _ in range(order - 1)]]
    for _ in range(top):
        powers.append(_smul(powers[-1], s, order))
    return powers


def _scalar_series(coeffs: Sequence[Fraction], order: int) -> Series:
    return [[Fraction(c)] if c else [] for c in list(coeffs)[:order]] + [
        [] for _ in range(order - len(coeffs))
    ]


def _log1p_series(order: int) -> list[Fraction]:
    # ln(1 + eps) = eps - eps^2/2 + ...
    return [Fraction(0)] + [Fraction((-1) ** (j + 1), j) for j in range(1, order)]


def _inv_pow_series(p: int, order: int) -> list[Fraction]:
    # (1 + eps)^(-p) = sum_j binom(-p, j) eps^j
    out = [Fraction(1)]
    for j in range(1, order):
        out.append(out[-1] * Fraction(-(p + j - 1), j))
    return out


def _residual(ps: list[Poly], order: int) -> Series:
    """ln(1 + y_n) - y_{n+1} for the ansatz built from ``ps``, through eps**(order-1)."""
    y: Series = [[] for _ in range(order)]
    for m, pm in enumerate(ps):
        if m + 1 < order:
            y[m + 1] = _padd(y[m + 1], _pscale(pm, 2))

    # ln(1 + y); y starts at eps**1 so order-1 powers suffice
    lhs: Series = [[] for _ in range(order)]
    ypow = y
    for j in range(1, order):
        lhs = _sadd(lhs, [_pscale(c, Fraction((-1) ** (j + 1), j)) for c in ypow])
        ypow = _smul(ypow, y, order)

    # y_{n+1}: u -> u + ln(1+eps)/3, eps -> eps/(1+eps)
    delta = _scalar_series([c / 3 for c in _log1p_series(order)], order)
    dpows = _spow_list(delta, len(ps) + 1, order)
    rhs: Series = [[] for _ in range(order)]
    for m, pm in enumerate(ps):
        if m + 1 >= order:
            continue
        # P_m(u + delta) = sum_i P_m^{(i)}(u) delta^i / i!
        shifted: Series = [[] for _ in range(order)]
        deriv = pm
        for i in range(len(pm)):
            term = [_pmul(deriv, c) if c else [] for c in dpows[i]]
            shifted = _sadd(shifted, [_pscale(c, Fraction(1, factorial(i))) for c in term])
            deriv = _pderiv(deriv)
        scale = _scalar_series(_inv_pow_series(m + 1, order), order)
        contrib = _smul(shifted, scale, order)
        for j in range(order - m - 1):
            if contrib[j]:
                rhs[j + m + 1] = _padd(rhs[j + m + 1], _pscale(contrib[j], 2))

    return [_padd(a, _pscale(b, -1)) for a, b in zip(lhs, rhs)]


def _trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


@lru_cache(maxsize=None)
def _generate_p(k: int) -> tuple[RationalPolynomial, ...]:
    ps: list[Poly] = [[Fraction(1)], [Fraction(0), Fraction(1)]]
    # P_0 is fixed by the leading balance and P_1 = Y absorbs the free
    # constant into C.  For m >= 2 the eps**(m+2) coefficient of the residual
    # with P_m unknown reads  (2m - 2) P_m - (2/3) P_m' = -D.
    for m in range(2, k):
        order = m + 3
        d = _trim(_residual(ps + [[]], order)[m + 2])
        deg = len(d) - 1
        coeffs = [Fraction(0)] * (deg + 1)
        for i in range(deg, -1, -1):
            nxt = coeffs[i + 1] if i + 1 <= deg else Fraction(0)
            coeffs[i] = (-d[i] + Fraction(2, 3) * (i + 1) * nxt) / (2 * m - 2)
        ps.append(coeffs)
    return tuple(RationalPolynomial(p) for p in ps[:k])


def generate_p(k: int) -> list[RationalPolynomial]:
    """P_0 .. P_{k-1}, derived by order matching in exact arithmetic."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(_generate_p(max(k, 2))[:k])


def residual_orders(ps: Sequence[RationalPolynomial], order: int) -> list[RationalPolynomial]:
    """Coefficients of eps**j in ln(1 + y_n) - y_{n+1}; used to audit a P family."""
    res = _residual([list(p.coefficients) for p in ps], order)
    return [RationalPolynomial(c or [0]) for c in res]


@lru_cache(maxsize=None)
def _generate_t(k: int) -> tuple[RationalPolynomial, ...]:
    ps = _generate_p(k + 1)
    # 2/y_n = n / S(u, eps) with S = sum_m P_m(u) eps^m; invert S termwise.
    inv: list[Poly] = [[Fraction(1)]]
    for j in range(1, k + 1):
        acc: Poly = []
        for i in range(1, j + 1):
            acc = _padd(acc, _pmul(list(ps[i].coefficients), inv[j - i]))
        inv.append(_pscale(acc, -1))
    # coefficient of eps^m (m >= 0) in n/S is inv[m+1] evaluated at u = -Y
    out = []
    for m in range(1, k + 1):
        out.append(RationalPolynomial(c * (-1) ** i for i, c in enumerate(inv[m])))
    return tuple(out)


def generate_t(k: int) -> list[RationalPolynomial]:
    """T_1 .. T_k, the reciprocal-series polynomials."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(_generate_t(k))
