"""Reference-constant corpus and the replay used by ``demi verify``."""

from __future__ import annotations

import fnmatch
import re
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import abel, conj, halfexp, quad
from .errors import CorpusError
from .numerics import PrecisionContext, matched_digits

__all__ = ["ConstantRecord", "RecordResult", "load_corpus", "evaluate", "verify", "DEFAULT_CORPUS"]

DEFAULT_CORPUS = "constants.tsv"
_NUMBER = re.compile(r"^-?\d+\.\d+$")


@dataclass(frozen=True)
class ConstantRecord:
    name: str
    section: str
    min_match_digits: int
    digits: str

    def __post_init__(self):
        if not _NUMBER.match(self.digits):
            raise CorpusError(f"{self.name}: {self.digits!r} is not a decimal")
        significant = len(self.digits.lstrip("-").replace(".", "").lstrip("0"))
        if not 0 < self.min_match_digits <= significant:
            raise CorpusError(f"{self.name}: min_match_digits {self.min_match_digits} "
                              f"exceeds the {significant} digits on file")


@dataclass(frozen=True)
class RecordResult:
    name: str
    required: int
    matched: int
    ms: float
    value: object

    @property
    def passed(self) -> bool:
        return self.matched >= self.required


def load_corpus(path: str | Path | None = None) -> list[ConstantRecord]:
    if path is None:
        text = resources.files("demi.data").joinpath(DEFAULT_CORPUS).read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    records = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise CorpusError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        name, section, min_match, digits = fields
        try:
            min_match = int(min_match)
        except ValueError:
            raise CorpusError(f"line {lineno}: bad min_match_digits {min_match!r}") from None
        records.append(ConstantRecord(name, section, min_match, digits))
    if not records:
        raise CorpusError("corpus is empty")
    return records


# -- evaluation --------------------------------------------------------------

_ARG = r"(-?\d+)"


class _Session:
    """Evaluates corpus names, sharing intermediate half-iterate results."""

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx
        self._half = {}

    def half(self, x: int):
        if x not in self._half:
            self._half[x] = halfexp.half_iterate(x, "exp_half", self.ctx)
        return self._half[x]

    def __call__(self, name: str):
        ctx, mp = self.ctx, self.ctx.mp
        fixed = {
            "-g(1)": lambda: abel.C_one(abel.AbelSeriesConfig.default(ctx)),
            "ln(kappa)": lambda: halfexp.ln_kappa(ctx),
            "h(0)": lambda: conj.h(0, ctx),
            "h'(0)": lambda: conj.h_prime(0, ctx),
            "(g.h)'(0)": lambda: abel.A_prime(conj.h(0, ctx), ctx) * conj.h_prime(0, ctx),
            "xi(1)": lambda: halfexp.xi(1, ctx),
            "xi'(1)": lambda: halfexp.xi_prime(1, ctx),
            "A'(1)": lambda: abel.A_prime(1, ctx),
            "A'(xi(1))": lambda: abel.A_prime(halfexp.xi(1, ctx), ctx),
            "f(0)": lambda: quad.f_limit(0, ctx),
            "f(1)": lambda: quad.f_limit(1, ctx),
            "f'(1)": lambda: quad.f_prime(1, ctx),
            "f''(0)": lambda: quad.f_deriv_origin(2, ctx),
            "f''''(0)": lambda: quad.f_deriv_origin(4, ctx),
            "p(1)": lambda: quad.pq_limits(1, ctx).p,
            "q(1)": lambda: quad.pq_limits(1, ctx).q,
        }
        if name in fixed:
            return fixed[name]()
        patterns = (
            (rf"^psi\({_ARG}\)$", lambda x: self.half(x).value),
            (rf"^h\(e\^{_ARG}\)$", lambda x: self.half(x).h_in),
            (rf"^A\(h\(e\^{_ARG}\)\)-1/2$", lambda x: self.half(x).shifted),
            (rf"^h\(psi\({_ARG}\)\)$", lambda x: self.half(x).h_out),
            (rf"^ln_half\({_ARG}\)$", lambda x: halfexp.ln_half(x, ctx)),
        )
        for pattern, fn in patterns:
            m = re.match(pattern, name)
            if m:
                return fn(int(m.group(1)))
        raise CorpusError(f"no evaluator for constant {name!r}")


def evaluate(name: str, ctx: PrecisionContext):
    """Compute the corpus constant called ``name``."""
    return _Session(ctx)(name)


def verify(records: list[ConstantRecord], ctx: PrecisionContext,
           only: str | None = None) -> list[RecordResult]:
    """Recompute every record (optionally filtered by a glob) and count matched digits.

    A record's requirement is its ``min_match_digits`` capped at the context's
    decimal_digits, since no more digits than requested are promised.
    """
    session = _Session(ctx)
    out = []
    for rec in records:
        if only and not fnmatch.fnmatchcase(rec.name, only):
            continue
        start = time.perf_counter()
        value = session(rec.name)
        ms = (time.perf_counter() - start) * 1000
        out.append(RecordResult(rec.name, min(rec.min_match_digits, ctx.decimal_digits),
                                matched_digits(value, rec.digits), ms, value))
    return out
