"""Interval forecasts, forecasting systems, and growth functions.

A forecasting system maps every situation to a closed rational subinterval
of [0, 1] describing the probability of the next outcome being 1.  Systems
answer precision queries: bounds(s, N) returns rationals within 2^-N of the
true lower and upper forecast values.  Exact-rational systems return exact
values at every N; the near-fair oscillating system is real-valued and is
served by the dyadic enclosure engine.

forecast_at clamps query answers into [0, 1] and repairs any approximation
inversion (lo > hi) by collapsing both to the midpoint, so downstream code
always sees a valid interval forecast.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, log2
from typing import Optional, Sequence

from .bits import Bits
from .dyadic import delta

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class ConfigError(ValueError):
    """Malformed configuration or registry parameters."""


@dataclass(frozen=True)
class IntervalForecast:
    """Closed rational subinterval of [0, 1]."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not (0 <= self.lo <= self.hi <= 1):
            raise ValueError(f"invalid interval forecast [{self.lo}, {self.hi}]")

    @staticmethod
    def point(p) -> "IntervalForecast":
        p = Fraction(p)
        return IntervalForecast(p, p)

    @staticmethod
    def of(lo, hi) -> "IntervalForecast":
        return IntervalForecast(Fraction(lo), Fraction(hi))

    @property
    def precise(self) -> bool:
        return self.lo == self.hi

    def contains(self, other: "IntervalForecast") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        if self.precise:
            return f"{{{self.lo}}}"
        return f"[{self.lo}, {self.hi}]"


VACUOUS = IntervalForecast(ZERO, ONE)


class ForecastingSystem:
    """Base class: per-situation interval forecasts with 2^-N queries."""

    kind: str = "abstract"
    precise: bool = False
    temporal: bool = False
    stationary: bool = False
    exact_rational: bool = False

    def bounds(self, s: Bits, precision_bits: int) -> tuple[Fraction, Fraction]:
        """Raw (lo_N, hi_N), each within 2^-N of the true value."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


def forecast_at(
    system: ForecastingSystem, s: Bits, precision_bits: int
) -> tuple[Fraction, Fraction]:
    """Approximate forecast bounds at s, clamped into a valid interval.

    Postcondition: 0 <= lo <= hi <= 1 with |lo - true lo| < 2^-N and
    |hi - true hi| < 2^-N (clamping and the midpoint repair never increase
    the error, since the true values satisfy the same constraints).
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    lo, hi = system.bounds(s, precision_bits)
    lo = min(max(lo, ZERO), ONE)
    hi = min(max(hi, ZERO), ONE)
    if lo > hi:
        mid = (lo + hi) / 2
        lo = hi = mid
    return lo, hi


def forecast_interval(
    system: ForecastingSystem, s: Bits, precision_bits: int
) -> IntervalForecast:
    lo, hi = forecast_at(system, s, precision_bits)
    return IntervalForecast(lo, hi)


def conservative_hull(
    system: ForecastingSystem, s: Bits, precision_bits: int
) -> IntervalForecast:
    """Interval certain to contain the true forecast: the 2^-N query answer
    widened by 2^-N on both sides (exact systems need no widening)."""
    lo, hi = forecast_at(system, s, precision_bits)
    if system.exact_rational:
        return IntervalForecast(lo, hi)
    eps = Fraction(1, 1 << precision_bits)
    return IntervalForecast(max(lo - eps, ZERO), min(hi + eps, ONE))


class StationarySystem(ForecastingSystem):
    """Constant interval forecast at every situation."""

    temporal = True
    stationary = True
    exact_rational = True

    def __init__(self, interval: IntervalForecast) -> None:
        self.interval = interval
        self.precise = interval.precise
        self.kind = "precise-constant" if self.precise else "stationary"

    def bounds(self, s: Bits, precision_bits: int) -> tuple[Fraction, Fraction]:
        return self.interval.lo, self.interval.hi

    def describe(self) -> dict:
        return {"kind": self.kind, "interval": [str(self.interval.lo), str(self.interval.hi)]}


def stationary(lo, hi=None) -> StationarySystem:
    if hi is None:
        hi = lo
    return StationarySystem(IntervalForecast.of(lo, hi))


def vacuous() -> StationarySystem:
    sys_ = StationarySystem(VACUOUS)
    sys_.kind = "vacuous"
    return sys_


class TemporalTableSystem(ForecastingSystem):
    """Forecast depends on the situation only through its length.

    The table lists interval forecasts for lengths 0..len-1; beyond the
    table the behaviour is either cyclic repetition or a constant default.
    """

    temporal = True
    exact_rational = True

    def __init__(
        self,
        table: Sequence[IntervalForecast],
        default: Optional[IntervalForecast] = None,
        cyclic: bool = False,
    ) -> None:
        if not table:
            raise ConfigError("temporal table must not be empty")
        if cyclic and default is not None:
            raise ConfigError("cyclic table cannot also have a default")
        self.table = list(table)
        self.default = default
        self.cyclic = cyclic
        self.kind = "temporal-table"
        self.precise = all(f.precise for f in self.table) and (
            default is None or default.precise
        )

    def forecast_for_length(self, n: int) -> IntervalForecast:
        if n < len(self.table):
            return self.table[n]
        if self.cyclic:
            return self.table[n % len(self.table)]
        if self.default is not None:
            return self.default
        raise ConfigError(f"temporal table has no forecast for length {n}")

    def bounds(self, s: Bits, precision_bits: int) -> tuple[Fraction, Fraction]:
        f = self.forecast_for_length(s.length)
        return f.lo, f.hi

    def describe(self) -> dict:
        d = {"kind": self.kind, "length": len(self.table), "cyclic": self.cyclic}
        if self.default is not None:
            d["default"] = [str(self.default.lo), str(self.default.hi)]
        return d


def alternating(p, q) -> TemporalTableSystem:
    """p at even lengths, q at odd lengths."""
    sys_ = TemporalTableSystem(
        [IntervalForecast.point(p), IntervalForecast.point(q)], cyclic=True
    )
    sys_.kind = "alternating"
    return sys_


class PhiHalfOscillatingSystem(ForecastingSystem):
    """Precise temporal system oscillating around 1/2 with shrinking swing.

    The value at a situation of length n is 1/2 + delta(n) for even n and
    1/2 - delta(n) for odd n, where delta(n) = e^(-1/(n+1)) sqrt(e^(1/(n+1)) - 1)
    lies in (0, 1/2) and decreases to 0 from n = 1 on, so all values stay
    inside (0, 1).  Real-valued: queries go through the dyadic engine.
    """

    temporal = True
    precise = True
    exact_rational = False
    kind = "phi-half-oscillating"

    def bounds(self, s: Bits, precision_bits: int) -> tuple[Fraction, Fraction]:
        n = s.length
        d = delta(n, precision_bits)
        v = HALF + d if n % 2 == 0 else HALF - d
        return v, v

    def describe(self) -> dict:
        return {"kind": self.kind}


def phi_half_oscillating() -> PhiHalfOscillatingSystem:
    return PhiHalfOscillatingSystem()


class CompositeSystem(ForecastingSystem):
    """Concatenation of systems over consecutive length segments.

    segments is a list of (num_lengths, system); a situation of length n is
    answered by the segment covering n, with lengths re-based to the
    segment start.  Situations beyond the declared segments are rejected.
    """

    def __init__(self, segments: Sequence[tuple[int, ForecastingSystem]]) -> None:
        if not segments:
            raise ConfigError("composite needs at least one segment")
        self.segments = []
        start = 0
        for count, sub in segments:
            if count <= 0:
                raise ConfigError("segment length must be positive")
            self.segments.append((start, count, sub))
            start += count
        self.total = start
        self.kind = "composite"
        self.temporal = all(sub.temporal for _, _, sub in self.segments)
        self.precise = all(sub.precise for _, _, sub in self.segments)
        self.exact_rational = all(sub.exact_rational for _, _, sub in self.segments)

    def bounds(self, s: Bits, precision_bits: int) -> tuple[Fraction, Fraction]:
        n = s.length
        for start, count, sub in self.segments:
            if start <= n < start + count:
                if sub.temporal:
                    probe = Bits(n - start, 0)
                else:
                    probe = s
                return sub.bounds(probe, precision_bits)
        raise ConfigError(
            f"composite system has no segment for situation length {n} "
            f"(declared range is [0, {self.total}))"
        )

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "segments": [
                {"lengths": count, "system": sub.describe()}
                for _, count, sub in self.segments
            ],
        }


# -- growth functions --------------------------------------------------------

_LOG2_GRID_BITS = 32


def _log2_dyadic(m: int) -> Fraction:
    # log2 of a positive integer rounded to the 2^-32 grid; rounding a
    # monotone sequence keeps it non-decreasing.
    return Fraction(round(log2(m) * (1 << _LOG2_GRID_BITS)), 1 << _LOG2_GRID_BITS)


@dataclass(frozen=True)
class GrowthFunction:
    """Non-decreasing unbounded rational growth target for capital."""

    rule: str
    param: object = None

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be non-negative")
        if self.rule == "linear":
            return Fraction(self.param) * n
        if self.rule == "sqrt":
            # floor of sqrt(n) on the 2^-16 grid, exact integer arithmetic
            return Fraction(isqrt(n << 32), 1 << 16)
        if self.rule == "log2":
            return _log2_dyadic(n + 1)
        if self.rule == "table":
            table = self.param
            if n < len(table):
                return table[n]
            # continue with unit slope beyond the table so the function
            # stays unbounded
            return table[-1] + (n - len(table) + 1)
        raise ConfigError(f"unknown growth rule {self.rule!r}")


def growth_function(rule: str, param=None) -> GrowthFunction:
    if rule == "linear":
        a = Fraction(param if param is not None else 1)
        if a <= 0:
            raise ConfigError("linear growth needs a positive slope")
        return GrowthFunction("linear", a)
    if rule in ("sqrt", "log2"):
        return GrowthFunction(rule)
    if rule == "table":
        table = tuple(Fraction(v) for v in param or ())
        if not table:
            raise ConfigError("growth table must not be empty")
        if any(b < a for a, b in zip(table, table[1:])):
            raise ConfigError("growth table must be non-decreasing")
        if table[0] < 0:
            raise ConfigError("growth table must be non-negative")
        return GrowthFunction("table", table)
    raise ConfigError(f"unknown growth rule {rule!r}")
