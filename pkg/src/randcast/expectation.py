"""Upper-expectation calculus for gambles on a binary outcome.

For an interval forecast I and a gamble f, the upper expectation is
max over p in I of p*f(1) + (1-p)*f(0).  Being affine in p it is attained
at an endpoint: the lower endpoint when f(1) <= f(0), the upper endpoint
otherwise.  A gamble is allowable for I when its upper expectation is
non-positive.

Everything here is exact over rationals: the calculus obeys algebraic laws
(boundedness, non-negative homogeneity, subadditivity, constant additivity,
increasingness, interval nesting) that are tested as identities, with no
tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import IntervalForecast


@dataclass(frozen=True)
class Gamble:
    """Payoff per outcome: at0 if the next bit is 0, at1 if it is 1."""

    at0: Fraction
    at1: Fraction

    @staticmethod
    def of(at0, at1) -> "Gamble":
        return Gamble(Fraction(at0), Fraction(at1))

    def __call__(self, outcome: int) -> Fraction:
        return self.at1 if outcome else self.at0

    def __add__(self, other: "Gamble") -> "Gamble":
        return Gamble(self.at0 + other.at0, self.at1 + other.at1)

    def __neg__(self) -> "Gamble":
        return Gamble(-self.at0, -self.at1)

    def scale(self, factor) -> "Gamble":
        factor = Fraction(factor)
        return Gamble(self.at0 * factor, self.at1 * factor)

    def shift(self, mu) -> "Gamble":
        mu = Fraction(mu)
        return Gamble(self.at0 + mu, self.at1 + mu)

    def clip_nonnegative(self) -> "Gamble":
        return Gamble(max(self.at0, 0), max(self.at1, 0))

    @property
    def non_negative(self) -> bool:
        return self.at0 >= 0 and self.at1 >= 0


ZERO_GAMBLE = Gamble(Fraction(0), Fraction(0))
HOLD_GAMBLE = Gamble(Fraction(1), Fraction(1))


def expectation_at(p: Fraction, f: Gamble) -> Fraction:
    return p * f.at1 + (1 - p) * f.at0


def upper_expectation(interval: IntervalForecast, f: Gamble) -> Fraction:
    """Exact max of the expectation over the interval (endpoint attained)."""
    if f.at1 <= f.at0:
        return expectation_at(interval.lo, f)
    return expectation_at(interval.hi, f)


def lower_expectation(interval: IntervalForecast, f: Gamble) -> Fraction:
    """Conjugate: -upper_expectation(I, -f)."""
    return -upper_expectation(interval, -f)


def is_allowable(interval: IntervalForecast, f: Gamble) -> bool:
    """A gamble the forecaster offers: non-positive expectation for every
    probability in the interval."""
    return upper_expectation(interval, f) <= 0


def allowable_bound(interval: IntervalForecast) -> Fraction:
    """Pointwise cap K for non-negative gambles with upper expectation <= 1.

    Requires 0 < hi and lo < 1; then f(1) <= 1/hi and f(0) <= 1/(1-lo), so
    f <= K := max(1/hi, 1/(1-lo)) pointwise.
    """
    if interval.hi == 0 or interval.lo == 1:
        raise ValueError("unbounded payoff direction")
    return max(1 / interval.hi, 1 / (1 - interval.lo))


def clip_step(
    interval: IntervalForecast, candidate: Gamble, previous: Gamble
) -> Gamble:
    """Safeguard step: admit max{0, candidate} only while it keeps the
    upper expectation at most 1, otherwise keep the previous stage.

    With the zero gamble as base case the result is always non-negative
    with upper expectation <= 1, whatever the candidate stream does.
    """
    clipped = candidate.clip_nonnegative()
    if upper_expectation(interval, clipped) <= 1:
        return clipped
    return previous
