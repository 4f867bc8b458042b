"""Directed-rounding dyadic enclosures for the real-valued forecasts.

Real forecast values are delivered through interval arithmetic over scaled
integers: an enclosure holds integers (lo, hi) at scale 2^-W with the true
value in [lo/2^W, hi/2^W].  exp is a Taylor series with an explicit
remainder bound; sqrt uses exact integer square roots.  No floating point
is trusted anywhere in the precision contract.

The one consumer that matters is delta(n) = e^(-u) * sqrt(e^u - 1) with
u = 1/(n+1), the oscillation amplitude of the built-in near-fair temporal
system.  Results are rounded to a dyadic rational within 2^-N of the true
value.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt


def _isqrt_ceil(x: int) -> int:
    r = isqrt(x)
    return r if r * r == x else r + 1


class Enclosure:
    """Integer interval [lo, hi] at scale 2^-W enclosing a real value."""

    __slots__ = ("lo", "hi", "scale_bits")

    def __init__(self, lo: int, hi: int, scale_bits: int) -> None:
        if lo > hi:
            raise ValueError("empty enclosure")
        self.lo = lo
        self.hi = hi
        self.scale_bits = scale_bits

    def width_ok(self, result_bits: int) -> bool:
        # width <= 2^-result_bits
        return (self.hi - self.lo) << result_bits <= 1 << self.scale_bits

    def to_fraction(self) -> Fraction:
        return Fraction(self.lo + self.hi, 1 << (self.scale_bits + 1))


def exp_enclosure(u: Fraction, scale_bits: int) -> Enclosure:
    """Enclosure of e^u for rational u in [0, 1].

    Taylor terms are tracked as their own enclosures with directed rounding;
    once a term drops below one grid unit the tail is bounded by twice the
    term (the term ratio u/(k+1) is at most 1/2 from k >= 1 on).
    """
    if u < 0 or u > 1:
        raise ValueError("exp_enclosure domain is [0, 1]")
    w = scale_bits
    one = 1 << w
    a, b = u.numerator, u.denominator
    sum_lo, sum_hi = one, one  # k = 0 term
    t_lo, t_hi = one, one
    k = 0
    while True:
        k += 1
        den = b * k
        t_lo = (t_lo * a) // den
        t_hi = -((-t_hi * a) // den)  # ceil
        sum_lo += t_lo
        sum_hi += t_hi
        if t_hi <= 1 and k >= 1:
            sum_hi += 2 * t_hi  # geometric tail bound, ratio <= 1/2
            break
    return Enclosure(sum_lo, sum_hi, w)


def _inv(e: Enclosure) -> Enclosure:
    """Enclosure of 1/x for a positive enclosure x."""
    if e.lo <= 0:
        raise ValueError("inverse of enclosure containing zero")
    w = e.scale_bits
    sq = 1 << (2 * w)
    return Enclosure(sq // e.hi, -((-sq) // e.lo), w)


def _sqrt(e: Enclosure) -> Enclosure:
    """Enclosure of sqrt(x) for a non-negative enclosure x."""
    if e.lo < 0:
        raise ValueError("sqrt of enclosure reaching below zero")
    w = e.scale_bits
    return Enclosure(isqrt(e.lo << w), _isqrt_ceil(e.hi << w), w)


def _mul(x: Enclosure, y: Enclosure) -> Enclosure:
    """Product of two non-negative enclosures at a shared scale."""
    if x.scale_bits != y.scale_bits:
        raise ValueError("scale mismatch")
    w = x.scale_bits
    return Enclosure((x.lo * y.lo) >> w, -((-x.hi * y.hi) >> w), w)


def delta_enclosure(n: int, result_bits: int) -> Enclosure:
    """Enclosure of delta(n) = e^(-u) sqrt(e^u - 1), u = 1/(n+1), with
    width at most 2^-result_bits."""
    if n < 0:
        raise ValueError("n must be non-negative")
    # e^u - 1 is of order u = 1/(n+1); the working scale must resolve it.
    w = result_bits + (n + 1).bit_length() + 8
    u = Fraction(1, n + 1)
    while True:
        one = 1 << w
        eu = exp_enclosure(u, w)
        em1 = Enclosure(eu.lo - one, eu.hi - one, w)
        if em1.lo > 0:
            enc = _mul(_inv(eu), _sqrt(em1))
            if enc.width_ok(result_bits):
                return enc
        w += 16


@lru_cache(maxsize=None)
def delta(n: int, precision_bits: int) -> Fraction:
    """Dyadic rational within 2^-precision_bits of delta(n).

    delta(n) lies in (0, 1/2) for every n >= 0 (the square gap
    (e^u - 2)^2 > 0 is strict at u = 1/(n+1)); the returned approximation
    is clamped into that open interval, which can only shrink its error.
    """
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    enc = delta_enclosure(n, precision_bits + 1)
    value = enc.to_fraction()
    w = enc.scale_bits + 1
    eps = Fraction(1, 1 << w)
    half = Fraction(1, 2)
    if value <= 0:
        value = eps
    elif value >= half:
        value = half - eps
    return value
