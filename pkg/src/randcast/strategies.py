"""Betting strategies as multiplier processes, capital replay and verdicts.

A betting strategy assigns to every situation a non-negative multiplier
gamble d: the bettor's capital is multiplied by d(x) when outcome x is
revealed.  The generated capital process starts at 1 and is a test
supermartingale for a forecast exactly when the upper expectation of every
multiplier is at most 1 (the multiplier form of the supermartingale
condition, checkable per step).

Capital replay runs in two modes: exact rationals (used by all invariant
checks) and a log2 domain accumulated in extended-precision floats for
long-horizon growth experiments where exact numerators explode.

Verdicts are finite-horizon evidence reports.  Whether a strategy's capital
is (computably) unbounded on an infinite path is undecidable from any
finite prefix, so every report carries an explicit disclaimer and never
claims randomness or its absence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .bits import Bits, SituationView
from .expectation import (
    Gamble,
    HOLD_GAMBLE,
    allowable_bound,
    upper_expectation,
)
from .model import (
    ConfigError,
    ForecastingSystem,
    GrowthFunction,
    IntervalForecast,
    conservative_hull,
    forecast_at,
    forecast_interval,
)

Situation = Union[Bits, SituationView]
Declared = Union[IntervalForecast, ForecastingSystem]

FINITE_HORIZON_NOTE = (
    "finite-horizon evidence, not a randomness decision: the underlying "
    "notions are undecidable from any finite prefix"
)

MAX_CHECK_PRECISION = 64


class ValidationError(RuntimeError):
    """A strategy violated the test-supermartingale conditions."""


class BettingStrategy:
    """Base: named multiplier process with a declared validity claim.

    `declared` is the interval forecast or forecasting system the strategy
    claims the test-supermartingale property for.  `fresh()` returns the
    evaluator for one replay; strategies with evolving internal state hand
    out a private instance per call, stateless ones return themselves.
    """

    def __init__(self, id: str, declared: Declared) -> None:
        self.id = id
        self.declared = declared

    def fresh(self):
        return self

    def multiplier(self, s: Situation) -> Gamble:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"id": self.id}

    def __repr__(self) -> str:
        return f"<strategy {self.id}>"


class PureStrategy(BettingStrategy):
    """Multiplier depends on the situation alone; safe to share."""

    def __init__(self, id: str, declared: Declared, fn: Callable[[Situation], Gamble]) -> None:
        super().__init__(id, declared)
        self._fn = fn

    def multiplier(self, s: Situation) -> Gamble:
        return self._fn(s)


class StatefulEvaluator:
    """Evaluator fed situations along one path, with resync fallback.

    Subclasses implement _reset, _advance(bit) (consuming the multiplier
    last computed at the previous position) and _current() -> Gamble.

    The fast path assumes in-order queries over one shared append-only
    buffer (what the replay drivers do), recognized by buffer identity so
    each step is O(1).  Any other query pattern resets the evaluator and
    replays the queried situation from the root: correct, just slower.
    """

    def __init__(self) -> None:
        self._len = 0
        self._bits: list = []
        self._src_buf: Optional[list] = None

    def multiplier(self, s: Situation) -> Gamble:
        n = s.length
        if isinstance(s, SituationView) and s._buf is self._src_buf:
            if n < self._len:
                self._restart(s)
        else:
            self._restart(s)
        while self._len < n:
            b = self._bits[self._len]
            self._current()  # stage the step multipliers
            self._advance(b)
            self._len += 1
        return self._current()

    def _restart(self, s: Situation) -> None:
        self._len = 0
        self._reset()
        if isinstance(s, SituationView):
            self._src_buf = s._buf
            self._bits = s._buf
        else:
            self._src_buf = None
            self._bits = s.tolist()

    def _reset(self) -> None:
        raise NotImplementedError

    def _advance(self, bit: int) -> None:
        raise NotImplementedError

    def _current(self) -> Gamble:
        raise NotImplementedError


def capital_at(strategy: BettingStrategy, s: Situation) -> Fraction:
    """Capital the strategy has accumulated at situation s (exact)."""
    ev = strategy.fresh()
    cap = Fraction(1)
    buf: list = []
    view = SituationView(buf, 0)
    for i in range(s.length):
        view.length = i
        d = ev.multiplier(view)
        b = s.bit(i)
        cap *= d(b)
        buf.append(b)
    return cap


# -- capital replay -----------------------------------------------------------


@dataclass
class CapitalTrajectory:
    """Capital along a prefix: values[k] is the capital after k outcomes.

    exact mode: list of Fractions, values[0] == 1, no rounding anywhere.
    log2 mode: extended-precision float array of log2 capitals,
    values[0] == 0.0, -inf once the capital hits zero.
    """

    mode: str
    values: object

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def log2_view(self) -> list[float]:
        if self.mode == "exact":
            return [_log2_fraction(v) for v in self.values]
        return [float(v) for v in self.values]

    def final(self):
        return self.values[-1]


def _log2_fraction(v: Fraction) -> float:
    if v == 0:
        return float("-inf")
    return math.log2(v.numerator) - math.log2(v.denominator)


def _log2_gamble_value(v: Fraction) -> np.longdouble:
    if v == 0:
        return np.longdouble("-inf")
    return np.longdouble(math.log2(v.numerator)) - np.longdouble(
        math.log2(v.denominator)
    )


def validate_step(forecast: IntervalForecast, d: Gamble) -> bool:
    """Multiplier admissibility: non-negative with upper expectation <= 1."""
    if not d.non_negative:
        raise ValidationError(f"not a multiplier: {d} has a negative payoff")
    return upper_expectation(forecast, d) <= 1


def _check_step(
    declared: Declared, d: Gamble, s: Situation, precision_bits: int
) -> None:
    if isinstance(declared, IntervalForecast):
        if not validate_step(declared, d):
            _raise_check(declared, d, s)
        return
    system = declared
    if system.exact_rational:
        interval = forecast_interval(system, s, precision_bits)
        if not validate_step(interval, d):
            _raise_check(interval, d, s)
        return
    # Real-valued system: a pass against the conservative hull is sound;
    # a fail may be an artifact of the widening, so retry more precisely.
    n = precision_bits
    while True:
        hull = conservative_hull(system, s, n)
        if validate_step(hull, d):
            return
        if n >= MAX_CHECK_PRECISION:
            _raise_check(hull, d, s)
        n = min(n + 8, MAX_CHECK_PRECISION)


def _raise_check(interval: IntervalForecast, d: Gamble, s: Situation) -> None:
    sit = s.to_bits() if isinstance(s, SituationView) else s
    ub = upper_expectation(interval, d)
    raise ValidationError(
        f"test-supermartingale check failed at situation {sit!r}: "
        f"upper expectation {ub} > 1 for multiplier ({d.at0}, {d.at1}) "
        f"against {interval}"
    )


def replay(
    strategy: BettingStrategy,
    prefix: Bits,
    mode: str = "exact",
    check: bool = False,
    precision_bits: int = 32,
) -> CapitalTrajectory:
    """Run the strategy along the prefix and return its capital trajectory.

    With check=True every step multiplier is validated against the
    strategy's declared forecast (exactly for rational systems, against the
    2^-N hull with automatic refinement otherwise); a failure raises
    ValidationError naming the offending situation.
    """
    if mode not in ("exact", "log2"):
        raise ValueError(f"unknown replay mode {mode!r}")
    ev = strategy.fresh()
    n = prefix.length
    buf = prefix.tolist()
    view = SituationView(buf, 0)
    if mode == "exact":
        values: list = [Fraction(1)]
        cap = Fraction(1)
        for k in range(n):
            view.length = k
            d = ev.multiplier(view)
            if not d.non_negative:
                raise ValidationError(
                    f"not a multiplier: {d} has a negative payoff"
                )
            if check:
                _check_step(strategy.declared, d, view, precision_bits)
            cap *= d(buf[k])
            values.append(cap)
        return CapitalTrajectory("exact", values)
    arr = np.empty(n + 1, dtype=np.longdouble)
    arr[0] = np.longdouble(0.0)
    acc = np.longdouble(0.0)
    for k in range(n):
        view.length = k
        d = ev.multiplier(view)
        if not d.non_negative:
            raise ValidationError(f"not a multiplier: {d} has a negative payoff")
        if check:
            _check_step(strategy.declared, d, view, precision_bits)
        acc = acc + _log2_gamble_value(d(buf[k]))
        arr[k + 1] = acc
    return CapitalTrajectory("log2", arr)


def trajectory_to_csv(trajectory: CapitalTrajectory) -> str:
    """CSV export: step,log2_capital[,exact_capital]."""
    lines = []
    if trajectory.mode == "exact":
        lines.append("step,log2_capital,exact_capital")
        for k, v in enumerate(trajectory.values):
            lines.append(f"{k},{_log2_fraction(v)!r},{v.numerator}/{v.denominator}")
    else:
        lines.append("step,log2_capital")
        for k, v in enumerate(trajectory.values):
            lines.append(f"{k},{float(v)!r}")
    return "\n".join(lines) + "\n"


# -- combinators --------------------------------------------------------------


class MixtureStrategy(BettingStrategy):
    """Weighted countable-mixture analogue, truncated to m components.

    Capital is sum(2^-i-1 * T_i) for i < m plus a 2^-m remainder riding on
    the hold strategy, so the total starts at exactly 1 and stays a test
    supermartingale whenever every component is one for the same interval.
    """

    def __init__(self, id: str, components: Sequence[BettingStrategy], declared: IntervalForecast) -> None:
        super().__init__(id, declared)
        self.components = list(components)
        m = len(self.components)
        self.weights = [Fraction(1, 1 << (i + 1)) for i in range(m)]
        self.remainder = Fraction(1, 1 << m)

    def fresh(self):
        return _MixtureEvaluator(self)


class _MixtureEvaluator(StatefulEvaluator):
    def __init__(self, strategy: MixtureStrategy) -> None:
        super().__init__()
        self._strategy = strategy
        self._reset()

    def _reset(self) -> None:
        self._evals = [c.fresh() for c in self._strategy.components]
        self._caps = [Fraction(1) for _ in self._evals]
        self._staged: Optional[list] = None

    def _component_multipliers(self, view_len: int) -> list:
        view = SituationView(self._bits, view_len)
        return [ev.multiplier(view) for ev in self._evals]

    def _current(self) -> Gamble:
        ds = self._component_multipliers(self._len)
        self._staged = ds
        w = self._strategy.weights
        rem = self._strategy.remainder
        total = sum((wi * ci for wi, ci in zip(w, self._caps)), rem)
        next0 = sum(
            (wi * ci * di.at0 for wi, ci, di in zip(w, self._caps, ds)), rem
        )
        next1 = sum(
            (wi * ci * di.at1 for wi, ci, di in zip(w, self._caps, ds)), rem
        )
        return Gamble(next0 / total, next1 / total)

    def _advance(self, bit: int) -> None:
        ds = self._staged
        self._caps = [c * d(bit) for c, d in zip(self._caps, ds)]
        self._staged = None


def mixture(
    strategies: Sequence[BettingStrategy],
    declared: Optional[IntervalForecast] = None,
    id: Optional[str] = None,
) -> BettingStrategy:
    """Mix test supermartingales declared for one common interval.

    The empty mixture is the hold strategy (all mass on the remainder).
    """
    strategies = list(strategies)
    intervals = []
    for st in strategies:
        if not isinstance(st.declared, IntervalForecast):
            raise ConfigError(
                f"mixture component {st.id!r} is not declared for an interval"
            )
        intervals.append(st.declared)
    if intervals:
        if any(iv != intervals[0] for iv in intervals):
            raise ConfigError("mixture components declare mismatched intervals")
        if declared is None:
            declared = intervals[0]
        elif declared != intervals[0]:
            raise ConfigError("mixture declaration does not match components")
    elif declared is None:
        declared = IntervalForecast.of(0, 1)
    name = id or "mixture(" + ",".join(st.id for st in strategies) + ")"
    return MixtureStrategy(name, strategies, declared)


class GatedStrategy(BettingStrategy):
    """Bet only where the selection fires; hold elsewhere.

    The hold gamble is allowable for every forecast, so gating preserves
    validity for the base strategy's declared forecast.
    """

    def __init__(self, id: str, base: BettingStrategy, selection) -> None:
        super().__init__(id, base.declared)
        self.base = base
        self.selection = selection

    def fresh(self):
        return _GatedEvaluator(self.base.fresh(), self.selection.fresh())


class _GatedEvaluator:
    def __init__(self, base_ev, sel_ev) -> None:
        self._base = base_ev
        self._sel = sel_ev

    def multiplier(self, s: Situation) -> Gamble:
        if self._sel.select(s):
            return self._base.multiplier(s)
        # keep the base evaluator in sync even while holding
        self._base.multiplier(s)
        return HOLD_GAMBLE


def gate_by_selection(strategy: BettingStrategy, selection, id: Optional[str] = None) -> BettingStrategy:
    name = id or f"{strategy.id}|gated[{selection.id}]"
    return GatedStrategy(name, strategy, selection)


class DiscountedStrategy(BettingStrategy):
    """Band-discount adaptation of a strategy toward a forecasting system.

    Out-of-band steps (the system's N-bit bounds leave [r_lo, r_hi]) scale
    the multiplier by 1/K with K the payoff cap of the declared interval;
    in-band steps leave it untouched.  In-band forecasts are certified to
    lie inside the declared interval by the 2^-N margin, out-of-band
    multipliers are pointwise at most 1 after scaling, so the adapted
    strategy is a test supermartingale for the target system.
    """

    def __init__(
        self,
        id: str,
        base: BettingStrategy,
        system: ForecastingSystem,
        r_lo: Fraction,
        r_hi: Fraction,
        precision_bits: int,
    ) -> None:
        super().__init__(id, system)
        interval = base.declared
        if not isinstance(interval, IntervalForecast):
            raise ConfigError("discount adaptation needs an interval-declared strategy")
        eps = Fraction(1, 1 << precision_bits)
        enlarged_lo = max(r_lo - eps, Fraction(0))
        enlarged_hi = min(r_hi + eps, Fraction(1))
        if not (interval.lo <= enlarged_lo and enlarged_hi <= interval.hi):
            raise ConfigError("band exceeds declared interval")
        self.base = base
        self.system = system
        self.r_lo = r_lo
        self.r_hi = r_hi
        self.precision_bits = precision_bits
        self.inv_k = 1 / allowable_bound(interval)

    def out_of_band(self, s: Situation) -> bool:
        lo_n, hi_n = forecast_at(self.system, s, self.precision_bits)
        return lo_n < self.r_lo or self.r_hi < hi_n

    def fresh(self):
        return _DiscountEvaluator(self, self.base.fresh())


class _DiscountEvaluator:
    def __init__(self, strategy: DiscountedStrategy, base_ev) -> None:
        self._strategy = strategy
        self._base = base_ev

    def multiplier(self, s: Situation) -> Gamble:
        d = self._base.multiplier(s)
        if self._strategy.out_of_band(s):
            return d.scale(self._strategy.inv_k)
        return d


def discount_adapt(
    strategy: BettingStrategy,
    system: ForecastingSystem,
    r_lo,
    r_hi,
    precision_bits: int,
    id: Optional[str] = None,
) -> BettingStrategy:
    name = id or f"{strategy.id}|discounted"
    return DiscountedStrategy(
        name, strategy, system, Fraction(r_lo), Fraction(r_hi), precision_bits
    )


class CapitalRatioStrategy(BettingStrategy):
    """Multiplier process of an explicit positive capital process."""

    def __init__(self, id: str, declared: Declared, process: Callable[[Bits], Fraction]) -> None:
        super().__init__(id, declared)
        self._process = process

    def multiplier(self, s: Situation) -> Gamble:
        sit = s.to_bits() if isinstance(s, SituationView) else s
        here = self._process(sit)
        if here <= 0:
            raise ValidationError(
                f"capital process is not positive at {sit!r}: {here}"
            )
        return Gamble(self._process(sit.append(0)) / here, self._process(sit.append(1)) / here)


def multiplier_of(
    process: Callable[[Bits], Fraction],
    declared: Declared,
    id: str = "capital-ratio",
) -> BettingStrategy:
    return CapitalRatioStrategy(id, declared, process)


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class UnboundedReport:
    """Growth evidence against a log2 threshold over one finite horizon."""

    max_log2: float
    argmax_step: int
    crossed: bool
    first_crossing_step: Optional[int]
    threshold_log2: float
    disclaimer: str = FINITE_HORIZON_NOTE

    def to_json(self) -> dict:
        return {
            "max_log2": self.max_log2,
            "argmax_step": self.argmax_step,
            "crossed": self.crossed,
            "first_crossing_step": self.first_crossing_step,
            "threshold_log2": self.threshold_log2,
            "disclaimer": self.disclaimer,
        }


def unbounded_verdict(
    trajectory: CapitalTrajectory, threshold_log2: float
) -> UnboundedReport:
    logs = trajectory.log2_view()
    best = max(range(len(logs)), key=lambda k: logs[k])
    first = None
    for k, v in enumerate(logs):
        if v >= threshold_log2:
            first = k
            break
    return UnboundedReport(
        max_log2=logs[best],
        argmax_step=best,
        crossed=first is not None,
        first_crossing_step=first,
        threshold_log2=float(threshold_log2),
    )


@dataclass(frozen=True)
class SchnorrReport:
    """Capital-minus-growth record over one finite horizon.

    `flagged` is the at-horizon surrogate (the final capital met the growth
    target past the burn-in); `hit_any` records whether the gap touched
    zero at any step past the burn-in, which early crossings of a slow
    growth target make much weaker evidence.
    """

    sup_gap: float
    argmax_step: int
    flagged: bool
    hit_any: bool
    burn_in: int
    sup_gap_exact: Optional[Fraction] = None
    disclaimer: str = FINITE_HORIZON_NOTE

    def to_json(self) -> dict:
        d = {
            "sup_gap": self.sup_gap,
            "argmax_step": self.argmax_step,
            "flagged": self.flagged,
            "hit_any": self.hit_any,
            "burn_in": self.burn_in,
            "disclaimer": self.disclaimer,
        }
        if self.sup_gap_exact is not None:
            d["sup_gap_exact"] = f"{self.sup_gap_exact.numerator}/{self.sup_gap_exact.denominator}"
        return d


def schnorr_verdict(
    trajectory: CapitalTrajectory, growth: GrowthFunction, burn_in: int = 1
) -> SchnorrReport:
    """Sup of capital minus the growth target over the horizon, with the
    step attaining it (default burn-in excludes step 0 from the flags)."""
    if trajectory.mode == "exact":
        gaps = [v - growth(k) for k, v in enumerate(trajectory.values)]
        best = max(range(len(gaps)), key=lambda k: gaps[k])
        flagged = len(gaps) - 1 >= burn_in and gaps[-1] >= 0
        hit_any = any(g >= 0 for g in gaps[burn_in:])
        return SchnorrReport(
            sup_gap=float(gaps[best]),
            argmax_step=best,
            flagged=flagged,
            hit_any=hit_any,
            burn_in=burn_in,
            sup_gap_exact=gaps[best],
        )
    logs = trajectory.log2_view()
    gaps = []
    for k, v in enumerate(logs):
        try:
            cap = 2.0 ** v if v != float("-inf") else 0.0
        except OverflowError:
            cap = float("inf")
        gaps.append(cap - float(growth(k)))
    best = max(range(len(gaps)), key=lambda k: gaps[k])
    flagged = len(gaps) - 1 >= burn_in and gaps[-1] >= 0
    hit_any = any(g >= 0 for g in gaps[burn_in:])
    return SchnorrReport(
        sup_gap=gaps[best],
        argmax_step=best,
        flagged=flagged,
        hit_any=hit_any,
        burn_in=burn_in,
    )


# -- registry -----------------------------------------------------------------

HALF_POINT = IntervalForecast.of(Fraction(1, 2), Fraction(1, 2))


def hold_strategy(declared: Optional[IntervalForecast] = None) -> BettingStrategy:
    # holding is allowable for every forecast, so any declaration is sound
    return PureStrategy("hold", declared or IntervalForecast.of(0, 1), lambda s: HOLD_GAMBLE)


def double_on(bit: int) -> BettingStrategy:
    if bit not in (0, 1):
        raise ConfigError("double_on needs bit 0 or 1")
    d = Gamble.of(0, 2) if bit else Gamble.of(2, 0)
    return PureStrategy(f"double_on({bit})", HALF_POINT, lambda s: d)


def all_in_on(bit: int, interval: IntervalForecast) -> BettingStrategy:
    """Stake everything on one outcome at the extreme admissible odds."""
    if bit not in (0, 1):
        raise ConfigError("all_in_on needs bit 0 or 1")
    if bit == 1:
        if interval.hi == 0:
            raise ConfigError("all_in_on(1) undefined when max forecast is 0")
        d = Gamble(Fraction(0), 1 / interval.hi)
    else:
        if interval.lo == 1:
            raise ConfigError("all_in_on(0) undefined when min forecast is 1")
        d = Gamble(1 / (1 - interval.lo), Fraction(0))
    return PureStrategy(f"all_in_on({bit},{interval})", interval, lambda s: d)


def _fractional_gambles(interval: IntervalForecast, fraction: Fraction) -> tuple[Gamble, Gamble]:
    """(toward-1 gamble, toward-0 gamble), each with upper expectation 1.

    The toward-1 gamble has expectation exactly 1 at the upper endpoint and
    is increasing in p; symmetrically for toward-0 at the lower endpoint.
    """
    up = Gamble(
        1 - fraction, 1 + fraction * (1 - interval.hi) / interval.hi
    )
    down = Gamble(
        1 + fraction * interval.lo / (1 - interval.lo), 1 - fraction
    )
    return up, down


def fractional_exploit(direction: str, interval: IntervalForecast, fraction) -> BettingStrategy:
    fraction = Fraction(fraction)
    if not 0 < fraction <= 1:
        raise ConfigError("fraction must be a rational in (0, 1]")
    if direction not in ("up", "down"):
        raise ConfigError("direction must be 'up' or 'down'")
    if direction == "up" and interval.hi == 0:
        raise ConfigError("'up' undefined when max forecast is 0")
    if direction == "down" and interval.lo == 1:
        raise ConfigError("'down' undefined when min forecast is 1")
    up, down = _fractional_gambles(interval, fraction)
    d = up if direction == "up" else down
    return PureStrategy(
        f"fractional_exploit({direction},{interval},{fraction})",
        interval,
        lambda s: d,
    )


def oscillation_tracker(
    system: ForecastingSystem, fraction, precision_bits: int
) -> BettingStrategy:
    """Chase the forecast midpoint with a displacement-scaled even bet.

    At each situation the N-bit midpoint m of the system's forecast fixes a
    stake f = fraction * |2m - 1| on the side of 1/2 the midpoint leans to
    (toward 0 when m <= 1/2); the multipliers (1 -/+ f, 1 +/- f) average to
    exactly 1 under the fair coin, so the strategy is a test
    supermartingale for {1/2} regardless of the tracked system.
    """
    fraction = Fraction(fraction)
    if not 0 < fraction <= 1:
        raise ConfigError("fraction must be a rational in (0, 1]")
    if precision_bits < 1:
        raise ConfigError("precision_bits must be >= 1")

    def fn(s: Situation) -> Gamble:
        lo_n, hi_n = forecast_at(system, s, precision_bits)
        mid = (lo_n + hi_n) / 2
        f = fraction * abs(2 * mid - 1)
        if mid > Fraction(1, 2):
            return Gamble(1 - f, 1 + f)
        return Gamble(1 + f, 1 - f)

    return PureStrategy(
        f"oscillation_tracker({system.kind},{fraction},{precision_bits})",
        HALF_POINT,
        fn,
    )


def imitator(
    generator: Union[str, Callable[[int], int]],
    fraction,
    interval: Optional[IntervalForecast] = None,
) -> BettingStrategy:
    """Simulate a deterministic bit generator and back its predictions.

    The stake-f gambles have upper expectation 1 for the declared interval;
    replayed on the generator's own output every prediction is correct and,
    when the interval sits strictly inside (0, 1), every step multiplies
    the capital by a factor greater than 1.
    """
    fraction = Fraction(fraction)
    if not 0 < fraction <= 1:
        raise ConfigError("fraction must be a rational in (0, 1]")
    interval = interval or HALF_POINT
    if interval.hi == 0 or interval.lo == 1:
        raise ConfigError("imitator needs max forecast > 0 and min forecast < 1")
    if isinstance(generator, str):
        pattern = [1 if c == "1" else 0 for c in generator]
        if not pattern or any(c not in "01" for c in generator):
            raise ConfigError("generator pattern must be a non-empty 0/1 string")
        predict = lambda k: pattern[k % len(pattern)]
        gen_name = generator
    else:
        predict = generator
        gen_name = getattr(generator, "__name__", "fn")
    up, down = _fractional_gambles(interval, fraction)

    def fn(s: Situation) -> Gamble:
        return up if predict(s.length) else down

    return PureStrategy(f"imitator({gen_name},{fraction})", interval, fn)


def generator_output(generator: Union[str, Callable[[int], int]], horizon: int) -> Bits:
    """The deterministic generator's own output prefix."""
    if isinstance(generator, str):
        pattern = [1 if c == "1" else 0 for c in generator]
        return Bits.from_bits(pattern[k % len(pattern)] for k in range(horizon))
    return Bits.from_bits(generator(k) for k in range(horizon))


def strategy_registry(name: str, **params) -> BettingStrategy:
    """Construct a registry strategy by name; unknown names are errors."""
    builders = {
        "hold": lambda: hold_strategy(),
        "double_on": lambda: double_on(params["bit"]),
        "all_in_on": lambda: all_in_on(params["bit"], params["interval"]),
        "fractional_exploit": lambda: fractional_exploit(
            params["direction"], params["interval"], params["fraction"]
        ),
        "oscillation_tracker": lambda: oscillation_tracker(
            params["system"], params["fraction"], params["precision_bits"]
        ),
        "imitator": lambda: imitator(
            params["generator"], params["fraction"], params.get("interval")
        ),
    }
    try:
        builder = builders[name]
    except KeyError:
        raise ConfigError(f"unknown strategy {name!r}") from None
    try:
        return builder()
    except KeyError as exc:
        raise ConfigError(f"strategy {name!r} missing parameter {exc}") from None


def fair_coin_registry(fraction=Fraction(1, 2)) -> list[BettingStrategy]:
    """The canonical registry instances declared for the fair coin."""
    half = HALF_POINT
    return [
        hold_strategy(half),
        double_on(0),
        double_on(1),
        all_in_on(0, half),
        all_in_on(1, half),
        fractional_exploit("up", half, fraction),
        fractional_exploit("down", half, fraction),
        imitator("01", fraction, half),
    ]
