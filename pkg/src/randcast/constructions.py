"""Path generators and constructive procedures with checkable invariants.

Four builders:

  * sample_path realizes desk-scale experiments: the revealed outcome at
    each step is drawn with a success probability chosen by a Reality
    policy from inside the current forecast interval, via the documented
    SplitMix64 stream (platform-identical for a fixed seed).

  * greedy_bounded_path extends a situation by always picking an outcome
    whose multiplier is at most 1 (one exists whenever the strategy is
    admissible for the fair coin), so the strategy's capital never rises
    above its starting bound -- exactly checkable at every step.

  * diagonal_path runs the staged construction that pins every adversary's
    capital under a geometric weighting while driving a target strategy
    through increasing capital milestones; the weighted adversary sum is
    verified to stay at most 2, exactly, at every step.  Stages that
    exhaust their step budget end the construction with partial results:
    growth of a concrete target on the greedy path is not guaranteed at
    desk scale, and the report says how far it got.

  * double_or_hold_pair builds the synthetic demonstration pair: a
    strategy that doubles on outcome 1 at designated positions (holding
    elsewhere) plus a fair-coin path forced to 1 exactly there, so the
    doubling detector selects positions with an all-ones subsequence while
    the overall frequency stays near 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .bits import Bits, SituationView
from .expectation import Gamble
from .model import ConfigError, ForecastingSystem, forecast_at
from .rng import SplitMix64
from .strategies import (
    BettingStrategy,
    PureStrategy,
    HALF_POINT,
    ValidationError,
    capital_at,
)

ZERO = Fraction(0)
ONE = Fraction(1)

Situation = Union[Bits, SituationView]


class InvariantViolation(RuntimeError):
    """An exactly-checked construction invariant failed."""


# -- Reality policies ---------------------------------------------------------


@dataclass(frozen=True)
class RealityPolicy:
    """How Reality picks the next outcome's success probability.

    Kinds: at_lo, at_hi, at_mid, fixed (clamped into the forecast),
    random_in_interval (uniform dyadic point between the bounds), and
    min_capital (deterministically reveal the outcome with the smaller
    multiplier of a given strategy; consumes no randomness).
    """

    kind: str
    p: Optional[Fraction] = None
    strategy: Optional[BettingStrategy] = None

    def __post_init__(self) -> None:
        if self.kind not in (
            "at_lo",
            "at_hi",
            "at_mid",
            "fixed",
            "random_in_interval",
            "min_capital",
        ):
            raise ConfigError(f"unknown reality policy {self.kind!r}")
        if self.kind == "fixed" and self.p is None:
            raise ConfigError("fixed policy needs a probability")
        if self.kind == "min_capital" and self.strategy is None:
            raise ConfigError("min_capital policy needs a strategy")

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.p is not None:
            d["p"] = f"{self.p.numerator}/{self.p.denominator}"
        if self.strategy is not None:
            d["strategy"] = self.strategy.id
        return d


def fixed_policy(p) -> RealityPolicy:
    return RealityPolicy("fixed", p=Fraction(p))


def sample_path(
    system: ForecastingSystem,
    policy: RealityPolicy,
    horizon: int,
    seed: int,
    precision_bits: int = 32,
) -> Bits:
    """Deterministically sample a prefix of the given horizon.

    Each step k: the policy picks a success probability inside the N-bit
    forecast interval at the current situation (fixed probabilities are
    clamped into it) and the next outcome is drawn by exact integer
    comparison against one 64-bit draw.  random_in_interval consumes one
    extra draw per step for the probability itself; min_capital consumes
    none at all.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    rng = SplitMix64(seed)
    buf: list = []
    view = SituationView(buf, 0)
    ev = policy.strategy.fresh() if policy.kind == "min_capital" else None
    for k in range(horizon):
        view.length = k
        if policy.kind == "min_capital":
            d = ev.multiplier(view)
            if not d.non_negative:
                raise ValidationError(f"not a multiplier: {d}")
            if min(d.at0, d.at1) > 1:
                raise ValidationError(
                    "min_capital policy found no non-increasing outcome: "
                    f"multiplier ({d.at0}, {d.at1})"
                )
            bit = 0 if d.at0 <= d.at1 else 1
        else:
            lo, hi = forecast_at(system, view, precision_bits)
            if policy.kind == "at_lo":
                p = lo
            elif policy.kind == "at_hi":
                p = hi
            elif policy.kind == "at_mid":
                p = (lo + hi) / 2
            elif policy.kind == "fixed":
                p = min(max(policy.p, lo), hi)
            else:  # random_in_interval
                p = lo + (hi - lo) * rng.uniform_fraction()
            bit = rng.bernoulli(p)
        buf.append(bit)
    return Bits.from_bits(buf)


# -- greedy capital-bounded extension -----------------------------------------


def greedy_bounded_path(
    strategy: BettingStrategy,
    y,
    start: Bits = Bits.empty(),
    horizon: int = 0,
) -> Bits:
    """Extend `start` by `horizon` outcomes keeping the strategy's capital
    at or below y at every step.

    Each step reveals the outcome with the smaller multiplier (ties go to
    0); admissibility for the fair coin guarantees that multiplier is at
    most 1, so the capital never increases.  The bound is still asserted
    exactly at every step.
    """
    y = Fraction(y)
    ev = strategy.fresh()
    buf = start.tolist()
    view = SituationView(buf, 0)
    cap = ONE
    if cap > y:
        raise ValueError(f"capital bound {y} already violated at the root")
    for k in range(start.length):
        view.length = k
        d = ev.multiplier(view)
        if not d.non_negative:
            raise ValidationError(f"not a multiplier: {d}")
        cap *= d(buf[k])
        if cap > y:
            raise ValueError(
                f"capital bound {y} violated inside the start situation at length {k + 1}"
            )
    for k in range(start.length, start.length + horizon):
        view.length = k
        d = ev.multiplier(view)
        if not d.non_negative:
            raise ValidationError(f"not a multiplier: {d}")
        bit = 0 if d.at0 <= d.at1 else 1
        step = d(bit)
        if step > 1:
            raise ValidationError(
                "no outcome keeps the capital from growing at "
                f"{view.to_bits()!r}: multiplier ({d.at0}, {d.at1}); the "
                "strategy is not admissible for the fair coin"
            )
        cap *= step
        if cap > y:
            raise InvariantViolation(
                f"capital {cap} exceeded bound {y} at step {k + 1}"
            )
        buf.append(bit)
    return Bits.from_bits(buf)


# -- staged diagonal construction ---------------------------------------------


@dataclass
class DiagonalReport:
    """Stage record of the diagonal construction.

    milestones[i] is the length at which the i-th capital milestone was
    reached (index 0 is the root, length 0).  The weighted adversary sum
    trajectory is exact and verified to stay at most 2 at every step.
    """

    milestones: list
    reached: int
    requested: int
    exhausted_stage: Optional[int]
    weighted_sums: list
    target_capitals: list

    @property
    def weighted_sum_max(self) -> Fraction:
        return max(self.weighted_sums)

    def to_json(self) -> dict:
        return {
            "milestones": self.milestones,
            "reached": self.reached,
            "requested": self.requested,
            "exhausted_stage": self.exhausted_stage,
            "weighted_sum_max": _frac_str(self.weighted_sum_max),
            "weighted_sum_bound_ok": bool(self.weighted_sum_max <= 2),
            "final_target_capital": _frac_str(self.target_capitals[-1]),
        }


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def diagonal_path(
    target: BettingStrategy,
    adversaries: Sequence[BettingStrategy],
    milestone_values: Sequence,
    stage_cap: int = 10_000,
) -> tuple[Bits, DiagonalReport]:
    """Drive the target's capital through the milestones while the greedy
    extension keeps the geometrically weighted adversary capitals summable.

    Stage i extends the path one outcome at a time, always picking the
    outcome minimizing the weighted sum of the engaged adversaries' next
    capitals; adversary k joins at the start of stage k with weight
    2^(-n_k - k), where n_k is the length at which milestone k was
    recorded.  The stage ends when the target's capital reaches
    milestone_values[i] (recording n_{i+1}) or after stage_cap outcomes,
    in which case the construction stops with partial results.
    """
    milestone_values = [Fraction(v) for v in milestone_values]
    if any(b <= a for a, b in zip(milestone_values, milestone_values[1:])):
        raise ValueError("milestone values must be strictly increasing")
    if stage_cap < 1:
        raise ValueError("stage_cap must be >= 1")

    buf: list = []
    view = SituationView(buf, 0)
    target_ev = target.fresh()
    target_cap = ONE

    engaged: list = []  # (weight, evaluator, capital)
    weighted_sums = [ZERO]
    target_caps = [target_cap]
    milestones = [0]
    exhausted: Optional[int] = None

    def engage(index: int, length: int) -> None:
        if index < len(adversaries):
            weight = Fraction(1, 1 << (length + index))
            ev = adversaries[index].fresh()
            cap = capital_at_view(ev, index)
            engaged.append([weight, ev, cap])

    def capital_at_view(ev, index_for_msg: int) -> Fraction:
        # walk the adversary's capital along the existing prefix
        cap = ONE
        for i in range(len(buf)):
            v = SituationView(buf, i)
            d = ev.multiplier(v)
            if not d.non_negative:
                raise ValidationError(
                    f"adversary {index_for_msg} produced a negative multiplier"
                )
            cap *= d(buf[i])
        return cap

    def weighted_sum() -> Fraction:
        return sum((w * c for w, _, c in engaged), ZERO)

    engage(0, 0)
    ws = weighted_sum()
    weighted_sums[0] = ws
    _check_weighted(ws, 0)

    for stage, goal in enumerate(milestone_values):
        if stage > 0:
            engage(stage, len(buf))
        reached_goal = False
        for _ in range(stage_cap):
            view.length = len(buf)
            # stage the engaged adversaries' multipliers at the frontier
            step_d = []
            for w, ev, cap in engaged:
                d = ev.multiplier(view)
                if not d.non_negative:
                    raise ValidationError(
                        f"adversary produced a negative multiplier at length {len(buf)}"
                    )
                step_d.append(d)
            next0 = sum(
                (w * cap * d.at0 for (w, _, cap), d in zip(engaged, step_d)), ZERO
            )
            next1 = sum(
                (w * cap * d.at1 for (w, _, cap), d in zip(engaged, step_d)), ZERO
            )
            bit = 0 if next0 <= next1 else 1
            td = target_ev.multiplier(view)
            if not td.non_negative:
                raise ValidationError("target produced a negative multiplier")
            buf.append(bit)
            for entry, d in zip(engaged, step_d):
                entry[2] = entry[2] * d(bit)
            target_cap *= td(bit)
            ws = next0 if bit == 0 else next1
            _check_weighted(ws, len(buf))
            weighted_sums.append(ws)
            target_caps.append(target_cap)
            if target_cap >= goal:
                milestones.append(len(buf))
                reached_goal = True
                break
        if not reached_goal:
            exhausted = stage
            break

    report = DiagonalReport(
        milestones=milestones,
        reached=len(milestones) - 1,
        requested=len(milestone_values),
        exhausted_stage=exhausted,
        weighted_sums=weighted_sums,
        target_capitals=target_caps,
    )
    return Bits.from_bits(buf), report


def _check_weighted(ws: Fraction, length: int) -> None:
    if ws > 2:
        raise InvariantViolation(
            f"weighted adversary sum {ws} exceeded 2 at length {length}"
        )


# -- double-or-hold pair ------------------------------------------------------


class PowersOfTwo:
    """Designated lengths 1, 2, 4, 8, ... (density zero)."""

    def __contains__(self, n: int) -> bool:
        return n >= 1 and (n & (n - 1)) == 0

    def up_to(self, horizon: int) -> list:
        out = []
        p = 1
        while p < horizon:
            out.append(p)
            p <<= 1
        return out


DOUBLE_GAMBLE = Gamble(ZERO, Fraction(2))
HOLD = Gamble(ONE, ONE)


class DoubleOrHoldStrategy(PureStrategy):
    """Double on outcome 1 at designated situation lengths, hold elsewhere."""

    def __init__(self, positions) -> None:
        self.positions = positions
        super().__init__(
            "double_or_hold",
            HALF_POINT,
            lambda s: DOUBLE_GAMBLE if s.length in positions else HOLD,
        )


def double_or_hold_pair(
    positions: Union[str, Sequence[int]] = "powers_of_two",
    horizon: int = 1,
    seed: int = 0,
) -> tuple[BettingStrategy, Bits]:
    """Synthetic strategy/path pair demonstrating the detector gap.

    The path draws one fair bit per step from SplitMix64(seed) and forces
    outcome 1 wherever the preceding situation's length is designated (the
    draw is still consumed, keeping the stream independent of the position
    rule).  Along this path the strategy doubles at every designated
    length and never dies, while the forced bits are too sparse to move
    the overall frequency.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if positions == "powers_of_two":
        pos = PowersOfTwo()
    else:
        pos = frozenset(int(p) for p in positions)
        if any(p < 0 for p in pos):
            raise ConfigError("positions must be non-negative lengths")
    strategy = DoubleOrHoldStrategy(pos)
    rng = SplitMix64(seed)
    half = Fraction(1, 2)
    buf = []
    for k in range(horizon):
        draw = rng.bernoulli(half)
        buf.append(1 if k in pos else draw)
    return strategy, Bits.from_bits(buf)


def is_double_or_hold(strategy: BettingStrategy, s: Situation = Bits.empty()) -> bool:
    """Check the two structural alternatives exactly at s.

    With positive capital at s the multiplier must be exactly (1, 1) or
    (0, 2); with zero capital both alternatives hold trivially.
    """
    if isinstance(s, SituationView):
        s = s.to_bits()
    cap = capital_at(strategy, s)
    if cap == 0:
        return True
    d = strategy.fresh().multiplier(s)
    return (d.at0 == 1 and d.at1 == 1) or (d.at0 == 0 and d.at1 == 2)
