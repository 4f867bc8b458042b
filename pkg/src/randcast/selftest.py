"""Exact invariant suites, runnable from the CLI and reused by the tests.

Every suite checks algebraic facts with exact rational arithmetic and a
seeded case generator: the coherence laws of the upper expectation, the
payoff cap for admissible non-negative gambles, the equivalence between
the difference and multiplier forms of the supermartingale condition, the
closure of mixtures, the safeguard clipping recursion, and the capital
bounds of the greedy and diagonal constructions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .bits import Bits
from .expectation import (
    Gamble,
    ZERO_GAMBLE,
    allowable_bound,
    clip_step,
    expectation_at,
    is_allowable,
    lower_expectation,
    upper_expectation,
)
from .model import IntervalForecast, phi_half_oscillating
from .constructions import diagonal_path, greedy_bounded_path
from .strategies import (
    PureStrategy,
    all_in_on,
    double_on,
    fair_coin_registry,
    mixture,
    oscillation_tracker,
    validate_step,
    HALF_POINT,
)


@dataclass
class SuiteResult:
    name: str
    ok: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        msg = f"{status} {self.name} ({self.cases} cases)"
        if self.detail:
            msg += f": {self.detail}"
        return msg


def _fraction(rng: random.Random, lo: int = -1000, hi: int = 1000, den: int = 1000) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _interval(rng: random.Random) -> IntervalForecast:
    a = Fraction(rng.randint(0, 1000), 1000)
    b = Fraction(rng.randint(0, 1000), 1000)
    if a > b:
        a, b = b, a
    return IntervalForecast(a, b)


def _gamble(rng: random.Random) -> Gamble:
    return Gamble(_fraction(rng), _fraction(rng))


def _grid_upper(interval: IntervalForecast, f: Gamble, points: int = 8) -> Fraction:
    # Oracle independent of the endpoint case split: dense rational grid
    # including both endpoints.  Affine in p, so endpoint inclusion makes
    # the grid max exact.
    best = None
    for j in range(points + 1):
        p = interval.lo + (interval.hi - interval.lo) * Fraction(j, points)
        v = expectation_at(p, f)
        if best is None or v > best:
            best = v
    return best


def suite_coherence(seed: int, cases: int = 10_000) -> SuiteResult:
    """Boundedness, homogeneity, subadditivity, constant additivity,
    increasingness, interval nesting, and the endpoint case split."""
    rng = random.Random(seed)
    for i in range(cases):
        interval = _interval(rng)
        f = _gamble(rng)
        g = _gamble(rng)
        lam = abs(_fraction(rng))
        mu = _fraction(rng)
        uf = upper_expectation(interval, f)
        ug = upper_expectation(interval, g)
        if not (min(f.at0, f.at1) <= uf <= max(f.at0, f.at1)):
            return SuiteResult("coherence", False, i, "boundedness failed")
        if upper_expectation(interval, f.scale(lam)) != lam * uf:
            return SuiteResult("coherence", False, i, "homogeneity failed")
        if upper_expectation(interval, f + g) > uf + ug:
            return SuiteResult("coherence", False, i, "subadditivity failed")
        if upper_expectation(interval, f.shift(mu)) != uf + mu:
            return SuiteResult("coherence", False, i, "constant additivity failed")
        fg = Gamble(min(f.at0, g.at0), min(f.at1, g.at1))
        if upper_expectation(interval, fg) > uf:
            return SuiteResult("coherence", False, i, "increasingness failed")
        if uf != _grid_upper(interval, f):
            return SuiteResult("coherence", False, i, "endpoint case split failed")
        if lower_expectation(interval, f) != -upper_expectation(interval, -f):
            return SuiteResult("coherence", False, i, "conjugacy failed")
        inner = IntervalForecast(
            interval.lo + (interval.hi - interval.lo) * Fraction(1, 4),
            interval.hi - (interval.hi - interval.lo) * Fraction(1, 4),
        )
        if upper_expectation(inner, f) > uf:
            return SuiteResult("coherence", False, i, "nesting failed")
        if is_allowable(interval, f) != (uf <= 0):
            return SuiteResult("coherence", False, i, "allowability failed")
    return SuiteResult("coherence", True, cases)


def suite_continuity(seed: int, cases: int = 50) -> SuiteResult:
    """Finite pointwise-convergence check: rational recurrences with known
    limits, compared after 64 terms within 2^-32."""
    rng = random.Random(seed)
    tol = Fraction(1, 1 << 32)
    for i in range(cases):
        interval = _interval(rng)
        limit = _gamble(rng)
        start = _gamble(rng)
        # f_{n+1} = (f_n + limit) / 2 converges geometrically to limit
        f = start
        for _ in range(64):
            f = Gamble((f.at0 + limit.at0) / 2, (f.at1 + limit.at1) / 2)
        gap = abs(upper_expectation(interval, f) - upper_expectation(interval, limit))
        if gap >= tol:
            return SuiteResult("continuity", False, i, f"gap {gap} >= 2^-32")
    return SuiteResult("continuity", True, cases)


def suite_payoff_bound(seed: int, cases: int = 2_000) -> SuiteResult:
    """Non-negative gambles with upper expectation <= 1 respect the
    1/max-forecast and 1/(1-min-forecast) caps, hence the bound K."""
    rng = random.Random(seed)
    done = 0
    while done < cases:
        interval = _interval(rng)
        if interval.hi == 0 or interval.lo == 1:
            continue
        k = allowable_bound(interval)
        if k != max(1 / interval.hi, 1 / (1 - interval.lo)):
            return SuiteResult("payoff-bound", False, done, "cap formula failed")
        raw = Gamble(abs(_fraction(rng)), abs(_fraction(rng)))
        ue = upper_expectation(interval, raw)
        f = raw if ue <= 1 else (raw.scale(Fraction(1) / ue) if ue > 0 else raw)
        if upper_expectation(interval, f) <= 1:
            if f.at1 > 1 / interval.hi or f.at0 > 1 / (1 - interval.lo):
                return SuiteResult("payoff-bound", False, done, "cap violated")
            if f.at0 > k or f.at1 > k:
                return SuiteResult("payoff-bound", False, done, "K violated")
        done += 1
    return SuiteResult("payoff-bound", True, cases)


def suite_multiplier_equivalence(seed: int, cases: int = 200, max_depth: int = 12) -> SuiteResult:
    """Difference form vs multiplier form of the per-step condition, on
    random positive rational processes over full binary trees."""
    rng = random.Random(seed)
    nodes = 0
    for i in range(cases):
        depth = rng.randint(1, max_depth)
        size = (1 << (depth + 1)) - 1
        values = [
            Fraction(rng.randint(1, 2000), rng.randint(1, 2000)) for _ in range(size)
        ]
        internal = (1 << depth) - 1
        for node in range(internal):
            interval = _interval(rng)
            m = values[node]
            m0 = values[2 * node + 1]
            m1 = values[2 * node + 2]
            diff = Gamble(m0 - m, m1 - m)
            mult = Gamble(m0 / m, m1 / m)
            lhs = upper_expectation(interval, diff) <= 0
            rhs = upper_expectation(interval, mult) <= 1
            if lhs != rhs:
                return SuiteResult(
                    "multiplier-equivalence", False, nodes, f"tree {i} node {node}"
                )
            nodes += 1
    return SuiteResult("multiplier-equivalence", True, nodes)


def _random_bits(rng: random.Random, max_len: int = 24) -> Bits:
    n = rng.randint(0, max_len)
    return Bits(n, rng.getrandbits(n) if n else 0)


def suite_mixture_closure(seed: int, cases: int = 300) -> SuiteResult:
    """The implied multiplier of a truncated mixture stays admissible for
    the common interval at every sampled node."""
    rng = random.Random(seed)
    registry = fair_coin_registry()
    for i in range(cases):
        size = rng.randint(0, 4)
        components = [rng.choice(registry) for _ in range(size)]
        mixed = mixture(components, declared=HALF_POINT)
        ev = mixed.fresh()
        for _ in range(4):
            s = _random_bits(rng)
            d = ev.multiplier(s)
            if not validate_step(HALF_POINT, d):
                return SuiteResult(
                    "mixture-closure", False, i, f"violation at {s!r}"
                )
    return SuiteResult("mixture-closure", True, cases)


def _registry_for_validity() -> list:
    strategies = list(fair_coin_registry())
    wide = IntervalForecast.of(Fraction(1, 4), Fraction(3, 4))
    strategies.append(all_in_on(0, wide))
    strategies.append(all_in_on(1, wide))
    strategies.append(
        oscillation_tracker(phi_half_oscillating(), Fraction(1, 2), 16)
    )
    return strategies


def suite_registry_validity(
    seed: int, cases: int = 10_000, inject_fault: bool = False
) -> SuiteResult:
    """Every registry strategy passes the per-step admissibility check
    against its declared forecast at random situations (exact)."""
    rng = random.Random(seed)
    strategies = _registry_for_validity()
    if inject_fault:
        bad = PureStrategy(
            "injected-fault", HALF_POINT, lambda s: Gamble.of(Fraction(3), Fraction(3))
        )
        strategies.append(bad)
    per = max(1, cases // len(strategies))
    total = 0
    for strategy in strategies:
        interval = strategy.declared
        ev = strategy.fresh()
        for _ in range(per):
            s = _random_bits(rng)
            d = ev.multiplier(s)
            if not validate_step(interval, d):
                return SuiteResult(
                    "registry-validity",
                    False,
                    total,
                    f"strategy {strategy.id!r} violates its declaration at {s!r}",
                )
            total += 1
    return SuiteResult("registry-validity", True, total)


def suite_subinterval_monotonicity(seed: int, cases: int = 500) -> SuiteResult:
    """A strategy admissible for an interval stays admissible for every
    subinterval of it."""
    rng = random.Random(seed)
    for i in range(cases):
        outer = _interval(rng)
        if outer.hi == 0 or outer.lo == 1:
            continue
        strategies = [
            all_in_on(0, outer) if outer.lo < 1 else None,
            all_in_on(1, outer) if outer.hi > 0 else None,
        ]
        width = outer.hi - outer.lo
        a = outer.lo + width * Fraction(rng.randint(0, 8), 16)
        b = outer.hi - width * Fraction(rng.randint(0, 8), 16)
        inner = IntervalForecast(min(a, b), max(a, b))
        for strategy in strategies:
            if strategy is None:
                continue
            d = strategy.fresh().multiplier(Bits.empty())
            if not validate_step(inner, d):
                return SuiteResult(
                    "subinterval-monotonicity", False, i, f"{strategy.id}"
                )
    return SuiteResult("subinterval-monotonicity", True, cases)


def suite_clip_step(seed: int, cases: int = 2_000) -> SuiteResult:
    """The safeguard recursion always yields a non-negative gamble with
    upper expectation <= 1, and keeps already-valid candidates (clipped)."""
    rng = random.Random(seed)
    for i in range(cases):
        interval = _interval(rng)
        previous = ZERO_GAMBLE
        for _ in range(8):
            candidate = _gamble(rng)
            result = clip_step(interval, candidate, previous)
            if not result.non_negative or upper_expectation(interval, result) > 1:
                return SuiteResult("clip-step", False, i, "postcondition failed")
            clipped = candidate.clip_nonnegative()
            if upper_expectation(interval, clipped) <= 1 and result != clipped:
                return SuiteResult("clip-step", False, i, "valid candidate dropped")
            if clip_step(interval, result, result) != result:
                return SuiteResult("clip-step", False, i, "not idempotent")
            previous = result
    return SuiteResult("clip-step", True, cases)


def suite_greedy_bound(seed: int, horizon: int = 1_000) -> SuiteResult:
    """Greedy extension keeps every fair-coin registry strategy's capital
    at or below 1; the construction itself asserts the bound exactly."""
    from .strategies import replay

    count = 0
    for strategy in fair_coin_registry():
        path = greedy_bounded_path(strategy, 1, Bits.empty(), horizon)
        trajectory = replay(strategy, path, mode="exact")
        if any(v > 1 for v in trajectory.values):
            return SuiteResult("greedy-bound", False, count, strategy.id)
        count += 1
    return SuiteResult("greedy-bound", True, count)


def suite_diagonal_bound(seed: int, stage_cap: int = 400) -> SuiteResult:
    """Weighted adversary sum stays at most 2 through a demo run and a
    randomized-adversary run (milestone attainment not required)."""
    rng = random.Random(seed)
    wide = IntervalForecast.of(Fraction(1, 4), Fraction(3, 4))
    target = all_in_on(0, wide)
    path, report = diagonal_path(target, [double_on(1)], [2, 5], stage_cap=stage_cap)
    if report.weighted_sum_max > 2:
        return SuiteResult("diagonal-bound", False, 1, "demo exceeded 2")
    if report.milestones != [0, 3, 6]:
        return SuiteResult(
            "diagonal-bound", False, 1, f"demo milestones {report.milestones}"
        )
    registry = fair_coin_registry()
    adversaries = [rng.choice(registry) for _ in range(5)]
    milestones = [2, 4, 8, 16, 32]
    _, report = diagonal_path(target, adversaries, milestones, stage_cap=stage_cap)
    if report.weighted_sum_max > 2:
        return SuiteResult("diagonal-bound", False, 2, "randomized run exceeded 2")
    return SuiteResult("diagonal-bound", True, 2 + len(report.weighted_sums))


def run_all(seed: int = 2024, inject_fault: bool = False) -> list[SuiteResult]:
    return [
        suite_coherence(seed),
        suite_continuity(seed + 1),
        suite_payoff_bound(seed + 2),
        suite_multiplier_equivalence(seed + 3),
        suite_mixture_closure(seed + 4),
        suite_registry_validity(seed + 5, inject_fault=inject_fault),
        suite_subinterval_monotonicity(seed + 6),
        suite_clip_step(seed + 7),
        suite_greedy_bound(seed + 8),
        suite_diagonal_bound(seed + 9),
    ]
