"""Selection processes, frequency tests, and interval estimators.

Indexing convention, used everywhere: a selection process evaluated at the
situation w_{1:k} (the first k outcomes) gates outcome w_{k+1}.  Selected
outcomes enter three running ratios:

  ones ratio     sum S*w_{k+1} / sum S
  lower margin   sum S*(w_{k+1} - lower forecast) / sum S
  upper margin   sum S*(w_{k+1} - upper forecast) / sum S

A forecast-respecting path keeps the lower margin's liminf >= 0 and the
upper margin's limsup <= 0 for every admissible selection; for a constant
interval forecast this reduces to the ones ratio staying inside the
interval.  Limits are not observable from a finite prefix, so the
statistics report running extrema past a burn-in together with tail-window
extrema (over the last half of the selected outcomes), and every verdict
and estimate is labeled as finite-horizon evidence.

The interval estimators:
  * smallest_interval_estimate spans the tail-window extrema of the ones
    ratio across a finite selection family (min of tail minima, max of
    tail maxima) -- a finite surrogate for the inf/sup over all admissible
    selections that characterizes the smallest interval a path's selected
    frequencies respect.
  * i_phi_estimate records the range (and tail range) swept by a
    forecasting system's own bounds along the prefix, the candidate the
    system itself pins down for precise temporal systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .bits import Bits, SituationView
from .expectation import Gamble
from .model import (
    ConfigError,
    ForecastingSystem,
    IntervalForecast,
    forecast_at,
)

Situation = Union[Bits, SituationView]

FINITE_FAMILY_NOTE = (
    "finite-family, finite-horizon lower/upper records: computed from a "
    "finite selection registry on one prefix, not an inf/sup over all "
    "admissible selection processes"
)

FINITE_HORIZON_NOTE = (
    "finite-horizon evidence, not a randomness decision: the underlying "
    "notions are undecidable from any finite prefix"
)


class SelectionProcess:
    """Named {0,1}-valued process on situations."""

    def __init__(self, id: str, temporal: bool = False) -> None:
        self.id = id
        self.temporal = temporal

    def fresh(self):
        return self

    def select(self, s: Situation) -> int:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<selection {self.id}>"


class PureSelection(SelectionProcess):
    def __init__(self, id: str, fn: Callable[[Situation], int], temporal: bool = False) -> None:
        super().__init__(id, temporal)
        self._fn = fn

    def select(self, s: Situation) -> int:
        return 1 if self._fn(s) else 0


def all_ones() -> SelectionProcess:
    return PureSelection("all_ones", lambda s: 1, temporal=True)


def parity(offset: int, modulus: int) -> SelectionProcess:
    if modulus <= 0 or not 0 <= offset < modulus:
        raise ConfigError("parity needs modulus > 0 and 0 <= offset < modulus")
    return PureSelection(
        f"parity({offset},{modulus})",
        lambda s: s.length % modulus == offset,
        temporal=True,
    )


def periodic(k: int) -> SelectionProcess:
    """Gate every k-th outcome (outcome indices k, 2k, ...)."""
    if k <= 0:
        raise ConfigError("periodic needs k > 0")
    return PureSelection(
        f"periodic({k})", lambda s: (s.length + 1) % k == 0, temporal=True
    )


def pattern_suffix(pattern: Union[str, Bits]) -> SelectionProcess:
    if isinstance(pattern, str):
        pattern = Bits.from_string(pattern)
    if pattern.length == 0:
        raise ConfigError("pattern must be non-empty")
    return PureSelection(
        f"pattern_suffix({pattern})", lambda s: s.ends_with(pattern)
    )


def threshold_selection(
    system: ForecastingSystem, precision_bits: int, threshold, side: str
) -> SelectionProcess:
    """Fire where the N-bit forecast bound clears a rational threshold:
    side 'below' tests upper bound < r, side 'above' tests lower bound > r."""
    threshold = Fraction(threshold)
    if precision_bits < 1:
        raise ConfigError("precision_bits must be >= 1")
    if side not in ("below", "above"):
        raise ConfigError("side must be 'below' or 'above'")

    if side == "below":
        fn = lambda s: forecast_at(system, s, precision_bits)[1] < threshold
    else:
        fn = lambda s: forecast_at(system, s, precision_bits)[0] > threshold
    return PureSelection(
        f"threshold({system.kind},{side},{threshold},{precision_bits})",
        fn,
        temporal=system.temporal,
    )


class NotDoubleOrHold(RuntimeError):
    """The probed strategy lacks the double-or-hold structure."""


class DoublingDetector(SelectionProcess):
    """Fire where a double-or-hold strategy is about to double on a one.

    Selects s exactly when the strategy's capital at s is positive and its
    step takes capital to twice itself on outcome 1 (and to zero on 0).
    Any other multiplier shape at a positive-capital situation raises
    NotDoubleOrHold.
    """

    def __init__(self, strategy) -> None:
        super().__init__(f"doubling_detector({strategy.id})")
        self.strategy = strategy

    def fresh(self):
        return _DoublingEvaluator(self.strategy, self.id)


class _DoublingEvaluator:
    def __init__(self, strategy, id: str) -> None:
        self.id = id
        self._strategy = strategy
        self._len = 0
        self._bits: list = []
        self._src_buf: Optional[list] = None
        self._reset()

    def _reset(self) -> None:
        self._ev = self._strategy.fresh()
        self._cap = Fraction(1)

    def select(self, s: Situation) -> int:
        n = s.length
        if (
            not isinstance(s, SituationView)
            or s._buf is not self._src_buf
            or n < self._len
        ):
            self._len = 0
            self._reset()
            if isinstance(s, SituationView):
                self._src_buf = s._buf
                self._bits = s._buf
            else:
                self._src_buf = None
                self._bits = s.tolist()
        while self._len < n:
            view = SituationView(self._bits, self._len)
            d = self._ev.multiplier(view)
            self._probe(d, view)
            self._cap *= d(self._bits[self._len])
            self._len += 1
        view = SituationView(self._bits, self._len)
        d = self._ev.multiplier(view)
        self._probe(d, view)
        return 1 if self._cap > 0 and d.at0 == 0 and d.at1 == 2 else 0

    def _probe(self, d: Gamble, view: SituationView) -> None:
        if self._cap > 0 and not (
            (d.at0 == 1 and d.at1 == 1) or (d.at0 == 0 and d.at1 == 2)
        ):
            raise NotDoubleOrHold(
                f"strategy {self._strategy.id!r} is not double-or-hold at "
                f"{view.to_bits()!r}: multiplier ({d.at0}, {d.at1})"
            )


def doubling_detector(strategy) -> SelectionProcess:
    return DoublingDetector(strategy)


def selection_registry(name: str, **params) -> SelectionProcess:
    """Construct a registry selection by name; unknown names are errors."""
    builders = {
        "all_ones": lambda: all_ones(),
        "parity": lambda: parity(params["offset"], params["modulus"]),
        "periodic": lambda: periodic(params["k"]),
        "pattern_suffix": lambda: pattern_suffix(params["pattern"]),
        "threshold_selection": lambda: threshold_selection(
            params["system"], params["precision_bits"], params["threshold"], params["side"]
        ),
        "doubling_detector": lambda: doubling_detector(params["strategy"]),
    }
    try:
        builder = builders[name]
    except KeyError:
        raise ConfigError(f"unknown selection {name!r}") from None
    try:
        return builder()
    except KeyError as exc:
        raise ConfigError(f"selection {name!r} missing parameter {exc}") from None


# -- statistics ---------------------------------------------------------------


@dataclass
class RatioRecord:
    """Final value and recorded extrema of one running ratio."""

    final: Optional[Fraction] = None
    min: Optional[Fraction] = None
    max: Optional[Fraction] = None
    min_at: Optional[int] = None  # selected count attaining the minimum
    max_at: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "final": _frac_str(self.final),
            "min": _frac_str(self.min),
            "max": _frac_str(self.max),
            "min_at": self.min_at,
            "max_at": self.max_at,
        }


def _frac_str(v: Optional[Fraction]) -> Optional[str]:
    if v is None:
        return None
    return f"{v.numerator}/{v.denominator}"


@dataclass
class ChurchStatistics:
    """Per-selection frequency statistics over one prefix."""

    id: str
    selected_count: int
    burn_in: int
    fired: bool
    ones: RatioRecord = field(default_factory=RatioRecord)
    ones_tail: RatioRecord = field(default_factory=RatioRecord)
    lower_margin: RatioRecord = field(default_factory=RatioRecord)
    upper_margin: RatioRecord = field(default_factory=RatioRecord)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "selected_count": self.selected_count,
            "burn_in": self.burn_in,
            "fired": self.fired,
            "ones": self.ones.to_json(),
            "ones_tail": self.ones_tail.to_json(),
            "lower_margin": self.lower_margin.to_json(),
            "upper_margin": self.upper_margin.to_json(),
        }


class _OnesScan:
    """One-pass ones-ratio tracker with post-hoc tail extrema."""

    __slots__ = ("burn_in", "count", "ones", "history", "min_n", "min_d", "min_at", "max_n", "max_d", "max_at")

    def __init__(self, burn_in: int) -> None:
        self.burn_in = burn_in
        self.count = 0
        self.ones = 0
        self.history: list = []  # cumulative ones at each selected count
        self.min_n = self.min_d = self.min_at = None
        self.max_n = self.max_d = self.max_at = None

    def add(self, bit: int) -> None:
        self.count += 1
        self.ones += bit
        self.history.append(self.ones)
        if self.count >= self.burn_in:
            n, d = self.ones, self.count
            if self.min_n is None or n * self.min_d < self.min_n * d:
                self.min_n, self.min_d, self.min_at = n, d, d
            if self.max_n is None or n * self.max_d > self.max_n * d:
                self.max_n, self.max_d, self.max_at = n, d, d

    def record(self) -> RatioRecord:
        rec = RatioRecord()
        if self.count:
            rec.final = Fraction(self.ones, self.count)
        if self.min_n is not None:
            rec.min = Fraction(self.min_n, self.min_d)
            rec.max = Fraction(self.max_n, self.max_d)
            rec.min_at = self.min_at
            rec.max_at = self.max_at
        return rec

    def tail_record(self) -> RatioRecord:
        """Extrema over selected counts in [max(burn_in, ceil(m/2)), m]."""
        rec = RatioRecord()
        m = self.count
        if m == 0:
            return rec
        start = max(self.burn_in, (m + 1) // 2, 1)
        if start > m:
            return rec
        rec.final = Fraction(self.ones, m)
        best_min = best_max = None
        for c in range(start, m + 1):
            n = self.history[c - 1]
            if best_min is None or n * best_min[1] < best_min[0] * c:
                best_min = (n, c)
                rec.min_at = c
            if best_max is None or n * best_max[1] > best_max[0] * c:
                best_max = (n, c)
                rec.max_at = c
        rec.min = Fraction(*best_min)
        rec.max = Fraction(*best_max)
        return rec


class _MarginScan:
    """Running extrema of a selected margin ratio (exact rationals)."""

    __slots__ = ("burn_in", "count", "acc", "rec")

    def __init__(self, burn_in: int) -> None:
        self.burn_in = burn_in
        self.count = 0
        self.acc = Fraction(0)
        self.rec = RatioRecord()

    def add(self, term: Fraction) -> None:
        self.count += 1
        self.acc += term
        if self.count >= self.burn_in:
            ratio = self.acc / self.count
            if self.rec.min is None or ratio < self.rec.min:
                self.rec.min, self.rec.min_at = ratio, self.count
            if self.rec.max is None or ratio > self.rec.max:
                self.rec.max, self.rec.max_at = ratio, self.count

    def record(self) -> RatioRecord:
        if self.count:
            self.rec.final = self.acc / self.count
        return self.rec


def church_statistics(
    prefix: Bits,
    system: ForecastingSystem,
    selection: SelectionProcess,
    burn_in: int = 30,
    precision_bits: int = 32,
) -> ChurchStatistics:
    """Selected-outcome statistics for one selection against a system.

    Margins use the system's N-bit forecast bounds; for exact-rational
    systems all arithmetic is exact.  If the selection never fires the
    result carries fired=False and empty ratio records.
    """
    if burn_in < 1:
        raise ValueError("burn_in must be >= 1")
    sel = selection.fresh()
    buf = prefix.tolist()
    view = SituationView(buf, 0)
    ones = _OnesScan(burn_in)
    lower = _MarginScan(burn_in)
    upper = _MarginScan(burn_in)
    for k in range(prefix.length):
        view.length = k
        if sel.select(view):
            bit = buf[k]
            lo_n, hi_n = forecast_at(system, view, precision_bits)
            ones.add(bit)
            lower.add(bit - lo_n)
            upper.add(bit - hi_n)
    return ChurchStatistics(
        id=selection.id,
        selected_count=ones.count,
        burn_in=burn_in,
        fired=ones.count > 0,
        ones=ones.record(),
        ones_tail=ones.tail_record(),
        lower_margin=lower.record(),
        upper_margin=upper.record(),
    )


def _ones_scan_only(
    prefix: Bits, selection: SelectionProcess, burn_in: int
) -> _OnesScan:
    sel = selection.fresh()
    buf = prefix.tolist()
    view = SituationView(buf, 0)
    scan = _OnesScan(burn_in)
    for k in range(prefix.length):
        view.length = k
        if sel.select(view):
            scan.add(buf[k])
    return scan


# -- verdicts and estimates ---------------------------------------------------


@dataclass
class ChurchVerdict:
    """Constant-interval frequency check across a selection family."""

    passed: bool
    interval: IntervalForecast
    tol: Fraction
    burn_in: int
    evaluated: list
    skipped: list
    violations: list
    disclaimer: str = FINITE_HORIZON_NOTE

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "interval": [_frac_str(self.interval.lo), _frac_str(self.interval.hi)],
            "tol": _frac_str(self.tol),
            "burn_in": self.burn_in,
            "evaluated": self.evaluated,
            "skipped": self.skipped,
            "violations": self.violations,
            "disclaimer": self.disclaimer,
        }


def church_verdict(
    prefix: Bits,
    interval: IntervalForecast,
    selections: Sequence[SelectionProcess],
    burn_in: int = 30,
    tol=Fraction(0),
) -> ChurchVerdict:
    """Pass iff, for every selection reaching the burn-in, the running
    extrema of its selected-ones ratio stay within the interval widened by
    tol on both sides."""
    tol = Fraction(tol)
    if tol < 0:
        raise ValueError("tol must be >= 0")
    if burn_in < 1:
        raise ValueError("burn_in must be >= 1")
    lo_bound = interval.lo - tol
    hi_bound = interval.hi + tol
    evaluated, skipped, violations = [], [], []
    for selection in selections:
        scan = _ones_scan_only(prefix, selection, burn_in)
        if scan.count < burn_in:
            skipped.append(selection.id)
            continue
        evaluated.append(selection.id)
        rec = scan.record()
        if rec.min < lo_bound:
            violations.append(
                {
                    "id": selection.id,
                    "side": "low",
                    "ratio": _frac_str(rec.min),
                    "at_count": rec.min_at,
                }
            )
        if rec.max > hi_bound:
            violations.append(
                {
                    "id": selection.id,
                    "side": "high",
                    "ratio": _frac_str(rec.max),
                    "at_count": rec.max_at,
                }
            )
    return ChurchVerdict(
        passed=not violations,
        interval=interval,
        tol=tol,
        burn_in=burn_in,
        evaluated=evaluated,
        skipped=skipped,
        violations=violations,
    )


class InsufficientCoverage(RuntimeError):
    """No selection met the eligibility threshold for an estimate."""


@dataclass
class IntervalEstimate:
    """Interval spanned by per-selection (or per-step) frequency records."""

    lo_hat: Fraction
    hi_hat: Fraction
    attained_lo: Optional[str] = None
    attained_hi: Optional[str] = None
    tail_lo: Optional[Fraction] = None
    tail_hi: Optional[Fraction] = None
    breakdown: Optional[list] = None
    burn_in: Optional[int] = None
    min_count: Optional[int] = None
    note: str = FINITE_FAMILY_NOTE

    def to_json(self) -> dict:
        d = {
            "lo": _frac_str(self.lo_hat),
            "hi": _frac_str(self.hi_hat),
            "attained_by": [self.attained_lo, self.attained_hi],
            "note": self.note,
        }
        if self.tail_lo is not None:
            d["tail"] = [_frac_str(self.tail_lo), _frac_str(self.tail_hi)]
        if self.breakdown is not None:
            d["breakdown"] = self.breakdown
        if self.burn_in is not None:
            d["burn_in"] = self.burn_in
        if self.min_count is not None:
            d["min_count"] = self.min_count
        return d


def smallest_interval_estimate(
    prefix: Bits,
    selections: Sequence[SelectionProcess],
    burn_in: int = 30,
    min_count: int = 30,
) -> IntervalEstimate:
    """Span of tail-window ones-ratio extrema across eligible selections.

    A selection is eligible when it fires at least min_count times and its
    tail window (selected counts >= max(burn_in, half the total)) is
    non-empty.  The lower bound is the least tail minimum, the upper bound
    the greatest tail maximum; the attaining selections are named.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if burn_in < 1:
        raise ValueError("burn_in must be >= 1")
    lo_hat = hi_hat = None
    attained_lo = attained_hi = None
    breakdown = []
    for selection in selections:
        scan = _ones_scan_only(prefix, selection, burn_in)
        tail = scan.tail_record()
        eligible = scan.count >= min_count and tail.min is not None
        breakdown.append(
            {
                "id": selection.id,
                "selected_count": scan.count,
                "eligible": eligible,
                "final_ratio": _frac_str(scan.record().final),
                "tail_min": _frac_str(tail.min),
                "tail_max": _frac_str(tail.max),
            }
        )
        if not eligible:
            continue
        if lo_hat is None or tail.min < lo_hat:
            lo_hat, attained_lo = tail.min, selection.id
        if hi_hat is None or tail.max > hi_hat:
            hi_hat, attained_hi = tail.max, selection.id
    if lo_hat is None:
        raise InsufficientCoverage(
            f"insufficient selection coverage: no selection reached "
            f"min_count={min_count} with a non-empty tail window"
        )
    return IntervalEstimate(
        lo_hat=lo_hat,
        hi_hat=hi_hat,
        attained_lo=attained_lo,
        attained_hi=attained_hi,
        breakdown=breakdown,
        burn_in=burn_in,
        min_count=min_count,
    )


def i_phi_estimate(
    prefix: Bits, system: ForecastingSystem, precision_bits: int = 32
) -> IntervalEstimate:
    """Range swept by the system's own N-bit forecast bounds along the
    prefix: running min of lower bounds and max of upper bounds, over all
    consumed situations and over the tail window of lengths."""
    n = prefix.length
    if n < 1:
        raise ValueError("horizon must be >= 1")
    buf = prefix.tolist()
    view = SituationView(buf, 0)
    tail_start = min((n + 1) // 2, n - 1)
    full_lo = full_hi = None
    tail_lo = tail_hi = None
    lo_at = hi_at = None
    for k in range(n):
        view.length = k
        lo_k, hi_k = forecast_at(system, view, precision_bits)
        if full_lo is None or lo_k < full_lo:
            full_lo, lo_at = lo_k, k
        if full_hi is None or hi_k > full_hi:
            full_hi, hi_at = hi_k, k
        if k >= tail_start:
            if tail_lo is None or lo_k < tail_lo:
                tail_lo = lo_k
            if tail_hi is None or hi_k > tail_hi:
                tail_hi = hi_k
    return IntervalEstimate(
        lo_hat=full_lo,
        hi_hat=full_hi,
        attained_lo=f"length {lo_at}",
        attained_hi=f"length {hi_at}",
        tail_lo=tail_lo,
        tail_hi=tail_hi,
        note=(
            "range of the system's forecast bounds along the prefix; "
            "tail covers lengths from half the horizon on"
        ),
    )
