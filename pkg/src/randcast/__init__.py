"""randcast: betting strategies, frequency tests, and interval estimates
for finite binary sequences under interval-valued forecasting systems."""

from .bits import Bits, BitsParseError, SituationView, parse_bits, serialize_bits
from .dyadic import delta
from .expectation import (
    Gamble,
    allowable_bound,
    clip_step,
    is_allowable,
    lower_expectation,
    upper_expectation,
)
from .model import (
    CompositeSystem,
    ConfigError,
    ForecastingSystem,
    GrowthFunction,
    IntervalForecast,
    PhiHalfOscillatingSystem,
    StationarySystem,
    TemporalTableSystem,
    alternating,
    conservative_hull,
    forecast_at,
    forecast_interval,
    growth_function,
    phi_half_oscillating,
    stationary,
    vacuous,
)
from .strategies import (
    BettingStrategy,
    CapitalTrajectory,
    ValidationError,
    all_in_on,
    capital_at,
    discount_adapt,
    double_on,
    fair_coin_registry,
    fractional_exploit,
    gate_by_selection,
    generator_output,
    hold_strategy,
    imitator,
    mixture,
    multiplier_of,
    oscillation_tracker,
    replay,
    schnorr_verdict,
    strategy_registry,
    trajectory_to_csv,
    unbounded_verdict,
    validate_step,
)
from .stochasticity import (
    ChurchStatistics,
    ChurchVerdict,
    InsufficientCoverage,
    IntervalEstimate,
    NotDoubleOrHold,
    SelectionProcess,
    all_ones,
    church_statistics,
    church_verdict,
    doubling_detector,
    i_phi_estimate,
    parity,
    pattern_suffix,
    periodic,
    selection_registry,
    smallest_interval_estimate,
    threshold_selection,
)
from .constructions import (
    DiagonalReport,
    InvariantViolation,
    RealityPolicy,
    diagonal_path,
    double_or_hold_pair,
    fixed_policy,
    greedy_bounded_path,
    is_double_or_hold,
    sample_path,
)
from .rng import SplitMix64

__version__ = "0.1.0"
