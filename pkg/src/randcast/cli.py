"""Command-line front end: generate, analyze, estimate, construct, selftest.

Configs and reports are JSON; rationals travel as "num/den" strings so no
precision is lost on the wire.  Reports are canonicalized (sorted keys,
strategies and selections ordered by id) and carry a disclaimers array;
the timestamp field is suppressed under --deterministic so a generate ->
analyze round trip is byte-identical across runs.

Exit codes: 0 success, 2 input parse error, 3 config error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from .bits import Bits, BitsParseError, parse_bits, serialize_bits
from .constructions import (
    InvariantViolation,
    RealityPolicy,
    diagonal_path,
    double_or_hold_pair,
    greedy_bounded_path,
    sample_path,
)
from .model import (
    CompositeSystem,
    ConfigError,
    ForecastingSystem,
    IntervalForecast,
    TemporalTableSystem,
    alternating,
    growth_function,
    phi_half_oscillating,
    stationary,
    vacuous,
)
from .selftest import run_all
from .stochasticity import (
    InsufficientCoverage,
    church_statistics,
    church_verdict,
    i_phi_estimate,
    selection_registry,
    smallest_interval_estimate,
)
from .strategies import (
    ValidationError,
    gate_by_selection,
    mixture,
    replay,
    schnorr_verdict,
    strategy_registry,
    trajectory_to_csv,
    unbounded_verdict,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_INVARIANT = 4


def _fraction(value, what: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{what}: cannot parse rational {value!r}: {exc}") from None


def _interval(value, what: str) -> IntervalForecast:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{what}: interval must be a [lo, hi] pair")
    try:
        return IntervalForecast(_fraction(value[0], what), _fraction(value[1], what))
    except ValueError as exc:
        raise ConfigError(f"{what}: {exc}") from None


def build_system(spec: dict) -> ForecastingSystem:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("system: needs an object with a 'kind'")
    kind = spec["kind"]
    if kind == "stationary":
        return stationary(*_pair(spec, "system.interval"))
    if kind == "precise-constant":
        p = _fraction(spec.get("p"), "system.p")
        return stationary(p, p)
    if kind == "vacuous":
        return vacuous()
    if kind == "alternating":
        return alternating(
            _fraction(spec.get("p"), "system.p"), _fraction(spec.get("q"), "system.q")
        )
    if kind == "phi-half-oscillating":
        return phi_half_oscillating()
    if kind == "temporal-table":
        rows = spec.get("table")
        if not rows:
            raise ConfigError("system.table: required and non-empty")
        table = [_interval(row, "system.table row") for row in rows]
        default = spec.get("default")
        return TemporalTableSystem(
            table,
            default=_interval(default, "system.default") if default else None,
            cyclic=bool(spec.get("cyclic", False)),
        )
    if kind == "composite":
        segments = spec.get("segments")
        if not segments:
            raise ConfigError("system.segments: required and non-empty")
        return CompositeSystem(
            [(int(seg["lengths"]), build_system(seg["system"])) for seg in segments]
        )
    raise ConfigError(f"system: unknown kind {kind!r}")


def _pair(spec: dict, what: str) -> tuple[Fraction, Fraction]:
    iv = _interval(spec.get("interval"), what)
    return iv.lo, iv.hi


def build_policy(spec: dict, config: "Config") -> RealityPolicy:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("policy: needs an object with a 'kind'")
    kind = spec["kind"]
    if kind == "fixed":
        return RealityPolicy("fixed", p=_fraction(spec.get("p"), "policy.p"))
    if kind == "min_capital":
        return RealityPolicy(
            "min_capital", strategy=build_strategy(spec.get("strategy"), config)
        )
    try:
        return RealityPolicy(kind)
    except ConfigError:
        raise ConfigError(f"policy: unknown kind {kind!r}") from None


def build_selection(spec: dict, config: "Config"):
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("selection: needs an object with a 'name'")
    name = spec["name"]
    params: dict = {}
    if name == "parity":
        params = {"offset": int(spec["offset"]), "modulus": int(spec["modulus"])}
    elif name == "periodic":
        params = {"k": int(spec["k"])}
    elif name == "pattern_suffix":
        params = {"pattern": str(spec["pattern"])}
    elif name == "threshold_selection":
        params = {
            "system": build_system(spec["system"]) if "system" in spec else config.system,
            "precision_bits": int(spec.get("precision_bits", config.precision_bits)),
            "threshold": _fraction(spec["threshold"], "selection.threshold"),
            "side": str(spec["side"]),
        }
    elif name == "doubling_detector":
        params = {"strategy": build_strategy(spec["strategy"], config)}
    elif name != "all_ones":
        raise ConfigError(f"selection: unknown name {name!r}")
    try:
        sel = selection_registry(name, **params)
    except KeyError as exc:
        raise ConfigError(f"selection {name!r}: missing parameter {exc}") from None
    if "id" in spec:
        sel.id = str(spec["id"])
    return sel


def build_strategy(spec: dict, config: "Config"):
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("strategy: needs an object with a 'name'")
    name = spec["name"]
    params: dict = {}
    if name == "double_on":
        params = {"bit": int(spec["bit"])}
    elif name == "all_in_on":
        params = {
            "bit": int(spec["bit"]),
            "interval": _interval(spec["interval"], "strategy.interval"),
        }
    elif name == "fractional_exploit":
        params = {
            "direction": str(spec["direction"]),
            "interval": _interval(spec["interval"], "strategy.interval"),
            "fraction": _fraction(spec["fraction"], "strategy.fraction"),
        }
    elif name == "oscillation_tracker":
        params = {
            "system": build_system(spec["system"]) if "system" in spec else config.system,
            "fraction": _fraction(spec["fraction"], "strategy.fraction"),
            "precision_bits": int(spec.get("precision_bits", config.precision_bits)),
        }
    elif name == "imitator":
        params = {
            "generator": str(spec["generator"]),
            "fraction": _fraction(spec["fraction"], "strategy.fraction"),
        }
        if "interval" in spec:
            params["interval"] = _interval(spec["interval"], "strategy.interval")
    elif name == "mixture":
        components = [build_strategy(sub, config) for sub in spec.get("components", [])]
        strat = mixture(components, id=spec.get("id"))
        return _apply_gate(strat, spec, config)
    elif name == "double_or_hold":
        positions = spec.get("positions", "powers_of_two")
        strat, _ = double_or_hold_pair(
            positions, horizon=max(1, config.horizon), seed=config.seed
        )
        return _apply_gate(strat, spec, config)
    elif name != "hold":
        raise ConfigError(f"strategy: unknown name {name!r}")
    try:
        strat = strategy_registry(name, **params)
    except KeyError as exc:
        raise ConfigError(f"strategy {name!r}: missing parameter {exc}") from None
    if "id" in spec:
        strat.id = str(spec["id"])
    return _apply_gate(strat, spec, config)


def _apply_gate(strat, spec: dict, config: "Config"):
    gate = spec.get("gate")
    if gate is not None:
        gated = gate_by_selection(strat, build_selection(gate, config))
        if "id" in spec:
            gated.id = str(spec["id"])
        return gated
    return strat


class Config:
    """Validated experiment configuration."""

    def __init__(self, raw: dict, overrides: argparse.Namespace) -> None:
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        self.raw = raw
        self.horizon = int(_override(overrides, "horizon", raw.get("horizon", 0)))
        if self.horizon < 0:
            raise ConfigError("horizon must be >= 0")
        self.seed = int(_override(overrides, "seed", raw.get("seed", 0)))
        self.precision_bits = int(
            _override(overrides, "precision", raw.get("precision_bits", 32))
        )
        if self.precision_bits < 1:
            raise ConfigError("precision_bits must be >= 1")
        self.mode = raw.get("mode", "log2")
        if self.mode not in ("exact", "log2"):
            raise ConfigError("mode must be 'exact' or 'log2'")
        self.check_strategies = bool(raw.get("check_strategies", False))
        self.system = build_system(raw.get("system", {"kind": "vacuous"}))
        self.policy = build_policy(raw.get("policy", {"kind": "at_mid"}), self)
        thresholds = raw.get("thresholds", {})
        self.log2_threshold = float(thresholds.get("log2", 10))
        self.tol = _fraction(thresholds.get("tol", "0"), "thresholds.tol")
        self.burn_in = int(thresholds.get("burn_in", 30))
        self.min_count = int(thresholds.get("min_count", 30))
        self.schnorr_burn_in = int(thresholds.get("schnorr_burn_in", 1))
        growth = raw.get("growth", {"rule": "log2"})
        self.growth = growth_function(growth.get("rule", "log2"), growth.get("param"))
        verdict_interval = raw.get("verdict_interval")
        if verdict_interval is not None:
            self.verdict_interval = _interval(verdict_interval, "verdict_interval")
        elif self.system.stationary:
            self.verdict_interval = getattr(self.system, "interval", None)
        else:
            self.verdict_interval = None
        self.strategies = [build_strategy(s, self) for s in raw.get("strategies", [])]
        self.selections = [build_selection(s, self) for s in raw.get("selections", [])]
        _check_unique_ids("strategy", [s.id for s in self.strategies])
        _check_unique_ids("selection", [s.id for s in self.selections])
        self.workers = int(raw.get("workers", 0))


def _override(overrides: argparse.Namespace, field: str, default):
    value = getattr(overrides, field, None)
    return default if value is None else value


def _check_unique_ids(what: str, ids: list) -> None:
    seen = set()
    for id_ in ids:
        if id_ in seen:
            raise ConfigError(f"duplicate {what} id {id_!r}")
        seen.add(id_)


def load_config(args: argparse.Namespace) -> Config:
    raw: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    return Config(raw, args)


def _report_json(report: dict, deterministic: bool) -> str:
    if not deterministic:
        report = dict(report)
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write_or_print(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    config = load_config(args)
    path = sample_path(
        config.system, config.policy, config.horizon, config.seed, config.precision_bits
    )
    out = Path(args.out)
    out.write_text(serialize_bits(path))
    sidecar = {
        "system": config.system.describe(),
        "policy": config.policy.describe(),
        "horizon": config.horizon,
        "seed": config.seed,
        "precision_bits": config.precision_bits,
        "ones": path.ones(),
    }
    out.with_suffix(out.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {path.length} bits to {out}")
    return EXIT_OK


def _analyze_strategy(strategy, prefix, config):
    trajectory = replay(
        strategy,
        prefix,
        mode=config.mode,
        check=config.check_strategies,
        precision_bits=config.precision_bits,
    )
    unbounded = unbounded_verdict(trajectory, config.log2_threshold)
    schnorr = schnorr_verdict(trajectory, config.growth, config.schnorr_burn_in)
    return strategy.id, trajectory, unbounded, schnorr


def _analyze_selection(selection, prefix, config):
    stats = church_statistics(
        prefix, config.system, selection, config.burn_in, config.precision_bits
    )
    return selection.id, stats


def cmd_analyze(args: argparse.Namespace, estimators_only: bool = False) -> int:
    config = load_config(args)
    text = Path(args.bits).read_text()
    prefix = parse_bits(text)
    report: dict = {
        "horizon": prefix.length,
        "ones": prefix.ones(),
        "system": config.system.describe(),
        "disclaimers": [
            "finite-horizon evidence, not a randomness decision",
            "estimates span a finite selection registry, not all admissible selections",
        ],
    }
    if prefix.length == 0:
        report["flags"] = ["no data"]
        report["selections"] = []
        report["strategies"] = []
        _write_or_print(_report_json(report, args.deterministic), args.report)
        return EXIT_OK

    selections = config.selections
    strategies = [] if estimators_only else config.strategies
    workers = config.workers or min(4, max(1, len(selections) + len(strategies)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        sel_results = list(
            pool.map(lambda sel: _analyze_selection(sel, prefix, config), selections)
        )
        strat_results = list(
            pool.map(lambda st: _analyze_strategy(st, prefix, config), strategies)
        )

    sel_results.sort(key=lambda item: item[0])
    strat_results.sort(key=lambda item: item[0])

    report["selections"] = [
        {
            "id": sid,
            "selected_count": stats.selected_count,
            "fired": stats.fired,
            "final_ratio": stats.ones.to_json()["final"],
            "min_ratio": stats.ones.to_json()["min"],
            "max_ratio": stats.ones.to_json()["max"],
            "detail": stats.to_json(),
        }
        for sid, stats in sel_results
    ]
    if any(not stats.fired for _, stats in sel_results):
        report.setdefault("flags", []).append("selection never fires")

    if selections:
        if config.verdict_interval is not None:
            verdict = church_verdict(
                prefix,
                config.verdict_interval,
                selections,
                burn_in=config.burn_in,
                tol=config.tol,
            )
            report["church_verdict"] = verdict.to_json()
        try:
            estimate = smallest_interval_estimate(
                prefix, selections, burn_in=config.burn_in, min_count=config.min_count
            )
            report["estimate"] = estimate.to_json()
        except InsufficientCoverage as exc:
            report["estimate"] = {"error": str(exc)}
    report["i_phi"] = i_phi_estimate(
        prefix, config.system, config.precision_bits
    ).to_json()

    report["strategies"] = [
        {
            "id": sid,
            "mode": trajectory.mode,
            "final_log2": trajectory.log2_view()[-1],
            "unbounded": unbounded.to_json(),
            "schnorr": schnorr.to_json(),
        }
        for sid, trajectory, unbounded, schnorr in strat_results
    ]

    if args.csv:
        csv_dir = Path(args.csv)
        csv_dir.mkdir(parents=True, exist_ok=True)
        for sid, trajectory, _, _ in strat_results:
            safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in sid)
            (csv_dir / f"{safe}.csv").write_text(trajectory_to_csv(trajectory))

    _write_or_print(_report_json(report, args.deterministic), args.report)
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    config = load_config(args)
    raw = config.raw.get("construct", {})
    kind = args.kind
    report: dict = {"kind": kind}
    if kind == "greedy":
        strategy = build_strategy(
            raw.get("strategy", {"name": "double_on", "bit": 1}), config
        )
        bound = _fraction(raw.get("bound", "1"), "construct.bound")
        path = greedy_bounded_path(strategy, bound, Bits.empty(), config.horizon)
        trajectory = replay(strategy, path, mode="exact")
        report.update(
            {
                "strategy": strategy.id,
                "bound": f"{bound.numerator}/{bound.denominator}",
                "horizon": path.length,
                "capital_bound_ok": all(v <= bound for v in trajectory.values),
                "final_capital": f"{trajectory.final().numerator}/{trajectory.final().denominator}",
            }
        )
    elif kind == "diagonal":
        target = build_strategy(
            raw.get(
                "target",
                {"name": "all_in_on", "bit": 0, "interval": ["1/4", "3/4"]},
            ),
            config,
        )
        adversaries = [
            build_strategy(s, config)
            for s in raw.get("adversaries", [{"name": "double_on", "bit": 1}])
        ]
        milestones = raw.get("milestones", [2, 5])
        stage_cap = int(raw.get("stage_cap", 10_000))
        path, diag = diagonal_path(target, adversaries, milestones, stage_cap)
        report["diagonal"] = diag.to_json()
        report["target"] = target.id
        report["adversaries"] = [a.id for a in adversaries]
    elif kind == "double_or_hold":
        positions = raw.get("positions", "powers_of_two")
        strategy, path = double_or_hold_pair(
            positions, horizon=config.horizon, seed=config.seed
        )
        from .stochasticity import all_ones, doubling_detector

        detector = doubling_detector(strategy)
        stats = church_statistics(
            path, stationary(Fraction(1, 2)), detector, burn_in=1
        )
        overall = church_statistics(
            path, stationary(Fraction(1, 2)), all_ones(), burn_in=1
        )
        report.update(
            {
                "horizon": path.length,
                "detector_selected": stats.selected_count,
                "detector_ratio": stats.ones.to_json()["final"],
                "overall_ratio": overall.ones.to_json()["final"],
            }
        )
    else:
        raise ConfigError(f"unknown construction {kind!r}")
    out = Path(args.out)
    out.write_text(serialize_bits(path))
    _write_or_print(_report_json(report, args.deterministic), args.report)
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    results = run_all(seed=args.seed if args.seed is not None else 2024,
                      inject_fault=args.inject_fault)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return EXIT_OK if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randcast",
        description=(
            "Analyze finite binary sequences against interval-valued "
            "forecasting systems: betting-strategy replays, frequency "
            "tests, interval estimates, and constructive demos."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="experiment config JSON file")
        p.add_argument("--seed", type=int, default=None, help="override seed")
        p.add_argument("--horizon", type=int, default=None, help="override horizon")
        p.add_argument("--precision", type=int, default=None, help="override precision bits")
        p.add_argument("--deterministic", action="store_true",
                       help="suppress the timestamp so reports are byte-identical")

    p = sub.add_parser("generate", help="sample a path and write a .bits file")
    common(p)
    p.add_argument("--out", required=True, help="output .bits path")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("analyze", help="full report for a .bits file")
    common(p)
    p.add_argument("bits", help="input .bits file")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="directory for per-strategy trajectory CSVs")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("estimate", help="analyze with only the estimators")
    common(p)
    p.add_argument("bits", help="input .bits file")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help=argparse.SUPPRESS)
    p.set_defaults(fn=lambda a: cmd_analyze(a, estimators_only=True))

    p = sub.add_parser("construct", help="run a constructive procedure")
    common(p)
    p.add_argument("kind", choices=["greedy", "diagonal", "double_or_hold"])
    p.add_argument("--out", required=True, help="output .bits path")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("selftest", help="run the exact invariant suites")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BitsParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InvariantViolation, ValidationError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
