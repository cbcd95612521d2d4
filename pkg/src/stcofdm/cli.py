"""Scenario runner: one subcommand-style ``--kind`` per experiment.

Each run writes one CSV per (scheme, series) plus ``summary.csv`` with the
headline scalars, all in the chosen output directory.  Exit codes: 0 on
success, 1 for usage errors, 2 for runtime/I-O failures.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import metrics
from .core import (
    MetricSeries,
    Modulation,
    Scheme,
    default_config,
    config_from_mapping,
    parse_config_text,
    spawn_seeds,
    write_series_csv,
)

KINDS = ("papr_ccdf", "ber", "ber_qam_compare", "psd", "timedomain", "complexity")

_CONFIG_KEYS = {
    "scheme", "fft_size", "cp_len", "subcarrier_spacing_hz",
    "sampling_rate_hz", "modulation", "rng_seed",
}
_KIND_KEYS = {
    "papr_ccdf": {"trials"},
    "ber": {"ebn0_min", "ebn0_max", "ebn0_step", "min_bits", "max_errors"},
    "ber_qam_compare": {"ebn0_min", "ebn0_max", "ebn0_step", "min_bits", "max_errors"},
    "psd": {"symbols", "segment_len", "threshold_db", "active_subcarriers"},
    "timedomain": set(),
    "complexity": {"n"},
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    pass


@dataclass
class Scenario:
    kind: str
    schemes: list[Scheme]
    overrides: dict[str, str] = field(default_factory=dict)
    output_dir: Path = Path("results")
    seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise UsageError(
                f"unknown kind {self.kind!r}; valid kinds: {', '.join(KINDS)}"
            )
        allowed = _KIND_KEYS[self.kind] | _CONFIG_KEYS
        for key in self.overrides:
            if key not in allowed:
                raise UsageError(
                    f"override {key!r} is not valid for kind {self.kind!r} "
                    f"(allowed: {', '.join(sorted(allowed)) or 'none'})"
                )

    def get_int(self, key: str, default: int) -> int:
        return int(self.overrides.get(key, default))

    def get_float(self, key: str, default: float) -> float:
        return float(self.overrides.get(key, default))


def _scheme_config(scenario: Scenario, scheme: Scheme, seed: int,
                   modulation: Modulation = Modulation.BPSK):
    cfg = default_config(scheme, modulation=modulation, rng_seed=seed)
    cfg_keys = {k: v for k, v in scenario.overrides.items()
                if k in _CONFIG_KEYS and k != "scheme"}
    if "fft_size" in cfg_keys and "cp_len" not in cfg_keys:
        cfg_keys["cp_len"] = str(int(cfg_keys["fft_size"]) // 4)
    return config_from_mapping(cfg_keys, cfg)


def _summary_series_rows(rows: list[tuple[str, str, float]]) -> list[str]:
    lines = ["metric,scheme,value"]
    for metric, scheme, value in rows:
        lines.append(f"{metric},{scheme},{value:.12g}")
    return lines


def _write_summary(scenario: Scenario, rows: list[tuple[str, str, float]]) -> None:
    path = scenario.output_dir / "summary.csv"
    head = [f"# kind={scenario.kind}", f"# seed={scenario.seed}"]
    path.write_text("\n".join(head + _summary_series_rows(rows)) + "\n", encoding="utf-8")


def _run_complexity(scenario: Scenario) -> list[tuple[str, str, float]]:
    n = scenario.get_int("n", 128)
    sizes = [2 ** k for k in range(3, 11)]
    rows = []
    for scheme in scenario.schemes:
        counts = [metrics.complexity_counts(scheme, s) for s in sizes]
        for name, attr in (("mults", "multiplications"), ("adds", "additions")):
            series = MetricSeries(
                label=f"complexity_{name}_{scheme.value}",
                x=np.array(sizes, dtype=float),
                y=np.array([getattr(c, attr) for c in counts], dtype=float),
                x_name="n",
                y_name=name,
                meta={"scheme": scheme.value},
            )
            write_series_csv(series, scenario.output_dir / f"complexity_{name}_{scheme.value}.csv")
        at_n = metrics.complexity_counts(scheme, n)
        rows.append(("multiplications", scheme.value, float(at_n.multiplications)))
        rows.append(("additions", scheme.value, float(at_n.additions)))
    return rows


def _run_timedomain(scenario: Scenario) -> list[tuple[str, str, float]]:
    rows = []
    seeds = spawn_seeds(scenario.seed, len(scenario.schemes))
    for scheme, seed in zip(scenario.schemes, seeds):
        cfg = _scheme_config(scenario, scheme, seed)
        rng = np.random.default_rng(seed)
        payload = rng.integers(0, 2, metrics.payload_unit_bits(cfg), dtype=np.int8)
        from . import ofdm
        frame = ofdm.transmit(payload, cfg)
        sym = frame.symbols()[0]
        t = np.arange(sym.size) / cfg.sampling_rate_hz
        series = MetricSeries(
            label=f"timedomain_{scheme.value}",
            x=t,
            y=np.abs(sym),
            x_name="time_s",
            y_name="amplitude",
            meta={"scheme": scheme.value, "seed": seed,
                  "symbol_duration_s": metrics.symbol_duration_s(cfg)},
        )
        write_series_csv(series, scenario.output_dir / f"timedomain_{scheme.value}.csv")
        rows.append(("symbol_duration_us", scheme.value, metrics.symbol_duration_s(cfg) * 1e6))
        rows.append(("bits_per_complex_sample", scheme.value,
                     metrics.bits_per_complex_sample(cfg)))
    return rows


def _run_papr(scenario: Scenario) -> list[tuple[str, str, float]]:
    trials = scenario.get_int("trials", 10_000)
    rows = []
    seeds = spawn_seeds(scenario.seed, len(scenario.schemes))
    for scheme, seed in zip(scenario.schemes, seeds):
        cfg = _scheme_config(scenario, scheme, seed)
        series = metrics.papr_ccdf(cfg, trials, seed)
        write_series_csv(series, scenario.output_dir / f"papr_ccdf_{scheme.value}.csv")
        rows.append(("papr_db_at_ccdf_1e-3", scheme.value,
                     metrics.papr_at_ccdf(series, 1e-3)))
    return rows


def _ebn0_grid(scenario: Scenario) -> np.ndarray:
    lo = scenario.get_float("ebn0_min", 0.0)
    hi = scenario.get_float("ebn0_max", 10.0)
    step = scenario.get_float("ebn0_step", 0.5)
    if step <= 0 or hi < lo:
        raise UsageError("invalid Eb/N0 grid")
    return np.round(np.arange(lo, hi + step / 2, step), 10)


def _run_ber(scenario: Scenario) -> list[tuple[str, str, float]]:
    grid = _ebn0_grid(scenario)
    min_bits = scenario.get_int("min_bits", 200_000)
    max_errors = scenario.get_int("max_errors", 200)
    seeds = spawn_seeds(scenario.seed, len(scenario.schemes))

    def one(args):
        scheme, seed = args
        cfg = _scheme_config(scenario, scheme, seed)
        return scheme, metrics.ber_curve(cfg, grid, min_bits, max_errors, seed)

    if scenario.jobs > 1:
        with ThreadPoolExecutor(max_workers=scenario.jobs) as pool:
            results = list(pool.map(one, zip(scenario.schemes, seeds)))
    else:
        results = [one(a) for a in zip(scenario.schemes, seeds)]

    rows = []
    for scheme, series in results:
        write_series_csv(series, scenario.output_dir / f"ber_{scheme.value}.csv")
        try:
            rows.append(("ebn0_db_at_ber_1e-6", scheme.value,
                         metrics.snr_at_target_ber(series, 1e-6)))
        except ValueError:
            pass
    return rows


def _run_ber_qam_compare(scenario: Scenario) -> list[tuple[str, str, float]]:
    grid = _ebn0_grid(scenario)
    min_bits = scenario.get_int("min_bits", 200_000)
    max_errors = scenario.get_int("max_errors", 200)
    seeds = spawn_seeds(scenario.seed, 2)
    qam_cfg = _scheme_config(scenario, Scheme.CONVENTIONAL, seeds[0],
                             modulation=Modulation.QAM16)
    mstc_cfg = _scheme_config(scenario, Scheme.MSTC, seeds[1])
    qam = metrics.ber_curve(qam_cfg, grid, min_bits, max_errors, seeds[0])
    mstc = metrics.ber_curve(mstc_cfg, grid, min_bits, max_errors, seeds[1])
    write_series_csv(qam, scenario.output_dir / "ber_conventional_qam16.csv")
    write_series_csv(mstc, scenario.output_dir / "ber_mstc_bpsk.csv")
    rows = []
    for target, tag in ((1e-3, "1e-3"), (1e-6, "1e-6")):
        try:
            q_at = metrics.snr_at_target_ber(qam, target)
            m_at = metrics.snr_at_target_ber(mstc, target)
        except ValueError:
            continue
        rows.append((f"ebn0_db_at_ber_{tag}", "conventional_qam16", q_at))
        rows.append((f"ebn0_db_at_ber_{tag}", "mstc_bpsk", m_at))
        rows.append((f"ebn0_gap_db_at_ber_{tag}", "qam16_vs_mstc", q_at - m_at))
    return rows


def _run_psd(scenario: Scenario) -> list[tuple[str, str, float]]:
    n_symbols = scenario.get_int("symbols", 2000)
    segment_len = scenario.get_int("segment_len", 2048)
    threshold_db = scenario.get_float("threshold_db", -6.0)
    active = scenario.get_int("active_subcarriers", 12)
    seeds = spawn_seeds(scenario.seed, len(scenario.schemes))
    rows = []
    widths = {}
    for scheme, seed in zip(scenario.schemes, seeds):
        frame = metrics.narrowband_reference_frame(
            scheme, n_symbols, seed, active_subcarriers=active
        )
        series = metrics.psd_estimate(frame, segment_len)
        series.label = f"psd_{scheme.value}"
        series.meta["scheme"] = scheme.value
        series.meta["seed"] = seed
        write_series_csv(series, scenario.output_dir / f"psd_{scheme.value}.csv")
        width = metrics.occupied_bandwidth_hz(series, threshold_db)
        widths[scheme] = width
        rows.append(("occupied_bandwidth_hz", scheme.value, width))
    if Scheme.CONVENTIONAL in widths:
        ref = widths[Scheme.CONVENTIONAL]
        for scheme, width in widths.items():
            if scheme is not Scheme.CONVENTIONAL:
                rows.append(("bandwidth_ratio", scheme.value, width / ref))
    return rows


_RUNNERS = {
    "complexity": _run_complexity,
    "timedomain": _run_timedomain,
    "papr_ccdf": _run_papr,
    "ber": _run_ber,
    "ber_qam_compare": _run_ber_qam_compare,
    "psd": _run_psd,
}


def run(scenario: Scenario) -> None:
    """Execute a scenario and write its CSV outputs."""
    scenario.output_dir.mkdir(parents=True, exist_ok=True)
    rows = _RUNNERS[scenario.kind](scenario)
    _write_summary(scenario, rows)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stcofdm",
        description="Link-level simulation scenarios for the symbol-time-compressed OFDM chain.",
        add_help=True,
    )
    parser.add_argument("--kind", help=f"scenario kind, one of: {', '.join(KINDS)} (or 'list')")
    parser.add_argument("--schemes", default="conventional,cstc,mstc",
                        help="comma-separated scheme list")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--set", dest="sets", action="append", default=[],
                        metavar="KEY=VALUE", help="scenario override (repeatable)")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--jobs", type=int, default=1, help="worker pool size")
    return parser


def parse_args(argv) -> Scenario:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help
            raise
        raise UsageError("invalid arguments") from None
    if ns.kind is None:
        raise UsageError(f"--kind is required; valid kinds: {', '.join(KINDS)}")
    if ns.kind == "list":
        print("\n".join(KINDS))
        raise SystemExit(EXIT_OK)
    overrides: dict[str, str] = {}
    if ns.config:
        text = Path(ns.config).read_text(encoding="utf-8")
        overrides.update(parse_config_text(text))
    for item in ns.sets:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        overrides[key.strip()] = val.strip()
    try:
        schemes = [Scheme.parse(s) for s in ns.schemes.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not schemes:
        raise UsageError("at least one scheme is required")
    if ns.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    return Scenario(
        kind=ns.kind,
        schemes=schemes,
        overrides=overrides,
        output_dir=Path(ns.out),
        seed=ns.seed,
        jobs=ns.jobs,
    )


def main(argv=None) -> int:
    try:
        scenario = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        run(scenario)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
