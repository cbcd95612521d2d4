"""Turn simulator CSV series into publication-style figures.

The only interface to the simulator is its CSV format: '#'-prefixed
``key=value`` metadata lines, a two-column header row, then data rows.
Rendering is read-only and idempotent; styling is deliberately minimal
and not pixel-pinned.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


class RenderError(Exception):
    """Raised for missing, empty, or ill-formed inputs; message names the file."""


@dataclass
class Series:
    label: str
    x: np.ndarray
    y: np.ndarray
    x_name: str
    y_name: str
    meta: dict


@dataclass
class FigureJob:
    csv_paths: list[Path]
    figure_kind: str
    output_path: Path


@dataclass(frozen=True)
class _KindSpec:
    x_name: str
    y_name: str
    x_label: str
    y_label: str
    title: str
    log_y: bool = False


_KIND_SPECS = {
    "timedomain": _KindSpec(
        "time_s", "amplitude", "Time (µs)", "|x(t)|",
        "Time-domain symbol envelope",
    ),
    "psd": _KindSpec(
        "freq_hz", "psd_db", "Frequency (kHz)", "Normalized PSD (dB)",
        "Power spectral density",
    ),
    "papr_ccdf": _KindSpec(
        "papr_db", "ccdf", "PAPR threshold γ (dB)", "Pr(PAPR > γ)",
        "CCDF of PAPR", log_y=True,
    ),
    "ber": _KindSpec(
        "ebn0_db", "ber", "Eb/N0 (dB)", "Bit error rate",
        "BER over AWGN", log_y=True,
    ),
    "ber_qam_compare": _KindSpec(
        "ebn0_db", "ber", "Eb/N0 (dB)", "Bit error rate",
        "16-QAM vs compressed BPSK over AWGN", log_y=True,
    ),
}

FIGURE_KINDS = tuple(_KIND_SPECS)

# axis unit rescaling applied before plotting, keyed by column name
_X_SCALE = {"time_s": 1e6, "freq_hz": 1e-3}


def read_series_csv(path: Path) -> Series:
    if not path.exists():
        raise RenderError(f"{path}: no such file")
    meta: dict[str, str] = {}
    label = path.stem
    header: list[str] | None = None
    xs: list[float] = []
    ys: list[float] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, val = body.split("=", 1)
                if key.strip() == "label":
                    label = val.strip()
                else:
                    meta[key.strip()] = val.strip()
            continue
        parts = [p.strip() for p in line.split(",")]
        if header is None:
            header = parts
            continue
        if len(parts) < 2:
            raise RenderError(f"{path}: line {lineno}: expected two columns")
        try:
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
        except ValueError:
            raise RenderError(f"{path}: line {lineno}: non-numeric data") from None
    if header is None or len(header) < 2:
        raise RenderError(f"{path}: empty or missing CSV header")
    if not xs:
        raise RenderError(f"{path}: no data rows")
    return Series(
        label=label,
        x=np.array(xs),
        y=np.array(ys),
        x_name=header[0],
        y_name=header[1],
        meta=meta,
    )


def _series_label(series: Series) -> str:
    scheme = series.meta.get("scheme")
    mod = series.meta.get("modulation")
    if scheme and mod:
        return f"{scheme} / {mod}"
    return scheme or series.label


def render(job: FigureJob) -> Path:
    """Render one figure; returns the written image path."""
    if job.figure_kind not in _KIND_SPECS:
        raise RenderError(
            f"unknown figure kind {job.figure_kind!r}; valid: {', '.join(FIGURE_KINDS)}"
        )
    if not job.csv_paths:
        raise RenderError("at least one CSV input is required")
    spec = _KIND_SPECS[job.figure_kind]
    series_list = [read_series_csv(Path(p)) for p in job.csv_paths]
    for series, path in zip(series_list, job.csv_paths):
        if (series.x_name, series.y_name) != (spec.x_name, spec.y_name):
            raise RenderError(
                f"{path}: header ({series.x_name},{series.y_name}) does not match "
                f"kind {job.figure_kind!r} ({spec.x_name},{spec.y_name})"
            )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x_scale = _X_SCALE.get(spec.x_name, 1.0)
    for series in series_list:
        x, y = series.x * x_scale, series.y
        if spec.log_y:
            keep = y > 0  # zero probabilities have no place on a log axis
            x, y = x[keep], y[keep]
        ax.plot(x, y, marker="o" if x.size <= 40 else None, markersize=3,
                label=_series_label(series))
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_label)
    ax.set_ylabel(spec.y_label)
    ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.4)
    if len(series_list) > 1:
        ax.legend()
    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a figure from stcofdm CSV result series.",
    )
    parser.add_argument("--kind", required=True,
                        help=f"figure kind, one of: {', '.join(FIGURE_KINDS)}")
    parser.add_argument("--out", required=True,
                        help="output image path (.png or .svg)")
    parser.add_argument("csvs", nargs="+", metavar="CSV", help="input series files")
    ns = parser.parse_args(argv)
    job = FigureJob(
        csv_paths=[Path(p) for p in ns.csvs],
        figure_kind=ns.kind,
        output_path=Path(ns.out),
    )
    try:
        render(job)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
