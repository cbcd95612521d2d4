"""Shared domain types, configuration profiles, RNG seeding and CSV I/O.

Bit blocks and polar blocks are plain integer numpy arrays; the helpers
here validate and convert them.  The random number generator is numpy's
``default_rng`` (PCG64); the algorithm identity is part of the
reproducibility contract documented in the README: one build, one seed,
bit-identical outputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np


class Scheme(enum.Enum):
    """Transceiver variant selector."""

    CONVENTIONAL = "conventional"
    CSTC = "cstc"
    MSTC = "mstc"

    @classmethod
    def parse(cls, text: str) -> "Scheme":
        key = text.strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "conventional": cls.CONVENTIONAL,
            "ofdm": cls.CONVENTIONAL,
            "conv": cls.CONVENTIONAL,
            "cstc": cls.CSTC,
            "cstcofdm": cls.CSTC,
            "mstc": cls.MSTC,
            "mstcofdm": cls.MSTC,
        }
        if key not in aliases:
            raise ValueError(f"unknown scheme {text!r}")
        return aliases[key]


class Modulation(enum.Enum):
    BPSK = "bpsk"
    QAM16 = "qam16"

    @classmethod
    def parse(cls, text: str) -> "Modulation":
        key = text.strip().lower().replace("-", "")
        if key in ("bpsk",):
            return cls.BPSK
        if key in ("qam16", "16qam"):
            return cls.QAM16
        raise ValueError(f"unknown modulation {text!r}")


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# Default narrowband profile: 15 kHz subcarrier spacing, 1.92 MHz sampling,
# 128 subcarriers for the uncompressed system.  The compressed variants halve
# and quarter the transform size at the same sampling rate.
DEFAULT_SPACING_HZ = 15e3
DEFAULT_SAMPLING_HZ = 1.92e6
DEFAULT_FFT_SIZE = {Scheme.CONVENTIONAL: 128, Scheme.CSTC: 64, Scheme.MSTC: 32}


@dataclass(frozen=True)
class SystemConfig:
    """Full parameterization of one transceiver variant."""

    scheme: Scheme
    fft_size: int
    cp_len: int
    subcarrier_spacing_hz: float
    sampling_rate_hz: float
    modulation: Modulation = Modulation.BPSK
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not _is_pow2(self.fft_size) or self.fft_size < 4:
            raise ValueError(f"fft_size must be a power of two >= 4, got {self.fft_size}")
        if self.cp_len < 0:
            raise ValueError("cp_len must be nonnegative")
        if self.subcarrier_spacing_hz <= 0 or self.sampling_rate_hz <= 0:
            raise ValueError("rates must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 bits")

    @property
    def symbol_len(self) -> int:
        return self.fft_size + self.cp_len

    def with_overrides(self, **kw) -> "SystemConfig":
        return replace(self, **kw)


def default_config(
    scheme: Scheme,
    modulation: Modulation = Modulation.BPSK,
    rng_seed: int = 0,
) -> SystemConfig:
    """Default profile for a scheme: transform sizes 128/64/32, CP = 1/4 symbol."""
    fft = DEFAULT_FFT_SIZE[scheme]
    return SystemConfig(
        scheme=scheme,
        fft_size=fft,
        cp_len=fft // 4,
        subcarrier_spacing_hz=DEFAULT_SAMPLING_HZ / fft,
        sampling_rate_hz=DEFAULT_SAMPLING_HZ,
        modulation=modulation,
        rng_seed=rng_seed,
    )


def as_bits(bits: Iterable[int]) -> np.ndarray:
    """Validate and return a bit block as an int8 array of {0,1}."""
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
    arr = arr.astype(np.int8, copy=False)
    if arr.ndim != 1:
        raise ValueError("bit block must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit block may contain only 0 and 1")
    return arr


def bits_to_polar(bits: Iterable[int]) -> np.ndarray:
    """Map bits to polar symbols, 0 -> -1 and 1 -> +1."""
    b = as_bits(bits)
    return (2 * b.astype(np.int64) - 1).astype(np.int8)


def polar_to_bits(symbols: Iterable[int]) -> np.ndarray:
    arr = np.asarray(symbols)
    if arr.size and not np.isin(arr, (-1, 1)).all():
        raise ValueError("polar block may contain only -1 and +1")
    return ((arr.astype(np.int64) + 1) // 2).astype(np.int8)


def seeded_rng(seed: int) -> np.random.Generator:
    """Deterministic random source (PCG64).  Same seed, same stream."""
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return np.random.default_rng(seed)


def spawn_seeds(seed: int, n: int) -> list[int]:
    """Derive n independent child seeds from one master seed."""
    ss = np.random.SeedSequence(seed)
    return [int(child.generate_state(1, np.uint64)[0]) for child in ss.spawn(n)]


@dataclass
class MetricSeries:
    """A labeled (x, y) result series with provenance metadata."""

    label: str
    x: np.ndarray
    y: np.ndarray
    x_name: str
    y_name: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("x and y must be 1-D arrays of equal length")
        if self.x.size > 1 and not np.all(np.diff(self.x) > 0):
            raise ValueError("x must be strictly increasing")


def write_series_csv(series: MetricSeries, path: str | Path) -> None:
    """Write one MetricSeries as UTF-8 CSV with '#'-prefixed metadata lines."""
    path = Path(path)
    lines = [f"# label={series.label}"]
    for key in sorted(series.meta):
        lines.append(f"# {key}={series.meta[key]}")
    lines.append(f"{series.x_name},{series.y_name}")
    for xv, yv in zip(series.x, series.y):
        lines.append(f"{xv:.12g},{yv:.12g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_series_csv(path: str | Path) -> MetricSeries:
    path = Path(path)
    meta: dict[str, str] = {}
    label = path.stem
    header: list[str] | None = None
    xs: list[float] = []
    ys: list[float] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
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
        parts = line.split(",")
        if header is None:
            header = [p.strip() for p in parts]
            continue
        xs.append(float(parts[0]))
        ys.append(float(parts[1]))
    if header is None or len(header) < 2:
        raise ValueError(f"{path}: missing CSV header")
    return MetricSeries(label=label, x=np.array(xs), y=np.array(ys),
                        x_name=header[0], y_name=header[1], meta=meta)


_CONFIG_FIELDS = (
    "scheme", "fft_size", "cp_len", "subcarrier_spacing_hz",
    "sampling_rate_hz", "modulation", "rng_seed",
)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat key=value config text into a raw mapping."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def config_from_mapping(raw: Mapping[str, str], base: SystemConfig) -> SystemConfig:
    """Overlay key=value pairs (all config field names) onto a base config."""
    kw: dict = {}
    for key, val in raw.items():
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"unknown config key {key!r}")
        if key == "scheme":
            kw[key] = Scheme.parse(val)
        elif key == "modulation":
            kw[key] = Modulation.parse(val)
        elif key in ("fft_size", "cp_len", "rng_seed"):
            kw[key] = int(val)
        else:
            kw[key] = float(val)
    return base.with_overrides(**kw)


def config_to_text(cfg: SystemConfig) -> str:
    return "\n".join(
        [
            f"scheme={cfg.scheme.value}",
            f"fft_size={cfg.fft_size}",
            f"cp_len={cfg.cp_len}",
            f"subcarrier_spacing_hz={cfg.subcarrier_spacing_hz:.12g}",
            f"sampling_rate_hz={cfg.sampling_rate_hz:.12g}",
            f"modulation={cfg.modulation.value}",
            f"rng_seed={cfg.rng_seed}",
        ]
    ) + "\n"
