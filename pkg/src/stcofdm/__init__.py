"""Baseband OFDM link simulator with Walsh-code symbol-time compression."""

from .core import (
    MetricSeries,
    Modulation,
    Scheme,
    SystemConfig,
    bits_to_polar,
    default_config,
    polar_to_bits,
    read_series_csv,
    seeded_rng,
    write_series_csv,
)
from .ofdm import WaveformFrame, receive, transmit
from .channel import ChannelSpec, apply_awgn, ebn0_to_snr

__all__ = [
    "MetricSeries",
    "Modulation",
    "Scheme",
    "SystemConfig",
    "WaveformFrame",
    "ChannelSpec",
    "apply_awgn",
    "bits_to_polar",
    "default_config",
    "ebn0_to_snr",
    "polar_to_bits",
    "read_series_csv",
    "receive",
    "seeded_rng",
    "transmit",
    "write_series_csv",
]
