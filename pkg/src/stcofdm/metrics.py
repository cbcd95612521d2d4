"""Result metrics: PAPR/CCDF, Monte-Carlo BER, PSD, durations, complexity.

Monte-Carlo reductions (error counting, CCDF histograms) are associative,
and every worker draws from a seed derived with ``spawn_seeds``, so results
are deterministic for a given (config, seed) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as _signal
from scipy.special import erfc

from . import channel, ofdm
from .core import (
    MetricSeries,
    Modulation,
    Scheme,
    SystemConfig,
    seeded_rng,
    spawn_seeds,
)
from .ofdm import WaveformFrame, payload_unit_bits

PAPR_GRID_DB = np.round(np.arange(0.0, 14.0 + 1e-9, 0.1), 10)


# ---------------------------------------------------------------------------
# PAPR

def papr_db(symbol_samples) -> float:
    """Peak-to-average power ratio of one symbol, in dB."""
    x = np.asarray(symbol_samples, dtype=complex)
    if x.size == 0:
        raise ValueError("empty input")
    p = np.abs(x) ** 2
    mean = p.mean()
    if mean == 0.0:
        raise ValueError("zero-power input has undefined PAPR")
    return float(10.0 * np.log10(p.max() / mean))


def _papr_per_symbol(bodies: np.ndarray) -> np.ndarray:
    p = np.abs(bodies) ** 2
    return 10.0 * np.log10(p.max(axis=1) / p.mean(axis=1))


def _random_payload(cfg: SystemConfig, n_units: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, n_units * payload_unit_bits(cfg), dtype=np.int8)


def symbols_per_unit(cfg: SystemConfig) -> int:
    return 1 if cfg.scheme is Scheme.CONVENTIONAL else 2


def papr_ccdf(cfg: SystemConfig, trials: int, seed: int) -> MetricSeries:
    """Empirical Pr(PAPR > gamma) over ``trials`` OFDM symbol bodies."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = seeded_rng(seed)
    per_unit = symbols_per_unit(cfg)
    n_units = -(-trials // per_unit)
    payload = _random_payload(cfg, n_units, rng)
    frame = ofdm.transmit(payload, cfg)
    samples = _papr_per_symbol(frame.bodies())[:trials]
    ccdf = np.array([(samples > g).mean() for g in PAPR_GRID_DB])
    return MetricSeries(
        label=f"papr_ccdf_{cfg.scheme.value}",
        x=PAPR_GRID_DB,
        y=ccdf,
        x_name="papr_db",
        y_name="ccdf",
        meta={"scheme": cfg.scheme.value, "seed": seed, "trials": int(samples.size),
              "fft_size": cfg.fft_size},
    )


def papr_at_ccdf(series: MetricSeries, level: float) -> float:
    """PAPR (dB) where the CCDF crosses ``level``, log-linear in probability."""
    x, y = series.x, series.y
    if level <= 0 or level >= 1:
        raise ValueError("level must be in (0, 1)")
    below = np.nonzero(y <= level)[0]
    if below.size == 0:
        return float(x[-1])
    j = below[0]
    if j == 0:
        return float(x[0])
    y0, y1 = y[j - 1], y[j]
    if y1 <= 0.0:
        # crossing into the empirical floor; take the last populated point
        return float(x[j - 1]) if y0 > level else float(x[j])
    t = (math.log(level) - math.log(y0)) / (math.log(y1) - math.log(y0))
    return float(x[j - 1] + t * (x[j] - x[j - 1]))


# ---------------------------------------------------------------------------
# BER

def bits_per_complex_sample(cfg: SystemConfig) -> float:
    """Payload bits per CP-stripped body sample (CP counted as overhead)."""
    unit = payload_unit_bits(cfg)
    body = symbols_per_unit(cfg) * cfg.fft_size
    return unit / body


def ber_curve(
    cfg: SystemConfig,
    ebn0_grid_db,
    min_bits: int,
    max_errors: int,
    seed: int,
) -> MetricSeries:
    """Monte-Carlo BER over AWGN per Eb/N0 point.

    Each point runs until ``min_bits`` are simulated or ``max_errors`` are
    accumulated, whichever comes first.
    """
    grid = np.asarray(ebn0_grid_db, dtype=float)
    if grid.size == 0:
        raise ValueError("Eb/N0 grid must be nonempty")
    if min_bits < 10_000:
        raise ValueError("min_bits must be >= 10000")
    bpcs = bits_per_complex_sample(cfg)
    unit = payload_unit_bits(cfg)
    batch_units = max(1, 200_000 // unit)
    point_seeds = spawn_seeds(seed, grid.size)
    bers = []
    counts = []
    for ebn0_db, pseed in zip(grid, point_seeds):
        payload_seed, noise_master = spawn_seeds(pseed, 2)
        rng = seeded_rng(payload_seed)
        noise_rng = seeded_rng(noise_master)
        errors = 0
        bits_done = 0
        while bits_done < min_bits and errors < max_errors:
            payload = _random_payload(cfg, batch_units, rng)
            frame = ofdm.transmit(payload, cfg)
            spec = channel.ChannelSpec(
                bits_per_complex_sample=bpcs,
                rng_seed=int(noise_rng.integers(0, 2**63)),
                ebn0_db=float(ebn0_db),
            )
            noisy = channel.apply_awgn(frame, spec)
            decoded = ofdm.receive(noisy, cfg)
            errors += int(np.count_nonzero(decoded != payload))
            bits_done += payload.size
        bers.append(errors / bits_done)
        counts.append(bits_done)
    return MetricSeries(
        label=f"ber_{cfg.scheme.value}_{cfg.modulation.value}",
        x=grid,
        y=np.array(bers),
        x_name="ebn0_db",
        y_name="ber",
        meta={"scheme": cfg.scheme.value, "modulation": cfg.modulation.value,
              "seed": seed, "min_bits": min_bits, "max_errors": max_errors,
              "bits_per_point": ",".join(str(c) for c in counts),
              "bits_per_complex_sample": bpcs},
    )


def snr_at_target_ber(series: MetricSeries, target: float) -> float:
    """x-axis value where the BER curve crosses ``target``.

    Log-linear interpolation between grid points; extrapolates from the last
    descending segment when the target lies below the simulated range.
    """
    if target <= 0:
        raise ValueError("target BER must be positive")
    mask = series.y > 0
    x = series.x[mask]
    y = series.y[mask]
    if x.size < 2:
        raise ValueError("need at least two nonzero BER points")
    logy = np.log10(y)
    logt = math.log10(target)
    for i in range(x.size - 1):
        lo, hi = sorted((logy[i], logy[i + 1]))
        if lo <= logt <= hi and logy[i] != logy[i + 1]:
            t = (logt - logy[i]) / (logy[i + 1] - logy[i])
            return float(x[i] + t * (x[i + 1] - x[i]))
    # extrapolate from the final segment
    i = x.size - 2
    if logy[i + 1] == logy[i]:
        raise ValueError("flat BER curve; cannot extrapolate")
    t = (logt - logy[i]) / (logy[i + 1] - logy[i])
    return float(x[i] + t * (x[i + 1] - x[i]))


# ---------------------------------------------------------------------------
# Closed-form references

def q_function(x) -> np.ndarray | float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def bpsk_ber_theory(ebn0_db) -> np.ndarray | float:
    gamma = 10.0 ** (np.asarray(ebn0_db, dtype=float) / 10.0)
    return q_function(np.sqrt(2.0 * gamma))


_PAM_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0]) / math.sqrt(10.0)
_PAM_BITS = np.array([[0, 0], [0, 1], [1, 1], [1, 0]])
_PAM_THRESHOLDS = np.array([-2.0, 0.0, 2.0]) / math.sqrt(10.0)


def qam16_ber_theory(ebn0_db) -> np.ndarray | float:
    """Exact bit error rate of Gray-mapped 16-QAM over AWGN."""
    gamma = np.atleast_1d(np.asarray(ebn0_db, dtype=float))
    gamma_lin = 10.0 ** (gamma / 10.0)
    # unit symbol energy, 4 bits/symbol, per-axis noise sigma^2 = N0/2
    sigma = np.sqrt(1.0 / (8.0 * gamma_lin))
    ber = np.zeros_like(gamma_lin)
    edges = np.concatenate([[-np.inf], _PAM_THRESHOLDS, [np.inf]])
    for li, level in enumerate(_PAM_LEVELS):
        for ri in range(4):
            hamming = int(np.sum(_PAM_BITS[li] != _PAM_BITS[ri]))
            if hamming == 0:
                continue
            p_region = q_function((edges[ri] - level) / sigma) - q_function(
                (edges[ri + 1] - level) / sigma
            )
            ber += p_region * hamming
    ber /= 4.0 * 2.0  # average over levels, two bits per axis
    return ber if np.ndim(ebn0_db) else float(ber[0])


# ---------------------------------------------------------------------------
# PSD and occupied bandwidth

def psd_estimate(frame: WaveformFrame, segment_len: int, overlap: float = 0.5) -> MetricSeries:
    """Welch-averaged two-sided PSD, Hann window, normalized to 0 dB peak."""
    x = frame.samples
    if segment_len > x.size:
        raise ValueError(f"segment_len {segment_len} exceeds frame length {x.size}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError("overlap must be in [0, 1)")
    freqs, p = _signal.welch(
        x,
        fs=frame.sampling_rate_hz,
        window="hann",
        nperseg=segment_len,
        noverlap=int(segment_len * overlap),
        return_onesided=False,
        detrend=False,
    )
    freqs = np.fft.fftshift(freqs)
    p = np.fft.fftshift(p)
    p_db = 10.0 * np.log10(np.maximum(p, 1e-300) / p.max())
    return MetricSeries(
        label="psd",
        x=freqs,
        y=p_db,
        x_name="freq_hz",
        y_name="psd_db",
        meta={"segment_len": segment_len, "overlap": overlap,
              "sampling_rate_hz": frame.sampling_rate_hz},
    )


def occupied_bandwidth_hz(psd: MetricSeries, threshold_db: float = -6.0) -> float:
    """Width of the contiguous band around the peak above the edge threshold.

    The threshold is taken relative to the in-band plateau (median level of
    the bins within 10 dB of the peak); the default -6 dB edge sits halfway
    between the outermost occupied subcarrier and its absent neighbor, which
    is the nominal channel-edge convention.
    """
    if psd.x.size == 0:
        raise ValueError("empty PSD series")
    if threshold_db >= 0:
        raise ValueError("threshold_db must be negative")
    y = psd.y - psd.y.max()
    plateau = float(np.median(y[y >= -10.0]))
    thr = plateau + threshold_db
    peak = int(np.argmax(y))
    lo = peak
    while lo > 0 and y[lo - 1] >= thr:
        lo -= 1
    hi = peak
    while hi < y.size - 1 and y[hi + 1] >= thr:
        hi += 1
    return float(psd.x[hi] - psd.x[lo])


def narrowband_reference_frame(
    scheme: Scheme,
    n_symbols: int,
    seed: int,
    active_subcarriers: int = 12,
    grid_fft: int = 128,
    cp_len: int = 32,
    sampling_rate_hz: float = 1.92e6,
) -> WaveformFrame:
    """Frames for spectrum comparison on a common subcarrier grid.

    The uncompressed reference occupies ``active_subcarriers`` bins of a
    ``grid_fft``-point grid (the narrowband channel); the compressed codecs
    carry the same payload on half / a quarter as many bins, which is what
    shrinks the occupied bandwidth while the subcarrier spacing is unchanged.
    """
    from . import spreading

    rng = seeded_rng(seed)
    if scheme is Scheme.CONVENTIONAL:
        k = active_subcarriers
    elif scheme is Scheme.CSTC:
        k = active_subcarriers // 2
    else:
        k = active_subcarriers // 4
    if k < 1:
        raise ValueError("too few active subcarriers for this scheme")
    bins = (np.arange(k) - k // 2) % grid_fft
    spectra = np.zeros((n_symbols, grid_fft), dtype=complex)
    for i in range(0, n_symbols, 2):
        if scheme is Scheme.CONVENTIONAL:
            cols = (2.0 * rng.integers(0, 2, (k, 2)) - 1.0).astype(complex)
        elif scheme is Scheme.CSTC:
            cols = spreading.cstc_encode(*rng.integers(0, 2, (2, k), dtype=np.int8))
        else:
            cols = spreading.mstc_encode(*rng.integers(0, 2, (4, k), dtype=np.int8))
        spectra[i, bins] = cols[:, 0]
        if i + 1 < n_symbols:
            spectra[i + 1, bins] = cols[:, 1]
    bodies = ofdm.ifft_modulate(spectra, grid_fft)
    with_cp = ofdm.add_cp(bodies, cp_len)
    return WaveformFrame(
        samples=with_cp.reshape(-1),
        fft_size=grid_fft,
        cp_len=cp_len,
        symbol_count=n_symbols,
        sampling_rate_hz=sampling_rate_hz,
    )


# ---------------------------------------------------------------------------
# Durations and complexity

def symbol_duration_s(cfg: SystemConfig) -> float:
    """Duration of one OFDM symbol including CP, in seconds."""
    return cfg.symbol_len / cfg.sampling_rate_hz


@dataclass(frozen=True)
class ComplexityCount:
    scheme: Scheme
    n: int
    multiplications: int
    additions: int


def complexity_counts(scheme: Scheme, n: int) -> ComplexityCount:
    """Closed-form operation counts for an n-subcarrier transceiver."""
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"n must be a power of two >= 8, got {n}")
    log2n = n.bit_length() - 1
    if scheme is Scheme.CONVENTIONAL:
        mults = 2 * n * log2n - 2 * n
        adds = 3 * n * log2n - n
    elif scheme is Scheme.CSTC:
        mults = n * (log2n - 1) - n
        adds = 3 * n * (log2n - 1) // 2 - n // 2
    else:
        mults = (n // 2) * (log2n - 2) - n // 2
        adds = 3 * n * (log2n - 2) // 4 - n // 4
    return ComplexityCount(scheme=scheme, n=n, multiplications=mults, additions=adds)
