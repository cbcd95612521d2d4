"""Constellation mapping, radix-2 transforms, CP framing and the full chains.

The FFT/IFFT pair uses unitary 1/sqrt(n) scaling in both directions so that
Parseval holds exactly and noise variance is preserved across the transform;
every reported metric is invariant to this global scale choice.

Framing: the compressed schemes split the payload into 2 (single-unit) or
4 (two-unit) contiguous streams, run the chip codec, and transmit each chip
matrix column as one compressed OFDM symbol.  One payload unit is therefore
``streams * fft_size`` bits and always yields two OFDM symbols.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spreading
from .core import Modulation, Scheme, SystemConfig, as_bits

_QAM16_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])
# Gray mapping per axis, indexed by 2*msb + lsb: 00 -> -3, 01 -> -1, 10 -> +3, 11 -> +1.
_GRAY_LEVEL_LUT = np.array([-3.0, -1.0, 3.0, 1.0])
# Inverse: index by (level + 3) / 2 -> (msb, lsb).
_LEVEL_BITS_LUT = np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.int8)
_QAM16_SCALE = 1.0 / np.sqrt(10.0)  # unit mean symbol energy


@dataclass(frozen=True)
class WaveformFrame:
    """Time-domain samples of one or more OFDM symbols, CP included."""

    samples: np.ndarray
    fft_size: int
    cp_len: int
    symbol_count: int
    sampling_rate_hz: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))
        expected = self.symbol_count * (self.fft_size + self.cp_len)
        if self.samples.size != expected:
            raise ValueError(
                f"frame has {self.samples.size} samples, expected {expected}"
            )

    @property
    def symbol_len(self) -> int:
        return self.fft_size + self.cp_len

    def symbols(self) -> np.ndarray:
        """Samples reshaped to (symbol_count, fft_size + cp_len)."""
        return self.samples.reshape(self.symbol_count, self.symbol_len)

    def bodies(self) -> np.ndarray:
        """CP-stripped symbol bodies, shape (symbol_count, fft_size)."""
        return self.symbols()[:, self.cp_len:]


def _check_pow2(n: int) -> None:
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"transform size must be a power of two >= 2, got {n}")


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _fft_core(x: np.ndarray, sign: float) -> np.ndarray:
    """Iterative radix-2 transform along the last axis, unitary scaling."""
    n = x.shape[-1]
    _check_pow2(n)
    out = np.asarray(x, dtype=complex)[..., _bit_reverse_indices(n)]
    batch = out.shape[:-1]
    m = 2
    while m <= n:
        half = m // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(half) / m)
        out = out.reshape(*batch, n // m, m)
        even = out[..., :half]
        odd = out[..., half:] * tw
        out = np.concatenate([even + odd, even - odd], axis=-1)
        out = out.reshape(*batch, n)
        m *= 2
    return out / np.sqrt(n)


def ifft_modulate(spectrum, size: int) -> np.ndarray:
    """Unitary inverse transform of a length-``size`` spectrum."""
    spec = np.asarray(spectrum, dtype=complex)
    if spec.shape[-1] != size:
        raise ValueError(f"spectrum length {spec.shape[-1]} does not match size {size}")
    return _fft_core(spec, +1.0)


def fft_demodulate(samples, size: int) -> np.ndarray:
    """Unitary forward transform; exact inverse of :func:`ifft_modulate`."""
    x = np.asarray(samples, dtype=complex)
    if x.shape[-1] != size:
        raise ValueError(f"sample count {x.shape[-1]} does not match size {size}")
    return _fft_core(x, -1.0)


def add_cp(body, cp_len: int) -> np.ndarray:
    """Prefix a copy of the last ``cp_len`` samples; works on batched bodies."""
    arr = np.asarray(body, dtype=complex)
    if cp_len < 0 or cp_len > arr.shape[-1]:
        raise ValueError(f"cp_len {cp_len} exceeds body length {arr.shape[-1]}")
    if cp_len == 0:
        return arr.copy()
    return np.concatenate([arr[..., -cp_len:], arr], axis=-1)


def remove_cp(frame, fft_size: int, cp_len: int) -> np.ndarray:
    arr = np.asarray(frame, dtype=complex)
    if arr.shape[-1] != fft_size + cp_len:
        raise ValueError(
            f"symbol length {arr.shape[-1]} does not match fft_size+cp_len {fft_size + cp_len}"
        )
    return arr[..., cp_len:]


def map_symbols(bits, modulation: Modulation) -> np.ndarray:
    """Map bits to constellation symbols (BPSK polar, or Gray 16-QAM)."""
    b = as_bits(bits)
    if modulation is Modulation.BPSK:
        return (2.0 * b - 1.0).astype(complex)
    if b.size % 4:
        raise ValueError(f"16-QAM needs a multiple of 4 bits, got {b.size}")
    quads = b.reshape(-1, 4).astype(np.int64)
    re = _GRAY_LEVEL_LUT[2 * quads[:, 0] + quads[:, 1]]
    im = _GRAY_LEVEL_LUT[2 * quads[:, 2] + quads[:, 3]]
    return (re + 1j * im) * _QAM16_SCALE


def demap_symbols(symbols, modulation: Modulation) -> np.ndarray:
    """Hard-decision demapping, inverse of :func:`map_symbols`."""
    s = np.asarray(symbols, dtype=complex)
    if modulation is Modulation.BPSK:
        return (s.real > 0).astype(np.int8)
    out = np.empty((s.size, 4), dtype=np.int8)
    for axis, part in enumerate((s.real, s.imag)):
        idx = np.argmin(
            np.abs(part[:, None] / _QAM16_SCALE - _QAM16_LEVELS[None, :]), axis=1
        )
        out[:, 2 * axis:2 * axis + 2] = _LEVEL_BITS_LUT[idx]
    return out.reshape(-1)


def _stream_count(scheme: Scheme) -> int:
    return {Scheme.CONVENTIONAL: 1, Scheme.CSTC: 2, Scheme.MSTC: 4}[scheme]


def payload_unit_bits(cfg: SystemConfig) -> int:
    """Smallest payload size (bits) the scheme's framing accepts."""
    if cfg.scheme is Scheme.CONVENTIONAL:
        per = 4 if cfg.modulation is Modulation.QAM16 else 1
        return cfg.fft_size * per
    return _stream_count(cfg.scheme) * cfg.fft_size


def _require_bpsk(cfg: SystemConfig) -> None:
    if cfg.modulation is not Modulation.BPSK:
        raise ValueError(f"{cfg.scheme.value} framing carries BPSK payloads only")


def _encode_units(cfg: SystemConfig, bits: np.ndarray) -> np.ndarray:
    """STC-encode payload units; returns spectra of shape (2*units, fft_size)."""
    n = cfg.fft_size
    k = _stream_count(cfg.scheme)
    units = bits.reshape(-1, k, n)
    specs = []
    for unit in units:
        if cfg.scheme is Scheme.MSTC:
            chips = spreading.mstc_encode(*unit)
        else:
            chips = spreading.cstc_encode(*unit)
        specs.append(chips[:, 0])
        specs.append(chips[:, 1])
    return np.array(specs)


def transmit(payload, cfg: SystemConfig) -> WaveformFrame:
    """Full transmit chain: map/encode, inverse transform per symbol, CP."""
    bits = as_bits(payload)
    unit = payload_unit_bits(cfg)
    if bits.size == 0 or bits.size % unit:
        raise ValueError(
            f"payload length {bits.size} is not a positive multiple of {unit} "
            f"({cfg.scheme.value} framing unit)"
        )
    if cfg.scheme is Scheme.CONVENTIONAL:
        syms = map_symbols(bits, cfg.modulation)
        spectra = syms.reshape(-1, cfg.fft_size)
    else:
        _require_bpsk(cfg)
        spectra = _encode_units(cfg, bits)
    bodies = ifft_modulate(spectra, cfg.fft_size)
    with_cp = add_cp(bodies, cfg.cp_len)
    return WaveformFrame(
        samples=with_cp.reshape(-1),
        fft_size=cfg.fft_size,
        cp_len=cfg.cp_len,
        symbol_count=spectra.shape[0],
        sampling_rate_hz=cfg.sampling_rate_hz,
    )


def receive(frame: WaveformFrame, cfg: SystemConfig) -> np.ndarray:
    """Full receive chain; exact inverse of :func:`transmit` without noise."""
    if frame.fft_size != cfg.fft_size or frame.cp_len != cfg.cp_len:
        raise ValueError("frame dimensions do not match the configuration")
    spectra = fft_demodulate(frame.bodies(), cfg.fft_size)
    if cfg.scheme is Scheme.CONVENTIONAL:
        return demap_symbols(spectra.reshape(-1), cfg.modulation)
    _require_bpsk(cfg)
    if spectra.shape[0] % 2:
        raise ValueError("compressed frames must hold an even number of symbols")
    out = []
    for first, second in spectra.reshape(-1, 2, cfg.fft_size):
        chips = np.stack([first, second], axis=1)
        if cfg.scheme is Scheme.MSTC:
            out.extend(spreading.mste_decode(chips))
        else:
            out.extend(spreading.cstc_decode(chips))
    return np.concatenate(out).astype(np.int8)
