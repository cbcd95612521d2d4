"""Walsh/Hadamard codes and the symbol-time-compression codecs.

Two orthogonal length-2 Walsh codes carry two bit streams on the same pair
of chip epochs.  One spread-and-combine unit halves the symbol time; the
modified codec joins two such units on the real and imaginary axes, packing
four streams into one complex L-by-2 chip matrix.

Chip matrices are ``(L, 2)`` complex arrays; column j holds the chips of
epoch j.  The extension decoder reads columns in the same epoch order.
"""

from __future__ import annotations

import numpy as np

from .core import as_bits, bits_to_polar

# Rows of the order-2 Hadamard matrix.
WALSH_C0 = np.array([1, 1], dtype=np.int8)
WALSH_C1 = np.array([1, -1], dtype=np.int8)


def hadamard(order: int) -> np.ndarray:
    """Sylvester Hadamard matrix of the given power-of-two order."""
    if order < 1 or (order & (order - 1)) != 0:
        raise ValueError(f"Hadamard order must be a power of two, got {order}")
    h = np.array([[1]], dtype=np.int8)
    while h.shape[0] < order:
        h = np.block([[h, h], [h, -h]]).astype(np.int8)
    return h


def _check_chip_matrix(y) -> np.ndarray:
    arr = np.asarray(y)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"chip matrix must have shape (L, 2), got {arr.shape}")
    return arr.astype(complex, copy=False)


def _combine(b0: np.ndarray, b1: np.ndarray) -> np.ndarray:
    # Spreading by c0/c1 followed by per-epoch combining reduces to the
    # half-sum / half-difference columns.
    return 0.5 * np.stack([b0 + b1, b0 - b1], axis=1)


def mstc_encode(s0, s1, s2, s3) -> np.ndarray:
    """Compress four equal-length bit streams into an (L, 2) complex chip matrix."""
    blocks = [as_bits(s) for s in (s0, s1, s2, s3)]
    lengths = {b.size for b in blocks}
    if len(lengths) != 1:
        raise ValueError(f"input streams must have equal length, got {[b.size for b in blocks]}")
    b = [bits_to_polar(blk).astype(float) for blk in blocks]
    x1 = _combine(b[0], b[1])
    x2 = _combine(b[2], b[3])
    return x1 + 1j * x2


def _despread_unit(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise despreading of one real (L, 2) chip block with c0 and c1."""
    d0 = m @ WALSH_C0.astype(float)
    d1 = m @ WALSH_C1.astype(float)
    # Affine map then strict > 0.5 threshold; a tie decodes as bit 0.
    bit0 = ((d0 + 1.0) / 2.0 > 0.5).astype(np.int8)
    bit1 = ((d1 + 1.0) / 2.0 > 0.5).astype(np.int8)
    return bit0, bit1


def mste_decode(y) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Recover the four bit streams from a received (L, 2) chip matrix."""
    arr = _check_chip_matrix(y)
    b0, b1 = _despread_unit(arr.real)
    b2, b3 = _despread_unit(arr.imag)
    return b0, b1, b2, b3


def cstc_encode(s0, s1) -> np.ndarray:
    """Single-unit baseline: two streams on the real axis, imaginary part zero."""
    blocks = [as_bits(s) for s in (s0, s1)]
    if blocks[0].size != blocks[1].size:
        raise ValueError(f"input streams must have equal length, got {blocks[0].size} and {blocks[1].size}")
    b = [bits_to_polar(blk).astype(float) for blk in blocks]
    return _combine(b[0], b[1]) + 0j


def cstc_decode(y) -> tuple[np.ndarray, np.ndarray]:
    """Decode the single-unit baseline; the imaginary part is ignored."""
    arr = _check_chip_matrix(y)
    return _despread_unit(arr.real)
