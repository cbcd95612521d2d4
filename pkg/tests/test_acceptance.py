"""End-to-end acceptance checks for the headline claims of the simulator.

Each test covers one headline result and prints a single PASS/FAIL line so
the suite doubles as a reproduction report.  Seeds are pinned; every run
produces identical numbers.
"""

import itertools
import math
import sys
import time
from fractions import Fraction

import numpy as np
from scipy.special import erfcinv

from stcofdm import metrics, ofdm, spreading
from stcofdm.core import Modulation, Scheme, default_config, spawn_seeds
from stcofdm.metrics import (
    bpsk_ber_theory,
    complexity_counts,
    occupied_bandwidth_hz,
    papr_at_ccdf,
    papr_ccdf,
    psd_estimate,
    qam16_ber_theory,
    snr_at_target_ber,
)


REPORT_LINES: list[str] = []


def _report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    line = f"[acceptance] {status} {name}"
    if detail:
        line += f" ({detail})"
    REPORT_LINES.append(line)
    print(line, file=sys.__stdout__, flush=True)


def _check(name: str, ok: bool, detail: str = "") -> None:
    _report(name, ok, detail)
    assert ok, f"{name}: {detail}"


def test_noiseless_transparency():
    t0 = time.monotonic()
    ok = True
    for scheme in Scheme:
        cfg = default_config(scheme)
        rng = np.random.default_rng(100 + cfg.fft_size)
        payload = rng.integers(0, 2, 1000 * ofdm.payload_unit_bits(cfg), dtype=np.int8)
        decoded = ofdm.receive(ofdm.transmit(payload, cfg), cfg)
        ok = ok and np.array_equal(decoded, payload)
    elapsed = time.monotonic() - t0
    _check("noiseless transparency (3 schemes x 1000 payload units, exact)",
           ok and elapsed < 10.0, f"{elapsed:.2f} s")


def test_codec_identity():
    ok = True
    for bits in itertools.product((0, 1), repeat=4):
        decoded = spreading.mste_decode(spreading.mstc_encode(*[[b] for b in bits]))
        ok = ok and tuple(int(d[0]) for d in decoded) == bits
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        s = rng.integers(0, 2, (4, 64), dtype=np.int8)
        decoded = spreading.mste_decode(spreading.mstc_encode(*s))
        ok = ok and all(np.array_equal(a, b) for a, b in zip(s, decoded))
        if not ok:
            break
    _check("codec identity (16 exhaustive 4-tuples + 10^4 random length-64 blocks, exact)", ok)


def test_transform_accuracy():
    t0 = time.monotonic()
    worst_rt, worst_pv = 0.0, 0.0
    for n in [2 ** k for k in range(3, 11)]:
        rng = np.random.default_rng(n)
        spec = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = ofdm.ifft_modulate(spec, n)
        back = ofdm.fft_demodulate(x, n)
        worst_rt = max(worst_rt, float(np.max(np.abs(back - spec)) / np.max(np.abs(spec))))
        e_f = float(np.sum(np.abs(spec) ** 2))
        worst_pv = max(worst_pv, abs(float(np.sum(np.abs(x) ** 2)) - e_f) / e_f)
    elapsed = time.monotonic() - t0
    _check("transform accuracy (roundtrip <= 1e-12, energy conservation <= 1e-9, sizes 8..1024)",
           worst_rt <= 1e-12 and worst_pv <= 1e-9 and elapsed < 5.0,
           f"roundtrip {worst_rt:.2e}, energy {worst_pv:.2e}, {elapsed:.2f} s")


def test_bpsk_ber_equivalence():
    t0 = time.monotonic()
    grid = [0.0, 2.0, 4.0, 6.0, 8.0]
    min_bits = 200_000
    curves = {}
    for scheme, seed in zip(Scheme, spawn_seeds(42, 3)):
        cfg = default_config(scheme)
        curves[scheme] = metrics.ber_curve(cfg, grid, min_bits, 10 ** 9, seed)
    theory = bpsk_ber_theory(np.array(grid))
    se = np.sqrt(theory * (1 - theory) / min_bits)
    ok = True
    worst = 0.0
    for scheme, series in curves.items():
        dev = np.abs(series.y - theory) / se
        worst = max(worst, float(dev.max()))
        ok = ok and bool(np.all(dev <= 3.0))
    for a, b in itertools.combinations(Scheme, 2):
        dev = np.abs(curves[a].y - curves[b].y) / (np.sqrt(2.0) * se)
        worst = max(worst, float(dev.max()))
        ok = ok and bool(np.all(dev <= 3.0))
    elapsed = time.monotonic() - t0
    _check("BPSK BER equivalence (3 schemes vs closed form, within 3 MC standard errors)",
           ok and elapsed < 120.0, f"worst deviation {worst:.2f} SE, {elapsed:.1f} s")


def test_papr_reduction_targets():
    t0 = time.monotonic()
    vals = {}
    for scheme, seed in zip(Scheme, spawn_seeds(1, 3)):
        series = papr_ccdf(default_config(scheme), trials=10_000, seed=seed)
        vals[scheme] = papr_at_ccdf(series, 1e-3)
    d_mstc = vals[Scheme.CONVENTIONAL] - vals[Scheme.MSTC]
    d_cstc = vals[Scheme.CONVENTIONAL] - vals[Scheme.CSTC]
    targets = {Scheme.CONVENTIONAL: 12.17, Scheme.CSTC: 11.26, Scheme.MSTC: 10.08}
    ok = (
        abs(d_mstc - 2.09) <= 0.6
        and abs(d_cstc - 0.91) <= 0.4
        and all(abs(vals[s] - targets[s]) <= 1.5 for s in Scheme)
    )
    elapsed = time.monotonic() - t0
    detail = (
        f"measured {vals[Scheme.CONVENTIONAL]:.2f}/{vals[Scheme.CSTC]:.2f}/"
        f"{vals[Scheme.MSTC]:.2f} dB, reductions {d_mstc:.2f}/{d_cstc:.2f} dB, {elapsed:.1f} s"
    )
    _check("PAPR reduction targets at CCDF 1e-3 (2.09 +/- 0.6 dB and 0.91 +/- 0.4 dB)",
           ok and elapsed < 60.0, detail)


def test_papr_grows_with_transform_size():
    t0 = time.monotonic()
    sizes = [32, 64, 128, 256]
    readoffs = []
    for size, seed in zip(sizes, spawn_seeds(2, len(sizes))):
        cfg = default_config(Scheme.CONVENTIONAL).with_overrides(
            fft_size=size, cp_len=size // 4
        )
        series = papr_ccdf(cfg, trials=40_000, seed=seed)
        readoffs.append(papr_at_ccdf(series, 1e-2))
    ok = all(b > a for a, b in zip(readoffs, readoffs[1:]))
    elapsed = time.monotonic() - t0
    _check("PAPR at CCDF 1e-2 strictly increases over transform sizes 32/64/128/256",
           ok and elapsed < 60.0,
           "readoffs " + "/".join(f"{v:.2f}" for v in readoffs) + f" dB, {elapsed:.1f} s")


def test_occupied_bandwidths():
    t0 = time.monotonic()
    widths = {}
    for scheme, seed in zip(Scheme, spawn_seeds(3, 3)):
        frame = metrics.narrowband_reference_frame(scheme, n_symbols=2000, seed=seed)
        widths[scheme] = occupied_bandwidth_hz(psd_estimate(frame, 2048))
    targets = {Scheme.CONVENTIONAL: 180e3, Scheme.CSTC: 90e3, Scheme.MSTC: 45e3}
    ok = all(abs(widths[s] - targets[s]) / targets[s] <= 0.05 for s in Scheme)
    ref = widths[Scheme.CONVENTIONAL]
    ok = ok and abs(widths[Scheme.CSTC] / ref - 0.5) <= 0.01
    ok = ok and abs(widths[Scheme.MSTC] / ref - 0.25) <= 0.005
    elapsed = time.monotonic() - t0
    detail = (
        f"{widths[Scheme.CONVENTIONAL]/1e3:.1f}/{widths[Scheme.CSTC]/1e3:.1f}/"
        f"{widths[Scheme.MSTC]/1e3:.1f} kHz, {elapsed:.1f} s"
    )
    _check("occupied bandwidths 180/90/45 kHz within 5%, ratios 1:0.5:0.25 within 2%",
           ok and elapsed < 30.0, detail)


def test_symbol_durations_exact():
    fs = 1_920_000
    durs = {
        s: Fraction(default_config(s).symbol_len, fs) for s in Scheme
    }
    ok = (
        durs[Scheme.CONVENTIONAL] == Fraction(160, fs)
        and durs[Scheme.CSTC] == Fraction(80, fs)
        and durs[Scheme.MSTC] == Fraction(40, fs)
        and durs[Scheme.CSTC] / durs[Scheme.CONVENTIONAL] == Fraction(1, 2)
        and durs[Scheme.MSTC] / durs[Scheme.CONVENTIONAL] == Fraction(1, 4)
    )
    rounded = [round(float(durs[s]) * 1e6, 2) for s in Scheme]
    ok = ok and rounded == [83.33, 41.67, 20.83]
    _check("symbol durations exactly 83.33/41.67/20.83 us (50%/75% savings, exact rationals)",
           ok, "/".join(f"{v:.2f}" for v in rounded) + " us")


def test_complexity_table():
    expected = {
        Scheme.CONVENTIONAL: (1536, 2560),
        Scheme.CSTC: (640, 1088),
        Scheme.MSTC: (256, 448),
    }
    ok = True
    for scheme, (mults, adds) in expected.items():
        c = complexity_counts(scheme, 128)
        ok = ok and (c.multiplications, c.additions) == (mults, adds)
    # closed forms agree with a direct evaluation across the size sweep
    for n in [2 ** k for k in range(3, 11)]:
        log2n = int(math.log2(n))
        conv = complexity_counts(Scheme.CONVENTIONAL, n)
        ok = ok and conv.multiplications == 2 * n * log2n - 2 * n
        ok = ok and conv.additions == 3 * n * log2n - n
        cstc = complexity_counts(Scheme.CSTC, n)
        ok = ok and cstc.multiplications == n * int(math.log2(n // 2)) - n
        ok = ok and cstc.additions == 3 * n * int(math.log2(n // 2)) // 2 - n // 2
        mstc = complexity_counts(Scheme.MSTC, n)
        ok = ok and mstc.multiplications == (n // 2) * int(math.log2(n // 4)) - n // 2
        ok = ok and mstc.additions == 3 * n * int(math.log2(n // 4)) // 4 - n // 4
    _check("complexity table exact at N=128: (1536,2560)/(640,1088)/(256,448) + size sweep", ok)


def test_qam16_vs_mstc_gap():
    t0 = time.monotonic()
    min_bits = 400_000
    qam_cfg = default_config(Scheme.CONVENTIONAL, Modulation.QAM16)
    mstc_cfg = default_config(Scheme.MSTC)
    seeds = spawn_seeds(4, 2)
    qam = metrics.ber_curve(qam_cfg, [8.0, 9.0, 10.0, 11.0, 12.0], min_bits, 10 ** 9, seeds[0])
    mstc = metrics.ber_curve(mstc_cfg, [5.0, 6.0, 7.0, 8.0], min_bits, 10 ** 9, seeds[1])
    gap = snr_at_target_ber(qam, 1e-3) - snr_at_target_ber(mstc, 1e-3)
    # closed-form gap at the same BER
    bpsk_ref = 10.0 * math.log10(0.5 * (math.sqrt(2.0) * erfcinv(2e-3)) ** 2)
    fine = np.arange(8.0, 13.0, 0.001)
    qam_ref = float(fine[np.argmin(np.abs(qam16_ber_theory(fine) - 1e-3))])
    theory_gap = qam_ref - bpsk_ref
    ok = abs(gap - theory_gap) <= 0.75
    elapsed = time.monotonic() - t0
    _check("16-QAM vs compressed-BPSK Eb/N0 gap at BER 1e-3 matches closed form +/- 0.75 dB",
           ok, f"simulated {gap:.2f} dB, closed form {theory_gap:.2f} dB, {elapsed:.1f} s")
