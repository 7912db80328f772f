"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also collected into the "acceptance criteria" section of
the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from vilenkin.approximation import convergence_table, gen_lacunary, modulus_profiles
from vilenkin.checks import (
    CESARO_ORDERS,
    asymptotic_excess,
    cesaro_identity_residuals,
    dirichlet_identity,
    modulation,
    oracle_gap,
    orthonormality,
    parseval,
    round_trip,
    zero_identity_sweep,
)
from vilenkin.group import parse_radices
from vilenkin.kernels import lemma1_ratio, profile_for18
from vilenkin.transform import DEFAULT_ORACLE_CAP, StepFunction

from conftest import record

EXACT_SEQUENCES = ["2^12", "3^8", "(2,3)^6", "2,3,4,5,2,3"]
ORTHO_SAMPLE = 512  # sampled indices when M_N exceeds 6561
PAIRS = [(0.25, 0.5), (0.5, 0.9), (0.25, 0.9)]
PS = [1.0, 2.0, math.inf]


def verdict(ok: bool, label: str, detail: str) -> bool:
    record(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
    return ok


def exact_suite(radices: str, seed: int) -> dict:
    s = parse_radices(radices)
    rng = np.random.default_rng(seed)
    f = StepFunction(s, rng.standard_normal(s.size) + 1j * rng.standard_normal(s.size))
    if s.size <= 6561:
        idx = None
    else:
        idx = np.unique(np.r_[0, s.size - 1, rng.integers(0, s.size, ORTHO_SAMPLE)])
    return {
        "dirichlet": dirichlet_identity(s),
        "orthonormality": orthonormality(s, idx),
        "round_trip": round_trip(f),
        "parseval": parseval(f),
        "modulation": max(modulation(f, int(h)) for h in rng.integers(0, s.size, 4)),
    }


def converge_suite(radices: str) -> tuple[float, bool, list[str]]:
    """Worst ratio spread, whether every error sequence decreases, and one note per run."""
    s = parse_radices(radices)
    ks = range(3, s.level)
    worst, decreasing, notes = 0.0, True, []
    for beta in sorted({b for _, b in PAIRS}):
        f = gen_lacunary(beta, s)
        profiles = modulus_profiles(f, PS)
        for alpha in [a for a, b in PAIRS if b == beta]:
            for p in PS:
                rows = convergence_table(f, alpha, p, ks, "mk", profile=profiles[p])
                ratios = [r.ratio for r in rows]
                spread = max(ratios) / min(ratios)
                errors = [r.error for r in rows if r.k >= 4]
                dec = all(b < a for a, b in zip(errors, errors[1:]))
                worst = max(worst, spread)
                decreasing &= dec
                notes.append(f"a={alpha} b={beta} p={p:g} spread={spread:.2f} dec={dec}")
    return worst, decreasing, notes


def test_criterion_1_exact_identities():
    t0 = time.perf_counter()
    worst = {}
    for i, radices in enumerate(EXACT_SEQUENCES):
        for name, value in exact_suite(radices, 100 + i).items():
            worst[name] = max(worst.get(name, 0.0), value)
    elapsed = time.perf_counter() - t0
    resid = max(worst.values())
    ok = resid <= 1e-10 and elapsed < 30
    parts = " ".join(f"{k}={v:.1e}" for k, v in worst.items())
    assert verdict(ok, "1 exact identities", f"{parts} (tol 1e-10), {elapsed:.1f}s (limit 30s)")


def test_criterion_2_oracle_equivalence():
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for radices in EXACT_SEQUENCES:
        s = parse_radices(radices)
        if s.size > DEFAULT_ORACLE_CAP:
            continue
        rng = np.random.default_rng(s.size)
        for _ in range(5):
            f = StepFunction(s, rng.standard_normal(s.size) + 1j * rng.standard_normal(s.size))
            worst = max(worst, oracle_gap(f))
            count += 1
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 60
    assert verdict(ok, "2 fast = naive", f"{count} functions, max gap {worst:.1e} (tol 1e-10), "
                                        f"{elapsed:.1f}s (limit 60s)")


def test_criterion_3_cesaro_identities():
    t0 = time.perf_counter()
    n = 10_000
    sums, diffs, excess = [], [], []
    for order in CESARO_ORDERS:
        a, b = cesaro_identity_residuals(order, n)
        sums.append(a)
        diffs.append(b)
        excess.append(asymptotic_excess(order, n))
    elapsed = time.perf_counter() - t0
    ok = max(sums) <= 1e-12 and max(diffs) <= 1e-12 and max(excess) <= 1e-6 and elapsed < 5
    assert verdict(ok, "3 cesaro identities",
                   f"sum {max(sums):.1e}, diff {max(diffs):.1e} (tol 1e-12), "
                   f"asymptotic excess {max(excess):.1e} (tol 1e-6), {elapsed:.2f}s (limit 5s)")


def _zero_identities(radices: str, label: str):
    t0 = time.perf_counter()
    i12, ii2 = zero_identity_sweep(parse_radices(radices), 20, seed=2024)
    elapsed = time.perf_counter() - t0
    ok = max(i12, ii2) <= 1e-10 and elapsed < 60
    assert verdict(ok, label, f"m=({radices}) I_12 {i12:.1e}, II_2 {ii2:.1e} (tol 1e-10), "
                              f"{elapsed:.1f}s (limit 60s)")


def test_criterion_4_zero_identities():
    _zero_identities("2,3,2,3", "4 zero identities")


def test_criterion_5_dirichlet_average_flatness():
    s = parse_radices("2^12")
    rng = np.random.default_rng(5)
    ns = [16, 64, 256, 1024]
    maxima = [max(lemma1_ratio(s, rng.standard_normal(n)) for _ in range(100)) for n in ns]
    slope = float(np.polyfit(np.log(ns), np.log(maxima), 1)[0])
    detail = ", ".join(f"n={n}: {m:.3f}" for n, m in zip(ns, maxima))
    assert verdict(slope <= 0.05, "5 dirichlet-average flatness", f"slope {slope:.3f} (limit 0.05); {detail}")


def test_criterion_6_kernel_bounds():
    t0 = time.perf_counter()
    s = parse_radices("2^13")
    worst_ratio = worst_l1 = 0.0
    for alpha in (0.25, 0.5, 0.75):
        profiles = [profile_for18(s, k, s.cumulative[k], alpha) for k in range(4, 13)]
        ratios = [p.max_ratio for p in profiles]
        l1 = [p.l1_norm for p in profiles]
        worst_ratio = max(worst_ratio, max(ratios) / min(ratios))
        worst_l1 = max(worst_l1, max(l1) / min(l1))
    elapsed = time.perf_counter() - t0
    ok = worst_ratio <= 4 and worst_l1 <= 4 and elapsed < 120
    assert verdict(ok, "6 kernel bounds", f"shell ratio spread {worst_ratio:.2f}, l1 spread "
                                          f"{worst_l1:.2f} (limit 4), {elapsed:.1f}s (limit 120s)")


def test_criterion_7_error_bound_ratios():
    t0 = time.perf_counter()
    worst, decreasing, notes = converge_suite("2^13")
    elapsed = time.perf_counter() - t0
    ok = worst <= 10 and decreasing and elapsed < 120
    for note in notes:
        print("   ", note)
    assert verdict(ok, "7 error/bound ratios", f"worst max/min {worst:.2f} (limit 10), errors "
                                           f"decreasing: {decreasing}, {elapsed:.1f}s (limit 120s)")


def test_criterion_8_mixed_radix():
    radices = "(2,3)^6"
    t0 = time.perf_counter()
    resid = max(exact_suite(radices, 808).values())
    i12, ii2 = zero_identity_sweep(parse_radices(radices), 20, seed=2024)
    worst, decreasing, notes = converge_suite(radices)
    elapsed = time.perf_counter() - t0
    for note in notes:
        print("   ", note)
    ok = resid <= 1e-10 and max(i12, ii2) <= 1e-10 and worst <= 10 and decreasing
    assert verdict(ok, "8 mixed radix (2,3)^6",
                   f"exact {resid:.1e}, zero identities {max(i12, ii2):.1e} (tol 1e-10), ratio "
                   f"max/min {worst:.2f} (limit 10), errors decreasing: {decreasing}, "
                   f"{elapsed:.1f}s")
