"""Residual checks shared by the ``selftest`` command and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .approximation import gen_random
from .cesaro import asymptotic_ratio, cesaro_numbers, check_identity_diff, check_identity_sum
from .group import RadixStructure, point_from_label
from .kernels import dirichlet_kernel, zero_identity_I12, zero_identity_II2
from .transform import (
    DEFAULT_ORACLE_CAP,
    Spectrum,
    StepFunction,
    character_rows,
    forward,
    forward_naive,
    forward_rows,
    inverse,
    translate,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return self.skipped or self.residual <= self.tolerance

    def line(self) -> str:
        if self.skipped:
            return f"SKIP  {self.name}"
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<40s} residual={self.residual:.3e}  tol={self.tolerance:.0e}"


def dirichlet_identity(s: RadixStructure) -> float:
    """max over r and grid points of |D_{M_r} - M_r 1_{I_r}|."""
    worst = 0.0
    M = s.size
    for r in range(s.level + 1):
        Mr = s.cumulative[r]
        expected = np.zeros(M)
        expected[: M // Mr] = Mr
        worst = max(worst, float(np.max(np.abs(dirichlet_kernel(s, Mr).values - expected))))
    return worst


def orthonormality(s: RadixStructure, indices=None) -> float:
    """max |forward(psi_j) - e_j| over the given indices (all of them by default)."""
    indices = np.arange(s.size) if indices is None else np.asarray(indices, dtype=np.int64)
    worst = 0.0
    block = max(1, 2_000_000 // s.size)
    for start in range(0, indices.shape[0], block):
        js = indices[start:start + block]
        coeffs = forward_rows(s, character_rows(s, js))
        coeffs[np.arange(js.shape[0]), js] -= 1.0
        worst = max(worst, float(np.max(np.abs(coeffs))))
    return worst


def round_trip(f: StepFunction) -> float:
    return float(np.max(np.abs(inverse(forward(f)).values - f.values)))


def parseval(f: StepFunction) -> float:
    lhs = float(np.sum(np.abs(forward(f).coeffs) ** 2))
    rhs = float(np.mean(np.abs(f.values) ** 2))
    return abs(lhs - rhs) / rhs


def modulation(f: StepFunction, h_label: int) -> float:
    """max_k |(f(. + h))^(k) - psi_k(h) f^(k)|."""
    s = f.structure
    h = point_from_label(s, h_label)
    lhs = forward(translate(f, h)).coeffs
    chars = _characters_at(s, h_label)
    return float(np.max(np.abs(lhs - chars * forward(f).coeffs)))


def _characters_at(s: RadixStructure, label: int) -> np.ndarray:
    """psi_k(x) for every k < M_N at the grid point with the given label."""
    x = s.point_digit_table[label]
    phase = (s.index_digit_table * x[None, :]) / np.array(s.radices)[None, :]
    frac = np.mod(phase.sum(axis=1), 1.0)
    return np.exp(2j * np.pi * frac)


def oracle_gap(f: StepFunction, cap: int = DEFAULT_ORACLE_CAP) -> float:
    return float(np.max(np.abs(forward(f).coeffs - forward_naive(f, cap).coeffs)))


def cesaro_identity_residuals(order: float, n: int) -> tuple[float, float]:
    table = cesaro_numbers(order, n, strict=False)
    lower = cesaro_numbers(order - 1, n, strict=False)
    return check_identity_sum(table, lower), check_identity_diff(table, lower)


def asymptotic_excess(order: float, n: int) -> float:
    """|ratio - 1| minus the allowed |a(a+1)|/n; non-positive when the check passes."""
    return abs(asymptotic_ratio(order, n) - 1) - abs(order * (order + 1)) / n


def zero_identity_sweep(s: RadixStructure, count: int, seed: int = 0) -> tuple[float, float]:
    """Worst I_12 and II_2 residuals over seeded (f, k, n, alpha) draws."""
    rng = np.random.default_rng(seed)
    worst_i12 = worst_ii2 = 0.0
    cum = s.cumulative
    for _ in range(count):
        f = gen_random(int(rng.integers(2**31)), s.level, s)
        alpha = float(rng.uniform(0.05, 0.95))
        # I_12 needs k >= 2 so that some r <= k - 2 exists
        k = int(rng.integers(2, s.level))
        n = int(rng.integers(cum[k], cum[k + 1]))
        r = int(rng.integers(0, k - 1))
        worst_i12 = max(worst_i12, zero_identity_I12(f, r, n, alpha))
        k2 = int(rng.integers(1, s.level))
        n2 = int(rng.integers(cum[k2], cum[k2 + 1]))
        worst_ii2 = max(worst_ii2, zero_identity_II2(f, k2, n2, alpha))
    return worst_i12, worst_ii2


CESARO_ORDERS = (-0.75, -0.5, -0.25, 0.25, 0.5, 1.0)


def run_selftest(s: RadixStructure, seed: int = 0) -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(seed)
    f = StepFunction(s, rng.standard_normal(s.size) + 1j * rng.standard_normal(s.size))

    results.append(CheckResult("dirichlet D_{M_r} = M_r 1_{I_r}", dirichlet_identity(s), 1e-10))
    if s.size <= 4096:
        idx = None
    else:
        idx = sorted(set(rng.integers(0, s.size, 64).tolist()) | {0, s.size - 1})
    results.append(CheckResult("orthonormality forward(psi_j) = e_j", orthonormality(s, idx), 1e-10))
    results.append(CheckResult("round trip inverse(forward(f)) = f", round_trip(f), 1e-10))
    results.append(CheckResult("parseval", parseval(f), 1e-10))
    results.append(CheckResult("modulation", modulation(f, int(rng.integers(s.size))), 1e-10))
    if s.size <= DEFAULT_ORACLE_CAP:
        results.append(CheckResult("fast = naive transform", oracle_gap(f), 1e-10))
    else:
        results.append(CheckResult("fast = naive transform", math.nan, 1e-10, skipped=True))

    sums, diffs, asym = [], [], []
    for order in CESARO_ORDERS:
        a, b = cesaro_identity_residuals(order, 10_000)
        sums.append(a)
        diffs.append(b)
        asym.append(asymptotic_excess(order, 10_000))
    results.append(CheckResult("cesaro A_n = sum A_k^{a-1}", max(sums), 1e-12))
    results.append(CheckResult("cesaro A_n - A_{n-1} = A_n^{a-1}", max(diffs), 1e-12))
    results.append(CheckResult("cesaro asymptotic A_n ~ n^a/Gamma(a+1)", max(0.0, max(asym)), 1e-6))

    # the sweep integrates on grids up to level N - 1
    if s.level >= 3 and s.cumulative[s.level - 1] <= DEFAULT_ORACLE_CAP:
        i12, ii2 = zero_identity_sweep(s, 20, seed)
        results.append(CheckResult("zero identity I_12", i12, 1e-10))
        results.append(CheckResult("zero identity II_2", ii2, 1e-10))
    else:
        results.append(CheckResult("zero identity I_12", math.nan, 1e-10, skipped=True))
        results.append(CheckResult("zero identity II_2", math.nan, 1e-10, skipped=True))
    return results
