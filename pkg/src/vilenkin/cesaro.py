"""Cesaro numbers and the summation means of a Vilenkin-Fourier series.

Sign convention: every function here takes the *actual* order of summation.
The (C, -a) means with a in (0, 1) are obtained with ``order=-a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import LengthMismatch, OrderOutOfRange, OutOfRange
from .transform import Spectrum, StepFunction, inverse


@dataclass(frozen=True, eq=False)
class CesaroTable:
    alpha: float
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    def __getitem__(self, j):
        return self.values[j]


def cesaro_numbers(alpha: float, n: int, *, strict: bool = True) -> CesaroTable:
    """A_0^alpha .. A_n^alpha by the product recurrence A_j = A_{j-1} (alpha + j) / j.

    With ``strict`` (the default) orders <= -1 are rejected since no summation
    mean exists there.  The identity checks and the Abel-transformed kernels
    need A^{alpha-1} below -1, which ``strict=False`` permits.
    """
    alpha = float(alpha)
    if strict and alpha <= -1:
        raise OrderOutOfRange(f"order {alpha} must exceed -1")
    if n < 0:
        raise OutOfRange("table length must be non-negative")
    values = _product_recurrence(alpha, n)
    values.setflags(write=False)
    return CesaroTable(alpha, values)


@njit(cache=True)
def _product_recurrence(alpha, n):
    out = np.empty(n + 1)
    out[0] = 1.0
    for j in range(1, n + 1):
        # multiply before dividing so integer orders stay exact
        out[j] = out[j - 1] * (alpha + j) / j
    return out


def _paired(table: CesaroTable, lower: CesaroTable) -> None:
    if table.values.shape != lower.values.shape:
        raise LengthMismatch(f"tables have lengths {table.n + 1} and {lower.n + 1}")
    if not math.isclose(lower.alpha, table.alpha - 1, abs_tol=1e-12):
        raise LengthMismatch(f"lower table has order {lower.alpha}, expected {table.alpha - 1}")


def check_identity_sum(table: CesaroTable, lower: CesaroTable) -> float:
    """max_n |A_n^a - sum_{k<=n} A_k^{a-1}| / |A_n^a|."""
    _paired(table, lower)
    resid = np.abs(table.values - np.cumsum(lower.values)) / np.abs(table.values)
    return float(resid.max())


def check_identity_diff(table: CesaroTable, lower: CesaroTable) -> float:
    """max_n |A_n^a - A_{n-1}^a - A_n^{a-1}| / |A_n^a| over 1 <= n."""
    _paired(table, lower)
    if table.n == 0:
        return abs(table.values[0] - lower.values[0]) / abs(table.values[0])
    a = table.values
    resid = np.abs(a[1:] - a[:-1] - lower.values[1:]) / np.abs(a[1:])
    return float(resid.max())


def asymptotic_ratio(alpha: float, n: int) -> float:
    """A_n^alpha * Gamma(alpha + 1) / n^alpha, which tends to 1."""
    if n < 1:
        raise OutOfRange("n must be at least 1")
    a_n = cesaro_numbers(alpha, n).values[-1]
    return float(a_n * math.gamma(alpha + 1) / n**alpha)


# -- means ---------------------------------------------------------------------

def _synth(spec: Spectrum, weights: np.ndarray) -> StepFunction:
    return inverse(Spectrum(spec.structure, spec.coeffs * weights))


def partial_sum(spec: Spectrum, n: int) -> StepFunction:
    """S_n f = sum_{k<n} f^(k) psi_k; S_0 f = 0."""
    M = spec.structure.size
    if not 0 <= n <= M:
        raise OutOfRange(f"partial sum index {n} not in [0, {M}]")
    weights = np.zeros(M)
    weights[:n] = 1.0
    return _synth(spec, weights)


def fejer_weights(n: int, size: int) -> np.ndarray:
    w = np.zeros(size)
    k = np.arange(n + 1)
    w[: n + 1] = 1.0 - k / (n + 1)
    return w


def fejer_mean(spec: Spectrum, n: int) -> StepFunction:
    """sigma_n f = sum_{k<=n} (1 - k/(n+1)) f^(k) psi_k, the mean of S_1 .. S_{n+1}."""
    M = spec.structure.size
    if not 1 <= n <= M - 1:
        raise OutOfRange(f"Fejer index {n} not in [1, {M - 1}]")
    return _synth(spec, fejer_weights(n, M))


def cesaro_weights(n: int, order: float, size: int, table: CesaroTable | None = None) -> np.ndarray:
    """Coefficient multipliers A_{n-k}^order / A_n^order for k <= n, zero beyond."""
    if table is None:
        table = cesaro_numbers(order, n)
    elif table.n < n or table.alpha != order:
        raise LengthMismatch("supplied table does not cover this order and n")
    w = np.zeros(size)
    w[: n + 1] = table.values[n::-1] / table.values[n]
    return w


def cesaro_mean(spec: Spectrum, n: int, order: float) -> StepFunction:
    """sigma_n^order f = (1/A_n) sum_{k<=n} A_{n-k} f^(k) psi_k.

    For the negative-order means with parameter a in (0, 1) pass ``order=-a``.
    """
    if order <= -1:
        raise OrderOutOfRange(f"order {order} must exceed -1")
    M = spec.structure.size
    if not 0 <= n <= M - 1:
        raise OutOfRange(f"mean index {n} not in [0, {M - 1}]")
    return _synth(spec, cesaro_weights(n, order, M))
