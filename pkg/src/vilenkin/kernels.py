"""Dirichlet, Fejer and Cesaro tail kernels, and numeric checks of kernel facts.

Inequalities are never checked against a numeric constant here; the
functions return measured quantities (shell maxima, ratios, residuals) and
the callers decide what flatness means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .cesaro import cesaro_numbers, partial_sum
from .errors import LevelOutOfRange, OracleCapExceeded, OutOfRange, StructureMismatch, ZeroVector
from .group import RadixStructure, addition_tables, negated_labels
from .transform import DEFAULT_ORACLE_CAP, StepFunction, forward, synthesize


def dirichlet_kernel(structure: RadixStructure, n: int) -> StepFunction:
    """D_n = sum_{k<n} psi_k."""
    M = structure.size
    if not 1 <= n <= M:
        raise OutOfRange(f"D_{n} needs 1 <= n <= {M}")
    c = np.zeros(M)
    c[:n] = 1.0
    return synthesize(structure, c)


def fejer_kernel(structure: RadixStructure, n: int) -> StepFunction:
    """K_n = (1/n) sum_{k=1}^n D_k = sum_{j<n} (1 - j/n) psi_j."""
    M = structure.size
    if not 1 <= n <= M:
        raise OutOfRange(f"K_{n} needs 1 <= n <= {M}")
    c = np.zeros(M)
    c[:n] = (n - np.arange(n)) / n
    return synthesize(structure, c)


def tail_coefficients(n: int, lo: int, hi: int, alpha: float) -> np.ndarray:
    """A_{n-v}^{-alpha} for v = lo .. hi."""
    if not 0 <= lo <= hi < n:
        raise OutOfRange(f"need 0 <= lo <= hi < n, got lo={lo} hi={hi} n={n}")
    table = cesaro_numbers(-alpha, n - lo)
    return table.values[n - np.arange(lo, hi + 1)]


def tail_kernel(structure: RadixStructure, n: int, lo: int, hi: int, alpha: float) -> StepFunction:
    """sum_{v=lo}^{hi} A_{n-v}^{-alpha} psi_v on the grid."""
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha {alpha} not in (0, 1)")
    if hi >= structure.size:
        raise OutOfRange(f"hi = {hi} needs a grid with M_N > {hi}")
    c = np.zeros(structure.size)
    c[lo: hi + 1] = tail_coefficients(n, lo, hi, alpha)
    return synthesize(structure, c)


# -- shell profile ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KernelProfile:
    k: int
    n: int
    alpha: float
    shells: np.ndarray          # A = 1 .. k-1
    M_A: np.ndarray
    shell_max: np.ndarray       # max |kernel| over I_{A-1} \ I_A
    shell_points: np.ndarray    # number of level-k points in each shell
    core_max: float             # max |kernel| over I_{k-1}
    l1_norm: float

    @property
    def normalizer(self) -> np.ndarray:
        """M_A^{1-alpha} for every shell."""
        return self.M_A ** (1.0 - self.alpha)

    @property
    def ratio(self) -> np.ndarray:
        return self.shell_max / self.normalizer

    @property
    def max_ratio(self) -> float:
        return float(self.ratio.max())


def _level_of(structure: RadixStructure, n: int) -> int:
    """k with M_k <= n < M_{k+1}."""
    cum = structure.cumulative
    for k in range(structure.level):
        if cum[k] <= n < cum[k + 1]:
            return k
    raise OutOfRange(f"n = {n} is not below M_N = {structure.size}")


def profile_for18(structure: RadixStructure, k: int, n: int, alpha: float,
                  cap: int = DEFAULT_ORACLE_CAP) -> KernelProfile:
    """Shell maxima of |sum_{v=M_{k-1}}^{M_k - 1} A_{n-v}^{-alpha} psi_v|.

    The kernel only involves psi_v with v < M_k, so it lives on the level-k
    grid.  ``n`` may exceed M_N as long as k <= N.
    """
    if k < 2 or k > structure.level:
        raise LevelOutOfRange(f"shell decomposition needs 2 <= k <= {structure.level}, got {k}")
    Mk = structure.cumulative[k]
    if k < structure.level:
        upper = structure.cumulative[k + 1]
        if not Mk <= n < upper:
            raise OutOfRange(f"n = {n} not in [M_k, M_{{k+1}}) = [{Mk}, {upper})")
    elif n < Mk:
        raise OutOfRange(f"n = {n} below M_k = {Mk}")
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha {alpha} not in (0, 1)")
    lo = structure.cumulative[k - 1]
    coeffs = np.zeros(Mk)
    coeffs[lo:] = tail_coefficients(n, lo, Mk - 1, alpha)
    if Mk <= cap:
        shells, core = _shells_materialized(structure.truncate(k), coeffs)
    else:
        shells, core = _shells_folded(structure.truncate(k), coeffs)
    shell_max = np.array([s.max() for s in shells])
    counts = np.array([s.shape[0] for s in shells])
    # every level-k point has measure 1/M_k; pairwise sums keep the reduction order fixed
    l1 = (sum(float(np.sum(s)) for s in shells) + float(np.sum(core))) / Mk
    M_A = np.array(structure.cumulative[1:k], dtype=np.float64)
    return KernelProfile(k, n, alpha, np.arange(1, k), M_A, shell_max, counts,
                         float(core.max()), l1)


def _shells_materialized(sk: RadixStructure, coeffs: np.ndarray):
    mag = np.abs(synthesize(sk, coeffs).values)
    M = sk.size
    cum = sk.cumulative
    # shell A is the label range [M/M_A, M/M_{A-1})
    shells = [mag[M // cum[A]: M // cum[A - 1]] for A in range(1, sk.level)]
    core = mag[: M // cum[sk.level - 1]]
    return shells, core


def _shells_folded(sk: RadixStructure, coeffs: np.ndarray):
    """Same as the materialized split, one shell at a time.

    On I_{A-1} only the digits from position A-1 on vary, so psi_v there
    depends on v // M_{A-1} alone; summing the coefficients over the lower
    digits gives a kernel on the radices m_{A-1} .. m_{k-1}.
    """
    shells = []
    for A in range(1, sk.level + 1):
        step = sk.cumulative[A - 1]
        folded = coeffs.reshape(-1, step).sum(axis=1)
        mag = np.abs(synthesize(sk.tail(A - 1), folded).values)
        if A == sk.level:
            core = mag
        else:
            shells.append(mag[mag.shape[0] // sk.radices[A - 1]:])
    return shells, core


# -- Dirichlet-average probe -------------------------------------------------------

def lemma1_ratio(structure: RadixStructure, coeffs) -> float:
    """[(1/n) int |sum_k a_k D_k|] / [(1/sqrt n) (sum a_k^2)^(1/2)] for real a_1..a_n."""
    a = np.asarray(coeffs, dtype=np.float64)
    n = a.shape[0]
    if n < 1 or n > structure.size:
        raise OutOfRange(f"need 1 <= n <= {structure.size}, got {n}")
    norm = math.sqrt(float(np.sum(a * a)))
    if norm == 0.0:
        raise ZeroVector("all coefficients are zero")
    level = next(L for L in range(1, structure.level + 1) if structure.cumulative[L] >= n)
    sk = structure.truncate(level)
    # sum_{k=1}^n a_k D_k = sum_{j<n} (a_{j+1} + ... + a_n) psi_j
    c = np.zeros(sk.size)
    c[:n] = np.cumsum(a[::-1])[::-1]
    lhs = float(np.mean(np.abs(synthesize(sk, c).values))) / n
    return lhs / (norm / math.sqrt(n))


# -- group convolution and the zero identities -------------------------------------

@njit(cache=True)
def _shifted_sums(a, b, shifts, hi, lo):
    """out[x] = sum_u a[u] b[x + shifts[u]], the group sum taken through the split tables."""
    L = lo.shape[1]
    M = a.shape[0]
    out = np.zeros(M, dtype=np.complex128)
    for u in range(M):
        w = a[u]
        if w == 0:
            continue
        sh, sl = shifts[u] // L, shifts[u] % L
        for x in range(M):
            out[x] += w * b[hi[sh, x // L] * L + lo[sl, x % L]]
    return out


def _check_cap(structure: RadixStructure, cap: int) -> None:
    if structure.size > cap:
        raise OracleCapExceeded(f"M_N = {structure.size} exceeds the direct-integration cap {cap}")


def correlate(kernel: StepFunction, g: StepFunction, cap: int = DEFAULT_ORACLE_CAP) -> StepFunction:
    """x -> int kernel(u) g(x + u) dmu(u), by direct summation over the grid."""
    s = kernel.structure
    if g.structure != s:
        raise StructureMismatch("kernel and function live on different structures")
    _check_cap(s, cap)
    _, hi, lo = addition_tables(s)
    shifts = np.arange(s.size, dtype=np.int64)
    return StepFunction(s, _shifted_sums(kernel.values, g.values, shifts, hi, lo) / s.size)


def convolve(f: StepFunction, kernel: StepFunction, cap: int = DEFAULT_ORACLE_CAP) -> StepFunction:
    """x -> int f(t) kernel(x - t) dmu(t), by direct summation over the grid."""
    s = f.structure
    if kernel.structure != s:
        raise StructureMismatch("kernel and function live on different structures")
    _check_cap(s, cap)
    _, hi, lo = addition_tables(s)
    neg_t = negated_labels(s)
    return StepFunction(s, _shifted_sums(f.values, kernel.values, neg_t, hi, lo) / s.size)


def _restrict(f: StepFunction, level: int) -> StepFunction:
    """A function measurable at ``level`` seen on the level grid (one value per coset)."""
    s = f.structure.truncate(level)
    return StepFunction(s, f.values.reshape(s.size, -1)[:, 0])


def zero_identity_I12(f: StepFunction, r: int, n: int, alpha: float,
                      cap: int = DEFAULT_ORACLE_CAP) -> float:
    """max_x |int sum_{v=M_r}^{M_{r+1}-1} A_{n-v-1}^{-alpha-1} D_v(u) [S_{M_r}f(x+u) - S_{M_r}f(x)] du|.

    Both factors are measurable at level r + 1, so the integral is an exact
    average over that grid.
    """
    s = f.structure
    k = _level_of(s, n)
    if not 0 <= r <= k - 2:
        raise OutOfRange(f"r = {r} must satisfy 0 <= r <= k - 2 = {k - 2}")
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha {alpha} not in (0, 1)")
    lo, hi = s.cumulative[r], s.cumulative[r + 1]
    A = cesaro_numbers(-alpha - 1, n, strict=False).values
    weights = A[n - np.arange(lo, hi) - 1]
    # sum_v w_v D_v has coefficient sum_{v > j} w_v at psi_j
    tail = np.cumsum(weights[::-1])[::-1]
    c = np.zeros(hi)
    c[:lo] = tail[0]
    c[lo:hi] = np.append(tail[1:], 0.0)
    kernel = synthesize(s.truncate(r + 1), c)
    g = _restrict(partial_sum(forward(f), lo), r + 1)
    integral = correlate(kernel, g, cap).values - g.values * np.mean(kernel.values)
    return float(np.max(np.abs(integral)))


def zero_identity_II2(f: StepFunction, k: int, n: int, alpha: float,
                      cap: int = DEFAULT_ORACLE_CAP) -> float:
    """max_x |int sum_{v=M_{k-1}}^{M_k-1} A_{n-v}^{-alpha} psi_v(u) S_{M_{k-1}}f(x+u) du|, on the level-k grid."""
    s = f.structure
    if k < 1 or _level_of(s, n) != k:
        raise OutOfRange(f"need k >= 1 and M_k <= n < M_{{k+1}}, got k={k}, n={n}")
    sk = s.truncate(k)
    kernel = tail_kernel(sk, n, s.cumulative[k - 1], s.cumulative[k] - 1, alpha)
    g = _restrict(partial_sum(forward(f), s.cumulative[k - 1]), k)
    return float(np.max(np.abs(correlate(kernel, g, cap).values)))
