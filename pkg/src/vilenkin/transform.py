"""Vilenkin characters and the Vilenkin-Fourier transform on level-N grids.

The fast transform factorises the character matrix digit by digit: the
character psi_n(x) = prod_k exp(2 pi i n_k x_k / m_k) is separable, so the
transform is N passes, pass k applying an m_k-point DFT along digit axis k
of the grid viewed as an ``(m_0, ..., m_{N-1})`` array.  Work is
M_N * sum_k m_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import LevelOutOfRange, OracleCapExceeded, OutOfRange, StructureMismatch
from .group import GroupPoint, MixedRadixIndex, RadixStructure, index_digits

DEFAULT_ORACLE_CAP = 20736


def _check_values(structure: RadixStructure, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] != structure.size:
        raise OutOfRange(f"{what} needs {structure.size} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise OutOfRange(f"{what} contains NaN or Inf")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A function constant on the cosets of I_N; ``values[j]`` sits on the coset labelled j."""

    structure: RadixStructure
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.structure, self.values, "StepFunction"))

    def grid(self) -> np.ndarray:
        """Values as an array indexed by the digits ``[x_0, ..., x_{N-1}]``."""
        return self.values.reshape(self.structure.shape)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        _same(self.structure, other.structure)
        return StepFunction(self.structure, self.values + other.values)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        _same(self.structure, other.structure)
        return StepFunction(self.structure, self.values - other.values)

    def __mul__(self, scalar) -> "StepFunction":
        return StepFunction(self.structure, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Vilenkin-Fourier coefficients, ``coeffs[n]`` for natural n < M_N."""

    structure: RadixStructure
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _check_values(self.structure, self.coeffs, "Spectrum"))

    def __add__(self, other: "Spectrum") -> "Spectrum":
        _same(self.structure, other.structure)
        return Spectrum(self.structure, self.coeffs + other.coeffs)

    def __mul__(self, scalar) -> "Spectrum":
        return Spectrum(self.structure, self.coeffs * scalar)

    __rmul__ = __mul__


def _same(a: RadixStructure, b: RadixStructure) -> None:
    if a != b:
        raise StructureMismatch(f"structures differ: {a} vs {b}")


def constant(structure: RadixStructure, c: complex = 1.0) -> StepFunction:
    return StepFunction(structure, np.full(structure.size, c, dtype=np.complex128))


def unit_spectrum(structure: RadixStructure, j: int) -> Spectrum:
    if not 0 <= j < structure.size:
        raise OutOfRange(f"index {j} not in [0, {structure.size})")
    c = np.zeros(structure.size, dtype=np.complex128)
    c[j] = 1.0
    return Spectrum(structure, c)


# -- characters ---------------------------------------------------------------

def rademacher(k: int, x: GroupPoint) -> complex:
    s = x.structure
    if not 0 <= k < s.level:
        raise LevelOutOfRange(f"r_{k} undefined at level {s.level}")
    return _unit_root(Fraction(x.digits[k], s.radices[k]))


def vilenkin_char(n: MixedRadixIndex | int, x: GroupPoint) -> complex:
    s = x.structure
    if isinstance(n, int):
        n = index_digits(n, s)
    elif not 0 <= n.value < s.size:
        raise OutOfRange(f"index {n.value} not in [0, {s.size})")
    # product of r_k^{n_k}, with the phases added exactly before exponentiating
    phase = sum((Fraction(nk * xk, m) for nk, xk, m in zip(n.digits, x.digits, s.radices)),
                Fraction(0))
    return _unit_root(phase)


_QUARTER_TURNS = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j,
                  Fraction(3, 4): -1j}


def _unit_root(phase: Fraction) -> complex:
    phase = phase - math.floor(phase)
    exact = _QUARTER_TURNS.get(phase)
    if exact is not None:
        return exact
    angle = 2 * math.pi * float(phase)
    return complex(math.cos(angle), math.sin(angle))


def _phase_numerators(structure: RadixStructure, ns: np.ndarray) -> tuple[np.ndarray, int]:
    """Integer phases of psi_n at every grid point over the common denominator lcm(m)."""
    L = math.lcm(*structure.radices)
    radices = np.array(structure.radices, dtype=np.int64)
    n_digits = (ns[:, None] // np.array(structure.cumulative[:-1], dtype=np.int64)[None, :]) \
        % radices[None, :]
    # every partial sum stays below N * L * max(m), far inside int32
    x_scaled = (structure.point_digit_table * (L // radices)[None, :]).astype(np.int32)
    n_digits = n_digits.astype(np.int32)
    numer = np.zeros((ns.shape[0], structure.size), dtype=np.int32)
    for k in range(structure.level):
        numer += n_digits[:, k, None] * x_scaled[None, :, k]
    numer %= L
    return numer, L


def character_rows(structure: RadixStructure, ns) -> np.ndarray:
    """Array of shape (len(ns), M_N); row i holds psi_{ns[i]} on the grid."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and (ns.min() < 0 or ns.max() >= structure.size):
        raise OutOfRange(f"indices must lie in [0, {structure.size})")
    numer, L = _phase_numerators(structure, ns)
    return np.conj(_root_table(L)[numer])


def character_samples(structure: RadixStructure, n: int) -> StepFunction:
    """psi_n evaluated on every grid point."""
    return StepFunction(structure, character_rows(structure, [n])[0])


# -- fast transform -----------------------------------------------------------

@lru_cache(maxsize=None)
def _root_table(m: int) -> np.ndarray:
    """exp(-2 pi i j / m) for j < m, each entry from its own exact angle."""
    j = np.arange(m)
    table = np.exp(-2j * np.pi * j / m)
    # pin the exactly representable points
    table[0] = 1.0
    if m % 2 == 0:
        table[m // 2] = -1.0
    if m % 4 == 0:
        table[m // 4] = -1j
        table[3 * m // 4] = 1j
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _dft_matrix(m: int) -> np.ndarray:
    n = np.arange(m)
    mat = _root_table(m)[np.outer(n, n) % m]
    mat.setflags(write=False)
    return mat


def _digit_passes(arr: np.ndarray, radices: tuple[int, ...], conjugate: bool) -> np.ndarray:
    """One m_k-point DFT along every digit axis of a (batch, m_0, ..., m_{N-1}) array."""
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    shape = arr.shape
    pre = shape[0]
    post = int(np.prod(radices))
    for m in radices:
        post //= m
        mat = _dft_matrix(m)
        if conjugate:
            mat = mat.conj()
        # (m, m) @ (pre, m, post) keeps the memory layout, no transposes needed
        arr = np.matmul(mat, arr.reshape(pre, m, post))
        pre *= m
    return arr.reshape(shape)


def forward_rows(structure: RadixStructure, rows: np.ndarray) -> np.ndarray:
    """Forward transform of every row of a (B, M_N) array of grid values."""
    s = structure
    rows = np.asarray(rows, dtype=np.complex128)
    batch = rows.shape[0]
    out = _digit_passes(rows.reshape((batch,) + s.shape), s.radices, conjugate=False)
    # out[b, n_0, ..., n_{N-1}]; reversing the digit axes puts n_0 last, i.e. least significant
    order = (0,) + tuple(reversed(range(1, s.level + 1)))
    return np.ascontiguousarray(out.transpose(order)).reshape(batch, s.size) / s.size


def forward(f: StepFunction) -> Spectrum:
    return Spectrum(f.structure, forward_rows(f.structure, f.values[None, :])[0])


def inverse(spec: Spectrum) -> StepFunction:
    s = spec.structure
    arr = spec.coeffs.reshape(tuple(reversed(s.radices)))
    arr = arr.transpose(tuple(reversed(range(s.level))))[None]
    out = _digit_passes(arr, s.radices, conjugate=True)
    return StepFunction(s, out.ravel())


def synthesize(structure: RadixStructure, coeffs) -> StepFunction:
    return inverse(Spectrum(structure, coeffs))


# -- quadratic oracle ---------------------------------------------------------

def forward_naive(f: StepFunction, cap: int = DEFAULT_ORACLE_CAP) -> Spectrum:
    """Direct double sum over (index, point); independent of the digit passes."""
    s = f.structure
    M = s.size
    if M > cap:
        raise OracleCapExceeded(f"M_N = {M} exceeds the oracle cap {cap}")
    coeffs = np.empty(M, dtype=np.complex128)
    block = max(1, min(M, 2_000_000 // M))
    for start in range(0, M, block):
        ns = np.arange(start, min(M, start + block), dtype=np.int64)
        numer, L = _phase_numerators(s, ns)
        kernel = np.exp(-2j * np.pi * (np.arange(L) / L))[numer]
        coeffs[start:start + ns.shape[0]] = kernel @ f.values
    return Spectrum(s, coeffs / M)


# -- translation ---------------------------------------------------------------

def translate(f: StepFunction, h: GroupPoint) -> StepFunction:
    """The function x -> f(x + h)."""
    _same(f.structure, h.structure)
    shifted = np.roll(f.grid(), shift=[-d for d in h.digits], axis=tuple(range(f.structure.level)))
    return StepFunction(f.structure, shifted.ravel())
