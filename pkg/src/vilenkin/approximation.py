"""L^p norms, moduli of continuity, and the negative-order approximation experiment.

The modulus omega(1/M_r, f)_p is computed exactly: a level-N step function
is invariant under shifts in I_N, so the supremum over I_r is a maximum over
the M_N / M_r shifts whose first r digits vanish.  That costs
(M_N / M_r) * M_N operations per level, which is why the default cap on M_N
is 46656.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numba
import numpy as np

from .cesaro import cesaro_mean
from .errors import BadExponent, LevelOutOfRange, OracleCapExceeded, OutOfRange, SpecParseError
from .group import RadixStructure, addition_tables
from .transform import StepFunction, forward, synthesize

MODULUS_CAP = 46656


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise BadExponent(f"exponent {p} is below 1")
    return p


def parse_exponent(token: str | float) -> float:
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return math.inf
        try:
            return _check_p(float(t))
        except ValueError:
            raise BadExponent(f"bad exponent {token!r}") from None
    return _check_p(token)


def lp_norm(f: StepFunction, p: float) -> float:
    p = _check_p(p)
    mag = np.abs(f.values)
    if math.isinf(p):
        return float(mag.max())
    if p == 1:
        return float(np.mean(mag))
    if p == 2:
        return math.sqrt(float(np.mean(mag * mag)))
    return float(np.mean(mag**p)) ** (1.0 / p)


# -- exact modulus of continuity ---------------------------------------------------

@numba.njit(cache=True)
def _shift_norms(values, hi_table, lo_table, n_hi, n_lo, p_general):
    """Per-shift (max |d|^2, sum |d|, sum |d|^2, sum |d|^p) with d = f(x+h) - f(x).

    Shifts are h = (hh, hl) with hh < n_hi in the high digit group and
    hl < n_lo in the low one.
    """
    H = hi_table.shape[1]
    L = lo_table.shape[1]
    out = np.zeros((n_hi * n_lo, 4))
    for hh in range(n_hi):
        for hl in range(n_lo):
            mx = 0.0
            s1 = 0.0
            s2 = 0.0
            sp = 0.0
            for a in range(H):
                base_to = hi_table[hh, a] * L
                base_from = a * L
                for b in range(L):
                    d = values[base_to + lo_table[hl, b]] - values[base_from + b]
                    q = d.real * d.real + d.imag * d.imag
                    if q > mx:
                        mx = q
                    m = math.sqrt(q)
                    s1 += m
                    s2 += q
                    if p_general > 0.0:
                        sp += m**p_general
            row = hh * n_lo + hl
            out[row, 0] = mx
            out[row, 1] = s1
            out[row, 2] = s2
            out[row, 3] = sp
    return out


@dataclass(frozen=True, eq=False)
class ModulusProfile:
    structure: RadixStructure
    p: float
    omegas: np.ndarray  # omega(1/M_r, f)_p for r = 0 .. N

    def __getitem__(self, r: int) -> float:
        return float(self.omegas[r])


def modulus_profiles(f: StepFunction, ps: Iterable[float], levels: Iterable[int] | None = None,
                     cap: int = MODULUS_CAP) -> dict[float, ModulusProfile]:
    """Exact omega(1/M_r, f)_p for every requested exponent and level in one sweep."""
    s = f.structure
    ps = [_check_p(p) for p in ps]
    if s.size > cap:
        raise OracleCapExceeded(f"M_N = {s.size} exceeds the modulus cap {cap}")
    levels = range(s.level + 1) if levels is None else list(levels)
    general = sorted({p for p in ps if p not in (1.0, 2.0) and not math.isinf(p)})
    M = s.size
    omegas = {p: np.full(s.level + 1, np.nan) for p in ps}
    split, hi_table, lo_table = addition_tables(s)
    H = s.cumulative[split]
    L = M // H
    for r in levels:
        if not 0 <= r <= s.level:
            raise LevelOutOfRange(f"level {r} outside [0, {s.level}]")
        if r == s.level:
            for p in ps:
                omegas[p][r] = 0.0
            continue
        # shifts with their first r digits zero
        if r <= split:
            n_hi, n_lo = H // s.cumulative[r], L
        else:
            n_hi, n_lo = 1, M // s.cumulative[r]
        per_p = {}
        for pg in general or [0.0]:
            stats = _shift_norms(f.values, hi_table, lo_table, n_hi, n_lo, pg)
            per_p[pg] = stats
        stats = next(iter(per_p.values()))
        for p in ps:
            if math.isinf(p):
                val = math.sqrt(stats[:, 0].max())
            elif p == 1.0:
                val = stats[:, 1].max() / M
            elif p == 2.0:
                val = math.sqrt(stats[:, 2].max() / M)
            else:
                val = (per_p[p][:, 3].max() / M) ** (1.0 / p)
            omegas[p][r] = val
    return {p: ModulusProfile(s, p, omegas[p]) for p in ps}


def modulus(f: StepFunction, r: int, p: float, cap: int = MODULUS_CAP) -> float:
    """omega(1/M_r, f)_p = sup over h in I_r of ||f(. + h) - f||_p."""
    p = _check_p(p)
    if not 0 <= r <= f.structure.level:
        raise LevelOutOfRange(f"level {r} outside [0, {f.structure.level}]")
    return modulus_profiles(f, [p], [r], cap)[p][r]


def modulus_profile(f: StepFunction, p: float, cap: int = MODULUS_CAP) -> ModulusProfile:
    p = _check_p(p)
    return modulus_profiles(f, [p], cap=cap)[p]


# -- the bound and the experiment ------------------------------------------------------

def theorem_bound(omegas: ModulusProfile, k: int, alpha: float) -> float:
    """M_k^alpha omega(1/M_{k-1}) + sum_{r=0}^{k-2} (M_r / M_k) omega(1/M_r), without the constant."""
    s = omegas.structure
    if not 2 <= k <= s.level:
        raise LevelOutOfRange(f"bound needs 2 <= k <= {s.level}, got {k}")
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha {alpha} not in (0, 1)")
    Mk = s.cumulative[k]
    lead = Mk**alpha * omegas[k - 1]
    tail = math.fsum(s.cumulative[r] / Mk * omegas[r] for r in range(k - 1))
    return lead + tail


def approximation_error(f: StepFunction, n: int, alpha: float, p: float) -> float:
    """||sigma_n^{-alpha} f - f||_p for alpha in (0, 1)."""
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha {alpha} not in (0, 1)")
    mean = cesaro_mean(forward(f), n, -alpha)
    return lp_norm(mean - f, p)


@dataclass(frozen=True)
class ConvergenceRow:
    k: int
    n: int
    error: float
    bound: float
    ratio: float | None


@dataclass(frozen=True)
class NPolicy:
    kind: str = "mk"            # "mk", "mk1" or "random"
    seed: int | None = None

    def choose(self, structure: RadixStructure, ks: Sequence[int]) -> list[int]:
        cum = structure.cumulative
        if self.kind == "mk":
            return [cum[k] for k in ks]
        if self.kind == "mk1":
            return [cum[k + 1] - 1 for k in ks]
        rng = np.random.default_rng(self.seed)
        return [int(rng.integers(cum[k], cum[k + 1])) for k in ks]

    def __str__(self) -> str:
        return f"random:{self.seed}" if self.kind == "random" else self.kind


def parse_n_policy(token: str) -> NPolicy:
    t = token.strip().lower()
    if t in ("mk", "mk1"):
        return NPolicy(t)
    if t.startswith("random"):
        _, _, seed = t.partition(":")
        seed = seed.removeprefix("seed=")
        try:
            return NPolicy("random", int(seed) if seed else 0)
        except ValueError:
            raise SpecParseError(f"bad seed in n-policy {token!r}") from None
    raise SpecParseError(f"unknown n-policy {token!r}")


def convergence_table(f: StepFunction, alpha: float, p: float, ks: Sequence[int],
                      n_policy: NPolicy | str = "mk",
                      profile: ModulusProfile | None = None) -> list[ConvergenceRow]:
    s = f.structure
    if isinstance(n_policy, str):
        n_policy = parse_n_policy(n_policy)
    ks = list(ks)
    bad = [k for k in ks if not 2 <= k <= s.level - 1]
    if bad:
        raise LevelOutOfRange(f"k = {bad[0]} outside [2, {s.level - 1}]")
    p = _check_p(p)
    if profile is None:
        profile = modulus_profile(f, p)
    rows = []
    for k, n in zip(ks, n_policy.choose(s, ks)):
        error = approximation_error(f, n, alpha, p)
        bound = theorem_bound(profile, k, alpha)
        rows.append(ConvergenceRow(k, n, error, bound, error / bound if bound > 0 else None))
    return rows


# -- test functions ---------------------------------------------------------------

def gen_lacunary(beta: float, structure: RadixStructure) -> StepFunction:
    """sum_{j<N} M_j^{-beta} psi_{M_j}; complex, no real part taken."""
    if not 0 < beta <= 1:
        raise OutOfRange(f"beta {beta} not in (0, 1]")
    c = np.zeros(structure.size)
    for j in range(structure.level):
        c[structure.cumulative[j]] = structure.cumulative[j] ** -beta
    return synthesize(structure, c)


def gen_indicator(r: int, label: int, structure: RadixStructure) -> StepFunction:
    """1 on the level-r coset with the given label, 0 elsewhere."""
    if not 0 <= r <= structure.level:
        raise LevelOutOfRange(f"level {r} outside [0, {structure.level}]")
    Mr = structure.cumulative[r]
    if not 0 <= label < Mr:
        raise OutOfRange(f"coset label {label} not in [0, {Mr})")
    block = structure.size // Mr
    values = np.zeros(structure.size, dtype=np.complex128)
    values[label * block:(label + 1) * block] = 1.0
    return StepFunction(structure, values)


def gen_random(seed: int, r: int, structure: RadixStructure) -> StepFunction:
    """Seeded complex normal values, constant on level-r cosets."""
    if not 0 <= r <= structure.level:
        raise LevelOutOfRange(f"level {r} outside [0, {structure.level}]")
    rng = np.random.default_rng(seed)
    Mr = structure.cumulative[r]
    coarse = rng.standard_normal(Mr) + 1j * rng.standard_normal(Mr)
    return StepFunction(structure, np.repeat(coarse, structure.size // Mr))


def gen_constant(c: complex, structure: RadixStructure) -> StepFunction:
    return StepFunction(structure, np.full(structure.size, c, dtype=np.complex128))


@dataclass(frozen=True)
class FunctionSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def build(self, structure: RadixStructure) -> StepFunction:
        if self.kind == "lacunary":
            return gen_lacunary(float(self.params.get("beta", 0.9)), structure)
        if self.kind == "indicator":
            return gen_indicator(int(self.params.get("r", 2)), int(self.params.get("label", 0)),
                                 structure)
        if self.kind == "random":
            return gen_random(int(self.params.get("seed", 42)), int(self.params.get("r", 3)),
                              structure)
        if self.kind == "constant":
            return gen_constant(complex(self.params.get("c", 1.0)), structure)
        raise SpecParseError(f"unknown function kind {self.kind!r}")

    def __str__(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


def parse_function(text: str) -> FunctionSpec:
    """``lacunary:beta=0.9``, ``indicator:r=2,label=0``, ``random:seed=42,r=3``, ``constant:c=1``."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in ("lacunary", "indicator", "random", "constant"):
        raise SpecParseError(f"unknown function kind {kind!r}")
    params = {}
    for item in filter(None, (x.strip() for x in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise SpecParseError(f"expected key=value in {text!r}, got {item!r}")
        params[key.strip()] = value.strip()
    return FunctionSpec(kind, params)
