"""Bounded Vilenkin groups truncated at a finite level.

A point of G_m is stored through its first N digits ``x_0 .. x_{N-1}``
(``x_k`` in ``Z_{m_k}``).  Grid functions are laid out so that the digit
``x_0`` is the most significant one: the label of a point is
``sum_k x_k * M_N / M_{k+1}``.  With this layout a flat array of length M_N
reshaped to ``(m_0, ..., m_{N-1})`` in C order is indexed by the digits
directly, and every coset ``I_r(x)`` is a contiguous block of M_N/M_r labels.

Natural numbers use the opposite convention, ``n = sum_j n_j M_j`` with
``n_0`` the least significant digit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    LevelOutOfRange,
    OutOfRange,
    Overflow,
    RadixTooSmall,
    SpecParseError,
    StructureMismatch,
)

# numpy indexes with int64; M_N must stay strictly below this.
INDEX_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class RadixStructure:
    radices: tuple[int, ...]
    cumulative: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.radices)

    @property
    def size(self) -> int:
        """M_N, the number of grid points."""
        return self.cumulative[-1]

    @property
    def max_radix(self) -> int:
        return max(self.radices)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.radices

    def M(self, k: int) -> int:
        if not 0 <= k <= self.level:
            raise LevelOutOfRange(f"level {k} outside [0, {self.level}]")
        return self.cumulative[k]

    def truncate(self, level: int) -> "RadixStructure":
        """The structure made of the first ``level`` radices."""
        if not 1 <= level <= self.level:
            raise LevelOutOfRange(f"cannot truncate to level {level}")
        return build_structure(self.radices[:level])

    def tail(self, start: int) -> "RadixStructure":
        """The structure made of radices ``m_start .. m_{N-1}``."""
        if not 0 <= start < self.level:
            raise LevelOutOfRange(f"no radices from position {start}")
        return build_structure(self.radices[start:])

    @cached_property
    def point_weights(self) -> np.ndarray:
        """Label weight M_N / M_{k+1} of digit x_k."""
        M = self.size
        return np.array([M // c for c in self.cumulative[1:]], dtype=np.int64)

    @cached_property
    def point_digit_table(self) -> np.ndarray:
        """Digits of every grid point, shape (M_N, N), row j = point with label j."""
        labels = np.arange(self.size, dtype=np.int64)
        return ((labels[:, None] // self.point_weights[None, :])
                % np.array(self.radices, dtype=np.int64)[None, :])

    @cached_property
    def index_digit_table(self) -> np.ndarray:
        """Digits n_j of every natural n < M_N, shape (M_N, N)."""
        ns = np.arange(self.size, dtype=np.int64)
        cum = np.array(self.cumulative[:-1], dtype=np.int64)
        return (ns[:, None] // cum[None, :]) % np.array(self.radices, dtype=np.int64)[None, :]

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.radices)


def build_structure(radices: Sequence[int]) -> RadixStructure:
    radices = tuple(int(m) for m in radices)
    if not radices:
        raise RadixTooSmall("radix sequence is empty")
    bad = [m for m in radices if m < 2]
    if bad:
        raise RadixTooSmall(f"every radix must be >= 2, got {bad[0]}")
    cumulative = [1]
    for m in radices:
        nxt = cumulative[-1] * m
        if nxt > INDEX_LIMIT:
            raise Overflow(f"M_{len(cumulative)} = {nxt} exceeds the 64-bit index range")
        cumulative.append(nxt)
    return RadixStructure(radices, tuple(cumulative))


_POWER = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_radices(text: str) -> RadixStructure:
    """Parse ``"2,3,2,3"``, ``"2^10"`` or mixed forms such as ``"2,3^4"``.

    A parenthesised group may be repeated as well: ``"(2,3)^6"``.
    """
    text = text.strip()
    radices: list[int] = []
    for token in _split_top_level(text):
        group = re.match(r"^\s*\((.*)\)\s*(?:\^\s*(\d+))?\s*$", token)
        if group:
            inner = parse_radices(group.group(1)).radices
            radices.extend(inner * int(group.group(2) or 1))
            continue
        match = _POWER.match(token)
        if not match:
            raise SpecParseError(f"bad radix token {token!r} in {text!r}")
        radices.extend([int(match.group(1))] * int(match.group(2) or 1))
    return build_structure(radices)


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if depth != 0 or any(not p.strip() for p in parts):
        raise SpecParseError(f"malformed radix specification {text!r}")
    return parts


@dataclass(frozen=True)
class GroupPoint:
    structure: RadixStructure
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.structure.level:
            raise OutOfRange(
                f"point has {len(self.digits)} digits, structure level is {self.structure.level}")
        for x, m in zip(self.digits, self.structure.radices):
            if not 0 <= x < m:
                raise OutOfRange(f"digit {x} not in Z_{m}")

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return add(self, other)

    def __neg__(self) -> "GroupPoint":
        return neg(self)

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return add(self, neg(other))

    @property
    def label(self) -> int:
        return coset_index(self, self.structure.level)


def point(structure: RadixStructure, digits: Sequence[int]) -> GroupPoint:
    return GroupPoint(structure, tuple(int(d) for d in digits))


def zero(structure: RadixStructure) -> GroupPoint:
    return GroupPoint(structure, (0,) * structure.level)


def unit(structure: RadixStructure, k: int) -> GroupPoint:
    """e_k: digit k is 1, the others 0."""
    if not 0 <= k < structure.level:
        raise LevelOutOfRange(f"e_{k} needs 0 <= k < {structure.level}")
    digits = [0] * structure.level
    digits[k] = 1
    return GroupPoint(structure, tuple(digits))


def point_from_label(structure: RadixStructure, label: int) -> GroupPoint:
    if not 0 <= label < structure.size:
        raise OutOfRange(f"label {label} not in [0, {structure.size})")
    return GroupPoint(structure, tuple(int(d) for d in structure.point_digit_table[label]))


def add(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    if x.structure != y.structure:
        raise StructureMismatch("points belong to different radix structures")
    return GroupPoint(
        x.structure,
        tuple((a + b) % m for a, b, m in zip(x.digits, y.digits, x.structure.radices)),
    )


def neg(x: GroupPoint) -> GroupPoint:
    return GroupPoint(
        x.structure, tuple((m - a) % m for a, m in zip(x.digits, x.structure.radices)))


@dataclass(frozen=True)
class MixedRadixIndex:
    value: int
    digits: tuple[int, ...]
    order: int


def index_digits(n: int, structure: RadixStructure) -> MixedRadixIndex:
    if not 0 <= n < structure.size:
        raise OutOfRange(f"index {n} not in [0, {structure.size})")
    digits = []
    rest = n
    for m in structure.radices:
        rest, d = divmod(rest, m)
        digits.append(d)
    nonzero = [j for j, d in enumerate(digits) if d]
    # |0| is taken to be 0
    order = nonzero[-1] if nonzero else 0
    return MixedRadixIndex(n, tuple(digits), order)


def index_value(digits: Sequence[int], structure: RadixStructure) -> int:
    if len(digits) != structure.level:
        raise OutOfRange("digit count does not match the structure level")
    return sum(int(d) * M for d, M in zip(digits, structure.cumulative))


def coset_index(x: GroupPoint, r: int) -> int:
    """Label in [0, M_r) of the coset I_r(x)."""
    s = x.structure
    if not 0 <= r <= s.level:
        raise LevelOutOfRange(f"level {r} outside [0, {s.level}]")
    Mr = s.cumulative[r]
    return sum(x.digits[j] * (Mr // s.cumulative[j + 1]) for j in range(r))


def negate_indices(structure: RadixStructure) -> np.ndarray:
    """For every n < M_N the index whose digits are (m_j - n_j) mod m_j.

    psi of the returned index is the complex conjugate of psi_n.
    """
    radices = np.array(structure.radices, dtype=np.int64)
    neg_digits = (radices[None, :] - structure.index_digit_table) % radices[None, :]
    return neg_digits @ np.array(structure.cumulative[:-1], dtype=np.int64)


def negated_labels(structure: RadixStructure) -> np.ndarray:
    """Label of -x for every grid label x."""
    radices = np.array(structure.radices, dtype=np.int64)
    return ((radices[None, :] - structure.point_digit_table) % radices[None, :]) @ structure.point_weights


def translation_labels(structure: RadixStructure, h: GroupPoint) -> np.ndarray:
    """Labels of x + h for every grid label x."""
    if h.structure != structure:
        raise StructureMismatch("shift belongs to a different structure")
    radices = np.array(structure.radices, dtype=np.int64)
    shifted = (structure.point_digit_table + np.array(h.digits)[None, :]) % radices[None, :]
    return shifted @ structure.point_weights


# -- addition tables -----------------------------------------------------------------

def cayley_table(radices: Sequence[int]) -> np.ndarray:
    """table[h, x] = label of x + h in the group with these radices."""
    size = math.prod(radices)
    labels = np.arange(size, dtype=np.int64)
    weights = np.array([size // math.prod(radices[: i + 1]) for i in range(len(radices))],
                       dtype=np.int64)
    rad = np.array(radices, dtype=np.int64)
    digits = (labels[:, None] // weights) % rad
    summed = (digits[:, None, :] + digits[None, :, :]) % rad
    return (summed @ weights).astype(np.int64)


def addition_tables(structure: RadixStructure) -> tuple[int, np.ndarray, np.ndarray]:
    """Split the digits at ``split`` into a high and a low group, each with its own table.

    Digit addition has no carries, so with L = M_N / M_split the label of
    x + h is ``hi[h // L, x // L] * L + lo[h % L, x % L]``.  The split puts
    about sqrt(M_N) points on each side, which keeps both tables small.
    """
    if structure.level == 1:
        return 1, cayley_table(structure.radices), np.zeros((1, 1), dtype=np.int64)
    half = math.log(structure.size) / 2
    split = min(range(1, structure.level),
                key=lambda s: abs(math.log(structure.cumulative[s]) - half))
    return split, cayley_table(structure.radices[:split]), cayley_table(structure.radices[split:])
