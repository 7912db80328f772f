"""CSV and JSON formats for grid functions, spectra and Cesaro tables.

Floats are printed with 17 significant digits, which round-trips every
double exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import TextIO

import numpy as np

from .cesaro import CesaroTable
from .errors import SpecParseError
from .group import RadixStructure, build_structure
from .transform import Spectrum, StepFunction


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _payload(obj: StepFunction | Spectrum) -> np.ndarray:
    return obj.values if isinstance(obj, StepFunction) else obj.coeffs


def _kind(obj) -> str:
    return "step_function" if isinstance(obj, StepFunction) else "spectrum"


def write_csv(obj: StepFunction | Spectrum, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for j, z in enumerate(_payload(obj)):
        w.writerow([j, fmt(z.real), fmt(z.imag)])


def read_csv(src: TextIO, structure: RadixStructure, kind: str = "step_function"):
    rows = list(csv.DictReader(src))
    if not rows or set(rows[0]) != {"index", "re", "im"}:
        raise SpecParseError("CSV needs the columns index, re, im")
    values = np.zeros(structure.size, dtype=np.complex128)
    seen = set()
    for row in rows:
        j = int(row["index"])
        if not 0 <= j < structure.size or j in seen:
            raise SpecParseError(f"bad or repeated index {j} for M_N = {structure.size}")
        seen.add(j)
        values[j] = complex(float(row["re"]), float(row["im"]))
    if len(seen) != structure.size:
        raise SpecParseError(f"CSV has {len(seen)} rows, expected {structure.size}")
    return _wrap(kind, structure, values)


def _wrap(kind: str, structure: RadixStructure, values: np.ndarray):
    if kind == "step_function":
        return StepFunction(structure, values)
    if kind == "spectrum":
        return Spectrum(structure, values)
    raise SpecParseError(f"unknown object kind {kind!r}")


def to_json(obj: StepFunction | Spectrum) -> dict:
    s = obj.structure
    return {
        "kind": _kind(obj),
        "radices": list(s.radices),
        "level": s.level,
        # floats printed by repr already carry 17 significant digits when needed
        "values": [[float(z.real), float(z.imag)] for z in _payload(obj)],
    }


def from_json(data: dict, kind: str | None = None):
    try:
        structure = build_structure(data["radices"])
        if int(data.get("level", structure.level)) != structure.level:
            raise SpecParseError("level does not match the number of radices")
        values = np.array([complex(re, im) for re, im in data["values"]], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(f"malformed JSON payload: {exc}") from None
    if values.shape != (structure.size,):
        raise SpecParseError(f"payload has {values.shape[0]} values, expected {structure.size}")
    return _wrap(kind or data.get("kind", "step_function"), structure, values)


def dumps(obj: StepFunction | Spectrum) -> str:
    return json.dumps(to_json(obj))


def loads(text: str, kind: str | None = None):
    return from_json(json.loads(text), kind)


def write_cesaro_csv(table: CesaroTable, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["j", "A_j"])
    for j, a in enumerate(table.values):
        w.writerow([j, fmt(a)])


def load(path: str | Path, structure: RadixStructure | None = None, kind: str | None = None):
    """Read a CSV (needs ``structure``) or JSON file, chosen by extension."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return loads(text, kind)
    if structure is None:
        raise SpecParseError("reading CSV needs the radix structure")
    return read_csv(io.StringIO(text), structure, kind or "step_function")


def save(obj: StepFunction | Spectrum, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(dumps(obj) + "\n")
    else:
        with path.open("w", newline="") as fh:
            write_csv(obj, fh)
