"""Command-line entry point: ``vilenkin <subcommand> ...``.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
Flags override values from ``--config`` (a flat JSON object), which override
the built-in defaults.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Sequence

from . import formats
from .approximation import (
    FunctionSpec,
    NPolicy,
    convergence_table,
    modulus_profile,
    parse_exponent,
    parse_function,
    parse_n_policy,
)
from .cesaro import cesaro_numbers
from .checks import run_selftest
from .errors import LevelOutOfRange, SpecParseError, VilenkinError
from .group import RadixStructure, build_structure, parse_radices
from .kernels import profile_for18
from .transform import forward, inverse

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
RATIO_SPREAD = 10.0


@dataclass
class RunConfig:
    radices: str = "2,3,2,3"
    level: int | None = None
    alpha: float = 0.5
    p: str = "inf"
    function: str = "lacunary:beta=0.9"
    seed: int = 0
    n_policy: str = "mk"
    ks: str | None = None
    out: str = "csv"
    output: str | None = None

    def structure(self) -> RadixStructure:
        base = parse_radices(self.radices)
        if self.level is None or self.level == base.level:
            return base
        if self.level < 1:
            raise SpecParseError(f"level must be positive, got {self.level}")
        # a shorter level truncates, a longer one repeats the radix pattern
        reps = -(-self.level // base.level)
        return build_structure((base.radices * reps)[: self.level])

    def exponent(self) -> float:
        return parse_exponent(self.p)

    def function_spec(self) -> FunctionSpec:
        spec = parse_function(self.function)
        if spec.kind == "random" and "seed" not in spec.params:
            spec.params["seed"] = str(self.seed)
        return spec

    def policy(self) -> NPolicy:
        pol = parse_n_policy(self.n_policy)
        if pol.kind == "random" and ":" not in self.n_policy:
            pol = NPolicy("random", self.seed)
        return pol

    def k_range(self, default_lo: int, default_hi: int) -> list[int]:
        if self.ks is None:
            return list(range(default_lo, default_hi + 1))
        return parse_k_range(self.ks)


def parse_k_range(text: str) -> list[int]:
    """``"4-10"`` or ``"4,6,8"``."""
    text = text.strip()
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise SpecParseError(f"bad k range {text!r}") from None


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecParseError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise SpecParseError("config file must hold a flat JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise SpecParseError(f"unknown config keys: {sorted(unknown)}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    merged = asdict(RunConfig())
    merged.update(_load_config(args.config))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            merged[f.name] = value
    cfg = RunConfig(**merged)
    if cfg.out not in ("csv", "json"):
        raise SpecParseError(f"output format must be csv or json, got {cfg.out!r}")
    return cfg


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _provenance(cfg: RunConfig) -> dict:
    # the output path is left out so the artifact bytes do not depend on where they land
    doc = asdict(cfg)
    del doc["output"]
    return doc


def _num(x) -> str:
    return "" if x is None else formats.fmt(x)


def _json_num(x):
    if x is None:
        return None
    if math.isinf(x):
        return "inf"
    return float(x)


# -- subcommands ---------------------------------------------------------------------

def cmd_selftest(cfg: RunConfig) -> int:
    s = cfg.structure()
    results = run_selftest(s, cfg.seed)
    print(f"selftest on m = ({s}), M_N = {s.size}")
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("OK" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_converge(cfg: RunConfig) -> int:
    s = cfg.structure()
    p = cfg.exponent()
    fspec = cfg.function_spec()
    f = fspec.build(s)
    ks = cfg.k_range(3, s.level - 1)
    policy = cfg.policy()
    profile = modulus_profile(f, p)
    rows = convergence_table(f, cfg.alpha, p, ks, policy, profile=profile)
    if cfg.out == "csv":
        lines = ["k,n,error,bound,ratio"]
        lines += [f"{r.k},{r.n},{_num(r.error)},{_num(r.bound)},{_num(r.ratio)}" for r in rows]
        _emit("\n".join(lines) + "\n", cfg)
    else:
        doc = {
            "config": _provenance(cfg),
            "radices": list(s.radices),
            "level": s.level,
            "function": str(fspec),
            "seeds": {"config": cfg.seed, "n_policy": policy.seed,
                      "function": fspec.params.get("seed")},
            "p": _json_num(p),
            "alpha": cfg.alpha,
            "modulus_profile": {"p": _json_num(p), "omegas": [float(w) for w in profile.omegas]},
            "tolerances": {"ratio_max_over_min": RATIO_SPREAD, "errors_decrease_from_k": 4},
            "summary": _converge_summary(rows),
            "rows": [{"k": r.k, "n": r.n, "error": r.error, "bound": r.bound, "ratio": r.ratio}
                     for r in rows],
        }
        _emit(json.dumps(doc, indent=2) + "\n", cfg)
    return EXIT_OK


def _converge_summary(rows) -> dict:
    ratios = [r.ratio for r in rows if r.ratio is not None]
    errors = [r.error for r in rows if r.k >= 4]
    return {
        "ratio_max_over_min": max(ratios) / min(ratios) if ratios and min(ratios) > 0 else None,
        "errors_decreasing": all(b < a for a, b in zip(errors, errors[1:])),
    }


def cmd_kernels(cfg: RunConfig) -> int:
    s = cfg.structure()
    ks = cfg.k_range(2, s.level - 1)
    too_high = [k for k in ks if k > s.level - 1]
    if too_high:
        raise LevelOutOfRange(f"k = {too_high[0]} needs M_(k+1), so k <= {s.level - 1}")
    ns = cfg.policy().choose(s, ks)
    profiles = [profile_for18(s, k, n, cfg.alpha) for k, n in zip(ks, ns)]
    if cfg.out == "csv":
        lines = ["k,n,A,shell_max,normalizer,ratio"]
        for pr in profiles:
            for A, mx, norm, ratio in zip(pr.shells, pr.shell_max, pr.normalizer, pr.ratio):
                lines.append(f"{pr.k},{pr.n},{A},{_num(mx)},{_num(norm)},{_num(ratio)}")
        _emit("\n".join(lines) + "\n", cfg)
    else:
        doc = {
            "config": _provenance(cfg),
            "radices": list(s.radices),
            "alpha": cfg.alpha,
            "profiles": [{"k": pr.k, "n": pr.n, "l1_norm": pr.l1_norm, "max_ratio": pr.max_ratio,
                          "shells": [{"A": int(A), "shell_max": float(mx), "normalizer": float(nm),
                                      "ratio": float(rt)}
                                     for A, mx, nm, rt in zip(pr.shells, pr.shell_max,
                                                              pr.normalizer, pr.ratio)]}
                         for pr in profiles],
            "summary": {"l1_norm": max(pr.l1_norm for pr in profiles),
                        "max_ratio": max(pr.max_ratio for pr in profiles)},
        }
        _emit(json.dumps(doc, indent=2) + "\n", cfg)
    return EXIT_OK


def cmd_cesaro_table(cfg: RunConfig, n: int) -> int:
    table = cesaro_numbers(cfg.alpha, n)
    buf = io.StringIO()
    formats.write_cesaro_csv(table, buf)
    _emit(buf.getvalue(), cfg)
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    structure = parse_radices(args.radices) if args.radices else None
    kind = "spectrum" if args.inverse else "step_function"
    obj = formats.load(args.input, structure, kind)
    result = inverse(obj) if args.inverse else forward(obj)
    formats.save(result, args.output)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat JSON object with run settings")
    p.add_argument("--radices", help='radix sequence, e.g. "2,3,2,3", "2^13", "(2,3)^6"')
    p.add_argument("--level", type=int, help="number of digits N (truncates or repeats radices)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", choices=["csv", "json"], help="output format")
    p.add_argument("--output", "-o", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vilenkin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("selftest", help="run the exact-identity suites")
    _common(p)

    p = sub.add_parser("converge", help="approximation error of (C,-alpha) means vs the bound")
    _common(p)
    p.add_argument("--alpha", type=float, help="the a in (C,-a), in (0,1)")
    p.add_argument("--p", help="norm exponent: 1, 2, inf or any real >= 1")
    p.add_argument("--function", help="lacunary:beta=0.9 | indicator:r=2,label=0 | random:seed=42,r=3")
    p.add_argument("--n-policy", dest="n_policy", help="mk | mk1 | random:SEED")
    p.add_argument("--ks", help='levels, e.g. "3-12"')

    p = sub.add_parser("kernels", help="shell profile of the Cesaro tail kernel")
    _common(p)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n-policy", dest="n_policy")
    p.add_argument("--ks", help='levels, e.g. "4-10"')

    p = sub.add_parser("cesaro-table", help="print A_0^alpha .. A_n^alpha")
    _common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("transform", help="forward or inverse transform of a CSV/JSON file")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--radices", help="needed for CSV input")
    p.add_argument("--inverse", action="store_true", help="input is a spectrum; synthesize it")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "transform":
            return cmd_transform(args)
        cfg = resolve_config(args)
        if args.command == "selftest":
            return cmd_selftest(cfg)
        if args.command == "converge":
            return cmd_converge(cfg)
        if args.command == "kernels":
            return cmd_kernels(cfg)
        if args.command == "cesaro-table":
            return cmd_cesaro_table(cfg, args.n)
    except VilenkinError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
