"""Command-line front end: ``coefbounds {bounds,verify,hmap,series-debug}``.

Every subcommand produces a report document
``{"input": ..., "bounds": ..., "verification": [...], "notes": [...]}``
rendered as JSON, CSV or a plain table.  Exit status is 0 on success,
1 when a bound is violated and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Any, Sequence

import numpy as np

from . import bounds as B
from .oracle import (
    ParameterMode,
    SearchConfig,
    campaign,
    parse_functional,
)
from .phi import ClassParams, PhiSpec, PhiValidationError, coefficients, format_alpha, parse_alpha
from .witness import member_coeffs, profile_arrays, schwarz_coeffs

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2
UNAVAILABLE = "unavailable"
SUBCOMMANDS = ("bounds", "verify", "hmap", "series-debug")
DEFAULT_FUNCTIONALS = ("an", "gamma1", "gamma2", "gamma3", "A2", "A3", "A4", "fs", "hankel2")


class InvalidInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# run specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunSpec:
    subcommand: str
    phi: PhiSpec = field(default_factory=PhiSpec.half_plane)
    alpha: complex = 0j
    format: str = "json"
    seed: int = 0
    jobs: int = 1
    trials: int = 2000
    functional: tuple[str, ...] = ()
    n: int = 2
    mu: tuple[complex, ...] = (0j,)
    r: tuple[float, ...] = (0.25, 0.5, 0.75)
    nmax: int = 6
    terms: int = 32
    q1: tuple[float, float] = (-5.0, 5.0)
    q2: tuple[float, float] = (-5.0, 5.0)
    step: float = 0.1
    grid_step: float = 0.1
    refine_iters: int = 3
    mode: str = "real"
    schur: tuple[complex, ...] = (1 + 0j,)

    def echo(self) -> dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "phi": self.phi.to_json(),
            "alpha": format_alpha(self.alpha),
            "format": self.format,
            "seed": self.seed,
            "jobs": self.jobs,
            "trials": self.trials,
            "functional": list(self.functional),
            "n": self.n,
            "mu": [_num(m) for m in self.mu],
            "r": list(self.r),
            "nmax": self.nmax,
            "terms": self.terms,
            "q1": _range_text(self.q1),
            "q2": _range_text(self.q2),
            "step": self.step,
            "grid_step": self.grid_step,
            "refine_iters": self.refine_iters,
            "mode": self.mode,
            "schur": [_num(s) for s in self.schur],
        }


SPEC_KEYS = frozenset(f.name for f in fields(RunSpec))


def _parse_phi(value: Any) -> PhiSpec:
    if isinstance(value, PhiSpec):
        return value
    if isinstance(value, dict):
        return PhiSpec.from_json(value)
    text = str(value).strip()
    if text.startswith("{"):
        try:
            return PhiSpec.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"--phi is not valid JSON: {exc}") from None
    return PhiSpec.from_json({"kind": text})


def _parse_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex)) and not isinstance(value, bool):
        return complex(value)
    return parse_alpha(str(value))


def _parse_list(value: Any, conv) -> tuple:
    if isinstance(value, (list, tuple)):
        items = value
    else:
        items = [s for s in str(value).split(",") if s.strip()]
    return tuple(conv(x) for x in items)


def _parse_range(value: Any) -> tuple[float, float]:
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = str(value).split(":")
    if len(parts) != 2:
        raise InvalidInput(f"range must look like lo:hi, got {value!r}")
    lo, hi = float(parts[0]), float(parts[1])
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidInput("range bounds must be finite")
    if lo > hi:
        raise InvalidInput(f"empty range {value!r}")
    return lo, hi


def _range_text(rng: tuple[float, float]) -> str:
    return f"{_fmt5(rng[0])}:{_fmt5(rng[1])}"


_CONVERTERS = {
    "subcommand": str,
    "phi": _parse_phi,
    "alpha": _parse_complex,
    "format": str,
    "seed": int,
    "jobs": int,
    "trials": int,
    "functional": lambda v: _parse_list(v, lambda s: str(s).strip()),
    "n": int,
    "mu": lambda v: _parse_list(v, _parse_complex),
    "r": lambda v: _parse_list(v, float),
    "nmax": int,
    "terms": int,
    "q1": _parse_range,
    "q2": _parse_range,
    "step": float,
    "grid_step": float,
    "refine_iters": int,
    "mode": lambda v: ParameterMode(str(v).lower()).value,
    "schur": lambda v: _parse_list(v, _parse_complex),
}


def build_runspec(subcommand: str, overrides: dict[str, Any], spec_doc: dict[str, Any] | None = None) -> RunSpec:
    """Defaults, then the ``--spec`` document, then explicit flags."""
    merged: dict[str, Any] = {}
    if spec_doc is not None:
        if not isinstance(spec_doc, dict):
            raise InvalidInput("spec file must hold a JSON object")
        unknown = set(spec_doc) - SPEC_KEYS
        if unknown:
            raise InvalidInput(f"unknown spec keys: {sorted(unknown)}")
        if spec_doc.get("subcommand", subcommand) != subcommand:
            raise InvalidInput("spec file subcommand does not match the command line")
        merged.update(spec_doc)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    merged["subcommand"] = subcommand
    kwargs = {}
    for key, value in merged.items():
        try:
            kwargs[key] = _CONVERTERS[key](value)
        except (PhiValidationError, InvalidInput):
            raise
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"invalid {key}: {exc}") from None
    run = RunSpec(**kwargs)
    _validate(run)
    return run


def _validate(run: RunSpec) -> None:
    if run.format not in ("json", "csv", "table"):
        raise InvalidInput(f"unknown format {run.format!r}")
    checks = [
        (run.trials >= 0, "trials must be non-negative"),
        (run.jobs >= 1, "jobs must be at least 1"),
        (run.nmax >= 2, "nmax must be at least 2"),
        (run.terms >= 1, "terms must be positive"),
        (run.step > 0 and math.isfinite(run.step), "step must be positive"),
        (run.grid_step > 0, "grid_step must be positive"),
        (run.refine_iters >= 0, "refine_iters must be non-negative"),
        (all(0 < r < 1 for r in run.r), "r values must lie in (0, 1)"),
        (len(run.schur) >= 1 and all(abs(s) <= 1 for s in run.schur),
         "schur parameters must lie in the closed unit disk"),
    ]
    for ok, msg in checks:
        if not ok:
            raise InvalidInput(msg)
    try:
        ClassParams(run.alpha)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _num(x) -> Any:
    z = complex(x)
    return z.real if z.imag == 0 else [z.real, z.imag]


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with floats written to 17 significant digits."""
    out: list[str] = []
    _emit(obj, 0, indent, out)
    return "".join(out) + "\n"


def _emit(obj, level, indent, out) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _emit(v, level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _emit(v, level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    elif isinstance(obj, bool) or obj is None or isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite number in report")
        text = format(x, ".17g")
        if "e" not in text and "." not in text:
            text += ".0"
        out.append(text)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _fmt5(x: float) -> str:
    """Five decimals with trailing zeros trimmed: 1.0 -> '1', 16/9 -> '1.77778'."""
    text = f"{x:.5f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _flatten(obj, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        rows = []
        for k, v in obj.items():
            rows += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        rows = []
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
        return rows
    return [(prefix, obj)]


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt5(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(header)] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def render(doc: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return dumps(doc)
    sub = doc["input"]["subcommand"]
    if sub == "hmap":
        header, rows = ["q1", "q2", "region", "value"], [
            [r["q1"], r["q2"], r["region"], r["value"]] for r in doc["bounds"]["hmap"]
        ]
    elif sub == "verify":
        header = ["functional", "bound", "observed_max", "sharpness_ratio", "violations", "evaluations"]
        rows = [[v.get(h, UNAVAILABLE) for h in header] for v in doc["verification"]]
    else:
        header, rows = ["key", "value"], _flatten(doc["bounds"])
    text = _csv(header, rows) if fmt == "csv" else _table(header, rows)
    if fmt == "table" and doc["notes"]:
        text += "".join(f"# {n}\n" for n in doc["notes"])
    return text


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _interval(iv: B.Interval) -> dict[str, float]:
    return {"lo": iv.lo, "hi": iv.hi, "tail": iv.tail}


def _h_doc(h: B.HResult | None) -> Any:
    if h is None:
        return UNAVAILABLE
    return {"q1": h.q1, "q2": h.q2, "region": h.region, "value": h.value}


def cmd_bounds(run: RunSpec) -> tuple[dict, int]:
    params = ClassParams(run.alpha)
    spec = run.phi
    notes: list[str] = []
    out: dict[str, Any] = {}
    for name, fn in (("distortion", B.distortion_bounds), ("growth", B.growth_bounds)):
        out[name] = [
            {
                "r": r,
                "as_proved": _interval(fn(params, spec, r, run.terms, B.Variant.AS_PROVED)),
                "as_stated": _interval(fn(params, spec, r, run.terms, B.Variant.AS_STATED)),
            }
            for r in run.r
        ]
    out["an_bounds"] = {str(n): B.taylor_coeff_bound(params, spec, n) for n in range(2, run.nmax + 1)}

    lb = B.log_coeff_bounds(params, spec)
    out["gamma1_bound"] = lb.g1
    out["gamma2_bound"] = lb.g2
    out["gamma2_branch"] = lb.g2_branch
    out["gamma3_bound"] = UNAVAILABLE if lb.g3 is None else lb.g3
    out["gamma3_H"] = _h_doc(lb.h)

    ib = B.inverse_coeff_bounds(params, spec)
    out["A2_bound"] = ib.b2
    out["A3_bound"] = ib.b3
    out["A3_mu"] = _num(ib.mu)
    out["A4_bound"] = UNAVAILABLE if ib.b4 is None else ib.b4
    out["A4_H"] = _h_doc(ib.h)

    fs = [{"mu": _num(m), "bound": B.fekete_szego_inverse_bound(params, spec, m)} for m in run.mu]
    out["fs_bound"] = fs[0]["bound"] if fs else UNAVAILABLE
    out["fs_bounds"] = fs

    if params.is_real:
        hb = B.hankel_second_bound(params, spec, B.HankelMethod.QUADRATIC)
        im = hb.intermediates
        out["hankel2_bound"] = hb.bound
        out["hankel2"] = {
            "quadratic": hb.quadratic_bound,
            "quadratic_branch": hb.quadratic_branch,
            "cases": UNAVAILABLE if hb.cases_bound is None else hb.cases_bound,
            "case": hb.case,
            "mismatch": hb.mismatch,
            "d1": im.d1, "d2": im.d2, "d3": im.d3,
            "P": im.P, "Q": im.Q, "R": im.R,
            "t_argmax": im.t_argmax,
        }
        notes.extend(hb.notes)
    else:
        out["hankel2_bound"] = UNAVAILABLE
        out["hankel2"] = UNAVAILABLE
        notes.append("gamma3, A4 and hankel2 bounds are unavailable for non-real alpha")
    for h in (lb.h, ib.h):
        if h is not None and h.region in ("D1", "D2", "D3", "D4", "D5", "D6", "D7"):
            if B.H_OVERLAP_NOTE not in notes:
                notes.append(B.H_OVERLAP_NOTE)
    return {"input": run.echo(), "bounds": out, "verification": [], "notes": notes}, EXIT_OK


def _functionals(run: RunSpec, real_alpha: bool):
    names = run.functional or DEFAULT_FUNCTIONALS
    wanted, skipped = [], []
    for name in names:
        if name == "fs":
            items = [parse_functional("fs", mu=m) for m in run.mu]
        elif name == "an" and not run.functional:
            items = [parse_functional("an", n=k) for k in range(2, run.nmax + 1)]
        else:
            items = [parse_functional(name, n=run.n)]
        for fn in items:
            (wanted if real_alpha or not fn.needs_real_alpha else skipped).append(fn)
    return list(dict.fromkeys(wanted)), list(dict.fromkeys(skipped))


def cmd_verify(run: RunSpec) -> tuple[dict, int]:
    params = ClassParams(run.alpha)
    try:
        wanted, skipped = _functionals(run, params.is_real)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    cfg = SearchConfig(trials=run.trials, grid_step=run.grid_step, refine_iters=run.refine_iters,
                       seed=run.seed, parameter_mode=ParameterMode(run.mode))
    notes = []
    reports = campaign(params, run.phi, wanted, cfg, jobs=run.jobs) if wanted else []
    verification = [r.to_json() for r in reports]
    for fn in skipped:
        verification.append({"functional": fn.label, "bound": UNAVAILABLE, "observed_max": UNAVAILABLE,
                             "sharpness_ratio": UNAVAILABLE, "violations": 0, "evaluations": 0})
        notes.append(f"{fn.label}: bound requires real alpha; not verified")
    bounds = {r.functional: r.bound for r in reports}
    bounds.update({fn.label: UNAVAILABLE for fn in skipped})
    violated = [r.functional for r in reports if r.violations]
    if violated:
        notes.append("bound violated: " + ", ".join(violated))
    doc = {"input": run.echo(), "bounds": bounds, "verification": verification, "notes": notes}
    return doc, EXIT_VIOLATION if violated else EXIT_OK


def _axis(rng: tuple[float, float], step: float) -> list[float]:
    lo, hi = rng
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 10) for k in range(count)]


def cmd_hmap(run: RunSpec) -> tuple[dict, int]:
    rows, notes = [], []
    status = EXIT_OK
    for q1 in _axis(run.q1, run.step):
        for q2 in _axis(run.q2, run.step):
            try:
                h = B.eval_H(q1, q2)
                rows.append({"q1": _fmt5(q1), "q2": _fmt5(q2), "region": h.region, "value": _fmt5(h.value)})
            except B.NoRegionMatched:
                rows.append({"q1": _fmt5(q1), "q2": _fmt5(q2), "region": "NoRegionMatched", "value": "nan"})
                status = EXIT_VIOLATION
    if status:
        notes.append("some grid points matched no region")
    notes.append(B.H_OVERLAP_NOTE)
    return {"input": run.echo(), "bounds": {"hmap": rows}, "verification": [], "notes": notes}, status


def cmd_series_debug(run: RunSpec) -> tuple[dict, int]:
    params = ClassParams(run.alpha)
    N = max(run.nmax, 4)
    phi = np.array([1.0, *coefficients(run.phi, N)])
    w = schwarz_coeffs(np.array(run.schur), N)
    a = member_coeffs(phi, params.alpha, w)
    prof = profile_arrays(a)
    inv = prof["inv"]
    out = {
        "phi": [_num(c) for c in phi],
        "schwarz": [_num(c) for c in w],
        "member": [_num(c) for c in a],
        "gamma": [_num(c) for c in prof["gamma"]],
        "inverse": [_num(c) for c in inv],
        "hankel2": _num(inv[0] * inv[2] - inv[1] ** 2),
    }
    return {"input": run.echo(), "bounds": out, "verification": [], "notes": []}, EXIT_OK


COMMANDS = {"bounds": cmd_bounds, "verify": cmd_verify, "hmap": cmd_hmap, "series-debug": cmd_series_debug}


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--phi", help="preset name (halfplane, exp, sqrt) or PhiSpec JSON")
    common.add_argument("--alpha", help='class parameter, "a" or "a+bi"')
    common.add_argument("--spec", dest="spec_file", metavar="FILE", help="JSON run specification")
    common.add_argument("--format", choices=("json", "csv", "table"))
    common.add_argument("--seed", type=int)
    common.add_argument("--mu", help="comma-separated Fekete-Szego parameters")
    common.add_argument("--nmax", type=int, help="largest coefficient index reported")

    parser = argparse.ArgumentParser(prog="coefbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("bounds", parents=[common], help="evaluate every closed-form bound")
    p.add_argument("--r", help="comma-separated radii in (0, 1)")
    p.add_argument("--terms", type=int, help="partial-sum order for distortion and growth")

    p = sub.add_parser("verify", parents=[common], help="brute-force check of the bounds")
    p.add_argument("--functional", action="append",
                   help="an, gamma1..3, A2..A4, fs or hankel2; repeatable")
    p.add_argument("--n", type=int, help="index for the an functional")
    p.add_argument("--trials", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--grid-step", dest="grid_step", type=float)
    p.add_argument("--refine-iters", dest="refine_iters", type=int)
    p.add_argument("--mode", choices=("real", "complex"))

    p = sub.add_parser("hmap", parents=[common], help="CSV map of H(q1, q2) with region labels")
    p.add_argument("--q1", help="range lo:hi")
    p.add_argument("--q2", help="range lo:hi")
    p.add_argument("--step", type=float)

    p = sub.add_parser("series-debug", parents=[common], help="expand one member and its functionals")
    p.add_argument("--schur", help="comma-separated Schur parameters of w")
    return parser


_SIGNED_FLAGS = ("--q1", "--q2", "--mu", "--alpha", "--r", "--schur")


def _attach_signed(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--q1 -5:5`` as ``--q1=-5:5`` so argparse does not read a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _SIGNED_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run_command(argv: Sequence[str] | None = None) -> tuple[str, int]:
    """Parse ``argv`` and return ``(output text, exit code)``."""
    argv = sys.argv[1:] if argv is None else argv
    args = _parser().parse_args(_attach_signed(argv))
    opts = vars(args)
    sub = opts.pop("subcommand")
    spec_file = opts.pop("spec_file", None)
    if sub == "hmap" and opts.get("format") is None:
        opts["format"] = "csv"
    spec_doc = None
    if spec_file is not None:
        try:
            with open(spec_file, encoding="utf-8") as fh:
                spec_doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read spec file: {exc}") from None
    run = build_runspec(sub, opts, spec_doc)
    doc, code = COMMANDS[sub](run)
    return render(doc, run.format), code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        text, code = run_command(argv)
    except (InvalidInput, PhiValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
