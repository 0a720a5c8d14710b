"""Command-line front end.

Subcommands: ``models`` (catalog listing), ``peaks`` (Bragg peak sweep to
CSV/JSON/SVG), ``window`` (window rendering), ``verify`` (model check
suites), ``patch`` (inflation patch export).  Exit codes: 0 success,
1 usage error, 2 verification failure, 3 missing data.

The environment variable ``TILEDIFF_OUTDIR`` sets the default output
directory.  All numeric output is deterministic: identical configuration
produces byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import Surd
from .models import ModelDataError, builtin, builtin_names, load_displacement
from . import diffraction, inflation, windows
from .verify import FAIL, run_verification

__all__ = ["main"]

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NODATA = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _outdir() -> Path:
    return Path(os.environ.get("TILEDIFF_OUTDIR", "."))


def _load_model(args):
    model = builtin(args.model)
    if getattr(args, "data", None):
        model = model.with_displacement(load_displacement(args.data))
    return model


def _parse_exact_length(token: str) -> Surd:
    """Parse 'p', 'p/q', 'p*sqrt2', or combinations 'a+b*sqrt2'/'a-b*sqrt2'."""
    token = token.strip().replace(" ", "")
    if "." in token or "e" in token.lower():
        raise UsageError(
            f"length {token!r} is not exact; use rationals in 1 and sqrt2 "
            "(e.g. 4-2*sqrt2) or the equal-lengths preset")

    def atom(s: str) -> Surd:
        neg = s.startswith("-")
        s = s.lstrip("+-")
        if s.endswith("sqrt2"):
            s = s[:-5].rstrip("*")
            q = Fraction(s) if s else Fraction(1)
            out = Surd.root(2, q)
        else:
            out = Surd.rational(Fraction(s))
        return -out if neg else out

    total = Surd()
    start = 0
    for i in range(1, len(token)):
        if token[i] in "+-" and token[i - 1] not in "+-*/":
            total = total + atom(token[start:i])
            start = i
    total = total + atom(token[start:])
    return total


def _resolve_deformation(model, spec: str):
    if spec.startswith("from-lengths:"):
        if model.field.name != "silver":
            raise UsageError("from-lengths applies to the silver models only")
        parts = spec.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise UsageError("from-lengths needs two lengths, e.g. "
                             "from-lengths:4-2*sqrt2,4-2*sqrt2")
        la, lb = (_parse_exact_length(p) for p in parts)
        try:
            return diffraction.deformation_from_lengths(la, lb)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if spec not in model.deformations:
        raise UsageError(
            f"model {model.name!r} has no deformation {spec!r}; "
            f"available: {sorted(model.deformations)}")
    return model.deformations[spec]


def _parse_weights(token: str):
    if token in ("equal", "zero-central"):
        return token
    try:
        return [complex(x) for x in token.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse weights {token!r}") from exc


# ---------------------------------------------------------------------------
# Subcommands

def cmd_models(args) -> int:
    rows = []
    for name in builtin_names():
        m = builtin(name)
        rows.append({
            "name": name,
            "field": m.field.name,
            "tiles": m.n_tiles,
            "deformations": sorted(m.deformations),
            "displacement": "loaded" if m.has_displacement
                            else "none (load required)",
            "fourier_module": m.fourier_module_doc,
        })
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            defs = ",".join(r["deformations"]) or "-"
            print(f"{r['name']:16s} field={r['field']:8s} tiles={r['tiles']:<3d} "
                  f"deformations={defs:24s} displacement: {r['displacement']}")
    return EXIT_OK


def cmd_peaks(args) -> int:
    model = _load_model(args)
    if not model.has_displacement:
        print(f"error: model {model.name!r} needs displacement data "
              "(--data FILE)", file=sys.stderr)
        return EXIT_NODATA
    deformation = _resolve_deformation(model, args.deformation) \
        if args.deformation else None
    weights = _parse_weights(args.weights)
    center = [float(x) for x in args.center.split(",")] if args.center \
        else None
    if center is not None and len(center) != model.dim:
        raise UsageError(f"center needs {model.dim} coordinates")
    peaks = diffraction.peak_list(
        model, center=center, radius=args.radius,
        internal_cutoff=args.internal_cutoff, threshold=args.threshold,
        weights=weights, deformation=deformation, n=args.iters,
        threads=args.threads)

    base = args.out or f"peaks_{model.name}" + (
        f"_{deformation.name}" if deformation is not None else "")
    outdir = _outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    diffraction.peaks_to_csv(peaks, outdir / f"{base}.csv")
    diffraction.peaks_to_json(peaks, outdir / f"{base}.json")
    diffraction.peaks_to_svg(peaks, outdir / f"{base}.svg")

    brightest = peaks[0].intensity if peaks else 0.0
    print(f"{len(peaks)} peaks with intensity >= {args.threshold:g}; "
          f"brightest {brightest:.9g}; wrote {base}.csv/.json/.svg in {outdir}")
    if deformation is not None and deformation.periods:
        resid = diffraction.periodicity_residual(
            model, deformation, weights, n_samples=20, n=args.iters)
        gens = "; ".join(
            "(" + ", ".join(format(x, ".9g") for x in p.embed_phys()) + ")"
            for p in deformation.periods)
        print(f"intensity is lattice-periodic: period generators {gens} "
              f"(max residual {resid:.3g})")
    return EXIT_OK


def cmd_window(args) -> int:
    model = _load_model(args)
    if not model.has_displacement:
        print(f"error: model {model.name!r} needs displacement data "
              "(--data FILE)", file=sys.stderr)
        return EXIT_NODATA
    generations = args.generations
    if generations is None:
        generations = 22 if model.dim == 1 else 12
    cloud = windows.iterate_windows(model, generations,
                                    resolution=args.resolution)
    zoom = None
    if args.zoom:
        lo, hi = (float(x) for x in args.zoom.split(","))
        zoom = (lo, hi)
    outdir = _outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / (args.out or f"window_{model.name}.svg")
    windows.render_windows(cloud, out, model=model, zoom=zoom)
    v, br = windows.volume(cloud)
    print(f"window cloud generation {cloud.generation}, cell {cloud.cell_size:.3g}; "
          f"total volume {v:.6g} (+- {br:.2g}); wrote {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    model = _load_model(args)
    checks, ok = run_verification(model)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{c.name:{width}s}  {c.status:4s}  {c.detail}")
    n_fail = sum(c.status == FAIL for c in checks)
    print(f"{len(checks)} checks, {n_fail} failed")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_patch(args) -> int:
    model = _load_model(args)
    if not model.has_displacement:
        print(f"error: model {model.name!r} needs displacement data "
              "(--data FILE)", file=sys.stderr)
        return EXIT_NODATA
    patch = inflation.inflate(inflation.seed_patch(model), model, args.steps)
    if args.radius is not None:
        patch = inflation.truncate(patch, args.radius)
    outdir = _outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / (args.out or f"patch_{model.name}.csv")
    inflation.patch_to_csv(patch, out, model=model)
    print(f"{len(patch)} control points after {args.steps} steps; wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="tilediff",
                description="Bragg spectra of cut-and-project tilings "
                            "via the internal Fourier cocycle")
    sub = p.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("models", help="list built-in models")
    pm.add_argument("--json", action="store_true")
    pm.set_defaults(func=cmd_models)

    def add_model_args(sp):
        sp.add_argument("--model", required=True, choices=builtin_names())
        sp.add_argument("--data", help="displacement JSON file to load")

    pp = sub.add_parser("peaks", help="compute a Bragg peak list")
    add_model_args(pp)
    pp.add_argument("--deformation")
    pp.add_argument("--weights", default="equal")
    pp.add_argument("--center")
    pp.add_argument("--radius", type=float, default=0.6)
    pp.add_argument("--internal-cutoff", type=float, default=None)
    pp.add_argument("--threshold", type=float, default=1e-6)
    pp.add_argument("--iters", type=int, default=None)
    pp.add_argument("--threads", type=int, default=1)
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_peaks)

    pw = sub.add_parser("window", help="render window clouds to SVG")
    add_model_args(pw)
    pw.add_argument("--generations", type=int, default=None,
                    help="IFS iterations (default 22 in 1d, 12 in 2d)")
    pw.add_argument("--resolution", type=int, default=None,
                    help="grid bits: cell = diameter * 2^-resolution")
    pw.add_argument("--zoom", help="lo,hi zoom strip for 1d windows")
    pw.add_argument("--out")
    pw.set_defaults(func=cmd_window)

    pv = sub.add_parser("verify", help="run model verification checks")
    add_model_args(pv)
    pv.set_defaults(func=cmd_verify)

    pa = sub.add_parser("patch", help="export an inflation patch as CSV")
    add_model_args(pa)
    pa.add_argument("--steps", type=int, default=6)
    pa.add_argument("--radius", type=float, default=None)
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_patch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModelDataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_NODATA
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
