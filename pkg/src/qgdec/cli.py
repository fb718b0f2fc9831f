"""Command-line front end.

Exit codes: 0 success, 2 user error, 3 internal invariant violation. Every
command prints an effective-config banner (all defaults resolved) to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .analysis import CollapseConfig, InsufficientData, collapse_fit, points_from_csv
from .codes import (
    AtLeast, BUILTIN_NAMES, BudgetExceeded, CodeParseError, StabilizerCode, ValidationError,
    get_code, load_code, validate, verify_distance,
)
from .decoder import DecodeConfig, SyndromeMismatch, decode
from .graphext import ExtractionInvalid, NormalFormError, describe, dump_json, extract, to_dot
from .sim import CSV_HEADER, CapReached, RunConfig, csv_row, parse_noise, run_until_failures, t_over_n

LISTED = ("five_qubit", "steane", "noncss11", "noncss17", "noncss25", "noncss29",
          "color:3", "color:5", "color:7", "surface:3", "surface:5", "surface:7")


class UserError(Exception):
    pass


def _banner(command: str, **cfg) -> None:
    print(f"# qgdec {__version__} {command} " + json.dumps(cfg, sort_keys=True, default=str), file=sys.stderr)


def resolve_code(name: str) -> StabilizerCode:
    """Registry name, or path to a code file."""
    if os.path.isfile(name):
        with open(name) as fh:
            code = load_code(fh.read(), name=os.path.basename(name))
        validate(code)
        return code
    return get_code(name)


def _parse_T(text: str | None, code: StabilizerCode) -> int | None:
    if text is None or text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise UserError(f"--t must be an integer or 'auto', got {text!r}") from None


def _parse_range(text: str, parts: int) -> list[float]:
    try:
        vals = [float(v) for v in text.split(":")]
    except ValueError:
        raise UserError(f"bad range {text!r}") from None
    if len(vals) != parts:
        raise UserError(f"range {text!r} needs {parts} colon-separated numbers")
    return vals


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("QGDEC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UserError(f"QGDEC_THREADS must be an integer, got {env!r}") from None
    return 1


# --- codes -----------------------------------------------------------------

def cmd_codes(args) -> int:
    _banner("codes", action=args.action, target=args.target, wmax=args.wmax)
    if args.action == "list":
        print("registry:", ", ".join(BUILTIN_NAMES))
        for name in LISTED:
            c = get_code(name)
            print(f"{name:12s} [[{c.n},{c.k},{c.d}]] css={str(c.css).lower()}")
        return 0
    if not args.target:
        raise UserError(f"codes {args.action} needs a code name or file")
    if args.action == "validate":
        try:
            code = resolve_code(args.target)
        except CodeParseError as exc:
            line = f" (line {exc.line})" if exc.line else ""
            print(f"invalid{line}: {exc}", file=sys.stderr)
            return 2
        except ValidationError as exc:
            print(f"invalid: {exc}", file=sys.stderr)
            return 2
        print(f"ok: {code.name} [[{code.n},{code.k},{code.d}]] css={str(code.css).lower()}")
        return 0
    code = resolve_code(args.target)
    wmax = args.wmax if args.wmax is not None else code.d
    dist = verify_distance(code, wmax)
    print(str(dist))
    if not isinstance(dist, AtLeast) and dist != code.d:
        print(f"warning: declared d={code.d}", file=sys.stderr)
    return 0


# --- extract ---------------------------------------------------------------

def cmd_extract(args) -> int:
    code = resolve_code(args.code)
    left = None
    if args.left:
        try:
            left = [int(v) - 1 for v in args.left.split(",")]
        except ValueError:
            raise UserError(f"bad --left list {args.left!r}") from None
    _banner("extract", code=code.name, left=args.left or "lowest-index", json=args.json, dot=args.dot)
    ext = extract(code, left)
    print(f"nodes={code.n} left={len(ext.left)} right={len(ext.right)} "
          f"phase={len(ext.phase_nodes)} bipartite={str(ext.is_bipartite_lr()).lower()}")
    print(describe(ext))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dump_json(ext) + "\n")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(ext, code.name))
    return 0


# --- decode ----------------------------------------------------------------

def cmd_decode(args) -> int:
    code = resolve_code(args.code)
    T = code.n if args.mld else _parse_T(args.t, code)
    cfg = DecodeConfig(T=T, prune=not args.no_prune, structured=not args.no_structured,
                       css_fastpath=False if args.no_css else None, exhaustive_mld=args.mld).resolve(code)
    syn = args.syndrome.strip()
    if len(syn) != code.n - code.k or set(syn) - {"0", "1"}:
        raise UserError(f"syndrome must be {code.n - code.k} bits of 0/1, got {syn!r}")
    _banner("decode", code=code.name, syndrome=syn, T=cfg.T, prune=cfg.prune,
            structured=cfg.structured, css_fastpath=cfg.css_fastpath, mld=cfg.exhaustive_mld)
    ext = extract(code)
    res = decode(code, ext, syn, cfg)
    print(f"correction {res.correction}")
    print(f"weight {res.weight}")
    print(f"branch {res.branch}")
    print(f"branch_weights {list(res.branch_weights)}")
    print(f"explored {res.explored}")
    print(f"bounded {str(res.bounded).lower()}")
    return 0


# --- simulate / sweep ------------------------------------------------------

def _open_csv(path: str, force_header: bool):
    exists = os.path.isfile(path) and os.path.getsize(path) > 0
    if exists and not force_header:
        with open(path, newline="") as fh:
            header = next(csv.reader(fh), None)
        if header and tuple(header) != CSV_HEADER:
            raise UserError(f"{path} has a different header; use --force-header to rewrite")
        fh = open(path, "a", newline="")
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        if not header:
            writer.writeheader()
    else:
        fh = open(path, "w", newline="")
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
    return fh, writer


def _p_grid(text: str) -> list[float]:
    a, b, step = _parse_range(text, 3)
    if step <= 0 or b < a:
        raise UserError("--p-grid needs a <= b and step > 0")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(count)]


def _run_points(args, codes: list[str], ps: list[float | None]) -> int:
    workers = _workers(args)
    fh = writer = None
    if args.csv:
        fh, writer = _open_csv(args.csv, args.force_header)
    try:
        for name in codes:
            code = resolve_code(name)
            cfg = DecodeConfig(T=_parse_T(args.t, code)).resolve(code)
            ext = extract(code)
            for p in ps:
                model = parse_noise(args.noise, p)
                run = RunConfig(seed=args.seed, target_failures=args.failures,
                                max_shots=args.max_shots, workers=workers, decode_cfg=cfg)
                _banner(args.command, code=code.name, noise=model.describe(), T=cfg.T, seed=args.seed,
                        failures=args.failures, max_shots=args.max_shots, workers=workers,
                        prune=cfg.prune, structured=cfg.structured, css_fastpath=cfg.css_fastpath)

                def progress(m, ml):
                    if args.verbose:
                        print(f"  shots={m} failures={ml} pL={ml / m:.3g}", file=sys.stderr)

                try:
                    res = run_until_failures(code, ext, model, run, progress)
                except CapReached as exc:
                    res = exc.result
                    print(f"CAP REACHED: {exc}", file=sys.stderr)
                row = csv_row(code, model, cfg.T, args.seed, res)
                flag = " capped" if res.capped else ""
                print(f"{code.name} {model.describe()} t/N={t_over_n(code):.3f} "
                      f"M={res.M} ML={res.M_L} pL={res.p_L:.6g} stderr={res.stderr:.3g}{flag}")
                if writer:
                    writer.writerow(row)
                    fh.flush()
    finally:
        if fh:
            fh.close()
    return 0


def cmd_simulate(args) -> int:
    return _run_points(args, [c for c in args.code.split(",") if c], [None])


PRESETS = {
    "full-color": (["color:3", "color:5", "color:7", "color:9"], "0.06:0.14:0.005"),
    "full-surface": (["surface:3", "surface:5", "surface:7", "surface:9"], "0.06:0.14:0.005"),
}


def cmd_sweep(args) -> int:
    if args.preset:
        codes, grid = PRESETS[args.preset]
        codes = args.code.split(",") if args.code else codes
        grid = args.p_grid or grid
        args.noise = args.noise or "bitflip"
    else:
        if not args.code or not args.p_grid or not args.noise:
            raise UserError("sweep needs --code, --noise and --p-grid (or --preset)")
        codes, grid = args.code.split(","), args.p_grid
    return _run_points(args, [c for c in codes if c], _p_grid(grid))


# --- collapse --------------------------------------------------------------

def cmd_collapse(args) -> int:
    lo, hi = _parse_range(args.window, 2)
    cfg = CollapseConfig(window=(lo, hi), poly_degree=args.degree)
    _banner("collapse", csv=args.csv, window=[lo, hi], degree=args.degree,
            pc_step=cfg.pc_step, nu_range=list(cfg.nu_range), nu_step=cfg.nu_step)
    if not os.path.isfile(args.csv):
        raise UserError(f"no such file {args.csv}")
    points = points_from_csv(args.csv)
    if args.family:
        rows = []
        with open(args.csv, newline="") as fh:
            for row, pt in zip(csv.DictReader(fh), points):
                if row["code"].split(":")[0] == args.family:
                    rows.append(pt)
        points = rows
    fit = collapse_fit(points, cfg)
    text = fit.to_json()
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if not fit.converged:
        print("warning: refinement did not converge; best grid point reported", file=sys.stderr)
    return 0


# --- entry point -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qgdec", description="Graph-based bounded distance decoding of stabilizer codes.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="list, validate or check the distance of codes")
    p.add_argument("action", choices=["list", "validate", "distance"])
    p.add_argument("target", nargs="?")
    p.add_argument("--wmax", type=int)
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("extract", help="extract the equivalent graph")
    p.add_argument("--code", required=True)
    p.add_argument("--json")
    p.add_argument("--dot")
    p.add_argument("--left", help="comma-separated 1-based left nodes")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("decode", help="decode one syndrome")
    p.add_argument("--code", required=True)
    p.add_argument("--syndrome", required=True)
    p.add_argument("--t", default="auto")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--no-structured", action="store_true")
    p.add_argument("--no-css", action="store_true", help="use the generic decoder on CSS codes")
    p.add_argument("--mld", action="store_true", help="search all supports (T = N)")
    p.set_defaults(func=cmd_decode)

    for name, fn in (("simulate", cmd_simulate), ("sweep", cmd_sweep)):
        p = sub.add_parser(name, help="Monte Carlo logical error rate" + (" over a p grid" if name == "sweep" else ""))
        p.add_argument("--code", required=(name == "simulate"))
        p.add_argument("--noise", required=(name == "simulate"))
        p.add_argument("--failures", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int)
        p.add_argument("--max-shots", type=int, default=10_000_000)
        p.add_argument("--t", default="auto")
        p.add_argument("--csv")
        p.add_argument("--force-header", action="store_true")
        p.add_argument("--verbose", action="store_true")
        if name == "sweep":
            p.add_argument("--p-grid")
            p.add_argument("--preset", choices=sorted(PRESETS), help="full-scale long run settings")
        p.set_defaults(func=fn)

    p = sub.add_parser("collapse", help="finite-size-scaling collapse fit")
    p.add_argument("--csv", required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--family", help="restrict to rows of one code family")
    p.add_argument("--out")
    p.set_defaults(func=cmd_collapse)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExtractionInvalid, NormalFormError, SyndromeMismatch) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (UserError, KeyError, ValueError, CodeParseError, ValidationError,
            InsufficientData, BudgetExceeded, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
