"""Command-line entry point: ``qbcoorbit <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 not a frame, 3 I/O
failure, 4 invalid parameters.
"""
import argparse
import json
import math
import os
from pathlib import Path
import sys

import numpy as np

from . import __version__, io
from .errors import CoorbitError, NotAFrame
from .gabor import GaborSystem, canonical_dual, dgt, gaussian_window, idgt, raised_cosine_window
from .grid import modulate, translate
from .norms import QuasiNormSpec, amalgam_norm, parse_exponent, y_norm
from .nterm import decay_curve_from_coefficients, power_law_grid

EXIT_OK, EXIT_VERIFY, EXIT_FRAME, EXIT_IO, EXIT_PARAMS = 0, 1, 2, 3, 4
GENERATE_KINDS = ("gaussian", "raised-cosine", "random", "sparse-atoms", "power-law-grid")


class UsageError(ValueError):
    pass


def parse_lattice(text):
    try:
        L, a, M = (int(v) for v in str(text).split(","))
    except ValueError:
        raise UsageError(f"--lattice expects 'L,a,M', got {text!r}") from None
    return L, a, M


def parse_n_list(text):
    try:
        return sorted({int(v) for v in str(text).split(",") if v.strip()})
    except ValueError:
        raise UsageError(f"--n-list expects comma-separated integers, got {text!r}") from None


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (np.floating,)):
        return _json_value(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _config(args):
    skip = {"func", "command"}
    cfg = {k: _json_value(v) for k, v in sorted(vars(args).items()) if k not in skip}
    threads = os.environ.get("QBG_THREADS")
    if threads:
        cfg["threads"] = threads
    return cfg


def _report(args, **body):
    return {"command": args.command, "version": __version__, "seed": args.seed,
            "config": _config(args), **{k: _json_value(v) for k, v in body.items()}}


def _emit(report, path=None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if path:
        io.write_json(path, report)
    print(text)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def _window(args, L):
    if args.window is None:
        return gaussian_window(L)
    g = io.read_signal(args.window)
    if g.size != L:
        raise UsageError(f"window has length {g.size}, lattice says L={L}")
    return g


def _system(args, L=None):
    if args.lattice is None:
        raise UsageError(f"{args.command} needs --lattice L,a,M")
    Ll, a, M = parse_lattice(args.lattice)
    if L is not None and L != Ll:
        raise UsageError(f"input has length {L}, lattice says L={Ll}")
    return GaborSystem(_window(args, Ll), a, M)


def _load_weight(ref, base, shape=None):
    """Weight CSV by path (cwd first, then ``base``), reshaped row-major to ``shape``."""
    p = Path(ref)
    if not p.is_absolute() and not p.exists() and base is not None:
        p = Path(base) / p
    w = io.read_weight(p)
    if shape is not None and w.size == int(np.prod(shape)):
        w = w.reshape(shape)
    return w


# ---------------------------------------------------------------- commands

def cmd_generate(args):
    kind = args.kind
    rng = np.random.default_rng(args.seed)
    if kind == "power-law-grid":
        _need(args, "lattice")
        L, a, M = parse_lattice(args.lattice)
        if L % a or L % M:
            raise UsageError(f"lattice (a={a}, M={M}) must divide L={L}")
        c = power_law_grid((L // a, M), args.p, rng)
        io.write_grid(args.output, c, {"L": L, "a": a, "M": M})
        return EXIT_OK
    L = args.L
    if L is None and args.lattice is not None:
        L = parse_lattice(args.lattice)[0]
    if L is None or L < 2:
        raise UsageError("generate needs -L >= 2 (or --lattice)")
    if kind == "gaussian":
        f = gaussian_window(L)
    elif kind == "raised-cosine":
        f = raised_cosine_window(L)
    elif kind == "random":
        f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    else:
        system = _system(args, L)
        total = system.N * system.M
        if not 1 <= args.k <= total:
            raise UsageError(f"need 1 <= k <= {total} atoms, got {args.k}")
        f = np.zeros(L, dtype=complex)
        for idx in rng.choice(total, size=args.k, replace=False):
            n, m = divmod(int(idx), system.M)
            f += modulate(translate(system.window, n * system.a), m * system.b)
    io.write_signal(args.output, f)
    return EXIT_OK


def cmd_dgt(args):
    f = io.read_signal(args.input)
    system = _system(args, f.size)
    io.write_grid(args.output, dgt(f, system), system.lattice())
    return EXIT_OK


def cmd_idgt(args):
    c, lattice = io.read_grid(args.input)
    if args.lattice is None:
        if lattice is None:
            raise UsageError("grid has no lattice sidecar; pass --lattice")
        args.lattice = f"{lattice['L']},{lattice['a']},{lattice['M']}"
    system = _system(args)
    if c.shape != system.shape:
        raise UsageError(f"grid shape {c.shape} does not match lattice {system.shape}")
    window = system.dual_window if args.synthesis == "dual" else system.window
    f = idgt(c, system, window)
    io.write_signal(args.output, f)
    if args.reference is not None:
        ref = io.read_signal(args.reference)
        if ref.size != f.size:
            raise UsageError(f"reference has length {ref.size}, expected {f.size}")
        denom = np.linalg.norm(ref)
        err = float(np.linalg.norm(f - ref) / denom) if denom > 0 else float(np.linalg.norm(f))
        _emit(_report(args, relative_error=err))
    return EXIT_OK


def cmd_dual(args):
    system = _system(args)
    gamma = canonical_dual(system, args.method)
    io.write_signal(args.output, gamma)
    fd = system.frame
    _emit(_report(args, A=fd.A, B=fd.B, condition=fd.condition))
    return EXIT_OK


def _read_any(path):
    if io.is_grid_file(path):
        return io.read_grid(path)[0]
    return io.read_signal(path)


def cmd_norm(args):
    _need(args, "input", "spec")
    x = _read_any(args.input)
    raw = json.loads(Path(args.spec).read_text())
    spec = QuasiNormSpec.from_dict(raw, lambda ref: _load_weight(ref, Path(args.spec).parent, x.shape))
    out = {"norm": y_norm(x, spec), "spec": raw}
    if args.radius is not None:
        am = amalgam_norm(x, args.radius, spec)
        out["amalgam"] = am
        out["ratio"] = am / out["norm"] if out["norm"] > 0 else 1.0
    _emit(_report(args, **out), args.output)
    return EXIT_OK


def cmd_nterm_curve(args):
    _need(args, "input", "output", "p", "q")
    if io.is_grid_file(args.input):
        c, lattice = io.read_grid(args.input)
        coeff_source = "grid"
    else:
        f = io.read_signal(args.input)
        system = _system(args, f.size)
        c = dgt(f, system, system.dual_window)
        lattice = system.lattice()
        coeff_source = "dual-frame coefficients"
    m = None
    if args.weight is not None:
        m = io.read_weight(args.weight).reshape(c.shape)
    n_values = parse_n_list(args.n_list) if args.n_list else None
    curve = decay_curve_from_coefficients(c, args.p, args.q, m, n_values)
    rows = ["n,sigma"] + [f"{n},{e!r}" for n, e in curve.csv_rows()]
    io.atomic_write(args.output, ("\n".join(rows) + "\n").encode())
    report = _report(args, lattice=lattice, coefficients=coeff_source, **curve.summary())
    _emit(report, args.output + ".json")
    return EXIT_OK


def cmd_verify(args):
    from .verify import run_suite

    results = run_suite(args.suite, args.seed, args.inject_fault)
    checks = {suite: [c.to_dict() for c in cs] for suite, cs in results.items()}
    passed = all(c["passed"] for cs in checks.values() for c in cs)
    for cs in results.values():
        for c in cs:
            print(c.line(), file=sys.stderr)
    _emit(_report(args, passed=passed, suites=checks), args.output)
    return EXIT_OK if passed else EXIT_VERIFY


# ------------------------------------------------------------------ parser

def build_parser():
    parser = argparse.ArgumentParser(prog="qbcoorbit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=0, help="u64 seed for randomized steps")
        p.add_argument("--config", help="JSON file of flag defaults (flags win)")
        return p

    p = add("generate", cmd_generate, "write a test signal or coefficient grid")
    p.add_argument("kind", choices=GENERATE_KINDS)
    p.add_argument("-L", type=int)
    p.add_argument("--lattice")
    p.add_argument("--window")
    p.add_argument("-k", type=int, default=1, help="number of atoms for sparse-atoms")
    p.add_argument("-p", type=parse_exponent, default=0.5, help="exponent for power-law-grid")
    p.add_argument("-o", "--output", required=True)

    p = add("dgt", cmd_dgt, "analysis: signal -> coefficient grid")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lattice")
    p.add_argument("--window")

    p = add("idgt", cmd_idgt, "synthesis: coefficient grid -> signal")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lattice")
    p.add_argument("--window", help="analysis window; the dual is computed from it")
    p.add_argument("--synthesis", choices=("dual", "window"), default="dual")
    p.add_argument("--reference", help="signal to compare against; prints the relative error")

    p = add("dual", cmd_dual, "canonical dual window")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lattice")
    p.add_argument("--window")
    p.add_argument("--method", choices=("dense", "neumann"), default="dense")

    p = add("norm", cmd_norm, "evaluate a quasi-norm from a JSON spec")
    p.add_argument("-i", "--input")
    p.add_argument("--spec")
    p.add_argument("--radius", type=int)
    p.add_argument("-o", "--output", help="also write the JSON report here")

    p = add("nterm-curve", cmd_nterm_curve, "greedy n-term error curve")
    p.add_argument("-i", "--input")
    p.add_argument("-o", "--output", help="CSV path; the summary goes to <output>.json")
    p.add_argument("--lattice")
    p.add_argument("--window")
    p.add_argument("-p", type=parse_exponent)
    p.add_argument("-q", type=parse_exponent)
    p.add_argument("--weight", help="CSV weight over the flattened grid")
    p.add_argument("--n-list")

    p = add("verify", cmd_verify, "run property and acceptance checks")
    p.add_argument("--suite", choices=("norms", "frames", "coorbit", "nterm", "all"), default="all")
    p.add_argument("--inject-fault", choices=("none", "dropped-weight"), default="none")
    p.add_argument("-o", "--output", help="also write the JSON report here")
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config`` so explicit flags still win."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = json.loads(Path(args.config).read_text())
    if not isinstance(cfg, dict):
        raise UsageError("--config must hold a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest for a in sub._actions}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    sub.set_defaults(**cfg)
    args = parser.parse_args(argv)
    for action in sub._actions:
        if action.type is not None and isinstance(getattr(args, action.dest, None), str) \
                and action.dest in cfg:
            setattr(args, action.dest, action.type(getattr(args, action.dest)))
    return args


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except NotAFrame as exc:
        print(json.dumps({"error": "NotAFrame", "A": _json_value(exc.A), "B": _json_value(exc.B),
                          "message": str(exc)}), file=sys.stderr)
        return EXIT_FRAME
    except (OSError, io.FormatError) as exc:
        print(f"qbcoorbit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, CoorbitError, KeyError, json.JSONDecodeError) as exc:
        print(f"qbcoorbit: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
