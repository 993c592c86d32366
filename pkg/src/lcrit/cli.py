"""Command-line front end.

Grids go to CSV (``# `` comment lines carry the configuration), structured
reports to JSON (with a ``config`` object). Exit codes: 0 success, 1 a
numerical failure or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import LcritError


# -- helpers ---------------------------------------------------------------------

class UsageError(Exception):
    pass


def parse_range(text):
    """'a:b:step' -> inclusive grid a, a+step, ..., <= b."""
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected start:stop:step") from None
    if len(parts) == 1:
        return np.array(parts)
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise UsageError(f"bad range {text!r}; expected start:stop:step with step > 0")
    a, b, h = parts
    count = int(math.floor((b - a) / h + 1e-9)) + 1
    return a + h * np.arange(count)


def _config(args):
    # worker count does not affect results, so it stays out of the echo
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "jobs")}
    cfg["version"] = __version__
    cfg["LCRIT_TOL"] = os.environ.get("LCRIT_TOL")
    return cfg


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def write_csv(args, columns, rows, notes=()):
    fh, close = _open_out(args.out)
    try:
        for key, value in _config(args).items():
            fh.write(f"# {key}: {value}\n")
        for note in notes:
            fh.write(f"# {note}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            fh.close()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def write_json(args, payload):
    fh, close = _open_out(args.out)
    try:
        json.dump(_jsonable({"config": _config(args), **payload}), fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _character(args):
    from .characters import get_character

    return get_character(args.q, args.index)


def _case(text):
    if text == "log":
        return "log"
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"n must be 'log' or an integer >= -1, got {text!r}") from None
    if n < -1:
        raise argparse.ArgumentTypeError("n must be >= -1")
    return n


def _spec(args):
    from .extremal import ExtremalSpec, Kind

    sign = 1 if args.sign in ("+", "plus", "1", "+1") else -1
    if args.kind == "poisson":
        return ExtremalSpec.poisson(sign, args.sigma - 0.5, args.delta)
    return ExtremalSpec(Kind(args.kind), sign, args.sigma, args.delta, args.m)


# -- subcommands -----------------------------------------------------------------

def cmd_chars(args):
    from .characters import enumerate_primitive_characters

    rows = []
    for q in range(args.q_min, args.q_max + 1) if args.q is None else [args.q]:
        for chi in enumerate_primitive_characters(q):
            k = chi.root_number
            rows.append((chi.q, chi.label, chi.parity, chi.order, int(chi.is_real), k.real, k.imag))
    write_csv(args, ["q", "index", "parity", "order", "real", "root_number_re", "root_number_im"], rows)
    return 0


def cmd_lfun(args):
    from .lfunc import eval_L_and_prime_many

    chi = _character(args)
    t = parse_range(args.t_range)
    s = args.sigma + 1j * t
    L, dL, err = eval_L_and_prime_many(s, chi)
    rows = [(ti, v.real, v.imag, abs(v), d.real, d.imag, e) for ti, v, d, e in zip(t, L, dL, err)]
    write_csv(args, ["t", "L_re", "L_im", "L_abs", "dL_re", "dL_im", "error"], rows)
    return 0


def cmd_zeros(args):
    from .zeros import export_zeros, find_zeros

    chi = _character(args)
    zeros = find_zeros(chi, args.height, grid_step=args.step)
    if args.out in (None, "-"):
        for g in zeros.ordinates:
            print(repr(g))
    else:
        export_zeros(zeros, args.out)
    print(f"{len(zeros)} zeros of {chi.name} with |gamma| <= {args.height}", file=sys.stderr)
    return 0


def cmd_iterates(args):
    from .iterates import S_many

    chi = _character(args)
    t = parse_range(args.t_range)
    vals = S_many(args.n, args.sigma, t, chi, jobs=args.jobs)
    write_csv(args, ["t", "S", "error"], [(v.t, v.value, v.error) for v in vals])
    return 0


def cmd_extremal(args):
    from .extremal import extremal_eval, extremal_fourier, l1_distance, target_eval

    spec = _spec(args)
    if args.report:
        rep = l1_distance(spec)
        write_json(args, {"spec": spec.label, "l1_real_space": rep.real_space, "l1_fourier": rep.fourier,
                          "discrepancy": rep.discrepancy, "min_gap": rep.min_gap})
        return 0
    if args.fourier:
        xi = parse_range(args.x_range)
        write_csv(args, ["xi", "fourier"], zip(xi, extremal_fourier(spec, xi)))
        return 0
    x = parse_range(args.x_range)
    g = extremal_eval(spec, x)
    f = target_eval(spec, x)
    gap = spec.sign * (g - f)
    write_csv(args, ["x", "target", "extremal", "gap"], zip(x, f, g, gap),
              notes=[f"spec: {spec.label}", f"min gap: {float(np.min(gap))!r}"])
    return 1 if np.min(gap) < -1e-9 else 0


def cmd_gw(args):
    from .explicit_formula import gw_evaluate
    from .zeros import find_zeros, import_zeros

    chi = _character(args)
    if args.zeros:
        zeros = import_zeros(args.zeros, chi)
    else:
        zeros = find_zeros(chi, args.height)
    spec = _spec(args)
    reports = [gw_evaluate(chi, spec, t, zeros, max_tail=args.max_tail).to_dict()
               for t in parse_range(args.t)]
    write_json(args, {"spec": spec.label, "reports": reports})
    return 0


def cmd_bounds(args):
    from .bounds import theorem_compare
    from .iterates import S_many
    from .lfunc import eval_L_many

    chi = _character(args)
    t = parse_range(args.t_range)
    if args.n == "log":
        vals = np.log(np.abs(eval_L_many(args.sigma + 1j * t, chi)))
    else:
        vals = [v.value for v in S_many(args.n, args.sigma, t, chi, jobs=args.jobs)]
    rows, outside = [], []
    for ti, v in zip(t, vals):
        rep = theorem_compare(args.n, args.sigma, ti, chi, float(v), c=args.c)
        rows.append((rep.t, rep.C, rep.value, rep.M_plus, rep.M_minus, rep.ell, rep.r, rep.ratio))
        if not rep.in_range:
            outside.append(_fmt(rep.t))
    notes = [f"omega: {_fmt(rep.omega)}", f"case: {rep.case}"]
    if outside:
        notes.append("outside theorem range: t = " + " ".join(outside))
        print(f"warning: {len(outside)} points outside the range (1-sigma)^2 loglog C >= {args.c}",
              file=sys.stderr)
    write_csv(args, ["t", "C", "S", "M_plus", "M_minus", "ell", "r", "ratio"], rows, notes)
    return 0


def _suite_repr(args):
    from .characters import get_character
    from .verify import REPR_BAND, check_pin, representation_residual
    from .zeros import find_zeros

    chi = get_character(args.q, args.index)
    zeros = find_zeros(chi, args.height)
    ts = parse_range(args.t_range)
    out, ok = [], True
    for which in ("log", "odd0", "odd1", "minus1"):
        r = representation_residual(which, args.sigma, ts, chi, zeros)
        s = r.summary()
        s["within_band"] = r.sup < REPR_BAND
        ok &= s["within_band"]
        if (chi.q, chi.label, args.sigma) == (4, 1, 0.75):
            s["within_pin"] = check_pin(f"repr/{which}", r.sup)
            ok &= s["within_pin"]
        out.append(s)
    return ok, out


def _suite_altsum(args):
    from .verify import alternating_sum_grid

    res = alternating_sum_grid()
    ok = all(r.holds() for r in res)
    return ok, {"points": len(res), "all_hold": ok,
                "min_lower_margin": min(r.lower_margin for r in res),
                "min_upper_margin": min(r.upper_margin for r in res)}


def _ratio_suite(cases):
    from .verify import prime_sum_asymptotics

    ok, out = True, []
    for case, p in cases:
        tb = prime_sum_asymptotics(case, p)
        good = abs(tb.ratios[-1] - 1) <= 0.15 and tb.improving
        ok &= good
        out.append(tb.to_dict() | {"within_15pct_and_improving": good})
    return ok, out


def _suite_primesum(args):
    return _ratio_suite([("log_weighted", 0.7), ("reflected", 0.7)])


def _suite_symsum(args):
    return _ratio_suite([("symmetric", 0.2)])


def _suite_logshift(args):
    from .verify import log_shift_check, log_shift_random

    ok, margin = log_shift_random(samples=args.samples)
    edge = log_shift_check(25, -25) and log_shift_check(0, 0)
    return ok and edge, {"samples": args.samples, "all_hold": ok, "min_margin": margin, "boundary_cases": edge}


def _suite_pipeline(args):
    from .characters import get_character
    from .verify import pipeline_replay

    chi = get_character(args.q, args.index)
    reps = [pipeline_replay(args.sigma, t, chi) for t in parse_range(args.t_range)]
    ok = all(abs(r.identity_closed - r.identity_quad) <= 1e-10 and not r.violated for r in reps)
    return ok, [r.to_dict() for r in reps]


SUITES = {"repr": _suite_repr, "altsum": _suite_altsum, "primesum": _suite_primesum, "symsum": _suite_symsum,
          "logshift": _suite_logshift, "pipeline": _suite_pipeline}


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results, ok = {}, True
    for name in names:
        passed, detail = SUITES[name](args)
        results[name] = {"passed": passed, "detail": detail}
        ok &= passed
        print(f"{name}: {'pass' if passed else 'FAIL'}", file=sys.stderr)
    write_json(args, {"suites": results, "passed": ok})
    return 0 if ok else 1


# -- parser ----------------------------------------------------------------------

def _add_char(p, required=True):
    p.add_argument("--q", type=int, required=required, help="modulus")
    p.add_argument("--index", type=int, default=1, help="1-based label among primitive characters mod q")


def _add_spec(p):
    p.add_argument("--kind", choices=["log", "odd", "poisson"], default="log")
    p.add_argument("--sign", default="+", help="+ for the majorant, - for the minorant")
    p.add_argument("--sigma", type=float, default=0.75, help="sigma (beta + 1/2 for poisson)")
    p.add_argument("--delta", type=float, default=1.0, help="Fourier support half-width")
    p.add_argument("--m", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="lcrit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"lcrit {__version__}")
    ap.add_argument("--tol", type=float, help="tolerance scale (same as LCRIT_TOL)")
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="list primitive characters")
    p.add_argument("--q", type=int)
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("lfun", help="L(sigma + it) on a grid of t")
    _add_char(p)
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--t-range", default="0:50:1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lfun)

    p = sub.add_parser("zeros", help="zeros with |gamma| <= height (zero-file format)")
    _add_char(p)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("iterates", help="S_{n,sigma}(t) on a grid")
    _add_char(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t-range", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_iterates)

    p = sub.add_parser("extremal", help="extremal functions on a grid, or their L1 report")
    _add_spec(p)
    p.add_argument("--x-range", default="-50:50:0.01")
    p.add_argument("--fourier", action="store_true", help="tabulate the Fourier transform instead")
    p.add_argument("--report", action="store_true", help="JSON L1 distance report")
    p.add_argument("--dump-grid", action="store_true", help="plot-ready columns (the default output)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("gw", help="explicit-formula balance for an extremal test function")
    _add_char(p)
    _add_spec(p)
    p.add_argument("--zeros", help="zero file (otherwise computed to --height)")
    p.add_argument("--height", type=float, default=60.0)
    p.add_argument("--t", default="0", help="centre or range a:b:step")
    p.add_argument("--max-tail", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gw)

    p = sub.add_parser("bounds", help="computed values against the envelopes")
    _add_char(p)
    p.add_argument("--n", type=_case, required=True, help="'log' or an integer >= -1")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t-range", required=True)
    p.add_argument("--c", type=float, default=0.1, help="range constant")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="verification suites (JSON summary)")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    _add_char(p, required=False)
    p.set_defaults(q=4)
    p.add_argument("--sigma", type=float, default=0.75)
    p.add_argument("--t-range", default="5:50:0.5")
    p.add_argument("--height", type=float, default=150.0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.tol is not None:
        os.environ["LCRIT_TOL"] = repr(args.tol)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.error(str(exc))
    except OSError as exc:
        print(f"lcrit {args.command}: {exc}", file=sys.stderr)
        return 2
    except LcritError as exc:
        print(f"lcrit {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
