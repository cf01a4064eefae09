"""Command-line entry point: ``pnverify <command> ...``.

Exit status is 0 when everything requested passes, 1 when a check fails and
2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import PNVerifyError
from .geomcheck import MUTATIONS, SUITES, make_context, nijenhuis_spectrum, random_orbit_point, \
    run_suite, spectrum_match_residual
from .hermcat import FAMILY_TAGS, build_space, catalog
from .minimality import is_phi_minimal, nogo_report
from .repforge import default_rep, minimality_rep

REPORT_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
DEFAULT_SPACE = ("CI", 3, None)


def jsonable(obj):
    """Convert reports to plain JSON: rationals as "p/q", complex as {re, im}."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    return obj


def _space_from_args(args):
    tag = args.space or DEFAULT_SPACE[0]
    tag = tag.upper()
    if tag not in FAMILY_TAGS:
        raise argparse.ArgumentTypeError(f"unknown space {args.space!r}; choose from {FAMILY_TAGS}")
    n = args.n if args.n is not None else (DEFAULT_SPACE[1] if args.space is None else None)
    return build_space(tag, n, args.k)


def _rep(space, label):
    if label is None:
        return default_rep(space)
    return minimality_rep(space, label)


def _config(args) -> dict:
    keys = ("command", "space", "n", "k", "rep", "trials", "tol", "seed", "threads", "mutate",
            "suite", "target", "a")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _emit(args, payload: dict, text: str, ok: bool) -> int:
    doc = {"report_version": REPORT_VERSION, "version": __version__, "config": _config(args),
           "pass": bool(ok), **payload}
    if args.format == "json":
        out = json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_PASS if ok else EXIT_FAIL


# -- commands ----------------------------------------------------------------

def cmd_catalog(args) -> int:
    spaces = [_space_from_args(args)] if args.space else catalog()
    entries = [s.to_json() for s in spaces]
    lines = [f"{'space':<12} {'algebra':<10} {'k_phi':<22} rank  |Delta+_c|  |Delta+_n|"]
    for e in entries:
        lines.append(f"{e['space']:<12} {e['algebra']:<10} {e['k_phi']:<22} {e['rank']:<5} "
                     f"{e['n_compact_positive']:<10} {e['n_noncompact_positive']}")
    return _emit(args, {"spaces": entries}, "\n".join(lines), True)


def cmd_minimal(args) -> int:
    if args.action == "search":
        tag = {"e6": "EIII", "e7": "EVII"}[args.target.lower()]
        cert = nogo_report(build_space(tag))
        lines = [f"{cert.system}: label bound {cert.bound}, {len(cert.survivors)} survivor(s)"]
        for s in cert.survivors:
            wit = "trivial" if s.witness is None else "witness alpha={} beta={}".format(
                [str(x) for x in s.witness[0]], [str(x) for x in s.witness[1]])
            lines.append(f"  labels {list(s.labels)}  {wit}")
        lines.append(f"verdict: {cert.verdict}")
        ok = cert.verdict == "none exist"
        return _emit(args, {"certificate": cert.to_json()}, "\n".join(lines), ok)
    args.space = args.target
    space = _space_from_args(args)
    rep = _rep(space, args.rep)
    v = is_phi_minimal(rep, space)
    text = f"{space.tag} on {rep.name}: {'minimal' if v.is_minimal else 'not minimal'} ({v.reason})"
    if v.is_minimal:
        text += f"; Lambda_phi = i*{v.lambda_im}"
    return _emit(args, {"space": space.tag, "rep": rep.name, "verdict": v.to_json()}, text, True)


def cmd_verify(args) -> int:
    space = _space_from_args(args)
    ctx = make_context(space, _rep(space, args.rep) if args.rep else None, args.mutate)
    report = run_suite(args.suite, ctx, trials=args.trials, tol=args.tol, seed=args.seed,
                       threads=args.threads)
    worst = report.worst_entry
    lines = [
        f"suite {report.suite} on {report.space} ({report.rep})",
        f"seed {report.seed}  trials {report.trials}  tol {report.tolerance:g}",
        f"mutations: {', '.join(report.mutations) or 'none'}",
        f"max residual {report.max_residual:.3e}"
        + (f"  worst {worst.identity} {worst.residual:.3e} (tol {worst.tolerance:g})" if worst else ""),
        "PASS" if report.passed else "FAIL",
    ]
    return _emit(args, {"report": report.to_json()}, "\n".join(lines), report.passed)


def cmd_symbolic(args) -> int:
    from .symring import verify_eiii, verify_evii

    cert = verify_eiii() if args.target.lower() == "eiii" else verify_evii()
    lines = [f"{cert.name}: constants c={[str(c) for c in cert.constants.c]}, "
             f"(rho,rho)={cert.constants.rho_norm2}"]
    lines += [f"  {k}: {'ok' if v else 'FAILED'}" for k, v in sorted(cert.identities.items())]
    if cert.membership is not None:
        m = cert.membership
        lines.append(f"  target in span of {list(m.products)}: {m.is_member}")
        if not m.is_member:
            lines.append(f"  separating functional pairs to {m.pairing} with the target")
    if cert.axiomatized:
        lines.append("  eigen-rule d_N f_j = -2 f_j df_j axiomatized at this rank")
    lines.append("PASS" if cert.passed else "FAIL")
    return _emit(args, {"certificate": cert.to_json()}, "\n".join(lines), cert.passed)


def cmd_spectrum(args) -> int:
    space = _space_from_args(args)
    ctx = make_context(space, _rep(space, args.rep) if args.rep else None)
    rng = np.random.default_rng(args.seed)
    if args.a:
        a = [float(x) for x in args.a.split(",")]
    else:
        a = list(rng.uniform(-math.pi, math.pi, size=space.rank))
    sample = random_orbit_point(ctx, mode="slice", a=a)
    f = [0.5 * (math.cos(2 * aj) - 1) for aj in a]
    eigs = nijenhuis_spectrum(ctx, sample.mu)
    res = spectrum_match_residual(eigs, f)
    ok = res <= args.tol
    expected = [-2 * fj for fj in f]
    lines = [f"{space.tag} slice point a = {[round(x, 6) for x in a]}",
             "eigenvalues 2i(lambda - Lambda_phi): "
             + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in eigs),
             "slice prediction {0} U {-2 f_j}: " + ", ".join(f"{x:+.6f}" for x in expected),
             f"residual {res:.3e}", "PASS" if ok else "FAIL"]
    payload = {"space": space.tag, "a": a, "eigenvalues": [complex(z) for z in eigs],
               "expected": [0.0] + expected, "residual": res}
    return _emit(args, payload, "\n".join(lines), ok)


# -- parser ------------------------------------------------------------------

def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--seed", type=int, default=None, help="default: fresh entropy, echoed")
    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--space", help=f"one of {', '.join(FAMILY_TAGS)}")
    space.add_argument("--n", type=int)
    space.add_argument("--k", type=int)
    space.add_argument("--rep", choices=("fundamental", "spin", "half-spin"))
    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--trials", type=_positive_int, default=100)
    numeric.add_argument("--tol", type=_positive_float, default=1e-9)
    numeric.add_argument("--threads", type=_positive_int, default=1)

    p = argparse.ArgumentParser(prog="pnverify", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common, space], help="list the six families")
    c.set_defaults(func=cmd_catalog)

    m = sub.add_parser("minimal", parents=[common, space], help="minimality verdicts and searches")
    m.add_argument("action", choices=("search", "check"))
    m.add_argument("target", help="e6 | e7 for search; a space tag for check")
    m.set_defaults(func=cmd_minimal)

    v = sub.add_parser("verify", parents=[common, space, numeric], help="run a numerical suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--mutate", action="append", choices=MUTATIONS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("symbolic", parents=[common], help="exact slice-ring certificates")
    s.add_argument("target", choices=("eiii", "evii"))
    s.set_defaults(func=cmd_symbolic)

    sp = sub.add_parser("spectrum", parents=[common, space, numeric], help="Nijenhuis eigenvalues")
    sp.add_argument("--a", help="comma-separated slice coordinates")
    sp.set_defaults(func=cmd_spectrum)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (2 ** 63))
        print(f"seed: {args.seed}", file=sys.stderr)
    if args.command == "minimal" and args.action == "search" and args.target.lower() not in ("e6", "e7"):
        parser.error("minimal search expects e6 or e7")
    try:
        return args.func(args)
    except (PNVerifyError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
