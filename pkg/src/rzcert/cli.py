"""Command-line front door.

Every subcommand reads polynomial/pencil JSON, dispatches to the library, and
prints a deterministic JSON report (identical config => identical bytes).
Exit codes: 0 pass, 1 fail with witness, 2 inconclusive, 3 input/usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__, corpus
from .detrep import ConstructionError, construct
from .interlace import interlaces_sampled, psd_interlacing_check
from .pencil import (MatrixPencil, PencilFormatError, cauchy_cross_check,
                     realify, verify_lmi)
from .poly import HomogeneousPolynomial, homogenize
from .polyio import (PolyFormatError, load_poly, poly_to_json_dict)
from .report import FAIL, INCONCLUSIVE, PASS
from .rz import (hermite_matrix, hermite_psd_check, is_rz_sampled,
                 membership_report, renegar_derivative)
from .scalars import FLOAT, RATIONAL

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_poly_arg(path, mode=None):
    text = _read_input(path)
    try:
        p = load_poly(text)
    except PolyFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if mode == FLOAT and p.mode == RATIONAL:
        p = p.to_float()
    elif mode == RATIONAL and p.mode == FLOAT:
        raise UsageError(f"{path}: float input cannot be promoted to exact mode")
    return p


def _load_pencil_arg(path):
    text = _read_input(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}") from exc
    embedded_poly = None
    if isinstance(data, dict) and "pencil" in data:
        embedded_poly = data.get("poly")
        data = data["pencil"]
    try:
        return MatrixPencil.from_json_dict(data), embedded_poly
    except PencilFormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _parse_point(text, nvars, mode):
    if text is None:
        return tuple([Fraction(0)] * nvars) if mode == RATIONAL \
            else tuple([0.0] * nvars)
    parts = [t.strip() for t in text.split(",") if t.strip() != ""]
    if len(parts) != nvars:
        raise UsageError(f"point has {len(parts)} coordinates, expected {nvars}")
    try:
        if mode == RATIONAL:
            return tuple(Fraction(t) for t in parts)
        return tuple(float(Fraction(t)) for t in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point coordinate: {exc}") from exc


def _emit(report, args):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(args, command, status, body):
    config = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func",) and v is not None}
    return {"tool": "rzcert", "version": __version__, "command": command,
            "config": config, "status": status, **body}


def _status_exit(status):
    return {PASS: EXIT_PASS, FAIL: EXIT_FAIL,
            INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(status, EXIT_FAIL)


# ---------------------------------------------------------------------------
# subcommands


def cmd_rz_check(args):
    p = _load_poly_arg(args.poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    verdict = is_rz_sampled(p, x0, num_lines=args.lines, tol=args.tol,
                            seed=args.seed, threads=args.threads)
    status = {"rz-confirmed-sampled": PASS, "not-rz": FAIL,
              "inconclusive": INCONCLUSIVE}[verdict.status]
    body = {"verdict": verdict.status, "lines": verdict.lines_tested,
            "tol": verdict.tol}
    if verdict.witness:
        body["witness"] = verdict.witness
    _emit(_envelope(args, "rz-check", status, body), args)
    return _status_exit(status)


def cmd_hermite(args):
    p = _load_poly_arg(args.poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    H = hermite_matrix(p, x0)
    rep = hermite_psd_check(H, num_samples=args.samples, tol=args.tol,
                            seed=args.seed)
    body = {"psd": rep.to_json_dict(),
            "matrix": [[poly_to_json_dict(e) for e in row]
                       for row in H.matrix.entries]}
    _emit(_envelope(args, "hermite", rep.status, body), args)
    return _status_exit(rep.status)


def cmd_renegar(args):
    p = _load_poly_arg(args.poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    q = renegar_derivative(p, x0, args.k)
    body = {"k": args.k, "poly": poly_to_json_dict(q)}
    _emit(_envelope(args, "renegar", PASS, body), args)
    return EXIT_PASS


def cmd_member(args):
    p = _load_poly_arg(args.poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    x = _parse_point(args.x, p.nvars, p.mode)
    rep = membership_report(p, x0, x, tol=args.tol)
    _emit(_envelope(args, "member", rep.status, {"report": rep.to_json_dict()}),
          args)
    return _status_exit(rep.status)


def cmd_interlace(args):
    p = _load_poly_arg(args.poly, args.mode)
    q = _load_poly_arg(args.q_poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    m = int(p.degree())
    P = homogenize(p, m)
    if q.nvars == p.nvars + 1:
        Q = HomogeneousPolynomial.from_polynomial(q, m - 1)
    elif q.nvars == p.nvars:
        Q = homogenize(q, m - 1)
    else:
        raise UsageError("interlacer has incompatible variable count")
    try:
        chain = interlaces_sampled(P, Q, x0, num_lines=args.lines,
                                   tol=args.tol, seed=args.seed)
        psd = psd_interlacing_check(P, Q, x0, samples=args.samples,
                                    tol=args.tol, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    agree = chain.status == psd.status
    status = chain.status if agree else INCONCLUSIVE
    body = {"alternation": chain.to_json_dict(), "bezoutiant": psd.to_json_dict(),
            "verdicts_agree": agree}
    _emit(_envelope(args, "interlace", status, body), args)
    return _status_exit(status)


def cmd_construct(args):
    p = _load_poly_arg(args.poly, args.mode)
    x0 = _parse_point(args.point, p.nvars, p.mode)
    interlacer = None
    if args.q_poly:
        q = _load_poly_arg(args.q_poly, args.mode)
        m = int(p.degree())
        interlacer = (HomogeneousPolynomial.from_polynomial(q, m - 1)
                      if q.nvars == p.nvars + 1 else homogenize(q, m - 1))
    elif args.derivative_point:
        interlacer = _parse_point(args.derivative_point, p.nvars, p.mode)
    try:
        pencil, trace = construct(p, x0, interlacer=interlacer, seed=args.seed,
                                  tol=args.tol)
    except (ConstructionError, ValueError) as exc:
        body = {"error": str(exc),
                "stage": getattr(exc, "stage", "precondition")}
        _emit(_envelope(args, "construct", FAIL, {"witness": body}), args)
        return EXIT_FAIL
    body = {"pencil": pencil.to_json_dict(), "poly": poly_to_json_dict(p),
            "trace": trace.to_json_dict()}
    _emit(_envelope(args, "construct", PASS, body), args)
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            json.dump(trace.to_json_dict(), fh, sort_keys=True, indent=2)
    return EXIT_PASS


def cmd_verify(args):
    pencil, embedded = _load_pencil_arg(args.pencil)
    if args.poly:
        p = _load_poly_arg(args.poly)
    elif embedded is not None:
        from .polyio import poly_from_json_dict
        p = poly_from_json_dict(embedded)
    else:
        raise UsageError("verify needs --poly (or a construct report with an "
                         "embedded polynomial)")
    if p.mode != pencil.mode:
        if pencil.mode == FLOAT:
            p = p.to_float()
    x0 = _parse_point(args.point, p.nvars, p.mode)
    rep, h = verify_lmi(pencil, p, x0, tol=args.tol, samples=args.samples,
                        seed=args.seed)
    body = {"report": rep.to_json_dict()}
    if h is not None:
        body["h"] = poly_to_json_dict(h)
    _emit(_envelope(args, "verify", rep.status, body), args)
    return _status_exit(rep.status)


def cmd_cross_check(args):
    pencil, embedded = _load_pencil_arg(args.pencil)
    if args.poly:
        p = _load_poly_arg(args.poly)
    elif embedded is not None:
        from .polyio import poly_from_json_dict
        p = poly_from_json_dict(embedded)
    else:
        raise UsageError("cross-check needs --poly or an embedded polynomial")
    x0 = _parse_point(args.point, pencil.d, FLOAT)
    try:
        rep = cauchy_cross_check(pencil, p, x0, num_lines=args.lines,
                                 tol=args.tol, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_envelope(args, "cross-check", rep.status,
                    {"report": rep.to_json_dict()}), args)
    return _status_exit(rep.status)


def cmd_realify(args):
    pencil, _ = _load_pencil_arg(args.pencil)
    doubled = realify(pencil)
    _emit(_envelope(args, "realify", PASS, {"pencil": doubled.to_json_dict()}),
          args)
    return EXIT_PASS


def cmd_corpus(args):
    if args.action == "list":
        _emit(_envelope(args, "corpus", PASS,
                        {"instances": corpus.corpus_names()}), args)
        return EXIT_PASS
    if not args.name:
        raise UsageError("corpus emit needs an instance name")
    try:
        inst = corpus.get_instance(args.name)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    p = inst.p.to_float() if args.mode == FLOAT else inst.p
    text = json.dumps(poly_to_json_dict(p), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, poly=False, point=False, pencil=False):
    sp.add_argument("--mode", choices=[RATIONAL, FLOAT], default=None,
                    help="coefficient mode override")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--lines", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--out", default=None, help="write the JSON report here")
    if poly:
        sp.add_argument("--poly", default="-",
                        help="polynomial file (JSON or text); '-' for stdin")
    if point:
        sp.add_argument("--point", default=None,
                        help="base point, comma-separated (default: origin)")
    if pencil:
        sp.add_argument("--pencil", default="-",
                        help="pencil JSON (or construct report); '-' for stdin")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="rzcert",
        description="real-zero certification and determinantal representations")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rz-check", help="sampled real-zero test")
    _add_common(sp, poly=True, point=True)
    sp.set_defaults(func=cmd_rz_check)

    sp = sub.add_parser("hermite", help="Hermite matrix + sampled PSD check")
    _add_common(sp, poly=True, point=True)
    sp.set_defaults(func=cmd_hermite)

    sp = sub.add_parser("renegar", help="k-th Renegar derivative")
    _add_common(sp, poly=True, point=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_renegar)

    sp = sub.add_parser("member", help="nested-derivative membership test")
    _add_common(sp, poly=True, point=True)
    sp.add_argument("--x", required=True, help="query point")
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("interlace", help="alternation + Bezoutiant PSD verdicts")
    _add_common(sp, poly=True, point=True)
    sp.add_argument("--q-poly", required=True, help="candidate interlacer")
    sp.set_defaults(func=cmd_interlace)

    sp = sub.add_parser("construct",
                        help="build a positive self-adjoint representation")
    _add_common(sp, poly=True, point=True)
    sp.add_argument("--q-poly", default=None, help="explicit interlacer")
    sp.add_argument("--derivative-point", default=None,
                    help="take the derivative interlacer at this point")
    sp.add_argument("--trace-out", default=None)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="certify a pencil against a polynomial")
    _add_common(sp, poly=False, point=True, pencil=True)
    sp.add_argument("--poly", default=None,
                    help="polynomial file; defaults to the one embedded in a "
                             "construct report")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cross-check",
                        help="diagonal cofactors vs basepoint definiteness")
    _add_common(sp, poly=False, point=True, pencil=True)
    sp.add_argument("--poly", default=None)
    sp.set_defaults(func=cmd_cross_check)

    sp = sub.add_parser("realify", help="hermitian -> real symmetric doubling")
    _add_common(sp, pencil=True)
    sp.set_defaults(func=cmd_realify)

    sp = sub.add_parser("corpus", help="list or emit named instances")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--mode", choices=[RATIONAL, FLOAT], default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_corpus)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (PolyFormatError, PencilFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
