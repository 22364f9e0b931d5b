"""Command-line front end: ``qshape <subcommand> ...``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
usage or domain errors. Errors are reported on stderr as a single line
``error: <Code>: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

import numpy as np

from . import io as qio
from .census import Rect, enumerate_fields, theorem_ratio_report
from .densities import M_star, alpha, n_tau_vector, psi, psi_star, VALID_TAUS
from .errors import QShapeError
from .fields import Type, pure_quartic_field
from .gram import gram, gram_perp, shape_params
from .quadratic import to_float
from .reduction import BOUNDARY_TOL, in_F3, iwasawa, minkowski_reduce
from . import verify as qverify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(QShapeError):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message.replace("\n", " "))


def _setting(args, config: dict, key: str, default):
    val = getattr(args, key, None)
    if val is not None:
        return val
    return config.get(key, default)


def _fmt_matrix_exact(M) -> list[list[str]]:
    return [[str(v) for v in row] for row in M]


def _fmt_matrix_float(M) -> list[list[str]]:
    return [[qio.fmt_float(float(v)) for v in row] for row in np.asarray(M, dtype=float)]


def _emit(out, fmt: str, record: dict, text_lines: list[str]) -> None:
    if fmt == "json":
        out.write(qio.dumps(record) + "\n")
    else:
        out.write("\n".join(text_lines) + "\n")


# -- subcommands ---------------------------------------------------------------------


def cmd_classify(args, config, out) -> int:
    f = pure_quartic_field(args.m)
    _, l1sq, l2 = shape_params(f.counting_form)
    cf, ff = f.counting_form, f.funakura_form
    rec = {
        "m": f.m,
        "counting_form": [cf.a, cf.b, cf.c],
        "funakura_form": [ff.a, ff.b, ff.c],
        "funakura_m": f.funakura_m,
        "type": f.typ.value,
        "sign": "+" if f.sign > 0 else "-",
        "class": f.cls.label,
        "disc": f.discriminant,
        "lambda1_sq": str(l1sq),
        "lambda2": str(l2),
    }
    lines = [f"{k}: {' '.join(map(str, v)) if isinstance(v, list) else v}" for k, v in rec.items()]
    _emit(out, _setting(args, config, "format", "text"), rec, lines)
    return EXIT_OK


def cmd_shape(args, config, out) -> int:
    f = pure_quartic_field(args.m)
    g4, g3 = gram(f), gram_perp(f)
    g3f = to_float(g3)
    exact = not args.float
    fmt = _fmt_matrix_exact if exact else _fmt_matrix_float
    tol = _setting(args, config, "boundary_tol", BOUNDARY_TOL)
    iw = iwasawa(g3f)
    rec = {
        "m": f.m,
        "class": f.cls.label,
        "gram4": fmt(g4 if exact else to_float(g4)),
        "gram3": fmt(g3 if exact else g3f),
        "iwasawa": {k: getattr(iw, k) for k in ("x1", "x2", "x3", "y1", "y2")},
        "in_F3": in_F3(g3f, tol),
    }
    if args.reduce:
        red, u = minkowski_reduce(g3f, tol)
        rec["reduced"] = _fmt_matrix_float(red)
        rec["unimodular"] = u.astype(int).tolist()
        rec["reduced_in_F3"] = in_F3(red, tol)
    lines = [f"m: {f.m}", f"class: {f.cls.label}"]
    for key in ("gram4", "gram3") + (("reduced", "unimodular") if args.reduce else ()):
        lines.append(f"{key}:")
        lines += ["  " + " ".join(map(str, row)) for row in rec[key]]
    lines.append("iwasawa: " + " ".join(f"{k}={qio.fmt_float(v)}" for k, v in rec["iwasawa"].items()))
    lines.append(f"in_F3: {rec['in_F3']}")
    if args.reduce:
        lines.append(f"reduced_in_F3: {rec['reduced_in_F3']}")
    _emit(out, _setting(args, config, "format", "text"), rec, lines)
    return EXIT_OK


def _signs(text: str) -> tuple[int, ...]:
    return {"+": (1,), "-": (-1,), "both": (1, -1)}[text]


def _types(text: str | None):
    if text is None:
        return None
    try:
        return [Type(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"unknown type in {text!r}") from None


def _open_out(path: str | None, out):
    if path is None or path == "-":
        return out, False
    try:
        return open(path, "w", newline=""), True
    except OSError as e:
        raise QShapeError(f"{path}: {e.strerror}") from None


def cmd_enumerate(args, config, out) -> int:
    if (args.max_disc is None) == (args.max_N is None):
        raise UsageError("give exactly one of --max-disc and --max-N")
    threads = qio.resolve_threads(args.threads, config)
    rect = Rect.parse(args.rect) if args.rect else None
    max_disc = Fraction(args.max_disc) if args.max_disc is not None else None
    N = Fraction(args.max_N) if args.max_N is not None else None
    fe = enumerate_fields(N, max_disc=max_disc, types=_types(args.types), signs=_signs(args.sign),
                          rect=rect, tau=args.tau, threads=threads)
    dest, close = _open_out(args.out, out)
    try:
        qio.write_fields_csv(fe.sorted_by_disc(), dest, fe.excluded_8divm)
    finally:
        if close:
            dest.close()
    return EXIT_OK


def cmd_verify(args, config, out) -> int:
    threads = qio.resolve_threads(args.threads, config)
    if args.suite == "gram":
        checks = qverify.verify_gram(args.max_m, min(args.max_m, args.numeric_max_m))
    elif args.suite == "densities":
        checks = qverify.verify_densities(tuple(args.l or (3, 5, 7, 11, 13)), args.max_b)
    elif args.suite == "lipschitz":
        checks = qverify.verify_lipschitz(tuple(args.M or qverify.DEFAULT_M_GRID),
                                          tuple(args.R or qverify.DEFAULT_R_GRID))
    else:
        checks = qverify.verify_counting(args.N, args.R1, args.R2, args.tau,
                                         _setting(args, config, "rel_tol", 0.15), threads)
    ok = all(c.passed for c in checks)
    rec = {"suite": args.suite, "status": "pass" if ok else "fail",
           "checks": [c.as_dict() for c in checks]}
    out.write(qio.dumps(rec) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_densities(args, config, out) -> int:
    w = csv.writer(out, lineterminator="\n")
    if args.tau is not None:
        tau = args.tau % 32
        if tau not in VALID_TAUS:
            raise UsageError(f"tau={args.tau}: need 8 not dividing tau")
        w.writerow(["b", "n_tau", "alpha", "psi_tau"])
        acc = 0.0
        for b in range(1, args.max_b + 1):
            nt = n_tau_vector(b)[tau]
            acc += nt * alpha(b)
            w.writerow([b, nt, qio.fmt_float(alpha(b)), qio.fmt_float(acc)])
        return EXIT_OK
    types = _types(args.types) or list(Type)
    w.writerow(["b", "alpha", "psi"] + [f"M_{t.value}" for t in types] + [f"psi_{t.value}" for t in types])
    for b in range(1, args.max_b + 1):
        w.writerow([b, qio.fmt_float(alpha(b)), qio.fmt_float(psi(b))]
                   + [str(M_star(t, b)) for t in types]
                   + [qio.fmt_float(psi_star(t, b)) for t in types])
    return EXIT_OK


def _edges(text: str) -> list[float]:
    vals = [float(v) for v in text.split(",")]
    if len(vals) < 2 or any(b <= a for a, b in zip(vals, vals[1:])) or vals[0] < 1:
        raise UsageError(f"edges must increase from >= 1, got {text!r}")
    return vals


def cmd_histogram(args, config, out) -> int:
    threads = qio.resolve_threads(args.threads, config)
    typ = Type(args.type)
    sign = _signs(args.sign)[0]
    r1, r2 = _edges(args.r1_edges), _edges(args.r2_edges)
    X = Fraction(args.max_disc)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["bin", "empirical", "predicted", "ratio"])
    for lo1, hi1 in zip(r1, r1[1:]):
        for lo2, hi2 in zip(r2, r2[1:]):
            rep = theorem_ratio_report(typ, sign, X, Rect(lo1, hi1, lo2, hi2), threads)
            ratio = rep.empirical / rep.predicted if rep.predicted else float("nan")
            label = f"({lo1:g},{hi1:g}]x({lo2:g},{hi2:g}]"
            w.writerow([label, rep.empirical, qio.fmt_float(rep.predicted), qio.fmt_float(ratio)])
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qshape", description="Shapes of pure quartic fields.")
    p.add_argument("--config", help="key=value file (threads, format, boundary_tol, rel_tol)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", help="normal forms, type and discriminant of K_m")
    s.add_argument("m", type=int)
    s.add_argument("--format", choices=("text", "json"))
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("shape", help="Gram matrices, Iwasawa coordinates and reduction")
    s.add_argument("m", type=int)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact entries (default)")
    g.add_argument("--float", action="store_true", help="floating entries")
    s.add_argument("--reduce", action="store_true")
    s.add_argument("--format", choices=("text", "json"))
    s.add_argument("--boundary-tol", dest="boundary_tol", type=float)
    s.set_defaults(func=cmd_shape)

    s = sub.add_parser("enumerate", help="CSV of fields up to a bound")
    s.add_argument("--max-disc", dest="max_disc", type=str)
    s.add_argument("--max-N", dest="max_N", type=str)
    s.add_argument("--types", help="comma separated, e.g. I,II")
    s.add_argument("--sign", choices=("+", "-", "both"), default="both")
    s.add_argument("--rect", help="R1lo,R1hi,R2lo,R2hi (closed)")
    s.add_argument("--tau", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv",), default="csv")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify", help="run an invariant suite, JSON report")
    s.add_argument("suite", choices=("gram", "counting", "densities", "lipschitz"))
    s.add_argument("--max-m", dest="max_m", type=int, default=2000)
    s.add_argument("--numeric-max-m", dest="numeric_max_m", type=int, default=2000)
    s.add_argument("--l", type=int, action="append")
    s.add_argument("--max-b", dest="max_b", type=int, default=50)
    s.add_argument("--M", type=float, action="append")
    s.add_argument("--R", type=float, action="append")
    s.add_argument("--N", type=float, default=1e6)
    s.add_argument("--R1", type=float, default=4.0)
    s.add_argument("--R2", type=float, default=3.0)
    s.add_argument("--tau", type=int, default=3)
    s.add_argument("--rel-tol", dest="rel_tol", type=float)
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("densities", help="CSV of alpha, psi, M_* or n_tau")
    s.add_argument("--max-b", dest="max_b", type=int, default=20)
    s.add_argument("--types")
    s.add_argument("--tau", type=int)
    s.set_defaults(func=cmd_densities)

    s = sub.add_parser("histogram", help="empirical vs predicted over a grid of rectangles")
    s.add_argument("--type", required=True, choices=[t.value for t in Type])
    s.add_argument("--sign", choices=("+", "-"), default="+")
    s.add_argument("--max-disc", dest="max_disc", required=True)
    s.add_argument("--r1-edges", dest="r1_edges", default="1,2,4")
    s.add_argument("--r2-edges", dest="r2_edges", default="1,2,3")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_histogram)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        config = qio.load_config(args.config) if args.config else {}
        fmt = _setting(args, config, "format", None)
        if fmt not in (None, "text", "json", "csv"):
            raise qio.ConfigError(f"unknown format {fmt!r}")
        return args.func(args, config, out)
    except QShapeError as e:
        print(f"error: {e.code}: {e}".replace("\n", " "), file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as e:
        print(f"error: DomainError: {e}".replace("\n", " "), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
