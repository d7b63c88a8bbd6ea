"""Command-line front end.

Exit codes: 0 success, 1 a checked mathematical condition failed, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import checks, fluctuations as fl, gcs, unruh
from .errors import DomainError
from .fileio import FormatError, fmt, read_config, read_matrix_document

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FUNCTIONALS = ("riemann", "symplectic", "hermitian")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# Built-in integrands act on real coordinates x of shape (m, d): the (T, V)
# pair, the 2n phase-space coordinates, or (Re z, Im z) for the Hermitian case.
INTEGRANDS = {
    "one": lambda x: np.ones(x.shape[0]),
    "T2": lambda x: x[:, 0] ** 2,
    "q1": lambda x: x[:, 0],
    "absz2": lambda x: (x**2).sum(axis=1),
}


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _floats(text):
    try:
        return [float(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_sweep(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--sweep expects start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"--sweep expects start:stop:count, got {text!r}") from None
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"invalid sweep range {text!r}")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gcsfluct", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--n", type=_positive_int, default=2)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--input", help="matrix document with an extra candidate GCS to check")
    v.add_argument("--output")

    c = sub.add_parser("classify", help="print the type of a GCS")
    c.add_argument("--input", required=True)
    c.add_argument("--output")

    a = sub.add_parser("average", help="fluctuation averages as CSV")
    a.add_argument("--functional", choices=FUNCTIONALS, default="riemann")
    a.add_argument("--integrand", default="one")
    a.add_argument("--input", help="key = value configuration file")
    a.add_argument("--scheme", choices=(fl.GRID, fl.MONTE_CARLO))
    a.add_argument("--points", type=_positive_int)
    a.add_argument("--seed", type=int)
    a.add_argument("--g", type=_floats, help="metric coefficients g_TT,g_VV")
    a.add_argument("--h", type=_floats, help="diagonal of the Hermitian metric")
    a.add_argument("--n", type=_positive_int, default=1, help="half-dimension (symplectic)")
    a.add_argument("--output")

    u = sub.add_parser("unruh", help="Unruh sweep table as CSV")
    u.add_argument("--sweep", default="1:1:1", help="alpha start:stop:count")
    u.add_argument("--m", type=float, default=1.0)
    u.add_argument("--t", type=float, default=1.0)
    u.add_argument("--B", type=float, default=2.0 / 3.0)
    u.add_argument("--units", choices=("natural", "si"), default="natural")
    u.add_argument("--output")
    return p


def cmd_verify(args, out) -> int:
    candidate = None
    if args.input:
        kind, _, mat = read_matrix_document(args.input)
        if kind != "gcs":
            raise FormatError("verify --input expects a matrix document of kind 'gcs'")
        candidate = gcs.Gcs(mat)
    results = checks.run_all(args.n, args.seed, candidate)
    width = max(len(c.name) for c in results)
    for c in results:
        status = "PASS" if c.passed else "FAIL"
        out.write(f"{c.name:<{width}}  residual={c.residual:.3e}  tol={c.tol:.1e}  {status}\n")
    failed = [c.name for c in results if not c.passed]
    if failed:
        out.write(f"FAILED {len(failed)} of {len(results)}: {', '.join(failed)}\n")
        return EXIT_FAIL
    out.write(f"ALL PASS ({len(results)} checks)\n")
    return EXIT_OK


def _gcs_from_document(path) -> gcs.Gcs:
    kind, _, mat = read_matrix_document(path)
    if kind == "omega":
        return gcs.build_symplectic_gcs(gcs.SymplecticForm(mat))
    if kind == "J":
        return gcs.build_complex_gcs(gcs.ComplexStructure(mat))
    if kind == "B":
        raise FormatError("a two-form alone does not define a GCS")
    return gcs.Gcs(mat)


def cmd_classify(args, out) -> int:
    g = _gcs_from_document(args.input)
    report = gcs.verify_gcs(g)
    if not report.passed:
        bad = ", ".join(f"{c.name} (residual {c.residual:.3g})" for c in report.failed)
        print(f"not a generalized complex structure: violated {bad}", file=sys.stderr)
        return EXIT_FAIL
    out.write(f"type k = {gcs.gcs_type(g)}\n")
    return EXIT_OK


def cmd_average(args, out) -> int:
    if args.integrand not in INTEGRANDS:
        raise UsageError(f"unknown integrand {args.integrand!r}; choose from {', '.join(INTEGRANDS)}")
    cfg = read_config(args.input) if args.input else {}
    quad_kw = {k: cfg[k] for k in ("scheme", "points", "truncation", "seed") if k in cfg}
    for key in ("scheme", "points", "seed"):
        if getattr(args, key) is not None:
            quad_kw[key] = getattr(args, key)
    quad_kw.setdefault("points", 16 if args.functional == "symplectic" else 201)
    quad = fl.QuadratureSpec(**quad_kw)
    f = INTEGRANDS[args.integrand]

    if args.functional == "riemann":
        if args.g is not None:
            if len(args.g) != 2:
                raise UsageError("--g expects two values g_TT,g_VV")
            metric = fl.FluctuationMetric(*args.g)
        elif "g_TT" in cfg or "g_VV" in cfg:
            metric = fl.FluctuationMetric(cfg.get("g_TT", 1.0), cfg.get("g_VV", 1.0))
        elif "T" in cfg:
            state = fl.ThermoState(**{k: cfg[k] for k in ("T", "V", "C_V", "dPdV_T", "k_B") if k in cfg})
            metric = fl.fluctuation_metric(state)
        else:
            metric = fl.FluctuationMetric(1.0, 1.0)
        est = fl.riemann_average(lambda T, V: f(np.stack([T, V], axis=-1)), metric, quad)
    elif args.functional == "symplectic":
        omega = gcs.SymplecticForm.darboux(args.n)
        est = fl.symplectic_average(f, omega, [(0.0, 1.0)] * (2 * args.n), quad)
    else:
        h = np.diag(args.h if args.h is not None else [1.0])
        est = fl.hermitian_average(lambda z: f(np.concatenate([z.real, z.imag], axis=1)), h, quad)

    out.write("name,value,stderr\n")
    out.write(f"{args.functional}:{args.integrand},{fmt(est.value)},{fmt(est.stderr)}\n")
    return EXIT_OK


def cmd_unruh(args, out) -> int:
    alphas = parse_sweep(args.sweep)
    if not args.m > 0:
        raise UsageError("--m must be positive")
    if args.t < 0:
        raise UsageError("--t must be non-negative")
    pc = unruh.PhysicalConstants.si() if args.units == "si" else unruh.PhysicalConstants()
    bfield = unruh.BFieldSpec.constant(args.B)
    rows = []
    for alpha in alphas:
        fs = unruh.FrameSpec(alpha=float(alpha), m=args.m)
        T = unruh.unruh_temperature(fs.alpha, pc)
        rows.append((
            fs.alpha, T, unruh.unruh_phase(fs, args.t, pc),
            unruh.delta_xi(bfield, args.t, fs), unruh.thermal_exponent(args.m, T, pc),
        ))
    out.write("alpha,T,phase,delta_xi,thermal_exponent\n")
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "classify": cmd_classify, "average": cmd_average, "unruh": cmd_unruh}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except (UsageError, FormatError) as exc:
        print(f"gcsfluct {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        sys.stdout.write(buf.getvalue())
        print(f"gcsfluct {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if args.output:
        try:
            Path(args.output).write_text(buf.getvalue())
        except OSError as exc:
            print(f"gcsfluct: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
