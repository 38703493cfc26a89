"""Command-line entry point.

Exit codes: 0 success, 2 argument error (usage on stderr), 1 computation
error (JSON ``{"error": code, "detail": ...}`` on stdout).
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from . import analysis, divisors, localmodel, monodromy, potential, symmetry
from .errors import LawsonError, TraceTargetFailure
from .integrator import ToleranceBudget
from .serialize import document, dumps, profile_lines

_IMAG_UNIT = re.compile(r"(^|[+\-])i$")


def parse_complex(text: str) -> complex:
    """Accepts '1.5', '0.3-0.2i', 'i', '-2i', '2+0i' (and the same with j)."""
    s = text.strip().replace(" ", "").lower().replace("j", "i")
    if not s:
        raise ValueError("empty complex literal")
    s = _IMAG_UNIT.sub(lambda m: m.group(1) + "1i", s)
    if "i" in s and not s.endswith("i"):
        raise ValueError(f"malformed complex literal {text!r}")
    z = complex(s.replace("i", "j"))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite value {text!r}")
    return z


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonzero_complex(text):
    z = _complex_arg(text)
    if z == 0:
        raise argparse.ArgumentTypeError("zeta must be nonzero")
    return z


def _tol_arg(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None
    if not (math.isfinite(v) and 1e-13 <= v < 1):
        raise argparse.ArgumentTypeError("tol must lie in [1e-13, 1)")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_params(sp, zeta=True):
    if zeta:
        sp.add_argument("--zeta", type=_nonzero_complex, required=True)
    sp.add_argument("--A", type=_complex_arg, required=True)
    sp.add_argument("--G", type=_complex_arg, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lawson", description="Monodromy and divisor toolkit "
                                 "for the Lawson genus-2 potential.")
    ap.add_argument("--out", help="write JSON here instead of standard output")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("spin-table", help="theta characteristics and their pullbacks")

    sp = sub.add_parser("residues", help="residue matrices at the four punctures")
    _add_params(sp)

    sp = sub.add_parser("monodromy", help="generator monodromy or apparent-point probe")
    _add_params(sp)
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--k", type=int, choices=(1, 2, 3, 4))
    which.add_argument("--apparent", choices=("0", "inf"))
    sp.add_argument("--tol", type=_tol_arg, default=1e-10)

    sp = sub.add_parser("symmetry-check", help="form and trace symmetry reports")
    _add_params(sp)
    sp.add_argument("--samples", type=_positive_int, default=100)
    sp.add_argument("--tol", type=_tol_arg, default=1e-10)

    sp = sub.add_parser("scan", help="trace profiles around the unit circle")
    _add_params(sp, zeta=False)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--tol", type=_tol_arg, default=1e-10)
    sp.add_argument("--workers", type=_positive_int, default=1)

    sp = sub.add_parser("unitarize", help="solve for (A, G) from target traces")
    sp.add_argument("--zeta", type=_nonzero_complex, required=True)
    sp.add_argument("--t12", type=_complex_arg, required=True)
    sp.add_argument("--t14", type=_complex_arg, required=True)
    sp.add_argument("--init-A", dest="init_A", type=_complex_arg, required=True)
    sp.add_argument("--init-G", dest="init_G", type=_complex_arg, required=True)
    sp.add_argument("--tol", type=float, default=1e-8, help="trace residual target")

    sp = sub.add_parser("localmodel", help="flatness of the associated family for constant data")
    sp.add_argument("--u-const", dest="u_const", type=float, default=0.0)
    sp.add_argument("--q-const", dest="q_const", type=_complex_arg, default=2 + 0j)
    sp.add_argument("--zeta", type=_nonzero_complex, required=True)
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--h", type=float, default=0.01)
    return ap


def _budget(tol):
    return ToleranceBudget(rel_tol=tol, abs_tol=min(1e-12, tol * 1e-2))


def cmd_spin_table(args):
    rows = divisors.spin_table()
    fixed = [str(c.canonical()) for c in divisors.fixed_spin_classes()]
    return document(rows=rows, fixed=fixed, torsion=divisors.torsion_group())


def cmd_residues(args):
    p = potential.close_params(args.zeta, args.A, args.G)
    res = {f"p{k}": potential.residue_matrix(p, k) for k in (1, 2, 3, 4)}
    return document(params=_params(p), residues=res,
                    residue_zero=potential.residue_at_zero(p),
                    residue_infinity=potential.residue_at_infinity(p),
                    sum_defect=potential.sum_of_residues_check(p))


def _params(p):
    return {"zeta": p.zeta, "A": p.A, "G": p.G, "B": p.B, "H": p.H}


def cmd_monodromy(args):
    p = potential.close_params(args.zeta, args.A, args.G)
    tol = _budget(args.tol)
    if args.k is not None:
        m = monodromy.generator(p, args.k, tol)
        extra = {"k": args.k}
    else:
        # probes always run at the tight apparent-point budget
        probe = monodromy.apparent_probe(p, args.apparent)
        m = probe.monodromy
        extra = {"apparent": args.apparent, "defect": probe.defect, "outcome": probe.outcome}
    return document(matrix=m.matrix, trace=m.trace, det=m.det,
                    err_estimate=m.err_estimate, steps=m.steps_taken, **extra)


def cmd_symmetry(args):
    pa = potential.close_params(args.zeta, args.A, args.G)
    pb = potential.close_params(-args.zeta, args.A, args.G)
    reports = [symmetry.check_phi2_form(pa, args.samples),
               symmetry.check_tau_form(pa, pb, args.samples)]
    reports += symmetry.check_trace_symmetries(args.A, args.G, args.zeta, _budget(args.tol))
    return document(reports=[r.to_dict() for r in reports])


def cmd_scan(args):
    if args.n < 4 or args.n % 2:
        raise _ArgError("--n must be even and >= 4")
    return analysis.circle_scan(args.A, args.G, args.n, _budget(args.tol), args.workers)


def cmd_unitarize(args):
    res = analysis.find_trace_target(args.zeta, args.t12, args.t14, args.init_A, args.init_G,
                                     tol=args.tol)
    p = potential.close_params(args.zeta, res.A, res.G)
    H = [m.matrix for m in monodromy.generators(p, analysis.JACOBIAN_TOL)]
    verdict, form, defect = analysis.unitarizability(H)
    return document(A=res.A, G=res.G, iterations=res.iterations, residual=res.residual,
                    verdict=verdict,
                    form={"p11": form.p11, "p22": form.p22, "p12": form.p12},
                    defect=defect)


def cmd_localmodel(args):
    if args.n < 5:
        raise _ArgError("--n must be >= 5")
    if not 1e-4 <= args.h <= 0.5:
        raise _ArgError("--h must lie in [1e-4, 0.5]")
    data = localmodel.ChartData.constant(args.u_const, args.q_const, args.n, args.h)
    return document(flatness_defect=localmodel.flatness_defect(data, args.zeta),
                    holomorphy_defect=localmodel.holomorphy_defect(data),
                    unitarity_defect=localmodel.unitarity_defect(data, args.zeta))


class _ArgError(Exception):
    pass


COMMANDS = {"spin-table": cmd_spin_table, "residues": cmd_residues,
            "monodromy": cmd_monodromy, "symmetry-check": cmd_symmetry,
            "scan": cmd_scan, "unitarize": cmd_unitarize, "localmodel": cmd_localmodel}


def _write(text, out):
    if out:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = COMMANDS[args.command](args)
    except _ArgError as exc:
        parser.print_usage(sys.stderr)
        print(f"lawson: error: {exc}", file=sys.stderr)
        return 2
    except TraceTargetFailure as exc:
        sys.stdout.write(dumps({"error": exc.code, "detail": str(exc.detail),
                                "reason": exc.reason}) + "\n")
        return 1
    except LawsonError as exc:
        sys.stdout.write(dumps({"error": exc.code, "detail": str(exc.detail)}) + "\n")
        return 1
    if args.command == "scan":
        text = profile_lines(result)
    else:
        text = dumps(result) + "\n"
    _write(text, args.out)
    return 0


def main():
    sys.exit(run())
