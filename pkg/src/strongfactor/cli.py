"""Command-line front end: ingest operators and multipliers, dispatch to the
checkers and certifiers, and emit JSON certificates.

Exit codes: 0 = FACTORS, 1 = DOES_NOT_FACTOR, 2 = INCONCLUSIVE,
64 = usage/specification error, 65 = input parse error.  The ``certify``
command never claims FACTORS from a finite pattern sweep: it exits 1 on a
refutation and 2 (with the observed ratio recorded) otherwise.  The ``suite``
command exits 0 when every check passes and 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import ParseError, SpecError, StrongFactorError
from .exponents import Exponent, conjugate, multiplier_exponent
from .factorization import (
    Certificate,
    Verdict,
    certify_inequality_cesaro,
    certify_inequality_fourier,
    cesaro_factor_check,
    cesaro_factor_check_j0,
    fourier_factor_check,
    matrix_factor_check,
    verify_representing,
)
from .grid_functions import BasisFamily, BasisSpec, fourier_coeffs, representing_setup
from .operators import (
    MatrixOp,
    cesaro_matrix,
    diagonal_sandwich,
    identity_matrix,
    matrix_from_csv,
    matrix_from_json_file,
    perturb_entry,
    random_lower_triangular,
    seq_from_csv,
)
from .seq_spaces import TruncatedSeq

_EXIT_BY_VERDICT = {Verdict.FACTORS: 0, Verdict.DOES_NOT_FACTOR: 1,
                    Verdict.INCONCLUSIVE: 2}

_SHIFT_RE = re.compile(r"^shift(\d+):([a-z-]+)$")

_FAMILIES = {
    "trig": BasisFamily.TRIG_REAL,
    "legendre": BasisFamily.LEGENDRE,
    "chebyshev1": BasisFamily.CHEBYSHEV1,
    "chebyshev2": BasisFamily.CHEBYSHEV2,
    "laguerre": BasisFamily.LAGUERRE,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SpecError(message)


def _named_sequence(name: str, n: int) -> np.ndarray:
    idx = np.arange(1, n + 1, dtype=float)
    if name == "ones":
        return np.ones(n)
    if name == "harmonic":
        return 1.0 / idx
    if name == "invsq":
        return 1.0 / idx ** 2
    if name == "alt":
        return (-1.0) ** (idx + 1) / idx
    raise SpecError(f"unknown sequence generator {name!r} "
                    "(available: ones, harmonic, invsq, alt, shift<k>:<name>)")


def _load_sequence(spec: str, n: int) -> TruncatedSeq:
    """Built-in sequence name (optionally shift<k>:<name>) or a CSV path."""
    m = _SHIFT_RE.match(spec)
    if m:
        k = int(m.group(1))
        if k >= n:
            raise SpecError(f"shift {k} leaves no nonzero entries at N={n}")
        base = _named_sequence(m.group(2), n - k)
        return TruncatedSeq(np.concatenate([np.zeros(k), base]))
    try:
        return TruncatedSeq(_named_sequence(spec, n))
    except SpecError:
        if Path(spec).exists():
            seq = seq_from_csv(spec)
            if len(seq) != n:
                raise SpecError(f"{spec}: sequence length {len(seq)} != N={n}")
            return seq
        raise


def _load_matrix(args, n: int) -> MatrixOp:
    if getattr(args, "matrix", None) and getattr(args, "gen", None):
        raise SpecError("give either --matrix or --gen, not both")
    if getattr(args, "matrix", None):
        path = args.matrix
        if not Path(path).exists():
            raise ParseError(f"{path}: no such file")
        if path.endswith(".json"):
            op = matrix_from_json_file(path)
        else:
            op = matrix_from_csv(path)
    elif getattr(args, "gen", None):
        op = _generate_matrix(args, n)
    else:
        raise SpecError("an input matrix is required (--matrix or --gen)")
    if getattr(args, "perturb", None):
        parts = args.perturb.split(",")
        if len(parts) != 3:
            raise SpecError("--perturb expects i,j,eps")
        op = perturb_entry(op, int(parts[0]), int(parts[1]), float(parts[2]))
    return op


def _generate_matrix(args, n: int) -> MatrixOp:
    gen = args.gen
    if gen == "identity":
        return identity_matrix(n)
    if gen == "cesaro":
        return cesaro_matrix(n)
    if gen == "random-lower":
        return random_lower_triangular(n, seed=args.seed)
    if gen == "rank-one":
        if not getattr(args, "g", None) or not getattr(args, "h", None):
            raise SpecError("--gen rank-one needs --g and --h")
        g = _load_sequence(args.g, n)
        h = _load_sequence(args.h, n)
        return diagonal_sandwich(g, cesaro_matrix(n), h)
    if gen == "diag":
        if not getattr(args, "g", None):
            raise SpecError("--gen diag needs --g")
        g = _load_sequence(args.g, n)
        return diagonal_sandwich(g, identity_matrix(n), TruncatedSeq(np.ones(n)))
    raise SpecError(f"unknown generator {gen!r} "
                    "(available: identity, cesaro, random-lower, rank-one, diag)")


def _require_exponent(args, name: str) -> Exponent:
    value = getattr(args, name, None)
    if value is None:
        raise SpecError(f"missing exponent --{name}")
    return Exponent(value)


def _job_echo(args, command: str) -> dict:
    keys = ("matrix", "gen", "g", "h", "through", "p", "q", "r", "N", "tol",
            "seed", "patterns", "perturb", "family", "samples", "permute")
    job = {"command": command}
    for key in keys:
        if hasattr(args, key):
            job[key] = getattr(args, key)
    return job


def _emit(doc: dict, args, summary: str) -> None:
    if not getattr(args, "no_timestamp", False):
        doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    print(summary)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _finish_certificate(cert: Certificate, args, command: str, extra: dict | None = None) -> int:
    doc = cert.to_json()
    doc["job"] = _job_echo(args, command)
    if extra:
        doc.update(extra)
    summary = f"{cert.verdict.value} residual={cert.residual:.3e} N={cert.truncation}"
    if cert.g_norm is not None:
        summary += f" g_norm={cert.g_norm[0]:.6g}@s={cert.g_norm[1]}"
    if cert.witness is not None:
        summary += f" witness={cert.witness}"
    _emit(doc, args, summary)
    return _EXIT_BY_VERDICT[cert.verdict]


def _cmd_check_cesaro(args, shifted: bool) -> int:
    p = _require_exponent(args, "p")
    q = _require_exponent(args, "q")
    r = _require_exponent(args, "r")
    op = _load_matrix(args, args.N)
    if not getattr(args, "h", None):
        raise SpecError("missing multiplier --h")
    h = _load_sequence(args.h, op.n)
    check = cesaro_factor_check_j0 if shifted else cesaro_factor_check
    cert = check(op, h, p, q, r, tol=args.tol, seed=args.seed)
    return _finish_certificate(cert, args, "check-cesaro-j0" if shifted else "check-cesaro")


def _cmd_check_fourier(args) -> int:
    r = _require_exponent(args, "r")
    p = _require_exponent(args, "p")
    q = _require_exponent(args, "q")
    op = _load_matrix(args, args.N)
    cert = fourier_factor_check(op, r, p, q, tol=args.tol, seed=args.seed)
    return _finish_certificate(cert, args, "check-fourier")


def _cmd_check_matrix(args) -> int:
    op = _load_matrix(args, args.N)
    through = args.through
    if through == "cesaro":
        b = cesaro_matrix(op.n)
    elif through == "identity":
        b = identity_matrix(op.n)
    elif Path(through).exists():
        b = matrix_from_json_file(through) if through.endswith(".json") else matrix_from_csv(through)
    else:
        raise SpecError(f"--through must be cesaro, identity, or a file path; got {through!r}")
    if not getattr(args, "h", None):
        raise SpecError("missing multiplier --h")
    h = _load_sequence(args.h, op.n)
    cert = matrix_factor_check(op, b, h, tol=args.tol, seed=args.seed)
    return _finish_certificate(cert, args, "check-matrix")


def _cmd_certify(args) -> int:
    r = _require_exponent(args, "r")
    q = _require_exponent(args, "q")
    op = _load_matrix(args, args.N)
    if args.form == "cesaro":
        if not getattr(args, "h", None):
            raise SpecError("missing multiplier --h")
        h = _load_sequence(args.h, op.n)
        s = multiplier_exponent(r, q)
        result = certify_inequality_cesaro(op, h, s, patterns=args.patterns,
                                           seed=args.seed)
        exps = {"r": r, "q": q, "s_rq": s}
        held = h
    else:
        s = multiplier_exponent(conjugate(r), q)
        result = certify_inequality_fourier(op, s, patterns=args.patterns,
                                            seed=args.seed)
        exps = {"r": r, "q": q, "s_rprime_q": s}
        held = None
    if result.refuted:
        cert = Certificate(
            verdict=Verdict.DOES_NOT_FACTOR, h=held,
            witness={"pattern": result.pattern.to_json(), "lhs": result.lhs,
                     "rhs": result.rhs},
            exponents=exps, tol=args.tol, seed=args.seed, truncation=op.n,
            notes=("refuting pattern: vanishing right-hand side with "
                   "positive left-hand side",))
    else:
        cert = Certificate(
            verdict=Verdict.INCONCLUSIVE, h=held, exponents=exps, tol=args.tol,
            seed=args.seed, truncation=op.n,
            notes=(f"finite evidence only: largest vertex ratio "
                   f"c_hat={result.c_hat:.12g}",))
    return _finish_certificate(cert, args, "certify",
                               extra={"certifier": result.to_json()})


def _cmd_verify_representing(args) -> int:
    family = _FAMILIES.get(args.family)
    if family is None:
        raise SpecError(f"unknown family {args.family!r}; choose from "
                        f"{', '.join(_FAMILIES)}")
    spec = BasisSpec(family, args.N)
    _, h = representing_setup(spec)
    count = args.N
    if getattr(args, "g", None):
        g = _load_sequence(args.g, count)
    else:
        g = TruncatedSeq(np.ones(count))

    def t_impl(x):
        coeffs = fourier_coeffs(x.multiplied(h), spec, count).coeffs * g.coeffs
        if args.permute:
            coeffs = coeffs.copy()
            coeffs[[0, 1]] = coeffs[[1, 0]]
        return coeffs

    cert = verify_representing(t_impl, spec, h, g, samples=args.samples,
                               count=count, tol=args.tol, seed=args.seed)
    return _finish_certificate(cert, args, "verify-representing")


def _cmd_suite(args) -> int:
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.name == "all" else [args.name]
    all_ok = True
    for name in names:
        for res in run_suite(name, seed=args.seed):
            print(res.summary())
            for line in res.details:
                print(f"  {line}")
            all_ok = all_ok and res.passed
    return 0 if all_ok else 1


def _add_common(sub, with_matrix=True):
    sub.add_argument("--N", type=int, default=64, help="truncation size")
    sub.add_argument("--tol", type=float, default=1e-9, help="decision tolerance")
    sub.add_argument("--seed", type=int, default=0, help="seed recorded in output")
    sub.add_argument("--out", help="certificate path (default: print to stdout)")
    sub.add_argument("--no-timestamp", action="store_true",
                     help="omit the timestamp for byte-reproducible output")
    if with_matrix:
        sub.add_argument("--matrix", help="matrix file (.csv with N=<n> header, or .json)")
        sub.add_argument("--gen", help="built-in generator: identity, cesaro, "
                                       "random-lower, rank-one, diag")
        sub.add_argument("--perturb", help="i,j,eps single-entry perturbation")
        sub.add_argument("--g", help="sequence: ones|harmonic|invsq|alt|shift<k>:<name>|CSV path")
        sub.add_argument("--h", help="sequence: ones|harmonic|invsq|alt|shift<k>:<name>|CSV path")


def build_parser() -> _Parser:
    parser = _Parser(prog="strongfactor",
                     description="strong-factorization checkers and certifiers")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("check-cesaro", "check-cesaro-j0"):
        sub = subs.add_parser(name, help="triangular shape check through the "
                                         "running-averages operator")
        _add_common(sub)
        for exp in ("p", "q", "r"):
            sub.add_argument(f"--{exp}", help=f"exponent {exp} (number, ratio, or inf)")

    sub = subs.add_parser("check-fourier", help="diagonal shape check through "
                                                "the coefficient operator")
    _add_common(sub)
    for exp in ("p", "q", "r"):
        sub.add_argument(f"--{exp}", help=f"exponent {exp}")

    sub = subs.add_parser("check-matrix", help="general matrix factorization check")
    _add_common(sub)
    sub.add_argument("--through", default="cesaro",
                     help="the factoring operator B: cesaro, identity, or a file")

    sub = subs.add_parser("certify", help="sign-pattern inequality sweep")
    _add_common(sub)
    sub.add_argument("--form", choices=("cesaro", "fourier"), default="cesaro")
    sub.add_argument("--patterns", type=int, default=64,
                     help="sampled patterns when the rectangle is too large "
                          "for exhaustive enumeration")
    for exp in ("q", "r"):
        sub.add_argument(f"--{exp}", help=f"exponent {exp}")

    sub = subs.add_parser("verify-representing",
                          help="verify the two-sides-diagonal identity on "
                               "random inputs")
    _add_common(sub, with_matrix=False)
    sub.add_argument("--family", default="chebyshev1",
                     help="basis family: " + ", ".join(_FAMILIES))
    sub.add_argument("--samples", type=int, default=20)
    sub.add_argument("--g", help="diagonal sequence (default: ones)")
    sub.add_argument("--permute", action="store_true",
                     help="swap the first two coefficients (demonstrates failure)")
    sub.set_defaults(tol=1e-6)

    sub = subs.add_parser("suite", help="run a built-in verification sweep")
    sub.add_argument("--name", default="all")
    sub.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command in ("check-cesaro", "check-cesaro-j0"):
            return _cmd_check_cesaro(args, shifted=args.command.endswith("j0"))
        if args.command == "check-fourier":
            return _cmd_check_fourier(args)
        if args.command == "check-matrix":
            return _cmd_check_matrix(args)
        if args.command == "certify":
            return _cmd_certify(args)
        if args.command == "verify-representing":
            return _cmd_verify_representing(args)
        return _cmd_suite(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 65
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64
    except StrongFactorError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 64


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
