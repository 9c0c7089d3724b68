"""Command-line interface: ``pclab <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import heights as H
from .cyclotomic import render
from .errors import ArityError, DSLSemanticError, DSLSyntaxError, PCLabError

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_EXPECT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(name, cast, default):
    raw = os.environ.get("PCLAB_" + name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"PCLAB_{name}={raw!r} is not a valid value")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _bounds(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("bounds are written NUM,DEN")
    a, b = (int(p) for p in parts)
    if a < 0 or b < 0:
        raise argparse.ArgumentTypeError("bounds must be non-negative")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--expr", help="series or constant in the expression language")
    common.add_argument("--m", type=_positive_int, help="number of variables (inferred when omitted)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--output", "-o", help="write the result to this file instead of stdout")
    common.add_argument("--tol", type=float, default=None, help="height tolerance (default 1e-9, env PCLAB_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--torsion-bound", type=_positive_int, default=None, help="largest root-of-unity order tried (default 24, env PCLAB_TORSION_BOUND)")

    p = _Parser(prog="pclab", description="Height profiles, rationality tests and torsion certificates for power series.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("expand", parents=[common], help="coefficient table to total degree N")
    s.add_argument("--N", type=_nonneg_int, default=16)

    s = sub.add_parser("profile", parents=[common], help="h_N and d_N profile")
    s.add_argument("--N", type=_positive_int, default=128)

    s = sub.add_parser("hankel", parents=[common], help="Hankel determinant of a univariate series")
    s.add_argument("--n", type=_nonneg_int, required=True)
    s.add_argument("--terms", help="comma-separated coefficients instead of --expr")

    s = sub.add_parser("guess-recurrence", parents=[common], help="guess a recurrence for univariate data")
    s.add_argument("--terms", help="comma-separated coefficients instead of --expr")
    s.add_argument("--n-terms", type=_positive_int, default=40)
    s.add_argument("--start", type=_nonneg_int, default=0, help="index of the first term")
    s.add_argument("--max-order", type=_positive_int, default=4)
    s.add_argument("--max-degree", type=_nonneg_int, default=None, help="polynomial coefficients up to this degree in n")

    s = sub.add_parser("reconstruct", parents=[common], help="rational form from a truncation")
    s.add_argument("--N", type=_positive_int, default=16)
    s.add_argument("--bounds", type=_bounds, default=(4, 4), help="NUM,DEN total-degree bounds")

    s = sub.add_parser("poles-check", parents=[common], help="are all roots of a univariate polynomial roots of unity")
    s.add_argument("--k-bound", type=_positive_int, default=None)

    s = sub.add_parser("certify", parents=[common], help="rational/torsion dichotomy report")
    s.add_argument("--N", type=_positive_int, default=16)
    s.add_argument("--recon-N", type=_positive_int, default=None)
    s.add_argument("--bounds", type=_bounds, default=(4, 4))
    s.add_argument("--omega-samples", type=_nonneg_int, default=5)
    s.add_argument("--expect", choices=("torsion",), default=None)

    s = sub.add_parser("remark", parents=[common], help="log d_N against N/k for log(1 + x^k)")
    s.add_argument("--k", type=_positive_int, required=True)
    s.add_argument("--N", type=_positive_int, required=True)
    return p


# ---------------------------------------------------------------------------


def _series(args):
    from .dsl import parse_series

    if not args.expr:
        raise UsageError("--expr is required")
    return parse_series(args.expr, args.m)


def _terms(args, n_terms):
    from .cyclotomic import as_cyclo
    from .rationality import as_terms

    if getattr(args, "terms", None):
        return [as_cyclo(t.strip()) for t in args.terms.split(",") if t.strip()]
    F = _series(args)
    if F.m != 1:
        raise UsageError("this command needs a univariate series")
    return as_terms(F, n_terms)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_expand(args, fmt):
    from .series import expand

    T = expand(_series(args), args.N)
    if fmt == "csv":
        return T.to_csv()
    if fmt == "text":
        return "".join(f"{list(n)}: {render(c)}\n" for n, c in T.nonzero_items())
    return _dump(T.to_json())


def cmd_profile(args, fmt):
    prof = H.height_profile(_series(args), args.N, args.tol)
    if fmt == "csv":
        return prof.to_csv()
    if fmt == "text":
        return f"class {prof.fitted_class}, constant {prof.fitted_constant}\nh_N[{prof.N_max}] = {prof.hN[-1]}\nlog d_N[{prof.N_max}] = {prof.dN_log[-1]}\n"
    return _dump({"schema": "pc-profile/1", **prof.to_json()})


def cmd_hankel(args, fmt):
    from .rationality import hankel_determinant

    c = _terms(args, 2 * args.n + 1)
    d = render(hankel_determinant(c, args.n))
    if fmt == "json":
        return _dump({"n": args.n, "det": d})
    if fmt == "csv":
        return f"n,det\n{args.n},{d}\n"
    return d + "\n"


def cmd_guess(args, fmt):
    from .rationality import guess_constant_recurrence, guess_p_recurrence

    c = _terms(args, args.n_terms)
    if args.max_degree is None:
        rec = guess_constant_recurrence(c, args.max_order)
        info = None if rec is None else {"order": rec.order, "coeffs": [render(x) for x in rec.coeffs], "offset": rec.offset}
    else:
        rec = guess_p_recurrence(c, args.max_order, args.max_degree, start=args.start)
        info = None if rec is None else {
            "order": rec.order,
            "degree": rec.degree,
            "polys": [[render(x) for x in p] for p in rec.polys],
            "offset": rec.offset,
        }
    text = "none" if rec is None else str(rec)
    if fmt == "json":
        return _dump({"found": rec is not None, "recurrence": info, "text": text})
    if fmt == "csv":
        return f"found,recurrence\n{rec is not None},\"{text}\"\n"
    return text + "\n"


def cmd_reconstruct(args, fmt):
    from .rationality import reconstruct_multivariate

    tb = args.torsion_bound
    form = reconstruct_multivariate(_series(args), args.bounds[0], args.bounds[1], args.N, tb, args.seed)
    if fmt == "json":
        return _dump(None if form is None else form.to_json())
    if form is None:
        return "none\n" if fmt == "text" else "num,den,torsion_form\n,,\n"
    if fmt == "csv":
        return f"num,den,torsion_form\n\"{form.num}\",\"{form.den}\",{form.torsion_form}\n"
    lines = [str(form), f"torsion form: {form.torsion_form}"]
    lines += [f"  (1 - ({render(f.zeta)})*x^{tuple(f.q)})^{f.mult}" for f in form.factors]
    if not form.torsion_form:
        lines.append(f"  cofactor {form.cofactor} ({form.cofactor_status})")
    return "\n".join(lines) + "\n"


def cmd_poles(args, fmt):
    from .dsl import parse_series
    from .rationality import poles_are_roots_of_unity

    if not args.expr:
        raise UsageError("--expr is required")
    F = parse_series(args.expr, 1)
    if F.m != 1 or not hasattr(F, "den") or not F.den.is_constant():
        raise UsageError("poles-check expects a univariate polynomial")
    poly = F.num * F.den.constant_term().inverse()
    cert = poles_are_roots_of_unity(poly, args.k_bound)
    pairs = [[k, mult] for k, mult in cert.factors]
    if fmt == "json":
        return _dump({"roots_of_unity": cert.ok, "certificate": pairs})
    if fmt == "csv":
        return "roots_of_unity,certificate\n" + f"{cert.ok},\"{' '.join(f'{k}^{e}' for k, e in pairs)}\"\n"
    cert_s = ", ".join(f"Phi_{k}" + (f"^{e}" if e > 1 else "") for k, e in pairs) or "none"
    return f"{str(cert.ok).lower()} ({cert_s})\n"


def cmd_certify(args, fmt):
    from .profiler import IRRATIONAL, NONTORSION, certify_dichotomy

    F = _series(args)
    rep = certify_dichotomy(
        F,
        N=args.N,
        deg_bounds=args.bounds,
        torsion_bound=args.torsion_bound,
        omega_samples=args.omega_samples,
        seed=args.seed,
        tol=args.tol,
        recon_N=args.recon_N,
    )
    if fmt == "json":
        out = rep.dumps() + "\n"
    elif fmt == "csv":
        out = "verdict,class,constant\n" + f"{rep.verdict},{rep.profile.fitted_class},{rep.profile.fitted_constant}\n"
    else:
        out = rep.summary() + "\n"
    code = EXIT_OK
    if args.expect == "torsion" and rep.verdict in (NONTORSION, IRRATIONAL):
        code = EXIT_EXPECT
    return out, code


def cmd_remark(args, fmt):
    from .profiler import RemarkResult, remark_experiment

    r = remark_experiment(args.k, args.N)
    if fmt == "json":
        return _dump(r.to_json())
    if fmt == "text":
        return f"k={r.k} N={r.N} log d_N={r.log_dN:.6f} N/k={r.target:g} ratio={r.ratio:.6f}\n"
    return RemarkResult.CSV_HEADER + "\n" + r.csv_row() + "\n"


COMMANDS = {
    "expand": (cmd_expand, "json"),
    "profile": (cmd_profile, "json"),
    "hankel": (cmd_hankel, "text"),
    "guess-recurrence": (cmd_guess, "text"),
    "reconstruct": (cmd_reconstruct, "json"),
    "poles-check": (cmd_poles, "text"),
    "certify": (cmd_certify, "json"),
    "remark": (cmd_remark, "csv"),
}


def _report_error(fmt, kind, exc):
    if fmt == "json":
        sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        sys.stderr.write(f"pclab: {kind}: {exc}\n")


COMMON_FIELDS = ("command", "expr", "m", "N", "bounds", "torsion_bound", "tol", "seed", "format", "output")


@dataclass
class CliConfig:
    """One CLI invocation; ``extra`` holds the command-specific options."""

    command: str
    expr: Optional[str] = None
    m: Optional[int] = None
    N: Optional[int] = None
    bounds: Optional[Tuple[int, int]] = None
    torsion_bound: Optional[int] = None
    tol: Optional[float] = None
    seed: int = 0
    format: Optional[str] = None
    output: Optional[str] = None
    extra: Dict[str, object] = field(default_factory=dict)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "CliConfig":
        d = vars(ns).copy()
        common = {k: d.pop(k) for k in COMMON_FIELDS if k in d}
        return cls(extra=d, **common)

    def namespace(self) -> argparse.Namespace:
        """Per-command defaults overlaid with the set fields."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        ns = {a.dest: a.default for a in _subparser(self.command)._actions if a.dest != "help"}
        for k in COMMON_FIELDS:
            v = getattr(self, k)
            if v is not None or k not in ns:
                ns[k] = v
        ns.update(self.extra)
        return argparse.Namespace(**ns)


def _subparser(command: str) -> argparse.ArgumentParser:
    p = build_parser()
    for a in p._subparsers._group_actions:
        if command in a.choices:
            return a.choices[command]
    raise UsageError(f"unknown command {command!r}")  # pragma: no cover


def run(config: CliConfig) -> int:
    """Execute one command: flags beat environment variables beat defaults."""
    fmt = config.format
    try:
        args = config.namespace()
        fn, default_fmt = COMMANDS[args.command]
        fmt = args.format or default_fmt
        if args.tol is None:
            args.tol = _env("TOL", float, H.DEFAULT_TOL)
        if args.torsion_bound is None:
            args.torsion_bound = _env("TORSION_BOUND", int, 24)
        _env("THREADS", int, 1)  # accepted; execution is sequential
        if args.tol <= 0 or args.torsion_bound < 1:
            raise UsageError("tolerance and torsion bound must be positive")
        result = fn(args, fmt)
    except (UsageError, DSLSyntaxError, DSLSemanticError, ArityError) as exc:
        _report_error(fmt, "usage", exc)
        return EXIT_USAGE
    except (PCLabError, ArithmeticError, ValueError, OverflowError) as exc:
        _report_error(fmt, "computation", exc)
        return EXIT_COMPUTE
    out, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
    except UsageError as exc:
        fmt = None
        if "--format" in argv:
            i = argv.index("--format")
            fmt = argv[i + 1] if i + 1 < len(argv) else None
        _report_error(fmt, "usage", exc)
        return EXIT_USAGE
    return run(CliConfig.from_namespace(args))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
