"""Command line: certify, verify, numtheory and sweep.

Exit codes: 0 success or verified, 1 verification failed, 2 usage or parse
error, 3 construction infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io as cio
from .fields import FieldDescriptor, FieldError, InvariantViolation, cyclotomic, extension_field, prime_field

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_field(text: str | None, default: FieldDescriptor) -> FieldDescriptor:
    """auto | cyclotomic:M | fq:P | fq:P,c0 c1 ... (minpoly coefficients, low degree first)."""
    if text is None or text == "auto":
        return default
    try:
        kind, _, rest = text.partition(":")
        if kind == "cyclotomic":
            return cyclotomic(int(rest))
        if kind == "fq":
            p, _, mp = rest.partition(",")
            if mp:
                coeffs = [int(c) for c in mp.replace(",", " ").split()]
                return extension_field(int(p), coeffs)
            return prime_field(int(p))
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad field {text!r}: {exc}") from None
    raise UsageError(f"bad field {text!r}; use auto, cyclotomic:M or fq:P[,minpoly]")


def read_values(path: str, field: FieldDescriptor):
    """Values from a file: a JSON list (numbers, 'a/b' strings or coefficient lists) or whitespace/comma separated rationals."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        stripped = text.strip()
        if stripped.startswith("["):
            raw = json.loads(stripped)
            out = []
            for v in raw:
                if isinstance(v, list):
                    out.append(field.element([Fraction(c) for c in v]))
                else:
                    out.append(field.element(Fraction(v)))
            return out
        return [field.element(Fraction(tok)) for tok in stripped.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: cannot parse values ({exc})") from None


def _emit(cert, out):
    data = cio.serialize(cert)
    if out in (None, "-"):
        sys.stdout.write(data.decode())
    else:
        with open(out, "wb") as fh:
            fh.write(data)
        rep_claim = f"claimed rank <= {cert.claimed_rank}, regular sparsity <= {cert.claimed_regular_sparsity}"
        print(f"wrote {out}: {cert.shape[0]}x{cert.shape[1]} {cert.matrix.kind} over {cert.field}; {rep_claim}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_certify(args):
    from .certify.abelian import abelian_decompose
    from .certify.circulant import circulant_decompose, dft_any_decompose
    from .certify.dft import DftBlockPlan, dft_decompose
    from .certify.finite import gwh_finite_field
    from .certify.gwh import gwh_decompose
    from .numtheory import factorize

    what = args.what
    if what == "gwh":
        field = parse_field(args.field, cyclotomic(args.d))
        if field.is_finite:
            cert = gwh_finite_field(args.d, args.n, field, args.m, descend=not args.no_descend)
        else:
            cert = gwh_decompose(args.d, args.n, args.m, field)
    elif what == "dft":
        field = parse_field(args.field, cyclotomic(1))
        N = args.N
        fac = factorize(N) if N >= 1 else {}
        if N > 1 and all(e == 1 for e in fac.values()) and args.ambient is None:
            plan = DftBlockPlan(tuple(sorted(fac)), k0=args.k0, m_threshold=args.m_threshold,
                                trivial_blocks=args.trivial_blocks)
            cert = dft_decompose(plan, field)
        else:
            cert = dft_any_decompose(N, field, ambient=args.ambient,
                                     dft_options={"trivial_blocks": args.trivial_blocks})
    elif what == "circulant":
        field = parse_field(args.field, cyclotomic(1))
        values = read_values(args.top_row, field)
        cert = circulant_decompose(values, field, kind=args.kind, ambient=args.ambient,
                                   dft_options={"trivial_blocks": args.trivial_blocks})
    elif what == "abelian":
        field = parse_field(args.field, cyclotomic(1))
        try:
            factors = [int(x) for x in args.factors.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --factors {args.factors!r}") from None
        values = read_values(args.f, field)
        cert = abelian_decompose(factors, values, field, k=args.k)
    else:
        raise UsageError("certify needs one of gwh, dft, circulant, abelian")
    _emit(cert, args.output)
    return EXIT_OK


def cmd_verify(args):
    from .certify.core import verify

    try:
        cert = cio.load(args.certificate)
    except OSError as exc:
        print(f"error: cannot read {args.certificate}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cio.CertificateFormatError as exc:
        print(f"error: {args.certificate}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    matrix = None
    if args.matrix_file:
        try:
            with open(args.matrix_file) as fh:
                matrix = cio.matrix_from_dict(json.load(fh))
        except (OSError, ValueError) as exc:
            print(f"error: matrix file {args.matrix_file}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    rep = verify(cert, matrix)
    print(f"{cert.shape[0]}x{cert.shape[1]} {cert.matrix.kind} over {cert.field}, {rep.total_changes} changes")
    for line in rep.lines():
        print(line)
    print("verified" if rep.passed else "NOT verified")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_numtheory(args):
    from . import numtheory as nt

    if args.what == "good-primes":
        cfg = nt.GoodPrimeConfig(args.lower, args.upper, args.max_pp)
        print(" ".join(str(q) for q in nt.good_primes(cfg)))
    elif args.what == "factorable":
        cfg = nt.GoodPrimeConfig(args.lower, args.upper, args.max_pp)
        w = nt.find_factorable(args.l, cfg)
        print(f"N={w.N} primes={','.join(map(str, w.primes))}")
    elif args.what == "pi":
        print(nt.pi_a(args.a, args.x, args.y))
    elif args.what == "scales":
        fam = nt.ConfigFamily(alpha=Fraction(args.alpha), k_high=args.k_high)
        try:
            w = nt.scales_search(args.K, fam)
        except nt.SearchExhausted as exc:
            print(f"no witness: {exc}")
            for line in exc.diagnosis:
                print(f"  {line}")
            return EXIT_INFEASIBLE
        print(f"N={w.N} primes={','.join(map(str, w.primes))} x={w.x}")
    return EXIT_OK


def cmd_sweep(args):
    from .sweep import parse_range, rows_to_csv, run_sweep

    try:
        values = parse_range(args.range)
    except ValueError as exc:
        raise UsageError(f"bad --range: {exc}") from None
    params = {}
    for item in args.param or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        params[key] = val
    field = None if args.field in (None, "auto") else parse_field(args.field, cyclotomic(1))
    rows = run_sweep(args.family, values, params, field, args.workers)
    text = rows_to_csv(rows)
    if args.csv in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.csv, "w") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.csv}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="rigidity-forge", description="Exact non-rigidity certificates.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("certify", help="build a certificate")
    csub = c.add_subparsers(dest="what", parser_class=_Parser)
    g = csub.add_parser("gwh", help="H_{d,n}")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--no-descend", action="store_true", help="keep the extension field certificate")
    d = csub.add_parser("dft", help="DFT_N")
    d.add_argument("--N", type=int, required=True)
    d.add_argument("--k0", type=int)
    d.add_argument("--m-threshold", type=int)
    d.add_argument("--ambient", type=int, help="use the Hankel route with this squarefree ambient size")
    d.add_argument("--trivial-blocks", choices=("zero", "full"), default="zero")
    ci = csub.add_parser("circulant", help="circulant, Toeplitz or Hankel matrix")
    ci.add_argument("--top-row", required=True, help="values file (f, or t/h of length 2N-1)")
    ci.add_argument("--kind", choices=("circulant", "adjusted_circulant", "toeplitz", "hankel"), default="circulant")
    ci.add_argument("--ambient", type=int)
    ci.add_argument("--trivial-blocks", choices=("zero", "full"), default="zero")
    a = csub.add_parser("abelian", help="G-circulant")
    a.add_argument("--factors", required=True)
    a.add_argument("--f", required=True, help="values file in group index order")
    a.add_argument("--k", type=int, default=5, help="factors below k are grouped")
    for sp in (g, d, ci, a):
        sp.add_argument("--field", default="auto")
        sp.add_argument("-o", "--output", default="-")

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("certificate")
    v.add_argument("--matrix-from-descriptor", action="store_true", help="rebuild M from the descriptor (default)")
    v.add_argument("--matrix-file", help="JSON matrix to check against instead")

    n = sub.add_parser("numtheory", help="number theory helpers")
    nsub = n.add_subparsers(dest="what", parser_class=_Parser)
    gp = nsub.add_parser("good-primes")
    fa = nsub.add_parser("factorable")
    for sp in (gp, fa):
        sp.add_argument("--lower", type=int, required=True)
        sp.add_argument("--upper", type=int, required=True)
        sp.add_argument("--max-pp", type=int, required=True)
    fa.add_argument("--l", type=int, required=True)
    pi = nsub.add_parser("pi")
    pi.add_argument("--a", type=int, required=True)
    pi.add_argument("--x", type=int, required=True)
    pi.add_argument("--y", type=int, required=True)
    sc = nsub.add_parser("scales")
    sc.add_argument("--K", type=int, required=True)
    sc.add_argument("--alpha", default="3/5")
    sc.add_argument("--k-high", type=float, default=2.0)

    s = sub.add_parser("sweep", help="tabulate verified (rank, sparsity) over a range")
    s.add_argument("--family", choices=("gwh", "dft", "circulant", "abelian"), required=True)
    s.add_argument("--range", required=True, help="a:b[:step] or a comma list")
    s.add_argument("--param", action="append", help="key=value (d, m, seed)")
    s.add_argument("--field", default="auto")
    s.add_argument("--workers", type=int)
    s.add_argument("--csv", default="-")
    return p


def main(argv=None) -> int:
    from .certify.core import CertificateError
    from .numtheory import SearchExhausted

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command; see --help")
        if getattr(args, "what", "") is None:
            raise UsageError(f"{args.command} needs a subcommand; see --help")
        handler = {"certify": cmd_certify, "verify": cmd_verify, "numtheory": cmd_numtheory, "sweep": cmd_sweep}
        return handler[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (CertificateError, SearchExhausted, FieldError, InvariantViolation) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
