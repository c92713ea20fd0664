"""Command line: hosvd | classify | enumerate | sample."""

import argparse
import secrets
import sys

from . import report
from .classifier import (
    MATCH_MAX_QUBITS,
    SIGNATURE_TOL,
    SUPPORT_TOL,
    classify,
    enumeration_for,
    sample_family,
    sample_ghz,
    sample_random,
)
from .enumerator import enumerate_special_states, label
from .hosvd import hosvd, three_qubit_identities
from .statefile import ParseError, format_state, read_state

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
MAX_QUBITS = 6


class DomainError(Exception):
    pass


def _fmt(x):
    return f"{x:.17g}"


def _ket(idx):
    return f"|{label(idx)}>"


def _cfmt(v):
    v = complex(v)
    return f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}j"


def cmd_hosvd(args, out):
    t = read_state(args.file)
    res = hosvd(t)
    if args.json:
        out.write(report.dumps(report.document(hosvd=report.hosvd_section(res, SUPPORT_TOL))) + "\n")
        return EXIT_OK
    out.write(f"dims: {' '.join(map(str, res.core.dims))}\n")
    for n, u in enumerate(res.factors, start=1):
        out.write(f"U({n}):\n")
        for row in u:
            out.write("  " + "  ".join(_cfmt(x) for x in row) + "\n")
    out.write("core amplitudes:\n")
    for idx, v in sorted(res.core.amplitudes(SUPPORT_TOL).items()):
        out.write(f"  {_ket(idx)}  {_cfmt(v)}\n")
    for n, s in enumerate(res.sigma_sq, start=1):
        out.write(f"sigma_sq({n}): {' '.join(_fmt(x) for x in s)}\n")
    out.write(f"aoc residual: {_fmt(res.aoc_residual)}\n")
    if res.degenerate_modes:
        out.write(f"degenerate modes: {sorted(res.degenerate_modes)}\n")
    if res.core.dims == (2, 2, 2):
        for k, v in three_qubit_identities(res.core).items():
            out.write(f"identity {k}: {_fmt(v)}\n")
    if args.tol is not None and res.aoc_residual > args.tol:
        out.write(f"warning: aoc residual above {args.tol}\n")
    return EXIT_OK


def cmd_classify(args, out):
    t = read_state(args.file)
    if any(d != 2 for d in t.dims):
        raise DomainError(f"classify needs a qubit state, got dims {t.dims}")
    rec = classify(t, args.tol)
    if args.json:
        out.write(report.dumps(report.document(classification=report.classification_section(rec))) + "\n")
        return EXIT_OK
    sec = report.classification_section(rec)
    out.write(f"polytope coordinates: {' '.join(_fmt(x) for x in rec.sigma1_sq)}\n")
    out.write(f"signature: {' | '.join(','.join(map(str, g)) for g in rec.equality_signature)}"
              f"  (margin {_fmt(rec.signature_margin)}{', near boundary' if rec.near_boundary else ''})\n")
    out.write(f"core support: {' '.join(sec['core_support'])}\n")
    out.write(f"family: {rec.family_id or 'none'}\n")
    if rec.containing_families:
        out.write(f"contained in: {' '.join(rec.containing_families)}\n")
    flags = [k for k, v in rec.flags.items() if v]
    out.write(f"flags: {' '.join(flags) if flags else 'none'}\n")
    return EXIT_OK


def _check_n(n, allow_large):
    if n < 3:
        raise DomainError("enumeration needs at least 3 qubits")
    if n > MAX_QUBITS and not allow_large:
        raise DomainError(f"n = {n} exceeds {MAX_QUBITS}; branch counts grow quickly, "
                          "pass --allow-large to run anyway")


def cmd_enumerate(args, out):
    _check_n(args.qubits, args.allow_large)
    result = enumerate_special_states(args.qubits)
    if args.json:
        sec = report.enumeration_section(result, args.include_nongeneric)
        out.write(report.dumps(report.document(enumeration=sec)) + "\n")
        return EXIT_OK
    recs = result.all_records() if args.include_nongeneric else result.families
    out.write(f"{args.qubits} qubits: {len(result.families)} generic, "
              f"{len(result.nongeneric)} non-generic families\n")
    for r in recs:
        sig = " | ".join(",".join(map(str, g)) for g in r.signature)
        kets = " + ".join(_ket(s) for s in sorted(r.support))
        out.write(f"{r.family_id:6s} [{sig}]{'' if r.generic else ' non-generic'}\n")
        out.write(f"    {kets}\n")
        for c in r.constraints:
            eq = " + ".join(f"~t{label(a)} t{label(b)}" for a, b in c)
            out.write(f"    {eq} = 0\n")
    if args.counts:
        for it, c in result.checks.items():
            out.write(f"iteration {it}: {c} checks\n")
        out.write(f"total checks: {result.total_checks} across {result.iterations} iterations\n")
    return EXIT_OK


def _infer_qubits(family):
    if family[:1] in ("B", "S"):
        return 3
    if family[:1].isdigit():
        return 4
    return None


def cmd_sample(args, out, err):
    seed = args.seed
    if seed is None:
        seed = secrets.randbelow(2 ** 32)
        err.write(f"seed: {seed}\n")
    if args.random:
        n = args.qubits or 3
        t = sample_random(n, seed)
        note = f"random {n}-qubit state, seed {seed}"
    elif args.family:
        n = args.qubits or _infer_qubits(args.family)
        if n is None:
            raise DomainError(f"--qubits is needed for family {args.family}")
        if args.family.upper() == "GHZ":
            t = sample_ghz(n, seed)
        else:
            if not 3 <= n <= MATCH_MAX_QUBITS:
                raise DomainError(f"family sampling supports 3 to {MATCH_MAX_QUBITS} qubits")
            try:
                rec = enumeration_for(n).by_id(args.family)
            except KeyError:
                raise DomainError(f"unknown family {args.family!r} for {n} qubits") from None
            t = sample_family(rec, seed)
        note = f"family {args.family}, {n} qubits, seed {seed}"
    else:
        raise DomainError("give --family ID or --random")
    text = format_state(t, comment=note)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="hosvdq", description="HOSVD core tensors of multi-qubit states")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hosvd", help="HOSVD of a state file")
    h.add_argument("file")
    h.add_argument("--tol", type=float, default=None, help="warn when the AOC residual exceeds this")
    h.add_argument("--json", action="store_true")

    c = sub.add_parser("classify", help="classify a qubit state file")
    c.add_argument("file")
    c.add_argument("--tol", type=float, default=SIGNATURE_TOL)
    c.add_argument("--json", action="store_true")

    e = sub.add_parser("enumerate", help="enumerate special core tensors")
    e.add_argument("--qubits", type=int, required=True)
    e.add_argument("--include-nongeneric", action="store_true")
    e.add_argument("--counts", action="store_true", help="print row and column check counts")
    e.add_argument("--json", action="store_true")
    e.add_argument("--allow-large", action="store_true", help=f"allow more than {MAX_QUBITS} qubits")

    s = sub.add_parser("sample", help="write a sample state file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--family")
    g.add_argument("--random", action="store_true")
    s.add_argument("--qubits", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.command == "hosvd":
            return cmd_hosvd(args, out)
        if args.command == "classify":
            return cmd_classify(args, out)
        if args.command == "enumerate":
            return cmd_enumerate(args, out)
        return cmd_sample(args, out, err)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (DomainError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def run():
    sys.exit(main())
