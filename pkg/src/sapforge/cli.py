"""Command-line interface.

Exit codes are the machine contract: 0 VERIFIED, 1 parse or usage error,
2 REJECTED / FAILED / recheck mismatch, 3 CANDIDATE.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import SapforgeError
from .extensions import run_chain
from .families import MAX_ORDER, family
from .formats import (dumps_script, parse_script, read_certificate, read_matrix, read_pattern,
                      recheck, same_outcome, write_certificate)
from .inertia import certify_iap, iap_extend_certified, refined_inertia
from .jacobian import SapCertificate, Status, certify_sap
from .search import Outcome, SearchOptions, default_seed, search_nilpotent

EXIT_OK, EXIT_USAGE, EXIT_REJECTED, EXIT_CANDIDATE = 0, 1, 2, 3

log = logging.getLogger("sapforge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _status_code(status: Status) -> int:
    return {Status.VERIFIED: EXIT_OK, Status.CANDIDATE: EXIT_CANDIDATE}.get(status, EXIT_REJECTED)


def _worst(codes) -> int:
    rank = {EXIT_OK: 0, EXIT_CANDIDATE: 1, EXIT_REJECTED: 2, EXIT_USAGE: 3}
    return max(codes, key=rank.__getitem__, default=EXIT_OK)


# ---------------------------------------------------------------------------
# verify

def _verify_one(task: dict) -> tuple[int, str, object]:
    path = task["path"]
    try:
        if task["recheck"]:
            stored = read_certificate(path)
            fresh = recheck(stored)
            ok = same_outcome(stored, fresh)
            msg = (f"{path}: {fresh.status.value} rank {fresh.rank} "
                   + ("(matches stored certificate)" if ok else
                      f"MISMATCH (stored {stored.status.value} rank {stored.rank})"))
            return (EXIT_OK if ok else EXIT_REJECTED), msg, None
        P = read_pattern(path)
        if task["realization"]:
            A = read_matrix(task["realization"])
        else:
            res = search_nilpotent(P, SearchOptions(seed=task["seed"],
                                                    max_restarts=task["max_restarts"]))
            if res.outcome is not Outcome.EXACT:
                return EXIT_REJECTED, f"{path}: search {res.outcome.value}: {res.note}", None
            A = res.realization
        if task["iap"]:
            cert = certify_iap(P, A, strict=False)
        else:
            cert = certify_sap(P, A, strict=False)
        msg = f"{path}: {cert.status.value} (Jacobian rank {cert.rank}/{P.order}) {cert.note}"
        return _status_code(cert.status), msg, cert
    except (SapforgeError, ValueError, TypeError, OSError) as exc:
        return EXIT_USAGE, f"{path}: error: {exc}", None


def cmd_verify(args) -> int:
    if args.realization and len(args.inputs) != 1:
        raise UsageError("--realization needs exactly one pattern file")
    if args.out and len(args.inputs) != 1:
        raise UsageError("--out needs exactly one input; use --out-dir for batches")
    tasks = [{"path": p, "recheck": args.recheck, "realization": args.realization,
              "seed": args.seed, "iap": args.iap, "max_restarts": args.max_restarts}
             for p in args.inputs]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, tasks))
    else:
        results = [_verify_one(t) for t in tasks]
    for task, (code, msg, cert) in zip(tasks, results):
        print(msg, file=sys.stderr if code == EXIT_USAGE else sys.stdout)
        if cert is not None:
            target = None
            if args.out:
                target = Path(args.out)
            elif args.out_dir:
                Path(args.out_dir).mkdir(parents=True, exist_ok=True)
                target = Path(args.out_dir) / (Path(task["path"]).stem + ".cert.json")
            if target is not None:
                write_certificate(cert, target)
    return _worst(code for code, _, _ in results)


# ---------------------------------------------------------------------------
# extend

def cmd_extend(args) -> int:
    seed = read_certificate(args.certificate)
    script = parse_script(Path(args.script).read_text())
    fresh = recheck(seed)
    if not same_outcome(seed, fresh) or fresh.status is not Status.VERIFIED:
        print(f"{args.certificate}: input certificate does not re-verify as VERIFIED "
              f"({fresh.status.value})", file=sys.stderr)
        return EXIT_REJECTED
    iap = args.mode == "iap"
    if iap and isinstance(fresh, SapCertificate):
        fresh = certify_iap(fresh.pattern, fresh.realization, strict=False)
        if fresh.status is not Status.VERIFIED:
            print(f"seed is not a verified inertia witness: {fresh.note}", file=sys.stderr)
            return _status_code(fresh.status)
    fresh = fresh.with_provenance(chain=seed.chain)
    chain = run_chain(fresh, script, extend=iap_extend_certified if iap else None)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for step, cert in enumerate(chain):
        label = "seed" if step == 0 else f"step {step}"
        line = f"{label}: order {cert.order} {cert.status.value} (Jacobian rank {cert.rank})"
        if iap and cert.refined_inertia is not None:
            line += f" ri={cert.refined_inertia}"
        print(line)
        if cert.status is not Status.VERIFIED and cert.conditions:
            print(cert.conditions[-1].render())
        elif cert.status is not Status.VERIFIED:
            print(cert.note)
        summary.append({"step": step, "order": cert.order, "status": cert.status.value,
                        "rank": cert.rank, "file": f"step{step:02d}.cert.json"})
        if out_dir:
            write_certificate(cert, out_dir / f"step{step:02d}.cert.json")
    if out_dir:
        (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return _status_code(chain[-1].status)


# ---------------------------------------------------------------------------
# family, inertia, fmt

def cmd_family(args) -> int:
    fam = family(args.name, n=args.n, k=args.k, m=args.m, max_order=args.max_order,
                 signed=args.signed or None)
    text = fam.pattern.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.script_out:
        Path(args.script_out).write_text(dumps_script(fam.script))
    if args.seed_out and fam.seed is not None:
        Path(args.seed_out).write_text(fam.seed.to_text())
    return EXIT_OK


def cmd_inertia(args) -> int:
    A = read_matrix(args.matrix)
    ri = refined_inertia(A, args.tol)
    print(str(ri))
    agree = "agrees" if ri.numeric_c1 == ri.c1 else "overrides the floating count"
    print(f"exact c1 = {ri.c1} (floating count {ri.numeric_c1}; exact value {agree})")
    return EXIT_OK


def cmd_fmt(args) -> int:
    sys.stdout.write(read_pattern(args.pattern).to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sapforge", description="Certify spectrally and inertially arbitrary "
                                             "patterns with the nilpotent-Jacobian method.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="certify pattern files (or recheck certificates)")
    v.add_argument("inputs", nargs="+", metavar="FILE",
                   help="pattern grid files, or certificate files with --recheck")
    v.add_argument("--realization", help="exact realization to test instead of searching")
    v.add_argument("--iap", action="store_true", help="certify inertially arbitrary instead")
    v.add_argument("--recheck", action="store_true",
                   help="inputs are certificates; re-verify each from scratch")
    v.add_argument("--out", help="certificate output path (single input)")
    v.add_argument("--out-dir", help="directory for <name>.cert.json files")
    v.add_argument("--seed", type=int, default=None, help="search seed (env SAPFORGE_SEED)")
    v.add_argument("--max-restarts", type=int, default=20)
    v.add_argument("--jobs", type=int, default=1, help="verify files in parallel")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extend", help="run an extension script from a certificate")
    e.add_argument("certificate")
    e.add_argument("script", help="JSON list of extension steps")
    e.add_argument("--mode", choices=("sap", "iap"), default="sap")
    e.add_argument("--out-dir", help="write stepNN.cert.json files and summary.json here")
    e.set_defaults(func=cmd_extend)

    f = sub.add_parser("family", help="emit a family pattern in the text grid format")
    f.add_argument("name")
    f.add_argument("--n", type=int)
    f.add_argument("--k", type=int)
    f.add_argument("--m", type=int)
    f.add_argument("--signed", action="store_true", help="signed variant (T only)")
    f.add_argument("--max-order", type=int, default=MAX_ORDER)
    f.add_argument("--out")
    f.add_argument("--script-out", help="write the extension script that rebuilds the family")
    f.add_argument("--seed-out", help="write the seed pattern of a recursive family")
    f.set_defaults(func=cmd_family)

    i = sub.add_parser("inertia", help="refined inertia of an exact matrix")
    i.add_argument("matrix")
    i.add_argument("--tol", type=float, default=1e-9)
    i.set_defaults(func=cmd_inertia)

    t = sub.add_parser("fmt", help="re-print a pattern grid canonically")
    t.add_argument("pattern")
    t.set_defaults(func=cmd_fmt)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if getattr(args, "seed", 0) is None:
        try:
            args.seed = default_seed()
        except SapforgeError as exc:
            print(f"sapforge: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SapforgeError, ValueError, OSError) as exc:
        print(f"sapforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
