"""Command line driver: ``kmodular <subcommand> [flags]``.

Exit codes: 0 when every check passes (vacuous checks count), 2 when any
check fails, 3 when the only obstacles are inconclusive checks, 1 for usage
errors or unsupported configurations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .projectors import BudgetExceeded, ProjectorComplex, cache_dir, cache_key
from .report import VerificationReport, canonical_json, manifest_hash
from .rings import get_ring
from .verify import (
    CONVENTIONS,
    build_projector,
    oracle_report,
    random_bridge_checks,
    verify_modular,
    verify_reidemeister,
)

ORACLES = ("jones-wenzl", "through-projectors", "modular-decat", "bracket", "matrices")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ring", choices=("Z", "Q", "F2"), default="Z")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--cache-dir", help="projector cache (default: $KMODULAR_CACHE_DIR)")
    p.add_argument("--budget-states", type=int, help="abort when a complex grows past this many objects")
    p.add_argument("--convention", choices=sorted(CONVENTIONS), default="standard",
                   help="crossing gradings; 'corrupted' is a negative control")
    p.add_argument("--quiet", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmodular", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-reidemeister", help="R1 shifts, R2 and R3 on up to --n strands")
    p.add_argument("--n", type=int, default=4)
    _common(p)

    p = sub.add_parser("build-projector", help="build, check and cache P_{n,k}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--trunc", type=int, default=6)
    _common(p)

    p = sub.add_parser("verify-modular", help="cabled full twist on E_{n,k} against sh_k")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trunc", type=int, default=6)
    _common(p)

    p = sub.add_parser("oracle", help="decategorified Temperley-Lieb checks")
    p.add_argument("kind", choices=ORACLES)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--word", help="braid word for 'bracket', e.g. 's1 s2^-1'")
    p.add_argument("--random", type=int, default=0, help="also bridge-check this many random braids")
    _common(p)

    p = sub.add_parser("report", help="summarize report or projector cache files")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--quiet", action="store_true")
    return parser


def manifest_for(args, pipeline: str) -> dict:
    conv = CONVENTIONS[args.convention]
    out = {"pipeline": pipeline, "version": __version__, "ring": args.ring, "seed": args.seed,
           "convention": conv.manifest(), "budgetStates": args.budget_states}
    for key in ("n", "k", "trunc", "kind", "word", "random"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return out


def _emit(rep: VerificationReport, args) -> int:
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(rep.dumps())
    if not args.quiet:
        for c in rep.checks:
            window = "" if c.upto is None else f"  [t <= {c.upto / 2:g}]"
            print(f"{c.status:12s} {c.name}{window}")
        s = rep.summary()
        print(f"{rep.pipeline}: " + ", ".join(f"{v} {k}" for k, v in s.items() if v)
              + f"  (manifest {manifest_hash(rep.manifest)[:12]})")
    return rep.exit_code


def cmd_verify_reidemeister(args) -> int:
    rep = verify_reidemeister(args.n, get_ring(args.ring), CONVENTIONS[args.convention],
                              manifest_for(args, "verify-reidemeister"))
    return _emit(rep, args)


def cmd_build_projector(args) -> int:
    k = args.n if args.k is None else args.k
    args.k = k
    ring = get_ring(args.ring)
    conv = CONVENTIONS[args.convention]
    P, rep = build_projector(args.n, k, args.trunc, ring, conv, args.budget_states, args.cache_dir,
                             manifest_for(args, "build-projector"))
    directory = cache_dir(args.cache_dir)
    if directory is not None:
        rep.tables["cacheFile"] = str(directory / f"{cache_key(args.n, k, args.trunc, ring, conv)}.json")
    return _emit(rep, args)


def cmd_verify_modular(args) -> int:
    rep = verify_modular(args.n, args.k, args.trunc, get_ring(args.ring), CONVENTIONS[args.convention],
                         args.cache_dir, manifest_for(args, "verify-modular"))
    return _emit(rep, args)


def cmd_oracle(args) -> int:
    rep = oracle_report(args.kind, args.n, manifest_for(args, f"oracle {args.kind}"), args.word)
    if args.random:
        rep.extend(random_bridge_checks(args.random, args.seed, ring=get_ring(args.ring)))
    return _emit(rep, args)


def cmd_report(args) -> int:
    worst = 0
    for path in args.files:
        data = json.loads(path.read_text())
        if "complex" in data:
            P = ProjectorComplex.from_json(data)
            same = canonical_json(P.to_json()) == canonical_json(data)
            print(f"{path}: P_({P.n},{P.k}) t <= {P.t_hi}, {len(P.base)} objects, "
                  f"round-trip {'identical' if same else 'DIFFERS'}")
            worst = max(worst, 0 if same else 2)
            continue
        ok_hash = manifest_hash(data["manifest"]) == data.get("manifestHash")
        print(f"{path}: {data['pipeline']} {data['summary']} exit {data['exitCode']}"
              + ("" if ok_hash else "  (manifest hash mismatch)"))
        if not args.quiet:
            for c in data["checks"]:
                if c["status"] not in ("pass", "vacuous"):
                    print(f"  {c['status']:12s} {c['name']}")
        worst = max(worst, data["exitCode"], 0 if ok_hash else 2)
    return worst


COMMANDS = {
    "verify-reidemeister": cmd_verify_reidemeister,
    "build-projector": cmd_build_projector,
    "verify-modular": cmd_verify_modular,
    "oracle": cmd_oracle,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, BudgetExceeded) as exc:
        print(f"kmodular: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
