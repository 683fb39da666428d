"""Command line front end.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for bad
input (config, word syntax, element files, unknown suite).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .checks import SUITES, run_suite, thread_count
from .config import ConfigError, RunConfig, load_config
from .fock_rep import FockRepresentation
from .groupoid_rep import enumerate_arrows
from .nica_symbolic import NicaAlgebra, NonDiagonalError, to_diagonal
from .qlattice_core import FreeAbelianGroup, FreeGroup, PrincipalIdeal
from .report import all_passed

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _pair_for_words(words: Sequence[str], n: Optional[int]):
    if any(w.strip().startswith("(") for w in words):
        k = len(words[0].strip("() ").split(","))
        return FreeAbelianGroup(k)
    letters = [int(d) for w in words for d in re.findall(r"\d+", w)]
    return FreeGroup(n if n is not None else max(letters + [2]))


def _parse(pair, text: str):
    try:
        return pair.parse(text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"cannot parse word {text!r}: {exc}") from exc


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    over = {}
    for name in ("n", "L", "L_eq", "seed", "tol", "t_samples"):
        val = getattr(args, name, None)
        if val is not None:
            over[name] = val
    cfg = cfg.with_overrides(**over)
    cfg.action()  # endomorphisms are verified at load
    return cfg


def _load_element(cfg: RunConfig, path: str):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read element file {path}: {exc}") from exc
    records = data.get("terms", []) if isinstance(data, dict) else data
    T = NicaAlgebra(cfg.action())
    try:
        return T.from_records(records)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed element file {path}: {exc}") from exc


# commands

def cmd_meet(args) -> int:
    pair = _pair_for_words([args.word1, args.word2], args.n)
    a, b = _parse(pair, args.word1), _parse(pair, args.word2)
    if not (a.is_positive and b.is_positive):
        raise InputError("meet takes positive words")
    c = pair.meet(a, b)
    print("empty" if c is None else str(PrincipalIdeal(c)))
    return EXIT_OK


def cmd_positive_ideal(args) -> int:
    pair = _pair_for_words([args.word], args.n)
    g = _parse(pair, args.word)
    res = pair.positive_ideal(g)
    print("empty" if res is None else f"{pair.format(res[0])} {pair.format(res[1])}")
    return EXIT_OK


def cmd_check(args) -> int:
    suite = args.suite_opt or args.suite
    if suite is None:
        raise InputError("name a suite: " + ", ".join(SUITES))
    if suite not in SUITES:
        raise InputError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    cfg = _config(args)
    results = run_suite(suite, cfg)
    ok = all_passed(results)
    report = {
        "suite": suite,
        "seed": cfg.seed,
        "threads": thread_count(),
        "config": cfg.to_dict(),
        "passed": ok,
        "checks": [r.to_dict() for r in results],
    }
    for r in results:
        rank = "" if r.rank is None else f" rank={r.rank}"
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.check_name}  defect={r.defect_norm:.3g}{rank}")
    print(f"{suite}: {sum(r.passed for r in results)}/{len(results)} checks passed")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, default=str) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_norm(args) -> int:
    cfg = _config(args)
    z = _load_element(cfg, args.element)
    try:
        D = to_diagonal(z)
    except NonDiagonalError as exc:
        raise InputError(str(exc)) from exc
    out = {"diagonal_norm": D.norm()}
    print(repr(D.norm()))
    if args.matrix:
        M = FockRepresentation(z.parent.action, cfg.L).represent(z)
        out["matrix_norm"] = float(M.norm())
        out["L"] = cfg.L
        print(f"matrix norm at L={cfg.L}: {out['matrix_norm']!r}")
    if args.out:
        Path(args.out).write_text(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_diagonal(args) -> int:
    cfg = _config(args)
    z = _load_element(cfg, args.element)
    try:
        D = to_diagonal(z)
    except NonDiagonalError as exc:
        raise InputError(str(exc)) from exc
    recs = [{"atom": at.region.to_record(), "representative": str(at.representative),
             "coefficient": at.coefficient.to_record()} for at in D.atoms]
    print(json.dumps(recs, indent=2))
    return EXIT_OK


def cmd_represent(args) -> int:
    cfg = _config(args)
    z = _load_element(cfg, args.element)
    M = FockRepresentation(z.parent.action, cfg.L).represent(z)
    text = "\n".join(M.export_sparse()) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_arrows(args) -> int:
    pair = FreeGroup(args.n or 2)
    for ar in enumerate_arrows(pair, args.depth, args.gbound):
        print(ar.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wienerhopf", description="Nica-Toeplitz algebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON run config")
        sp.add_argument("--n", type=int, help="number of generators")
        sp.add_argument("--L", type=int, help="truncation length")
        sp.add_argument("--L-eq", dest="L_eq", type=int, help="evaluation bound for equality")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float, help="relation tolerance")
        sp.add_argument("--out", help="write a JSON report here")

    sp = sub.add_parser("meet", help="meet of two positive words")
    sp.add_argument("word1")
    sp.add_argument("word2")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_meet)

    sp = sub.add_parser("positive-ideal", help="(a, b) with Pg ∩ P = Pa and b = a g^-1")
    sp.add_argument("word")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_positive_ideal)

    sp = sub.add_parser("check", help="run a verification suite")
    sp.add_argument("suite", nargs="?", help=", ".join(SUITES))
    sp.add_argument("--suite", dest="suite_opt")
    sp.add_argument("--t-samples", dest="t_samples", type=int)
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("norm", help="exact norm of a diagonal element")
    sp.add_argument("element")
    sp.add_argument("--matrix", action="store_true", help="also print the truncated matrix norm")
    common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("diagonal", help="disjoint atom form of a diagonal element")
    sp.add_argument("element")
    common(sp)
    sp.set_defaults(func=cmd_diagonal)

    sp = sub.add_parser("represent", help="sparse export of the truncated regular representation")
    sp.add_argument("element")
    common(sp)
    sp.set_defaults(func=cmd_represent)

    sp = sub.add_parser("arrows", help="groupoid arrows over principal points")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--gbound", type=int, default=2)
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_arrows)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
