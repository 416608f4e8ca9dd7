"""Command-line entry point: ``stardist <subcommand>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .graph import Graph, read_graph6_lines


def _graphs(source: str) -> list[Graph]:
    """Read graph6 lines from a file, or from stdin when ``source`` is ``-``."""
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return read_graph6_lines(text)


def _check_starfree(args) -> int:
    from .starfree import find_induced_star

    for g in _graphs(args.graph6):
        w = find_induced_star(g, args.n)
        print("free" if w is None else str(w))
    return 0


def _dindex(args) -> int:
    from .oracle import Budget, distinguishing_index

    for g in _graphs(args.graph6):
        res = distinguishing_index(g, args.max_k, Budget(args.node_budget, args.time_budget))
        line = str(res)
        if args.witness and res.witness is not None:
            line += " " + res.witness.to_text()
        print(line)
    return 0


def _colour_rooted(args) -> int:
    from .oracle import Budget
    from .rooted import theorem3_colourings, verify_outcome

    for i, g in enumerate(_graphs(args.graph6)):
        if i:
            print()
        out = theorem3_colourings(g, args.root, args.n, Budget(args.node_budget, args.time_budget))
        if out.is_exception:
            print(f"exception: {out.exception}")
            continue
        for c in out.colourings:
            print(c.to_text())
        verify_outcome(g, args.root, args.n, list(out.colourings))
        print("verified: true")
    return 0


def _colour_infinite(args) -> int:
    from .infinite import construct, parse_igd, verify_fixed_core

    d = parse_igd(Path(args.igd).read_text())
    _, pc = construct(d, args.n)
    print(json.dumps({"colouring": pc.to_json()}, sort_keys=True))
    ok = True
    for depth in args.depth:
        rep = verify_fixed_core(d, pc, depth, args.margin)
        ok &= rep.passed
        print(json.dumps({"fixed_core": rep.to_json()}, sort_keys=True))
    return 0 if ok else 1


def _verify(args) -> int:
    from .campaign import emit_report, load_config, run_campaign

    overrides = {"task": args.task, "n": args.n, "out": args.out, "workers": args.workers}
    cfg = load_config(args.config, overrides)
    counts = emit_report(run_campaign(cfg), cfg.out, None if cfg.out else sys.stdout)
    summary = " ".join(f"{k}={v}" for k, v in counts.items())
    print(summary, file=sys.stderr if not cfg.out else sys.stdout)
    return 0 if counts["FAIL"] == 0 and counts["ERROR"] == 0 else 1


def _generate(args) -> int:
    from .enumerate import connected_graphs, connected_k1n_free
    from .graph import write_graph6

    gs = connected_graphs(args.order) if args.n is None else connected_k1n_free(args.order, args.n)
    for g in gs:
        print(write_graph6(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stardist", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def budgets(sp):
        sp.add_argument("--node-budget", type=int, default=10**8)
        sp.add_argument("--time-budget", type=float, default=600.0)

    sp = sub.add_parser("check-starfree", help="report an induced K_1,n or 'free' per graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--graph6", required=True, help="graph6 file, or - for stdin")
    sp.set_defaults(run=_check_starfree)

    sp = sub.add_parser("dindex", help="distinguishing index per graph")
    sp.add_argument("--graph6", required=True)
    sp.add_argument("--max-k", type=int)
    sp.add_argument("--witness", action="store_true", help="append a witness colouring")
    budgets(sp)
    sp.set_defaults(run=_dindex)

    sp = sub.add_parser("colour-rooted", help="n-1 non-isomorphic rooted distinguishing colourings")
    sp.add_argument("--graph6", required=True)
    sp.add_argument("--root", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    budgets(sp)
    sp.set_defaults(run=_colour_rooted)

    sp = sub.add_parser("colour-infinite", help="periodic colouring of an IGD description")
    sp.add_argument("--igd", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--depth", type=int, nargs="+", default=[4, 6, 8])
    sp.add_argument("--margin", type=int, default=2)
    sp.set_defaults(run=_colour_infinite)

    sp = sub.add_parser("verify", help="run a campaign config and write a JSONL report")
    sp.add_argument("--config", required=True)
    sp.add_argument("--task")
    sp.add_argument("--n", type=int)
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int)
    sp.set_defaults(run=_verify)

    sp = sub.add_parser("generate", help="graph6 lines for all connected graphs of an order")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--n", type=int, help="keep only K_1,n-free graphs")
    sp.set_defaults(run=_generate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"stardist: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
