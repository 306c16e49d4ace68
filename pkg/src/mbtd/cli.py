"""``mbtd`` command line.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success,
1 verification failure, 2 usage or parse error, 3 size cap or node budget.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, TextIO

from .classifiers import (
    PartialOutcome,
    cactus_verdict,
    classify_cycle,
    classify_grid,
    classify_path,
    classify_prism_cycle,
    classify_tree,
)
from .blocks import is_cactus
from .graph import Graph, GraphError, format_graph_text, parse_family
from .hypergraph import closed_neighborhood_hypergraph, open_neighborhood_hypergraph
from .solver import (
    BudgetExceeded,
    ClassLabel,
    Player,
    Position,
    SearchOptions,
    SizeCapExceeded,
    SolverError,
    best_move,
    label_from_winners,
    principal_variation,
    solve,
)
from .structural import (
    StructuralError,
    d_minimal_check,
    format_pos_cnf,
    minimum_total_dominating_set,
    pos_cnf_winner,
    read_pos_cnf,
    reduction_equivalence_check,
    tdom_with_witness,
    to_bipartite_graph,
    to_split_graph,
    PROVER,
    DISPROVER,
)
from .suites import SUITES

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True))


def _load_graph(spec: str) -> Graph:
    try:
        return parse_family(spec)
    except GraphError as exc:
        raise CliError(f"cannot parse graph spec {spec!r}: {exc}", EXIT_USAGE) from None


def _options(args: argparse.Namespace) -> SearchOptions:
    return SearchOptions(node_budget=getattr(args, "budget", None),
                         workers=getattr(args, "workers", 1) or 1)


def _winner(p: Player | None) -> str | None:
    return None if p is None else str(p)


def _vertex_names(g: Graph, vs: list[int]) -> list[str]:
    return [g.label(v) for v in vs]


# --------------------------------------------------------------------------
# subcommands


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    opts = _options(args)
    board = (open_neighborhood_hypergraph(g) if args.game == "mbtd"
             else closed_neighborhood_hypergraph(g))
    firsts = [Player.DOMINATOR, Player.STALLER] if args.first == "both" else [Player.parse(args.first)]
    results = {p: solve(board, p, opts) for p in firsts}
    d = results.get(Player.DOMINATOR)
    s = results.get(Player.STALLER)
    label = label_from_winners(d.winner, s.winner) if d and s else None
    pv = principal_variation(Position(board, 0, 0, firsts[0]), opts)
    _emit({
        "graph": g.name,
        "game": args.game,
        "d_game": _winner(d.winner if d else None),
        "s_game": _winner(s.winner if s else None),
        "class": None if label is None else str(label),
        "pv": pv,
        "pv_named": _vertex_names(g, pv),
        "nodes": sum(r.nodes_expanded for r in results.values()),
        "budget": args.budget,
        "seed": args.seed,
    })
    return EXIT_OK


def _closed_form(g: Graph) -> tuple[PartialOutcome, str, dict[str, Any]] | None:
    fam = g.family
    if fam is not None:
        kind, params = fam
        if kind == "cycle":
            return PartialOutcome.of(classify_cycle(*params)), "prop-cycles", {}
        if kind == "path":
            return PartialOutcome.of(classify_path(*params)), "cor-trees", {}
        if kind == "grid":
            return PartialOutcome.of(classify_grid(*params)), "thm-grids", {}
        if kind == "prism":
            rows, m = params
            if rows >= 2:
                part = classify_prism_cycle(rows, m)
                if rows % 2 == 0:
                    method = "thm-prism-even"
                elif m == 4:
                    method = "c4-partition"
                elif rows == 3:
                    method = "thm-p3-cycle"
                else:
                    method = "open"
                return part, method, {}
        if kind == "kbip":
            a, b = params
            if min(a, b) >= 2:
                # K_{a,b} arises from C4 by blowing up two opposite vertices
                return PartialOutcome.of(ClassLabel.D), "lemma-blowup", {}
        if kind == "gnk":
            n, k = params
            if n >= 2 * k:
                return PartialOutcome.of(ClassLabel.S), "gnk-isolation", {}
    if g.n >= 1 and g.is_tree():
        return PartialOutcome.of(classify_tree(g)), "cor-trees", {}
    if g.n >= 1 and g.is_connected() and is_cactus(g):
        verdict = cactus_verdict(g)
        extra = {"witness": [sorted(c) for c in verdict.removals]}
        if verdict.remainder is not None:
            extra["remainder"] = sorted(verdict.remainder)
        return PartialOutcome.of(verdict.label), "thm-cactus", extra
    return None


def cmd_classify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    found = _closed_form(g)
    if found is None:
        opts = _options(args)
        board = open_neighborhood_hypergraph(g)
        outcome = PartialOutcome(solve(board, Player.DOMINATOR, opts).winner,
                                 solve(board, Player.STALLER, opts).winner)
        method, extra = "exhaustive", {}
    else:
        outcome, method, extra = found
    label = outcome.label
    payload = {
        "graph": g.name,
        "class": None if label is None else str(label),
        "d_game": _winner(outcome.d_game) or "unknown",
        "s_game": _winner(outcome.s_game) or "unknown",
        "method": method,
        "seed": args.seed,
    }
    payload.update(extra)
    _emit(payload)
    return EXIT_OK


def cmd_family(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.text:
        sys.stdout.write(format_graph_text(g))
        return EXIT_OK
    _emit({
        "graph": g.name,
        "n": g.n,
        "m": g.num_edges,
        "edges": g.edges(),
        "labels": list(g.labels) if g.labels is not None else None,
    })
    return EXIT_OK


def cmd_tdom(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    k, part = tdom_with_witness(g)
    _emit({"graph": g.name, "tdom": k, "partition": [sorted(c) for c in part]})
    return EXIT_OK


def cmd_gammat(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    witness = minimum_total_dominating_set(g)
    _emit({"graph": g.name, "gamma_t": len(witness), "witness": sorted(witness)})
    return EXIT_OK


def cmd_dmin(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    _emit({"graph": g.name, "d_minimal": d_minimal_check(g, _options(args))})
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    f = read_pos_cnf(args.formula)
    if args.emit:
        build = to_split_graph if args.emit == "split" else to_bipartite_graph
        sys.stdout.write(format_graph_text(build(f)))
        return EXIT_OK
    report = reduction_equivalence_check(f, _options(args))
    _emit({
        "formula": format_pos_cnf(f).strip().splitlines(),
        "prover_first": pos_cnf_winner(f, PROVER),
        "disprover_first": pos_cnf_winner(f, DISPROVER),
        "cases": [
            {"construction": c.construction, "order": c.order,
             "cnf_winner": c.cnf_winner, "mbtd_winner": str(c.game_winner), "ok": c.ok}
            for c in report.cases
        ],
        "equivalent": report.ok,
    })
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args: argparse.Namespace) -> int:
    failures = 0
    total = 0
    for check in SUITES[args.suite](args.seed or 0):
        total += 1
        failures += not check.ok
        print(check.line())
    print(f"{args.suite}: {total - failures}/{total} passed", file=sys.stderr)
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def play_session(g: Graph, human: Player, first: Player,
                 stdin: TextIO, stdout: TextIO, options: SearchOptions | None = None) -> Player | None:
    """Text-mode game of a human against the exact engine.

    Returns the winner, or ``None`` when input ends before the game does.
    """
    board = open_neighborhood_hypergraph(g)
    pos = Position(board, 0, 0, first)
    show = lambda mask: "{" + ", ".join(g.label(v) for v in range(g.n) if (mask >> v) & 1) + "}"
    while not pos.is_terminal():
        print(f"Dominator: {show(pos.dom)}  Staller: {show(pos.sta)}", file=stdout)
        if pos.to_move is human:
            stdout.write(f"{human} to move, vertex index> ")
            stdout.flush()
            line = stdin.readline()
            if not line:
                print("", file=stdout)
                return None
            try:
                v = int(line.strip())
                pos = pos.play(v)
            except (ValueError, SolverError):
                print(f"illegal move {line.strip()!r}; choose a free vertex 0..{g.n - 1}",
                      file=stdout)
            continue
        v = best_move(pos, options)
        print(f"{pos.to_move} (engine) plays {g.label(v)}", file=stdout)
        pos = pos.play(v)
    winner = pos.winner()
    print(f"Dominator: {show(pos.dom)}  Staller: {show(pos.sta)}", file=stdout)
    print(f"{winner} wins", file=stdout)
    return winner


def cmd_play(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    options = _options(args)
    board = open_neighborhood_hypergraph(g)
    if board.n > options.cap():
        raise SizeCapExceeded(f"board has {board.n} vertices, cap is {options.cap()}")
    play_session(g, Player.parse(args.side), Player.parse(args.first), sys.stdin, sys.stdout,
                 options)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbtd", description="Maker-Breaker total domination game solver")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("graph", help="graph spec, e.g. cycle:5, grid:3x4, file:g.txt")
        return p

    p = graph_cmd("solve", "solve the game exactly")
    p.add_argument("--first", choices=["dominator", "staller", "both"], default="both")
    p.add_argument("--game", choices=["mbtd", "mbd"], default="mbtd")
    p.add_argument("--budget", type=int, default=None, help="node budget per solve")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = graph_cmd("classify", "closed-form class, falling back to the solver")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_classify)

    p = graph_cmd("family", "print a constructed graph")
    p.add_argument("--text", action="store_true", help="emit the edge-list text format")
    p.set_defaults(func=cmd_family)

    graph_cmd("tdom", "total domatic number with witness partition").set_defaults(func=cmd_tdom)
    graph_cmd("gammat", "total domination number with witness").set_defaults(func=cmd_gammat)

    p = graph_cmd("dmin", "check D-minimality")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_dmin)

    p = sub.add_parser("reduce", help="POS-CNF reductions and their equivalence check")
    p.add_argument("formula", help="path to a POS-CNF file")
    p.add_argument("--emit", choices=["split", "bipartite"], default=None)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = graph_cmd("play", "play against the engine")
    p.add_argument("--side", choices=["dominator", "staller"], default="staller")
    p.add_argument("--first", choices=["dominator", "staller"], default="dominator")
    p.set_defaults(func=cmd_play)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SizeCapExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (GraphError, StructuralError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
