"""Command line interface: ``sgmine <command> [options]``.

Exit status is 0 on success, 1 on usage errors and 2 on data or domain
errors (unreadable files, malformed logs or models, invalid conversions).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import gaspd
from .alergia import AlergiaParams, run_alergia
from .automata import SDFA
from .eventlog import read_log
from .relevance import entropic_relevance
from .sdag import SDAG, annotate_frequencies, model_size, reduce_to_dfg, sdag_of_sdfa, sfa_of_sdag
from .serialize import dump_model, load_model, sdag_to_dict, to_dot

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sgmine", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("discover", help="learn one model with ALERGIA")
    p.add_argument("--log", required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["sdfa-json", "sdag-json", "dot"], default="sdfa-json")

    p = sub.add_parser("search", help="genetic search for Pareto-optimal parameters")
    p.add_argument("--log", required=True)
    p.add_argument("--pop", type=_positive_int, default=50)
    p.add_argument("--gens", type=_positive_int, default=50)
    p.add_argument("--parents", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--omega-max", type=float, default=15.0)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--mutation-scale", type=float, default=0.1)
    p.add_argument("--lineage-experiment", action="store_true")

    p = sub.add_parser("score", help="entropic relevance of a model to a log")
    p.add_argument("--log", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--kind", choices=["sdfa", "sdag"])

    p = sub.add_parser("convert", help="convert between SDFA, SDAG and DFG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--to", choices=["sdag", "dfg", "sfa"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--kind", choices=["sdfa", "sdag"])

    p = sub.add_parser("annotate", help="derive arc and node frequencies of an SDAG")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--cases", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("export", help="render a JSON model as Graphviz DOT")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cases", type=float, help="annotate SDAGs with frequencies for this many cases")
    return parser


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _as_sdag(model) -> SDAG:
    return sdag_of_sdfa(model) if isinstance(model, SDFA) else model


def cmd_discover(args) -> None:
    log = read_log(args.log)
    sdfa = run_alergia(log, AlergiaParams(args.omega, args.t, args.f))
    graph = sdag_of_sdfa(sdfa)
    if args.format == "sdfa-json":
        dump_model(sdfa, args.out)
    elif args.format == "sdag-json":
        dump_model(graph, args.out)
    else:
        _write(args.out, to_dot(sdfa))
    report = entropic_relevance(log, graph)
    print(json.dumps({"size": model_size(graph), "relevance": report.bits_per_trace, "states": len(sdfa)}))


def cmd_search(args) -> None:
    if args.parents < 2:
        raise UsageError("--parents must be at least 2")
    if args.pop < 2:
        raise UsageError("--pop must be at least 2")
    log = read_log(args.log)
    config = gaspd.SearchConfig(
        parents=args.parents,
        population_size=args.pop,
        generations=args.gens,
        omega_max=args.omega_max,
        t_max=args.t_max,
        mutation_scale=args.mutation_scale,
        seed=args.seed,
        lineage=args.lineage_experiment,
        n_jobs=gaspd.default_jobs(),
    )
    frontier, history = gaspd.run_search(log, config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    last = history[-1].generation
    gaspd.write_frontier_csv(frontier, last, out / "frontier.csv")
    gaspd.write_history_csv(history, out / "history.csv")
    if args.lineage_experiment:
        gaspd.write_lineage_csv(history, out / "lineage.csv")
    for ind in frontier:
        graph = sdag_of_sdfa(run_alergia(log, ind.params))
        stem = f"model_size{ind.size}_rel{ind.relevance:.6f}"
        dump_model(graph, out / f"{stem}.json")
        _write(out / f"{stem}.dot", to_dot(graph))
    print(json.dumps({
        "frontier": [[i.size, i.relevance] for i in sorted(frontier, key=lambda i: (i.size, i.relevance))],
        "generations": last,
    }))


def cmd_score(args) -> None:
    log = read_log(args.log)
    model = load_model(args.model, args.kind)
    report = entropic_relevance(log, model)
    print(json.dumps(report.to_dict()))
    print(f"{report.bits_per_trace:.3f} bits per trace, coverage {report.coverage:.3f}")


def cmd_convert(args) -> None:
    model = load_model(args.input, args.kind)
    if args.to == "sdag":
        result = _as_sdag(model)
    elif args.to == "dfg":
        result = reduce_to_dfg(_as_sdag(model))
    else:
        result = model if isinstance(model, SDFA) else sfa_of_sdag(model)
    dump_model(result, args.out)


def cmd_annotate(args) -> None:
    ann = annotate_frequencies(_as_sdag(load_model(args.input)), args.cases)
    if args.format == "json":
        _write(args.out, json.dumps(sdag_to_dict(ann), indent=2) + "\n")
    else:
        _write(args.out, to_dot(ann))


def cmd_export(args) -> None:
    model = load_model(args.input)
    if args.cases is not None:
        model = annotate_frequencies(_as_sdag(model), args.cases)
    _write(args.out, to_dot(model))


COMMANDS = {
    "discover": cmd_discover,
    "search": cmd_search,
    "score": cmd_score,
    "convert": cmd_convert,
    "annotate": cmd_annotate,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sgmine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, TypeError, ArithmeticError) as exc:
        print(f"sgmine: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
