"""Command-line front end.

Subcommands: analyze, gen, walk, pdf, asymvar.  Exit codes follow a
shell-friendly contract: 0 when the two growth rates are equal (or the
command simply succeeded), 1 when they differ, 2 for invalid input or a
failed precondition, 64 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter

from .conditions import growth_verdict
from .families import (
    complete_bipartite_graph,
    complete_graph,
    equal_growth_wheel,
    k4_minus_edge,
    subdivide,
    wheel_graph,
)
from .graph import (
    Graph,
    GraphError,
    IrreducibilityVerdict,
    format_graph_text,
    is_nb_irreducible,
    parse_graph_text,
)
from .operators import PreconditionError, build_nb_matrix, perron
from .variance import asymptotic_variance, truncated_variance
from .walks import CapabilityError, distribution_csv, exact_bit_distribution, histogram_csv, run_walks

EXIT_EQUAL = 0
EXIT_STRICT = 1
EXIT_INVALID = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_graph_arg(path: str) -> Graph:
    if path == "-":
        return parse_graph_text(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _effective_workers(requested: int) -> int:
    cap = os.environ.get("NBRW_THREADS")
    if cap:
        try:
            return max(1, min(requested, int(cap)))
        except ValueError:
            pass
    return max(1, requested)


def _degree_histogram(g: Graph) -> dict[str, int]:
    return {str(d): c for d, c in sorted(Counter(int(x) for x in g.degrees).items())}


def cmd_analyze(args) -> int:
    g = _load_graph_arg(args.input)
    verdict = is_nb_irreducible(g)
    report: dict = {
        "graph": {
            "vertices": g.vertex_count,
            "edges": len(g.edges),
            "darts": g.dart_count,
            "degree_histogram": _degree_histogram(g),
        },
        "nb_irreducible": verdict.value,
    }
    if verdict is not IrreducibilityVerdict.OK:
        report["error"] = f"graph is not NB-irreducible: {verdict.value}"
        if args.json:
            print(json.dumps(report, indent=2))
        else:
            _print_graph_summary(report)
            print(f"error: {report['error']}")
        return EXIT_INVALID

    result = growth_verdict(g, rel_tol=args.tol)
    rho_info = perron(build_nb_matrix(g), rel_tol=args.tol)
    report.update(
        {
            "lambda": {"float": result.lambda_float, "exact": result.lambda_exact.as_pairs()},
            "rho": {"value": rho_info.value, "rel_tol": args.tol, "iterations": rho_info.iterations},
            "suspended_path_condition": result.path_condition.to_json(),
            "cycle_condition": result.cycle_condition.to_json(),
            "verdict": result.status,
            "gap": rho_info.value - result.lambda_float,
        }
    )
    if args.with_variance:
        report["asymptotic_variance"] = asymptotic_variance(g)

    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_analysis(report)
    return EXIT_EQUAL if result.equal else EXIT_STRICT


def _print_graph_summary(report: dict) -> None:
    graph = report["graph"]
    histogram = ", ".join(f"deg {d}: {c}" for d, c in graph["degree_histogram"].items())
    print(f"graph: {graph['vertices']} vertices, {graph['edges']} edges, {graph['darts']} darts")
    print(f"degrees: {histogram}")
    print(f"nb_irreducible: {report['nb_irreducible']}")


def _format_exact(pairs: list) -> str:
    if not pairs:
        return "1"
    return " * ".join(f"{p}^({num}/{den})" if den != 1 else f"{p}^{num}" for p, num, den in pairs)


def _print_analysis(report: dict) -> None:
    _print_graph_summary(report)
    lam = report["lambda"]
    rho = report["rho"]
    print(f"lambda: {lam['float']:.12f} = {_format_exact(lam['exact'])}")
    print(f"rho:    {rho['value']:.12f} (rel_tol {rho['rel_tol']:g}, {rho['iterations']} iterations)")
    print(f"gap:    {report['gap']:.12g}")
    for name, key in (
        ("suspended path condition", "suspended_path_condition"),
        ("cycle condition", "cycle_condition"),
    ):
        verdict = report[key]
        status = "holds" if verdict["holds"] else "violated"
        print(f"{name}: {status}")
        witness = verdict.get("witness")
        if witness and witness["type"] in ("path", "cycle"):
            print(f"  witness {witness['type']} darts: {witness['darts']}")
    if "asymptotic_variance" in report:
        print(f"asymptotic_variance: {report['asymptotic_variance']:.12g}")
    print(f"verdict: {report['verdict']}")


def cmd_gen(args) -> int:
    try:
        if args.family == "wheel":
            g = wheel_graph(args.n, args.l1, args.l2)
            comment = f"wheel n={args.n} l1={args.l1} l2={args.l2}"
        elif args.family == "hk":
            g = equal_growth_wheel(args.k)
            comment = f"hk k={args.k}"
        elif args.family == "subdivide":
            base = _load_graph_arg(args.input)
            g = subdivide(base, args.m)
            comment = f"subdivision m={args.m}"
        elif args.family == "k4e":
            g = k4_minus_edge()
            comment = "K4 minus an edge"
        elif args.family == "complete":
            g = complete_graph(args.n)
            comment = f"complete n={args.n}"
        elif args.family == "bipartite":
            g = complete_bipartite_graph(args.a, args.b)
            comment = f"complete bipartite a={args.a} b={args.b}"
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown family {args.family}")
    except ValueError as exc:
        print(f"gen: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _write_output(format_graph_text(g, comment), args.output)
    return 0


def cmd_walk(args) -> int:
    g = _load_graph_arg(args.input)
    workers = _effective_workers(args.workers)
    batch = run_walks(g, args.length, args.samples, args.seed, workers=workers)
    stats = batch.bit_stats()
    print(f"length: {stats.length}")
    print(f"samples: {stats.sample_count}")
    print(f"seed: {stats.seed}")
    print(f"engine: {batch.engine}")
    print(f"workers: {workers}")
    print(f"mean_bits_per_step: {stats.mean_bits_per_step:.9f}")
    print(f"variance_of_bits: {stats.variance_of_bits:.9f}")
    if stats.length:
        print(f"variance_per_step: {stats.variance_of_bits / stats.length:.9f}")
    print(f"standard_error_of_mean: {stats.standard_error_of_mean:.3e}")
    if args.csv:
        _write_output(histogram_csv(batch), args.csv)
    return 0


def cmd_pdf(args) -> int:
    g = _load_graph_arg(args.input)
    dist = exact_bit_distribution(g, args.length)
    csv_text = distribution_csv(dist)
    if args.csv:
        _write_output(csv_text, args.csv)
        print(f"support: {len(dist.probabilities)} count vectors")
        print(f"mean_bits_per_step: {dist.mean_bits() / max(dist.length, 1):.9f}")
        print(f"variance_of_bits: {dist.variance_bits():.9f}")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_asymvar(args) -> int:
    g = _load_graph_arg(args.input)
    truncated = {length: truncated_variance(g, length) for length in args.truncate}
    report = {
        "limit": asymptotic_variance(g),
        "truncated": [[length, truncated[length]] for length in sorted(truncated)],
        "method": "fundamental_solve",
    }
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="nbrw", description="Non-backtracking walk growth-rate analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="growth-rate equality report", parents=[], add_help=True)
    p_analyze.add_argument("input", help="graph file (or - for stdin)")
    p_analyze.add_argument("--tol", type=float, default=1e-12, help="relative tolerance for rho")
    p_analyze.add_argument("--json", action="store_true", help="emit a JSON report")
    p_analyze.add_argument("--with-variance", action="store_true", help="include the asymptotic variance")
    p_analyze.set_defaults(func=cmd_analyze)

    p_gen = sub.add_parser("gen", help="generate a graph file")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)
    specs = {
        "wheel": [("--n", int, True), ("--l1", int, True), ("--l2", int, True)],
        "hk": [("--k", int, True)],
        "subdivide": [("--m", int, True), ("--input", str, False)],
        "k4e": [],
        "complete": [("--n", int, True)],
        "bipartite": [("--a", int, True), ("--b", int, True)],
    }
    for family, options in specs.items():
        p_family = gen_sub.add_parser(family)
        for flag, ftype, required in options:
            if flag == "--input":
                p_family.add_argument("-i", "--input", default="-", help="base graph file (default stdin)")
            else:
                p_family.add_argument(flag, type=ftype, required=required)
        p_family.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p_family.set_defaults(func=cmd_gen)

    p_walk = sub.add_parser("walk", help="Monte Carlo bit statistics")
    p_walk.add_argument("input")
    p_walk.add_argument("--len", dest="length", type=int, required=True)
    p_walk.add_argument("--samples", type=int, required=True)
    p_walk.add_argument("--seed", type=int, default=0)
    p_walk.add_argument("--workers", type=int, default=1)
    p_walk.add_argument("--csv", default=None, help="write the empirical bit histogram")
    p_walk.set_defaults(func=cmd_walk)

    p_pdf = sub.add_parser("pdf", help="exact bit distribution as CSV")
    p_pdf.add_argument("input")
    p_pdf.add_argument("--len", dest="length", type=int, required=True)
    p_pdf.add_argument("--csv", default=None, help="output path (default stdout)")
    p_pdf.set_defaults(func=cmd_pdf)

    p_var = sub.add_parser("asymvar", help="asymptotic normalized variance as JSON")
    p_var.add_argument("input")
    p_var.add_argument("--truncate", type=int, nargs="*", default=[])
    p_var.set_defaults(func=cmd_asymvar)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (GraphError, PreconditionError, CapabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
