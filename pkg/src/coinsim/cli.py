"""Command-line front end.

Exit statuses::

    0  success
    1  check failed: a strategy does not decode with zero error, or an
       entropy inequality does not hold
    2  usage error
    3  PARSE_ERROR
    4  NOT_CONNECTED or UNIFORMITY_ERROR
    5  invalid cluster (NOT_PATH_CONNECTED, HAS_CYCLE,
       COMPONENT_NOT_CONNECTED, EDGE_OUTSIDE_COMPONENTS)
    6  TOO_LARGE
    7  SINGULAR_SYSTEM or DOMAIN_MISMATCH
    8  UNKNOWN_FIXTURE

``auto`` scheme selection, first match wins: k=2 -> tree; complete
(n-1)-uniform -> forehead; cluster file -> cluster; otherwise topological.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

from coinsim import gf2
from coinsim.entropy import exact_entropies, fmt_bits, verify_nonexample_bounds, xor_counterexample
from coinsim.fixtures import FIXTURE_NAMES, UnknownFixture, fixture_text
from coinsim.hypergraph import (
    ClusterError,
    Hypergraph,
    HypergraphError,
    incidence_matrix,
    is_cycle_free,
    is_path_connected,
    validate_cluster,
)
from coinsim.simulate import SimulationError, TooLarge, verify_zero_error
from coinsim.strategy import (
    G1_NONEXAMPLE,
    G2_NONEXAMPLE,
    Strategy,
    handcrafted_nonexample_schemes,
    synthesize_cluster,
    synthesize_forehead,
    synthesize_topological,
    synthesize_tree,
)
from coinsim.textio import ParseError, format_strategy, parse_hypergraph, parse_strategy

EXIT_FAILED = 1
EXIT_PARSE = 3
EXIT_CONNECTIVITY = 4
EXIT_CLUSTER = 5
EXIT_TOO_LARGE = 6
EXIT_SINGULAR = 7
EXIT_FIXTURE = 8

SCHEMES = ("auto", "tree", "topological", "forehead", "cluster", "handcrafted")


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _read_input(spec: str) -> str:
    path = Path(spec)
    if path.is_file():
        return path.read_text()
    return fixture_text(spec)


def _is_strategy_text(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return line.startswith("strategy")
    return False


def _load_graph(spec: str):
    return parse_hypergraph(_read_input(spec))


def _is_forehead(g: Hypergraph) -> bool:
    return g.n >= 2 and g.k == g.n - 1 and len(g.edges) == g.n


def synthesize(graph: Hypergraph, components, scheme: str = "auto") -> Strategy:
    if scheme == "auto":
        if graph.k == 2:
            scheme = "tree"
        elif _is_forehead(graph):
            scheme = "forehead"
        elif components is not None:
            scheme = "cluster"
        else:
            scheme = "topological"
    if scheme == "tree":
        return synthesize_tree(graph)
    if scheme == "topological":
        return synthesize_topological(graph)
    if scheme == "forehead":
        if not _is_forehead(graph):
            raise HypergraphError("forehead scheme needs the complete (n-1)-uniform hypergraph")
        return synthesize_forehead(graph.n)
    if scheme == "cluster":
        if components is None:
            raise ClusterError("NOT_PATH_CONNECTED", "input has no 'components' section")
        return synthesize_cluster(validate_cluster(graph, components))
    if scheme == "handcrafted":
        g1, g2 = handcrafted_nonexample_schemes()
        if set(graph.edges) == set(G1_NONEXAMPLE.edges) and graph.n == 6:
            return g1
        if set(graph.edges) == set(G2_NONEXAMPLE.edges) and graph.n == 6:
            return g2
        raise HypergraphError("handcrafted schemes exist only for g1_nonexample and g2_nonexample")
    raise ValueError(f"unknown scheme {scheme!r}")


def _load_strategy(spec: str, scheme: str = "auto") -> Strategy:
    text = _read_input(spec)
    if _is_strategy_text(text):
        return parse_strategy(text)
    graph, components = parse_hypergraph(text)
    return synthesize(graph, components, scheme)


def cmd_check(args) -> int:
    graph, components = _load_graph(args.input)
    out = [f"n: {graph.n}", f"k: {graph.k}", f"edge-count: {len(graph.edges)}"]
    status = 0
    uniform = graph.k >= 2
    out.append(f"k-uniform: {_yes(uniform)}")
    if uniform:
        target = comb(graph.n - 1, graph.k - 1)
        rk = gf2.rank(incidence_matrix(graph).matrix)
        connected = rk == target
        out.append(f"incidence-rank: {rk}")
        out.append(f"topologically-connected: {_yes(connected)}")
        minimal = connected and len(graph.edges) == target
        out.append(f"minimal: {_yes(minimal)}")
        out.append(f"spanning-rank: {rk} vs C({graph.n - 1},{graph.k - 1}) = {target}")
        if minimal:
            out.append(f"edges: {len(graph.edges)} = C({graph.n - 1},{graph.k - 1})")
        if not connected and components is None:
            out.append("error: NOT_CONNECTED")
            status = EXIT_CONNECTIVITY
    else:
        out.append("topologically-connected: n/a (UNIFORMITY_ERROR)")
        if components is None:
            status = EXIT_CONNECTIVITY
    nonempty = graph.n >= 1 and bool(graph.edges)
    out.append(f"path-connected: {_yes(nonempty and is_path_connected(graph))}")
    out.append(f"cycle-free: {_yes(is_cycle_free(graph))}")
    if components is not None:
        try:
            spec = validate_cluster(graph, components)
        except ClusterError as exc:
            out.append(f"cluster: {exc.code}")
            out.append(f"error: {exc}")
            status = EXIT_CLUSTER
        except HypergraphError as exc:
            out.append(f"cluster: {exc.code}")
            status = EXIT_CONNECTIVITY
        else:
            gc = spec.cluster_graph
            m = len(spec.components)
            out.append("cluster: valid")
            out.append(f"components: {m}")
            out.append(
                f"component-size-sum: sum(|A_i|-1) = {sum(len(a) - 1 for a in spec.components)} = n-1 = {graph.n - 1}"
            )
            out.append(
                f"cluster-degree-sum: sum(deg-1) = {sum(gc.degree(v) - 1 for v in gc.vertices)} = m-1 = {m - 1}"
            )
    print("\n".join(out))
    return status


def cmd_synthesize(args) -> int:
    graph, components = _load_graph(args.input)
    strategy = synthesize(graph, components, args.scheme)
    text = format_strategy(strategy)
    if args.output:
        Path(args.output).write_text(text)
        r, b = strategy.rate, strategy.bound
        print(f"coins: {len(strategy.coins)}")
        print(f"broadcasts: {len(strategy.broadcasts)}")
        print(f"rate: {r.numerator}/{r.denominator}")
        print(f"bound: {b.numerator}/{b.denominator}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    strategy = _load_strategy(args.input, args.scheme)
    report = verify_zero_error(strategy, args.mode, samples=args.samples, seed=args.seed)
    sys.stdout.write(report.to_text())
    if args.json:
        Path(args.json).write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0 if report.zero_error else EXIT_FAILED


def cmd_entropy(args) -> int:
    if args.nonexamples:
        ok = True
        for res in verify_nonexample_bounds():
            print(
                f"{res.name}: h_M_bits {fmt_bits(res.h_M)} h_X_bits {fmt_bits(res.h_X)}"
                f" rate {res.rate} bound {res.bound} zero_error {_yes(res.zero_error)}"
                f" above_bound {_yes(res.above_bound)}"
            )
            ok &= res.zero_error and res.above_bound
        return 0 if ok else EXIT_FAILED
    if args.xor is not None:
        lhs, rhs, holds = xor_counterexample(args.xor)
        print(f"sum_conditional_bits: {fmt_bits(lhs)}")
        print(f"rhs_bits: {fmt_bits(rhs)}")
        print(f"lemma42_holds: {_yes(holds)}")
        return 0
    if args.input is None:
        raise SystemExit("entropy: give an input, --nonexamples or --xor N")
    report = exact_entropies(_load_strategy(args.input, args.scheme))
    sys.stdout.write(report.to_text())
    return 0 if report.lemma42_holds and report.theorem11_satisfied else EXIT_FAILED


def cmd_fixtures(args) -> int:
    if args.list:
        print("\n".join(FIXTURE_NAMES))
        return 0
    if not args.name:
        raise SystemExit("fixtures: give a fixture name or --list")
    for name in args.name:
        text = fixture_text(name)
        if args.output:
            out = Path(args.output)
            if len(args.name) > 1 or out.is_dir():
                out.mkdir(parents=True, exist_ok=True)
                out = out / f"{name}.txt"
            out.write_text(text)
        else:
            sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coinsim", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("check", help="connectivity and cluster diagnostics")
    c.add_argument("input", help="hypergraph file or fixture name")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("synthesize", help="emit a strategy file")
    s.add_argument("input")
    s.add_argument("--scheme", choices=SCHEMES, default="auto")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synthesize)

    m = sub.add_parser("simulate", help="verify zero-error decoding")
    m.add_argument("input", help="strategy file, hypergraph file or fixture name")
    m.add_argument("--scheme", choices=SCHEMES, default="auto")
    m.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    m.add_argument("--samples", type=int, default=1000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--json", help="also write the report as JSON")
    m.set_defaults(func=cmd_simulate)

    e = sub.add_parser("entropy", help="exact entropies and lower-bound checks")
    e.add_argument("input", nargs="?")
    e.add_argument("--scheme", choices=SCHEMES, default="auto")
    e.add_argument("--nonexamples", action="store_true")
    e.add_argument("--xor", type=int, metavar="N", help="XOR counterexample with N private coins")
    e.set_defaults(func=cmd_entropy)

    f = sub.add_parser("fixtures", help="write the canonical example inputs")
    f.add_argument("name", nargs="*")
    f.add_argument("-o", "--output", help="file, or directory when several names are given")
    f.add_argument("--list", action="store_true")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        code, status, msg = exc.code, EXIT_PARSE, str(exc)
    except ClusterError as exc:
        code, status, msg = exc.code, EXIT_CLUSTER, str(exc)
    except HypergraphError as exc:
        code, status, msg = exc.code, EXIT_CONNECTIVITY, str(exc)
    except TooLarge as exc:
        print(f"TOO_LARGE: {exc}", file=sys.stderr)
        print("hint: rerun with --mode sampled", file=sys.stderr)
        return EXIT_TOO_LARGE
    except SimulationError as exc:
        code, status, msg = exc.code, EXIT_SINGULAR, str(exc)
    except UnknownFixture as exc:
        print(f"UNKNOWN_FIXTURE: {exc.args[0]} (try 'coinsim fixtures --list')", file=sys.stderr)
        return EXIT_FIXTURE
    except ValueError as exc:
        # Broadcasts that XOR coins the speaker cannot see, duplicate coins, ...
        code, status, msg = "PARSE_ERROR", EXIT_PARSE, str(exc)
    print(f"{code}: {msg}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
