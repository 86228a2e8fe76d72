"""Line-oriented text formats for hypergraphs, clusters and strategies.

Hypergraph / cluster file::

    5 3            # n k
    1 2 3          # one hyperedge per line
    ...
    components     # optional: cluster component vertex sets follow
    1 2 3

Strategy file::

    strategy 5 3
    coin 1-2-3 0
    say 2: 1-2-4/0 ^ 1-2-5/0 ^ 2-4-5/0

``#`` starts a comment everywhere; blank lines are ignored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from coinsim.hypergraph import Hypergraph
from coinsim.strategy import Broadcast, CoinSymbol, Strategy


class ParseError(ValueError):
    code = "PARSE_ERROR"

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(lineno: int, line: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {line!r}") from None


def parse_hypergraph(text: str) -> tuple[Hypergraph, list[tuple[int, ...]] | None]:
    """Parse a hypergraph file; returns ``(graph, components or None)``."""
    lines = list(_lines(text))
    if not lines:
        raise ParseError(1, "missing 'n k' header")
    lineno, header = lines[0]
    nk = _ints(lineno, header)
    if len(nk) != 2:
        raise ParseError(lineno, "header must be 'n k'")
    n, k = nk
    edges: list[tuple[int, ...]] = []
    components: list[tuple[int, ...]] | None = None
    for lineno, line in lines[1:]:
        if line == "components":
            if components is not None:
                raise ParseError(lineno, "repeated 'components' section")
            components = []
            continue
        vs = _ints(lineno, line)
        if len(set(vs)) != len(vs):
            raise ParseError(lineno, "repeated vertex")
        if any(v < 1 or v > n for v in vs):
            raise ParseError(lineno, f"vertex outside 1..{n}")
        if components is not None:
            components.append(tuple(sorted(vs)))
            continue
        if k and len(vs) != k:
            raise ParseError(lineno, f"edge has {len(vs)} vertices, expected {k}")
        if tuple(sorted(vs)) in edges:
            raise ParseError(lineno, "duplicate edge")
        edges.append(tuple(sorted(vs)))
    try:
        graph = Hypergraph(n, k, tuple(edges))
    except ValueError as exc:
        raise ParseError(lines[0][0], str(exc)) from None
    return graph, components


def format_hypergraph(g: Hypergraph, components=None) -> str:
    out = [f"{g.n} {g.k}"]
    out += [" ".join(map(str, e)) for e in g.edges]
    if components is not None:
        out.append("components")
        out += [" ".join(map(str, sorted(c))) for c in components]
    return "\n".join(out) + "\n"


def _edge_str(edge) -> str:
    return "-".join(map(str, edge))


def _fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_strategy(strategy: Strategy) -> str:
    out = [
        f"strategy {strategy.n} {strategy.k}",
        f"# scheme: {strategy.scheme}",
        f"# rate: {_fraction(strategy.rate)} ({len(strategy.broadcasts)} bits / {len(strategy.coins)} coins)",
        f"# bound: {_fraction(strategy.bound)}",
    ]
    out += [f"coin {_edge_str(c.edge)} {c.repetition}" for c in strategy.coins]
    out += [
        f"say {b.speaker}: " + " ^ ".join(str(s) for s in b.parity_set)
        for b in strategy.broadcasts
    ]
    return "\n".join(out) + "\n"


def _parse_edge(lineno: int, tok: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in tok.split("-"))
    except ValueError:
        raise ParseError(lineno, f"bad edge {tok!r}") from None


def _parse_symbol(lineno: int, tok: str) -> CoinSymbol:
    edge, sep, rep = tok.partition("/")
    if not sep:
        raise ParseError(lineno, f"symbol {tok!r} lacks '/<rep>'")
    try:
        return CoinSymbol(_parse_edge(lineno, edge), int(rep))
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def parse_strategy(text: str) -> Strategy:
    lines = list(_lines(text))
    if not lines or not lines[0][1].startswith("strategy"):
        raise ParseError(lines[0][0] if lines else 1, "missing 'strategy n k' header")
    lineno, header = lines[0]
    nk = _ints(lineno, header[len("strategy"):])
    if len(nk) != 2:
        raise ParseError(lineno, "header must be 'strategy n k'")
    n, k = nk
    coins: list[CoinSymbol] = []
    broadcasts: list[Broadcast] = []
    for lineno, line in lines[1:]:
        verb, _, rest = line.partition(" ")
        if verb == "coin":
            parts = rest.split()
            if len(parts) != 2:
                raise ParseError(lineno, "expected 'coin <edge> <rep>'")
            try:
                coins.append(CoinSymbol(_parse_edge(lineno, parts[0]), int(parts[1])))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        elif verb == "say":
            speaker, colon, syms = rest.partition(":")
            if not colon:
                raise ParseError(lineno, "expected 'say <speaker>: <symbol> ^ ...'")
            parity = tuple(_parse_symbol(lineno, s.strip()) for s in syms.split("^") if s.strip())
            try:
                broadcasts.append(Broadcast(int(speaker), parity))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from None
        else:
            raise ParseError(lineno, f"unknown directive {verb!r}")
    if not coins:
        raise ParseError(lines[0][0], "strategy has no coins")
    edges = list(dict.fromkeys(c.edge for c in coins))
    try:
        graph = Hypergraph(n, k, tuple(edges))
        return Strategy(graph, tuple(coins), tuple(broadcasts), scheme="parsed")
    except ValueError as exc:
        raise ParseError(lines[0][0], str(exc)) from None
