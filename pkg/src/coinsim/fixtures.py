"""Canonical input files for the worked examples."""

from __future__ import annotations

import re

from coinsim.hypergraph import Hypergraph
from coinsim.textio import format_hypergraph, parse_hypergraph


class UnknownFixture(KeyError):
    code = "UNKNOWN_FIXTURE"


_STATIC = {
    # spanning tree on 7 vertices: 3 and 5 are hubs, 4 links them
    "fig2_tree": (Hypergraph(7, 2, ((1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7))), None),
    "fig3": (
        Hypergraph(5, 3, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 5), (2, 3, 5), (2, 4, 5))),
        None,
    ),
    "fig9_cluster": (
        Hypergraph(6, 3, ((1, 2, 3), (1, 4, 5), (1, 4, 6), (4, 5, 6))),
        [(1, 2, 3), (1, 4, 5, 6)],
    ),
    "g1_nonexample": (
        Hypergraph(6, 3, ((1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6))),
        [(1, 2, 3), (1, 4, 5, 6)],
    ),
    "g2_nonexample": (
        Hypergraph(6, 3, ((1, 2, 4), (1, 3, 5), (2, 3, 6))),
        [(1, 2, 4), (1, 3, 5), (2, 3, 6)],
    ),
    "star_n3_k2": (Hypergraph(3, 2, ((1, 3), (2, 3))), None),
}

FIXTURE_NAMES = tuple(_STATIC) + ("forehead_<n>", "complete_<n>_<k>")

_FOREHEAD = re.compile(r"forehead_?(\d+)$")
_COMPLETE = re.compile(r"complete[_(](\d+)[_,](\d+)\)?$")


def load_fixture(name: str) -> tuple[Hypergraph, list[tuple[int, ...]] | None]:
    if name in _STATIC:
        return _STATIC[name]
    if m := _FOREHEAD.match(name):
        n = int(m.group(1))
        if n >= 2:
            return Hypergraph.complete(n, n - 1), None
    if m := _COMPLETE.match(name):
        n, k = int(m.group(1)), int(m.group(2))
        if 1 <= k <= n:
            return Hypergraph.complete(n, k), None
    raise UnknownFixture(name)


def fixture_text(name: str) -> str:
    graph, components = load_fixture(name)
    return format_hypergraph(graph, components)


def round_trip(name: str) -> bool:
    graph, components = load_fixture(name)
    parsed, parsed_components = parse_hypergraph(fixture_text(name))
    return parsed == graph and parsed_components == components
