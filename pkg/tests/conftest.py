import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coinsim.fixtures import load_fixture  # noqa: E402
from coinsim.hypergraph import (  # noqa: E402
    Hypergraph,
    is_topologically_connected,
    validate_cluster,
)
from coinsim.strategy import (  # noqa: E402
    handcrafted_nonexample_schemes,
    synthesize_cluster,
    synthesize_forehead,
    synthesize_topological,
    synthesize_tree,
)
from oracles import random_uniform_edges  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def connected_fixtures(ns, ks, random_per_size=3, seed=7):
    """Topologically connected hypergraphs: complete, star, and seeded random supersets of a star."""
    rng = random.Random(seed)
    out = []
    for n in ns:
        for k in ks:
            if not 2 <= k < n:
                continue
            out.append(Hypergraph.complete(n, k))
            out.append(Hypergraph.star(n, k, center=n))
            for _ in range(random_per_size):
                # a random relabeled star plus random extra edges stays connected
                center = rng.randint(1, n)
                base = set(Hypergraph.star(n, k, center).edges)
                extra = random_uniform_edges(rng, n, k, rng.randint(0, 4))
                edges = list(base | set(extra))
                rng.shuffle(edges)
                g = Hypergraph(n, k, tuple(edges))
                assert is_topologically_connected(g)
                out.append(g)
    return out


def chain_cluster(sizes, k, shape="chain"):
    """Cluster of complete k-uniform components glued at single vertices.

    ``shape="chain"`` links component i to i+1; ``"star"`` glues all at vertex 1.
    """
    comps = []
    nxt = 1
    for i, size in enumerate(sizes):
        if i == 0:
            comp = list(range(1, size + 1))
            nxt = size + 1
        else:
            anchor = 1 if shape == "star" else comps[-1][-1]
            comp = [anchor] + list(range(nxt, nxt + size - 1))
            nxt += size - 1
        comps.append(comp)
    n = nxt - 1
    edges = []
    for comp in comps:
        edges += [e for e in Hypergraph.complete(n, k).edges if set(e) <= set(comp)]
    return validate_cluster(Hypergraph(n, k, tuple(dict.fromkeys(edges))), comps)


def strategy_fixtures():
    """Named synthesized strategies small enough for exhaustive checks (<= 16 coins)."""
    out = {}
    g, _ = load_fixture("fig3")
    out["fig3"] = synthesize_topological(g)
    g, comps = load_fixture("fig9_cluster")
    out["fig9_cluster"] = synthesize_cluster(validate_cluster(g, comps))
    g, _ = load_fixture("fig2_tree")
    out["fig2_tree"] = synthesize_tree(g)
    g, _ = load_fixture("star_n3_k2")
    out["star_n3_k2"] = synthesize_tree(g)
    for n in (3, 4, 5):
        out[f"forehead_{n}"] = synthesize_forehead(n)
    for n, k in [(4, 3), (5, 3), (5, 4), (6, 4), (6, 5), (5, 2), (6, 2)]:
        out[f"complete_{n}_{k}"] = synthesize_topological(Hypergraph.complete(n, k))
    out["star_6_3"] = synthesize_topological(Hypergraph.star(6, 3, center=6))
    out["cluster_3_4_k3"] = synthesize_cluster(chain_cluster((3, 4), 3))
    out["cluster_4_5_k4"] = synthesize_cluster(chain_cluster((4, 5), 4))
    out["cluster_star_3x3"] = synthesize_cluster(chain_cluster((3, 3, 3), 3, shape="star"))
    out["cluster_chain_3_4_3"] = synthesize_cluster(chain_cluster((3, 4, 3), 3))
    g1, g2 = handcrafted_nonexample_schemes()
    out["g1_handcrafted"] = g1
    out["g2_handcrafted"] = g2
    return out


STRATEGIES = strategy_fixtures()
OPTIMAL = {name: s for name, s in STRATEGIES.items() if s.scheme != "handcrafted"}


@pytest.fixture(params=sorted(STRATEGIES))
def any_strategy(request):
    return STRATEGIES[request.param]
