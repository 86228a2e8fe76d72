"""One-shot blackboard strategies built from XOR parities of shared coins.

Every synthesizer returns a :class:`Strategy` whose broadcasts are fixed
parity sets, so the message is a linear function of the coin tosses and
the protocol is simultaneous (no broadcast depends on another).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, lcm

from coinsim import gf2
from coinsim.hypergraph import (
    ClusterSpec,
    Edge,
    Hypergraph,
    NotConnectedError,
    UniformityError,
    colex_key,
    incidence_matrix,
    induced_hypergraph,
    is_path_connected,
    is_topologically_connected,
    minimal_connected_subgraph,
)


@dataclass(frozen=True, order=True)
class CoinSymbol:
    """Toss number ``repetition`` of the coin shared by ``edge``."""

    edge: Edge
    repetition: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edge", tuple(sorted(self.edge)))
        if self.repetition < 0:
            raise ValueError("repetition must be >= 0")

    def __str__(self) -> str:
        return "-".join(map(str, self.edge)) + f"/{self.repetition}"


@dataclass(frozen=True)
class Broadcast:
    """One blackboard bit: the XOR of ``parity_set`` written by ``speaker``."""

    speaker: int
    parity_set: tuple[CoinSymbol, ...]

    def __post_init__(self):
        syms = tuple(self.parity_set)
        object.__setattr__(self, "parity_set", syms)
        if not syms:
            raise ValueError("broadcast must XOR at least one coin")
        if len(set(syms)) != len(syms):
            raise ValueError(f"repeated symbol in parity set {syms}")
        for s in syms:
            if self.speaker not in s.edge:
                raise ValueError(f"user {self.speaker} does not hold coin {s}")


@dataclass(frozen=True)
class Strategy:
    graph: Hypergraph
    coins: tuple[CoinSymbol, ...]
    broadcasts: tuple[Broadcast, ...]
    scheme: str = "custom"
    cluster: ClusterSpec | None = None
    # (user, component index) -> minimal (k-1)-connected link used by that user
    per_user_G_star: dict = field(default_factory=dict, compare=False)
    repetitions: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coins", tuple(self.coins))
        object.__setattr__(self, "broadcasts", tuple(self.broadcasts))
        if len(set(self.coins)) != len(self.coins):
            raise ValueError("duplicate coin symbol")
        known = set(self.coins)
        for b in self.broadcasts:
            if not 1 <= b.speaker <= self.graph.n:
                raise ValueError(f"speaker {b.speaker} not a user")
            missing = [str(s) for s in b.parity_set if s not in known]
            if missing:
                raise ValueError(f"broadcast uses unknown coins {missing}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def rate(self) -> Fraction:
        return Fraction(len(self.broadcasts), len(self.coins))

    @property
    def bound(self) -> Fraction:
        return optimal_rate(self.n, self.k)

    def coin_index(self) -> dict[CoinSymbol, int]:
        return {c: i for i, c in enumerate(self.coins)}

    def held_by(self, user: int) -> list[int]:
        """Indices of the coins whose edge contains ``user``."""
        return [i for i, c in enumerate(self.coins) if user in c.edge]

    def broadcasts_by(self, user: int) -> list[Broadcast]:
        return [b for b in self.broadcasts if b.speaker == user]


def optimal_rate(n: int, k: int) -> Fraction:
    """Lower bound on blackboard bits per common output bit."""
    return Fraction(n - k, n - 1)


def synthesize_tree(g: Hypergraph) -> Strategy:
    """Spanning-tree scheme for connected graphs.

    Each tree vertex of degree ``m >= 2`` announces ``R_e1 ^ R_ej`` for
    ``j = 2..m``, its tree edges taken in coin order.
    """
    if g.k != 2:
        raise UniformityError(f"tree scheme needs a 2-uniform graph, got k={g.k}")
    if not is_path_connected(g):
        raise NotConnectedError("graph is not connected")
    tree = minimal_connected_subgraph(g)
    coins = [CoinSymbol(tree.original_edge(e)) for e in tree.edges]
    broadcasts = []
    for v in g.vertices:
        name = g.label(v)
        incident = [c for c in coins if name in c.edge]
        first = incident[0] if incident else None
        for other in incident[1:]:
            broadcasts.append(Broadcast(name, (first, other)))
    return Strategy(g, tuple(coins), tuple(broadcasts), scheme="tree")


def _component_messages(h: Hypergraph, repetition: int, g_star: dict | None = None) -> list[Broadcast]:
    """Per-user parity messages for a minimal topologically connected ``h``.

    User ``i`` takes its link, picks the greedy colex basis as the spanning
    subgraph and, for each remaining link edge, XORs that edge with the
    basis edges that generate it (all lifted back by adding ``i``).
    """
    out = []
    for i in h.vertices:
        if h.degree(i) == 0:
            continue
        link = induced_hypergraph(h, i)
        link = link.with_edges(sorted(link.edges, key=colex_key))
        star = minimal_connected_subgraph(link)
        if g_star is not None:
            g_star[h.label(i)] = tuple(link.original_edge(e) for e in star.edges)
        inc = incidence_matrix(star)
        basis = set(star.edges)
        speaker = h.label(i)

        def lift(e: Edge) -> CoinSymbol:
            return CoinSymbol(link.original_edge(e) + (speaker,), repetition)

        for e in link.edges:
            if e in basis:
                continue
            member, combo = gf2.in_row_space(inc.matrix, inc.row_for(e))
            if not member:
                raise AssertionError(f"link edge {e} of user {speaker} not generated by its basis")
            parity = [lift(e)] + [lift(star.edges[j]) for j in sorted(combo)]
            out.append(Broadcast(speaker, tuple(parity)))
    return out


def synthesize_topological(g: Hypergraph) -> Strategy:
    """Link-based scheme for topologically k-connected hypergraphs.

    ``g`` is first reduced to its greedy minimal spanning subgraph.  For
    ``k == 2`` the scheme coincides with :func:`synthesize_tree`, which is
    returned directly.
    """
    if g.k == 2:
        return synthesize_tree(g)
    if g.k < 3:
        raise UniformityError(f"topological scheme needs k >= 2, got k={g.k}")
    if not is_topologically_connected(g):
        raise NotConnectedError(f"hypergraph is not topologically {g.k}-connected")
    minimal = minimal_connected_subgraph(g)
    coins = tuple(CoinSymbol(minimal.original_edge(e)) for e in minimal.edges)
    stars: dict = {}
    broadcasts = _component_messages(minimal, 0, stars)
    return Strategy(
        g,
        coins,
        tuple(broadcasts),
        scheme="topological",
        per_user_G_star={(u, 0): s for u, s in stars.items()},
        repetitions=(1,),
    )


def synthesize_forehead(n: int) -> Strategy:
    """User 1 announces the XOR of every coin it sees.

    The coins are ``R_{\\i}`` (shared by everyone but ``i``) for ``i = 2..n``.
    """
    if n < 2:
        raise ValueError("forehead model needs n >= 2")
    graph = Hypergraph.complete(n, n - 1)
    coins = tuple(CoinSymbol(tuple(v for v in range(1, n + 1) if v != i)) for i in range(2, n + 1))
    return Strategy(graph, coins, (Broadcast(1, coins),), scheme="forehead")


def cluster_repetitions(spec: ClusterSpec) -> tuple[int, tuple[int, ...]]:
    """``(C, (M_1..M_m))`` with ``C`` the lcm of ``C(|A_i|-2, k-2)``."""
    k = spec.base.k
    sizes = [comb(len(a) - 2, k - 2) for a in spec.components]
    common = lcm(*sizes)
    return common, tuple(common // s for s in sizes)


def synthesize_cluster(spec: ClusterSpec) -> Strategy:
    """Repeat the topological scheme inside each component, then link components.

    Component ``i`` runs ``M_i`` independent copies so that every user's
    spanning link carries ``C`` coins per component.  A vertex in ``l >= 2``
    components announces ``R_1 ^ R_j`` coordinatewise for ``j = 2..l``, where
    ``R_j`` lists its link-basis coins in component ``j`` (colex over edges,
    then repetition).
    """
    base = spec.base
    if base.k == 2:
        return synthesize_tree(base)
    if base.k < 2:
        raise UniformityError(f"cluster scheme needs k >= 2, got k={base.k}")
    common, reps = cluster_repetitions(spec)

    coins: list[CoinSymbol] = []
    within: list[Broadcast] = []
    stars: dict = {}
    for idx, m in enumerate(reps):
        minimal = minimal_connected_subgraph(spec.restriction(idx))
        for e in minimal.edges:
            coins.extend(CoinSymbol(minimal.original_edge(e), r) for r in range(m))
        local_stars: dict = {}
        for r in range(m):
            within.extend(_component_messages(minimal, r, local_stars if r == 0 else None))
        for user, star in local_stars.items():
            stars[(user, idx)] = star

    across: list[Broadcast] = []
    for v in base.vertices:
        member = [idx for idx, a in enumerate(spec.components) if v in a]
        if len(member) < 2:
            continue
        vectors = []
        for idx in member:
            star = sorted(stars[(v, idx)], key=colex_key)
            vectors.append([CoinSymbol(t + (v,), r) for t in star for r in range(reps[idx])])
        first = vectors[0]
        for other in vectors[1:]:
            assert len(other) == len(first) == common
            across.extend(Broadcast(v, (a, b)) for a, b in zip(first, other))

    return Strategy(
        base,
        tuple(coins),
        tuple(within + across),
        scheme="cluster",
        cluster=spec,
        per_user_G_star=stars,
        repetitions=reps,
    )


G1_NONEXAMPLE = Hypergraph(6, 3, ((1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6)))
G2_NONEXAMPLE = Hypergraph(6, 3, ((1, 2, 4), (1, 3, 5), (2, 3, 6)))


def handcrafted_nonexample_schemes() -> tuple[Strategy, Strategy]:
    """Fixed rate-2/3 schemes for the two hypergraphs that are not clusters."""
    r123, r134, r156 = CoinSymbol((1, 2, 3)), CoinSymbol((1, 3, 4)), CoinSymbol((1, 5, 6))
    g1 = Strategy(
        G1_NONEXAMPLE,
        (r123, r134, r156),
        (Broadcast(1, (r123, r134)), Broadcast(1, (r134, r156))),
        scheme="handcrafted",
    )
    r124, r135, r236 = CoinSymbol((1, 2, 4)), CoinSymbol((1, 3, 5)), CoinSymbol((2, 3, 6))
    g2 = Strategy(
        G2_NONEXAMPLE,
        (r124, r135, r236),
        (Broadcast(1, (r124, r135)), Broadcast(2, (r124, r236))),
        scheme="handcrafted",
    )
    return g1, g2


def per_user_bits(strategy: Strategy) -> dict[int, int]:
    return {v: len(strategy.broadcasts_by(v)) for v in strategy.graph.vertices}


def parity_tuple_multiset(broadcast: Broadcast) -> dict[Edge, int]:
    """How often each (k-1)-tuple ``e - {speaker}`` occurs across the parity set's links."""
    counts: dict[Edge, int] = {}
    for sym in broadcast.parity_set:
        link = tuple(v for v in sym.edge if v != broadcast.speaker)
        for t in combinations(link, len(link) - 1):
            counts[t] = counts.get(t, 0) + 1
    return counts

