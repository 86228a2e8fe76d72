"""Hypergraphs, incidence matrices and the two notions of connectivity.

Vertices are ``1..n``.  Edges are stored as sorted tuples.  The canonical
enumeration of vertex subsets everywhere is colexicographic: subsets are
compared by their largest element first, so the 2-subsets of ``{1,2,3,4}``
come out as ``12 13 23 14 24 34``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from coinsim import gf2
from coinsim.gf2 import BitMatrix

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Base class; ``code`` names the error class for reports and exit codes."""

    code = "HYPERGRAPH_ERROR"


class UniformityError(HypergraphError):
    code = "UNIFORMITY_ERROR"


class NotConnectedError(HypergraphError):
    code = "NOT_CONNECTED"


class ClusterError(HypergraphError):
    """Invalid cluster of connected components.

    ``code`` is one of NOT_PATH_CONNECTED, HAS_CYCLE,
    COMPONENT_NOT_CONNECTED, EDGE_OUTSIDE_COMPONENTS.
    """

    code = "INVALID_CLUSTER"

    def __init__(self, code: str, message: str, component: Edge | None = None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.component = component


def colex_key(subset: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(sorted(subset)))


def colex_subsets(vertices: Iterable[int], size: int) -> list[Edge]:
    """All ``size``-subsets of ``vertices`` in colex order."""
    return sorted(combinations(sorted(vertices), size), key=colex_key)


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph on vertices ``1..n``.

    ``k > 0`` demands every edge has exactly ``k`` vertices; ``k == 0``
    allows arbitrary non-empty edges.  ``labels`` optionally records the
    original vertex name of each local vertex (``labels[v - 1]``) for
    restrictions and induced hypergraphs.
    """

    n: int
    k: int
    edges: tuple[Edge, ...]
    labels: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        norm = tuple(tuple(sorted(int(v) for v in e)) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        if self.n < 0 or self.k < 0:
            raise ValueError("n and k must be non-negative")
        seen = set()
        for e in norm:
            if not e:
                raise ValueError("empty hyperedge")
            if len(set(e)) != len(e):
                raise ValueError(f"repeated vertex in edge {e}")
            if e[0] < 1 or e[-1] > self.n:
                raise ValueError(f"edge {e} not inside 1..{self.n}")
            if self.k and len(e) != self.k:
                raise UniformityError(f"edge {e} does not have {self.k} vertices")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must name every vertex")

    @classmethod
    def complete(cls, n: int, k: int) -> Hypergraph:
        return cls(n, k, tuple(colex_subsets(range(1, n + 1), k)))

    @classmethod
    def star(cls, n: int, k: int, center: int = 1) -> Hypergraph:
        return cls(n, k, tuple(e for e in colex_subsets(range(1, n + 1), k) if center in e))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def label(self, v: int) -> int:
        return v if self.labels is None else self.labels[v - 1]

    def original_edge(self, e: Edge) -> Edge:
        return tuple(sorted(self.label(v) for v in e))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def with_edges(self, edges: Iterable[Edge]) -> Hypergraph:
        return Hypergraph(self.n, self.k, tuple(edges), self.labels)

    def restrict(self, vertex_set: Iterable[int]) -> Hypergraph:
        """Edges lying inside ``vertex_set``, relabeled densely in order."""
        keep = sorted(set(vertex_set))
        local = {v: i + 1 for i, v in enumerate(keep)}
        edges = [tuple(local[v] for v in e) for e in self.edges if all(v in local for v in e)]
        return Hypergraph(len(keep), self.k, tuple(edges), tuple(self.label(v) for v in keep))


@dataclass(frozen=True)
class IncidenceMatrix:
    """Edge-by-(k-1)-tuple incidence matrix; entry is 1 iff tuple lies in edge."""

    matrix: BitMatrix
    tuple_index: tuple[Edge, ...]
    edges: tuple[Edge, ...]

    def column(self, t: Sequence[int]) -> int:
        return self.tuple_index.index(tuple(sorted(t)))

    def entry(self, e: Sequence[int], t: Sequence[int]) -> int:
        return self.matrix[self.edges.index(tuple(sorted(e))), self.column(t)]

    def row_for(self, e: Sequence[int]) -> tuple[int, ...]:
        """Incidence row of any k-set ``e``, in or out of the hypergraph."""
        members = set(e)
        return tuple(int(set(t) <= members) for t in self.tuple_index)


def _require_uniform(g: Hypergraph, min_k: int = 2) -> None:
    if g.k < min_k:
        raise UniformityError(f"need a k-uniform hypergraph with k >= {min_k}, got k={g.k}")


def incidence_matrix(g: Hypergraph) -> IncidenceMatrix:
    _require_uniform(g)
    tuples = tuple(colex_subsets(g.vertices, g.k - 1))
    col = {t: j for j, t in enumerate(tuples)}
    words = []
    for e in g.edges:
        w = 0
        for t in combinations(e, g.k - 1):
            w |= 1 << col[t]
        words.append(w)
    return IncidenceMatrix(BitMatrix.from_ints(words, len(tuples)), tuples, g.edges)


def spanning_rank(n: int, k: int) -> int:
    """Edge count of any minimal topologically k-connected hypergraph."""
    return comb(n - 1, k - 1)


def is_topologically_connected(g: Hypergraph) -> bool:
    """Rank test: the incidence rows span those of the complete hypergraph."""
    return gf2.rank(incidence_matrix(g).matrix) == spanning_rank(g.n, g.k)


def minimal_connected_subgraph(g: Hypergraph) -> Hypergraph:
    """Greedy basis of the incidence row space, scanning edges in ``g``'s order."""
    inc = incidence_matrix(g)
    basis: list[int] = []
    chosen: list[Edge] = []
    for e, word in zip(g.edges, inc.matrix.data):
        candidate = BitMatrix.from_ints(basis + [word], inc.matrix.cols)
        if gf2.rank(candidate) > len(basis):
            basis.append(word)
            chosen.append(e)
    if len(chosen) != spanning_rank(g.n, g.k):
        raise NotConnectedError(
            f"hypergraph has rank {len(chosen)} < C({g.n - 1},{g.k - 1}) = {spanning_rank(g.n, g.k)}"
        )
    return g.with_edges(chosen)


def induced_hypergraph(g: Hypergraph, i: int) -> Hypergraph:
    """The (k-1)-uniform link of vertex ``i``: edges ``e - {i}`` for ``i in e``.

    Vertices other than ``i`` are relabeled ``1..n-1`` in order; ``labels``
    maps them back to ``g``'s original names.
    """
    _require_uniform(g, 3)
    if i not in g.vertices:
        raise ValueError(f"vertex {i} not in 1..{g.n}")
    others = [v for v in g.vertices if v != i]
    local = {v: j + 1 for j, v in enumerate(others)}
    edges = tuple(tuple(local[v] for v in e if v != i) for e in g.edges if i in e)
    return Hypergraph(g.n - 1, g.k - 1, edges, tuple(g.label(v) for v in others))


def _vertex_edge_components(g: Hypergraph) -> list[set[int]]:
    """Connected vertex sets of the bipartite vertex/edge graph (covered vertices only)."""
    parent = {v: v for e in g.edges for v in e}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        root = find(e[0])
        for v in e[1:]:
            parent[find(v)] = root
    groups: dict[int, set[int]] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def is_path_connected(g: Hypergraph) -> bool:
    if g.n <= 1:
        return True
    comps = _vertex_edge_components(g)
    return len(comps) == 1 and len(comps[0]) == g.n


def is_cycle_free(g: Hypergraph) -> bool:
    """No simple cycle: pairwise intersections of size <= 1 and a forest incidence graph."""
    for a, b in combinations(g.edges, 2):
        if len(set(a) & set(b)) >= 2:
            return False
    comps = _vertex_edge_components(g)
    covered = sum(len(c) for c in comps)
    # bipartite forest: links == nodes - components
    links = sum(len(e) for e in g.edges)
    return links == covered + len(g.edges) - len(comps)


@dataclass(frozen=True)
class ClusterSpec:
    """A validated cluster: base hypergraph plus its component vertex sets."""

    base: Hypergraph
    components: tuple[Edge, ...]

    @property
    def cluster_graph(self) -> Hypergraph:
        return Hypergraph(self.base.n, 0, self.components)

    def component_of(self, e: Sequence[int]) -> int:
        """Index of the first component containing edge ``e``."""
        members = set(e)
        for idx, comp in enumerate(self.components):
            if members <= set(comp):
                return idx
        raise KeyError(e)

    def restriction(self, idx: int) -> Hypergraph:
        return self.base.restrict(self.components[idx])

    def cluster_degree(self, v: int) -> int:
        return sum(1 for comp in self.components if v in comp)


def validate_cluster(base: Hypergraph, components: Iterable[Iterable[int]]) -> ClusterSpec:
    """Check the cluster conditions and the two counting identities.

    Checks run in this order: path connectivity of the component
    hypergraph, cycle-freeness, connectivity of each restriction, and
    finally that no base edge falls outside every component.
    """
    _require_uniform(base)
    comps = tuple(tuple(sorted(set(c))) for c in components)
    try:
        gc = Hypergraph(base.n, 0, comps)
    except ValueError as exc:
        raise ClusterError("NOT_PATH_CONNECTED", f"bad component list: {exc}") from exc
    if not comps or not is_path_connected(gc):
        raise ClusterError("NOT_PATH_CONNECTED", "component hypergraph is not path-connected")
    if not is_cycle_free(gc):
        raise ClusterError("HAS_CYCLE", "component hypergraph is not cycle-free")
    for comp in comps:
        if len(comp) < base.k or not is_topologically_connected(base.restrict(comp)):
            named = "{" + ",".join(map(str, comp)) + "}"
            raise ClusterError(
                "COMPONENT_NOT_CONNECTED",
                f"restriction to {named} is not topologically {base.k}-connected",
                component=comp,
            )
    for e in base.edges:
        if not any(set(e) <= set(c) for c in comps):
            raise ClusterError("EDGE_OUTSIDE_COMPONENTS", f"edge {e} lies in no component")

    # Both identities follow from the checks above; a failure here is a bug.
    assert sum(len(c) - 1 for c in comps) == base.n - 1
    assert sum(gc.degree(v) - 1 for v in gc.vertices) == len(comps) - 1
    return ClusterSpec(base, comps)
