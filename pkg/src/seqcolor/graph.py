"""Finite simple graphs, marked graphs and amalgams.

Vertices are opaque integers; labels (marks) are strings.  Every value here
is immutable after construction, so graphs can be shared freely between
solver runs.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType


class GraphError(ValueError):
    """Raised when graph data violates a structural invariant."""


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite simple undirected graph with integer vertex ids."""

    vertices: frozenset[int]
    edges: frozenset[frozenset[int]]
    _adj: Mapping[int, frozenset[int]] = field(repr=False, compare=False)

    def __init__(self, vertices: Iterable[int], edges: Iterable[Iterable[int]] = ()):
        verts = frozenset(vertices)
        adj: dict[int, set[int]] = {v: set() for v in verts}
        edge_set = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise GraphError(f"edge {pair!r} does not have two endpoints")
            a, b = pair
            if a == b:
                raise GraphError(f"self-loop on vertex {a!r}")
            if a not in adj or b not in adj:
                raise GraphError(f"edge {pair!r} has an endpoint outside the vertex set")
            key = frozenset(pair)
            if key in edge_set:
                raise GraphError(f"duplicate edge {pair!r}")
            edge_set.add(key)
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(edge_set))
        object.__setattr__(
            self, "_adj", MappingProxyType({v: frozenset(n) for v, n in adj.items()})
        )

    @classmethod
    def _from_adj(cls, adj: Mapping[int, Iterable[int]]) -> "Graph":
        # Trusted constructor; the caller guarantees symmetry and no loops.
        g = cls.__new__(cls)
        frozen = {v: frozenset(n) for v, n in adj.items()}
        object.__setattr__(g, "vertices", frozenset(frozen))
        object.__setattr__(
            g, "edges", frozenset(frozenset((a, b)) for a, ns in frozen.items() for b in ns if a < b)
        )
        object.__setattr__(g, "_adj", MappingProxyType(frozen))
        return g

    def __reduce__(self):
        return (Graph, (sorted(self.vertices), self.sorted_edges()))

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def induced(self, subset: Iterable[int]) -> "Graph":
        return induced_subgraph(self, subset)

    def ball(self, v: int, d: int) -> frozenset[int]:
        return ball(self, v, d)


def complete_graph(vertices: Iterable[int]) -> Graph:
    vs = list(vertices)
    return Graph(vs, combinations(vs, 2))


def empty_graph(vertices: Iterable[int]) -> Graph:
    return Graph(vertices)


def induced_subgraph(g: Graph, subset: Iterable[int]) -> Graph:
    """Return ``G[[A]]``: vertex set ``A`` and every edge of ``g`` inside it."""
    keep = frozenset(subset)
    missing = keep - g.vertices
    if missing:
        raise GraphError(f"vertices {sorted(missing)} are not in the graph")
    return Graph._from_adj({v: g.neighbors(v) & keep for v in keep})


def ball(g: Graph, v: int, d: int) -> frozenset[int]:
    """All vertices within graph distance ``d`` of ``v`` (breadth-first)."""
    if v not in g.vertices:
        raise GraphError(f"vertex {v!r} is not in the graph")
    if d < 0:
        raise ValueError("radius must be nonnegative")
    seen = {v}
    frontier = deque([(v, 0)])
    while frontier:
        w, dist = frontier.popleft()
        if dist == d:
            continue
        for x in g.neighbors(w):
            if x not in seen:
                seen.add(x)
                frontier.append((x, dist + 1))
    return frozenset(seen)


def diameter(g: Graph) -> float:
    """Largest eccentricity; ``inf`` for a disconnected graph, 0 for <= 1 vertex."""
    best = 0
    n = len(g)
    for v in g.vertices:
        dist = {v: 0}
        queue = deque([v])
        while queue:
            w = queue.popleft()
            for x in g.neighbors(w):
                if x not in dist:
                    dist[x] = dist[w] + 1
                    queue.append(x)
        if len(dist) < n:
            return float("inf")
        best = max(best, max(dist.values()))
    return best


@dataclass(frozen=True)
class MarkedGraph:
    """A graph with an injective map from string labels to vertices."""

    graph: Graph
    marks: Mapping[str, int]

    def __post_init__(self):
        marks = dict(self.marks)
        if len(set(marks.values())) != len(marks):
            raise GraphError("marks must label distinct vertices")
        stray = [lab for lab, v in marks.items() if v not in self.graph.vertices]
        if stray:
            raise GraphError(f"marked labels {stray} point outside the graph")
        object.__setattr__(self, "marks", MappingProxyType(marks))

    def __reduce__(self):
        return (MarkedGraph, (self.graph, dict(self.marks)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.marks)

    def vertex(self, label: str) -> int:
        return self.marks[label]

    def label_of(self) -> dict[int, str]:
        return {v: lab for lab, v in self.marks.items()}

    def relabel(self, rename) -> "MarkedGraph":
        """Rename labels through a mapping or callable; vertices are untouched."""
        fn = rename.get if isinstance(rename, Mapping) else rename
        new = {}
        for lab, v in self.marks.items():
            out = fn(lab)
            new[lab if out is None else out] = v
        return MarkedGraph(self.graph, new)

    def __add__(self, other: "MarkedGraph") -> "MarkedGraph":
        return amalgam(self, other)


def clique(*labels: str) -> MarkedGraph:
    """``K_k[x_1..x_k]``: a clique marked by its own vertices."""
    if len(set(labels)) != len(labels):
        raise GraphError("clique labels must be distinct")
    return MarkedGraph(complete_graph(range(len(labels))), {lab: i for i, lab in enumerate(labels)})


def edge(a: str, b: str) -> MarkedGraph:
    """``epsilon[a,b]``, the single marked edge."""
    return clique(a, b)


def amalgam(left: MarkedGraph, right: MarkedGraph) -> MarkedGraph:
    """Disjoint union of two marked graphs with equally-labeled vertices identified.

    Left vertex ids are kept; unshared right vertices are renumbered after the
    left ones.  The result carries the union of both label sets.
    """
    shared = set(left.marks) & set(right.marks)
    to_left = {right.marks[lab]: left.marks[lab] for lab in shared}
    next_id = max(left.graph.vertices, default=-1) + 1
    for v in sorted(right.graph.vertices):
        if v not in to_left:
            to_left[v] = next_id
            next_id += 1
    adj: dict[int, set[int]] = {v: set(left.graph.neighbors(v)) for v in left.graph.vertices}
    for v in right.graph.vertices:
        adj.setdefault(to_left[v], set())
    for a, b in right.graph.sorted_edges():
        x, y = to_left[a], to_left[b]
        adj[x].add(y)
        adj[y].add(x)
    marks = dict(left.marks)
    for lab, v in right.marks.items():
        marks.setdefault(lab, to_left[v])
    return MarkedGraph(Graph._from_adj(adj), marks)


def amalgam_sum(parts: Iterable[MarkedGraph]) -> MarkedGraph:
    """n-ary amalgam, folded left to right."""
    it = iter(parts)
    try:
        acc = next(it)
    except StopIteration:
        return MarkedGraph(Graph(()), {})
    for p in it:
        acc = amalgam(acc, p)
    return acc


def enumerate_embeddings(
    host: Graph,
    restricted_to: Iterable[int],
    pattern: MarkedGraph,
    ranks: Mapping[int, int] | None = None,
    fixed: Mapping[str, int] | None = None,
) -> list[dict[str, int]]:
    """All injective edge-preserving maps from ``pattern`` into ``host``.

    Maps are non-induced monomorphisms whose image lies inside
    ``restricted_to``; ``fixed`` pins chosen labels to host vertices.  Output
    is sorted lexicographically by the tuple of host ranks taken in the
    pattern's label order (vertex ids stand in for ranks when none are given).
    Every pattern vertex must carry a label.
    """
    allowed = frozenset(restricted_to)
    stray = allowed - host.vertices
    if stray:
        raise GraphError(f"restriction set has vertices {sorted(stray)} outside the host")
    labels = list(pattern.marks)
    if len(labels) != len(pattern.graph):
        raise GraphError("every pattern vertex must be labeled to be embedded")
    fixed = dict(fixed or {})
    rank = ranks if ranks is not None else {v: v for v in host.vertices}
    pv = {lab: pattern.marks[lab] for lab in labels}
    # earlier-label neighbors each label must be adjacent to
    back = {
        lab: [prev for prev in labels[:i] if pattern.graph.adjacent(pv[lab], pv[prev])]
        for i, lab in enumerate(labels)
    }
    pool = sorted(allowed, key=lambda v: rank[v])
    out: list[dict[str, int]] = []
    chosen: dict[str, int] = {}
    used: set[int] = set()

    def extend(i: int) -> None:
        if i == len(labels):
            out.append(dict(chosen))
            return
        lab = labels[i]
        cands = [fixed[lab]] if lab in fixed else pool
        for h in cands:
            if h in used or h not in allowed:
                continue
            if all(host.adjacent(h, chosen[p]) for p in back[lab]):
                chosen[lab] = h
                used.add(h)
                extend(i + 1)
                used.discard(h)
                del chosen[lab]

    extend(0)
    # candidates are tried in rank order, so ``out`` is already lexicographic
    return out


def validate_ordering(g: Graph, rank: Mapping[int, int]) -> dict[int, int]:
    """Check that ``rank`` is a bijection ``V(g) -> {1..n}`` and return a copy."""
    rank = dict(rank)
    if set(rank) != set(g.vertices):
        raise GraphError("ordering must rank exactly the graph's vertices")
    if sorted(rank.values()) != list(range(1, len(g) + 1)):
        raise GraphError("ordering ranks must be exactly 1..n, each used once")
    return rank


def default_ordering(g: Graph) -> dict[int, int]:
    return {v: i for i, v in enumerate(sorted(g.vertices), start=1)}


def compact_ranks(keys: Mapping[int, object]) -> dict[int, int]:
    """Turn sortable keys into a bijective 1..n ranking, preserving their order.

    Equal keys are an error: the caller must break ties explicitly.
    """
    items = sorted(keys.items(), key=lambda kv: kv[1])
    for (_, a), (_, b) in zip(items, items[1:]):
        if a == b:
            raise GraphError(f"rank key {a!r} is not unique")
    return {v: i for i, (v, _) in enumerate(items, start=1)}


def is_proper(g: Graph, coloring: Mapping[int, int]) -> bool:
    """True iff every edge gets two different colors (coloring must be total)."""
    missing = g.vertices - set(coloring)
    if missing:
        raise GraphError(f"coloring misses vertices {sorted(missing)}")
    return all(coloring[a] != coloring[b] for a, b in (tuple(e) for e in g.edges))


def monochromatic_edges(g: Graph, coloring: Mapping[int, int]) -> list[tuple[int, int]]:
    return [(a, b) for a, b in g.sorted_edges() if coloring[a] == coloring[b]]


def color_classes(coloring: Mapping[int, int]) -> frozenset[frozenset[int]]:
    """The unordered partition induced by a coloring (colors forgotten)."""
    classes: dict[int, set[int]] = {}
    for v, c in coloring.items():
        classes.setdefault(c, set()).add(v)
    return frozenset(frozenset(s) for s in classes.values())


@dataclass(frozen=True)
class OrderedColoredGraph:
    """A graph with a bijective ranking and a total coloring over ``1..palette``.

    Properness is not enforced here; use :func:`is_proper`.  Improper
    assignments are legitimate inputs when probing what a seed set fails to
    force.
    """

    graph: Graph
    ordering: Mapping[int, int]
    coloring: Mapping[int, int]
    palette: int = 3
    marks: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ordering", MappingProxyType(validate_ordering(self.graph, self.ordering)))
        col = dict(self.coloring)
        if set(col) != set(self.graph.vertices):
            raise GraphError("coloring must assign every vertex")
        bad = {v: c for v, c in col.items() if not 1 <= c <= self.palette}
        if bad:
            raise GraphError(f"colors outside 1..{self.palette}: {bad}")
        object.__setattr__(self, "coloring", MappingProxyType(col))
        object.__setattr__(self, "marks", MappingProxyType(dict(self.marks)))

    def __reduce__(self):
        return (OrderedColoredGraph, (self.graph, dict(self.ordering), dict(self.coloring), self.palette, dict(self.marks)))

    def __len__(self) -> int:
        return len(self.graph)

    @property
    def by_rank(self) -> list[int]:
        return sorted(self.graph.vertices, key=self.ordering.__getitem__)

    def is_proper(self) -> bool:
        return is_proper(self.graph, self.coloring)

    def name(self, v: int) -> str:
        for lab, w in self.marks.items():
            if w == v:
                return lab
        return str(v)

    def names(self) -> dict[int, str]:
        out = {v: str(v) for v in self.graph.vertices}
        out.update({w: lab for lab, w in self.marks.items()})
        return out

    def vertices_of(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.marks[lab] for lab in labels)

    def induced(self, subset: Iterable[int]) -> "OrderedColoredGraph":
        """Induced subgraph with the induced (compacted) ordering and coloring."""
        keep = frozenset(subset)
        sub = induced_subgraph(self.graph, keep)
        rank = compact_ranks({v: self.ordering[v] for v in keep})
        return OrderedColoredGraph(
            sub, rank, {v: self.coloring[v] for v in keep}, self.palette,
            {lab: v for lab, v in self.marks.items() if v in keep},
        )

    def reordered(self, ordering: Mapping[int, int]) -> "OrderedColoredGraph":
        return OrderedColoredGraph(self.graph, ordering, self.coloring, self.palette, self.marks)
