"""Gadget families and the reductions built from them.

Every gadget vertex carries a label mirroring its usual name ("u", "x_1",
"v_{1,2}", "z~_3" for a tilded z).  Copies inside a reduction get the
suffix "^{i,j}" (copy i on edge j), base vertices are labeled "g_<id>".
Orderings are assembled from raw rank keys and compacted to a bijection,
which keeps the intended relative order even where a raw formula would
collide or skip values.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .graph import (
    Graph,
    GraphError,
    MarkedGraph,
    OrderedColoredGraph,
    amalgam_sum,
    clique,
    compact_ranks,
    default_ordering,
    edge,
    is_proper,
    validate_ordering,
)


@dataclass(frozen=True)
class GadgetInstance:
    graph: OrderedColoredGraph
    interface: tuple[str, ...]
    params: Mapping[str, int] = field(default_factory=dict)

    def vertex(self, label: str) -> int:
        return self.graph.marks[label]

    def vertices(self, labels: Iterable[str]) -> frozenset[int]:
        return self.graph.vertices_of(labels)


def _instance(mg: MarkedGraph, rank: Mapping[str, int], color: Mapping[str, int],
              interface: Sequence[str], params: Mapping[str, int]) -> GadgetInstance:
    if set(rank) != set(mg.marks) or set(color) != set(mg.marks):
        raise AssertionError("gadget ranks/colors do not cover exactly the labeled vertices")
    ordering = {mg.marks[lab]: r for lab, r in rank.items()}
    coloring = {mg.marks[lab]: c for lab, c in color.items()}
    ocg = OrderedColoredGraph(mg.graph, ordering, coloring, 3, mg.marks)
    if not ocg.is_proper():
        raise AssertionError("gadget coloring is not proper")
    return GadgetInstance(ocg, tuple(interface), dict(params))


def _d_parts(k: int) -> tuple[MarkedGraph, dict[str, int], dict[str, int]]:
    if k == 1:
        mg = edge("u", "z") + edge("v", "z")
        # z sits next to both u (3) and v (1), so it takes the remaining color 2
        return mg, {"u": 1, "v": 2, "z": 3}, {"u": 3, "v": 1, "z": 2}
    parts = [edge("u", "z"), edge("u", f"x_{k}"), edge("v", f"x_{k}"), edge("z", "x_1")]
    for i in range(1, k):
        a, b = f"v_{{1,{i}}}", f"v_{{2,{i}}}"
        parts += [clique(f"x_{i}", a, b), clique(f"x_{i + 1}", a, b), edge("z", a)]
    rank = {"u": 1, "v": 2, "z": k + 3}
    color = {"u": 3, "v": 1, "z": 1}
    for i in range(1, k + 1):
        rank[f"x_{i}"] = i + 2
        color[f"x_{i}"] = 2
    for i in range(1, k):
        rank[f"v_{{1,{i}}}"] = k + 2 * i + 2
        rank[f"v_{{2,{i}}}"] = k + 2 * i + 3
        color[f"v_{{1,{i}}}"] = 3
        color[f"v_{{2,{i}}}"] = 1
    return amalgam_sum(parts), rank, color


def build_D(k: int) -> GadgetInstance:
    """The chain gadget D_k: from seeds {u, v} it needs exactly k rounds under RT."""
    if k < 1:
        raise ValueError("D_k needs k >= 1")
    mg, rank, color = _d_parts(k)
    return _instance(mg, rank, color, ("u", "v", "z") if k == 1 else ("u", "v"), {"k": k})


def build_G_xi(xi: int, k: int) -> GadgetInstance:
    """``xi`` copies of D_{k+1} glued along u and v."""
    if xi < 1 or k < 1:
        raise ValueError("G_xi needs xi >= 1 and k >= 1")
    mg, rank, color = _d_parts(k + 1)
    stride = len(mg.graph) - 2
    parts, ranks, colors = [], {"u": 1, "v": 2}, {"u": color["u"], "v": color["v"]}
    for j in range(1, xi + 1):
        ren = {lab: lab if lab in ("u", "v") else f"{lab}^{{{j}}}" for lab in mg.marks}
        parts.append(mg.relabel(ren))
        for lab, new in ren.items():
            if lab not in ("u", "v"):
                ranks[new] = rank[lab] + stride * (j - 1)
                colors[new] = color[lab]
    return _instance(amalgam_sum(parts), ranks, colors, ("u", "v"), {"xi": xi, "k": k})


def _tilde(lab: str) -> str:
    return lab.replace("z_", "z~_")


def build_F(k: int) -> GadgetInstance:
    """The edge gadget F_k with interface (u, v, x, y) and coloring psi."""
    if k < 2:
        raise ValueError("F_k needs k >= 2")
    parts = [edge("z_1", "x"), edge("z~_1", "y"), edge("z_1", "v"), edge("z~_1", "v"),
             edge("u", "z_3"), edge("u", "z~_3"), edge("u", "z_5"), edge("u", "z~_5"),
             clique("z_1", "z_2", "z_3"), clique("z~_1", "z~_2", "z~_3"),
             clique("z_4", "z_2", "z_3"), clique("z~_4", "z~_2", "z~_3"),
             clique("z_5", "z_4", "y"), clique("z~_5", "z~_4", "x")]
    for i in range(1, k):
        a, b = f"x_{{1,{i}}}", f"x_{{2,{i}}}"
        parts += [clique(f"y_{i}", a, b), clique(f"y_{i + 1}", a, b), edge("u", a)]
    parts += [edge("x", f"y_{k}"), edge("y", f"y_{k}"), edge("v", f"y_{k}")]
    rank = {"u": 1, "v": 2, "x": 3, "y": 4}
    color = {"u": 1, "v": 2, "x": 1, "y": 1}
    for j, r, c in [(1, 5, 3), (4, 7, 3), (5, 9, 2), (3, 11, 2), (2, 13, 1)]:
        rank[f"z_{j}"], rank[_tilde(f"z_{j}")] = r, r + 1
        color[f"z_{j}"] = color[_tilde(f"z_{j}")] = c
    for i in range(1, k + 1):
        rank[f"y_{i}"], color[f"y_{i}"] = 14 + i, 3
    for i in range(1, k):
        rank[f"x_{{1,{i}}}"], color[f"x_{{1,{i}}}"] = 15 + k + 2 * (i - 1), 2
        rank[f"x_{{2,{i}}}"], color[f"x_{{2,{i}}}"] = 16 + k + 2 * (i - 1), 1
    return _instance(amalgam_sum(parts), rank, color, ("u", "v", "x", "y"), {"k": k})


def build_H(n: int) -> GadgetInstance:
    """The edge gadget H_n with interface (x, y, v) and coloring eta."""
    if n < 2:
        raise ValueError("H_n needs n >= 2")
    parts = []
    rank = {"v": 1, "x": 2 * n + 2, "y": 2 * n + 3}
    color = {"v": 3, "x": 1, "y": 1}
    for i in range(1, n + 1):
        a, b = f"u_{{1,{i}}}", f"u_{{2,{i}}}"
        parts += [clique("x", a, b), clique("y", a, b), edge("v", a)]
        rank[a], rank[b] = 2 * i, 2 * i + 1
        color[a], color[b] = 2, 3
    return _instance(amalgam_sum(parts), rank, color, ("x", "y", "v"), {"n": n})


# --- reductions ---------------------------------------------------------------


@dataclass(frozen=True)
class ReductionOutput:
    graph: Graph
    ordering: Mapping[int, int]
    marks: Mapping[str, int]
    bound: int
    coloring: Mapping[int, int] | None = None
    seeds: frozenset[int] | None = None
    base: Mapping[int, int] = field(default_factory=dict)  # base vertex -> instance vertex

    @property
    def instance(self) -> OrderedColoredGraph:
        if self.coloring is None:
            raise ValueError("no coloring attached; supply a witness coloring")
        return OrderedColoredGraph(self.graph, self.ordering, self.coloring, 3, self.marks)

    @property
    def has_certificate(self) -> bool:
        return self.seeds is not None and self.coloring is not None


def _base_label(v: int) -> str:
    return f"g_{v}"


def _copy_label(lab: str, i: int, j: int) -> str:
    return f"{lab}^{{{i},{j}}}"


def _oriented_edges(g: Graph, order: Mapping[int, int]) -> list[tuple[int, int]]:
    """Edges as (earlier, later) pairs, listed in lexicographic rank order."""
    pairs = [tuple(sorted(e, key=order.__getitem__)) for e in g.edges]
    return sorted(pairs, key=lambda p: (order[p[0]], order[p[1]]))


class _Assembly:
    """Collects gadget copies, raw rank keys and colors, then compacts."""

    def __init__(self):
        self.parts: list[MarkedGraph] = []
        self.keys: dict[str, tuple] = {}
        self.colors: dict[str, int] = {}

    def add_vertex(self, label: str, key: tuple, color: int | None = None) -> None:
        self.parts.append(MarkedGraph(Graph([0]), {label: 0}))
        self.keys[label] = key
        if color is not None:
            self.colors[label] = color

    def add_copy(self, mg: MarkedGraph, interface: Mapping[str, str], i: int, j: int,
                 key: Callable[[str], tuple], color: Callable[[str], int | None]) -> None:
        ren = {lab: interface.get(lab, _copy_label(lab, i, j)) for lab in mg.marks}
        self.parts.append(mg.relabel(ren))
        for lab, new in ren.items():
            if lab in interface:
                continue
            self.keys[new] = key(lab)
            c = color(lab)
            if c is not None:
                self.colors[new] = c

    def finish(self, base: Iterable[int], bound: int, seeds_labels: Iterable[str] | None,
               colored: bool) -> ReductionOutput:
        mg = amalgam_sum(self.parts)
        ordering = compact_ranks({mg.marks[lab]: key for lab, key in self.keys.items()})
        validate_ordering(mg.graph, ordering)
        coloring = None
        if colored:
            coloring = {mg.marks[lab]: c for lab, c in self.colors.items()}
            if set(coloring) != mg.graph.vertices:
                raise AssertionError("reduction coloring does not cover every vertex")
        seeds = None if seeds_labels is None else frozenset(mg.marks[lab] for lab in seeds_labels)
        return ReductionOutput(mg.graph, ordering, dict(mg.marks), bound, coloring, seeds,
                               {v: mg.marks[_base_label(v)] for v in base})


def edge_permutation(a: int, b: int) -> dict[int, int]:
    """Color permutation carrying the D-gadget's u=3, v=1 onto base colors a, b.

    For a monochromatic base edge (a == b) the 1 slot gets the smallest other
    color, so the extension is still defined; the gadget then cannot be
    colored from its ends.
    """
    if a == b:
        b = min(c for c in (1, 2, 3) if c != a)
    rest = ({1, 2, 3} - {a, b}).pop()
    return {3: a, 1: b, 2: rest}


def reduce_3col(
    g: Graph,
    k: int,
    mode: str = "weak",
    ordering: Mapping[int, int] | None = None,
    coloring: Mapping[int, int] | None = None,
) -> ReductionOutput:
    """Replace every edge by parallel D_k chains; 3-colorings become small defining sets.

    Weak mode uses n copies per edge with bound n, strong mode n+k copies with
    bound n+k-1.  With a base 3-assignment ``coloring`` the output carries the
    extended coloring and the seed set V(G); improper assignments are allowed
    so the failure mechanism can be probed.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode not in ("weak", "strong"):
        raise ValueError("mode must be 'weak' or 'strong'")
    order = validate_ordering(g, ordering) if ordering is not None else default_ordering(g)
    if coloring is not None:
        if set(coloring) != g.vertices or not all(c in (1, 2, 3) for c in coloring.values()):
            raise GraphError("base coloring must give every vertex a color in 1..3")
    n = len(g)
    copies = n if mode == "weak" else n + k
    bound = n if mode == "weak" else n + k - 1
    mg, rank, gamma = _d_parts(k)
    asm = _Assembly()
    for v in g.vertices:
        asm.add_vertex(_base_label(v), (order[v], 0), None if coloring is None else coloring[v])
    for j, (a, b) in enumerate(_oriented_edges(g, order), start=1):
        pi = edge_permutation(coloring[a], coloring[b]) if coloring is not None else None
        for i in range(1, copies + 1):
            raw = n + (3 * k - 1) * (copies * (j - 1) + i - 1)
            asm.add_copy(
                mg, {"u": _base_label(a), "v": _base_label(b)}, i, j,
                key=lambda lab, raw=raw: (raw + rank[lab], 1),
                color=lambda lab, pi=pi: None if pi is None else pi[gamma[lab]],
            )
    seeds = [_base_label(v) for v in g.vertices] if coloring is not None else None
    return asm.finish(g.vertices, bound, seeds, coloring is not None)


def _check_cover(g: Graph, cover: Iterable[int] | None) -> frozenset[int] | None:
    if cover is None:
        return None
    cover = frozenset(cover)
    if not cover <= g.vertices:
        raise GraphError("cover vertices must belong to the graph")
    missed = [e for e in g.sorted_edges() if not cover & set(e)]
    if missed:
        raise GraphError(f"not a vertex cover; uncovered edges {missed}")
    return cover


def reduce_vertexcover_sds(
    g: Graph, t: int, k: int, ordering: Mapping[int, int] | None = None,
    cover: Iterable[int] | None = None,
) -> ReductionOutput:
    """Vertex cover to strong defining sets: n+k+2 copies of F_k per edge, bound t+k+1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if t < 0:
        raise ValueError("t must be nonnegative")
    order = validate_ordering(g, ordering) if ordering is not None else default_ordering(g)
    cover = _check_cover(g, cover)
    n = len(g)
    copies = n + k + 2
    f = build_F(k).graph
    mg = MarkedGraph(f.graph, f.marks)
    mu = {lab: f.ordering[v] for lab, v in f.marks.items()}
    psi = {lab: f.coloring[v] for lab, v in f.marks.items()}
    asm = _Assembly()
    asm.add_vertex("u", (1,), 1)
    asm.add_vertex("v", (2,), 2)
    for w in g.vertices:
        # shifted past u and v so base ranks stay distinct from theirs
        asm.add_vertex(_base_label(w), (order[w] + 2,), 1)
    for j, (a, b) in enumerate(_oriented_edges(g, order), start=1):
        for i in range(1, copies + 1):
            off = n - 2 + (3 * k + 8) * (copies * (j - 1) + i - 1)
            asm.add_copy(
                mg, {"u": "u", "v": "v", "x": _base_label(a), "y": _base_label(b)}, i, j,
                key=lambda lab, off=off: (off + mu[lab],), color=psi.__getitem__,
            )
    seeds = None if cover is None else ["u", "v"] + [_base_label(w) for w in cover]
    return asm.finish(g.vertices, t + k + 1, seeds, True)


def reduce_vertexcover_rulebase(
    g: Graph, t: int, ordering: Mapping[int, int] | None = None,
    cover: Iterable[int] | None = None,
) -> ReductionOutput:
    """Vertex cover to one-round defining sets: one H_n per edge, bound t+1."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    order = validate_ordering(g, ordering) if ordering is not None else default_ordering(g)
    cover = _check_cover(g, cover)
    n = len(g)
    if n < 2:
        raise GraphError("the graph needs at least two vertices")
    h = build_H(n).graph
    mg = MarkedGraph(h.graph, h.marks)
    omega = {lab: h.ordering[v] for lab, v in h.marks.items()}
    eta = {lab: h.coloring[v] for lab, v in h.marks.items()}
    m = len(g.edges)
    asm = _Assembly()
    # priority v < interiors < base breaks the tie the raw ranks have at the end
    asm.add_vertex("v", (1, 0), 3)
    for w in g.vertices:
        asm.add_vertex(_base_label(w), (2 * n * m + 1 + order[w], 2), 1)
    for j, (a, b) in enumerate(_oriented_edges(g, order), start=1):
        off = 1 + 2 * n * (j - 1)
        asm.add_copy(
            mg, {"x": _base_label(a), "y": _base_label(b), "v": "v"}, 1, j,
            key=lambda lab, off=off: (off + omega[lab], 1), color=eta.__getitem__,
        )
    seeds = None if cover is None else ["v"] + [_base_label(w) for w in cover]
    return asm.finish(g.vertices, t + 1, seeds, True)
