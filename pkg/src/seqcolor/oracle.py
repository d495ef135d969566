"""Brute-force ground truth for list colorings.

Everything here enumerates.  The vertex cap keeps calls interactive; it can be
raised per call or through the ``SEQCOLOR_ORACLE_CAP`` environment variable.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .graph import Graph, GraphError, color_classes, complete_graph, induced_subgraph

DEFAULT_CAP = 14


class OracleCapExceeded(RuntimeError):
    """The instance is larger than the oracle is allowed to enumerate."""


class TransverseError(ValueError):
    """A transverse-system construction failed its own verification."""


def default_cap() -> int:
    raw = os.environ.get("SEQCOLOR_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_CAP


def _check_cap(g: Graph, cap: int | None) -> None:
    cap = default_cap() if cap is None else cap
    if len(g) > cap:
        raise OracleCapExceeded(f"{len(g)} vertices exceeds the oracle cap of {cap}")


@dataclass(frozen=True)
class ListColoringProblem:
    graph: Graph
    lists: Mapping[int, frozenset[int]]
    palette: int

    def __post_init__(self):
        lists = {v: frozenset(self.lists.get(v, range(1, self.palette + 1))) for v in self.graph.vertices}
        full = set(range(1, self.palette + 1))
        for v, lst in lists.items():
            if not lst <= full:
                raise ValueError(f"list of vertex {v} is not inside 1..{self.palette}")
        object.__setattr__(self, "lists", lists)

    @classmethod
    def full(cls, g: Graph, t: int) -> "ListColoringProblem":
        return cls(g, {v: frozenset(range(1, t + 1)) for v in g.vertices}, t)


@dataclass
class Enumeration:
    solutions: list[dict[int, int]]
    overflow: bool

    def __len__(self) -> int:
        return len(self.solutions)


def _search(g: Graph, lists: Mapping[int, frozenset[int]], order: list[int]):
    """Yield proper list colorings, assigning vertices in ``order``."""
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[w] for w in g.neighbors(v) if pos[w] < i] for i, v in enumerate(order)]
    doms = [sorted(lists[v]) for v in order]
    assign = [0] * n

    def rec(i):
        if i == n:
            yield {order[j]: assign[j] for j in range(n)}
            return
        for c in doms[i]:
            if all(assign[j] != c for j in earlier[i]):
                assign[i] = c
                yield from rec(i + 1)

    if any(not d for d in doms):
        return
    yield from rec(0)


def _order(g: Graph, order: Iterable[int] | None) -> list[int]:
    if order is None:
        return sorted(g.vertices)
    out = list(order)
    if set(out) != g.vertices or len(out) != len(g):
        raise GraphError("vertex order must list every vertex once")
    return out


def enumerate_solutions(
    p: ListColoringProblem,
    max_solutions: int | None = None,
    cap: int | None = None,
    order: Iterable[int] | None = None,
) -> Enumeration:
    """All proper colorings respecting the lists, by backtracking in ``order``.

    Stops after ``max_solutions`` and sets ``overflow`` if more exist.
    """
    _check_cap(p.graph, cap)
    sols: list[dict[int, int]] = []
    for s in _search(p.graph, p.lists, _order(p.graph, order)):
        if max_solutions is not None and len(sols) >= max_solutions:
            return Enumeration(sols, True)
        sols.append(s)
    return Enumeration(sols, False)


def count_solutions(p: ListColoringProblem, cap: int | None = None) -> int:
    _check_cap(p.graph, cap)
    return sum(1 for _ in _search(p.graph, p.lists, sorted(p.graph.vertices)))


def has_solution(g: Graph, lists: Mapping[int, frozenset[int]]) -> bool:
    """Satisfiability check; uncapped because it stops at the first witness."""
    for _ in _search(g, lists, _degree_order(g)):
        return True
    return False


def _degree_order(g: Graph) -> list[int]:
    # BFS from high-degree vertices keeps neighbors close in the order
    order: list[int] = []
    seen: set[int] = set()
    for root in sorted(g.vertices, key=lambda v: (-g.degree(v), v)):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(g.neighbors(v), key=lambda x: (-g.degree(x), x)):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def colorings(g: Graph, t: int, cap: int | None = None) -> list[dict[int, int]]:
    """Every proper coloring with colors 1..t."""
    return enumerate_solutions(ListColoringProblem.full(g, t), cap=cap).solutions


def partitions(g: Graph, t: int, cap: int | None = None) -> set[frozenset[frozenset[int]]]:
    """Distinct color-class partitions over all proper t-colorings."""
    return {color_classes(s) for s in colorings(g, t, cap)}


def is_ucg(g: Graph, t: int, cap: int | None = None) -> bool:
    """True iff ``g`` has proper t-colorings and they all share one partition."""
    return len(partitions(g, t, cap)) == 1


def unique_up_to_permutation(p: ListColoringProblem, cap: int | None = None) -> dict[int, int] | None:
    """The solution if every solution induces the same partition, else None."""
    _check_cap(p.graph, cap)
    parts = set()
    first = None
    for s in _search(p.graph, p.lists, _order(p.graph, None)):
        parts.add(color_classes(s))
        if first is None:
            first = s
        if len(parts) > 1:
            return None
    return first


def fixed_classes(g: Graph, t: int, cap: int | None = None) -> list[frozenset[int]]:
    """Vertex sets that are a color class in every proper t-coloring."""
    parts = partitions(g, t, cap)
    if not parts:
        return []
    common = set.intersection(*(set(p) for p in parts))
    return sorted(common, key=lambda s: sorted(s))


def clique_number(g: Graph) -> int:
    best = 0

    def expand(size: int, cand: frozenset[int]) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + len(cand) <= best:
            return
        for v in sorted(cand):
            expand(size + 1, cand & g.neighbors(v))
            cand = cand - {v}
            if size + len(cand) <= best:
                return

    expand(0, g.vertices)
    return best


def chromatic_number(g: Graph, cap: int | None = None) -> int:
    _check_cap(g, cap)
    if not g.vertices:
        return 0
    t = max(1, clique_number(g))
    while not has_solution(g, {v: frozenset(range(1, t + 1)) for v in g.vertices}):
        t += 1
    return t


def chromatic_and_clique(g: Graph, cap: int | None = None) -> tuple[int, int]:
    return chromatic_number(g, cap), clique_number(g)


def embed_list_problem(p: ListColoringProblem) -> tuple[Graph, dict[int, int]]:
    """Encode a list problem as plain coloring of ``G + K_t`` with anchor edges.

    Returns the new graph and ``{color: anchor vertex}``; anchor ``i`` is meant
    to carry color ``i``.  Vertex ``u`` is joined to every anchor whose color
    is missing from its list.
    """
    g = p.graph
    base = max(g.vertices, default=-1) + 1
    anchors = {c: base + c - 1 for c in range(1, p.palette + 1)}
    edges = [tuple(e) for e in g.sorted_edges()]
    edges += list(complete_graph(anchors.values()).sorted_edges())
    for u in sorted(g.vertices):
        for c in range(1, p.palette + 1):
            if c not in p.lists[u]:
                edges.append((u, anchors[c]))
    return Graph(list(g.vertices) + list(anchors.values()), edges), anchors


def anchored_colorings(h: Graph, anchors: Mapping[int, int], t: int, cap: int | None = None) -> list[dict[int, int]]:
    """t-colorings of ``h`` in which each anchor ``a_c`` carries color ``c``."""
    lists = {v: frozenset(range(1, t + 1)) for v in h.vertices}
    for c, a in anchors.items():
        lists[a] = frozenset({c})
    return enumerate_solutions(ListColoringProblem(h, lists, t), cap=cap).solutions


def _hits_all(w: frozenset[int], classes: Iterable[frozenset[int]]) -> bool:
    return all(w & cls for cls in classes)


TransverseSystem = list[tuple[int, frozenset[int]]]


def check_transverse(g: Graph, system: Iterable[tuple[int, Iterable[int]]], t: int, cap: int | None = None) -> bool:
    """Decide whether ``system`` is a transverse system for the (t-1)-chromatic ``g``."""
    fam = [(i, frozenset(w)) for i, w in system]
    for _, w in fam:
        if not w <= g.vertices:
            raise GraphError("transverse members must be vertex subsets of the graph")
    if chromatic_number(g, cap) != t - 1:
        raise ValueError(f"graph is not {t - 1}-chromatic")
    n = len(g)
    if n == t - 1 and len(g.edges) == n * (n - 1) // 2 and fam == [(1, g.vertices)]:
        return True
    for s in colorings(g, t - 1, cap):
        classes = color_classes(s)
        if not all(_hits_all(w, classes) for _, w in fam):
            return False
    for s in colorings(g, t, cap):
        if len(set(s.values())) < t:
            continue
        classes = color_classes(s)
        if not any(_hits_all(w, classes) for _, w in fam):
            return False
    return True


@dataclass(frozen=True)
class TransverseBuild:
    graph: Graph
    fixed_class: frozenset[int]
    new_vertex: dict[int, int]  # position in the system -> added vertex


def build_from_transverse(
    g: Graph, system: Iterable[tuple[int, Iterable[int]]], t: int, cap: int | None = None
) -> TransverseBuild:
    """Add a vertex per system entry, joined to its set, and verify the result.

    The returned graph must be t-chromatic with the added vertices forming a
    color class in every t-coloring; otherwise ``TransverseError``.
    Duplicate entries produce distinct new vertices.
    """
    fam = [(i, frozenset(w)) for i, w in system]
    base = max(g.vertices, default=-1) + 1
    new_vertex = {pos: base + pos for pos in range(len(fam))}
    edges = [tuple(e) for e in g.sorted_edges()]
    for pos, (_, w) in enumerate(fam):
        edges += [(new_vertex[pos], x) for x in sorted(w)]
    h = Graph(list(g.vertices) + list(new_vertex.values()), edges)
    vstar = frozenset(new_vertex.values())
    chi = chromatic_number(h, cap)
    if chi != t:
        raise TransverseError(f"built graph has chromatic number {chi}, expected {t}")
    bad = [p for p in partitions(h, t, cap) if vstar not in p]
    if bad:
        raise TransverseError(
            f"added vertices {sorted(vstar)} are not a fixed class; "
            f"{len(bad)} partition(s) split them, e.g. {sorted(sorted(c) for c in bad[0])}"
        )
    return TransverseBuild(h, vstar, new_vertex)


def extract_transverse(h: Graph, vstar: Iterable[int]) -> tuple[Graph, TransverseSystem]:
    """Split ``h`` at a fixed class into ``G = H - V*`` and ``{(i, N_G(v_i))}``."""
    vstar = sorted(frozenset(vstar))
    rest = h.vertices - set(vstar)
    g = induced_subgraph(h, rest)
    return g, [(i, h.neighbors(v) & rest) for i, v in enumerate(vstar, start=1)]
