"""Sequential list coloring driven by a rule-base.

The solver scans vertices by rank.  Each visit saturates the visited
vertex's list under the structural rules (embeddings inside its d-ball, in
canonical order), then applies the nonstructural rule once if the list is
still undecided.  A round is one full scan; updates are visible to later
vertices of the same round.
"""

from __future__ import annotations

import os
from collections import Counter
from collections.abc import Callable, Iterable, Mapping
from contextlib import contextmanager
from dataclasses import dataclass

from . import oracle
from .graph import Graph, GraphError, OrderedColoredGraph, ball, enumerate_embeddings, validate_ordering
from .rules import LocalRule, RuleBase


class InvariantViolation(AssertionError):
    """An engine invariant that must hold by construction did not."""


class AuditViolation(AssertionError):
    """A structural rule firing changed the solution set of the list problem."""


@dataclass(frozen=True)
class OrderedListGraph:
    graph: Graph
    ordering: Mapping[int, int]
    lists: Mapping[int, frozenset[int]]
    palette: int

    def __post_init__(self):
        object.__setattr__(self, "ordering", validate_ordering(self.graph, self.ordering))
        full = frozenset(range(1, self.palette + 1))
        lists = {v: frozenset(self.lists[v]) for v in self.graph.vertices}
        for v, lst in lists.items():
            if not lst <= full:
                raise GraphError(f"list of {v} leaves the palette 1..{self.palette}")
        object.__setattr__(self, "lists", lists)

    @property
    def norm(self) -> int:
        """Total list length, the sum of ``|L_v|``."""
        return sum(len(lst) for lst in self.lists.values())


@dataclass(frozen=True)
class Change:
    vertex: int
    old: frozenset[int]
    new: frozenset[int]
    rule: str


@dataclass(frozen=True)
class SolveResult:
    done: bool
    rounds: int
    lists: Mapping[int, frozenset[int]]
    trace: tuple[tuple[Change, ...], ...]
    status: str  # "colored", "failure", "stable" or "capped"
    failed_at: int | None = None

    @property
    def coloring(self) -> dict[int, int] | None:
        if not self.done:
            return None
        return {v: next(iter(lst)) for v, lst in self.lists.items()}

    def decided(self) -> frozenset[int]:
        return frozenset(v for v, lst in self.lists.items() if len(lst) == 1)


# audited firings and solves across the process, for reporting
audit_stats: Counter = Counter()

_observers: list[Callable[[OrderedListGraph, SolveResult], None]] = []


@contextmanager
def observe(fn: Callable[[OrderedListGraph, SolveResult], None]):
    """Call ``fn(start, result)`` after every solve while the block runs."""
    _observers.append(fn)
    try:
        yield
    finally:
        _observers.remove(fn)


def rounds_bound(start: OrderedListGraph) -> int:
    """Most rounds a successful run may take: ``||L|| - |V|``, or 1 if all decided."""
    return max(1, start.norm - len(start.graph))


class Solver:
    """A rule-base compiled against one ordered graph; reusable across seeds."""

    def __init__(
        self,
        graph: Graph,
        ordering: Mapping[int, int],
        rulebase: RuleBase,
        audit: bool | None = None,
        audit_cap: int = 12,
    ):
        """``audit=None`` defers to the ``SEQCOLOR_AUDIT`` environment variable."""
        self.graph = graph
        self.ordering = validate_ordering(graph, ordering)
        self.rulebase = rulebase
        self.palette = rulebase.palette
        self.order = sorted(graph.vertices, key=self.ordering.__getitem__)
        if audit is None:
            audit = os.environ.get("SEQCOLOR_AUDIT", "") not in ("", "0")
        self.audit = audit and len(graph) <= audit_cap
        self.firings = 0
        self._embeddings: dict[int, list[tuple[LocalRule, tuple[int, ...]]]] = {}

    def embeddings(self, v: int) -> list[tuple[LocalRule, tuple[int, ...]]]:
        """Structural rule instances whose target sits on ``v``, in firing order."""
        cached = self._embeddings.get(v)
        if cached is not None:
            return cached
        region = ball(self.graph, v, self.rulebase.bound)
        out = []
        for rule in self.rulebase.structural:
            pattern = rule.oriented_pattern()
            for image in enumerate_embeddings(
                self.graph, region, pattern, self.ordering, fixed={rule.target: v}
            ):
                if rule.admits(self.graph, image):
                    out.append((rule, tuple(image[lab] for lab in rule.label_order)))
        self._embeddings[v] = out
        return out

    def _check_firing(self, lists: dict[int, frozenset[int]], v: int, new: frozenset[int], rule: str) -> None:
        for c in lists[v] - new:
            probe = dict(lists)
            probe[v] = frozenset({c})
            if oracle.has_solution(self.graph, probe):
                raise AuditViolation(f"{rule} removed color {c} from vertex {v}, which some solution uses")

    def local_update(self, lists: dict[int, frozenset[int]], v: int) -> tuple[list[Change], bool, bool]:
        """Update ``lists[v]`` in place; return (changes, done, col)."""
        changes: list[Change] = []
        embs = self.embeddings(v)
        changed = True
        while changed:
            changed = False
            for rule, image in embs:
                new = rule.fire_seq([lists[w] for w in image])
                if new is None or new == lists[v]:
                    continue
                if not new <= lists[v]:
                    raise InvariantViolation(f"{rule.name} grew the list of vertex {v}")
                if self.audit:
                    self._check_firing(lists, v, new, rule.name)
                    audit_stats["firings"] += 1
                self.firings += 1
                changes.append(Change(v, lists[v], new, rule.name))
                lists[v] = new
                changed = True
        ns = self.rulebase.nonstructural
        if ns is not None and len(lists[v]) > 1:
            decided = frozenset().union(*(lists[w] for w in self.graph.neighbors(v) if len(lists[w]) == 1))
            new = ns.update(lists[v], decided)
            if new is not None and new != lists[v]:
                changes.append(Change(v, lists[v], new, ns.name))
                lists[v] = new
        size = len(lists[v])
        return changes, size != 0, size == 1

    def solve(self, start: Mapping[int, Iterable[int]], max_rounds: int | None = None) -> SolveResult:
        """Run the sequential algorithm from the list assignment ``start``.

        ``max_rounds=None`` means no cap; the run still halts, because a round
        without changes stops it.
        """
        if max_rounds is not None and max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        olg = OrderedListGraph(self.graph, self.ordering, start, self.palette)
        lists = dict(olg.lists)
        trace: list[tuple[Change, ...]] = []
        rounds = 0
        result = None
        while result is None:
            colored = True
            round_changes: list[Change] = []
            for v in self.order:
                changes, done, col = self.local_update(lists, v)
                round_changes.extend(changes)
                if not done:
                    trace.append(tuple(round_changes))
                    result = SolveResult(False, rounds, lists, tuple(trace), "failure", v)
                    break
                if not col:
                    colored = False
            if result is not None:
                break
            rounds += 1
            trace.append(tuple(round_changes))
            if colored:
                status = "colored"
                if any(lists[a] == lists[b] for a, b in self.graph.sorted_edges()):
                    status = "failure"
                result = SolveResult(status == "colored", rounds, lists, tuple(trace), status)
            elif not round_changes:
                result = SolveResult(False, rounds, lists, tuple(trace), "stable")
            elif max_rounds is not None and rounds >= max_rounds:
                result = SolveResult(False, rounds, lists, tuple(trace), "capped")
        if result.done and result.rounds > rounds_bound(olg):
            raise InvariantViolation(
                f"success after {result.rounds} rounds exceeds the bound {rounds_bound(olg)}"
            )
        for fn in list(_observers):
            fn(olg, result)
        return result


def solve(start: OrderedListGraph, rb: RuleBase, max_rounds: int | None = None, audit: bool | None = None) -> SolveResult:
    if start.palette != rb.palette:
        raise ValueError("instance palette and rule-base palette differ")
    return Solver(start.graph, start.ordering, rb, audit=audit).solve(start.lists, max_rounds)


def local_update(state: OrderedListGraph, v: int, rb: RuleBase) -> tuple[frozenset[int], bool, bool]:
    """One visit of ``v``: its new list plus the (done, col) flags."""
    if v not in state.graph.vertices:
        raise GraphError(f"vertex {v!r} is not in the graph")
    lists = dict(state.lists)
    _, done, col = Solver(state.graph, state.ordering, rb).local_update(lists, v)
    return lists[v], done, col


def lists_from_defining_set(g: Graph, coloring: Mapping[int, int], seeds: Iterable[int], t: int) -> dict[int, frozenset[int]]:
    """Seeds get their own color as a singleton list; everything else gets 1..t."""
    seeds = frozenset(seeds)
    stray = seeds - g.vertices
    if stray:
        raise GraphError(f"seed vertices {sorted(stray)} are not in the graph")
    full = frozenset(range(1, t + 1))
    return {v: frozenset({coloring[v]}) if v in seeds else full for v in g.vertices}


def is_solvable(start: OrderedListGraph, rb: RuleBase, r: int | None = None) -> bool:
    """``(R, d, r)``-solvability: success with ``rounds < r`` (``r=None`` is unbounded)."""
    if r is not None and r <= 1:
        return False
    res = solve(start, rb, None if r is None else r - 1)
    return res.done


def coloring_closure(
    seeds: Iterable[int], target: OrderedColoredGraph, rb: RuleBase, k: int | None = None,
    solver: Solver | None = None,
) -> OrderedColoredGraph:
    """The ordered colored subgraph decided after at most ``k`` rounds from ``seeds``.

    ``k=None`` is the unbounded closure.  Only the seeds' colors are read from
    ``target.coloring``; the returned coloring is what the run decided.
    """
    solver = solver or Solver(target.graph, target.ordering, rb)
    res = solver.solve(lists_from_defining_set(target.graph, target.coloring, seeds, rb.palette), k)
    keep = res.decided()
    sub = target.induced(keep)
    decided = {v: next(iter(res.lists[v])) for v in keep}
    return OrderedColoredGraph(sub.graph, sub.ordering, decided, target.palette, sub.marks)
