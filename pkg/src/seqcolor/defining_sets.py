"""Sequential defining sets: verification and exhaustive search.

A seed set A is a defining set for a colored graph when the solver, started
from the colors of A and full lists elsewhere, recovers exactly that
coloring.  Its index is ``|A| + rounds - 1``.  The weak number minimizes
``|A|``, the strong number minimizes the index, both over runs that finish
within ``k`` rounds.

Each candidate is solved once without a round cap; the run is deterministic,
so a capped run at k succeeds exactly when the uncapped one succeeds within
k rounds.  The cached outcome then answers every k.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

from .engine import Solver, lists_from_defining_set
from .graph import Graph, GraphError, OrderedColoredGraph, validate_ordering
from .rules import RuleBase


@dataclass(frozen=True)
class SdsWitness:
    set: frozenset[int]
    rounds: int

    @property
    def index(self) -> int:
        return len(self.set) + self.rounds - 1


@dataclass(frozen=True)
class SdsQuery:
    target: OrderedColoredGraph
    rulebase: RuleBase
    k: int | None = None  # None means no round bound
    mode: str = "weak"

    def __post_init__(self):
        if self.mode not in ("weak", "strong"):
            raise ValueError("mode must be 'weak' or 'strong'")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be at least 1")
        if not self.target.is_proper():
            raise GraphError("the target coloring must be proper")


@dataclass(frozen=True)
class SdsOutcome:
    """Result of a search.

    ``status`` is "found", "none" (no defining set within the round bound) or
    "exceeded" (budget ran out; ``witness`` then holds the best upper bound
    seen, possibly None).
    """

    status: str
    witness: SdsWitness | None
    explored: int
    mode: str = "weak"

    @property
    def number(self) -> int | None:
        if self.witness is None or self.status != "found":
            return None
        return len(self.witness.set) if self.mode == "weak" else self.witness.index


class BudgetExceeded(RuntimeError):
    pass


def _run(solver: Solver, target: OrderedColoredGraph, seeds: frozenset[int]) -> int | None:
    """Rounds to recover the target coloring from ``seeds``, or None."""
    res = solver.solve(lists_from_defining_set(target.graph, target.coloring, seeds, solver.palette))
    if res.done and res.coloring == dict(target.coloring):
        return res.rounds
    return None


_worker: tuple[Solver, OrderedColoredGraph] | None = None


def _init_worker(target: OrderedColoredGraph, rb: RuleBase) -> None:
    global _worker
    _worker = (Solver(target.graph, target.ordering, rb), target)


def _work(seeds: frozenset[int]) -> int | None:
    solver, target = _worker
    return _run(solver, target, seeds)


class SdsSearch:
    """Exhaustive search state for one target and rule-base.

    ``budget`` caps the number of distinct seed sets solved.  ``threads > 1``
    solves candidates of one size in a process pool; results are reduced in
    candidate order, so witnesses do not depend on the thread count.
    """

    def __init__(self, target: OrderedColoredGraph, rb: RuleBase, budget: int | None = None,
                 threads: int = 1, must_contain: bool = True):
        if not target.is_proper():
            raise GraphError("the target coloring must be proper")
        if target.palette != rb.palette:
            raise ValueError("target palette and rule-base palette differ")
        self.target = target
        self.rb = rb
        self.solver = Solver(target.graph, target.ordering, rb)
        self.budget = budget
        self.threads = max(1, threads)
        self.cache: dict[frozenset[int], int | None] = {}
        self.order = target.by_rank
        self.use_must_contain = must_contain and rb.is_structural
        self._must: frozenset[int] | None = None
        self._pool: ProcessPoolExecutor | None = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    @property
    def explored(self) -> int:
        return len(self.cache)

    def _charge(self, count: int = 1) -> None:
        if self.budget is not None and len(self.cache) + count > self.budget:
            raise BudgetExceeded

    def rounds(self, seeds: Iterable[int]) -> int | None:
        """Cached: rounds needed from ``seeds``, or None if they do not define the target."""
        seeds = frozenset(seeds)
        if seeds not in self.cache:
            self._charge()
            self.cache[seeds] = _run(self.solver, self.target, seeds)
        return self.cache[seeds]

    def rounds_many(self, batch: Sequence[frozenset[int]]) -> list[int | None]:
        todo = [s for s in dict.fromkeys(batch) if s not in self.cache]
        if self.threads > 1 and len(todo) > 1:
            self._charge(len(todo))
            if self._pool is None:
                self._pool = ProcessPoolExecutor(
                    self.threads, initializer=_init_worker, initargs=(self.target, self.rb)
                )
            chunk = max(1, len(todo) // (4 * self.threads))
            for s, r in zip(todo, self._pool.map(_work, todo, chunksize=chunk)):
                self.cache[s] = r
        else:
            for s in todo:
                self.rounds(s)
        return [self.cache[s] for s in batch]

    def must_contain(self) -> frozenset[int]:
        """Vertices in every defining set.

        If every other vertex is seeded and v still does not come out right,
        no smaller seed set can do better: structural rules are monotone, so
        fewer seeds only leave longer lists.  Only used for structural
        rule-bases.
        """
        if self._must is None:
            everything = self.target.graph.vertices
            self._must = frozenset(
                v for v in self.order if self.rounds(everything - {v}) is None
            )
        return self._must

    def candidates(self, size: int) -> Iterator[frozenset[int]]:
        """Seed sets of one size in lexicographic rank order."""
        must = self.must_contain() if self.use_must_contain else frozenset()
        if size < len(must):
            return
        rest = [v for v in self.order if v not in must]
        for extra in combinations(rest, size - len(must)):
            yield must | frozenset(extra)

    def _batches(self, size: int, width: int = 256) -> Iterator[list[frozenset[int]]]:
        batch: list[frozenset[int]] = []
        for c in self.candidates(size):
            batch.append(c)
            if len(batch) >= width:
                yield batch
                batch = []
        if batch:
            yield batch

    def _lex(self, seeds: frozenset[int]) -> tuple[int, ...]:
        return tuple(sorted(self.target.ordering[v] for v in seeds))

    def weak(self, k: int | None = None) -> SdsOutcome:
        n = len(self.target)
        try:
            for size in range(n + 1):
                for batch in self._batches(size):
                    for seeds, r in zip(batch, self.rounds_many(batch)):
                        if r is not None and (k is None or r <= k):
                            return SdsOutcome("found", SdsWitness(seeds, r), self.explored, "weak")
        except BudgetExceeded:
            return SdsOutcome("exceeded", self._best_seen(k, "weak"), self.explored, "weak")
        return SdsOutcome("none", None, self.explored, "weak")

    def _key(self, w: SdsWitness) -> tuple:
        return (w.index, w.rounds, self._lex(w.set))

    def strong(self, k: int | None = None) -> SdsOutcome:
        # the index is at least |A|, so sizes beyond the best index cannot win
        n = len(self.target)
        best: SdsWitness | None = None
        try:
            for size in range(n + 1):
                if best is not None and size > best.index:
                    break
                for batch in self._batches(size):
                    for seeds, r in zip(batch, self.rounds_many(batch)):
                        if r is None or (k is not None and r > k):
                            continue
                        w = SdsWitness(seeds, r)
                        if best is None or self._key(w) < self._key(best):
                            best = w
        except BudgetExceeded:
            return SdsOutcome("exceeded", self._best_seen(k, "strong"), self.explored, "strong")
        if best is None:
            return SdsOutcome("none", None, self.explored, "strong")
        return SdsOutcome("found", best, self.explored, "strong")

    def _best_seen(self, k: int | None, mode: str) -> SdsWitness | None:
        ok = [SdsWitness(s, r) for s, r in self.cache.items() if r is not None and (k is None or r <= k)]
        if not ok:
            return None
        if mode == "weak":
            return min(ok, key=lambda w: (len(w.set), self._lex(w.set)))
        return min(ok, key=self._key)


def verify_sds(target: OrderedColoredGraph, seeds: Iterable[int], rb: RuleBase,
               k: int | None = None, solver: Solver | None = None) -> SdsWitness | None:
    """A witness if ``seeds`` recover the target coloring within ``k`` rounds."""
    seeds = frozenset(seeds)
    if not seeds <= target.graph.vertices:
        raise GraphError("seed vertices must belong to the graph")
    solver = solver or Solver(target.graph, target.ordering, rb)
    r = _run(solver, target, seeds)
    if r is None or (k is not None and r > k):
        return None
    return SdsWitness(seeds, r)


def wsdn(target: OrderedColoredGraph, rb: RuleBase, k: int | None = None, budget: int | None = None,
         threads: int = 1, must_contain: bool = True) -> SdsOutcome:
    with SdsSearch(target, rb, budget, threads, must_contain) as s:
        return s.weak(k)


def ssdn(target: OrderedColoredGraph, rb: RuleBase, k: int | None = None, budget: int | None = None,
         threads: int = 1, must_contain: bool = True) -> SdsOutcome:
    with SdsSearch(target, rb, budget, threads, must_contain) as s:
        return s.strong(k)


def search(q: SdsQuery, budget: int | None = None, threads: int = 1) -> SdsOutcome:
    fn = wsdn if q.mode == "weak" else ssdn
    return fn(q.target, q.rulebase, q.k, budget, threads)


@dataclass(frozen=True)
class ColoringOutcome:
    status: str  # "yes", "no" or "exceeded"
    coloring: Mapping[int, int] | None = None
    witness: SdsWitness | None = None
    explored: int = 0


def _seed_colorings(g: Graph, seeds: Sequence[int], t: int) -> Iterator[dict[int, int]]:
    for cols in product(range(1, t + 1), repeat=len(seeds)):
        assign = dict(zip(seeds, cols))
        if all(assign[a] != assign[b] for a, b in combinations(seeds, 2) if g.adjacent(a, b)):
            yield assign


def exists_coloring_with_sdn_le(
    g: Graph, ordering: Mapping[int, int], rb: RuleBase, k: int | None, xi: int,
    mode: str = "weak", budget: int | None = None,
) -> ColoringOutcome:
    """Is there a proper coloring whose weak (or strong) number is at most ``xi``?

    Rather than enumerating colorings and searching each one, this enumerates
    seed sets of size at most ``xi`` with every proper seed coloring.  A run
    that finishes defines its own coloring, and any coloring with a small
    defining set is reached from that set, so both searches answer alike.
    """
    if mode not in ("weak", "strong"):
        raise ValueError("mode must be 'weak' or 'strong'")
    ordering = validate_ordering(g, ordering)
    order = sorted(g.vertices, key=ordering.__getitem__)
    solver = Solver(g, ordering, rb)
    t = rb.palette
    full = frozenset(range(1, t + 1))
    explored = 0
    for size in range(min(xi, len(g)) + 1):
        for seeds in combinations(order, size):
            for assign in _seed_colorings(g, seeds, t):
                if budget is not None and explored >= budget:
                    return ColoringOutcome("exceeded", explored=explored)
                explored += 1
                lists = {v: frozenset({assign[v]}) if v in assign else full for v in g.vertices}
                res = solver.solve(lists, k)
                if not res.done:
                    continue
                w = SdsWitness(frozenset(seeds), res.rounds)
                if mode == "strong" and w.index > xi:
                    continue
                return ColoringOutcome("yes", res.coloring, w, explored)
    return ColoringOutcome("no", explored=explored)


def exists_coloring_with_wsdn_le(g: Graph, ordering: Mapping[int, int], rb: RuleBase,
                                 k: int | None, xi: int, budget: int | None = None) -> ColoringOutcome:
    return exists_coloring_with_sdn_le(g, ordering, rb, k, xi, "weak", budget)


def exists_coloring_with_ssdn_le(g: Graph, ordering: Mapping[int, int], rb: RuleBase,
                                 k: int | None, xi: int, budget: int | None = None) -> ColoringOutcome:
    return exists_coloring_with_sdn_le(g, ordering, rb, k, xi, "strong", budget)
