"""Local coloring rules, rule-bases and generic forcing.

A structural rule is a marked pattern graph, a target label and a list update.
Two update kinds cover Tucker's rules and their custom generalizations:

``subtract-union``
    if the lists of every non-target pattern vertex together hold exactly
    ``union_size`` colors, remove those colors from the target;
``intersect-lists``
    if all pattern lists together hold exactly ``union_size`` colors,
    intersect the target's list with the partner's.

``greedy-min`` exists only so the greedy rule can be checked as if it were
structural (it is not: it fails solution preservation).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product

from . import oracle
from .graph import Graph, MarkedGraph, amalgam, clique, diameter, edge, induced_subgraph

Lists = Mapping[int, frozenset[int]]

STRUCTURAL_KINDS = ("subtract-union", "intersect-lists")
LOCAL_KINDS = STRUCTURAL_KINDS + ("greedy-min",)


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class LocalRule:
    name: str
    pattern: MarkedGraph
    target: str
    kind: str
    union_size: int
    partner: str | None = None
    nonadjacent: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if self.kind not in LOCAL_KINDS:
            raise RuleError(f"unknown update kind {self.kind!r}")
        labels = self.pattern.labels
        if len(labels) != len(self.pattern.graph):
            raise RuleError("every pattern vertex must be labeled")
        if self.target not in labels:
            raise RuleError(f"target {self.target!r} is not a pattern label")
        if self.kind == "intersect-lists" and self.partner not in labels:
            raise RuleError("intersect-lists needs a partner label inside the pattern")
        for a, b in self.nonadjacent:
            if a not in labels or b not in labels:
                raise RuleError(f"non-adjacency pair ({a}, {b}) uses unknown labels")
        # the target first, then the rest in declaration order
        order = (self.target,) + tuple(lab for lab in labels if lab != self.target)
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_partner_idx", order.index(self.partner) if self.partner in order else -1)

    @property
    def label_order(self) -> tuple[str, ...]:
        """Label order used for embeddings; the target always comes first."""
        return self._order

    @property
    def diameter(self) -> float:
        return diameter(self.pattern.graph)

    def oriented_pattern(self) -> MarkedGraph:
        """The pattern with marks re-inserted in ``label_order``."""
        return MarkedGraph(self.pattern.graph, {lab: self.pattern.marks[lab] for lab in self._order})

    def admits(self, host: Graph, image: Mapping[str, int]) -> bool:
        return all(not host.adjacent(image[a], image[b]) for a, b in self.nonadjacent)

    def fire(self, lists: Mapping[str, frozenset[int]]) -> frozenset[int] | None:
        """New target list if the rule's condition holds, else None."""
        return self.fire_seq([lists[lab] for lab in self._order])

    def fire_seq(self, seq) -> frozenset[int] | None:
        """As :meth:`fire`, with lists given in ``label_order`` (target first)."""
        tgt = seq[0]
        if self.kind == "subtract-union":
            union = frozenset().union(*seq[1:])
            if len(union) == self.union_size:
                return tgt - union
            return None
        if self.kind == "intersect-lists":
            union = frozenset().union(*seq)
            if len(union) == self.union_size:
                return tgt & seq[self._partner_idx]
            return None
        decided = frozenset().union(*(lst for lst in seq[1:] if len(lst) == 1))
        free = tgt - decided
        return frozenset({min(free)}) if free else None


@dataclass(frozen=True)
class NonstructuralRule:
    name: str
    kind: str = "greedy-min"

    def update(self, current: frozenset[int], decided_neighbor_colors: frozenset[int]) -> frozenset[int] | None:
        """Greedy: keep only the least color not held by a decided neighbor.

        Returns None (no update) when every color of the list is blocked; the
        engine notices the empty list on its own through Tucker's rule.
        """
        free = current - decided_neighbor_colors
        if not free:
            return None
        return frozenset({min(free)})


def tucker1(t: int) -> LocalRule:
    """Tucker's first rule on ``K_t[x_1..x_t]`` with target ``x_t``."""
    if t < 2:
        raise RuleError("Tucker's first rule needs t >= 2")
    labels = [f"x{i}" for i in range(1, t + 1)]
    return LocalRule(f"tucker1({t})", clique(*labels), labels[-1], "subtract-union", t - 1)


def tucker2_pattern(t: int) -> MarkedGraph:
    """``T^2_t[u,v,x_1..x_{t-1}]``: two t-cliques sharing t-1 vertices."""
    xs = [f"x{i}" for i in range(1, t)]
    return amalgam(clique("u", *xs), clique("v", *xs))


def tucker2(t: int) -> LocalRule:
    """Tucker's second rule: target ``u`` takes ``L_u & L_v`` when u, v are non-adjacent."""
    if t < 2:
        raise RuleError("Tucker's second rule needs t >= 2")
    return LocalRule(
        f"tucker2({t})", tucker2_pattern(t), "u", "intersect-lists", t,
        partner="v", nonadjacent=(("u", "v"),),
    )


def greedy() -> NonstructuralRule:
    return NonstructuralRule("greedy")


def greedy_as_local() -> LocalRule:
    """The greedy update dressed up as a rule on an edge, for soundness checks."""
    return LocalRule("greedy-on-edge", edge("u", "x"), "u", "greedy-min", 0)


def _is_basic_exclusion(rule: LocalRule) -> bool:
    # behaves as tucker1(2) on K_2: an edge, subtract the other end's singleton
    g = rule.pattern.graph
    return (
        rule.kind == "subtract-union" and len(g) == 2 and len(g.edges) == 1 and rule.union_size == 1
    )


@dataclass(frozen=True)
class RuleBase:
    structural: tuple[LocalRule, ...]
    palette: int
    bound: int
    nonstructural: NonstructuralRule | None = None
    name: str = "custom"

    def __post_init__(self):
        rules = tuple(self.structural)
        if self.palette < 1:
            raise RuleError("palette must be positive")
        for r in rules:
            if r.kind == "greedy-min":
                raise RuleError(f"{r.name}: greedy updates belong in the nonstructural slot")
            if r.diameter > self.bound:
                raise RuleError(f"{r.name}: pattern diameter {r.diameter} exceeds bound d={self.bound}")
        if not any(_is_basic_exclusion(r) for r in rules):
            rules = (tucker1(2),) + rules
        object.__setattr__(self, "structural", rules)

    @property
    def is_structural(self) -> bool:
        return self.nonstructural is None


def rt(t: int = 3) -> RuleBase:
    """Tucker's rule-base: tucker1 and tucker2 for every clique size 2..t, d = 2."""
    rules = tuple(tucker1(s) for s in range(2, t + 1)) + tuple(tucker2(s) for s in range(2, t + 1))
    return RuleBase(rules, t, 2, name="RT")


def rg(t: int = 3) -> RuleBase:
    return RuleBase((tucker1(2),), t, 1, greedy(), name="RG")


def rt_greedy(t: int = 3) -> RuleBase:
    base = rt(t)
    return RuleBase(base.structural, t, 2, greedy(), name="RT+greedy")


PRESETS = {"RT": rt, "RG": rg, "RT+greedy": rt_greedy}


def preset(name: str, t: int = 3) -> RuleBase:
    try:
        return PRESETS[name](t)
    except KeyError:
        raise RuleError(f"unknown rule-base {name!r}; choose from {sorted(PRESETS)}") from None


def rule_from_dict(doc: Mapping) -> LocalRule:
    """Build a custom rule from its JSON description.

    ``{"name", "pattern": {"vertices": [labels], "edges": [[a, b], ...]},
    "target", "update": "subtract-union" | "intersect-lists",
    "union_size", "partner"?, "nonadjacent"?: [[a, b], ...]}``
    """
    pat = doc["pattern"]
    labels = list(pat["vertices"])
    ids = {lab: i for i, lab in enumerate(labels)}
    g = Graph(range(len(labels)), [(ids[a], ids[b]) for a, b in pat.get("edges", [])])
    kind = doc["update"]
    if kind not in STRUCTURAL_KINDS:
        raise RuleError(f"structural rule update must be one of {STRUCTURAL_KINDS}")
    return LocalRule(
        doc.get("name", "custom"),
        MarkedGraph(g, ids),
        doc["target"],
        kind,
        int(doc["union_size"]),
        partner=doc.get("partner"),
        nonadjacent=tuple(tuple(p) for p in doc.get("nonadjacent", [])),
    )


def rulebase_from_dict(doc: Mapping) -> RuleBase:
    """Parse ``{"palette", "bound", "rules": [...], "nonstructural"?: "greedy-min", "presets"?: [...]}``."""
    t = int(doc["palette"])
    rules: list[LocalRule] = []
    for name in doc.get("presets", []):
        rules.extend(preset(name, t).structural)
    rules.extend(rule_from_dict(r) for r in doc.get("rules", []))
    ns = doc.get("nonstructural")
    if ns not in (None, "greedy-min"):
        raise RuleError(f"unknown nonstructural rule {ns!r}")
    return RuleBase(tuple(rules), t, int(doc.get("bound", 2)), greedy() if ns else None, name=doc.get("name", "custom"))


@dataclass
class RuleReport:
    rule: str
    assignments: int = 0
    fired: int = 0
    pairs: int = 0
    skipped: bool = False
    violations: list[tuple[str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped and not self.violations

    def failed(self, prop: str) -> bool:
        return any(p == prop for p, _ in self.violations)


def _nonempty_subsets(t: int) -> list[frozenset[int]]:
    colors = range(1, t + 1)
    return [frozenset(c for c, bit in zip(colors, bits) if bit) for bits in product((0, 1), repeat=t) if any(bits)]


def validate_rule(rule: LocalRule, t: int, sample_bound: int = 6) -> RuleReport:
    """Exhaustively check shrink-only, solution preservation and monotonicity.

    Lists range over nonempty subsets of 1..t on every pattern vertex.
    Monotonicity is checked on pairs ``L1 <= L2`` on which the rule fires for
    both.  Patterns larger than ``sample_bound`` are skipped (and reported so).
    """
    report = RuleReport(rule.name)
    g = rule.pattern.graph
    labels = rule.pattern.labels
    if len(labels) > sample_bound:
        report.skipped = True
        return report
    subsets = _nonempty_subsets(t)
    vid = rule.pattern.marks
    fired: dict[tuple, frozenset[int]] = {}
    for combo in product(subsets, repeat=len(labels)):
        report.assignments += 1
        by_label = dict(zip(labels, combo))
        new = rule.fire(by_label)
        if new is None:
            continue
        report.fired += 1
        fired[combo] = new
        old = by_label[rule.target]
        if not new <= old:
            report.violations.append(("shrink", by_label))
        before = {vid[lab]: lst for lab, lst in by_label.items()}
        after = dict(before)
        after[vid[rule.target]] = new
        n_before = oracle.count_solutions(oracle.ListColoringProblem(g, before, t))
        n_after = oracle.count_solutions(oracle.ListColoringProblem(g, after, t))
        if n_before != n_after:
            report.violations.append(("solutions", by_label))
    keys = list(fired)
    for a in keys:
        for b in keys:
            if a is b or not all(x <= y for x, y in zip(a, b)):
                continue
            report.pairs += 1
            if not fired[a] <= fired[b]:
                report.violations.append(("monotone", (dict(zip(labels, a)), dict(zip(labels, b)))))
    return report


@dataclass(frozen=True)
class ForceOutcome:
    status: str  # "updated", "noop" or "undecided"
    lists: dict[int, frozenset[int]]
    reason: str = ""


def type1_force(
    g: Graph, lists: Lists, t: int, sub: Iterable[int], v: int, cap: int = 12
) -> ForceOutcome:
    """Remove a uniquely-colored subproblem's colors from a dominated vertex.

    Acts when the list problem on ``g[[sub]]`` has a single color partition,
    uses all ``k = |union of lists|`` colors, and ``v``'s neighbors in ``sub``
    meet every class.
    """
    sub = frozenset(sub)
    cur = {w: frozenset(lists[w]) for w in g.vertices}
    if v in sub:
        raise ValueError("the forced vertex must lie outside the subgraph")
    if len(sub) > cap:
        return ForceOutcome("undecided", cur, f"subgraph has {len(sub)} > {cap} vertices")
    h = induced_subgraph(g, sub)
    union = frozenset().union(*(cur[w] for w in sub)) if sub else frozenset()
    k = len(union)
    if k > t or not sub:
        return ForceOutcome("noop", cur, "list union exceeds the palette" if sub else "empty subgraph")
    sol = oracle.unique_up_to_permutation(oracle.ListColoringProblem(h, {w: cur[w] for w in sub}, t), cap=cap)
    if sol is None:
        return ForceOutcome("noop", cur, "subproblem is not uniquely colorable")
    classes: dict[int, set[int]] = {}
    for w, c in sol.items():
        classes.setdefault(c, set()).add(w)
    if len(classes) != k:
        return ForceOutcome("noop", cur, "solution does not use every listed color")
    nb = g.neighbors(v) & sub
    if not all(nb & cls for cls in classes.values()):
        return ForceOutcome("noop", cur, "neighborhood misses a color class")
    out = dict(cur)
    out[v] = cur[v] - union
    return ForceOutcome("updated" if out[v] != cur[v] else "noop", out)


def type2_force(
    g: Graph, lists: Lists, t: int, sub: Iterable[int], vstar: Iterable[int], cap: int = 12
) -> ForceOutcome:
    """Intersect the lists of a vertex set that is a fixed class of its host.

    Acts when, in every solution of the list problem on ``g[[sub | vstar]]``,
    ``vstar`` is exactly one color class.
    """
    sub, vstar = frozenset(sub), frozenset(vstar)
    cur = {w: frozenset(lists[w]) for w in g.vertices}
    if sub & vstar:
        raise ValueError("subgraph and V* must be disjoint")
    whole = sub | vstar
    if len(whole) > cap:
        return ForceOutcome("undecided", cur, f"{len(whole)} > {cap} vertices")
    h = induced_subgraph(g, whole)
    sols = oracle.enumerate_solutions(oracle.ListColoringProblem(h, {w: cur[w] for w in whole}, t), cap=cap).solutions
    if not sols:
        return ForceOutcome("noop", cur, "subproblem has no solution")
    for s in sols:
        c = {s[w] for w in vstar}
        if len(c) != 1 or {w for w in whole if s[w] in c} != vstar:
            return ForceOutcome("noop", cur, "V* is not a fixed color class")
    common = frozenset.intersection(*(cur[w] for w in vstar))
    out = dict(cur)
    for w in vstar:
        out[w] = common
    return ForceOutcome("updated" if out != cur else "noop", out)
