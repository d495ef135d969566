import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqcolor import oracle
from seqcolor.engine import Solver
from seqcolor.graph import Graph, complete_graph, edge
from seqcolor.rules import (
    LocalRule,
    RuleBase,
    RuleError,
    greedy,
    greedy_as_local,
    preset,
    rulebase_from_dict,
    tucker1,
    tucker2,
    type1_force,
    type2_force,
    validate_rule,
)

F = frozenset
FULL = F({1, 2, 3})


class TestTucker1:
    def test_forced_last_color(self):
        r = tucker1(3)
        assert r.fire({"x1": F({1}), "x2": F({2}), "x3": FULL}) == {3}
        assert r.fire({"x1": F({1, 2}), "x2": F({1, 2}), "x3": FULL}) == {3}

    def test_edge_exclusion(self):
        assert tucker1(2).fire({"x1": F({1}), "x2": F({1, 2})}) == {2}

    def test_not_applicable(self):
        assert tucker1(3).fire({"x1": FULL, "x2": F({1}), "x3": FULL}) is None

    def test_rejects_small_t(self):
        with pytest.raises(RuleError):
            tucker1(1)


class TestTucker2:
    def test_path_ends_share_color(self):
        # after edge exclusion the middle vertex of v1 - z - v2 holds {2}
        r = tucker2(2)
        assert r.fire({"u": F({1, 2}), "v": F({1}), "x1": F({2})}) == {1}

    def test_ucg8_v5_v8(self, ucg8_graph):
        # v5 and v8 flank the edge v6 v7 and are not adjacent
        r = tucker2(3)
        lists = {"u": F({1, 2}), "v": F({2, 3}), "x1": F({2, 3}), "x2": F({1})}
        assert r.fire(lists) == {2}
        assert r.admits(ucg8_graph, {"u": 8, "v": 5, "x1": 6, "x2": 7})

    def test_adjacent_ends_not_admitted(self):
        k4 = complete_graph(range(4))
        assert not tucker2(3).admits(k4, {"u": 0, "v": 1, "x1": 2, "x2": 3})


class TestGreedy:
    def test_examples(self):
        g = greedy()
        assert g.update(FULL, F({1, 2})) == {3}
        assert g.update(FULL, F()) == {1}
        assert g.update(F({1}), F({1})) is None

    def test_order_sensitivity_on_triangle(self):
        k3 = complete_graph([1, 2, 3])
        rb = preset("RG")
        start = {1: F({1}), 2: FULL, 3: FULL}
        a = Solver(k3, {1: 1, 2: 2, 3: 3}, rb).solve(start).coloring
        b = Solver(k3, {1: 1, 2: 3, 3: 2}, rb).solve(start).coloring
        assert a != b
        assert a == {1: 1, 2: 2, 3: 3} and b == {1: 1, 2: 3, 3: 2}


class TestValidateRule:
    @pytest.mark.parametrize("rule", [tucker1(2), tucker1(3), tucker2(2), tucker2(3)], ids=lambda r: r.name)
    def test_tucker_rules_are_sound(self, rule):
        rep = validate_rule(rule, 3)
        assert rep.ok, rep.violations[:3]
        assert rep.fired > 0 and rep.pairs > 0

    def test_assignment_count(self):
        assert validate_rule(tucker1(3), 3).assignments == 7 ** 3

    def test_greedy_is_not_solution_preserving(self):
        rep = validate_rule(greedy_as_local(), 3)
        assert rep.failed("solutions")

    def test_large_pattern_skipped(self):
        rep = validate_rule(tucker1(3), 3, sample_bound=2)
        assert rep.skipped and not rep.ok


class TestRuleBase:
    def test_presets(self):
        rt = preset("RT")
        assert rt.bound == 2 and rt.is_structural
        assert [r.name for r in rt.structural] == ["tucker1(2)", "tucker1(3)", "tucker2(2)", "tucker2(3)"]
        rg = preset("RG")
        assert rg.bound == 1 and not rg.is_structural
        assert not preset("RT+greedy").is_structural
        with pytest.raises(RuleError):
            preset("nope")

    def test_injects_edge_exclusion(self):
        rb = RuleBase((tucker1(3),), 3, 2)
        assert rb.structural[0].name == "tucker1(2)"

    def test_diameter_bound(self):
        with pytest.raises(RuleError):
            RuleBase((tucker2(3),), 3, 1)

    def test_greedy_not_structural(self):
        with pytest.raises(RuleError):
            RuleBase((greedy_as_local(),), 3, 2)

    def test_from_dict(self):
        doc = {
            "palette": 3, "bound": 2,
            "rules": [{
                "name": "t2", "pattern": {"vertices": ["u", "v", "x"], "edges": [["u", "x"], ["v", "x"]]},
                "target": "u", "update": "intersect-lists", "union_size": 2, "partner": "v",
                "nonadjacent": [["u", "v"]],
            }],
            "nonstructural": "greedy-min",
        }
        rb = rulebase_from_dict(doc)
        assert [r.name for r in rb.structural] == ["tucker1(2)", "t2"]
        assert rb.nonstructural is not None
        rb2 = rulebase_from_dict({"palette": 3, "presets": ["RT"]})
        assert rb2.structural == preset("RT").structural

    def test_from_dict_rejects_unknown_update(self):
        with pytest.raises(RuleError):
            rulebase_from_dict({"palette": 3, "rules": [{
                "pattern": {"vertices": ["a", "b"], "edges": [["a", "b"]]},
                "target": "a", "update": "greedy-min", "union_size": 1}]})


class TestForcing:
    def test_type1_ucg8(self, ucg8_graph):
        lists = {v: FULL for v in ucg8_graph.vertices}
        lists.update({1: F({1}), 2: F({2}), 3: F({3}), 4: F({1}), 5: F({2, 3}), 6: F({2, 3})})
        out = type1_force(ucg8_graph, lists, 3, {5, 6}, 7)
        assert out.status == "updated" and out.lists[7] == {1}

    def test_type1_clique_of_singletons(self):
        k3 = complete_graph(range(3))
        lists = {0: F({1}), 1: F({2}), 2: FULL}
        assert type1_force(k3, lists, 3, {0, 1}, 2).lists[2] == {3}

    def test_type1_noop_when_not_unique(self):
        # C4 with 3-lists has colorings with different partitions
        g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1), (4, 2), (4, 3)])
        lists = {v: FULL for v in g.vertices}
        out = type1_force(g, lists, 3, {0, 1, 2, 3}, 4)
        assert out.status == "noop" and out.lists[4] == FULL

    def test_type1_cap(self):
        g = Graph(range(15))
        out = type1_force(g, {v: FULL for v in g.vertices}, 3, range(14), 14)
        assert out.status == "undecided"

    def test_type2_ucg8(self, ucg8_graph):
        lists = {v: FULL for v in ucg8_graph.vertices}
        lists.update({5: F({2, 3}), 8: F({1, 2})})
        out = type2_force(ucg8_graph, lists, 3, {6, 7}, {5, 8})
        assert out.status == "updated"
        assert out.lists[5] == out.lists[8] == {2}

    def test_type2_noop_on_isolated_pair(self):
        g = Graph([0, 1])
        out = type2_force(g, {0: FULL, 1: FULL}, 3, set(), {0, 1})
        assert out.status == "noop"

    def test_type2_singleton_vstar(self):
        k3 = complete_graph(range(3))
        lists = {0: F({1}), 1: F({2}), 2: FULL}
        out = type2_force(k3, lists, 3, {0, 1}, {2})
        assert out.lists[2] == FULL  # a single vertex is trivially its own class

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_forcing_preserves_solutions(self, seed):
        rng = random.Random(seed)
        n = rng.randint(3, 8)
        g = Graph(range(n), [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5])
        lists = {v: F(rng.sample([1, 2, 3], rng.randint(1, 3))) for v in g.vertices}
        verts = list(range(n))
        rng.shuffle(verts)
        cut = rng.randint(1, n - 1)
        sub, rest = verts[:cut], verts[cut:]
        before = oracle.enumerate_solutions(oracle.ListColoringProblem(g, lists, 3)).solutions
        for out in (type1_force(g, lists, 3, sub, rest[0]),
                    type2_force(g, lists, 3, sub, rest[: rng.randint(1, len(rest))])):
            after = oracle.enumerate_solutions(oracle.ListColoringProblem(g, out.lists, 3)).solutions
            assert sorted(map(sorted, (s.items() for s in after))) == sorted(map(sorted, (s.items() for s in before)))
