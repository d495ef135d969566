import pytest

from seqcolor import oracle
from seqcolor.defining_sets import verify_sds
from seqcolor.engine import Solver, coloring_closure, lists_from_defining_set
from seqcolor.gadgets import (
    build_D,
    build_F,
    build_G_xi,
    build_H,
    edge_permutation,
    reduce_3col,
    reduce_vertexcover_rulebase,
    reduce_vertexcover_sds,
)
from seqcolor.graph import Graph, GraphError, complete_graph
from seqcolor.rules import preset

RT = preset("RT")
TRIANGLE = complete_graph(range(3))
P3 = Graph(range(3), [(0, 1), (1, 2)])


def rounds_from(ocg, seeds, cap=None):
    res = Solver(ocg.graph, ocg.ordering, RT).solve(
        lists_from_defining_set(ocg.graph, ocg.coloring, seeds, 3), cap
    )
    return res.rounds if res.done and res.coloring == dict(ocg.coloring) else None


def well_formed(ocg):
    assert sorted(ocg.ordering.values()) == list(range(1, len(ocg) + 1))
    assert ocg.is_proper()


class TestChainGadget:
    def test_smallest(self):
        d = build_D(1).graph
        assert len(d) == 3 and len(d.graph.edges) == 2
        names = {lab: d.coloring[v] for lab, v in d.marks.items()}
        assert names == {"u": 3, "v": 1, "z": 2}
        assert rounds_from(d, d.vertices_of("uv")) == 1

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_exactly_k_rounds(self, k):
        d = build_D(k).graph
        well_formed(d)
        assert len(d) == (3 if k == 1 else 3 * k + 1)
        assert rounds_from(d, d.vertices_of("uv")) == k
        if k > 1:
            assert rounds_from(d, d.vertices_of("uv"), k - 1) is None

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_three_seeds_take_one_round(self, k):
        d = build_D(k).graph
        assert rounds_from(d, d.vertices_of(["u", "v", "x_1"])) == 1

    @pytest.mark.parametrize("k", [2, 3])
    def test_v_alone_colors_nothing(self, k):
        d = build_D(k).graph
        assert coloring_closure({d.marks["v"]}, d, RT, k).graph.vertices == {d.marks["v"]}

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            build_D(0)


class TestCopies:
    @pytest.mark.parametrize("xi,k", [(1, 1), (2, 1), (3, 2)])
    def test_counts_and_rounds(self, xi, k):
        g = build_G_xi(xi, k).graph
        well_formed(g)
        assert len(g) == 2 + xi * (3 * (k + 1) - 1)
        assert rounds_from(g, g.vertices_of("uv")) == k + 1

    def test_copy_labels(self):
        g = build_G_xi(2, 1).graph
        assert {"x_1^{1}", "x_1^{2}", "u", "v"} <= set(g.marks)


class TestEdgeGadgets:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_F_from_either_end(self, k):
        f = build_F(k).graph
        well_formed(f)
        assert len(f) == 3 * k + 12
        for end in ("x", "y"):
            assert rounds_from(f, f.vertices_of(["u", "v", end])) == k

    def test_F_needs_a_cover_end(self):
        f = build_F(2).graph
        assert rounds_from(f, f.vertices_of("uv")) is None

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_H_one_round_from_either_end(self, n):
        h = build_H(n).graph
        well_formed(h)
        assert len(h) == 2 * n + 3
        for end in ("x", "y"):
            assert rounds_from(h, h.vertices_of([end, "v"])) == 1
        assert rounds_from(h, h.vertices_of("v")) is None


class TestEdgePermutation:
    def test_values(self):
        assert edge_permutation(3, 1) == {3: 3, 1: 1, 2: 2}
        assert edge_permutation(1, 2) == {3: 1, 1: 2, 2: 3}
        pi = edge_permutation(2, 2)
        assert pi[3] == 2 and sorted(pi.values()) == [1, 2, 3]


class TestThreeColoring:
    def test_triangle_certificate(self):
        out = reduce_3col(TRIANGLE, 1, coloring={0: 1, 1: 2, 2: 3})
        assert len(out.graph) == 12 and out.bound == 3 and out.has_certificate
        inst = out.instance
        well_formed(inst)
        assert verify_sds(inst, out.seeds, RT, 1).rounds == 1

    @pytest.mark.parametrize("k", [1, 2])
    def test_certificate_rounds(self, k):
        out = reduce_3col(P3, k, coloring={0: 1, 1: 2, 2: 1})
        w = verify_sds(out.instance, out.seeds, RT, k)
        assert w is not None and w.rounds == k

    def test_strong_mode(self):
        out = reduce_3col(TRIANGLE, 2, "strong", coloring={0: 1, 1: 2, 2: 3})
        assert out.bound == 3 + 2 - 1
        assert len(out.graph) == 3 + 3 * 5 * (3 * 2 - 1)
        w = verify_sds(out.instance, out.seeds, RT, 2)
        assert w is not None and w.index <= out.bound

    def test_counts(self):
        assert len(reduce_3col(complete_graph(range(4)), 1).graph) == 28

    def test_improper_assignment_fails_in_one_round(self):
        k4 = complete_graph(range(4))
        out = reduce_3col(k4, 1, coloring={0: 1, 1: 2, 2: 3, 3: 1})
        inst = out.instance
        assert rounds_from(inst, out.seeds, 1) is None
        cc = coloring_closure(out.seeds, inst, RT, 1)
        assert cc.graph.vertices != inst.graph.vertices

    def test_k4_has_no_three_coloring(self):
        assert not oracle.colorings(complete_graph(range(4)), 3)

    def test_validation(self):
        with pytest.raises(GraphError):
            reduce_3col(TRIANGLE, 1, coloring={0: 1, 1: 2})
        with pytest.raises(ValueError):
            reduce_3col(TRIANGLE, 1, "medium")
        with pytest.raises(ValueError):
            reduce_3col(TRIANGLE, 1).instance


class TestVertexCover:
    def test_sds_certificate(self):
        out = reduce_vertexcover_sds(P3, 1, 2, cover=[1])
        assert len(out.graph) == 201 and out.bound == 4
        w = verify_sds(out.instance, out.seeds, RT)
        assert w.rounds == 2 and w.index <= out.bound

    @pytest.mark.parametrize("cover", [[0, 2], [0, 1, 2]])
    def test_other_covers(self, cover):
        out = reduce_vertexcover_sds(P3, len(cover), 2, cover=cover)
        assert verify_sds(out.instance, out.seeds, RT, 2) is not None

    def test_non_cover_rejected(self):
        with pytest.raises(GraphError):
            reduce_vertexcover_sds(P3, 1, 2, cover=[0])
        with pytest.raises(GraphError):
            reduce_vertexcover_rulebase(P3, 1, cover=[2])

    def test_rulebase_certificate(self):
        out = reduce_vertexcover_rulebase(P3, 1, cover=[1])
        well_formed(out.instance)
        assert len(out.graph) == 16 and out.bound == 2
        assert verify_sds(out.instance, out.seeds, RT, 1).rounds == 1

    def test_single_edge(self):
        e = Graph([0, 1], [(0, 1)])
        out = reduce_vertexcover_rulebase(e, 1, cover=[0])
        assert verify_sds(out.instance, out.seeds, RT, 1) is not None
        out = reduce_vertexcover_sds(e, 1, 2, cover=[1])
        assert verify_sds(out.instance, out.seeds, RT, 2) is not None
