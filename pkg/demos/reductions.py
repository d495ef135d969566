"""Build the hardness reductions on tiny inputs and check their certificates."""

from itertools import product

from seqcolor.defining_sets import verify_sds
from seqcolor.engine import coloring_closure
from seqcolor.gadgets import reduce_3col, reduce_vertexcover_rulebase, reduce_vertexcover_sds
from seqcolor.graph import Graph, complete_graph
from seqcolor.rules import preset

RT = preset("RT")


def main():
    tri = complete_graph(range(3))
    out = reduce_3col(tri, 1, coloring={0: 1, 1: 2, 2: 3})
    w = verify_sds(out.instance, out.seeds, RT, 1)
    print(f"3-coloring, triangle: {len(out.graph)} vertices, bound {out.bound}, "
          f"base vertices define it in {w.rounds} round")

    k4 = complete_graph(range(4))
    stuck = 0
    for assign in product((1, 2, 3), repeat=4):
        red = reduce_3col(k4, 1, coloring=dict(enumerate(assign)))
        cc = coloring_closure(red.seeds, red.instance, RT, 1)
        stuck += len(cc.graph) < len(red.graph)
    print(f"3-coloring, K4: {stuck} of 81 base assignments leave part of the instance undecided")

    p3 = Graph(range(3), [(0, 1), (1, 2)])
    out = reduce_vertexcover_sds(p3, 1, 2, cover=[1])
    w = verify_sds(out.instance, out.seeds, RT)
    print(f"vertex cover (strong), P3: {len(out.graph)} vertices, bound {out.bound}, certificate index {w.index}")
    out = reduce_vertexcover_rulebase(p3, 1, cover=[1])
    w = verify_sds(out.instance, out.seeds, RT, 1)
    print(f"vertex cover (one round), P3: {len(out.graph)} vertices, bound {out.bound}, "
          f"{len(w.set)} seeds in {w.rounds} round")


if __name__ == "__main__":
    main()
