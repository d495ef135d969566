"""Walk through the 8-vertex uniquely 3-colorable example.

Seeds v1..v4 with colors 1, 2, 3, 1 and runs the Tucker rule-base, printing
every list change as it happens.
"""

from seqcolor import oracle
from seqcolor.engine import Solver, lists_from_defining_set
from seqcolor.graph import Graph
from seqcolor.rules import preset

EDGES = [(1, 2), (2, 4), (4, 3), (3, 2), (1, 3), (3, 8), (8, 7), (7, 5), (5, 6), (6, 8), (7, 6), (6, 4), (1, 5)]
COLORING = {1: 1, 2: 2, 3: 3, 4: 1, 5: 2, 6: 3, 7: 1, 8: 2}


def main():
    g = Graph(range(1, 9), EDGES)
    print(f"{len(oracle.colorings(g, 3))} proper 3-colorings, {len(oracle.partitions(g, 3))} partition")
    lists = lists_from_defining_set(g, COLORING, [1, 2, 3, 4], 3)
    res = Solver(g, {v: v for v in g.vertices}, preset("RT")).solve(lists)
    for i, changes in enumerate(res.trace, start=1):
        print(f"round {i}")
        for c in changes:
            print(f"  v{c.vertex}: {sorted(c.old)} -> {sorted(c.new)}  by {c.rule}")
    print(f"{res.status} after {res.rounds} rounds: {res.coloring}")


if __name__ == "__main__":
    main()
