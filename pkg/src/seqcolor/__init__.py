"""Rule-based sequential graph coloring.

A solver scans an ordered graph vertex by vertex and shrinks color lists with
local rules (Tucker's clique rules, optionally a greedy fallback).  Around it:
exhaustive search for small seed sets that force a coloring, gadget families
and reductions built from them, and brute-force oracles to check it all.
"""

from .defining_sets import SdsOutcome, SdsWitness, ssdn, verify_sds, wsdn
from .engine import OrderedListGraph, SolveResult, Solver, coloring_closure, is_solvable, lists_from_defining_set, solve
from .gadgets import build_D, build_F, build_G_xi, build_H, reduce_3col, reduce_vertexcover_rulebase, reduce_vertexcover_sds
from .graph import Graph, MarkedGraph, OrderedColoredGraph, amalgam, ball, clique, edge, enumerate_embeddings, induced_subgraph
from .rules import RuleBase, greedy, preset, tucker1, tucker2, validate_rule

__all__ = [
    "Graph", "MarkedGraph", "OrderedColoredGraph", "amalgam", "ball", "clique", "edge",
    "enumerate_embeddings", "induced_subgraph",
    "RuleBase", "greedy", "preset", "tucker1", "tucker2", "validate_rule",
    "OrderedListGraph", "SolveResult", "Solver", "coloring_closure", "is_solvable",
    "lists_from_defining_set", "solve",
    "SdsOutcome", "SdsWitness", "ssdn", "verify_sds", "wsdn",
    "build_D", "build_F", "build_G_xi", "build_H", "reduce_3col",
    "reduce_vertexcover_rulebase", "reduce_vertexcover_sds",
]
