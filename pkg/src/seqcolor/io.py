"""JSON instance documents and DOT export.

A document looks like::

    {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3]],
     "ordering": {"1": 1, ...}, "lists": {"1": [1, 2], ...},
     "coloring": {"1": 1, ...}, "marks": {"u": 1, ...},
     "rulebase": "RT", "k": 2, "xi": 3}

Vertices may be integers or strings.  String vertices become integer ids in
listed order and are recorded as marks, so they can be referred to by name.
Object keys may name a vertex by id or by mark.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .graph import Graph, GraphError, default_ordering, validate_ordering

log = logging.getLogger(__name__)

_VERTEX = {"type": ["integer", "string"]}
SCHEMA = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {"type": "array", "items": _VERTEX},
        "edges": {"type": "array", "items": {"type": "array", "items": _VERTEX, "minItems": 2, "maxItems": 2}},
        "ordering": {"type": "object", "additionalProperties": {"type": "integer"}},
        "lists": {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "integer"}}},
        "coloring": {"type": "object", "additionalProperties": {"type": "integer"}},
        "marks": {"type": "object", "additionalProperties": {"type": "integer"}},
        "palette": {"type": "integer", "minimum": 1},
        "rulebase": {"type": ["string", "object"]},
        "k": {"type": ["integer", "null"], "minimum": 1},
        "xi": {"type": "integer", "minimum": 0},
    },
}


class DocumentError(ValueError):
    """The document is not a valid instance."""


@dataclass
class Instance:
    graph: Graph
    ordering: dict[int, int]
    marks: dict[str, int] = field(default_factory=dict)
    lists: dict[int, frozenset[int]] | None = None
    coloring: dict[int, int] | None = None
    palette: int = 3
    rulebase: Any = None
    k: int | None = None
    xi: int | None = None
    ordering_given: bool = True

    def resolve(self, ref: str | int) -> int:
        """A vertex id from an id, a numeric string, or a mark label."""
        if isinstance(ref, int) and ref in self.graph.vertices:
            return ref
        key = str(ref)
        if key in self.marks:
            return self.marks[key]
        try:
            v = int(key)
        except ValueError:
            raise DocumentError(f"unknown vertex {ref!r}") from None
        if v not in self.graph.vertices:
            raise DocumentError(f"unknown vertex {ref!r}")
        return v

    def resolve_all(self, refs) -> frozenset[int]:
        return frozenset(self.resolve(r) for r in refs)


def parse(doc: Mapping) -> Instance:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        raise DocumentError(f"schema violation at {list(e.absolute_path)}: {e.message}") from None
    raw = list(doc["vertices"])
    if len(set(map(str, raw))) != len(raw):
        raise DocumentError("vertex ids must be distinct")
    marks: dict[str, int] = {}
    if all(isinstance(v, int) for v in raw):
        ids = {v: v for v in raw}
    else:
        ids = {v: i for i, v in enumerate(raw)}
        marks = {str(v): i for v, i in ids.items()}
    by_name = {str(k): v for k, v in ids.items()}
    for lab, v in doc.get("marks", {}).items():
        if v not in ids.values():
            raise DocumentError(f"mark {lab!r} points at unknown vertex {v}")
        marks[lab] = v

    def vid(ref) -> int:
        key = str(ref)
        if key in by_name:
            return by_name[key]
        if key in marks:
            return marks[key]
        raise DocumentError(f"unknown vertex {ref!r}")

    try:
        g = Graph(ids.values(), [(vid(a), vid(b)) for a, b in doc["edges"]])
    except GraphError as e:
        raise DocumentError(str(e)) from None
    given = "ordering" in doc
    if given:
        ordering = {vid(k): r for k, r in doc["ordering"].items()}
        try:
            ordering = validate_ordering(g, ordering)
        except GraphError as e:
            raise DocumentError(str(e)) from None
    else:
        # insertion order of the vertex list
        ordering = {ids[v]: i for i, v in enumerate(raw, start=1)} if raw else default_ordering(g)
        log.warning("no ordering given; using the order of the vertex list")
    palette = int(doc.get("palette", 3))
    lists = None
    if "lists" in doc:
        lists = {v: frozenset(range(1, palette + 1)) for v in g.vertices}
        for k, lst in doc["lists"].items():
            lists[vid(k)] = frozenset(lst)
            if not lists[vid(k)] <= set(range(1, palette + 1)):
                raise DocumentError(f"list of {k!r} has colors outside 1..{palette}")
    coloring = None
    if "coloring" in doc:
        coloring = {vid(k): c for k, c in doc["coloring"].items()}
        if set(coloring) != g.vertices:
            raise DocumentError("coloring must assign every vertex")
        if not all(1 <= c <= palette for c in coloring.values()):
            raise DocumentError(f"coloring uses colors outside 1..{palette}")
    return Instance(g, ordering, marks, lists, coloring, palette, doc.get("rulebase"),
                    doc.get("k"), doc.get("xi"), given)


def load(path: str) -> Instance:
    try:
        if path == "-":
            import sys
            doc = json.load(sys.stdin)
        else:
            with open(path) as fh:
                doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise DocumentError(f"malformed JSON: {e}") from None
    if not isinstance(doc, dict):
        raise DocumentError("an instance document must be a JSON object")
    return parse(doc)


def to_document(
    g: Graph,
    ordering: Mapping[int, int] | None = None,
    coloring: Mapping[int, int] | None = None,
    lists: Mapping[int, frozenset[int]] | None = None,
    marks: Mapping[str, int] | None = None,
    **extra,
) -> dict:
    doc: dict[str, Any] = {
        "vertices": sorted(g.vertices),
        "edges": [list(e) for e in g.sorted_edges()],
    }
    if ordering is not None:
        doc["ordering"] = {str(v): ordering[v] for v in sorted(ordering)}
    if lists is not None:
        doc["lists"] = {str(v): sorted(lists[v]) for v in sorted(lists)}
    if coloring is not None:
        doc["coloring"] = {str(v): coloring[v] for v in sorted(coloring)}
    if marks:
        doc["marks"] = {lab: marks[lab] for lab in sorted(marks, key=lambda lab: (marks[lab], lab))}
    doc.update({k: v for k, v in extra.items() if v is not None})
    return doc


def dumps(doc: Any) -> str:
    """Stable JSON text: fixed key order as built, two-space indent."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


_FILL = {1: "#e41a1c", 2: "#4daf4a", 3: "#377eb8", 4: "#984ea3", 5: "#ff7f00", 6: "#ffff33"}


def to_dot(
    g: Graph,
    ordering: Mapping[int, int] | None = None,
    coloring: Mapping[int, int] | None = None,
    marks: Mapping[str, int] | None = None,
    name: str = "G",
) -> str:
    """Graphviz text; ranks go in the labels, colors become fill colors."""
    names = {v: str(v) for v in g.vertices}
    for lab, v in (marks or {}).items():
        names[v] = lab
    order = sorted(g.vertices, key=(ordering or {}).get) if ordering else sorted(g.vertices)
    lines = [f"graph {json.dumps(name)} {{", "  node [style=filled, fillcolor=white];"]
    for v in order:
        label = names[v] if ordering is None else f"{names[v]} ({ordering[v]})"
        attrs = [f"label={json.dumps(label)}"]
        if coloring is not None and v in coloring:
            attrs.append(f"fillcolor={json.dumps(_FILL.get(coloring[v], 'gray'))}")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for a, b in g.sorted_edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
