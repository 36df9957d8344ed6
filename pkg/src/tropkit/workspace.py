"""Workspace files: graphs, divisors, systems, and tropical point sets.

A workspace is a single JSON document.  Graph workspaces carry vertices,
edges, named divisors, and named systems (lists of divisor names); point
workspaces carry a ground set with weights, named points, and named
generator sets.  One file may carry both blocks.

All rationals are encoded as JSON integers or as strings "p/q" with q > 0
(or a bare integer string).  Floats are rejected: the toolkit is exact.
Serialization is canonical; parsing a file, serializing it, and parsing
again yields the same workspace, and serialization output is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .divisors import LinearSystem
from .errors import InputError
from .graphs import ClosedSubset, Divisor, GraphPoint, MetricGraph, mg_validate
from .tropical import GroundSpace, TropGeneratorSet, TropPoint

__all__ = [
    "Workspace",
    "divisor_from_json",
    "dumps_canonical",
    "load_workspace",
    "parse_rational",
    "parse_workspace",
    "point_from_json",
    "rational_str",
    "serialize_workspace",
    "to_jsonable",
]

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# rationals


def parse_rational(value, location: str) -> Fraction:
    """Exact rational from a JSON value: integer, "p/q" string, or integer
    string."""
    if isinstance(value, bool):
        raise InputError("expected a rational, got a boolean", location)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InputError(
            "floats are not accepted; write rationals as \"p/q\" strings",
            location)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {value!r}", location) from None
    raise InputError(f"expected a rational, got {type(value).__name__}",
                     location)


def rational_str(value: Fraction) -> str:
    """Canonical string form: lowest terms, "p" or "p/q" with q > 0."""
    return str(Fraction(value))


# ---------------------------------------------------------------------------
# parsing helpers


def _expect(data, types, what: str, location: str):
    if not isinstance(data, types):
        names = types.__name__ if isinstance(types, type) else \
            "/".join(t.__name__ for t in types)
        raise InputError(f"{what} must be a {names}, "
                         f"got {type(data).__name__}", location)
    return data


def point_from_json(graph: MetricGraph, data, location: str) -> GraphPoint:
    """Graph point from {"vertex": name} or {"edge": id, "offset": r}."""
    _expect(data, dict, "a point", location)
    extra = set(data) - {"vertex", "edge", "offset"}
    if extra:
        raise InputError(f"unknown point fields: {sorted(extra)}", location)
    if "vertex" in data:
        if "edge" in data or "offset" in data:
            raise InputError("a point is either a vertex or an edge "
                             "position, not both", location)
        name = _expect(data["vertex"], str, "vertex", f"{location}.vertex")
        try:
            return graph.vertex_point(name)
        except InputError as exc:
            raise InputError(str(exc), f"{location}.vertex") from None
    if "edge" not in data or "offset" not in data:
        raise InputError("a point needs either \"vertex\" or both \"edge\" "
                         "and \"offset\"", location)
    eid = _expect(data["edge"], str, "edge id", f"{location}.edge")
    offset = parse_rational(data["offset"], f"{location}.offset")
    try:
        return graph.point(edge=eid, offset=offset)
    except InputError as exc:
        raise InputError(str(exc), location) from None


def divisor_from_json(graph: MetricGraph, data, location: str) -> Divisor:
    """Divisor from [[point, coefficient], ...]."""
    _expect(data, list, "a divisor", location)
    pairs = []
    for i, entry in enumerate(data):
        here = f"{location}[{i}]"
        _expect(entry, list, "a divisor entry", here)
        if len(entry) != 2:
            raise InputError("a divisor entry is a [point, coefficient] "
                             "pair", here)
        point = point_from_json(graph, entry[0], here)
        coeff = parse_rational(entry[1], f"{here}[1]")
        pairs.append((point, coeff))
    return Divisor.of(graph, pairs)


# ---------------------------------------------------------------------------
# the workspace


@dataclass
class Workspace:
    """Parsed workspace: at most one graph block and one point block."""

    graph: MetricGraph | None = None
    graph_report: dict | None = None
    divisors: dict[str, Divisor] = field(default_factory=dict)
    systems: dict[str, tuple[str, ...]] = field(default_factory=dict)
    space: GroundSpace | None = None
    points: dict[str, TropPoint] = field(default_factory=dict)
    sets: dict[str, tuple[str, ...]] = field(default_factory=dict)
    _system_cache: dict[str, LinearSystem] = field(default_factory=dict)

    def need_graph(self) -> MetricGraph:
        if self.graph is None:
            raise InputError("this workspace has no graph block")
        return self.graph

    def divisor(self, name: str) -> Divisor:
        if name not in self.divisors:
            raise InputError(f"unknown divisor {name!r} (known: "
                             f"{sorted(self.divisors)})", "divisors")
        return self.divisors[name]

    def system(self, name: str) -> LinearSystem:
        if name not in self.systems:
            raise InputError(f"unknown system {name!r} (known: "
                             f"{sorted(self.systems)})", "systems")
        if name not in self._system_cache:
            gens = [self.divisor(d) for d in self.systems[name]]
            self._system_cache[name] = LinearSystem(self.need_graph(), gens)
        return self._system_cache[name]

    def need_space(self) -> GroundSpace:
        if self.space is None:
            raise InputError("this workspace has no point block")
        return self.space

    def point(self, name: str) -> TropPoint:
        if name not in self.points:
            raise InputError(f"unknown point {name!r} (known: "
                             f"{sorted(self.points)})", "points")
        return self.points[name]

    def generator_set(self, name: str, mode: str = "lower") -> TropGeneratorSet:
        if name not in self.sets:
            raise InputError(f"unknown point set {name!r} (known: "
                             f"{sorted(self.sets)})", "sets")
        return TropGeneratorSet.of(
            [self.point(p) for p in self.sets[name]], mode)


def parse_workspace(data, location: str = "workspace") -> Workspace:
    """Validate and build a workspace from decoded JSON."""
    _expect(data, dict, "a workspace", location)
    known = {"schema_version", "vertices", "edges", "divisors", "systems",
             "ground", "weights", "points", "sets"}
    extra = set(data) - known
    if extra:
        raise InputError(f"unknown workspace fields: {sorted(extra)}",
                         location)
    version = data.get("schema_version")
    if version is None:
        raise InputError("missing schema_version", location)
    if version != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {version!r}",
                         f"{location}.schema_version")

    ws = Workspace()
    has_graph = "vertices" in data or "edges" in data
    if has_graph:
        vertices = _expect(data.get("vertices", []), list, "vertices",
                           f"{location}.vertices")
        edges_raw = _expect(data.get("edges", []), list, "edges",
                            f"{location}.edges")
        edges = []
        for i, e in enumerate(edges_raw):
            here = f"{location}.edges[{i}]"
            _expect(e, dict, "an edge", here)
            missing = {"id", "tail", "head", "length"} - set(e)
            if missing:
                raise InputError(f"edge missing fields {sorted(missing)}",
                                 here)
            extra = set(e) - {"id", "tail", "head", "length"}
            if extra:
                raise InputError(f"unknown edge fields {sorted(extra)}", here)
            edges.append((
                _expect(e["id"], str, "edge id", f"{here}.id"),
                _expect(e["tail"], str, "edge tail", f"{here}.tail"),
                _expect(e["head"], str, "edge head", f"{here}.head"),
                parse_rational(e["length"], f"{here}.length"),
            ))
        try:
            graph, report = mg_validate(
                [_expect(v, str, "a vertex name", f"{location}.vertices")
                 for v in vertices], edges)
        except InputError as exc:
            if not exc.location:
                raise InputError(str(exc), location) from None
            raise
        ws.graph = graph
        ws.graph_report = report

        divisors = _expect(data.get("divisors", {}), dict, "divisors",
                           f"{location}.divisors")
        for name in sorted(divisors):
            ws.divisors[str(name)] = divisor_from_json(
                graph, divisors[name], f"{location}.divisors.{name}")
        systems = _expect(data.get("systems", {}), dict, "systems",
                          f"{location}.systems")
        for name in sorted(systems):
            here = f"{location}.systems.{name}"
            members = _expect(systems[name], list, "a system", here)
            for d in members:
                if d not in ws.divisors:
                    raise InputError(f"system {name!r} references unknown "
                                     f"divisor {d!r}", here)
            ws.systems[str(name)] = tuple(str(d) for d in members)
    elif "divisors" in data or "systems" in data:
        raise InputError("divisors and systems need a graph block",
                         location)

    has_points = "ground" in data or "points" in data
    if has_points:
        ground = _expect(data.get("ground"), list, "ground labels",
                         f"{location}.ground")
        labels = [_expect(x, str, "a ground label", f"{location}.ground")
                  for x in ground]
        weights = None
        if "weights" in data:
            raw = _expect(data["weights"], list, "weights",
                          f"{location}.weights")
            if len(raw) != len(labels):
                raise InputError("need exactly one weight per ground "
                                 "element", f"{location}.weights")
            weights = [parse_rational(w, f"{location}.weights[{i}]")
                       for i, w in enumerate(raw)]
        try:
            ws.space = GroundSpace.of(labels, weights)
        except InputError as exc:
            raise InputError(str(exc), f"{location}.ground") from None
        points = _expect(data.get("points", {}), dict, "points",
                         f"{location}.points")
        for name in sorted(points):
            here = f"{location}.points.{name}"
            coords = _expect(points[name], list, "a point", here)
            if len(coords) != len(labels):
                raise InputError("point dimension does not match the "
                                 "ground set", here)
            ws.points[str(name)] = TropPoint.of(
                [parse_rational(c, f"{here}[{i}]")
                 for i, c in enumerate(coords)])
        sets = _expect(data.get("sets", {}), dict, "sets",
                       f"{location}.sets")
        for name in sorted(sets):
            here = f"{location}.sets.{name}"
            members = _expect(sets[name], list, "a point set", here)
            for p in members:
                if p not in ws.points:
                    raise InputError(f"set {name!r} references unknown "
                                     f"point {p!r}", here)
            ws.sets[str(name)] = tuple(str(p) for p in members)
    elif "weights" in data or "sets" in data:
        raise InputError("weights and sets need a ground block", location)

    if not has_graph and not has_points:
        raise InputError("a workspace needs a graph block or a point block",
                         location)
    return ws


def load_workspace(path: str) -> Workspace:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}", path) \
            from None
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}",
                         f"{path}:{exc.lineno}:{exc.colno}") from None
    return parse_workspace(data, path)


def _reject_float(text: str):
    raise InputError(
        f"floats are not accepted; write {text!r} as a \"p/q\" string",
        "number")


# ---------------------------------------------------------------------------
# canonical serialization


def to_jsonable(obj):
    """Canonical JSON-ready form of library values.

    Rationals become canonical strings, points and divisors their file
    encodings, sets and maps sorted containers. Used both by the workspace
    serializer and by command-line reports.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, GraphPoint):
        if obj.is_vertex:
            return {"vertex": obj.vertex}
        return {"edge": obj.edge, "offset": rational_str(obj.offset)}
    if isinstance(obj, Divisor):
        return [[to_jsonable(p), rational_str(c)] for p, c in obj.items()]
    if isinstance(obj, TropPoint):
        return [rational_str(c) for c in obj.coords]
    if isinstance(obj, TropGeneratorSet):
        return {"mode": obj.mode,
                "points": [to_jsonable(p) for p in obj.points]}
    if isinstance(obj, ClosedSubset):
        return {
            "vertices": sorted(obj.vertices),
            "intervals": {
                eid: [[rational_str(a), rational_str(b)] for a, b in segs]
                for eid, segs in sorted(obj.intervals.items())},
        }
    if isinstance(obj, frozenset):
        return sorted(to_jsonable(x) for x in obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {name: to_jsonable(getattr(obj, name))
                for name in obj.__dataclass_fields__}
    return str(obj)


def _original_graph_shape(graph: MetricGraph):
    """Vertex and edge lists as they stood before loop splitting."""
    first_half = {a: (orig, b) for orig, (a, b, _) in
                  graph.loop_aliases.items()}
    second_half = {b for _, (_, b, _) in graph.loop_aliases.items()}
    midpoints = {graph.edge_map[a].head
                 for a, _, _ in graph.loop_aliases.values()}
    vertices = [v for v in graph.vertices if v not in midpoints]
    edges = []
    for e in graph.edges:
        if e.id in first_half:
            orig, b_id = first_half[e.id]
            other = graph.edge_map[b_id]
            edges.append({"id": orig, "tail": e.tail, "head": other.head,
                          "length": rational_str(e.length + other.length)})
        elif e.id not in second_half:
            edges.append({"id": e.id, "tail": e.tail, "head": e.head,
                          "length": rational_str(e.length)})
    return vertices, edges


def serialize_workspace(ws: Workspace) -> dict:
    """Canonical file form of a workspace."""
    out: dict = {"schema_version": SCHEMA_VERSION}
    if ws.graph is not None:
        vertices, edges = _original_graph_shape(ws.graph)
        out["vertices"] = vertices
        out["edges"] = edges
        out["divisors"] = {name: to_jsonable(d)
                           for name, d in sorted(ws.divisors.items())}
        out["systems"] = {name: list(members)
                          for name, members in sorted(ws.systems.items())}
    if ws.space is not None:
        out["ground"] = list(ws.space.labels)
        out["weights"] = [rational_str(w) for w in ws.space.weights]
        out["points"] = {name: to_jsonable(p)
                         for name, p in sorted(ws.points.items())}
        out["sets"] = {name: list(members)
                       for name, members in sorted(ws.sets.items())}
    return out


def dumps_canonical(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"
