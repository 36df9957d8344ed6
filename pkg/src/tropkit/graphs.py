"""Compact connected metric graphs and exact piecewise-linear calculus.

A graph is a finite set of vertices joined by edges of positive rational
length; parallel edges are allowed, and loop edges are split at their
midpoint on construction so every edge the solvers see has two distinct
endpoints. Points are either vertices or interior positions (edge, offset).

The module provides piecewise-linear functions with rational breakpoints,
their divisors (sum of incoming slopes at every point), closed subsets as
per-edge interval systems, exact electrical potentials (Kirchhoff solves
over the rationals), and the derived influence functions and resistances.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .tropical import as_fraction

__all__ = [
    "Edge",
    "MetricGraph",
    "GraphPoint",
    "PLFunction",
    "Divisor",
    "ClosedSubset",
    "mg_validate",
    "mg_distance",
    "mg_potential",
    "mg_jfunction",
    "mg_resistance",
    "pl_eval",
    "pl_div",
    "pl_extremum_set",
    "pl_integral",
]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction


@dataclass(frozen=True)
class GraphPoint:
    """A point of the graph: a vertex, or an interior position on an edge."""

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def key(self) -> tuple:
        if self.is_vertex:
            return ("v", self.vertex, Fraction(0))
        return ("e", self.edge, self.offset)

    def __str__(self) -> str:
        if self.is_vertex:
            return self.vertex
        return f"{self.edge}@{self.offset}"


class MetricGraph:
    """Validated compact connected metric graph."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge],
                 loop_aliases: dict | None = None):
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        # original loop edge id -> (first half id, second half id, half length)
        self.loop_aliases: dict[str, tuple[str, str, Fraction]] = loop_aliases or {}
        self.edge_map: dict[str, Edge] = {e.id: e for e in self.edges}
        self._validate()
        self.incidence: dict[str, tuple[tuple[str, int], ...]] = self._build_incidence()
        self.total_length: Fraction = sum((e.length for e in self.edges), Fraction(0))

    # -- construction ------------------------------------------------------

    @classmethod
    def of(cls, vertices: Iterable[str], edges: Iterable) -> "MetricGraph":
        """Build from (id, tail, head, length) tuples, splitting loops."""
        verts = [str(v) for v in vertices]
        out: list[Edge] = []
        aliases: dict[str, tuple[str, str, Fraction]] = {}
        for entry in edges:
            eid, tail, head, length = entry
            length = as_fraction(length)
            if length <= 0:
                raise InputError(f"edge {eid!r} must have positive length")
            if tail == head:
                mid = f"{eid}:mid"
                if mid in verts:
                    raise InputError(f"vertex name {mid!r} collides with loop split")
                verts.append(mid)
                half = length / 2
                out.append(Edge(f"{eid}:a", tail, mid, half))
                out.append(Edge(f"{eid}:b", mid, head, half))
                aliases[str(eid)] = (f"{eid}:a", f"{eid}:b", half)
            else:
                out.append(Edge(str(eid), str(tail), str(head), length))
        return cls(verts, out, aliases)

    def _validate(self) -> None:
        if not self.vertices:
            raise InputError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("vertex names must be distinct")
        if len(self.edge_map) != len(self.edges):
            raise InputError("edge ids must be distinct")
        if not self.edges:
            raise InputError("graph needs at least one edge")
        vs = set(self.vertices)
        for e in self.edges:
            if e.tail not in vs or e.head not in vs:
                raise InputError(f"edge {e.id!r} references an unknown vertex")
            if e.tail == e.head:
                raise InputError(f"edge {e.id!r} is a loop after normalization")
            if e.length <= 0:
                raise InputError(f"edge {e.id!r} must have positive length")
        # connectivity
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            adj[e.tail].add(e.head)
            adj[e.head].add(e.tail)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != vs:
            raise InputError("graph must be connected")

    def _build_incidence(self) -> dict[str, tuple[tuple[str, int], ...]]:
        inc: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.tail].append((e.id, 0))
            inc[e.head].append((e.id, 1))
        return {v: tuple(arms) for v, arms in inc.items()}

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    # -- points ------------------------------------------------------------

    def point(self, vertex: str | None = None, edge: str | None = None,
              offset=None) -> GraphPoint:
        """Build a normalized point (endpoint offsets collapse to vertices)."""
        if vertex is not None:
            if vertex not in self.incidence:
                raise InputError(f"unknown vertex {vertex!r}")
            return GraphPoint(vertex=vertex)
        if edge is None or offset is None:
            raise InputError("a point needs a vertex, or an edge and an offset")
        offset = as_fraction(offset)
        if edge in self.loop_aliases:
            a, b, half = self.loop_aliases[edge]
            if offset <= half:
                edge = a
            else:
                edge, offset = b, offset - half
        e = self.edge_map.get(edge)
        if e is None:
            raise InputError(f"unknown edge {edge!r}")
        if not (0 <= offset <= e.length):
            raise InputError(f"offset {offset} outside [0, {e.length}] on edge {edge!r}")
        if offset == 0:
            return GraphPoint(vertex=e.tail)
        if offset == e.length:
            return GraphPoint(vertex=e.head)
        return GraphPoint(edge=edge, offset=offset)

    def vertex_point(self, name: str) -> GraphPoint:
        return self.point(vertex=name)


def mg_validate(vertices: Iterable[str], edges: Iterable):
    """Construct and validate a graph; returns (graph, report)."""
    g = MetricGraph.of(vertices, edges)
    report = {
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "genus": g.genus,
        "total_length": g.total_length,
        "loops_subdivided": sorted(g.loop_aliases),
        "connected": True,
    }
    return g, report


# ---------------------------------------------------------------------------
# piecewise-linear functions
# ---------------------------------------------------------------------------

class PLFunction:
    """Continuous piecewise-linear function with rational breakpoints.

    data maps every edge id to a tuple of (offset, value) breakpoints with
    strictly increasing offsets running from 0 to the edge length; values
    at shared vertices must agree across edges.
    """

    __slots__ = ("graph", "data", "vertex_values")

    def __init__(self, graph: MetricGraph, data: dict):
        self.graph = graph
        self.data = {eid: _simplify(tuple((as_fraction(o), as_fraction(v)) for o, v in bps))
                     for eid, bps in data.items()}
        self._validate()
        self.vertex_values = {v: None for v in graph.vertices}
        for e in graph.edges:
            bps = self.data[e.id]
            for vname, val in ((e.tail, bps[0][1]), (e.head, bps[-1][1])):
                known = self.vertex_values[vname]
                if known is None:
                    self.vertex_values[vname] = val
                elif known != val:
                    raise InputError(f"discontinuity at vertex {vname!r}")

    def _validate(self) -> None:
        for e in self.graph.edges:
            bps = self.data.get(e.id)
            if not bps:
                raise InputError(f"missing data for edge {e.id!r}")
            offs = [o for o, _ in bps]
            if offs[0] != 0 or offs[-1] != e.length:
                raise InputError(f"breakpoints of edge {e.id!r} must span [0, length]")
            if any(a >= b for a, b in zip(offs, offs[1:])):
                raise InputError(f"breakpoints of edge {e.id!r} must increase")
        if set(self.data) != set(self.graph.edge_map):
            raise InputError("function must cover exactly the graph's edges")

    # -- evaluation --------------------------------------------------------

    @classmethod
    def constant(cls, graph: MetricGraph, value) -> "PLFunction":
        value = as_fraction(value)
        return cls(graph, {e.id: ((Fraction(0), value), (e.length, value))
                           for e in graph.edges})

    @classmethod
    def from_node_values(cls, graph: MetricGraph, vertex_vals: dict,
                         cuts: dict | None = None) -> "PLFunction":
        """Linear on each edge segment between vertices and given cut points.

        cuts maps edge id to a list of (interior offset, value) pairs.
        """
        cuts = cuts or {}
        data = {}
        for e in graph.edges:
            mids = sorted(cuts.get(e.id, ()))
            bps = [(Fraction(0), as_fraction(vertex_vals[e.tail]))]
            bps += [(as_fraction(o), as_fraction(v)) for o, v in mids]
            bps += [(e.length, as_fraction(vertex_vals[e.head]))]
            data[e.id] = tuple(bps)
        return cls(graph, data)

    def eval(self, point: GraphPoint) -> Fraction:
        if point.is_vertex:
            return self.vertex_values[point.vertex]
        bps = self.data[point.edge]
        offs = [o for o, _ in bps]
        i = bisect_right(offs, point.offset) - 1
        if i == len(bps) - 1:
            return bps[-1][1]
        (o1, v1), (o2, v2) = bps[i], bps[i + 1]
        return v1 + (v2 - v1) * (point.offset - o1) / (o2 - o1)

    # -- pointwise arithmetic ----------------------------------------------

    def _zip(self, other: "PLFunction", fn) -> "PLFunction":
        data = {}
        for e in self.graph.edges:
            offs = sorted({o for o, _ in self.data[e.id]} | {o for o, _ in other.data[e.id]})
            pts = [GraphPoint(edge=e.id, offset=o) if 0 < o < e.length
                   else GraphPoint(vertex=e.tail if o == 0 else e.head) for o in offs]
            data[e.id] = tuple((o, fn(self.eval(p), other.eval(p)))
                               for o, p in zip(offs, pts))
        return PLFunction(self.graph, data)

    def add(self, other: "PLFunction") -> "PLFunction":
        return self._zip(other, lambda a, b: a + b)

    def sub(self, other: "PLFunction") -> "PLFunction":
        return self._zip(other, lambda a, b: a - b)

    def neg(self) -> "PLFunction":
        return PLFunction(self.graph, {eid: tuple((o, -v) for o, v in bps)
                                       for eid, bps in self.data.items()})

    def add_const(self, c) -> "PLFunction":
        c = as_fraction(c)
        return PLFunction(self.graph, {eid: tuple((o, v + c) for o, v in bps)
                                       for eid, bps in self.data.items()})

    def min_with(self, other: "PLFunction") -> "PLFunction":
        """Pointwise minimum, inserting crossing breakpoints exactly."""
        data = {}
        for e in self.graph.edges:
            offs = sorted({o for o, _ in self.data[e.id]} | {o for o, _ in other.data[e.id]})
            vals_a = [self._eval_on(e, o) for o in offs]
            vals_b = [other._eval_on(e, o) for o in offs]
            bps: list[tuple[Fraction, Fraction]] = []
            for k in range(len(offs)):
                bps.append((offs[k], min(vals_a[k], vals_b[k])))
                if k + 1 < len(offs):
                    d1 = vals_a[k] - vals_b[k]
                    d2 = vals_a[k + 1] - vals_b[k + 1]
                    if (d1 > 0 > d2) or (d1 < 0 < d2):
                        o_star = offs[k] + (offs[k + 1] - offs[k]) * d1 / (d1 - d2)
                        v_star = vals_a[k] + (vals_a[k + 1] - vals_a[k]) \
                            * (o_star - offs[k]) / (offs[k + 1] - offs[k])
                        bps.append((o_star, v_star))
            data[e.id] = tuple(bps)
        return PLFunction(self.graph, data)

    def clip_max(self, c) -> "PLFunction":
        """Pointwise min(f, c) for a constant c."""
        return self.min_with(PLFunction.constant(self.graph, c))

    def _eval_on(self, e: Edge, offset: Fraction) -> Fraction:
        if offset == 0:
            return self.data[e.id][0][1]
        if offset == e.length:
            return self.data[e.id][-1][1]
        return self.eval(GraphPoint(edge=e.id, offset=offset))

    # -- global quantities ---------------------------------------------------

    def min_value(self) -> Fraction:
        return min(v for bps in self.data.values() for _, v in bps)

    def max_value(self) -> Fraction:
        return max(v for bps in self.data.values() for _, v in bps)

    def minus_min(self) -> "PLFunction":
        return self.add_const(-self.min_value())

    def spread(self) -> Fraction:
        return self.max_value() - self.min_value()

    def integral(self) -> Fraction:
        """Integral against the length measure (trapezoid rule is exact)."""
        total = Fraction(0)
        for bps in self.data.values():
            for (o1, v1), (o2, v2) in zip(bps, bps[1:]):
                total += (v1 + v2) * (o2 - o1) / 2
        return total

    def slopes_integer(self) -> bool:
        for bps in self.data.values():
            for (o1, v1), (o2, v2) in zip(bps, bps[1:]):
                s = (v2 - v1) / (o2 - o1)
                if s.denominator != 1:
                    return False
        return True

    def breakpoint_values(self) -> list[Fraction]:
        return sorted({v for bps in self.data.values() for _, v in bps})

    def divisor(self) -> "Divisor":
        """Sum of incoming slopes at every point (supported on breakpoints)."""
        acc: dict[tuple, Fraction] = {}

        def bump(point: GraphPoint, val: Fraction):
            if val == 0:
                return
            k = point.key()
            acc[k] = acc.get(k, Fraction(0)) + val

        vertex_sum: dict[str, Fraction] = {v: Fraction(0) for v in self.graph.vertices}
        points: dict[tuple, GraphPoint] = {}
        for e in self.graph.edges:
            bps = self.data[e.id]
            slopes = [(v2 - v1) / (o2 - o1) for (o1, v1), (o2, v2) in zip(bps, bps[1:])]
            vertex_sum[e.tail] -= slopes[0]
            vertex_sum[e.head] += slopes[-1]
            for k in range(1, len(bps) - 1):
                p = GraphPoint(edge=e.id, offset=bps[k][0])
                points[p.key()] = p
                bump(p, slopes[k - 1] - slopes[k])
        for v, s in vertex_sum.items():
            p = GraphPoint(vertex=v)
            points[p.key()] = p
            bump(p, s)
        return Divisor(self.graph, {points[k]: val for k, val in acc.items() if val != 0})

    def extremum_set(self, which: str = "min") -> "ClosedSubset":
        """Closed locus where the global minimum (or maximum) is attained."""
        target = self.min_value() if which == "min" else self.max_value()
        vertices = {v for v, val in self.vertex_values.items() if val == target}
        intervals: dict[str, list[tuple[Fraction, Fraction]]] = {}
        for e in self.graph.edges:
            bps = self.data[e.id]
            segs: list[tuple[Fraction, Fraction]] = []
            for (o1, v1), (o2, v2) in zip(bps, bps[1:]):
                if v1 == target and v2 == target:
                    segs.append((o1, o2))
                elif v1 == target:
                    segs.append((o1, o1))
            if bps[-1][1] == target:
                segs.append((bps[-1][0], bps[-1][0]))
            if segs:
                intervals[e.id] = segs
        return ClosedSubset(self.graph, vertices, intervals)


def _simplify(bps: tuple) -> tuple:
    """Drop interior breakpoints where the slope does not change."""
    if len(bps) <= 2:
        return bps
    out = [bps[0]]
    for k in range(1, len(bps) - 1):
        (o1, v1), (o2, v2), (o3, v3) = out[-1], bps[k], bps[k + 1]
        if (v2 - v1) * (o3 - o2) == (v3 - v2) * (o2 - o1):
            continue
        out.append(bps[k])
    out.append(bps[-1])
    return tuple(out)


def pl_eval(f: PLFunction, point: GraphPoint) -> Fraction:
    return f.eval(point)


def pl_div(f: PLFunction) -> "Divisor":
    return f.divisor()


def pl_extremum_set(f: PLFunction, which: str = "min") -> "ClosedSubset":
    if which not in ("min", "max"):
        raise InputError(f"which must be 'min' or 'max', got {which!r}")
    return f.extremum_set(which)


def pl_integral(f: PLFunction) -> Fraction:
    return f.integral()


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

class Divisor:
    """Finite formal sum of points with rational coefficients."""

    __slots__ = ("graph", "entries")

    def __init__(self, graph: MetricGraph, entries: dict):
        self.graph = graph
        self.entries: dict[GraphPoint, Fraction] = {
            p: as_fraction(c) for p, c in entries.items() if c != 0}

    @classmethod
    def of(cls, graph: MetricGraph, pairs: Iterable) -> "Divisor":
        acc: dict[GraphPoint, Fraction] = {}
        for point, coeff in pairs:
            if not isinstance(point, GraphPoint):
                raise InputError("divisor entries must use graph points")
            acc[point] = acc.get(point, Fraction(0)) + as_fraction(coeff)
        return cls(graph, acc)

    @classmethod
    def zero(cls, graph: MetricGraph) -> "Divisor":
        return cls(graph, {})

    def degree(self) -> Fraction:
        return sum(self.entries.values(), Fraction(0))

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.entries.values())

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.entries.values())

    def coeff(self, point: GraphPoint) -> Fraction:
        return self.entries.get(point, Fraction(0))

    def support(self) -> list[GraphPoint]:
        return sorted(self.entries, key=GraphPoint.key)

    def items(self) -> list[tuple[GraphPoint, Fraction]]:
        return sorted(self.entries.items(), key=lambda kv: kv[0].key())

    def add(self, other: "Divisor") -> "Divisor":
        acc = dict(self.entries)
        for p, c in other.entries.items():
            acc[p] = acc.get(p, Fraction(0)) + c
        return Divisor(self.graph, acc)

    def sub(self, other: "Divisor") -> "Divisor":
        return self.add(other.neg())

    def neg(self) -> "Divisor":
        return Divisor(self.graph, {p: -c for p, c in self.entries.items()})

    def scale(self, k) -> "Divisor":
        k = as_fraction(k)
        return Divisor(self.graph, {p: k * c for p, c in self.entries.items()})

    def key(self) -> tuple:
        return tuple((p.key(), c) for p, c in self.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for p, c in self.items():
            coeff = "" if c == 1 else f"{c}"
            parts.append(f"{coeff}({p})")
        return "+".join(parts)


# ---------------------------------------------------------------------------
# closed subsets
# ---------------------------------------------------------------------------

class ClosedSubset:
    """Closed subset: a vertex set plus closed intervals on each edge."""

    __slots__ = ("graph", "vertices", "intervals")

    def __init__(self, graph: MetricGraph, vertices: Iterable[str] = (),
                 intervals: dict | None = None):
        self.graph = graph
        verts = set(vertices)
        ivs: dict[str, tuple[tuple[Fraction, Fraction], ...]] = {}
        for eid, raw in (intervals or {}).items():
            e = graph.edge_map.get(eid)
            if e is None:
                raise InputError(f"unknown edge {eid!r}")
            segs = sorted((as_fraction(a), as_fraction(b)) for a, b in raw)
            for a, b in segs:
                if not (0 <= a <= b <= e.length):
                    raise InputError(f"interval [{a},{b}] outside edge {eid!r}")
            merged: list[list[Fraction]] = []
            for a, b in segs:
                if merged and a <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], b)
                else:
                    merged.append([a, b])
            if merged:
                # closed sets reaching an endpoint contain the vertex there
                if merged[0][0] == 0:
                    verts.add(e.tail)
                if merged[-1][1] == e.length:
                    verts.add(e.head)
                ivs[eid] = tuple((a, b) for a, b in merged)
        for v in verts:
            if v not in graph.incidence:
                raise InputError(f"unknown vertex {v!r}")
        self.vertices = frozenset(verts)
        self.intervals = ivs

    # -- queries -------------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.vertices and not self.intervals

    def contains(self, point: GraphPoint) -> bool:
        if point.is_vertex:
            return point.vertex in self.vertices
        for a, b in self.intervals.get(point.edge, ()):
            if a <= point.offset <= b:
                return True
        return False

    def covers_graph(self) -> bool:
        if set(self.vertices) != set(self.graph.vertices):
            return False
        for e in self.graph.edges:
            segs = self.intervals.get(e.id, ())
            if len(segs) != 1 or segs[0] != (Fraction(0), e.length):
                return False
        return True

    def key(self) -> tuple:
        return (tuple(sorted(self.vertices)),
                tuple(sorted((eid, segs) for eid, segs in self.intervals.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, ClosedSubset) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    # -- set algebra -----------------------------------------------------------

    def union(self, other: "ClosedSubset") -> "ClosedSubset":
        ivs: dict[str, list] = {}
        for eid in set(self.intervals) | set(other.intervals):
            ivs[eid] = list(self.intervals.get(eid, ())) + list(other.intervals.get(eid, ()))
        return ClosedSubset(self.graph, set(self.vertices) | set(other.vertices), ivs)

    def intersect(self, other: "ClosedSubset") -> "ClosedSubset":
        ivs: dict[str, list] = {}
        for eid in set(self.intervals) & set(other.intervals):
            out = []
            for a1, b1 in self.intervals[eid]:
                for a2, b2 in other.intervals[eid]:
                    lo, hi = max(a1, a2), min(b1, b2)
                    if lo <= hi:
                        out.append((lo, hi))
            if out:
                ivs[eid] = out
        verts = set(self.vertices) & set(other.vertices)
        return ClosedSubset(self.graph, verts, ivs)

    # -- structure ---------------------------------------------------------------

    def finite_points(self) -> list[GraphPoint] | None:
        """The point list if the set is finite, else None."""
        pts = [GraphPoint(vertex=v) for v in sorted(self.vertices)]
        for eid, segs in sorted(self.intervals.items()):
            e = self.graph.edge_map[eid]
            for a, b in segs:
                if a != b:
                    return None
                if 0 < a < e.length:
                    pts.append(GraphPoint(edge=eid, offset=a))
        return sorted(pts, key=GraphPoint.key)

    def sample_point(self) -> GraphPoint:
        if self.vertices:
            return GraphPoint(vertex=min(self.vertices))
        for eid in sorted(self.intervals):
            segs = self.intervals[eid]
            a, b = segs[0]
            mid = (a + b) / 2
            return self.graph.point(edge=eid, offset=mid)
        raise InputError("empty set has no points")

    def boundary_points(self) -> list[GraphPoint]:
        """Points of the set with at least one escaping direction."""
        out: set[GraphPoint] = set()
        for v in self.vertices:
            if self._uncovered_arms(v) > 0:
                out.add(GraphPoint(vertex=v))
        for eid, segs in self.intervals.items():
            e = self.graph.edge_map[eid]
            for a, b in segs:
                if a > 0:
                    out.add(GraphPoint(edge=eid, offset=a))
                if b < e.length:
                    out.add(GraphPoint(edge=eid, offset=b))
        return sorted(out, key=GraphPoint.key)

    def _uncovered_arms(self, v: str) -> int:
        n = 0
        for eid, end in self.graph.incidence[v]:
            e = self.graph.edge_map[eid]
            segs = self.intervals.get(eid, ())
            covered = False
            for a, b in segs:
                if end == 0 and a == 0 and b > 0:
                    covered = True
                if end == 1 and b == e.length and a < e.length:
                    covered = True
            if not covered:
                n += 1
        return n

    def out_degree(self, point: GraphPoint) -> int:
        """Number of directions at the point leaving the set."""
        if not self.contains(point):
            raise InputError("point is not in the set")
        if point.is_vertex:
            return self._uncovered_arms(point.vertex)
        n = 0
        for a, b in self.intervals.get(point.edge, ()):
            if a <= point.offset <= b:
                if point.offset == a and a > 0:
                    n += 1
                if point.offset == b and b < self.graph.edge_map[point.edge].length:
                    n += 1
                break
        return n

    def complement_gaps(self):
        """Open complement, as uncovered vertices and open intervals."""
        missing_vertices = sorted(set(self.graph.vertices) - set(self.vertices))
        gaps: list[tuple[str, Fraction, Fraction]] = []
        for e in self.graph.edges:
            segs = list(self.intervals.get(e.id, ()))
            cursor = Fraction(0)
            for a, b in segs:
                if a > cursor:
                    gaps.append((e.id, cursor, a))
                cursor = max(cursor, b)
            if cursor < e.length:
                gaps.append((e.id, cursor, e.length))
        return missing_vertices, gaps

    def complement_components(self):
        """Connected components of the open complement, for reporting."""
        missing_vertices, gaps = self.complement_gaps()
        items: list[tuple] = [("v", v) for v in missing_vertices]
        items += [("g", i) for i in range(len(gaps))]
        parent = {it: it for it in items}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def unite(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        vset = set(missing_vertices)
        for i, (eid, a, b) in enumerate(gaps):
            e = self.graph.edge_map[eid]
            if a == 0 and e.tail in vset:
                unite(("g", i), ("v", e.tail))
            if b == e.length and e.head in vset:
                unite(("g", i), ("v", e.head))
        groups: dict[tuple, dict] = {}
        for it in items:
            root = find(it)
            grp = groups.setdefault(root, {"vertices": [], "gaps": []})
            if it[0] == "v":
                grp["vertices"].append(it[1])
            else:
                eid, a, b = gaps[it[1]]
                grp["gaps"].append({"edge": eid, "from": a, "to": b})
        out = [{"vertices": sorted(g["vertices"]),
                "gaps": sorted(g["gaps"], key=lambda d: (d["edge"], d["from"]))}
               for g in groups.values()]
        return sorted(out, key=lambda g: (g["vertices"], [x["edge"] for x in g["gaps"]]))


# ---------------------------------------------------------------------------
# subdivision and exact potential solves
# ---------------------------------------------------------------------------

class Subdivision:
    """Graph refined at a finite set of interior points.

    Nodes are the original vertices plus the interior points; segments are
    the resulting simple pieces, each remembering its parent edge and the
    offset where it starts.
    """

    def __init__(self, graph: MetricGraph, points: Iterable[GraphPoint]):
        self.graph = graph
        cuts: dict[str, set[Fraction]] = {}
        for p in points:
            if not p.is_vertex:
                cuts.setdefault(p.edge, set()).add(p.offset)
        self.cuts = {eid: sorted(offs) for eid, offs in cuts.items()}
        self.nodes: list[tuple] = [("v", v) for v in graph.vertices]
        for eid in sorted(self.cuts):
            for o in self.cuts[eid]:
                self.nodes.append(("p", eid, o))
        self.index = {node: i for i, node in enumerate(self.nodes)}
        self.segments: list[tuple[int, int, Fraction, str, Fraction]] = []
        for e in graph.edges:
            stops = [(Fraction(0), ("v", e.tail))]
            stops += [(o, ("p", e.id, o)) for o in self.cuts.get(e.id, ())]
            stops += [(e.length, ("v", e.head))]
            for (o1, n1), (o2, n2) in zip(stops, stops[1:]):
                self.segments.append((self.index[n1], self.index[n2], o2 - o1, e.id, o1))

    def node_of(self, point: GraphPoint) -> int:
        if point.is_vertex:
            return self.index[("v", point.vertex)]
        node = ("p", point.edge, point.offset)
        if node not in self.index:
            raise InputError(f"point {point} is not a subdivision node")
        return self.index[node]

    def point_of(self, idx: int) -> GraphPoint:
        node = self.nodes[idx]
        if node[0] == "v":
            return GraphPoint(vertex=node[1])
        return GraphPoint(edge=node[1], offset=node[2])


def _gauss_solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination; raises if the system is singular."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InputError("singular system (graph not connected?)")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def solve_node_potentials(sub: Subdivision, injections: dict[int, Fraction]) -> list[Fraction]:
    """Node potentials for the given net current injections (sums to zero).

    Conductance of a segment is the reciprocal of its length; node 0 is
    grounded. Exact over the rationals.
    """
    n = len(sub.nodes)
    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b, length, _, _ in sub.segments:
        c = 1 / length
        lap[a][a] += c
        lap[b][b] += c
        lap[a][b] -= c
        lap[b][a] -= c
    rhs = [Fraction(0)] * n
    for idx, cur in injections.items():
        rhs[idx] += cur
    if sum(rhs, Fraction(0)) != 0:
        raise InputError("injections must sum to zero")
    if n == 1:
        return [Fraction(0)]
    inner = _gauss_solve([row[1:] for row in lap[1:]], rhs[1:])
    return [Fraction(0)] + inner


def mg_potential(graph: MetricGraph, d_from: Divisor, d_to: Divisor) -> PLFunction:
    """The piecewise-linear function whose divisor is d_to - d_from.

    Unique up to a constant; returned with minimum value zero. Requires the
    two divisors to have equal degree.
    """
    if d_from.degree() != d_to.degree():
        raise InputError("divisors must have equal degree")
    delta = d_to.sub(d_from)
    sub = Subdivision(graph, delta.support())
    injections = {sub.node_of(p): c for p, c in delta.items()}
    vals = solve_node_potentials(sub, injections)
    vertex_vals = {v: vals[sub.index[("v", v)]] for v in graph.vertices}
    cuts = {eid: [(o, vals[sub.index[("p", eid, o)]]) for o in offs]
            for eid, offs in sub.cuts.items()}
    f = PLFunction.from_node_values(graph, vertex_vals, cuts)
    return f.minus_min()


def mg_jfunction(graph: MetricGraph, q: GraphPoint, p: GraphPoint) -> PLFunction:
    """Influence function: potential at x when unit current enters at p and
    exits at q, grounded so the value at q is zero (hence nonnegative)."""
    one = Fraction(1)
    return mg_potential(graph, Divisor.of(graph, [(q, one)]), Divisor.of(graph, [(p, one)]))


def mg_resistance(graph: MetricGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Effective resistance between two points."""
    if p.key() == q.key():
        return Fraction(0)
    return mg_jfunction(graph, q, p).eval(p)


def mg_distance(graph: MetricGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Geodesic distance between two points."""
    if p.key() == q.key():
        return Fraction(0)

    def anchors(pt: GraphPoint) -> list[tuple[str, Fraction]]:
        if pt.is_vertex:
            return [(pt.vertex, Fraction(0))]
        e = graph.edge_map[pt.edge]
        return [(e.tail, pt.offset), (e.head, e.length - pt.offset)]

    best = None
    if not p.is_vertex and not q.is_vertex and p.edge == q.edge:
        best = abs(p.offset - q.offset)
    dist_from = _dijkstra(graph, anchors(p))
    for v, extra in anchors(q):
        cand = dist_from[v] + extra
        if best is None or cand < best:
            best = cand
    return best


def _dijkstra(graph: MetricGraph, sources: list[tuple[str, Fraction]]) -> dict[str, Fraction]:
    dist: dict[str, Fraction] = {}
    heap: list[tuple[Fraction, int, str]] = []
    counter = 0
    for v, d in sources:
        if v not in dist or d < dist[v]:
            dist[v] = d
            heapq.heappush(heap, (d, counter, v))
            counter += 1
    adj: dict[str, list[tuple[str, Fraction]]] = {v: [] for v in graph.vertices}
    for e in graph.edges:
        adj[e.tail].append((e.head, e.length))
        adj[e.head].append((e.tail, e.length))
    final: dict[str, Fraction] = {}
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in final:
            continue
        final[v] = d
        for w, ln in adj[v]:
            nd = d + ln
            if w not in final and (w not in dist or nd < dist[w]):
                dist[w] = nd
                heapq.heappush(heap, (nd, counter, w))
                counter += 1
    return final
