"""Metric graphs, piecewise-linear functions and exact potential theory."""

import random
from fractions import Fraction

import pytest

from tropkit import (
    ClosedSubset,
    Divisor,
    InputError,
    MetricGraph,
    PLFunction,
    mg_distance,
    mg_jfunction,
    mg_potential,
    mg_resistance,
    mg_validate,
    pl_div,
    pl_extremum_set,
)

from conftest import equal_degree_pair, random_graph, random_point


class TestGraphConstruction:
    def test_c6_report(self, c6):
        report = c6.graph_report
        assert report["vertices"] == 6
        assert report["edges"] == 6
        assert report["genus"] == 1
        assert report["total_length"] == 6
        assert report["connected"] is True
        assert report["loops_subdivided"] == []

    def test_loops_are_split_in_half(self):
        g = MetricGraph.of(["a"], [("loop", "a", "a", 3)])
        assert "loop:mid" in g.vertices
        assert g.loop_aliases["loop"] == ("loop:a", "loop:b", Fraction(3, 2))
        p = g.point(edge="loop", offset=2)
        assert p.edge == "loop:b" and p.offset == Fraction(1, 2)
        report = mg_validate(["a"], [("loop", "a", "a", 3)])[1]
        assert report["loops_subdivided"] == ["loop"]
        assert report["genus"] == 1
        assert report["total_length"] == 3

    def test_offset_normalization(self, c6):
        g = c6.need_graph()
        assert g.point(edge="e1", offset=0).vertex == "v1"
        assert g.point(edge="e1", offset=1).vertex == "w12"
        assert not g.point(edge="e1", offset=Fraction(1, 2)).is_vertex

    def test_invalid_graphs_are_rejected(self):
        with pytest.raises(InputError):
            MetricGraph.of(["a", "b"], [("e", "a", "c", 1)])
        with pytest.raises(InputError):
            MetricGraph.of(["a", "b"], [("e", "a", "b", 0)])
        with pytest.raises(InputError):
            MetricGraph.of(["a", "b", "c"], [("e", "a", "b", 1)])
        with pytest.raises(InputError):
            MetricGraph.of(["a", "b"], [("e", "a", "b", 1),
                                        ("e", "b", "a", 1)])

    def test_random_graphs_validate(self):
        rng = random.Random(7)
        for _ in range(10):
            g = random_graph(rng)
            assert g.total_length > 0
            assert g.genus >= 0


class TestDistances:
    def test_c6_distances(self, c6):
        g = c6.need_graph()
        v1, v3 = g.vertex_point("v1"), g.vertex_point("v3")
        assert mg_distance(g, v1, v3) == 2
        assert mg_distance(g, v1, g.vertex_point("w23")) == 3
        a = g.point(edge="e1", offset=Fraction(1, 4))
        b = g.point(edge="e1", offset=Fraction(3, 4))
        assert mg_distance(g, a, b) == Fraction(1, 2)

    def test_resistance_definitions_agree(self, c6):
        g = c6.need_graph()
        v1, v3 = g.vertex_point("v1"), g.vertex_point("v3")
        assert mg_resistance(g, v1, v3) == Fraction(4, 3)
        assert mg_resistance(g, v3, v1) == Fraction(4, 3)
        assert mg_resistance(g, v1, v1) == 0


class TestPotentials:
    def test_c6_reference_potential(self, c6):
        g = c6.need_graph()
        f = mg_potential(g, c6.divisor("D1"), c6.divisor("D3"))
        values = [f.eval(g.vertex_point(v)) for v in
                  ("v1", "w12", "v2", "w23", "v3", "w13")]
        assert values == [0, 1, 2, 3, 4, 2]
        assert f.max_value() == 4
        assert f.min_value() == 0
        assert f.integral() == 12
        assert f.slopes_integer()

    def test_divisor_round_trip_on_random_graphs(self):
        rng = random.Random(11)
        for _ in range(12):
            g = random_graph(rng)
            d1, d2 = equal_degree_pair(rng, g)
            f = mg_potential(g, d1, d2)
            assert pl_div(f) == d2.sub(d1)
            assert pl_div(f).degree() == 0

    def test_cocycle_is_constant(self, c6):
        g = c6.need_graph()
        d0, d1, d2 = (c6.divisor(n) for n in ("D0", "D1", "D2"))
        total = mg_potential(g, d0, d1).add(mg_potential(g, d1, d2)) \
            .sub(mg_potential(g, d0, d2))
        assert total.spread() == 0

    def test_degree_mismatch_is_rejected(self, c6):
        g = c6.need_graph()
        with pytest.raises(InputError):
            mg_potential(g, c6.divisor("D1"),
                         Divisor.of(g, [(g.vertex_point("v2"), 1)]))

    def test_extremum_sets_disjoint_unless_constant(self, c6):
        g = c6.need_graph()
        f = mg_potential(g, c6.divisor("D1"), c6.divisor("D3"))
        lo = pl_extremum_set(f, "min")
        hi = pl_extremum_set(f, "max")
        assert lo.intersect(hi).is_empty()
        const = PLFunction.constant(g, 5)
        assert not pl_extremum_set(const, "min") \
            .intersect(pl_extremum_set(const, "max")).is_empty()


class TestJFunctions:
    def test_c6_reference_values(self, c6):
        g = c6.need_graph()
        v1, v3 = g.vertex_point("v1"), g.vertex_point("v3")
        j = mg_jfunction(g, v3, v1)
        values = [j.eval(g.vertex_point(v)) for v in
                  ("v1", "w12", "v2", "w23", "v3", "w13")]
        assert values == [Fraction(4, 3), 1, Fraction(2, 3),
                          Fraction(1, 3), 0, Fraction(2, 3)]

    def _check_axioms(self, g, p, q, x):
        jq = mg_jfunction(g, q, p)
        r = mg_resistance(g, p, q)
        assert jq.eval(q) == 0
        assert 0 <= jq.eval(x) <= jq.eval(p)
        assert jq.eval(x) == mg_jfunction(g, q, x).eval(p)
        jp = mg_jfunction(g, p, q)
        assert jq.eval(x) + jp.eval(x) == r
        assert r == jq.eval(p) == jp.eval(q)
        assert r <= mg_distance(g, p, q)

    def test_axioms_on_c6(self, c6):
        g = c6.need_graph()
        rng = random.Random(3)
        for _ in range(6):
            p, q, x = (random_point(rng, g) for _ in range(3))
            if p.key() == q.key():
                continue
            self._check_axioms(g, p, q, x)

    def test_axioms_on_random_graphs(self):
        rng = random.Random(17)
        for _ in range(6):
            g = random_graph(rng, max_vertices=6, max_edges=9)
            p, q, x = (random_point(rng, g) for _ in range(3))
            if p.key() == q.key():
                continue
            self._check_axioms(g, p, q, x)

    def test_laplacian_of_j_is_the_dipole(self, c6):
        g = c6.need_graph()
        rng = random.Random(5)
        for _ in range(4):
            p, q = random_point(rng, g), random_point(rng, g)
            if p.key() == q.key():
                continue
            j = mg_jfunction(g, q, p)
            expected = Divisor.of(g, [(p, 1), (q, -1)])
            assert pl_div(j) == expected


class TestClosedSubsets:
    def test_union_intersection_cover(self, c6):
        g = c6.need_graph()
        left = ClosedSubset(g, {"v1", "w12", "v2"},
                            {"e1": [(Fraction(0), Fraction(1))],
                             "e2": [(Fraction(0), Fraction(1))]})
        right = ClosedSubset(
            g, {"v2", "w23", "v3", "w13", "v1"},
            {"e3": [(Fraction(0), Fraction(1))],
             "e4": [(Fraction(0), Fraction(1))],
             "e5": [(Fraction(0), Fraction(1))],
             "e6": [(Fraction(0), Fraction(1))]})
        assert not left.covers_graph()
        assert left.union(right).covers_graph()
        mid = left.intersect(right)
        assert mid.contains(g.vertex_point("v1"))
        assert mid.contains(g.vertex_point("v2"))
        assert not mid.contains(g.point(edge="e1", offset=Fraction(1, 2)))

    def test_complement_components(self, c6):
        g = c6.need_graph()
        sub = ClosedSubset(g, {"v1", "w12"},
                           {"e1": [(Fraction(0), Fraction(1))]})
        comps = sub.complement_components()
        assert len(comps) == 1
        assert comps[0]["vertices"] == ["v2", "v3", "w13", "w23"]
        gaps = {gap["edge"] for gap in comps[0]["gaps"]}
        assert gaps == {"e2", "e3", "e4", "e5", "e6"}

    def test_finite_point_sets(self, c6):
        g = c6.need_graph()
        dots = ClosedSubset(g, {"v1"},
                            {"e3": [(Fraction(1, 2), Fraction(1, 2))]})
        pts = dots.finite_points()
        assert pts is not None
        assert {str(p) for p in pts} == {"v1", "e3@1/2"}
        band = ClosedSubset(g, set(), {"e1": [(Fraction(0), Fraction(1, 2))]})
        assert band.finite_points() is None
