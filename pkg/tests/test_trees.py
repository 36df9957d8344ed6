"""Tropical trees: recognition, reduced maps, morphisms, harmonization."""

import pytest

from tropkit import (
    InputError,
    ls_bases,
    ls_project,
    ls_reduced,
    tt_critical,
    tt_harmonize,
    tt_is_dominant,
    tt_is_tree,
    tt_morphism,
    tt_preimage,
    tt_reduced_map,
    tt_skeleton,
    tt_support,
    tt_verify_witness,
)


@pytest.fixture(scope="module")
def triangle(c6):
    return c6.system("triangle_mid")


@pytest.fixture(scope="module")
def seg(c6):
    return c6.system("seg_D1_D3")


class TestTreeRecognition:
    def test_triangle_criticals(self, c6, triangle):
        crits = tt_critical(triangle)
        expected = {c6.divisor(n).key() for n in ("D12", "D23", "D13", "D0")}
        assert {d.key() for d in crits} == expected
        assert [d.key() for d in crits] == sorted(d.key() for d in crits)

    def test_triangle_is_a_dominant_tree(self, triangle):
        ok, report = tt_is_tree(triangle)
        assert ok
        assert report["method"] == "critical-set verified"
        assert tt_support(triangle).covers_graph()
        dominant, dreport = tt_is_dominant(triangle)
        assert dominant
        assert dreport["method"] == "critical-set verified"

    def test_bad_triangle_witness_is_recheckable(self, c6):
        bad = c6.system("triangle_bad")
        ok, report = tt_is_tree(bad)
        assert not ok
        assert report["reason"] == \
            "two chip-firing bases fail to cover the graph"
        witness_divisor = report["divisor"]
        b1, b2 = report["bases"]
        assert not b1.union(b2).covers_graph()
        recomputed = {b.key() for b in ls_bases(bad, witness_divisor)}
        assert b1.key() in recomputed and b2.key() in recomputed
        dominant, dreport = tt_is_dominant(bad)
        assert not dominant
        assert dreport["reason"] == "not a tropical tree"

    def test_segment_is_a_dominant_tree(self, seg):
        ok, _ = tt_is_tree(seg)
        assert ok
        dominant, _ = tt_is_dominant(seg)
        assert dominant

    def test_seg_banana_tree_but_not_dominant(self, banana):
        system = banana.system("seg_E1_E3")
        ok, _ = tt_is_tree(system)
        assert ok
        dominant, report = tt_is_dominant(system)
        assert not dominant
        assert report["reason"] == "support misses part of the graph"
        components = report["uncovered"]
        assert len(components) == 1
        assert components[0]["vertices"] == ["u2", "x1", "x2", "x3"]
        gap_edges = sorted(gap["edge"] for gap in components[0]["gaps"])
        assert gap_edges == [
            "banana-2-a-in", "banana-2-a-out",
            "banana-2-b-in", "banana-2-b-out",
            "banana-2-c-in", "banana-2-c-out",
        ]
        for gap in components[0]["gaps"]:
            assert (gap["from"], gap["to"]) == (0, pytest.approx(0.5))


class TestReducedMapAndPreimages:
    def test_preimage_of_the_center(self, c6, triangle):
        pre = tt_preimage(triangle, c6.divisor("D0"))
        pts = pre.finite_points()
        assert pts is not None
        assert {str(p) for p in pts} == {"v1", "v2", "v3"}

    def test_preimage_matches_base_intersection(self, c6, triangle):
        for name in ("D12", "D23", "D13", "D0"):
            d = c6.divisor(name)
            bases = ls_bases(triangle, d)
            expected = bases[0]
            for b in bases[1:]:
                expected = expected.intersect(b)
            assert tt_preimage(triangle, d).key() == expected.key()

    def test_preimage_sits_inside_the_support(self, c6, triangle):
        for name in ("D12", "D23", "D13", "D0"):
            d = c6.divisor(name)
            pts = tt_preimage(triangle, d).finite_points()
            assert pts is not None
            for p in pts:
                assert d.coeff(p) > 0

    def test_dominant_samples_appear_in_their_reduction(self, c6, triangle):
        g = c6.need_graph()
        for q, red in tt_reduced_map(triangle):
            assert red.coeff(q) > 0
            assert tt_preimage(triangle, red).contains(q)

    def test_subtree_reduction_compatibility(self, c6, triangle):
        """Reducing in a generator-subset subtree equals projecting the
        full reduction onto that subtree."""
        from tropkit import LinearSystem
        g = c6.need_graph()
        pairs = [("D12", "D23"), ("D23", "D13"), ("D12", "D13")]
        samples = [g.vertex_point(v) for v in g.vertices]
        for n1, n2 in pairs:
            sub = LinearSystem(g, [c6.divisor(n1), c6.divisor(n2)])
            for q in samples:
                direct, _ = ls_reduced(sub, q)
                full, _ = ls_reduced(triangle, q)
                through, _ = ls_project(sub, full)
                assert direct == through


class TestSkeletonAndMorphism:
    def test_triangle_skeleton_is_a_star(self, c6, triangle):
        skel = tt_skeleton(triangle)
        assert len(skel.nodes) == 4
        assert len(skel.arcs) == 3
        center = next(i for i, n in enumerate(skel.nodes)
                      if n == c6.divisor("D0"))
        for arc in skel.arcs:
            assert center in (arc.a, arc.b)
            assert arc.length == 1

    def test_triangle_morphism_reference(self, c6, triangle):
        g = c6.need_graph()
        morphism = tt_morphism(triangle)
        skel = morphism.skeleton
        node_of = {str(n): i for i, n in enumerate(skel.nodes)}
        fiber_sets = {i: {str(p) for p in fiber}
                      for i, fiber in enumerate(morphism.fibers)}
        assert fiber_sets[node_of[str(c6.divisor('D0'))]] == \
            {"v1", "v2", "v3"}
        assert fiber_sets[node_of[str(c6.divisor('D12'))]] == {"w12"}
        assert all(a.expansion == 1 for a in morphism.sub_arcs)
        assert morphism.degree_of(g.vertex_point("v1")) == 1
        assert morphism.degree_of(g.vertex_point("w12")) == 2

    def test_segment_morphism_expansions(self, c6, seg):
        morphism = tt_morphism(seg)
        by_edge = {}
        for sub in morphism.sub_arcs:
            by_edge.setdefault(sub.edge, set()).add(sub.expansion)
        assert by_edge == {"e1": {1}, "e2": {1}, "e3": {1}, "e4": {1},
                           "e5": {2}, "e6": {2}}
        expansions = sorted((max(v) for v in by_edge.values()), reverse=True)
        assert expansions == [2, 2, 1, 1, 1, 1]

    def test_expansions_are_positive_integers(self, banana):
        morphism = tt_morphism(banana.system("witness4"))
        for sub in morphism.sub_arcs:
            assert isinstance(sub.expansion, int)
            assert sub.expansion >= 1
            span = abs(sub.arc_to - sub.arc_from)
            assert span == sub.expansion * (sub.end - sub.start)


class TestHarmonization:
    def test_triangle_needs_three_unit_branches(self, triangle):
        modification, morphism, degree = tt_harmonize(triangle)
        assert degree == 3
        assert not modification.is_trivial
        assert len(modification.attachments) == 3
        points = sorted(str(a.point) for a in modification.attachments)
        assert points == ["v1", "v2", "v3"]
        assert all(a.multiplicity == 1 for a in modification.attachments)

    def test_segment_is_already_harmonic(self, seg):
        modification, morphism, degree = tt_harmonize(seg)
        assert degree == 3
        assert modification.is_trivial

    def test_node_fibers_conserve_degree_after_attachment(self, triangle):
        modification, morphism, degree = tt_harmonize(triangle)
        skel = morphism.skeleton
        for i in range(len(skel.nodes)):
            base = sum(morphism.degree_of(p) for p in morphism.fibers[i])
            added = sum(a.multiplicity for a in modification.attachments
                        if i in a.component_nodes)
            assert base + added == degree

    def test_banana_witness_harmonization(self, banana):
        modification, morphism, degree = tt_harmonize(banana.system("witness4"))
        assert degree == 4
        shape = sorted((str(a.point), a.multiplicity)
                       for a in modification.attachments)
        assert shape == [("u2", 1), ("u2", 1),
                         ("w13", 2), ("w13", 2), ("w13", 2)]


class TestWitnessVerification:
    def test_banana_degree_four_witness(self, banana):
        ok, report = tt_verify_witness(banana.system("witness4"), 4)
        assert ok
        assert report["verified"]
        assert report["stably_gonal"] == 4
        assert report["method"] == "critical-set verified"

    def test_wrong_degree_is_rejected(self, banana):
        ok, report = tt_verify_witness(banana.system("witness4"), 3)
        assert not ok
        assert "degree" in report["reason"]

    def test_non_dominant_system_fails(self, banana):
        ok, report = tt_verify_witness(banana.system("seg_E1_E3"), 3)
        assert not ok
        assert report["reason"] == "the system is not a dominant tropical tree"

    def test_non_integer_degree_is_rejected(self, banana):
        with pytest.raises(InputError):
            tt_verify_witness(banana.system("witness4"), "1/2")
