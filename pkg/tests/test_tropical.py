"""Projective classes, pseudonorms, segments, hulls and projections."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropkit import (
    CertificateError,
    GroundSpace,
    InputError,
    TropGeneratorSet,
    TropPoint,
    tp_argext,
    tp_combine,
    tp_dist,
    tp_extremals,
    tp_fixed_point,
    tp_independence,
    tp_member,
    tp_norm,
    tp_path,
    tp_project,
    tp_pseudonorm,
    tp_retract,
)

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=4)
unit_fracs = st.fractions(min_value=0, max_value=1, max_denominator=8)


def vector(dim: int):
    return st.lists(fracs, min_size=dim, max_size=dim).map(tuple)


@st.composite
def point_family(draw, count: int, dim_min: int = 2, dim_max: int = 4):
    dim = draw(st.integers(dim_min, dim_max))
    return [TropPoint.of(draw(vector(dim))) for _ in range(count)]


@st.composite
def hull_instance(draw, max_gens: int = 4, extra_points: int = 1):
    dim = draw(st.integers(2, 4))
    k = draw(st.integers(1, max_gens))
    gens = [TropPoint.of(draw(vector(dim))) for _ in range(k)]
    extras = [TropPoint.of(draw(vector(dim))) for _ in range(extra_points)]
    return gens, extras


@st.composite
def hull_with_member(draw, max_gens: int = 4):
    gens, _ = draw(hull_instance(max_gens, extra_points=0))
    coeffs = [draw(fracs) for _ in gens]
    return gens, tp_combine(gens, coeffs, "lower")


def weighted_space(dim: int, seedlist) -> GroundSpace:
    weights = [Fraction(w) for w in seedlist[:dim]]
    return GroundSpace.of([f"x{i}" for i in range(dim)], weights)


class TestCanonicalForm:
    def test_minimum_zero_representative(self):
        p = TropPoint.of((3, 7, 5))
        assert p.coords == (Fraction(0), Fraction(4), Fraction(2))

    @given(point_family(1))
    def test_constant_shift_is_identified(self, fam):
        (p,) = fam
        shifted = TropPoint.of(tuple(c + 7 for c in p.coords))
        assert shifted == p
        assert hash(shifted) == hash(p)

    @given(point_family(2))
    def test_diff_add_inverse(self, fam):
        a, b = fam
        assert a.diff(b).add(b) == a
        assert a.negate().negate() == a

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(InputError):
            TropPoint.of(())
        with pytest.raises(InputError):
            tp_dist(TropPoint.of((0, 1)), TropPoint.of((0, 1, 2)))


class TestNormsAndPseudonorms:
    def test_reference_values(self):
        space = GroundSpace.of(["e1", "e2", "e3"],
                               [Fraction(1, 3)] * 3)
        a = TropPoint.of((-1, 3, 0))
        assert tp_norm(a) == 4
        assert tp_pseudonorm(a, 1, "lower", space) == Fraction(5, 3)
        assert tp_pseudonorm(a, 1, "upper", space) == Fraction(7, 3)
        assert tp_pseudonorm(a, "inf", "lower", space) == 4

    @given(point_family(1), st.lists(st.integers(1, 5), min_size=4, max_size=4))
    def test_upper_equals_lower_of_negation(self, fam, wseed):
        (p,) = fam
        space = weighted_space(p.dim, wseed)
        for q in (1, 2, "inf"):
            assert tp_pseudonorm(p, q, "upper", space) == \
                tp_pseudonorm(p.negate(), q, "lower", space)

    @given(point_family(1), st.lists(st.integers(1, 5), min_size=4, max_size=4))
    def test_linear_split_of_the_norm(self, fam, wseed):
        (p,) = fam
        space = weighted_space(p.dim, wseed)
        low = tp_pseudonorm(p, 1, "lower", space)
        up = tp_pseudonorm(p, 1, "upper", space)
        assert low + up == space.total_mass * tp_norm(p)

    @given(point_family(1), st.lists(st.integers(1, 5), min_size=4, max_size=4))
    def test_mean_chain_is_monotone(self, fam, wseed):
        (p,) = fam
        space = weighted_space(p.dim, wseed)
        mu = float(space.total_mass)
        m1 = float(tp_pseudonorm(p, 1, "lower", space)) / mu
        m2 = tp_pseudonorm(p, 2, "lower", space) / math.sqrt(mu)
        minf = float(tp_pseudonorm(p, "inf", "lower", space))
        assert m1 <= m2 + 1e-9
        assert m2 <= minf + 1e-9

    @given(point_family(1))
    def test_sup_pseudonorm_is_the_norm(self, fam):
        (p,) = fam
        space = GroundSpace.of([f"x{i}" for i in range(p.dim)])
        assert tp_pseudonorm(p, "inf", "lower", space) == tp_norm(p)
        assert tp_pseudonorm(p, "inf", "upper", space) == tp_norm(p)

    @given(point_family(2))
    def test_triangle_equality_condition(self, fam):
        a, b = fam
        additive = tp_norm(a.add(b)) == tp_norm(a) + tp_norm(b)
        meet_min = bool(tp_argext(a, "min") & tp_argext(b, "min"))
        meet_max = bool(tp_argext(a, "max") & tp_argext(b, "max"))
        assert additive == (meet_min and meet_max)


class TestLatticeOperations:
    """Pointwise min/max identities on raw representatives."""

    @staticmethod
    def _vmin(f, g):
        return tuple(min(x, y) for x, y in zip(f, g))

    @staticmethod
    def _vmax(f, g):
        return tuple(max(x, y) for x, y in zip(f, g))

    @given(st.integers(2, 4).flatmap(
        lambda d: st.tuples(vector(d), vector(d), vector(d))))
    def test_lattice_identities(self, triple):
        f, g, h = triple
        vmin, vmax = self._vmin, self._vmax
        assert vmin(f, vmax(f, g)) == f
        assert vmax(f, vmin(g, h)) == vmin(vmax(f, g), vmax(f, h))
        assert tuple(a + b for a, b in zip(vmin(f, g), vmax(f, g))) == \
            tuple(a + b for a, b in zip(f, g))
        assert vmin(tuple(-x for x in f), tuple(-x for x in g)) == \
            tuple(-x for x in vmax(f, g))


class TestSegments:
    @given(point_family(2), unit_fracs)
    def test_endpoints_and_reversal(self, fam, s):
        a, b = fam
        rho = tp_dist(a, b)
        t = s * rho
        assert tp_path(a, b, 0) == a
        assert tp_path(a, b, rho) == b
        assert tp_path(a, b, t) == tp_path(b, a, rho - t)

    @given(point_family(2), unit_fracs, unit_fracs)
    def test_unit_speed(self, fam, s1, s2):
        a, b = fam
        rho = tp_dist(a, b)
        p1 = tp_path(a, b, s1 * rho)
        p2 = tp_path(a, b, s2 * rho)
        assert tp_dist(p1, p2) == abs(s1 - s2) * rho

    @given(point_family(2), unit_fracs, unit_fracs)
    def test_upper_segment_is_also_unit_speed(self, fam, s1, s2):
        a, b = fam
        rho = tp_dist(a, b)
        p1 = tp_path(a, b, s1 * rho, "upper")
        p2 = tp_path(a, b, s2 * rho, "upper")
        assert tp_dist(p1, p2) == abs(s1 - s2) * rho
        assert tp_path(a, b, 0, "upper") == a
        assert tp_path(a, b, rho, "upper") == b

    @given(point_family(3))
    def test_three_point_criterion(self, fam):
        a, b, c = fam
        covers = (tp_argext(a.diff(c), "min") | tp_argext(b.diff(c), "min")) \
            == frozenset(range(a.dim))
        t = tp_dist(a, c)
        on_segment = t <= tp_dist(a, b) and tp_path(a, b, t) == c
        assert covers == on_segment

    @given(point_family(2))
    def test_rejects_out_of_range_parameter(self, fam):
        a, b = fam
        with pytest.raises(InputError):
            tp_path(a, b, tp_dist(a, b) + 1)


class TestMembershipAndProjection:
    @given(hull_with_member())
    def test_members_are_recognized_and_fixed(self, inst):
        gens, gamma = inst
        S = TropGeneratorSet.of(gens, "lower")
        ok, cert = tp_member(S, gamma)
        assert ok
        assert not cert["missing"]
        proj, _ = tp_project(S, gamma)
        assert proj == gamma

    @given(hull_instance())
    def test_projection_lands_in_the_hull(self, inst):
        gens, (gamma,) = inst
        S = TropGeneratorSet.of(gens, "lower")
        proj, cert = tp_project(S, gamma)
        ok, _ = tp_member(S, proj)
        assert ok
        assert len(cert["checks"]) == len(S.points)

    @given(hull_with_member())
    def test_certificates_hold_for_combinations(self, inst):
        """Pseudonorm additivity and shared minimizers, checked against a
        hull member that is not necessarily a generator."""
        gens, beta = inst
        S = TropGeneratorSet.of(gens, "lower")
        space = GroundSpace.of([f"x{i}" for i in range(S.dim)])
        gamma = TropPoint.of(tuple(Fraction(i % 3, 2) - 1 for i in range(S.dim)))
        proj, _ = tp_project(S, gamma)
        total = tp_pseudonorm(beta.diff(gamma), 1, "lower", space)
        first = tp_pseudonorm(beta.diff(proj), 1, "lower", space)
        second = tp_pseudonorm(proj.diff(gamma), 1, "lower", space)
        assert total == first + second
        assert tp_argext(beta.diff(proj), "min") & \
            tp_argext(proj.diff(gamma), "min")

    @given(hull_instance(extra_points=2))
    def test_nonexpansive(self, inst):
        gens, (g1, g2) = inst
        S = TropGeneratorSet.of(gens, "lower")
        p1, _ = tp_project(S, g1)
        p2, _ = tp_project(S, g2)
        assert tp_dist(p1, p2) <= tp_dist(g1, g2)

    @given(hull_instance(max_gens=4), st.integers(1, 3))
    def test_nested_projection(self, inst, keep):
        gens, (gamma,) = inst
        sub = gens[:min(keep, len(gens))]
        S = TropGeneratorSet.of(gens, "lower")
        S_sub = TropGeneratorSet.of(sub, "lower")
        direct, _ = tp_project(S_sub, gamma)
        through, _ = tp_project(S_sub, tp_project(S, gamma)[0])
        assert direct == through

    @given(hull_instance())
    def test_upper_lower_duality(self, inst):
        gens, (gamma,) = inst
        S_low = TropGeneratorSet.of(gens, "lower")
        S_up = TropGeneratorSet.of([p.negate() for p in gens], "upper")
        low, _ = tp_project(S_low, gamma)
        up, _ = tp_project(S_up, gamma.negate())
        assert up == low.negate()

    @given(hull_instance(max_gens=3, extra_points=0),
           hull_instance(max_gens=3, extra_points=0))
    @settings(max_examples=25)
    def test_segment_decomposition(self, inst1, inst2):
        gens1, _ = inst1
        gens2, _ = inst2
        if gens1[0].dim != gens2[0].dim:
            return
        both = gens1 + gens2
        coeffs = [Fraction(i, 2) for i in range(len(both))]
        gamma = tp_combine(both, coeffs, "lower")
        p1, _ = tp_project(TropGeneratorSet.of(gens1, "lower"), gamma)
        p2, _ = tp_project(TropGeneratorSet.of(gens2, "lower"), gamma)
        t = tp_dist(p1, gamma)
        assert t <= tp_dist(p1, p2)
        assert tp_path(p1, p2, t) == gamma

    @given(hull_instance(max_gens=3, extra_points=3))
    def test_distance_bound_between_hulls(self, inst):
        gens, others = inst
        betas = others[:len(gens)]
        if len(betas) < len(gens):
            betas = betas + [betas[-1]] * (len(gens) - len(betas))
        coeffs = [Fraction(i) for i in range(len(gens))]
        gamma = tp_combine(gens, coeffs, "lower")
        T = TropGeneratorSet.of(betas, "lower")
        proj, _ = tp_project(T, gamma)
        bound = max(tp_dist(a, b) for a, b in zip(gens, betas))
        assert tp_dist(gamma, proj) <= bound

    def test_singleton_hull(self):
        g = TropPoint.of((1, 5, 2))
        S = TropGeneratorSet.of([g], "lower")
        proj, _ = tp_project(S, TropPoint.of((0, 0, 9)))
        assert proj == g

    def test_dimension_mismatch(self):
        S = TropGeneratorSet.of([TropPoint.of((0, 1))], "lower")
        with pytest.raises(InputError):
            tp_project(S, TropPoint.of((0, 1, 2)))


class TestExtremals:
    def test_rectangle_extremals_drop_the_low_corner(self, tp3):
        """min(A, C+1, D+1) reproduces B, so B is redundant in lower mode."""
        S = tp3.generator_set("rect")
        kept = tp_extremals(S)
        pts = tp3.points
        assert set(kept.points) == {pts["A"], pts["C"], pts["D"]}
        ok, _ = tp_member(kept, pts["B"])
        assert ok

    @given(hull_with_member())
    def test_combinations_are_pruned(self, inst):
        gens, extra = inst
        base = TropGeneratorSet.of(gens, "lower")
        padded = TropGeneratorSet.of(list(gens) + [extra], "lower")
        assert set(tp_extremals(padded).points) == set(tp_extremals(base).points)

    @given(hull_instance())
    def test_removed_points_stay_in_the_hull(self, inst):
        gens, _ = inst
        S = TropGeneratorSet.of(gens, "lower")
        kept = tp_extremals(S)
        for g in gens:
            ok, _ = tp_member(kept, g)
            assert ok


class TestIndependence:
    def test_rectangle_statuses(self, tp3):
        S = tp3.generator_set("rect")
        weak = tp_independence(S, "weak")
        assert weak["status"] == "dependent"
        assert weak["certificate"]["redundant_index"] == 1
        gm = tp_independence(S, "gondran_minoux")
        assert gm["status"] == "dependent"
        trop = tp_independence(S, "tropical")
        assert trop["status"] == "dependent"

    def test_gm_certificate_reverifies(self, tp3):
        S = tp3.generator_set("rect")
        gm = tp_independence(S, "gondran_minoux")
        left_idx, right_idx = gm["certificate"]["partition"]
        witness = TropPoint.of(
            [Fraction(c) for c in gm["certificate"]["common_point"]])
        pts = list(S.points)
        for side in (left_idx, right_idx):
            hull = TropGeneratorSet.of([pts[i] for i in side], "lower")
            ok, _ = tp_member(hull, witness)
            assert ok

    def test_tropical_certificate_ties_twice_everywhere(self, tp3):
        S = tp3.generator_set("rect")
        result = tp_independence(S, "tropical")
        cs = [Fraction(c) for c in result["certificate"]["coefficients"]]
        for x in range(S.dim):
            vals = [c + p.coords[x] for c, p in zip(cs, S.points)]
            m = min(vals)
            assert sum(1 for v in vals if v == m) >= 2

    @given(hull_instance(max_gens=3, extra_points=0))
    def test_duplicates_do_not_change_the_verdict(self, inst):
        gens, _ = inst
        S = TropGeneratorSet.of(gens, "lower")
        doubled = TropGeneratorSet.of(list(gens) + [gens[0]], "lower")
        for kind in ("weak", "gondran_minoux", "tropical"):
            assert tp_independence(S, kind)["status"] == \
                tp_independence(doubled, kind)["status"]

    @given(hull_with_member())
    def test_appended_combination_is_weakly_dependent(self, inst):
        gens, combo = inst
        if combo in set(gens):
            return
        S = TropGeneratorSet.of(list(gens) + [combo], "lower")
        assert tp_independence(S, "weak")["status"] == "dependent"

    def test_single_generator_is_independent(self):
        S = TropGeneratorSet.of([TropPoint.of((0, 2, 1))], "lower")
        for kind in ("weak", "gondran_minoux", "tropical"):
            assert tp_independence(S, kind)["status"] == "independent"


class TestRetraction:
    @given(hull_instance())
    def test_endpoint_contract(self, inst):
        gens, (gamma,) = inst
        S = TropGeneratorSet.of(gens, "lower")
        assert tp_retract(S, gamma, 0) == gamma
        proj, _ = tp_project(S, gamma)
        assert tp_retract(S, gamma, 1) == proj

    @given(hull_with_member(), unit_fracs)
    def test_identity_on_the_hull(self, inst, t):
        gens, gamma = inst
        S = TropGeneratorSet.of(gens, "lower")
        assert tp_retract(S, gamma, t) == gamma

    @given(hull_instance(extra_points=2), unit_fracs)
    @settings(max_examples=40)
    def test_two_lipschitz(self, inst, t):
        gens, (g1, g2) = inst
        S = TropGeneratorSet.of(gens, "lower")
        moved = tp_dist(tp_retract(S, g1, t), tp_retract(S, g2, t))
        assert moved <= 2 * tp_dist(g1, g2)


class TestFixedPoint:
    def test_reference_bounce(self):
        S_low = TropGeneratorSet.of(
            [TropPoint.of((0, 1)), TropPoint.of((1, 0))], "lower")
        S_up = TropGeneratorSet.of([TropPoint.of((3, 3))], "upper")
        result = tp_fixed_point(S_low, S_up, TropPoint.of((3, 3)))
        assert result["lower"] == TropPoint.of((0, 0))
        assert result["upper"] == TropPoint.of((3, 3))
        assert result["distance"] == 0

    @given(hull_instance(max_gens=3, extra_points=0),
           hull_instance(max_gens=3, extra_points=0))
    @settings(max_examples=25)
    def test_stabilizes_and_lands_in_both_hulls(self, inst1, inst2):
        gens_low, _ = inst1
        gens_up, _ = inst2
        if gens_low[0].dim != gens_up[0].dim:
            return
        S_low = TropGeneratorSet.of(gens_low, "lower")
        S_up = TropGeneratorSet.of([p.negate() for p in gens_up], "upper")
        gamma = tp_combine(list(S_up.points),
                           [Fraction(i, 2) for i in range(len(gens_up))],
                           "upper")
        result = tp_fixed_point(S_low, S_up, gamma)
        assert tp_member(S_low, result["lower"])[0]
        assert tp_member(S_up, result["upper"])[0]
        assert result["distance"] == tp_dist(result["lower"], result["upper"])

    def test_requires_an_upper_hull_member(self):
        S_low = TropGeneratorSet.of([TropPoint.of((0, 1))], "lower")
        S_up = TropGeneratorSet.of([TropPoint.of((0, 3))], "upper")
        with pytest.raises(InputError):
            tp_fixed_point(S_low, S_up, TropPoint.of((0, 1)))
