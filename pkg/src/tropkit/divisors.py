"""Divisor theory on metric graphs.

Linear equivalence via integer-slope potentials, the chip-firing segment
between equivalent divisors, linear systems given by generators (with
membership, nearest-point projection, and reduced divisors), and the
independent burning route to reduced divisors.

The two routes to a reduced divisor, ls_project onto a generator family
and dv_dhar by metric burning, are deliberately separate code paths so
each can certify the other in tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import CertificateError, InputError
from .graphs import (
    ClosedSubset,
    Divisor,
    GraphPoint,
    MetricGraph,
    PLFunction,
    Subdivision,
    mg_potential,
)
from .tropical import as_fraction

__all__ = [
    "dv_lin_equiv",
    "dv_rho",
    "dv_path",
    "dv_b1",
    "dv_dhar",
    "dv_dhar_trace",
    "dv_dhar_certificate",
    "LinearSystem",
    "ls_member",
    "ls_project",
    "ls_reduced",
    "ls_extremals",
    "ls_bases",
]


def dv_lin_equiv(graph: MetricGraph, d1: Divisor, d2: Divisor) -> bool:
    """Whether the two divisors differ by an integer-slope function."""
    if d1.degree() != d2.degree():
        raise InputError("divisors must have equal degree")
    return mg_potential(graph, d1, d2).slopes_integer()


def _segment_function(graph: MetricGraph, d1: Divisor, d2: Divisor) -> PLFunction:
    """Min-normalized potential from d1 to d2, for equivalent effective pairs."""
    for d, which in ((d1, "first"), (d2, "second")):
        if not d.is_effective():
            raise InputError(f"the {which} divisor must be effective")
    if d1.degree() != d2.degree():
        raise InputError("divisors must have equal degree")
    f = mg_potential(graph, d1, d2)
    if not f.slopes_integer():
        raise InputError("divisors are not linearly equivalent")
    return f


def dv_rho(graph: MetricGraph, d1: Divisor, d2: Divisor) -> Fraction:
    """Chip-firing distance between equivalent effective divisors."""
    return _segment_function(graph, d1, d2).max_value()


def dv_path(graph: MetricGraph, d1: Divisor, d2: Divisor, t) -> Divisor:
    """The divisor at parameter t on the segment from d1 to d2.

    The segment is traced by clipping the normalized potential at level t,
    so every intermediate divisor is effective of the same degree.
    """
    f = _segment_function(graph, d1, d2)
    t = as_fraction(t)
    rho = f.max_value()
    if not (0 <= t <= rho):
        raise InputError(f"t must lie in [0, {rho}]")
    return f.clip_max(t).divisor().add(d1)


def dv_b1(graph: MetricGraph, d: Divisor, e: Divisor) -> Fraction:
    """One-sided linear pseudonorm of d - e: the integral of the
    min-normalized potential from e to d over the whole graph."""
    if d.degree() != e.degree():
        raise InputError("divisors must have equal degree")
    return mg_potential(graph, e, d).integral()


# ---------------------------------------------------------------------------
# reduced divisors by metric burning
# ---------------------------------------------------------------------------

def _burn_once(graph: MetricGraph, d: Divisor, q: GraphPoint):
    """One burning pass from q.

    Fire starts at q and crosses a point only when the arriving directions
    outnumber its chips. Returns (consumed, state) where state carries the
    maximal unburnt closed set and the burnt arms hanging off it.
    """
    support = d.support()
    sub = Subdivision(graph, support + [q])
    n = len(sub.nodes)
    chips = [Fraction(0)] * n
    for p, c in d.items():
        chips[sub.node_of(p)] = c
    inc: list[list[int]] = [[] for _ in range(n)]
    for a, b, _, _, _ in sub.segments:
        inc[a].append(b)
        inc[b].append(a)
    burnt = [False] * n
    burnt[sub.node_of(q)] = True
    changed = True
    while changed:
        changed = False
        for node in range(n):
            if burnt[node]:
                continue
            arrivals = sum(1 for other in inc[node] if burnt[other])
            if arrivals > chips[node]:
                burnt[node] = True
                changed = True
    if all(burnt):
        return True, None
    vertices = set()
    intervals: dict[str, list[tuple[Fraction, Fraction]]] = {}
    for idx, node in enumerate(sub.nodes):
        if burnt[idx]:
            continue
        if node[0] == "v":
            vertices.add(node[1])
        else:
            intervals.setdefault(node[1], []).append((node[2], node[2]))
    arms = []  # (unburnt node, burnt node, length, edge id, start offset)
    for a, b, length, eid, off in sub.segments:
        if not burnt[a] and not burnt[b]:
            intervals.setdefault(eid, []).append((off, off + length))
        elif burnt[a] != burnt[b]:
            arms.append((b if burnt[a] else a, a if burnt[a] else b, length, eid, off))
    unburnt_set = ClosedSubset(graph, vertices, intervals)
    return False, {"sub": sub, "burnt": burnt, "set": unburnt_set, "arms": arms}


def _fire_step(graph: MetricGraph, d: Divisor, state) -> tuple[Divisor, Fraction]:
    """Fire the unburnt set by the largest event-free distance.

    The firing function is 0 on the unburnt set, rises with slope 1 along
    each burnt arm, and plateaus at the length of the shortest arm; chips
    leave the boundary and land on the advancing front.
    """
    sub = state["sub"]
    burnt = state["burnt"]
    l_star = min(length for _, _, length, _, _ in state["arms"])
    vertex_vals = {}
    cuts: dict[str, list[tuple[Fraction, Fraction]]] = {}
    for idx, node in enumerate(sub.nodes):
        val = l_star if burnt[idx] else Fraction(0)
        if node[0] == "v":
            vertex_vals[node[1]] = val
        else:
            cuts.setdefault(node[1], []).append((node[2], val))
    for a, b, length, eid, off in sub.segments:
        if burnt[a] != burnt[b] and length > l_star:
            plateau = off + l_star if burnt[b] else off + length - l_star
            cuts.setdefault(eid, []).append((plateau, l_star))
    f = PLFunction.from_node_values(graph, vertex_vals, cuts)
    fired = d.add(f.divisor())
    if not (fired.is_effective() and fired.is_integral()):
        raise CertificateError("chip-firing produced an invalid divisor",
                               {"divisor": str(fired)})
    return fired, l_star


def _dhar_round_cap(graph: MetricGraph, d: Divisor, q: GraphPoint) -> int:
    denom = 1
    for e in graph.edges:
        denom = lcm(denom, e.length.denominator)
    for p in d.support() + [q]:
        if not p.is_vertex:
            denom = lcm(denom, p.offset.denominator)
    scaled_length = int(graph.total_length * denom)
    return 64 * (1 + scaled_length) * (int(d.degree()) + 2)


def dv_dhar_trace(graph: MetricGraph, d: Divisor, q: GraphPoint):
    """Reduced form of d at q by repeated burning, with the firing trace."""
    if not isinstance(q, GraphPoint):
        raise InputError("q must be a graph point")
    if not d.is_effective() or not d.is_integral():
        raise InputError("the divisor must be effective with integer coefficients")
    cap = _dhar_round_cap(graph, d, q)
    current = d
    steps = []
    while True:
        consumed, state = _burn_once(graph, current, q)
        if consumed:
            return current, steps
        if len(steps) >= cap:
            raise CertificateError("chip-firing did not stabilize within the safety cap",
                                   {"rounds": len(steps)})
        current, l_star = _fire_step(graph, current, state)
        steps.append({"fired_set": state["set"], "distance": l_star})


def dv_dhar(graph: MetricGraph, d: Divisor, q: GraphPoint) -> Divisor:
    """The unique q-reduced divisor linearly equivalent to d.

    Repeatedly finds the maximal closed set the fire from q cannot enter
    and fires it toward q, until burning consumes the whole graph.
    """
    reduced, _ = dv_dhar_trace(graph, d, q)
    return reduced


def dv_dhar_certificate(graph: MetricGraph, d: Divisor, q: GraphPoint):
    """Burning certificate: does fire from q consume the whole graph?

    Returns (consumed, unburnt ClosedSubset or None); consumed means d is
    already q-reduced.
    """
    if not d.is_effective() or not d.is_integral():
        raise InputError("the divisor must be effective with integer coefficients")
    consumed, state = _burn_once(graph, d, q)
    return consumed, None if consumed else state["set"]


# ---------------------------------------------------------------------------
# linear systems
# ---------------------------------------------------------------------------

class LinearSystem:
    """Tropically convex family of effective divisors, given by generators.

    Generators must be effective divisors with integer coefficients, all of
    one degree and pairwise linearly equivalent. Every divisor the system
    touches gets one exact potential solve against generator 0, cached, so
    segment sweeps and tree machinery are pure piecewise-linear arithmetic
    afterwards.
    """

    def __init__(self, graph: MetricGraph, generators: Sequence[Divisor]):
        gens = list(generators)
        if not gens:
            raise InputError("a linear system needs at least one generator")
        for i, g in enumerate(gens):
            if not isinstance(g, Divisor):
                raise InputError(f"generator {i} is not a divisor")
            if not g.is_effective():
                raise InputError(f"generator {i} must be effective")
            if not g.is_integral():
                raise InputError(f"generator {i} must have integer coefficients")
        deg = gens[0].degree()
        if any(g.degree() != deg for g in gens):
            raise InputError("generators must share one degree")
        self.graph = graph
        self.generators = tuple(gens)
        self.degree: Fraction = deg
        self._pots: dict[tuple, PLFunction] = {
            gens[0].key(): PLFunction.constant(graph, 0)}
        self._rho_cache: dict[tuple, Fraction] = {}
        self._path_cache: dict[tuple, Divisor] = {}
        self.memo: dict = {}
        for i, g in enumerate(gens):
            if not self.potential(g).slopes_integer():
                raise InputError(
                    f"generator {i} is not linearly equivalent to generator 0")

    def potential(self, d: Divisor) -> PLFunction:
        """Potential of d relative to generator 0 (cached, one solve)."""
        key = d.key()
        pot = self._pots.get(key)
        if pot is None:
            if d.degree() != self.degree:
                raise InputError("divisor degree does not match the system")
            pot = mg_potential(self.graph, self.generators[0], d)
            self._pots[key] = pot
        return pot

    def register(self, d: Divisor, pot: PLFunction) -> None:
        """Record a known potential (relative to generator 0) for d."""
        self._pots.setdefault(d.key(), pot)

    def pair_function(self, a: Divisor, b: Divisor) -> PLFunction:
        """Min-normalized potential from a to b, via cached references."""
        return self.potential(b).sub(self.potential(a)).minus_min()

    def rho(self, a: Divisor, b: Divisor) -> Fraction:
        key = tuple(sorted((a.key(), b.key())))
        hit = self._rho_cache.get(key)
        if hit is None:
            hit = self.pair_function(a, b).max_value()
            self._rho_cache[key] = hit
        return hit

    def path_point(self, a: Divisor, b: Divisor, t) -> Divisor:
        """Divisor at parameter t along the segment from a to b.

        Also registers the new divisor's potential, so walking a segment
        costs no additional solves.
        """
        t = as_fraction(t)
        key = (a.key(), b.key(), t)
        hit = self._path_cache.get(key)
        if hit is not None:
            return hit
        f = self.pair_function(a, b)
        if not (0 <= t <= f.max_value()):
            raise InputError(f"t must lie in [0, {f.max_value()}]")
        clipped = f.clip_max(t)
        point = clipped.divisor().add(a)
        self.register(point, clipped.add(self.potential(a)))
        self._path_cache[key] = point
        return point

    def is_generator(self, d: Divisor) -> bool:
        key = d.key()
        return any(g.key() == key for g in self.generators)


def _check_target(T: LinearSystem, e: Divisor) -> None:
    if not isinstance(e, Divisor):
        raise InputError("the target must be a divisor")
    if e.degree() != T.degree:
        raise InputError("divisor degree does not match the system")
    if not e.is_effective():
        raise InputError("the target divisor must be effective")


def _min_sets_cover(T: LinearSystem, gens: Sequence[Divisor], e: Divisor):
    """Union of minimizer sets of the potentials toward each generator."""
    sets = [T.pair_function(e, g).extremum_set("min") for g in gens]
    union = sets[0]
    for s in sets[1:]:
        union = union.union(s)
    return sets, union


def ls_member(T: LinearSystem, e: Divisor):
    """Membership in the system, with a covering certificate.

    e belongs to the family iff the minimizer sets of the potentials from
    e toward the generators jointly cover the graph. Returns (bool, cert);
    the certificate carries the per-generator sets and, on failure, the
    uncovered components.
    """
    _check_target(T, e)
    if not e.is_integral():
        return False, {"member": False, "reason": "coefficients are not integers",
                       "min_sets": [], "uncovered": []}
    if not T.potential(e).slopes_integer():
        return False, {"member": False, "reason": "not linearly equivalent to the generators",
                       "min_sets": [], "uncovered": []}
    sets, union = _min_sets_cover(T, T.generators, e)
    covered = union.covers_graph()
    cert = {
        "member": covered,
        "min_sets": sets,
        "uncovered": [] if covered else union.complement_components(),
    }
    return covered, cert


def ls_project(T: LinearSystem, e: Divisor):
    """Nearest member of the system, with optimality certificates.

    Residuated construction: shift each generator potential to touch zero
    and take the pointwise minimum f*; the projection is div(f*) + e. Each
    generator is then checked for additivity of the linear pseudonorm
    through the projection and for a common minimizer witness; failure of
    either check raises CertificateError.
    """
    _check_target(T, e)
    g_bars = [T.pair_function(e, g) for g in T.generators]
    f_star = g_bars[0]
    for g in g_bars[1:]:
        f_star = f_star.min_with(g)
    projection = f_star.divisor().add(e)
    if not projection.is_integral() or not projection.is_effective():
        raise CertificateError("projection is not an effective integer divisor",
                               {"projection": str(projection)})
    T.register(projection, f_star.add(T.potential(e)))
    f_star_min = f_star.extremum_set("min")
    checks = []
    for i, g_bar in enumerate(g_bars):
        to_projection = g_bar.sub(f_star).minus_min()
        b_total = g_bar.integral()
        b_upper = to_projection.integral()
        b_lower = f_star.integral()
        witness = to_projection.extremum_set("min").intersect(f_star_min)
        checks.append({
            "generator": i,
            "b1_total": b_total,
            "b1_to_projection": b_upper,
            "b1_from_projection": b_lower,
            "witness": witness,
        })
        if b_total != b_upper + b_lower:
            raise CertificateError(
                "projection failed the 1-pseudonorm additivity certificate",
                {"generator": i, "total": str(b_total), "split": str(b_upper + b_lower)})
        if witness.is_empty():
            raise CertificateError(
                "projection failed the minimizer intersection certificate",
                {"generator": i})
    member, member_cert = ls_member(T, projection)
    if not member:
        raise CertificateError("projection is not a member of the system",
                               {"projection": str(projection)})
    return projection, {"checks": checks, "membership": member_cert}


def ls_reduced(T: LinearSystem, q: GraphPoint):
    """The q-reduced divisor of the system: the projection of deg·(q)."""
    if not isinstance(q, GraphPoint):
        raise InputError("q must be a graph point")
    target = Divisor.of(T.graph, [(q, T.degree)])
    return ls_project(T, target)


def ls_extremals(T: LinearSystem) -> list[Divisor]:
    """Unique minimal generating subset, by greedy redundancy removal."""
    gens: list[Divisor] = []
    seen = set()
    for g in T.generators:
        if g.key() not in seen:
            seen.add(g.key())
            gens.append(g)
    changed = True
    while changed and len(gens) > 1:
        changed = False
        for i in range(len(gens)):
            others = gens[:i] + gens[i + 1:]
            _, union = _min_sets_cover(T, others, gens[i])
            if union.covers_graph():
                gens.pop(i)
                changed = True
                break
    return gens


def ls_bases(T: LinearSystem, d: Divisor) -> list[ClosedSubset]:
    """All bases of effective chip-firing moves inside the system from d.

    One candidate per generator direction: the minimizer set of the
    potential from d toward that generator (constant along the segment
    until the first critical level); the whole graph (no move) is skipped
    and duplicates are merged.
    """
    member, _ = ls_member(T, d)
    if not member:
        raise InputError("the divisor is not a member of the system")
    bases: list[ClosedSubset] = []
    seen = set()
    for g in T.generators:
        f_bar = T.pair_function(d, g)
        if f_bar.max_value() == 0:
            continue
        base = f_bar.extremum_set("min")
        if base.key() not in seen:
            seen.add(base.key())
            bases.append(base)
    return sorted(bases, key=ClosedSubset.key)
