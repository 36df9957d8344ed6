"""Min-plus projective geometry over a finite weighted ground set.

A point is a real-valued function on a finite set X taken modulo additive
constants. The canonical representative subtracts the minimum, so stored
coordinates are nonnegative rationals with at least one zero. Two flavors
of convexity appear throughout:

  lower: hulls of min-combinations  [min_i (c_i + f_i)]
  upper: hulls of max-combinations  [max_i (c_i + f_i)]

Every upper-mode operation is realized by negating data, running the lower
code path, and negating back, so there is a single implementation of each
algorithm. Arithmetic is exact (fractions.Fraction); the only float in the
module is the informational p=2 pseudonorm.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CertificateError, InputError

__all__ = [
    "GroundSpace",
    "TropPoint",
    "TropGeneratorSet",
    "tp_canonical",
    "tp_combine",
    "tp_norm",
    "tp_dist",
    "tp_pseudonorm",
    "tp_argext",
    "tp_path",
    "tp_member",
    "tp_project",
    "tp_extremals",
    "tp_independence",
    "tp_retract",
    "tp_fixed_point",
]


def as_fraction(x) -> Fraction:
    """Coerce an int, string like '3/4', or Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not an exact rational: {x!r}") from exc
    if isinstance(x, float):
        raise InputError(f"floats are not accepted, use a rational string: {x!r}")
    raise InputError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class GroundSpace:
    """Finite ground set with positive weights (a measure with full support)."""

    labels: tuple[str, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.labels:
            raise InputError("ground set must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("ground labels must be distinct")
        if len(self.weights) != len(self.labels):
            raise InputError("need exactly one weight per ground element")
        if any(w <= 0 for w in self.weights):
            raise InputError("weights must be positive")

    @classmethod
    def of(cls, labels: Iterable[str], weights: Iterable | None = None) -> "GroundSpace":
        labels = tuple(str(l) for l in labels)
        if weights is None:
            # default: uniform probability weights
            weights = tuple(Fraction(1, len(labels)) for _ in labels) if labels else ()
        else:
            weights = tuple(as_fraction(w) for w in weights)
        return cls(labels, weights)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def total_mass(self) -> Fraction:
        return sum(self.weights, Fraction(0))


@dataclass(frozen=True)
class TropPoint:
    """A point of min-plus projective space, stored with minimum zero."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coords:
            raise InputError("a point needs at least one coordinate")
        if min(self.coords) != 0:
            raise InputError("canonical coordinates must have minimum zero")

    @classmethod
    def of(cls, values: Iterable) -> "TropPoint":
        vals = tuple(as_fraction(v) for v in values)
        if not vals:
            raise InputError("a point needs at least one coordinate")
        m = min(vals)
        return cls(tuple(v - m for v in vals))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def diff(self, other: "TropPoint") -> "TropPoint":
        """Class of the coordinatewise difference self - other."""
        _check_dim(self, other)
        return TropPoint.of(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def add(self, other: "TropPoint") -> "TropPoint":
        _check_dim(self, other)
        return TropPoint.of(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def negate(self) -> "TropPoint":
        return TropPoint.of(tuple(-a for a in self.coords))

    def max_normalized(self) -> tuple[Fraction, ...]:
        """Representative with maximum zero (nonpositive coordinates)."""
        m = max(self.coords)
        return tuple(a - m for a in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _check_dim(a: TropPoint, b: TropPoint) -> None:
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


@dataclass(frozen=True)
class TropGeneratorSet:
    """A finite generating set together with the hull flavor it spans."""

    points: tuple[TropPoint, ...]
    mode: str = "lower"

    def __post_init__(self):
        if self.mode not in ("lower", "upper"):
            raise InputError(f"mode must be 'lower' or 'upper', got {self.mode!r}")
        if not self.points:
            raise InputError("generator set must be nonempty")
        dims = {p.dim for p in self.points}
        if len(dims) != 1:
            raise InputError("generators must share one dimension")

    @classmethod
    def of(cls, points: Iterable, mode: str = "lower") -> "TropGeneratorSet":
        pts, seen = [], set()
        for p in points:
            if not isinstance(p, TropPoint):
                p = TropPoint.of(p)
            if p.coords not in seen:
                seen.add(p.coords)
                pts.append(p)
        return cls(tuple(pts), mode)

    @property
    def dim(self) -> int:
        return self.points[0].dim

    def negate(self) -> "TropGeneratorSet":
        flipped = "upper" if self.mode == "lower" else "lower"
        return TropGeneratorSet(tuple(p.negate() for p in self.points), flipped)


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------

def tp_canonical(values: Iterable) -> TropPoint:
    """Canonicalize raw coordinates to the minimum-zero representative."""
    return TropPoint.of(values)


def tp_combine(points: Sequence[TropPoint], coeffs: Sequence, mode: str = "lower") -> TropPoint:
    """Min- (or max-) combination [op_i (c_i + f_i)] of the given points."""
    if len(points) != len(coeffs):
        raise InputError("need one coefficient per point")
    if not points:
        raise InputError("combination of an empty family")
    cs = [as_fraction(c) for c in coeffs]
    dims = {p.dim for p in points}
    if len(dims) != 1:
        raise InputError("points must share one dimension")
    op = min if mode == "lower" else max
    if mode not in ("lower", "upper"):
        raise InputError(f"mode must be 'lower' or 'upper', got {mode!r}")
    vec = [op(p.coords[k] + c for p, c in zip(points, cs)) for k in range(points[0].dim)]
    return TropPoint.of(vec)


def tp_norm(point: TropPoint) -> Fraction:
    """Spread of the class: max minus min of any representative."""
    return max(point.coords)


def tp_dist(a: TropPoint, b: TropPoint) -> Fraction:
    """Projective distance: the norm of the difference class."""
    return tp_norm(a.diff(b))


def tp_pseudonorm(point: TropPoint, p, mode: str = "lower",
                  space: GroundSpace | None = None):
    """Weighted one-sided pseudonorm of the class.

    lower: p-norm of the minimum-zero representative;
    upper: p-norm of (representative minus its maximum), i.e. of the
    distance down from the top. p is 1, 2, or the string 'inf'. The p=2
    value is a float and is informational only; everything else is exact.
    """
    if space is None:
        space = GroundSpace.of([f"x{i}" for i in range(point.dim)])
    if space.size != point.dim:
        raise InputError("space size does not match point dimension")
    if mode == "lower":
        vec = point.coords
    elif mode == "upper":
        vec = tuple(-v for v in point.max_normalized())
    else:
        raise InputError(f"mode must be 'lower' or 'upper', got {mode!r}")
    if p == "inf" or p == math.inf:
        return max(vec)
    if p == 1:
        return sum((w * v for w, v in zip(space.weights, vec)), Fraction(0))
    if p == 2:
        return math.sqrt(sum(float(w) * float(v) ** 2 for w, v in zip(space.weights, vec)))
    raise InputError(f"p must be 1, 2 or 'inf', got {p!r}")


def tp_argext(point: TropPoint, which: str = "min") -> frozenset:
    """Index set where the class attains its minimum (or maximum)."""
    if which == "min":
        return frozenset(i for i, v in enumerate(point.coords) if v == 0)
    if which == "max":
        m = max(point.coords)
        return frozenset(i for i, v in enumerate(point.coords) if v == m)
    raise InputError(f"which must be 'min' or 'max', got {which!r}")


def tp_path(a: TropPoint, b: TropPoint, t, mode: str = "lower") -> TropPoint:
    """Point at arc length t along the geodesic segment from a to b.

    The lower segment tracks [min(t, d) + f] where d is the minimum-zero
    representative of b - a; the upper segment is its negation dual.
    Both are unit-speed: consecutive points are at distance |t1 - t2|.
    """
    t = as_fraction(t)
    if mode == "upper":
        return tp_path(a.negate(), b.negate(), t, "lower").negate()
    if mode != "lower":
        raise InputError(f"mode must be 'lower' or 'upper', got {mode!r}")
    _check_dim(a, b)
    d = b.diff(a)
    rho = tp_norm(d)
    if not (0 <= t <= rho):
        raise InputError(f"t={t} outside [0, {rho}]")
    return TropPoint.of(tuple(min(t, dv) + av for dv, av in zip(d.coords, a.coords)))


# ---------------------------------------------------------------------------
# hulls: membership, projection, extremals
# ---------------------------------------------------------------------------

def _member_lower(points: Sequence[TropPoint], gamma: TropPoint):
    """Covering test: gamma is in the lower hull iff the argmin sets of the
    differences generator - gamma jointly cover the ground set."""
    n = gamma.dim
    cover = []
    coeffs = []
    union: set[int] = set()
    for g in points:
        d = g.diff(gamma)
        amin = tp_argext(d, "min")
        cover.append(sorted(amin))
        union |= amin
        # combination coefficient that brings this generator down to gamma
        raw = [gc - hc for gc, hc in zip(g.coords, gamma.coords)]
        coeffs.append(-min(raw))
    ok = len(union) == n
    cert = {
        "cover": cover,
        "coefficients": coeffs,
        "missing": sorted(set(range(n)) - union),
    }
    if ok:
        combo = tp_combine(list(points), coeffs, "lower")
        if combo != gamma:
            raise CertificateError("membership combination failed to reproduce the point",
                                   {"combo": str(combo), "point": str(gamma)})
    return ok, cert


def tp_member(S: TropGeneratorSet, gamma: TropPoint):
    """Hull membership with a covering certificate.

    Returns (bool, certificate). The certificate lists, per generator, the
    extremum set of generator - gamma (argmin for lower hulls, argmax for
    upper hulls); membership holds iff those sets cover the ground set.
    On a positive answer the returned coefficients reproduce gamma exactly.
    """
    if gamma.dim != S.dim:
        raise InputError("point dimension does not match generators")
    if S.mode == "upper":
        ok, cert = _member_lower([p.negate() for p in S.points], gamma.negate())
        cert["coefficients"] = [-c for c in cert["coefficients"]]
        return ok, cert
    return _member_lower(list(S.points), gamma)


def _project_lower(points: Sequence[TropPoint], gamma: TropPoint,
                   space: GroundSpace | None):
    """Residuated nearest point of the lower hull, with certificates."""
    if space is None:
        space = GroundSpace.of([f"x{i}" for i in range(gamma.dim)])
    coeffs = []
    shifted = []
    for g in points:
        raw = [gc - hc for gc, hc in zip(g.coords, gamma.coords)]
        c = -min(raw)
        coeffs.append(c)
        shifted.append(tuple(gc + c for gc in g.coords))
    f_star = TropPoint.of(tuple(min(col) for col in zip(*shifted)))
    # optimality certificates, one per generator:
    #   additivity of the weighted one-sided 1-pseudonorm through the projection
    #   and a common index where generator-to-projection and
    #   projection-to-point drops both bottom out
    checks = []
    for i, g in enumerate(points):
        bg = tp_pseudonorm(g.diff(gamma), 1, "lower", space)
        ba = tp_pseudonorm(g.diff(f_star), 1, "lower", space)
        ag = tp_pseudonorm(f_star.diff(gamma), 1, "lower", space)
        witness = tp_argext(g.diff(f_star), "min") & tp_argext(f_star.diff(gamma), "min")
        checks.append({
            "generator": i,
            "b1_total": bg,
            "b1_to_projection": ba,
            "b1_from_projection": ag,
            "witness": sorted(witness),
        })
        if bg != ba + ag:
            raise CertificateError(
                "projection failed the 1-pseudonorm additivity certificate",
                {"generator": i, "total": str(bg), "split": str(ba + ag)})
        if not witness:
            raise CertificateError(
                "projection failed the argmin intersection certificate",
                {"generator": i})
    return f_star, {"coefficients": coeffs, "checks": checks}


def tp_project(S: TropGeneratorSet, gamma: TropPoint,
               space: GroundSpace | None = None):
    """Nearest point of the hull, as (projection, certificate).

    The projection is the residuated combination min_i (g_i + c_i) with
    c_i = -min(g_i - gamma) (negation dual for upper hulls). It is the
    unique minimizer of every weighted one-sided p-pseudonorm distance to
    gamma for finite p, is the identity on hull members, and is verified
    here by per-generator additivity and argmin-intersection certificates.
    """
    if gamma.dim != S.dim:
        raise InputError("point dimension does not match generators")
    if S.mode == "upper":
        dual_space = space
        proj, cert = _project_lower([p.negate() for p in S.points],
                                    gamma.negate(), dual_space)
        cert["coefficients"] = [-c for c in cert["coefficients"]]
        return proj.negate(), cert
    return _project_lower(list(S.points), gamma, space)


def tp_extremals(S: TropGeneratorSet) -> TropGeneratorSet:
    """Unique minimal generating subset, by greedy redundancy removal."""
    pts = list(dict.fromkeys(S.points))  # dedupe, keep order
    changed = True
    while changed and len(pts) > 1:
        changed = False
        for i, p in enumerate(pts):
            rest = pts[:i] + pts[i + 1:]
            ok, _ = tp_member(TropGeneratorSet.of(rest, S.mode), p)
            if ok:
                pts.pop(i)
                changed = True
                break
    return TropGeneratorSet.of(pts, S.mode)


# ---------------------------------------------------------------------------
# independence
# ---------------------------------------------------------------------------

def _integer_scale(points: Sequence[TropPoint]) -> int:
    denom = 1
    for p in points:
        for c in p.coords:
            denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return denom


def _scale_point(p: TropPoint, s: int) -> TropPoint:
    return TropPoint.of(tuple(c * s for c in p.coords))


def _gm_partition_meets(left: list[TropPoint], right: list[TropPoint], cap: int):
    """Alternating residuated projections between two lower hulls.

    Returns ('meet', point), ('disjoint', None) or ('undecided', None).
    """
    SL = TropGeneratorSet.of(left, "lower")
    SR = TropGeneratorSet.of(right, "lower")
    alpha = left[0]
    prev = None
    for _ in range(cap):
        beta, _ = tp_project(SR, alpha)
        if beta == alpha:
            return "meet", alpha
        alpha2, _ = tp_project(SL, beta)
        if alpha2 == beta:
            return "meet", beta
        if alpha2 == alpha and prev == (alpha.coords, beta.coords):
            # fixed pair at positive distance: the hulls do not meet
            return "disjoint", None
        prev = (alpha2.coords, beta.coords)
        alpha = alpha2
    return "undecided", None


def tp_independence(S: TropGeneratorSet, kind: str = "weak"):
    """Independence check of one of three strengths.

    weak: no generator lies in the hull of the others.
    gondran_minoux: no 2-partition of the generators has meeting hulls
      (decided by alternating projections on integer-scaled data with an
      iteration cap; may report 'undecided' when the cap is hit).
    tropical: no coefficients make every ground element attain the
      combination envelope at least twice (decided exactly by choosing,
      for every ground element, which pair of generators ties at the
      minimum there, and testing each choice as a difference-constraint
      system; families too large for that enumeration report 'undecided').

    Returns a dict with keys status ('independent', 'dependent' or
    'undecided'), kind, and certificate.
    """
    pts = list(dict.fromkeys(S.points))
    n = len(pts)
    if kind == "weak":
        for i, p in enumerate(pts):
            if len(pts) == 1:
                break
            rest = pts[:i] + pts[i + 1:]
            ok, cert = tp_member(TropGeneratorSet.of(rest, S.mode), p)
            if ok:
                return {"kind": kind, "status": "dependent",
                        "certificate": {"redundant_index": i, "cover": cert["cover"],
                                        "coefficients": cert["coefficients"]}}
        return {"kind": kind, "status": "independent", "certificate": None}

    if kind == "gondran_minoux":
        if n < 2:
            return {"kind": kind, "status": "independent", "certificate": None}
        scale = _integer_scale(pts)
        scaled = [_scale_point(p, scale) for p in pts]
        if S.mode == "upper":
            scaled = [p.negate() for p in scaled]
        spread = max(tp_norm(p) for p in scaled)
        cap = max(4, int(10 * spread * scaled[0].dim))
        undecided = False
        for mask in range(2 ** (n - 1)):
            left_idx = [0] + [i for i in range(1, n) if mask & (1 << (i - 1))]
            right_idx = [i for i in range(1, n) if not mask & (1 << (i - 1))]
            if not right_idx:
                continue
            verdict, point = _gm_partition_meets([scaled[i] for i in left_idx],
                                                 [scaled[i] for i in right_idx], cap)
            if verdict == "meet":
                witness = TropPoint.of(tuple(Fraction(c, scale) for c in point.coords))
                if S.mode == "upper":
                    witness = witness.negate()
                return {"kind": kind, "status": "dependent",
                        "certificate": {"partition": [left_idx, right_idx],
                                        "common_point": [str(c) for c in witness.coords]}}
            if verdict == "undecided":
                undecided = True
        if undecided:
            return {"kind": kind, "status": "undecided", "certificate": None}
        return {"kind": kind, "status": "independent", "certificate": None}

    if kind == "tropical":
        if n < 2:
            return {"kind": kind, "status": "independent", "certificate": None}
        vecs = [p.coords if S.mode == "lower" else p.negate().coords for p in pts]
        dim = len(vecs[0])
        scale = _integer_scale(pts)
        ivecs = [[int(v * scale) for v in vec] for vec in vecs]
        tie_pairs = list(itertools.combinations(range(n), 2))
        if len(tie_pairs) ** dim > 2_000_000:
            return {"kind": kind, "status": "undecided", "certificate": None}
        for assignment in itertools.product(tie_pairs, repeat=dim):
            solution = _tie_system_solution(ivecs, assignment)
            if solution is None:
                continue
            base = solution[0]
            cs = [Fraction(c - base, scale) for c in solution]
            if _ties_everywhere(vecs, cs):
                return {"kind": kind, "status": "dependent",
                        "certificate": {"coefficients": [str(c) for c in cs]}}
        return {"kind": kind, "status": "independent", "certificate": None}

    raise InputError(f"kind must be weak, gondran_minoux or tropical, got {kind!r}")


def _ties_everywhere(vecs: Sequence[Sequence[Fraction]], cs: Sequence[Fraction]) -> bool:
    """Every ground element attains min_i (c_i + f_i) at least twice."""
    for x in range(len(vecs[0])):
        vals = [c + v[x] for c, v in zip(cs, vecs)]
        m = min(vals)
        if sum(1 for v in vals if v == m) < 2:
            return False
    return True


def _tie_system_solution(vals, assignment):
    """Coefficients realizing a tie pattern, or None when impossible.

    assignment names, for each ground element x, one pair (i, j) required
    to tie at the minimum of the combination there. That pins down the
    system c_i - c_j = vals[j][x] - vals[i][x] together with
    c_i - c_k <= vals[k][x] - vals[i][x] for every k, a set of difference
    bounds. Bellman-Ford over the bound graph either returns feasible
    potentials or runs into the negative cycle that proves infeasibility.
    """
    n = len(vals)
    bounds: dict[tuple[int, int], int] = {}

    def bound(a: int, b: int, w: int) -> None:
        # records c_a - c_b <= w
        key = (b, a)
        if key not in bounds or w < bounds[key]:
            bounds[key] = w

    for x, (i, j) in enumerate(assignment):
        bound(j, i, vals[i][x] - vals[j][x])
        for k in range(n):
            if k != i:
                bound(i, k, vals[k][x] - vals[i][x])
    edges = [(b, a, w) for (b, a), w in bounds.items()]
    dist = [0] * n
    for _ in range(n + 1):
        changed = False
        for b, a, w in edges:
            if dist[b] + w < dist[a]:
                dist[a] = dist[b] + w
                changed = True
        if not changed:
            return dist
    return None


# ---------------------------------------------------------------------------
# retraction and alternating projections
# ---------------------------------------------------------------------------

def tp_retract(S: TropGeneratorSet, gamma: TropPoint, t):
    """Strong deformation retraction onto the hull, evaluated at time t.

    Uses the profile phi(s) = 1/(1+s): the point rests at gamma while
    t < phi(distance to hull), then slides along the geodesic toward its
    projection, arriving exactly at t = 1. The map is the identity on the
    hull for every t and is 2-Lipschitz in the point argument.
    """
    t = as_fraction(t)
    if not (0 <= t <= 1):
        raise InputError(f"t={t} outside [0, 1]")
    proj, _ = tp_project(S, gamma)
    d = tp_dist(gamma, proj)
    if d == 0:
        return gamma
    phi = Fraction(1, 1) / (1 + d)
    if t < phi:
        return gamma
    travelled = d - (Fraction(1) / t - 1)
    return tp_path(gamma, proj, travelled, S.mode)


def tp_fixed_point(S_low: TropGeneratorSet, S_up: TropGeneratorSet, gamma: TropPoint):
    """Bounce a point between a lower hull and an upper hull.

    Precondition: gamma lies in the upper hull. One projection onto the
    lower hull, one back onto the upper hull, and one more onto the lower
    hull must return to the first landing point; the stabilized pair is
    returned along with the trace.
    """
    if S_low.mode != "lower" or S_up.mode != "upper":
        raise InputError("expected a lower-mode and an upper-mode generator set")
    ok, _ = tp_member(S_up, gamma)
    if not ok:
        raise InputError("the start point must lie in the upper hull")
    alpha, _ = tp_project(S_low, gamma)
    beta, _ = tp_project(S_up, alpha)
    alpha2, _ = tp_project(S_low, beta)
    if alpha2 != alpha:
        raise CertificateError("alternating projections did not stabilize in one round",
                               {"alpha": str(alpha), "alpha2": str(alpha2)})
    return {"start": gamma, "lower": alpha, "upper": beta,
            "distance": tp_dist(alpha, beta)}
