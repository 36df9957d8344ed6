"""Exact toolkit for tropical convexity and divisor theory on metric graphs.

Four layers, each usable on its own:

- ``tropical``: min-plus projective space over a finite weighted ground
  set; segments, pseudonorms, hull membership, residuated projection,
  extremals, independence, retraction.
- ``graphs``: compact connected metric graphs with exact piecewise-linear
  calculus, divisors, closed subsets, and electrical potentials solved
  over the rationals.
- ``divisors``: linear equivalence, chip-firing segments, linear systems
  with certified membership/projection/reduction, and reduced divisors by
  metric burning.
- ``trees``: one-dimensional systems (tropical trees), their skeletons,
  the reduced-divisor map as a verified pseudo-harmonic morphism,
  harmonization by branch attachment, and stable gonality witnesses.

Everything computes in ``fractions.Fraction``; no floats enter any
decision.  The ``tropkit`` command line (``cli``) serves the same
operations over JSON workspace files (``workspace``).
"""

from .errors import CertificateError, InputError
from .tropical import (
    GroundSpace,
    TropGeneratorSet,
    TropPoint,
    as_fraction,
    tp_argext,
    tp_canonical,
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
from .graphs import (
    ClosedSubset,
    Divisor,
    Edge,
    GraphPoint,
    MetricGraph,
    PLFunction,
    mg_distance,
    mg_jfunction,
    mg_potential,
    mg_resistance,
    mg_validate,
    pl_div,
    pl_eval,
    pl_extremum_set,
    pl_integral,
)
from .divisors import (
    LinearSystem,
    dv_b1,
    dv_dhar,
    dv_dhar_certificate,
    dv_dhar_trace,
    dv_lin_equiv,
    dv_path,
    dv_rho,
    ls_bases,
    ls_extremals,
    ls_member,
    ls_project,
    ls_reduced,
)
from .trees import (
    Attachment,
    Modification,
    PseudoHarmonicMap,
    SkeletonArc,
    SubArcMap,
    TreeSkeleton,
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
from .workspace import (
    Workspace,
    divisor_from_json,
    dumps_canonical,
    load_workspace,
    parse_rational,
    parse_workspace,
    point_from_json,
    rational_str,
    serialize_workspace,
    to_jsonable,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateError",
    "InputError",
    "GroundSpace",
    "TropGeneratorSet",
    "TropPoint",
    "as_fraction",
    "tp_argext",
    "tp_canonical",
    "tp_combine",
    "tp_dist",
    "tp_extremals",
    "tp_fixed_point",
    "tp_independence",
    "tp_member",
    "tp_norm",
    "tp_path",
    "tp_project",
    "tp_pseudonorm",
    "tp_retract",
    "ClosedSubset",
    "Divisor",
    "Edge",
    "GraphPoint",
    "MetricGraph",
    "PLFunction",
    "mg_distance",
    "mg_jfunction",
    "mg_potential",
    "mg_resistance",
    "mg_validate",
    "pl_div",
    "pl_eval",
    "pl_extremum_set",
    "pl_integral",
    "LinearSystem",
    "dv_b1",
    "dv_dhar",
    "dv_dhar_certificate",
    "dv_dhar_trace",
    "dv_lin_equiv",
    "dv_path",
    "dv_rho",
    "ls_bases",
    "ls_extremals",
    "ls_member",
    "ls_project",
    "ls_reduced",
    "Attachment",
    "Modification",
    "PseudoHarmonicMap",
    "SkeletonArc",
    "SubArcMap",
    "TreeSkeleton",
    "tt_critical",
    "tt_harmonize",
    "tt_is_dominant",
    "tt_is_tree",
    "tt_morphism",
    "tt_preimage",
    "tt_reduced_map",
    "tt_skeleton",
    "tt_support",
    "tt_verify_witness",
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
    "__version__",
]
