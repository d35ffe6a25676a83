"""Exact computations on jet schemes of plane curve branches.

The package computes, for an analytically irreducible plane curve over the
rationals: the numerical semigroup of the branch, equations and generic
points of its jet schemes, curve and divisorial valuations, generating
sequences read off from jet-scheme geometry, and a toric re-embedding of
the plane that resolves the branch in one step.
"""

from .branch import (
    BranchParam,
    SemigroupData,
    branch_compose,
    newton_puiseux,
    normal_form,
    reconstruct_f,
    semigroup,
)
from .errors import ClaimViolation, DomainError, ParseError, ValjetError
from .genseq import (
    GenSeq,
    approximate_roots_oracle,
    run_genseq,
    run_genseq_divisorial,
    trace_report,
    verify_genseq,
)
from .jets import classify_components, codim_jump, contact_vector, expand_jets
from .poly import MultiPoly, parse_poly, render_poly
from .toric import (
    Cone,
    Embedding,
    Fan,
    ToricResult,
    build_embedding,
    chart_map,
    check_nondegeneracy,
    dual_fan_refinement,
    regularize,
    stellar_subdivide,
    strict_transform,
    toric_resolution,
    verify_resolution,
    weight_vector,
)
from .valuation import initial_form, kappa_bound, nu_C, nu_E
from .zerotest import ZeroTestPolicy, jet_vanishing_checks, witness_digest

__version__ = "0.1.0"

__all__ = [
    "BranchParam",
    "ClaimViolation",
    "Cone",
    "DomainError",
    "Embedding",
    "Fan",
    "GenSeq",
    "MultiPoly",
    "ParseError",
    "SemigroupData",
    "ToricResult",
    "ValjetError",
    "ZeroTestPolicy",
    "approximate_roots_oracle",
    "branch_compose",
    "build_embedding",
    "chart_map",
    "check_nondegeneracy",
    "classify_components",
    "codim_jump",
    "contact_vector",
    "dual_fan_refinement",
    "expand_jets",
    "initial_form",
    "jet_vanishing_checks",
    "kappa_bound",
    "newton_puiseux",
    "normal_form",
    "nu_C",
    "nu_E",
    "parse_poly",
    "reconstruct_f",
    "regularize",
    "render_poly",
    "run_genseq",
    "run_genseq_divisorial",
    "semigroup",
    "stellar_subdivide",
    "strict_transform",
    "toric_resolution",
    "trace_report",
    "verify_genseq",
    "verify_resolution",
    "weight_vector",
    "witness_digest",
]
