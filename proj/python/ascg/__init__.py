"""Away-step conditional gradient over polytopes."""

from ._ascg import (
    Error,
    GeometricConstants,
    Objective,
    Polytope,
    Trace,
    diameter_of_image,
    generate_l1ls,
    geometric_constants,
    hoffman_theta,
    load_problem,
    mapped_oracle_counterexample,
    mapped_oracle_naive,
    rate_certificate,
    reduce_full,
    solve,
    vertex_oracle,
)

__all__ = [
    "Error",
    "GeometricConstants",
    "Objective",
    "Polytope",
    "Trace",
    "diameter_of_image",
    "generate_l1ls",
    "geometric_constants",
    "hoffman_theta",
    "load_problem",
    "mapped_oracle_counterexample",
    "mapped_oracle_naive",
    "rate_certificate",
    "reduce_full",
    "solve",
    "vertex_oracle",
]
