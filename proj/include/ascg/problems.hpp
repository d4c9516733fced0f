#pragma once

#include "ascg/io.hpp"

#include <cstdint>

namespace ascg {

/// Lifted l1-regularized least squares over the box:
///   min ||B x - c||^2 + lambda y  over  x in [-1,1]^n, ||x||_1 <= y, y in [0, n]
/// with variables (x, y), E = [B 0], g(w) = ||w||^2 - 2<c, w> + ||c||^2, b = (0, ..., 0, lambda).
Problem make_l1ls(const Matrix& B, const Vector& c, double lambda);

/// make_l1ls with Gaussian B (k x n) and c (k) drawn from the seed.
Problem generate_l1ls(int k, int n, double lambda, std::uint64_t seed);

/// Random strongly convex quadratic over p: Gaussian E (m x n), Q = R R^T / m + I/2,
/// Gaussian c, and b scaled by b_scale.
Problem random_quadratic(const Polytope& p, int m, std::uint64_t seed, double b_scale = 1.0);

/// ||x - target||^2 over p (E = I, b = 0).
Problem distance_problem(const Polytope& p, const Vector& target);

} // namespace ascg
