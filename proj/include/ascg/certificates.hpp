#pragma once

#include "ascg/objective.hpp"
#include "ascg/polytope.hpp"
#include "ascg/solver.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ascg {

enum class HoffmanVariant {
    /// max over independent row subsets B of 1 / lambda_min(B B^T).
    InverseEigenvalue,
    /// max of 1 / sqrt(lambda_min(B B^T)), the usual Hoffman constant.
    Classical,
};

inline constexpr int kHoffmanRowCap = 18;

/// Brute-force Hoffman constant over all linearly independent row subsets of M.
double hoffman_theta(const Matrix& M, HoffmanVariant variant = HoffmanVariant::InverseEigenvalue);

/// Stacked [A; E; b^T] used for theta.
Matrix hoffman_matrix(const CompositeObjective& obj, const Polytope& p);

struct RateCertificate {
    double theta = 0;
    double kappa = 0;
    double C = 0;
    double omega = 0;
    std::int64_t N = 0;
    double alpha_dagger = 0;
    double rho = 0;
    double G = 0;
    double D = 0;
    double D_E = 0;
    double sigma_g = 0;
    double b_norm = 0;

    /// C (1 - alpha)^((k-1)/2).
    double bound(int k) const;
    /// Smallest k with bound(k) <= eps, or nullopt when alpha_dagger underflows.
    std::optional<double> iterations_to(double eps) const;
};

double kappa_from(double theta, double b_norm, double D, double G, double D_E, double sigma_g);
double alpha_dagger_from(double omega, double rho, double kappa, double D, std::int64_t N);

struct CertificateOptions {
    HoffmanVariant variant = HoffmanVariant::InverseEigenvalue;
    GeometricOptions geometry;
};

RateCertificate rate_certificate(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg,
                                 const CertificateOptions& opts = {});

struct SolutionCertificate {
    Vector x_star;
    double f_star = 0;
    Vector t_star;
    double s_star = 0;
    double gap_at_termination = 0;
};

/// High-accuracy ASCG run (gap 1e-12, ten times cfg.max_iters, exact line search).
SolutionCertificate reference_solution(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg);

struct RateBoundReport {
    int checked = 0;
    double max_ratio = 0; ///< max over k of (f(x^k) - f*) / bound(k)
    double empirical_contraction = 0; ///< geometric-mean ratio of successive optimality gaps
    double theoretical_contraction = 0; ///< sqrt(1 - alpha_dagger)
};

/// Checks f(x^k) - f* <= C (1 - alpha)^((k-1)/2) + 1e-9 C at every row. Throws BoundViolated
/// naming the first offending k, OutOfScope for CG traces.
RateBoundReport check_rate_bound(const SolverTrace& trace, const RateCertificate& cert, double f_star);

struct ErrorBoundReport {
    int samples = 0;
    int passes = 0;
    int failures = 0;
    double kappa = 0;
    /// max ||x - x*||^2 / (f(x) - f*) over the samples.
    double empirical_kappa = 0;
    /// How many times kappa could be halved before the first sample failed.
    int halvings = 0;
    double smallest_valid_kappa = 0;
};

/// Samples random convex combinations of vertices and checks ||x - x*||^2 <= kappa (f(x) - f*) + 1e-9.
ErrorBoundReport check_error_bound(const CompositeObjective& obj, const Polytope& p, const Vector& x_star,
                                   int samples, std::uint64_t seed, std::optional<double> kappa = std::nullopt);

struct VertexFacetReport {
    int admissible = 0;
    int passes = 0;
    int failures = 0;
    int skips = 0;
    double omega = 0;
    double min_slack = 0;
};

/// Lemma check: max_{p in V, u in U} <c, p - u> >= (omega / |U|) <c, z> / ||z|| for random
/// U, c and z with A_{I(U)} z <= 0, <c, z> > 0.
VertexFacetReport check_vertex_facet_lemma(const Polytope& p, int trials, std::uint64_t seed);

/// One instance of the lemma's inequality; returns lhs - rhs.
double vertex_facet_slack(const Polytope& p, const std::vector<VertexId>& U, const Vector& c, const Vector& z,
                          double omega);

} // namespace ascg
