#include "ascg/certificates.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace ascg {

double hoffman_theta(const Matrix& M, HoffmanVariant variant) {
    const auto rows = M.rows();
    if (rows > kHoffmanRowCap) {
        fail(ErrorCode::TooManyRows, std::to_string(rows) + " rows exceed the cap of " + std::to_string(kHoffmanRowCap));
    }
    if (!M.allFinite()) fail(ErrorCode::NonFinite, "hoffman_theta input is not finite");
    const auto n = M.cols();
    double theta = 0;
    const std::uint32_t subsets = std::uint32_t{1} << rows;
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        const int s = std::popcount(mask);
        if (s > n) continue;
        Matrix B(s, n);
        for (int i = 0, r = 0; i < rows; ++i) {
            if (mask & (std::uint32_t{1} << i)) B.row(r++) = M.row(i);
        }
        Eigen::JacobiSVD<Matrix> svd(B);
        const auto& sv = svd.singularValues();
        const double smax = sv(0);
        const double smin = sv(s - 1);
        if (!(smax > 0) || smin <= 1e-10 * smax) continue;
        const double lambda_min = smin * smin;
        theta = std::max(theta, variant == HoffmanVariant::InverseEigenvalue ? 1.0 / lambda_min : 1.0 / smin);
    }
    return theta;
}

Matrix hoffman_matrix(const CompositeObjective& obj, const Polytope& p) {
    require_dim(obj.dim(), p.dim(), "hoffman_matrix");
    const Matrix A = p.constraint_matrix();
    const Matrix& E = obj.E();
    Matrix M(A.rows() + E.rows() + 1, p.dim());
    M << A, E, obj.b().transpose();
    return M;
}

double RateCertificate::bound(int k) const {
    return C * std::pow(1.0 - alpha_dagger, 0.5 * (k - 1));
}

std::optional<double> RateCertificate::iterations_to(double eps) const {
    if (!(eps > 0)) fail(ErrorCode::InvalidArgument, "target accuracy must be positive");
    if (C <= eps) return 1.0;
    const double l = std::log1p(-alpha_dagger);
    if (!(l < 0)) return std::nullopt;
    return std::ceil(1.0 + 2.0 * std::log(eps / C) / l);
}

double kappa_from(double theta, double b_norm, double D, double G, double D_E, double sigma_g) {
    return theta * theta * (b_norm * D + 3.0 * G * D_E + 2.0 * (G * G + 1.0) / sigma_g);
}

double alpha_dagger_from(double omega, double rho, double kappa, double D, std::int64_t N) {
    const double Nd = static_cast<double>(N);
    const double denom = 8.0 * rho * kappa * D * D * Nd * Nd;
    if (!(denom > 0)) return 0.5;
    return std::min(omega * omega / denom, 0.5);
}

RateCertificate rate_certificate(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg,
                                 const CertificateOptions& opts) {
    RateCertificate rc;
    rc.theta = hoffman_theta(hoffman_matrix(obj, p), opts.variant);
    const ProblemConstants pc = problem_constants(obj, p);
    const GeometricConstants gc = geometric_constants(p, opts.geometry);
    rc.G = pc.G;
    rc.D = pc.D;
    rc.D_E = pc.D_E;
    rc.sigma_g = pc.sigma_g;
    rc.b_norm = pc.b_norm;
    rc.C = pc.C;
    rc.omega = gc.omega;
    rc.N = reduction_constant(p, cfg.reduction);
    rc.rho = cfg.rho ? *cfg.rho : pc.rho;
    rc.kappa = kappa_from(rc.theta, rc.b_norm, rc.D, rc.G, rc.D_E, rc.sigma_g);
    rc.alpha_dagger = alpha_dagger_from(rc.omega, rc.rho, rc.kappa, rc.D, rc.N);
    return rc;
}

SolutionCertificate reference_solution(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg) {
    SolverConfig ref = cfg;
    ref.gap_tolerance = 1e-12;
    ref.max_iters = 10 * cfg.max_iters;
    ref.stepsize = StepsizeRule::ExactLineSearch;
    ref.reduction = ReductionKind::Trivial;
    ref.record_iterates = false;
    ref.debug_checks = false;
    const SolverTrace t = ascg_run(obj, p, ref);
    SolutionCertificate sc;
    sc.x_star = t.x;
    sc.f_star = obj.value(t.x);
    sc.t_star = obj.E() * t.x;
    sc.s_star = obj.b().dot(t.x);
    sc.gap_at_termination = t.gap;
    return sc;
}

RateBoundReport check_rate_bound(const SolverTrace& trace, const RateCertificate& cert, double f_star) {
    if (trace.algorithm != Algorithm::ASCG) {
        fail(ErrorCode::OutOfScope, "the rate certificate applies to ASCG traces only");
    }
    RateBoundReport rep;
    rep.theoretical_contraction = std::sqrt(1.0 - cert.alpha_dagger);
    const double slack = 1e-9 * cert.C;
    int first_k = -1, last_k = -1;
    double first_h = 0, last_h = 0;
    for (const auto& row : trace.steps) {
        const double h = row.f_value - f_star;
        const double b = cert.bound(row.iteration);
        if (h > b + slack) {
            fail(ErrorCode::BoundViolated, "f(x^k) - f* = " + std::to_string(h) + " exceeds the bound " +
                                               std::to_string(b) + " at k = " + std::to_string(row.iteration));
        }
        if (b > 0) rep.max_ratio = std::max(rep.max_ratio, h / b);
        if (h > 1e-13) {
            if (first_k < 0) {
                first_k = row.iteration;
                first_h = h;
            }
            last_k = row.iteration;
            last_h = h;
        }
        ++rep.checked;
    }
    if (last_k > first_k) rep.empirical_contraction = std::pow(last_h / first_h, 1.0 / (last_k - first_k));
    return rep;
}

namespace {

Vector random_convex_combination(const std::vector<Vector>& pts, const std::vector<std::size_t>& idx,
                                 std::mt19937_64& rng) {
    std::exponential_distribution<double> ex(1.0);
    Vector out = Vector::Zero(pts[idx.front()].size());
    double total = 0;
    for (std::size_t i : idx) {
        const double w = ex(rng);
        out += w * pts[i];
        total += w;
    }
    return out / total;
}

std::vector<std::size_t> random_subset(std::size_t pool, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> all(pool);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(count, pool));
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace

ErrorBoundReport check_error_bound(const CompositeObjective& obj, const Polytope& p, const Vector& x_star,
                                   int samples, std::uint64_t seed, std::optional<double> kappa) {
    require_dim(x_star.size(), p.dim(), "x_star");
    Eigen::FullPivLU<Matrix> lu(obj.E());
    if (lu.rank() < obj.E().cols()) {
        fail(ErrorCode::NonUniqueOptimum, "E is column-rank deficient; ||x - x*|| overestimates d(x, X*)");
    }
    const Vector g = obj.gradient(x_star);
    const double gap = g.dot(x_star) - vertex_oracle(p, g).objective_value;
    if (gap > 1e-10) fail(ErrorCode::InvalidArgument, "x_star has FW gap " + std::to_string(gap) + " > 1e-10");

    ErrorBoundReport rep;
    rep.kappa = kappa ? *kappa : rate_certificate(obj, p, SolverConfig{}).kappa;
    const double f_star = obj.value(x_star);
    const auto& V = p.vertices();
    std::mt19937_64 rng(seed);
    std::vector<double> dist2, excess;
    for (int s = 0; s < samples; ++s) {
        const auto idx = random_subset(V.size(), V.size() <= 64 ? V.size() : std::size_t(p.dim()) + 1, rng);
        const Vector x = random_convex_combination(V, idx, rng);
        const double d2 = (x - x_star).squaredNorm();
        const double h = obj.value(x) - f_star;
        dist2.push_back(d2);
        excess.push_back(h);
        if (d2 <= rep.kappa * h + 1e-9) {
            ++rep.passes;
        } else {
            ++rep.failures;
        }
        if (h > 1e-12) rep.empirical_kappa = std::max(rep.empirical_kappa, d2 / h);
        ++rep.samples;
    }
    rep.smallest_valid_kappa = rep.kappa;
    for (int h = 1; h <= 200; ++h) {
        const double k = rep.kappa * std::ldexp(1.0, -h);
        bool all = true;
        for (std::size_t i = 0; i < dist2.size() && all; ++i) all = dist2[i] <= k * excess[i] + 1e-9;
        if (!all) break;
        rep.halvings = h;
        rep.smallest_valid_kappa = k;
    }
    return rep;
}

double vertex_facet_slack(const Polytope& p, const std::vector<VertexId>& U, const Vector& c, const Vector& z,
                          double omega) {
    if (U.empty()) fail(ErrorCode::InvalidArgument, "U must be nonempty");
    double best_p = -std::numeric_limits<double>::infinity();
    for (const auto& v : p.vertices()) best_p = std::max(best_p, c.dot(v));
    double worst_u = std::numeric_limits<double>::infinity();
    for (VertexId id : U) worst_u = std::min(worst_u, c.dot(p.vertex(id)));
    const double lhs = best_p - worst_u;
    const double rhs = omega / static_cast<double>(U.size()) * c.dot(z) / z.norm();
    return lhs - rhs;
}

VertexFacetReport check_vertex_facet_lemma(const Polytope& p, int trials, std::uint64_t seed) {
    VertexFacetReport rep;
    rep.omega = geometric_constants(p).omega;
    rep.min_slack = std::numeric_limits<double>::infinity();
    const auto& V = p.vertices();
    const Matrix A = p.constraint_matrix();
    const int n = p.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<std::size_t> size_dist(1, std::min<std::size_t>(V.size(), std::size_t(n) + 1));
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> pick(0, V.size() - 1);

    while (rep.admissible < trials) {
        if (rep.skips > 10 * trials + 100) {
            fail(ErrorCode::PremiseSamplingFailed, "could not draw admissible (U, c, z) triples");
        }
        const auto uidx = random_subset(V.size(), size_dist(rng), rng);
        std::vector<VertexId> U;
        std::vector<Vector> upts;
        for (std::size_t i : uidx) {
            U.push_back(static_cast<VertexId>(i));
            upts.push_back(V[i]);
        }
        const ActiveSet I = active_set_of_union(p, upts);
        Vector c(n);
        for (int i = 0; i < n; ++i) c(i) = normal(rng);

        std::vector<std::size_t> all_idx(V.size());
        std::iota(all_idx.begin(), all_idx.end(), std::size_t{0});
        std::optional<Vector> z;
        for (int attempt = 0; attempt < 10000 && !z; ++attempt) {
            const Vector y = coin(rng) ? V[pick(rng)] : random_convex_combination(V, all_idx, rng);
            std::vector<std::size_t> local(uidx.size());
            std::iota(local.begin(), local.end(), std::size_t{0});
            const Vector ybar = random_convex_combination(upts, local, rng);
            const Vector cand = y - ybar;
            const double nz = cand.norm();
            if (nz <= 1e-12 || c.dot(cand) <= 1e-12 * nz) continue;
            bool ok = true;
            for (auto i : I.indices) ok = ok && A.row(i).dot(cand) <= 1e-12 * nz;
            if (ok) z = cand;
        }
        if (!z) {
            ++rep.skips;
            continue;
        }
        ++rep.admissible;
        const double slack = vertex_facet_slack(p, U, c, *z, rep.omega);
        rep.min_slack = std::min(rep.min_slack, slack);
        if (slack >= -1e-9) {
            ++rep.passes;
        } else {
            ++rep.failures;
        }
    }
    return rep;
}

} // namespace ascg
