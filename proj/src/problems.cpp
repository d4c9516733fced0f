#include "ascg/problems.hpp"

#include <random>

namespace ascg {

Problem make_l1ls(const Matrix& B, const Vector& c, double lambda) {
    if (B.rows() < 1 || B.cols() < 1) fail(ErrorCode::InvalidArgument, "B must be nonempty");
    require_dim(c.size(), B.rows(), "l1ls target");
    if (!(lambda >= 0)) fail(ErrorCode::InvalidArgument, "lambda must be nonnegative");
    const auto k = B.rows();
    const auto n = B.cols();
    Matrix E = Matrix::Zero(k, n + 1);
    E.leftCols(n) = B;
    Vector b = Vector::Zero(n + 1);
    b(n) = lambda;
    QuadraticForm g{Matrix::Identity(k, k), -2.0 * c, c.squaredNorm()};
    Problem pr{Polytope::l1_epigraph(static_cast<int>(n)),
               CompositeObjective::quadratic(std::move(E), std::move(b), std::move(g)), json::object()};
    pr.meta = {{"generator", "l1ls"}, {"k", k}, {"n", n}, {"lambda", lambda}, {"M", n}};
    return pr;
}

Problem generate_l1ls(int k, int n, double lambda, std::uint64_t seed) {
    if (k < 1 || n < 1) fail(ErrorCode::InvalidArgument, "k and n must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix B(k, n);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) B(i, j) = normal(rng);
    }
    Vector c(k);
    for (int i = 0; i < k; ++i) c(i) = normal(rng);
    Problem pr = make_l1ls(B, c, lambda);
    pr.meta["seed"] = seed;
    return pr;
}

Problem random_quadratic(const Polytope& p, int m, std::uint64_t seed, double b_scale) {
    if (m < 1) fail(ErrorCode::InvalidArgument, "image dimension must be >= 1");
    const int n = p.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
        Matrix M(r, c);
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < c; ++j) M(i, j) = normal(rng);
        }
        return M;
    };
    Matrix E = gaussian(m, n);
    const Matrix R = gaussian(m, m);
    Matrix Q = R * R.transpose() / m + 0.5 * Matrix::Identity(m, m);
    Vector c = gaussian(m, 1).col(0);
    Vector b = b_scale * gaussian(n, 1).col(0);
    Problem pr{p, CompositeObjective::quadratic(std::move(E), std::move(b), QuadraticForm{std::move(Q), std::move(c), 0.0}),
               json::object()};
    pr.meta = {{"generator", "random_quadratic"}, {"m", m}, {"seed", seed}, {"b_scale", b_scale}};
    return pr;
}

Problem distance_problem(const Polytope& p, const Vector& target) {
    require_dim(target.size(), p.dim(), "distance target");
    const int n = p.dim();
    QuadraticForm g{Matrix::Identity(n, n), -2.0 * target, target.squaredNorm()};
    Problem pr{p, CompositeObjective::quadratic(Matrix::Identity(n, n), Vector::Zero(n), std::move(g)),
               json::object()};
    pr.meta = {{"generator", "distance"}};
    return pr;
}

} // namespace ascg
