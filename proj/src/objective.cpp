#include "ascg/objective.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>

namespace ascg {

namespace {

double spectral_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

} // namespace

CompositeObjective::CompositeObjective(Matrix E, Vector b) : E_(std::move(E)), b_(std::move(b)) {
    require_dim(b_.size(), E_.cols(), "objective linear term");
    if (!E_.allFinite() || !b_.allFinite()) fail(ErrorCode::NonFinite, "objective data is not finite");
}

CompositeObjective CompositeObjective::quadratic(Matrix E, Vector b, QuadraticForm g) {
    CompositeObjective obj(std::move(E), std::move(b));
    const auto m = obj.E_.rows();
    if (g.Q.rows() != m || g.Q.cols() != m) fail(ErrorCode::DimensionMismatch, "Q must be m x m");
    if (g.c.size() == 0) g.c = Vector::Zero(m);
    require_dim(g.c.size(), m, "quadratic linear term");
    g.Q = 0.5 * (g.Q + g.Q.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g.Q, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0)) {
        fail(ErrorCode::InvalidArgument, "Q must be positive definite for g to be strongly convex");
    }
    obj.sigma_g_ = 2.0 * lmin;
    obj.lipschitz_g_ = 2.0 * lmax;
    obj.quadratic_ = std::move(g);
    return obj;
}

CompositeObjective CompositeObjective::general(Matrix E, Vector b, InnerFunction g) {
    CompositeObjective obj(std::move(E), std::move(b));
    if (!g.value || !g.gradient) fail(ErrorCode::InvalidArgument, "inner function needs value and gradient");
    if (!(g.sigma > 0)) fail(ErrorCode::InvalidArgument, "sigma_g must be positive");
    obj.sigma_g_ = g.sigma;
    obj.lipschitz_g_ = g.lipschitz;
    obj.general_ = std::move(g);
    return obj;
}

double CompositeObjective::inner_value(const Vector& y) const {
    require_dim(y.size(), E_.rows(), "inner_value");
    double v;
    if (quadratic_) {
        v = y.dot(quadratic_->Q * y) + quadratic_->c.dot(y) + quadratic_->r;
    } else {
        v = general_.value(y);
    }
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "g returned a non-finite value");
    return v;
}

Vector CompositeObjective::inner_gradient(const Vector& y) const {
    require_dim(y.size(), E_.rows(), "inner_gradient");
    Vector gy = quadratic_ ? Vector(2.0 * (quadratic_->Q * y) + quadratic_->c) : general_.gradient(y);
    require_dim(gy.size(), E_.rows(), "inner gradient result");
    if (!gy.allFinite()) fail(ErrorCode::NonFinite, "grad g returned a non-finite value");
    return gy;
}

double CompositeObjective::value(const Vector& x) const {
    require_dim(x.size(), E_.cols(), "objective value");
    return inner_value(E_ * x) + b_.dot(x);
}

Vector CompositeObjective::gradient(const Vector& x) const {
    require_dim(x.size(), E_.cols(), "objective gradient");
    return E_.transpose() * inner_gradient(E_ * x) + b_;
}

std::optional<double> CompositeObjective::curvature(const Vector& d) const {
    if (!quadratic_) return std::nullopt;
    const Vector Ed = E_ * d;
    return Ed.dot(quadratic_->Q * Ed);
}

double eval(const CompositeObjective& obj, const Vector& x) { return obj.value(x); }
Vector grad(const CompositeObjective& obj, const Vector& x) { return obj.gradient(x); }

double lipschitz_rho(const CompositeObjective& obj) {
    if (const auto& q = obj.quadratic_form()) {
        const Matrix H = obj.E().transpose() * q->Q * obj.E();
        if (H.size() == 0) return 0.0;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (H + H.transpose()), Eigen::EigenvaluesOnly);
        return std::max(0.0, 2.0 * eig.eigenvalues().maxCoeff());
    }
    if (!obj.lipschitz_g()) {
        fail(ErrorCode::MissingSmoothnessInfo, "no quadratic form and no L_g supplied");
    }
    const double e = spectral_norm(obj.E());
    return *obj.lipschitz_g() * e * e;
}

ProblemConstants problem_constants(const CompositeObjective& obj, const Polytope& p) {
    require_dim(obj.dim(), p.dim(), "problem_constants");
    ProblemConstants pc;
    pc.rho = lipschitz_rho(obj);
    pc.sigma_g = obj.sigma_g();
    pc.D = diameter(p);
    pc.D_E = diameter_of_image(p, obj.E());
    for (const auto& v : p.vertices()) {
        pc.G = std::max(pc.G, obj.inner_gradient(obj.E() * v).norm());
    }
    pc.G_exact = obj.is_quadratic();
    if (!pc.G_exact) {
        std::cerr << "warning: NonConvexGradNorm: G taken over vertices only; it may underestimate "
                     "max ||grad g(Ex)|| over X\n";
    }
    pc.b_norm = obj.b().norm();
    pc.C = pc.G * pc.D_E + pc.b_norm * pc.D;
    return pc;
}

} // namespace ascg
