#include "ascg/caratheodory.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ascg {

double caratheodory_alpha(const std::vector<double>& mu, const std::vector<double>& lambda_tilde) {
    if (mu.size() != lambda_tilde.size() || mu.empty()) {
        fail(ErrorCode::DimensionMismatch, "caratheodory_alpha: weight and dependency sizes differ");
    }
    double scale = 0;
    for (double l : lambda_tilde) scale = std::max(scale, std::abs(l));
    const double thr = 1e-12 * scale;
    if (lambda_tilde[0] >= -thr) {
        // Move along +lambda: the first weight cannot shrink; stop at the first negative entry.
        double alpha = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (lambda_tilde[i] < -thr) alpha = std::min(alpha, -mu[i] / lambda_tilde[i]);
        }
        if (!std::isfinite(alpha)) fail(ErrorCode::SingularSolve, "affine dependency has no negative entry");
        return alpha;
    }
    double alpha = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (lambda_tilde[i] > thr) alpha = std::max(alpha, -mu[i] / lambda_tilde[i]);
    }
    if (!std::isfinite(alpha)) fail(ErrorCode::SingularSolve, "affine dependency has no positive entry");
    return alpha;
}

// ---------------------------------------------------------------------------------------
// One-shot reduction

ReductionResult reduce_full_indices(const std::vector<Vector>& points, const std::vector<double>& weights,
                                    double tol, double zero_weight_tol) {
    if (points.size() != weights.size()) fail(ErrorCode::DimensionMismatch, "points and weights differ in length");
    if (points.empty()) return {};
    double total = 0;
    for (double w : weights) {
        if (!(w > 0)) fail(ErrorCode::InvalidArgument, "reduce_full needs strictly positive weights");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-8) fail(ErrorCode::InvalidArgument, "reduce_full weights must sum to one");

    const std::size_t k = points.size();
    std::vector<double> mu = weights;
    std::vector<bool> alive(k, true);
    std::vector<std::size_t> basis; // independent points besides points[0], ascending
    const Vector& ref = points[0];

    for (std::size_t j = 1; j < k; ++j) {
        require_dim(points[j].size(), ref.size(), "reduce_full point");
        const Vector r = points[j] - ref;
        Vector lambda;
        double residual = r.norm();
        if (!basis.empty()) {
            Matrix B(ref.size(), static_cast<Eigen::Index>(basis.size()));
            for (std::size_t b = 0; b < basis.size(); ++b) B.col(static_cast<Eigen::Index>(b)) = points[basis[b]] - ref;
            Eigen::ColPivHouseholderQR<Matrix> qr(B);
            lambda = qr.solve(r);
            residual = (B * lambda - r).norm();
        }
        if (residual > tol * std::max(1.0, r.norm())) {
            basis.push_back(j);
            continue;
        }

        // sum_b lambda_b (p_b - p_0) - (p_j - p_0) = 0 as an affine dependency over {0, basis, j}.
        std::vector<std::size_t> group{0};
        group.insert(group.end(), basis.begin(), basis.end());
        group.push_back(j);
        std::vector<double> lt(group.size());
        lt[0] = 1.0 - lambda.sum();
        for (std::size_t b = 0; b < basis.size(); ++b) lt[b + 1] = lambda(static_cast<Eigen::Index>(b));
        lt.back() = -1.0;
        std::vector<double> mu_g(group.size());
        for (std::size_t g = 0; g < group.size(); ++g) mu_g[g] = mu[group[g]];

        const double alpha = caratheodory_alpha(mu_g, lt);
        for (std::size_t g = 0; g < group.size(); ++g) {
            double w = mu_g[g] + alpha * lt[g];
            if (w <= zero_weight_tol) {
                w = 0;
                alive[group[g]] = false;
            }
            mu[group[g]] = w;
        }
        std::erase_if(basis, [&](std::size_t b) { return !alive[b]; });
        if (alive[j]) basis.push_back(j);
    }

    ReductionResult out;
    double kept_sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (alive[i]) {
            out.kept.push_back(i);
            out.weights.push_back(mu[i]);
            kept_sum += mu[i];
        }
    }
    for (double& w : out.weights) w /= kept_sum;
    return out;
}

std::vector<WeightedPoint> reduce_full(std::vector<WeightedPoint> points, double tol, double zero_weight_tol) {
    std::vector<Vector> pts;
    std::vector<double> ws;
    for (auto& p : points) {
        pts.push_back(p.point);
        ws.push_back(p.weight);
    }
    const auto res = reduce_full_indices(pts, ws, tol, zero_weight_tol);
    std::vector<WeightedPoint> out;
    for (std::size_t i = 0; i < res.kept.size(); ++i) {
        out.push_back({std::move(points[res.kept[i]].point), res.weights[i]});
    }
    return out;
}

void reduce_representation(Representation& repr, double tol, double zero_weight_tol) {
    std::vector<Vector> pts;
    std::vector<double> ws;
    for (const auto& a : repr.atoms()) {
        pts.push_back(a.vertex);
        ws.push_back(a.weight);
    }
    const auto res = reduce_full_indices(pts, ws, tol, zero_weight_tol);
    std::vector<bool> keep(pts.size(), false);
    for (std::size_t i = 0; i < res.kept.size(); ++i) {
        keep[res.kept[i]] = true;
        repr.set_weight(res.kept[i], res.weights[i]);
    }
    for (std::size_t i = pts.size(); i-- > 0;) {
        if (!keep[i]) repr.erase_at(i);
    }
    repr.refresh_point();
}

// ---------------------------------------------------------------------------------------
// Incremental reduction

IncrementalReducer::IncrementalReducer(int n, IrrOptions opts) : n_(n), opts_(opts) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "reducer dimension must be >= 1");
    state_.W = Matrix(n_, 0);
    state_.T = Matrix::Identity(n_, n_);
}

void IncrementalReducer::reset(Representation& repr) {
    if (repr.empty()) fail(ErrorCode::InvalidArgument, "cannot factor an empty representation");
    reduce_representation(repr, opts_.rank_tol, opts_.zero_weight_tol);
    refactor(repr);
}

void IncrementalReducer::refactor(const Representation& repr) {
    const auto& atoms = repr.atoms();
    const int L = static_cast<int>(atoms.size());
    require_dim(atoms.front().vertex.size(), n_, "reducer vertex");
    state_.order.clear();
    for (const auto& a : atoms) state_.order.push_back(a.id);
    state_.W.resize(n_, L - 1);
    for (int i = 1; i < L; ++i) state_.W.col(i - 1) = atoms[static_cast<std::size_t>(i)].vertex - atoms[0].vertex;
    state_.T = Matrix::Identity(n_, n_);
    state_.updates_since_refactor = 0;
    if (restore_echelon(0) >= 0) {
        fail(ErrorCode::InconsistentState, "representation vertices are affinely dependent");
    }
}

int IncrementalReducer::restore_echelon(int first) {
    Matrix& W = state_.W;
    Matrix& T = state_.T;
    for (int j = first; j < W.cols(); ++j) {
        if (j >= n_) return j;
        const double scale = std::max(1.0, W.col(j).cwiseAbs().maxCoeff());
        Eigen::Index r = 0;
        const double best = W.col(j).tail(n_ - j).cwiseAbs().maxCoeff(&r);
        if (best <= opts_.rank_tol * scale) return j;
        r += j;
        if (r != j) {
            W.row(j).swap(W.row(r));
            T.row(j).swap(T.row(r));
        }
        for (Eigen::Index i = j + 1; i < n_; ++i) {
            if (W(i, j) == 0.0) continue;
            const double f = W(i, j) / W(j, j);
            W.row(i) -= f * W.row(j);
            T.row(i) -= f * T.row(j);
            W(i, j) = 0.0;
        }
    }
    return -1;
}

void IncrementalReducer::remove_column(int col) {
    Matrix& W = state_.W;
    const Eigen::Index tail = W.cols() - col - 1;
    if (tail > 0) W.middleCols(col, tail) = W.rightCols(tail).eval();
    W.conservativeResize(Eigen::NoChange, W.cols() - 1);
}

void IncrementalReducer::drop_reference() {
    // New columns are (v_{i+2} - v2) = w_{i+1} - w_1, so W' = W [0 I]^T - W e_1 1^T,
    // and -W e_1 = T (v1 - v2).
    Matrix& W = state_.W;
    const Vector first = W.col(0);
    Matrix next = W.rightCols(W.cols() - 1);
    next.colwise() -= first;
    W = std::move(next);
    state_.order.erase(state_.order.begin());
    if (restore_echelon(0) >= 0) fail(ErrorCode::InconsistentState, "rank lost after reference change");
}

void IncrementalReducer::append_vertex(Representation& repr) {
    const int L = state_.L();
    const Atom& fresh = repr.atoms().back();
    Matrix& W = state_.W;
    W.conservativeResize(Eigen::NoChange, L);
    W.col(L - 1) = state_.T * (fresh.vertex - repr[0].vertex);
    state_.order.push_back(fresh.id);
    if (restore_echelon(L - 1) < 0) return;

    // Dependent: solve W lambda = 0 with lambda_L = -1 by back substitution.
    ++reductions_;
    const Vector rhs = W.col(L - 1).head(L - 1);
    const Vector lambda = W.topLeftCorner(L - 1, L - 1).triangularView<Eigen::Upper>().solve(rhs);
    if (!lambda.allFinite()) fail(ErrorCode::SingularSolve, "dependency system is not uniquely solvable");

    std::vector<double> lt(static_cast<std::size_t>(L) + 1);
    lt[0] = 1.0 - lambda.sum();
    for (int i = 0; i < L - 1; ++i) lt[static_cast<std::size_t>(i) + 1] = lambda(i);
    lt[static_cast<std::size_t>(L)] = -1.0;
    std::vector<double> mu(lt.size());
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = repr[i].weight;

    const double alpha = caratheodory_alpha(mu, lt);
    int first_removed = -1;
    for (std::size_t i = mu.size(); i-- > 0;) {
        double w = mu[i] + alpha * lt[i];
        if (w <= opts_.zero_weight_tol) {
            w = 0;
            if (i == 0) fail(ErrorCode::InconsistentState, "reduction eliminated the reference vertex");
            remove_column(static_cast<int>(i) - 1);
            state_.order.erase(state_.order.begin() + static_cast<std::ptrdiff_t>(i));
            first_removed = static_cast<int>(i) - 1;
        }
        repr.set_weight(i, w);
    }
    repr.erase_small_weights(opts_.zero_weight_tol);
    repr.renormalize();
    repr.refresh_point();
    if (first_removed < 0) fail(ErrorCode::InconsistentState, "reduction removed no vertex");
    if (restore_echelon(first_removed) >= 0) {
        fail(ErrorCode::InconsistentState, "reduced vertex set is still affinely dependent");
    }
}

void IncrementalReducer::update(Representation& repr, const RepresentationEvent& event) {
    const int size = static_cast<int>(repr.size());
    if (size == 0) fail(ErrorCode::InvalidArgument, "empty representation");
    if (size == 1) {
        state_.order = {repr[0].id};
        state_.W = Matrix(n_, 0);
        state_.T = Matrix::Identity(n_, n_);
        state_.updates_since_refactor = 0;
        return;
    }
    if (state_.order.empty()) {
        reset(repr);
        return;
    }

    const int L = state_.L();
    auto prefix_matches = [&](int count) {
        for (int i = 0; i < count; ++i) {
            if (repr[static_cast<std::size_t>(i)].id != state_.order[static_cast<std::size_t>(i)]) return false;
        }
        return true;
    };

    bool structural = true;
    if ((size == L && !prefix_matches(L)) || (size == L + 1 && !prefix_matches(L)) || size < L - 1 || size > L + 1) {
        // Several vertices changed at once (e.g. a forward step that also underflowed a
        // weight); rebuild from scratch.
        reset(repr);
        if (opts_.debug_checks) verify(repr);
        return;
    }
    if (size == L) {
        structural = false;
    } else if (size == L - 1) {
        int removed = 0;
        while (removed < size && repr[static_cast<std::size_t>(removed)].id == state_.order[static_cast<std::size_t>(removed)]) {
            ++removed;
        }
        for (int i = removed; i < size; ++i) {
            if (repr[static_cast<std::size_t>(i)].id != state_.order[static_cast<std::size_t>(i) + 1]) {
                reset(repr);
                if (opts_.debug_checks) verify(repr);
                return;
            }
        }
        if (event.kind == RepresentationEvent::Kind::DropVertex && event.id != state_.order[static_cast<std::size_t>(removed)]) {
            fail(ErrorCode::InconsistentState, "drop event does not match the removed vertex");
        }
        if (removed == 0) {
            drop_reference();
        } else {
            state_.order.erase(state_.order.begin() + removed);
            remove_column(removed - 1);
            if (restore_echelon(removed - 1) >= 0) fail(ErrorCode::InconsistentState, "rank lost after drop");
        }
    } else {
        append_vertex(repr);
    }

    if (structural && ++state_.updates_since_refactor >= opts_.refactor_period) refactor(repr);
    if (opts_.debug_checks) verify(repr);
}

void IncrementalReducer::adopt(IrrState state) {
    if (state.order.size() > 1) {
        require_dim(state.W.rows(), n_, "adopted W");
        require_dim(state.W.cols(), state.L() - 1, "adopted W columns");
    }
    if (state.T.size() == 0) state.T = Matrix::Identity(n_, n_);
    if (state.W.size() == 0) state.W = Matrix(n_, 0);
    state_ = std::move(state);
}

double IncrementalReducer::consistency_error(const Representation& repr) const {
    if (static_cast<int>(repr.size()) != state_.L()) return std::numeric_limits<double>::infinity();
    if (repr.size() <= 1) return 0.0;
    Matrix V(n_, state_.L() - 1);
    for (int i = 1; i < state_.L(); ++i) V.col(i - 1) = repr[static_cast<std::size_t>(i)].vertex - repr[0].vertex;
    return (state_.W - state_.T * V).cwiseAbs().maxCoeff();
}

bool IncrementalReducer::echelon_ok() const {
    const Matrix& W = state_.W;
    if (W.cols() > n_) return false;
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        if (W(j, j) == 0.0) return false;
        for (Eigen::Index i = j + 1; i < W.rows(); ++i) {
            if (W(i, j) != 0.0) return false;
        }
    }
    return true;
}

void IncrementalReducer::verify(const Representation& repr) const {
    for (int i = 0; i < state_.L(); ++i) {
        if (repr[static_cast<std::size_t>(i)].id != state_.order[static_cast<std::size_t>(i)]) {
            fail(ErrorCode::InconsistentState, "vertex order diverged from factor state");
        }
    }
    const double err = consistency_error(repr);
    if (!(err <= opts_.consistency_tol)) {
        fail(ErrorCode::InconsistentState, "W differs from T V by " + std::to_string(err));
    }
    if (!echelon_ok()) fail(ErrorCode::InconsistentState, "W lost its row echelon structure");
}

std::pair<IrrState, Representation> irr_update(int n, IrrState state, Representation repr,
                                               const RepresentationEvent& event, IrrOptions opts) {
    IncrementalReducer reducer(n, opts);
    reducer.adopt(std::move(state));
    reducer.update(repr, event);
    return {reducer.state(), std::move(repr)};
}

} // namespace ascg
