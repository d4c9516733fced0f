#include "ascg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ascg {

OracleAnswer vertex_oracle(const Polytope& p, const Vector& c) {
    require_dim(c.size(), p.dim(), "vertex_oracle");
    if (!c.allFinite()) fail(ErrorCode::NonFinite, "oracle direction is not finite");
    const int n = p.base_dim();
    OracleAnswer ans;
    switch (p.kind()) {
    case PolytopeKind::Simplex: {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < c.size(); ++i) {
            if (c(i) < c(best)) best = i;
        }
        ans.vertex_id = best;
        break;
    }
    case PolytopeKind::L1Ball: {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < c.size(); ++i) {
            if (std::abs(c(i)) > std::abs(c(best))) best = i;
        }
        ans.vertex_id = 2 * best + (c(best) > 0 ? 1 : 0);
        break;
    }
    case PolytopeKind::Box: {
        VertexId id = 0;
        for (int i = 0; i < n; ++i) {
            if (c(i) < 0) id |= VertexId{1} << i;
        }
        ans.vertex_id = id;
        break;
    }
    case PolytopeKind::L1Epigraph: {
        // Vertices are (x, ||x||_1) with x in {-1,0,1}^n, so <c, v> separates per coordinate.
        const double cy = c(n);
        VertexId id = 0;
        VertexId place = 1;
        for (int i = 0; i < n; ++i) {
            const double vals[3] = {-c(i) + cy, 0.0, c(i) + cy};
            int digit = 0;
            for (int d = 1; d < 3; ++d) {
                if (vals[d] < vals[digit]) digit = d;
            }
            id += digit * place;
            place *= 3;
        }
        ans.vertex_id = id;
        break;
    }
    case PolytopeKind::GenericH: {
        const auto& vs = p.vertices();
        std::size_t best = 0;
        double best_val = c.dot(vs[0]);
        for (std::size_t k = 1; k < vs.size(); ++k) {
            const double val = c.dot(vs[k]);
            if (val < best_val) {
                best = k;
                best_val = val;
            }
        }
        ans.vertex_id = static_cast<VertexId>(best);
        break;
    }
    }
    ans.vertex = p.vertex(ans.vertex_id);
    ans.objective_value = c.dot(ans.vertex);
    return ans;
}

Vector mapped_oracle_naive(const Polytope& p, const Matrix& E, const Vector& c, const VertexOracle& base) {
    require_dim(E.cols(), p.dim(), "mapped_oracle_naive (E columns)");
    require_dim(c.size(), E.rows(), "mapped_oracle_naive (c)");
    const Vector lifted = E.transpose() * c;
    return E * base(p, lifted).vertex;
}

std::vector<VertexId> minimizing_vertex_ids(const Polytope& p, const Vector& c, double tol) {
    require_dim(c.size(), p.dim(), "minimizing_vertex_ids");
    const auto& vs = p.vertices();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vs) best = std::min(best, c.dot(v));
    std::vector<VertexId> ids;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (c.dot(vs[k]) <= best + tol) ids.push_back(p.vertex_id(vs[k]));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

bool oracle_answer_is_optimal(const Polytope& p, const Vector& c, const OracleAnswer& ans, double tol) {
    const auto& vs = p.vertices();
    double best = std::numeric_limits<double>::infinity();
    bool listed = false;
    for (const auto& v : vs) {
        best = std::min(best, c.dot(v));
        if ((v - ans.vertex).cwiseAbs().maxCoeff() <= tol) listed = true;
    }
    const bool consistent = std::abs(c.dot(ans.vertex) - ans.objective_value) <= tol;
    return listed && consistent && ans.objective_value <= best + tol;
}

OracleReport verify_oracle(const Polytope& p, int trials, std::uint64_t seed) {
    (void)p.vertices();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    OracleReport report;
    Vector c(p.dim());
    for (int t = 0; t < trials; ++t) {
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
        const OracleAnswer ans = vertex_oracle(p, c);
        ++report.trials;
        if (oracle_answer_is_optimal(p, c, ans)) ++report.passes;
        else ++report.failures;
    }
    return report;
}

namespace {

bool in_hull_of_subset(const Vector& q, const std::vector<const Vector*>& subset, double tol) {
    const Eigen::Index d = q.size();
    const Eigen::Index s = static_cast<Eigen::Index>(subset.size());
    Matrix M(d + 1, s);
    for (Eigen::Index j = 0; j < s; ++j) {
        M.col(j).head(d) = *subset[static_cast<std::size_t>(j)];
        M(d, j) = 1.0;
    }
    Vector rhs(d + 1);
    rhs.head(d) = q;
    rhs(d) = 1.0;
    Eigen::ColPivHouseholderQR<Matrix> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() < s) return false; // affinely dependent; a smaller subset covers it
    const Vector lambda = qr.solve(rhs);
    return (M * lambda - rhs).norm() <= tol && lambda.minCoeff() >= -tol;
}

} // namespace

std::vector<Vector> extreme_points(const std::vector<Vector>& points, double tol) {
    std::vector<Vector> distinct;
    for (const auto& q : points) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Vector& v) {
            return (v - q).cwiseAbs().maxCoeff() <= tol;
        });
        if (!seen) distinct.push_back(q);
    }
    std::vector<Vector> extreme;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        std::vector<const Vector*> others;
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            if (j != i) others.push_back(&distinct[j]);
        }
        const int max_size = std::min<int>(static_cast<int>(distinct[i].size()) + 1,
                                           static_cast<int>(others.size()));
        bool covered = false;
        for (int s = 1; s <= max_size && !covered; ++s) {
            std::vector<int> idx(s);
            for (int k = 0; k < s; ++k) idx[k] = k;
            const int m = static_cast<int>(others.size());
            while (!covered) {
                std::vector<const Vector*> subset;
                for (int k : idx) subset.push_back(others[static_cast<std::size_t>(k)]);
                covered = in_hull_of_subset(distinct[i], subset, tol);
                int k = s - 1;
                while (k >= 0 && idx[k] == m - s + k) --k;
                if (k < 0) break;
                ++idx[k];
                for (int j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        if (!covered) extreme.push_back(distinct[i]);
    }
    return extreme;
}

MappedOracleCounterexample mapped_oracle_counterexample() {
    MappedOracleCounterexample ex;
    ex.E.resize(3, 3);
    ex.E << 1, 1, 1,
            1, 1, -1,
            0, 0, 2;
    ex.c = Vector(3);
    ex.c << -1, 1, 3;
    ex.Etc = ex.E.transpose() * ex.c;
    ex.labels = {"A", "B", "C", "D", "E", "F", "G", "H"};
    const double coords[8][3] = {{1, 1, 1},  {1, 1, -1},  {1, -1, -1}, {1, -1, 1},
                                 {-1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {-1, -1, -1}};
    for (const auto& xyz : coords) {
        Vector v(3);
        v << xyz[0], xyz[1], xyz[2];
        ex.box_vertices.push_back(v);
        ex.images.push_back(ex.E * v);
    }

    const auto ext = extreme_points(ex.images);
    auto is_extreme = [&](const Vector& y) {
        return std::any_of(ext.begin(), ext.end(),
                           [&](const Vector& e) { return (e - y).cwiseAbs().maxCoeff() <= 1e-9; });
    };
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        if (is_extreme(ex.images[i])) ex.image_extreme.push_back(ex.labels[i]);
    }

    const Polytope box = Polytope::box(3);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : ex.box_vertices) best = std::min(best, ex.Etc.dot(v));
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        if (ex.Etc.dot(ex.box_vertices[i]) <= best + 1e-12) ex.oracle_ties.push_back(ex.labels[i]);
    }
    const OracleAnswer chosen = vertex_oracle(box, ex.Etc);
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        if ((ex.box_vertices[i] - chosen.vertex).cwiseAbs().maxCoeff() == 0) ex.default_choice = ex.labels[i];
    }
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        const bool tie = std::find(ex.oracle_ties.begin(), ex.oracle_ties.end(), ex.labels[i]) !=
                         ex.oracle_ties.end();
        if (tie && !is_extreme(ex.images[i])) {
            ex.bad_choice = ex.labels[i];
            ex.bad_image = ex.images[i];
            break;
        }
    }
    return ex;
}

} // namespace ascg
