#include "ascg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ascg {

namespace {

constexpr std::int64_t kMaxPairwiseVertices = 8192;

std::int64_t pow_int(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / base) {
            return std::numeric_limits<std::int64_t>::max();
        }
        r *= base;
    }
    return r;
}

std::int64_t binomial(int m, int k) {
    if (k < 0 || k > m) return 0;
    k = std::min(k, m - k);
    long double r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (m - k + i) / i;
    }
    if (r > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
        return std::numeric_limits<std::int64_t>::max();
    }
    return static_cast<std::int64_t>(std::llround(r));
}

// Calls fn for every k-subset of {0..m-1} in lexicographic order.
void for_each_combination(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k > m || k < 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool lex_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool same_point(const Vector& a, const Vector& b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

Vector sign_row(int n, std::int64_t r) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w(i) = ((r >> i) & 1) ? -1.0 : 1.0;
    return w;
}

std::vector<Vector> enumerate_generic(const Matrix& A, const Vector& a, const EnumerationLimits& lim) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (binomial(m, n) > lim.max_row_subsets || binomial(m, n - 1) > lim.max_row_subsets) {
        fail(ErrorCode::DimensionCapExceeded, "too many row subsets to enumerate vertices");
    }
    Eigen::FullPivLU<Matrix> full(A);
    full.setThreshold(1e-10);
    if (full.rank() < n) {
        fail(ErrorCode::UnboundedSet, "constraint matrix has rank < n; the set contains a line or is empty");
    }

    const double feas_tol = lim.tol * (1.0 + a.cwiseAbs().maxCoeff());
    std::vector<Vector> found;
    Matrix sub(n, n);
    Vector rhs(n);
    for_each_combination(m, n, [&](const std::vector<int>& rows) {
        for (int i = 0; i < n; ++i) {
            sub.row(i) = A.row(rows[i]);
            rhs(i) = a(rows[i]);
        }
        Eigen::FullPivLU<Matrix> lu(sub);
        lu.setThreshold(1e-10);
        if (lu.rank() < n) return;
        Vector x = lu.solve(rhs);
        if ((A * x - a).maxCoeff() > feas_tol) return;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (std::abs(x(i)) < 1e-13) x(i) = 0.0;
        }
        for (const auto& v : found) {
            if (same_point(v, x, lim.tol)) return;
        }
        found.push_back(std::move(x));
    });
    if (found.empty()) {
        fail(ErrorCode::EmptySet, "no vertex found; the polyhedron is empty");
    }

    // A pointed cone {d : Ad <= 0} other than {0} has an extreme ray cut out by n-1 rows.
    const double ray_tol = 1e-11;
    auto is_ray = [&](const Vector& d) { return (A * d).maxCoeff() <= ray_tol; };
    if (n == 1) {
        Vector d = Vector::Ones(1);
        if (is_ray(d) || is_ray(-d)) fail(ErrorCode::UnboundedSet, "feasible set is unbounded");
    } else {
        Matrix ray_rows(n - 1, n);
        for_each_combination(m, n - 1, [&](const std::vector<int>& rows) {
            for (int i = 0; i < n - 1; ++i) ray_rows.row(i) = A.row(rows[i]);
            Eigen::FullPivLU<Matrix> lu(ray_rows);
            lu.setThreshold(1e-10);
            if (lu.rank() < n - 1) return;
            Matrix ker = lu.kernel();
            Vector d = ker.col(0).normalized();
            if (is_ray(d) || is_ray(-d)) fail(ErrorCode::UnboundedSet, "feasible set is unbounded");
        });
    }

    std::sort(found.begin(), found.end(), lex_less);
    return found;
}

int affine_rank(const std::vector<const Vector*>& pts, double tol) {
    if (pts.size() <= 1) return 0;
    Matrix diffs(pts.front()->size(), static_cast<Eigen::Index>(pts.size() - 1));
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.col(static_cast<Eigen::Index>(i - 1)) = *pts[i] - *pts[0];
    Eigen::FullPivLU<Matrix> lu(diffs);
    lu.setThreshold(tol);
    return static_cast<int>(lu.rank());
}

} // namespace

std::string_view to_string(PolytopeKind kind) {
    switch (kind) {
    case PolytopeKind::Simplex: return "simplex";
    case PolytopeKind::L1Ball: return "l1_ball";
    case PolytopeKind::Box: return "box";
    case PolytopeKind::L1Epigraph: return "l1_epigraph";
    case PolytopeKind::GenericH: return "generic";
    }
    return "unknown";
}

Polytope::Polytope(PolytopeKind kind, int dim, EnumerationLimits limits)
    : kind_(kind), dim_(dim), limits_(limits), cache_(std::make_shared<VertexCache>()) {
    if (dim < 1) fail(ErrorCode::InvalidArgument, "polytope dimension must be >= 1");
}

Polytope Polytope::simplex(int n) { return Polytope(PolytopeKind::Simplex, n, {}); }
Polytope Polytope::l1_ball(int n) {
    if (n > 62) fail(ErrorCode::DimensionCapExceeded, "l1 ball dimension above 62");
    return Polytope(PolytopeKind::L1Ball, n, {});
}
Polytope Polytope::box(int n) { return Polytope(PolytopeKind::Box, n, {}); }
Polytope Polytope::l1_epigraph(int base_dim) {
    if (base_dim < 1 || base_dim > 39) fail(ErrorCode::InvalidArgument, "l1 epigraph base dimension must be in [1, 39]");
    return Polytope(PolytopeKind::L1Epigraph, base_dim + 1, {});
}

Polytope Polytope::from_halfspaces(Matrix A, Vector a, EnumerationLimits limits) {
    if (A.rows() != a.size()) fail(ErrorCode::DimensionMismatch, "A and a row counts differ");
    if (A.rows() == 0) fail(ErrorCode::UnboundedSet, "no constraints");
    if (!A.allFinite() || !a.allFinite()) fail(ErrorCode::NonFinite, "non-finite constraint data");
    const int n = static_cast<int>(A.cols());
    if (n > limits.max_generic_dim) {
        fail(ErrorCode::DimensionCapExceeded,
             "generic polytope dimension " + std::to_string(n) + " above cap " + std::to_string(limits.max_generic_dim));
    }
    Polytope p(PolytopeKind::GenericH, n, limits);
    p.A_ = std::move(A);
    p.a_ = std::move(a);
    // Validation doubles as vertex caching.
    (void)p.vertices();
    return p;
}

std::int64_t Polytope::num_rows() const {
    const int n = base_dim();
    switch (kind_) {
    case PolytopeKind::Simplex: return n + 2;
    case PolytopeKind::Box: return 2 * n;
    case PolytopeKind::L1Ball: return pow_int(2, n);
    case PolytopeKind::L1Epigraph: return 2 * n + 2 + pow_int(2, n);
    case PolytopeKind::GenericH: return A_.rows();
    }
    return 0;
}

bool Polytope::rows_materializable() const { return num_rows() <= limits_.max_implicit_rows; }

void Polytope::check_implicit_rows() const {
    if (!rows_materializable()) {
        fail(ErrorCode::DimensionCapExceeded, "H-representation with " + std::to_string(num_rows()) +
                                                  " rows is not materialized");
    }
}

Vector Polytope::row(std::int64_t i) const {
    if (i < 0 || i >= num_rows()) fail(ErrorCode::InvalidArgument, "row index out of range");
    const int n = base_dim();
    Vector r = Vector::Zero(dim_);
    switch (kind_) {
    case PolytopeKind::Simplex:
        if (i < n) r(i) = -1.0;
        else r.setConstant(i == n ? 1.0 : -1.0);
        break;
    case PolytopeKind::Box:
        r(i % n) = i < n ? 1.0 : -1.0;
        break;
    case PolytopeKind::L1Ball:
        r = sign_row(n, i);
        break;
    case PolytopeKind::L1Epigraph:
        if (i < 2 * n) {
            r(i % n) = i < n ? 1.0 : -1.0;
        } else if (i < 2 * n + 2) {
            r(n) = i == 2 * n ? 1.0 : -1.0;
        } else {
            r.head(n) = sign_row(n, i - 2 * n - 2);
            r(n) = -1.0;
        }
        break;
    case PolytopeKind::GenericH:
        r = A_.row(i).transpose();
        break;
    }
    return r;
}

double Polytope::rhs(std::int64_t i) const {
    if (i < 0 || i >= num_rows()) fail(ErrorCode::InvalidArgument, "row index out of range");
    const int n = base_dim();
    switch (kind_) {
    case PolytopeKind::Simplex: return i < n ? 0.0 : (i == n ? 1.0 : -1.0);
    case PolytopeKind::Box: return 1.0;
    case PolytopeKind::L1Ball: return 1.0;
    case PolytopeKind::L1Epigraph:
        if (i < 2 * n) return 1.0;
        if (i == 2 * n) return static_cast<double>(n);
        return 0.0;
    case PolytopeKind::GenericH: return a_(i);
    }
    return 0.0;
}

Matrix Polytope::constraint_matrix() const {
    if (kind_ == PolytopeKind::GenericH) return A_;
    check_implicit_rows();
    Matrix A(num_rows(), dim_);
    for (std::int64_t i = 0; i < A.rows(); ++i) A.row(i) = row(i).transpose();
    return A;
}

Vector Polytope::constraint_rhs() const {
    if (kind_ == PolytopeKind::GenericH) return a_;
    check_implicit_rows();
    Vector a(num_rows());
    for (std::int64_t i = 0; i < a.size(); ++i) a(i) = rhs(i);
    return a;
}

std::int64_t Polytope::num_vertices() const {
    const int n = base_dim();
    switch (kind_) {
    case PolytopeKind::Simplex: return n;
    case PolytopeKind::L1Ball: return 2 * n;
    case PolytopeKind::Box: return pow_int(2, n);
    case PolytopeKind::L1Epigraph: return pow_int(3, n);
    case PolytopeKind::GenericH: return static_cast<std::int64_t>(vertices().size());
    }
    return 0;
}

Vector Polytope::vertex(VertexId id) const {
    const int n = base_dim();
    if (kind_ != PolytopeKind::GenericH && (id < 0 || id >= num_vertices())) {
        fail(ErrorCode::InvalidArgument, "vertex id " + std::to_string(id) + " out of range");
    }
    Vector v = Vector::Zero(dim_);
    switch (kind_) {
    case PolytopeKind::Simplex:
        v(id) = 1.0;
        break;
    case PolytopeKind::L1Ball:
        v(id / 2) = (id % 2 == 0) ? 1.0 : -1.0;
        break;
    case PolytopeKind::Box:
        for (int i = 0; i < n; ++i) v(i) = ((id >> i) & 1) ? 1.0 : -1.0;
        break;
    case PolytopeKind::L1Epigraph: {
        VertexId rest = id;
        double l1 = 0;
        for (int i = 0; i < n; ++i) {
            v(i) = static_cast<double>(rest % 3) - 1.0;
            l1 += std::abs(v(i));
            rest /= 3;
        }
        v(n) = l1;
        break;
    }
    case PolytopeKind::GenericH: {
        const auto& vs = vertices();
        if (id < 0 || id >= static_cast<VertexId>(vs.size())) {
            fail(ErrorCode::InvalidArgument, "vertex id " + std::to_string(id) + " out of range");
        }
        v = vs[static_cast<std::size_t>(id)];
        break;
    }
    }
    return v;
}

VertexId Polytope::vertex_id(const Vector& v) const {
    require_dim(v.size(), dim_, "vertex_id");
    const int n = base_dim();
    const double tol = limits_.tol;
    auto near = [tol](double x, double target) { return std::abs(x - target) <= tol; };
    VertexId id = -1;
    switch (kind_) {
    case PolytopeKind::Simplex:
        for (int i = 0; i < n; ++i) {
            if (near(v(i), 1.0)) id = i;
        }
        break;
    case PolytopeKind::L1Ball:
        for (int i = 0; i < n; ++i) {
            if (near(v(i), 1.0)) id = 2 * i;
            if (near(v(i), -1.0)) id = 2 * i + 1;
        }
        break;
    case PolytopeKind::Box:
        id = 0;
        for (int i = 0; i < n; ++i) {
            if (v(i) > 0) id |= VertexId{1} << i;
        }
        break;
    case PolytopeKind::L1Epigraph: {
        id = 0;
        VertexId place = 1;
        for (int i = 0; i < n; ++i) {
            const double r = std::round(v(i));
            id += static_cast<VertexId>(r + 1.0) * place;
            place *= 3;
        }
        break;
    }
    case PolytopeKind::GenericH: {
        const auto& vs = vertices();
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (same_point(vs[i], v, tol)) return static_cast<VertexId>(i);
        }
        break;
    }
    }
    if (id < 0 || !same_point(vertex(id), v, tol)) {
        fail(ErrorCode::InvalidArgument, "point is not a vertex of the polytope");
    }
    return id;
}

const std::vector<Vector>& Polytope::vertices() const {
    std::call_once(cache_->once, [this] {
        std::vector<Vector> vs;
        if (kind_ == PolytopeKind::GenericH) {
            vs = enumerate_generic(A_, a_, limits_);
        } else {
            const std::int64_t count = num_vertices();
            if (count > limits_.max_vertices) {
                fail(ErrorCode::DimensionCapExceeded,
                     std::to_string(count) + " vertices exceed the enumeration cap");
            }
            vs.reserve(static_cast<std::size_t>(count));
            for (VertexId id = 0; id < count; ++id) vs.push_back(vertex(id));
        }
        cache_->vertices = std::move(vs);
    });
    return cache_->vertices;
}

std::vector<Vector> enumerate_vertices(const Polytope& p) { return p.vertices(); }

bool ActiveSet::contains(std::int64_t i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

ActiveSet active_set(const Polytope& p, const Vector& x, double tol) {
    require_dim(x.size(), p.dim(), "active_set");
    if (p.kind() != PolytopeKind::GenericH && !p.rows_materializable()) {
        fail(ErrorCode::DimensionCapExceeded, "active set over a non-materialized H-representation");
    }
    ActiveSet out;
    out.tol = tol;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < p.num_rows(); ++i) {
        const double slack = p.rhs(i) - p.row(i).dot(x);
        worst = std::max(worst, -slack);
        if (slack <= tol) out.indices.push_back(i);
    }
    if (worst > tol) {
        fail(ErrorCode::InfeasiblePoint, "point violates a constraint by " + std::to_string(worst));
    }
    return out;
}

ActiveSet active_set_of_union(const Polytope& p, std::span<const Vector> points, double tol) {
    if (points.empty()) fail(ErrorCode::InvalidArgument, "active_set_of_union needs at least one point");
    ActiveSet acc = active_set(p, points.front(), tol);
    for (std::size_t k = 1; k < points.size(); ++k) {
        const ActiveSet next = active_set(p, points[k], tol);
        std::vector<std::int64_t> both;
        std::set_intersection(acc.indices.begin(), acc.indices.end(), next.indices.begin(),
                              next.indices.end(), std::back_inserter(both));
        acc.indices = std::move(both);
    }
    return acc;
}

std::vector<std::int64_t> irredundant_rows(const Polytope& p, double tol) {
    const Matrix A = p.constraint_matrix();
    const Vector a = p.constraint_rhs();
    const auto& vs = p.vertices();
    std::vector<const Vector*> all;
    for (const auto& v : vs) all.push_back(&v);
    const int full = affine_rank(all, 1e-9);

    std::vector<std::int64_t> keep;
    std::vector<std::vector<std::size_t>> facet_sets;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        std::vector<const Vector*> tight;
        std::vector<std::size_t> tight_idx;
        for (std::size_t k = 0; k < vs.size(); ++k) {
            if (a(i) - A.row(i).dot(vs[k]) <= tol) {
                tight.push_back(&vs[k]);
                tight_idx.push_back(k);
            }
        }
        if (tight.size() == vs.size()) {
            keep.push_back(i);
            continue;
        }
        if (tight.empty() || affine_rank(tight, 1e-9) != full - 1) continue;
        if (std::find(facet_sets.begin(), facet_sets.end(), tight_idx) != facet_sets.end()) continue;
        facet_sets.push_back(tight_idx);
        keep.push_back(i);
    }
    return keep;
}

double diameter(const Polytope& p) {
    const double n = p.base_dim();
    switch (p.kind()) {
    case PolytopeKind::Simplex: return p.dim() >= 2 ? std::sqrt(2.0) : 0.0;
    case PolytopeKind::L1Ball: return 2.0;
    case PolytopeKind::Box: return 2.0 * std::sqrt(n);
    case PolytopeKind::L1Epigraph: return std::sqrt(std::max(n + n * n, 4.0 * n));
    case PolytopeKind::GenericH: break;
    }
    return diameter_of_image(p, Matrix::Identity(p.dim(), p.dim()));
}

double diameter_of_image(const Polytope& p, const Matrix& E) {
    require_dim(E.cols(), p.dim(), "diameter_of_image");
    if (p.num_vertices() > kMaxPairwiseVertices) {
        fail(ErrorCode::DimensionCapExceeded, "too many vertices for pairwise image diameter");
    }
    const auto& vs = p.vertices();
    std::vector<Vector> images;
    images.reserve(vs.size());
    for (const auto& v : vs) images.push_back(E * v);
    double best = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t j = i + 1; j < images.size(); ++j) {
            best = std::max(best, (images[i] - images[j]).squaredNorm());
        }
    }
    return std::sqrt(best);
}

GeometricConstants geometric_constants(const Polytope& p, const GeometricOptions& opts) {
    if (p.num_vertices() < 2) {
        fail(ErrorCode::DegeneratePolytope, "a single vertex leaves zeta undefined");
    }
    GeometricConstants gc;
    const double n = p.base_dim();
    if (opts.closed_form && p.kind() != PolytopeKind::GenericH) {
        switch (p.kind()) {
        case PolytopeKind::Simplex: gc.zeta = 1.0; gc.phi = 1.0; break;
        case PolytopeKind::L1Ball: gc.zeta = 2.0; gc.phi = std::sqrt(n); break;
        case PolytopeKind::Box: gc.zeta = 2.0; gc.phi = 1.0; break;
        case PolytopeKind::L1Epigraph: gc.zeta = 1.0; gc.phi = std::sqrt(n + 1.0); break;
        case PolytopeKind::GenericH: break;
        }
        gc.omega = gc.zeta / gc.phi;
        gc.diameter = diameter(p);
        return gc;
    }

    const Matrix A = p.constraint_matrix();
    const Vector a = p.constraint_rhs();
    const auto& vs = p.vertices();
    std::vector<std::int64_t> rows;
    if (opts.drop_redundant_rows) {
        rows = irredundant_rows(p, opts.tol);
    } else {
        rows.resize(static_cast<std::size_t>(A.rows()));
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<std::int64_t>(i);
    }
    double zeta = std::numeric_limits<double>::infinity();
    double phi = 0;
    for (const auto i : rows) {
        bool globally_active = true;
        for (const auto& v : vs) {
            const double slack = a(i) - A.row(i).dot(v);
            if (slack > opts.tol) {
                globally_active = false;
                zeta = std::min(zeta, slack);
            }
        }
        if (!globally_active) phi = std::max(phi, A.row(i).norm());
    }
    if (!std::isfinite(zeta) || phi == 0) {
        fail(ErrorCode::DegeneratePolytope, "no row is strictly inactive at any vertex");
    }
    gc.zeta = zeta;
    gc.phi = phi;
    gc.omega = zeta / phi;
    gc.diameter = diameter(p);
    return gc;
}

} // namespace ascg
