#pragma once

#include "ascg/common.hpp"

#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace ascg {

/// Structured kinds carry closed-form vertex sets, oracles and geometric constants.
/// `L1Epigraph` is the lifted set {(x, y) : x in [-1,1]^n, ||x||_1 <= y <= n} used by the
/// l1-regularized least-squares reformulation.
enum class PolytopeKind { Simplex, L1Ball, Box, L1Epigraph, GenericH };

std::string_view to_string(PolytopeKind kind);

struct EnumerationLimits {
    int max_generic_dim = 12;
    std::int64_t max_row_subsets = 20'000'000;
    std::int64_t max_vertices = std::int64_t{1} << 20;
    /// Row-level operations on implicit structured rows are refused above this count.
    std::int64_t max_implicit_rows = (std::int64_t{1} << 16) + 64;
    double tol = 1e-9;
};

/// Compact polyhedron {x : Ax <= a}. Immutable; copies share the lazily built vertex cache.
///
/// Row layouts of the structured kinds:
///   Simplex    [-I; 1^T; -1^T], a = (0, 1, -1)
///   Box        [I; -I], a = 1
///   L1Ball     rows w in {-1,1}^n, row r has w_i = -1 iff bit i of r is set, a = 1
///   L1Epigraph x_i <= 1, -x_i <= 1, y <= n, -y <= 0, then sigma^T x - y <= 0 for the
///              2^n sign patterns (same bit convention as L1Ball)
class Polytope {
public:
    static Polytope simplex(int n);
    static Polytope l1_ball(int n);
    static Polytope box(int n);
    static Polytope l1_epigraph(int base_dim);
    /// Validates nonemptiness and boundedness by vertex and extreme-ray enumeration.
    static Polytope from_halfspaces(Matrix A, Vector a, EnumerationLimits limits = {});

    PolytopeKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    /// For L1Epigraph the dimension of the x block; otherwise equal to dim().
    int base_dim() const noexcept { return kind_ == PolytopeKind::L1Epigraph ? dim_ - 1 : dim_; }
    const EnumerationLimits& limits() const noexcept { return limits_; }

    std::int64_t num_rows() const;
    Vector row(std::int64_t i) const;
    double rhs(std::int64_t i) const;
    bool rows_materializable() const;
    /// Full H-form. Throws DimensionCapExceeded for implicit row sets that are too large.
    Matrix constraint_matrix() const;
    Vector constraint_rhs() const;

    /// |ext(X)| without enumerating for structured kinds.
    std::int64_t num_vertices() const;
    /// ext(X), enumerated on first use. Order matches vertex ids.
    const std::vector<Vector>& vertices() const;
    Vector vertex(VertexId id) const;
    /// Inverse of vertex(); throws InvalidArgument if v is not a vertex.
    VertexId vertex_id(const Vector& v) const;

private:
    struct VertexCache {
        std::once_flag once;
        std::vector<Vector> vertices;
    };

    Polytope(PolytopeKind kind, int dim, EnumerationLimits limits);
    void check_implicit_rows() const;

    PolytopeKind kind_;
    int dim_;
    EnumerationLimits limits_;
    Matrix A_;
    Vector a_;
    std::shared_ptr<VertexCache> cache_;
};

/// ext(X): closed forms for structured kinds, active-row subset enumeration for GenericH.
std::vector<Vector> enumerate_vertices(const Polytope& p);

struct ActiveSet {
    std::vector<std::int64_t> indices; // sorted, zero-based row indices
    double tol = kActivityTol;

    bool contains(std::int64_t i) const;
    bool empty() const noexcept { return indices.empty(); }
    friend bool operator==(const ActiveSet& a, const ActiveSet& b) { return a.indices == b.indices; }
};

ActiveSet active_set(const Polytope& p, const Vector& x, double tol = kActivityTol);
ActiveSet active_set_of_union(const Polytope& p, std::span<const Vector> points,
                              double tol = kActivityTol);

struct GeometricConstants {
    double zeta = 0;
    double phi = 0;
    double omega = 0;
    double diameter = 0;
};

struct GeometricOptions {
    /// Use the analytic values for structured kinds instead of the row/vertex definition.
    bool closed_form = true;
    /// Drop rows that do not define facets (and duplicated facets) before computing phi.
    bool drop_redundant_rows = false;
    double tol = kActivityTol;
};

GeometricConstants geometric_constants(const Polytope& p, const GeometricOptions& opts = {});

/// D = max distance between two points of X.
double diameter(const Polytope& p);
/// D_E = max ||Ex - Ey|| over X, exact by maximizing over vertex pairs.
double diameter_of_image(const Polytope& p, const Matrix& E);

/// Rows that pass the facet test of drop_redundant_rows (plus implicit equalities).
std::vector<std::int64_t> irredundant_rows(const Polytope& p, double tol = kActivityTol);

} // namespace ascg
