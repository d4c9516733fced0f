#pragma once

#include "ascg/representation.hpp"

#include <utility>
#include <vector>

namespace ascg {

/// How the active set changed during the current vertex-representation update.
struct RepresentationEvent {
    enum class Kind { None, AddVertex, DropVertex };
    Kind kind = Kind::None;
    VertexId id = 0;

    static RepresentationEvent none() { return {}; }
    static RepresentationEvent add(VertexId id) { return {Kind::AddVertex, id}; }
    static RepresentationEvent drop(VertexId id) { return {Kind::DropVertex, id}; }
};

struct IrrOptions {
    double rank_tol = 1e-9;
    double zero_weight_tol = 1e-12;
    /// Recompute W and T from scratch after this many structural updates.
    int refactor_period = 64;
    bool debug_checks = false;
    double consistency_tol = 1e-8;
};

/// Factor state for the incremental reduction.
///
/// With order = (v1, ..., vL) and V the n x (L-1) matrix of columns v_{i+1} - v1, the
/// invariant is W = T V with W upper trapezoidal (column j pivots at row j, rows below the
/// pivot are exactly zero) and T a product of row swaps and eliminations.
struct IrrState {
    std::vector<VertexId> order;
    Matrix W;
    Matrix T;
    int updates_since_refactor = 0;

    int L() const noexcept { return static_cast<int>(order.size()); }
};

/// Keeps the representation affinely independent (|U| <= n+1) with O(n^2) work per update.
class IncrementalReducer {
public:
    explicit IncrementalReducer(int n, IrrOptions opts = {});

    /// Factor from scratch. An affinely dependent input is first reduced with reduce_full.
    void reset(Representation& repr);
    /// Apply after the vertex-representation update of one iteration.
    void update(Representation& repr, const RepresentationEvent& event);

    /// Take over previously computed factors (used by the functional irr_update).
    void adopt(IrrState state);

    const IrrState& state() const noexcept { return state_; }
    const IrrOptions& options() const noexcept { return opts_; }
    /// Number of Caratheodory eliminations performed so far.
    int reductions() const noexcept { return reductions_; }

    /// max |W - T V| for the given representation's vertices.
    double consistency_error(const Representation& repr) const;
    /// Strict staircase: W(i, j) == 0 for i > j and W(j, j) != 0.
    bool echelon_ok() const;

private:
    void refactor(const Representation& repr);
    /// Partial-pivoting elimination from column `first`; returns the first column whose
    /// pivot candidates are all below tolerance, or -1.
    int restore_echelon(int first);
    void append_vertex(Representation& repr);
    void remove_column(int col);
    void drop_reference();
    void verify(const Representation& repr) const;

    int n_;
    IrrOptions opts_;
    IrrState state_;
    int reductions_ = 0;
};

/// Functional form of one reducer update.
std::pair<IrrState, Representation> irr_update(int n, IrrState state, Representation repr,
                                               const RepresentationEvent& event, IrrOptions opts = {});

/// One-shot Caratheodory reduction to an affinely independent subset with the same convex
/// combination. Points are scanned in order and the first point is never eliminated.
struct WeightedPoint {
    Vector point;
    double weight = 0;
};

std::vector<WeightedPoint> reduce_full(std::vector<WeightedPoint> points, double tol = 1e-9,
                                       double zero_weight_tol = 1e-12);

/// Index-preserving variant: kept input indices (ascending) and their new weights.
struct ReductionResult {
    std::vector<std::size_t> kept;
    std::vector<double> weights;
};

ReductionResult reduce_full_indices(const std::vector<Vector>& points, const std::vector<double>& weights,
                                    double tol = 1e-9, double zero_weight_tol = 1e-12);

/// Replace repr by its one-shot reduction, preserving atom order.
void reduce_representation(Representation& repr, double tol = 1e-9, double zero_weight_tol = 1e-12);

/// Coefficient step shared by both reduction paths: given weights mu and an affine
/// dependency lambda_tilde (sum zero, sum lambda_tilde_i v_i = 0), returns alpha so that
/// mu + alpha * lambda_tilde stays nonnegative, zeroes at least one entry and never zeroes
/// entry 0.
double caratheodory_alpha(const std::vector<double>& mu, const std::vector<double>& lambda_tilde);

} // namespace ascg
