#pragma once

#include "ascg/common.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ascg {

/// One vertex of the active set U with its convex weight mu.
struct Atom {
    VertexId id = 0;
    Vector vertex;
    double weight = 0;
};

/// Convex representation x = sum mu_v v over the active vertex set U.
///
/// Atoms keep insertion order: vertices entering U are appended, leaving vertices are
/// erased in place. The incremental Caratheodory reducer relies on this order (the first
/// atom is its reference vertex).
class Representation {
public:
    Representation() = default;
    static Representation singleton(VertexId id, Vector vertex);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }
    std::optional<std::size_t> index_of(VertexId id) const;
    bool contains(VertexId id) const { return index_of(id).has_value(); }

    /// The represented point, refreshed by refresh_point().
    const Vector& point() const noexcept { return point_; }
    double weight_sum() const;
    /// ||point - sum mu_v v||.
    double reconstruction_error() const;

    void append(VertexId id, Vector vertex, double weight);
    void erase_at(std::size_t i);
    void set_weight(std::size_t i, double w) { atoms_[i].weight = w; }
    /// Erases atoms with weight <= tol; returns the erased ids in their former order.
    std::vector<VertexId> erase_small_weights(double tol);
    void renormalize();
    void refresh_point();

private:
    void reindex();

    std::vector<Atom> atoms_;
    std::unordered_map<VertexId, std::size_t> index_;
    Vector point_;
};

struct RepresentationCheck {
    bool ok = true;
    std::string message;
};

/// Sum to one within 1e-10, strictly positive weights, reconstruction within 1e-8 and
/// |U| <= max_size.
RepresentationCheck check_representation(const Representation& repr, std::size_t max_size);

} // namespace ascg
