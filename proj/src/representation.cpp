#include "ascg/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ascg {

Representation Representation::singleton(VertexId id, Vector vertex) {
    Representation r;
    r.append(id, std::move(vertex), 1.0);
    r.refresh_point();
    return r;
}

std::optional<std::size_t> Representation::index_of(VertexId id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double Representation::weight_sum() const {
    double s = 0;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double Representation::reconstruction_error() const {
    if (atoms_.empty()) return 0.0;
    Vector acc = Vector::Zero(atoms_.front().vertex.size());
    for (const auto& a : atoms_) acc += a.weight * a.vertex;
    if (point_.size() != acc.size()) return std::numeric_limits<double>::infinity();
    return (point_ - acc).norm();
}

void Representation::append(VertexId id, Vector vertex, double weight) {
    if (index_.count(id)) fail(ErrorCode::InconsistentState, "vertex already in representation");
    if (!atoms_.empty()) require_dim(vertex.size(), atoms_.front().vertex.size(), "representation vertex");
    index_[id] = atoms_.size();
    atoms_.push_back(Atom{id, std::move(vertex), weight});
}

void Representation::erase_at(std::size_t i) {
    atoms_.erase(atoms_.begin() + static_cast<std::ptrdiff_t>(i));
    reindex();
}

std::vector<VertexId> Representation::erase_small_weights(double tol) {
    std::vector<VertexId> gone;
    for (const auto& a : atoms_) {
        if (a.weight <= tol) gone.push_back(a.id);
    }
    if (gone.empty()) return gone;
    std::erase_if(atoms_, [tol](const Atom& a) { return a.weight <= tol; });
    reindex();
    return gone;
}

void Representation::renormalize() {
    const double s = weight_sum();
    if (s > 0 && s != 1.0) {
        for (auto& a : atoms_) a.weight /= s;
    }
}

void Representation::refresh_point() {
    if (atoms_.empty()) {
        point_.resize(0);
        return;
    }
    point_ = Vector::Zero(atoms_.front().vertex.size());
    for (const auto& a : atoms_) point_ += a.weight * a.vertex;
}

void Representation::reindex() {
    index_.clear();
    for (std::size_t i = 0; i < atoms_.size(); ++i) index_[atoms_[i].id] = i;
}

RepresentationCheck check_representation(const Representation& repr, std::size_t max_size) {
    std::ostringstream msg;
    if (repr.empty()) msg << "empty representation; ";
    if (std::abs(repr.weight_sum() - 1.0) > 1e-10) msg << "weights sum to " << repr.weight_sum() << "; ";
    for (const auto& a : repr.atoms()) {
        if (!(a.weight > 0)) msg << "nonpositive weight " << a.weight << " on vertex " << a.id << "; ";
    }
    if (repr.reconstruction_error() > 1e-8) msg << "reconstruction error " << repr.reconstruction_error() << "; ";
    if (repr.size() > max_size) msg << "|U| = " << repr.size() << " exceeds " << max_size << "; ";
    RepresentationCheck out;
    out.message = msg.str();
    out.ok = out.message.empty();
    return out;
}

} // namespace ascg
