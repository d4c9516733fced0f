#pragma once

#include "ascg/polytope.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ascg {

struct OracleAnswer {
    Vector vertex;
    VertexId vertex_id = 0;
    double objective_value = 0; // <c, vertex>
};

/// Vertex linear oracle: a vertex minimizing <c, x> over X.
///
/// Ties resolve to the smallest vertex id. For the box this means c_i = 0 maps to x_i = -1;
/// for the l1 epigraph each coordinate independently takes the smallest digit among its
/// minimizers (digits 0, 1, 2 encode x_i = -1, 0, +1).
OracleAnswer vertex_oracle(const Polytope& p, const Vector& c);

using VertexOracle = std::function<OracleAnswer(const Polytope&, const Vector&)>;

/// E * O_X(E^T c). Minimizes <c, .> over EX but need not return an extreme point of EX.
Vector mapped_oracle_naive(const Polytope& p, const Matrix& E, const Vector& c,
                           const VertexOracle& base = vertex_oracle);

/// Ids of all vertices whose value is within tol of min <c, v>, by enumeration.
std::vector<VertexId> minimizing_vertex_ids(const Polytope& p, const Vector& c, double tol = 1e-9);

/// True when the answer is a listed vertex and attains the enumerated minimum within tol.
bool oracle_answer_is_optimal(const Polytope& p, const Vector& c, const OracleAnswer& ans,
                              double tol = 1e-9);

struct OracleReport {
    int trials = 0;
    int passes = 0;
    int failures = 0;
};

OracleReport verify_oracle(const Polytope& p, int trials, std::uint64_t seed);

/// Extreme points of conv(points), deduplicated. Brute force over affinely independent
/// subsets of size <= d+1; intended for a handful of points.
std::vector<Vector> extreme_points(const std::vector<Vector>& points, double tol = 1e-9);

/// The 3D box instance on which the naive mapped oracle returns a non-vertex of EX.
struct MappedOracleCounterexample {
    Matrix E;
    Vector c;
    Vector Etc;
    std::vector<std::string> labels;        // "A".."H"
    std::vector<Vector> box_vertices;       // in label order
    std::vector<Vector> images;             // E * vertex, label order
    std::vector<std::string> image_extreme; // labels whose image is in ext(EX)
    std::vector<std::string> oracle_ties;   // labels minimizing <E^T c, v> over the box
    std::string default_choice;             // label returned by vertex_oracle
    std::string bad_choice;                 // a tie whose image is not extreme
    Vector bad_image;
};

MappedOracleCounterexample mapped_oracle_counterexample();

} // namespace ascg
