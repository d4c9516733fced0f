#include "ascg/oracle.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ascg;
using testing_helpers::gaussian;
using testing_helpers::same_point_set;
using testing_helpers::vec;

namespace {

double enumerated_min(const Polytope& p, const Vector& c) {
    double best = INFINITY;
    for (const auto& v : p.vertices()) best = std::min(best, c.dot(v));
    return best;
}

} // namespace

TEST_CASE("closed-form oracle examples") {
    SUBCASE("simplex picks the smallest coordinate") {
        const auto a = vertex_oracle(Polytope::simplex(3), vec({3, 1, 2}));
        CHECK(a.vertex_id == 1);
        CHECK((a.vertex - vec({0, 1, 0})).norm() == 0.0);
        CHECK(a.objective_value == 1.0);
    }
    SUBCASE("box tie-break sets zero-cost coordinates to -1") {
        const auto a = vertex_oracle(Polytope::box(3), vec({0, 0, 1}));
        CHECK((a.vertex - vec({-1, -1, -1})).norm() == 0.0);
        CHECK(a.objective_value == -1.0);
    }
    SUBCASE("box minimizer set for c = (0,0,1) is the x3 = -1 face") {
        const auto ids = minimizing_vertex_ids(Polytope::box(3), vec({0, 0, 1}));
        std::vector<Vector> pts;
        for (auto id : ids) pts.push_back(Polytope::box(3).vertex(id));
        // B, C, G, H in the counterexample's labelling.
        CHECK(same_point_set(pts, {vec({1, 1, -1}), vec({1, -1, -1}), vec({-1, 1, -1}), vec({-1, -1, -1})}));
    }
    SUBCASE("l1 ball picks the largest magnitude with opposite sign") {
        const Polytope p = Polytope::l1_ball(3);
        const Vector c = vec({-1, 2, 0.5});
        const auto a = vertex_oracle(p, c);
        CHECK((a.vertex - vec({0, -1, 0})).norm() == 0.0);
        CHECK(a.objective_value == -2.0);
        CHECK(a.objective_value == enumerated_min(p, c));
    }
    SUBCASE("dimension mismatch") {
        try {
            vertex_oracle(Polytope::simplex(3), vec({1, 2}));
            FAIL("expected DimensionMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DimensionMismatch);
        }
    }
}

TEST_CASE("oracle verification against enumeration") {
    CHECK(verify_oracle(Polytope::simplex(5), 1000, 1).passes == 1000);
    CHECK(verify_oracle(Polytope::box(8), 1000, 2).passes == 1000);
    CHECK(verify_oracle(Polytope::l1_ball(6), 1000, 3).passes == 1000);
    CHECK(verify_oracle(Polytope::l1_epigraph(4), 1000, 4).passes == 1000);
    const auto box = Polytope::box(4);
    CHECK(verify_oracle(Polytope::from_halfspaces(box.constraint_matrix(), box.constraint_rhs()), 1000, 5).passes ==
          1000);
}

TEST_CASE("zero direction accepts any vertex") {
    for (const auto& p : {Polytope::simplex(3), Polytope::box(2), Polytope::l1_ball(2)}) {
        const Vector c = Vector::Zero(p.dim());
        CHECK(minimizing_vertex_ids(p, c).size() == p.vertices().size());
        for (std::size_t i = 0; i < p.vertices().size(); ++i) {
            OracleAnswer a{p.vertices()[i], static_cast<VertexId>(i), 0.0};
            CHECK(oracle_answer_is_optimal(p, c, a));
        }
    }
}

TEST_CASE("oracle determinism and scale invariance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (const auto& p : {Polytope::simplex(4), Polytope::box(4), Polytope::l1_ball(4), Polytope::l1_epigraph(3)}) {
        for (int t = 0; t < 100; ++t) {
            const Vector c = gaussian(p.dim(), 1, rng).col(0);
            CHECK(vertex_oracle(p, c).vertex_id == vertex_oracle(p, c).vertex_id);
            const double s = scale(rng);
            const auto a = vertex_oracle(p, c);
            CHECK(s * c.dot(a.vertex) <= enumerated_min(p, s * c) + 1e-9);
        }
    }
}

TEST_CASE("integer directions with ties stay optimal") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (const auto& p : {Polytope::simplex(4), Polytope::box(3), Polytope::l1_ball(4), Polytope::l1_epigraph(3)}) {
        for (int t = 0; t < 200; ++t) {
            Vector c(p.dim());
            for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = coef(rng);
            const auto a = vertex_oracle(p, c);
            CHECK(oracle_answer_is_optimal(p, c, a));
            // Smallest-id tie-break among all minimizers.
            CHECK(a.vertex_id == minimizing_vertex_ids(p, c).front());
        }
    }
}

TEST_CASE("naive mapped oracle") {
    std::mt19937_64 rng(3);
    const auto p = Polytope::box(3);
    const Vector c = gaussian(3, 1, rng).col(0);
    CHECK((mapped_oracle_naive(p, Matrix::Identity(3, 3), c) - vertex_oracle(p, c).vertex).norm() == 0.0);
    CHECK(mapped_oracle_naive(p, Matrix::Zero(2, 3), vec({1, -1})).norm() == 0.0);
    try {
        mapped_oracle_naive(p, Matrix::Identity(3, 3), vec({1, 2}));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("mapped oracle counterexample") {
    const auto ex = mapped_oracle_counterexample();
    CHECK(ex.image_extreme == std::vector<std::string>{"A", "B", "F", "H"});
    CHECK(ex.oracle_ties == std::vector<std::string>{"B", "C", "G", "H"});
    CHECK(ex.bad_choice == "C");
    CHECK((ex.bad_image - vec({-1, 1, -2})).norm() == 0.0);
    // Images listed for A', B', C', F', H'.
    CHECK((ex.images[0] - vec({3, 1, 2})).norm() == 0.0);
    CHECK((ex.images[1] - vec({1, 3, -2})).norm() == 0.0);
    CHECK((ex.images[2] - vec({-1, 1, -2})).norm() == 0.0);
    CHECK((ex.images[5] - vec({-1, -3, 2})).norm() == 0.0);
    CHECK((ex.images[7] - vec({-3, -1, -2})).norm() == 0.0);
    // Independent check of the extreme images: a point is extreme iff it is not a convex
    // combination of the others; here the four survivors are affinely independent and
    // every other image is the midpoint of two survivors.
    CHECK(((vec({3, 1, 2}) + vec({-3, -1, -2})) / 2 - vec({0, 0, 0})).norm() == 0.0);
    CHECK(((vec({1, 3, -2}) + vec({-3, -1, -2})) / 2 - vec({-1, 1, -2})).norm() == 0.0);
    CHECK(((vec({3, 1, 2}) + vec({-1, -3, 2})) / 2 - vec({1, -1, 2})).norm() == 0.0);
    const auto ext = extreme_points(ex.images);
    CHECK(same_point_set(ext, {vec({3, 1, 2}), vec({1, 3, -2}), vec({-1, -3, 2}), vec({-3, -1, -2})}));
}
