#include "ascg/objective.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ascg;
using testing_helpers::gaussian;
using testing_helpers::vec;

namespace {

CompositeObjective sq_norm(const Matrix& E, const Vector& b) {
    const auto m = E.rows();
    return CompositeObjective::quadratic(E, b, QuadraticForm{Matrix::Identity(m, m), Vector::Zero(m), 0.0});
}

CompositeObjective random_instance(int n, int m, std::mt19937_64& rng) {
    const Matrix R = gaussian(m, m, rng);
    return CompositeObjective::quadratic(gaussian(m, n, rng), gaussian(n, 1, rng).col(0),
                                         QuadraticForm{R * R.transpose() + 0.1 * Matrix::Identity(m, m),
                                                       gaussian(m, 1, rng).col(0), 0.3});
}

Vector random_point(const Polytope& p, std::mt19937_64& rng) {
    std::exponential_distribution<double> ex;
    Vector x = Vector::Zero(p.dim());
    double total = 0;
    for (const auto& v : p.vertices()) {
        const double w = ex(rng);
        x += w * v;
        total += w;
    }
    return x / total;
}

} // namespace

TEST_CASE("evaluation examples") {
    const auto f = sq_norm(Matrix::Identity(2, 2), Vector::Zero(2));
    CHECK(eval(f, vec({1, 1})) == 2.0);
    CHECK((grad(f, vec({1, 2})) - vec({2, 4})).norm() == 0.0);
    const auto fb = sq_norm(Matrix::Identity(2, 2), vec({5, 5}));
    CHECK((grad(fb, Vector::Zero(2)) - vec({5, 5})).norm() == 0.0);
    CHECK(eval(fb, Vector::Zero(2)) == 0.0);

    Matrix E(2, 2);
    E << 1, 0, 0, 0;
    // g(y) = ||y - (1,0)||^2 = ||y||^2 - 2 y1 + 1.
    const auto rank1 =
        CompositeObjective::quadratic(E, vec({0, 1}), QuadraticForm{Matrix::Identity(2, 2), vec({-2, 0}), 1.0});
    CHECK(eval(rank1, vec({1, 1})) == doctest::Approx(1.0).epsilon(1e-15));
    const Vector y = E * vec({1, 1});
    CHECK((y - vec({1, 0})).squaredNorm() + vec({0, 1}).dot(vec({1, 1})) == 1.0);
}

TEST_CASE("errors") {
    const auto f = sq_norm(Matrix::Identity(2, 2), Vector::Zero(2));
    try {
        eval(f, vec({1, 2, 3}));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    InnerFunction bad{[](const Vector&) { return NAN; }, [](const Vector& y) { return Vector(y); }, 1.0, 1.0};
    const auto g = CompositeObjective::general(Matrix::Identity(2, 2), Vector::Zero(2), bad);
    try {
        eval(g, vec({1, 2}));
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFinite);
    }
    InnerFunction no_lip{[](const Vector& y) { return y.squaredNorm(); }, [](const Vector& y) { return Vector(2 * y); },
                         2.0, std::nullopt};
    try {
        lipschitz_rho(CompositeObjective::general(Matrix::Identity(2, 2), Vector::Zero(2), no_lip));
        FAIL("expected MissingSmoothnessInfo");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingSmoothnessInfo);
    }
    CHECK_THROWS_AS(CompositeObjective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2),
                                                  QuadraticForm{Matrix::Zero(2, 2), Vector::Zero(2), 0.0}),
                    Error);
}

TEST_CASE("lipschitz constant") {
    CHECK(lipschitz_rho(sq_norm(Matrix::Identity(2, 2), Vector::Zero(2))) == doctest::Approx(2.0).epsilon(1e-14));
    Matrix E = Matrix::Zero(2, 2);
    E(0, 0) = 3;
    E(1, 1) = 1;
    CHECK(lipschitz_rho(sq_norm(E, Vector::Zero(2))) == doctest::Approx(18.0).epsilon(1e-14));
    CHECK(lipschitz_rho(sq_norm(Matrix::Zero(2, 2), Vector::Zero(2))) == 0.0);
    // General g: L_g ||E||^2.
    InnerFunction g{[](const Vector& y) { return y.squaredNorm(); }, [](const Vector& y) { return Vector(2 * y); }, 2.0,
                    2.0};
    CHECK(lipschitz_rho(CompositeObjective::general(E, Vector::Zero(2), g)) == doctest::Approx(18.0).epsilon(1e-12));
}

TEST_CASE("problem constants") {
    SUBCASE("squared norm on the square") {
        const auto f = sq_norm(Matrix::Identity(2, 2), vec({0.5, -1}));
        const auto pc = problem_constants(f, Polytope::box(2));
        CHECK(pc.G == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
        CHECK(pc.D == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
        CHECK(pc.D_E == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
        CHECK(pc.C == doctest::Approx(8 + vec({0.5, -1}).norm() * 2 * std::sqrt(2.0)).epsilon(1e-14));
        CHECK(pc.C == pc.G * pc.D_E + pc.b_norm * pc.D);
        CHECK(pc.G_exact);
    }
    SUBCASE("b = 0 and E = 0 reductions") {
        std::mt19937_64 rng(1);
        const auto f = CompositeObjective::quadratic(gaussian(2, 3, rng), Vector::Zero(3),
                                                     QuadraticForm{Matrix::Identity(2, 2), vec({1, 2}), 0.0});
        const auto pc = problem_constants(f, Polytope::simplex(3));
        CHECK(pc.C == pc.G * pc.D_E);
        const auto z = CompositeObjective::quadratic(Matrix::Zero(2, 3), vec({1, 2, 2}),
                                                     QuadraticForm{Matrix::Identity(2, 2), vec({1, 2}), 0.0});
        const auto pz = problem_constants(z, Polytope::simplex(3));
        CHECK(pz.D_E == 0.0);
        CHECK(pz.G == doctest::Approx(vec({1, 2}).norm()));
        CHECK(pz.C == doctest::Approx(3.0 * std::sqrt(2.0)));
    }
}

TEST_CASE("gradient matches central differences") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 5;
        const auto f = random_instance(n, 1 + t % 4, rng);
        const Vector x = gaussian(n, 1, rng).col(0);
        const Vector gx = f.gradient(x);
        Vector fd(n);
        const double h = 1e-5;
        for (int i = 0; i < n; ++i) {
            Vector e = Vector::Zero(n);
            e(i) = h;
            fd(i) = (f.value(x + e) - f.value(x - e)) / (2 * h);
        }
        CHECK((gx - fd).norm() <= 1e-5 * (1 + gx.norm()));
    }
}

TEST_CASE("descent lemma and strong convexity of g") {
    std::mt19937_64 rng(8);
    for (const auto& p : {Polytope::simplex(4), Polytope::box(3), Polytope::l1_ball(3)}) {
        const auto f = random_instance(p.dim(), 3, rng);
        const double rho = lipschitz_rho(f);
        for (int t = 0; t < 100; ++t) {
            const Vector x = random_point(p, rng);
            const Vector y = random_point(p, rng);
            const double rhs = f.value(x) + f.gradient(x).dot(y - x) + 0.5 * rho * (x - y).squaredNorm();
            CHECK(f.value(y) <= rhs + 1e-10 * (1 + std::abs(rhs)));
            const Vector y1 = f.E() * x, y2 = f.E() * y;
            const double lower = f.inner_value(y1) + f.inner_gradient(y1).dot(y2 - y1) +
                                 0.5 * f.sigma_g() * (y2 - y1).squaredNorm();
            CHECK(f.inner_value(y2) >= lower - 1e-10 * (1 + std::abs(lower)));
        }
    }
}

TEST_CASE("quadratic parameters") {
    Matrix Q(2, 2);
    Q << 2, 1, 0, 3; // symmetrized to [[2, .5], [.5, 3]]
    const auto f = CompositeObjective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), QuadraticForm{Q, {}, 0});
    const double tr = 5, det = 6 - 0.25;
    const double lmin = (tr - std::sqrt(tr * tr - 4 * det)) / 2;
    const double lmax = (tr + std::sqrt(tr * tr - 4 * det)) / 2;
    CHECK(f.sigma_g() == doctest::Approx(2 * lmin).epsilon(1e-14));
    CHECK(*f.lipschitz_g() == doctest::Approx(2 * lmax).epsilon(1e-14));
}
