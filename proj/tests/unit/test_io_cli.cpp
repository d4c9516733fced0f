#include "ascg/compare.hpp"
#include "ascg/io.hpp"
#include "ascg/problems.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ascg;
using testing_helpers::vec;

TEST_CASE("polytope json round trip") {
    for (const auto& p : {Polytope::simplex(4), Polytope::box(3), Polytope::l1_ball(5), Polytope::l1_epigraph(3),
                          Polytope::l1_epigraph(20)}) {
        const auto j = to_json(p);
        const auto q = polytope_from_json(json::parse(dump(j)));
        CHECK(q.kind() == p.kind());
        CHECK(q.dim() == p.dim());
        CHECK(q.num_vertices() == p.num_vertices());
        CHECK(dump(to_json(q)) == dump(j));
    }
    CHECK(to_json(Polytope::l1_epigraph(3)).contains("A"));
    CHECK_FALSE(to_json(Polytope::l1_epigraph(13)).contains("A"));

    Matrix A(3, 2);
    A << -1, 0, 0, -1, 1, 1;
    const auto tri = Polytope::from_halfspaces(A, vec({0, 0, 1}));
    const auto back = polytope_from_json(to_json(tri));
    CHECK(back.kind() == PolytopeKind::GenericH);
    CHECK((back.constraint_matrix() - A).norm() == 0.0);
    CHECK(testing_helpers::same_point_set(back.vertices(), tri.vertices()));

    try {
        polytope_from_json(json{{"kind", "dodecahedron"}, {"n", 3}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("problem json round trip") {
    const auto prob = random_quadratic(Polytope::box(3), 2, 4, 0.7);
    const auto text = dump(to_json(prob));
    const auto back = problem_from_json(json::parse(text));
    CHECK(dump(to_json(back)) == text);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        const Vector x = testing_helpers::gaussian(3, 1, rng).col(0);
        CHECK(back.objective.value(x) == prob.objective.value(x));
        CHECK((back.objective.gradient(x) - prob.objective.gradient(x)).norm() == 0.0);
    }
}

TEST_CASE("trace csv round trip and revalidation") {
    const auto prob = random_quadratic(Polytope::simplex(5), 3, 2);
    SolverConfig cfg;
    cfg.max_iters = 200;
    const auto t = ascg_run(prob.objective, prob.polytope, cfg);
    std::ostringstream out;
    write_trace_csv(out, t.steps);
    CHECK(out.str().rfind(std::string(kTraceCsvHeader) + "\n", 0) == 0);
    std::istringstream in(out.str());
    const auto rows = read_trace_csv(in);
    REQUIRE(rows.size() == t.steps.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].iteration == t.steps[k].iteration);
        CHECK(rows[k].f_value == t.steps[k].f_value);
        CHECK(rows[k].fw_gap == t.steps[k].fw_gap);
        CHECK(rows[k].gamma == t.steps[k].gamma);
        CHECK(rows[k].step_type == t.steps[k].step_type);
        CHECK(rows[k].s_count == t.steps[k].s_count);
    }
    CHECK(validate_trace(rows, reduction_constant(prob.polytope, cfg.reduction)).ok);

    std::ostringstream again;
    write_trace_csv(again, ascg_run(prob.objective, prob.polytope, cfg).steps);
    CHECK(again.str() == out.str());

    std::istringstream bad("iteration,f_value\n1,2\n");
    CHECK_THROWS_AS(read_trace_csv(bad), Error);
    std::istringstream junk(std::string(kTraceCsvHeader) + "\n1,x,0,forward,0,1,1,0,0\n");
    CHECK_THROWS_AS(read_trace_csv(junk), Error);

    const auto summary = trace_summary(t);
    CHECK(summary["iterations"].get<int>() == static_cast<int>(t.steps.size()));
    CHECK(summary["f"].get<double>() == t.f);
}

TEST_CASE("l1 least squares generator") {
    SUBCASE("lambda = 0 gives b = 0") {
        const auto prob = generate_l1ls(4, 3, 0.0, 5);
        CHECK(prob.objective.b().norm() == 0.0);
        CHECK(prob.polytope.kind() == PolytopeKind::L1Epigraph);
        CHECK(prob.polytope.dim() == 4);
    }
    SUBCASE("b carries lambda on y") {
        const auto prob = generate_l1ls(4, 3, 0.25, 5);
        CHECK((prob.objective.b() - vec({0, 0, 0, 0.25})).norm() == 0.0);
        CHECK(prob.objective.E().col(3).norm() == 0.0);
        CHECK(prob.meta["M"].get<double>() == 3.0);
    }
    SUBCASE("B = I with c inside the box") {
        const Vector c = vec({0.5, -0.25, 0});
        const auto prob = make_l1ls(Matrix::Identity(3, 3), c, 0.0);
        // Independent evaluation of ||Bx - c||^2 + lambda y at a few lifted points.
        for (const Vector& x : {vec({0, 0, 0, 1}), vec({1, 1, 1, 3}), vec({0.5, -0.25, 0, 0.75})}) {
            CHECK(prob.objective.value(x) == doctest::Approx((x.head(3) - c).squaredNorm()).epsilon(1e-14));
        }
        SolverConfig cfg;
        cfg.stepsize = StepsizeRule::ExactLineSearch;
        cfg.max_iters = 5000;
        cfg.gap_tolerance = 1e-10;
        const auto t = ascg_run(prob.objective, prob.polytope, cfg);
        CHECK(t.f <= 1e-9);
        CHECK((t.x.head(3) - c).norm() <= 1e-4);
        CHECK(t.x(3) >= c.lpNorm<1>() - 1e-6);
        CHECK(t.x(3) <= 3 + 1e-12);
    }
    SUBCASE("seeded generation is deterministic") {
        CHECK(dump(to_json(generate_l1ls(10, 20, 0.1, 42))) == dump(to_json(generate_l1ls(10, 20, 0.1, 42))));
        CHECK(dump(to_json(generate_l1ls(10, 20, 0.1, 42))) != dump(to_json(generate_l1ls(10, 20, 0.1, 43))));
    }
}

TEST_CASE("compare harness") {
    SUBCASE("rows keep entry order and isolate failures") {
        const auto prob = random_quadratic(Polytope::box(3), 3, 8);
        std::vector<CompareEntry> entries;
        SolverConfig cfg;
        cfg.max_iters = 300;
        entries.push_back({"cg", Algorithm::CG, cfg});
        entries.push_back({"ascg", Algorithm::ASCG, cfg});
        SolverConfig broken = cfg;
        broken.start_vertex_id = 1000;
        entries.push_back({"broken", Algorithm::ASCG, broken});
        cfg.reduction = ReductionKind::Caratheodory;
        entries.push_back({"ascg-c", Algorithm::ASCG, cfg});
        const auto rows = compare(prob, entries);
        REQUIRE(rows.size() == 4);
        CHECK(rows[0].label == "cg");
        CHECK(rows[3].label == "ascg-c");
        CHECK(rows[0].ok);
        CHECK_FALSE(rows[2].ok);
        CHECK_FALSE(rows[2].error.empty());
        CHECK(rows[3].ok);
        CHECK(rows[3].max_repr_size <= 4);
        const auto serial = compare(prob, entries, false);
        for (std::size_t i = 0; i < rows.size(); ++i) CHECK(serial[i].final_f == rows[i].final_f);

        std::ostringstream csv;
        write_compare_csv(csv, rows);
        const std::string text = csv.str();
        CHECK(std::count(text.begin(), text.end(), '\n') == 5);
        CHECK(format_compare_table(rows).find("ascg-c") != std::string::npos);
    }
    SUBCASE("away steps beat zig-zagging on an l1 least-squares instance") {
        const auto prob = generate_l1ls(8, 6, 0.5, 1);
        SolverConfig cfg;
        cfg.stepsize = StepsizeRule::ExactLineSearch;
        cfg.max_iters = 20000;
        const auto rows = compare(prob, {{"cg", Algorithm::CG, cfg}, {"ascg", Algorithm::ASCG, cfg}});
        REQUIRE(rows[1].iters_to_1e6 > 0);
        const int cg_1e3 = rows[0].iters_to_1e3 < 0 ? cfg.max_iters + 1 : rows[0].iters_to_1e3;
        CHECK(rows[1].iters_to_1e6 < cg_1e3);
        CHECK(rows[1].drop_steps > 0);
    }
    SUBCASE("immediate convergence gives one iteration") {
        const auto prob = distance_problem(Polytope::simplex(3), vec({2, 0, 0}));
        SolverConfig cfg;
        cfg.start_vertex_id = 0;
        const auto rows = compare(prob, {{"ascg", Algorithm::ASCG, cfg}});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].ok);
        CHECK(rows[0].iterations == 1);
        CHECK(rows[0].iters_to_1e3 == 1);
        CHECK(rows[0].iters_to_1e6 == 1);
    }
    SUBCASE("iterations to gap thresholds") {
        std::vector<StepRecord> steps(4);
        const double gaps[] = {1.0, 1e-2, 5e-4, 1e-7};
        for (int k = 0; k < 4; ++k) {
            steps[k].iteration = k + 1;
            steps[k].fw_gap = gaps[k];
        }
        CHECK(iterations_to_gap(steps, 1e-3) == 3);
        CHECK(iterations_to_gap(steps, 1e-6) == 4);
        CHECK(iterations_to_gap(steps, 1e-9) == -1);
    }
    SUBCASE("trivial and caratheodory reductions on the box") {
        const auto prob = random_quadratic(Polytope::box(4), 4, 21);
        SolverConfig cfg;
        cfg.stepsize = StepsizeRule::ExactLineSearch;
        cfg.max_iters = 400;
        cfg.record_iterates = true;
        const auto trivial = ascg_run(prob.objective, prob.polytope, cfg);
        cfg.reduction = ReductionKind::Caratheodory;
        const auto cara = ascg_run(prob.objective, prob.polytope, cfg);
        CHECK(cara.max_repr_size <= 5);
        CHECK(std::abs(trivial.f - cara.f) <= 1e-8);
        REQUIRE(trivial.iterates.size() == cara.iterates.size());
        for (std::size_t k = 0; k < trivial.iterates.size(); ++k) {
            CHECK((trivial.iterates[k] - cara.iterates[k]).norm() <= 1e-8);
        }
    }
}
