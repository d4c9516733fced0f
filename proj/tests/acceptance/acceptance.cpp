#include "ascg/certificates.hpp"
#include "ascg/problems.hpp"
#include "ascg/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ascg;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Every trace produced here, for the suite-wide criteria 5 and 9.
struct TraceLog {
    std::vector<std::pair<std::string, SolverTrace>> traces;

    const SolverTrace& add(std::string label, SolverTrace t) {
        traces.emplace_back(std::move(label), std::move(t));
        return traces.back().second;
    }
};

TraceLog g_log;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Outcome omega_closed_forms() {
    double worst = 0;
    for (int n = 2; n <= 8; ++n) {
        const std::pair<Polytope, double> cases[] = {{Polytope::simplex(n), 1.0},
                                                     {Polytope::l1_ball(n), 2.0 / std::sqrt(n)},
                                                     {Polytope::box(n), 2.0}};
        for (const auto& [p, expected] : cases) {
            for (bool closed : {true, false}) {
                GeometricOptions opts;
                opts.closed_form = closed;
                worst = std::max(worst, std::abs(geometric_constants(p, opts).omega - expected));
            }
        }
    }
    return {worst <= 1e-12, "max |omega - closed form| = " + fmt(worst) + " (closed form and definition)"};
}

Outcome oracle_correctness() {
    std::vector<std::pair<std::string, Polytope>> sets{
        {"simplex(8)", Polytope::simplex(8)}, {"l1(8)", Polytope::l1_ball(8)},
        {"box(8)", Polytope::box(8)},         {"l1-epigraph(7)", Polytope::l1_epigraph(7)}};
    const auto box = Polytope::box(6);
    sets.emplace_back("H-box(6)", Polytope::from_halfspaces(box.constraint_matrix(), box.constraint_rhs()));
    const auto cross = Polytope::l1_ball(5);
    sets.emplace_back("H-l1(5)", Polytope::from_halfspaces(cross.constraint_matrix(), cross.constraint_rhs()));
    Matrix A(7, 3);
    A << 1, 0, 0, 0, 1, 0, 0, 0, 1, -1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1;
    Vector a(7);
    a << 1, 1, 1, 1, 1, 1, 1.5;
    sets.emplace_back("H-cut-cube(3)", Polytope::from_halfspaces(A, a));
    bool ok = true;
    std::ostringstream d;
    std::uint64_t seed = 1;
    for (const auto& [name, p] : sets) {
        const auto r = verify_oracle(p, 1000, seed++);
        ok = ok && r.passes == 1000;
        d << name << " " << r.passes << "/1000 ";
    }
    return {ok, d.str()};
}

struct Certified {
    std::string name;
    Problem problem;
};

std::vector<Certified> certified_instances() {
    Matrix A(5, 2);
    A << 1, 0, 0, 1, -1, 0, 0, -1, 1, 1;
    Vector a(5);
    a << 1, 1, 0, 0, 1.5;
    return {
        {"simplex(3)", random_quadratic(Polytope::simplex(3), 3, 1, 0.5)},
        {"simplex(4)", random_quadratic(Polytope::simplex(4), 3, 2, 0.5)},
        {"box(3)", random_quadratic(Polytope::box(3), 3, 3, 0.5)},
        {"l1(3)", random_quadratic(Polytope::l1_ball(3), 3, 4, 0.5)},
        {"l1-epigraph(2)", random_quadratic(Polytope::l1_epigraph(2), 3, 5, 0.5)},
        {"H-pentagon(2)", random_quadratic(Polytope::from_halfspaces(A, a), 2, 6, 0.5)},
    };
}

Outcome rate_bound() {
    int instances = 0, traces = 0, rows = 0;
    double worst = 0;
    bool ok = true;
    std::string err;
    for (const auto& inst : certified_instances()) {
        const auto& obj = inst.problem.objective;
        const auto& p = inst.problem.polytope;
        SolverConfig base;
        base.max_iters = 500;
        base.gap_tolerance = 1e-10;
        const auto ref = reference_solution(obj, p, base);
        for (auto rule : {StepsizeRule::ExactLineSearch, StepsizeRule::Adaptive}) {
            for (auto red : {ReductionKind::Trivial, ReductionKind::Caratheodory}) {
                SolverConfig cfg = base;
                cfg.stepsize = rule;
                cfg.reduction = red;
                const auto cert = rate_certificate(obj, p, cfg);
                const auto& t = g_log.add(inst.name, ascg_run(obj, p, cfg));
                try {
                    const auto r = check_rate_bound(t, cert, ref.f_star);
                    worst = std::max(worst, r.max_ratio);
                    rows += r.checked;
                } catch (const Error& e) {
                    ok = false;
                    err = inst.name + ": " + e.what();
                }
                ++traces;
            }
        }
        ++instances;
    }
    ok = ok && instances >= 5;
    return {ok, std::to_string(instances) + " instances, " + std::to_string(traces) + " traces, " +
                    std::to_string(rows) + " rows, max (f-f*)/bound = " + fmt(worst) + (err.empty() ? "" : "; " + err)};
}

double slope_of_log_gap(const std::vector<StepRecord>& steps, double f_star) {
    const std::size_t from = steps.size() / 5;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = from; k < steps.size(); ++k) {
        const double e = steps[k].f_value - f_star;
        if (e <= 0) continue;
        const double x = steps[k].iteration, y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return NAN;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Outcome linear_rate() {
    const auto prob = generate_l1ls(10, 20, 0.1, 42);
    const auto& obj = prob.objective;
    const auto& p = prob.polytope;

    SolverConfig ref_cfg;
    ref_cfg.stepsize = StepsizeRule::ExactLineSearch;
    ref_cfg.max_iters = 20000;
    const auto ref = reference_solution(obj, p, ref_cfg);

    SolverConfig cfg;
    cfg.stepsize = StepsizeRule::Adaptive;
    cfg.max_iters = 5000;
    cfg.gap_tolerance = 1e-8;
    const auto& ascg = g_log.add("l1ls ascg", ascg_run(obj, p, cfg));
    const auto& cg = g_log.add("l1ls cg", cg_run(obj, p, cfg));

    const bool reached = ascg.gap <= 1e-8;
    const double slope = slope_of_log_gap(ascg.steps, ref.f_star);
    const bool negative = slope < 0;
    const bool ordered = cg.gap > ascg.gap;
    std::ostringstream d;
    d << "ASCG adaptive gap " << fmt(ascg.gap) << " after " << ascg.steps.size() << " rows (need <= 1e-8: "
      << (reached ? "yes" : "no") << "), slope " << fmt(slope) << (negative ? " < 0" : " >= 0") << ", CG gap "
      << fmt(cg.gap) << (ordered ? " > " : " <= ") << "ASCG gap, reference gap " << fmt(ref.gap_at_termination);
    return {reached && negative && ordered, d.str()};
}

Outcome error_bound() {
    int passes = 0, samples = 0;
    std::ostringstream d;
    std::uint64_t seed = 10;
    for (const auto& inst : certified_instances()) {
        const auto& E = inst.problem.objective.E();
        if (Eigen::FullPivLU<Matrix>(E).rank() < E.cols()) continue;
        SolverConfig cfg;
        const auto ref = reference_solution(inst.problem.objective, inst.problem.polytope, cfg);
        const auto r = check_error_bound(inst.problem.objective, inst.problem.polytope, ref.x_star, 1000, seed++);
        passes += r.passes;
        samples += r.samples;
        d << inst.name << " kappa " << fmt(r.kappa) << " empirical " << fmt(r.empirical_kappa) << "; ";
    }
    return {samples >= 1000 && passes == samples,
            std::to_string(passes) + "/" + std::to_string(samples) + " samples; " + d.str()};
}

Outcome irr_equivalence() {
    const auto prob = random_quadratic(Polytope::box(10), 10, 77, 0.5);
    SolverConfig cfg;
    cfg.max_iters = 500;
    cfg.gap_tolerance = 1e-14;
    cfg.record_iterates = true;
    cfg.seed = 5;
    cfg.reduction = ReductionKind::Caratheodory;
    cfg.debug_checks = true;
    cfg.irr.debug_checks = true;
    std::string err;
    SolverTrace irr, once;
    try {
        irr = g_log.add("box(10) irr", ascg_run(prob.objective, prob.polytope, cfg));
        cfg.reduction = ReductionKind::CaratheodoryOneShot;
        once = g_log.add("box(10) one-shot", ascg_run(prob.objective, prob.polytope, cfg));
    } catch (const Error& e) {
        return {false, e.what()};
    }
    double worst = 0;
    const bool same_len = irr.iterates.size() == once.iterates.size();
    for (std::size_t k = 0; k < std::min(irr.iterates.size(), once.iterates.size()); ++k) {
        worst = std::max(worst, (irr.iterates[k] - once.iterates[k]).cwiseAbs().maxCoeff());
    }
    const bool sized = irr.max_repr_size <= 11 && once.max_repr_size <= 11;
    std::ostringstream d;
    d << irr.iterates.size() << " iterates, max |x_irr - x_once| = " << fmt(worst) << ", max |U| " << irr.max_repr_size
      << "/" << once.max_repr_size << ", W = T V verified every step";
    return {same_len && irr.iterates.size() >= 500 && worst <= 1e-8 && sized, d.str()};
}

Outcome vertex_facet() {
    Matrix A(7, 3);
    A << 1, 0, 0, 0, 1, 0, 0, 0, 1, -1, 0, 0, 0, -1, 0, 0, 0, -1, 1, 1, 1;
    Vector a(7);
    a << 1, 1, 1, 1, 1, 1, 1.5;
    const std::pair<std::string, Polytope> sets[] = {{"simplex(4)", Polytope::simplex(4)},
                                                     {"l1(4)", Polytope::l1_ball(4)},
                                                     {"box(4)", Polytope::box(4)},
                                                     {"l1-epigraph(3)", Polytope::l1_epigraph(3)},
                                                     {"H-cut-cube(3)", Polytope::from_halfspaces(A, a)}};
    bool ok = true;
    std::ostringstream d;
    std::uint64_t seed = 100;
    for (const auto& [name, p] : sets) {
        const auto r = check_vertex_facet_lemma(p, 500, seed++);
        ok = ok && r.admissible == 500 && r.passes == 500;
        d << name << " " << r.passes << "/" << r.admissible << " (min slack " << fmt(r.min_slack) << ") ";
    }
    return {ok, d.str()};
}

Outcome drop_accounting() {
    long rows = 0;
    for (const auto& [name, t] : g_log.traces) {
        for (const auto& s : t.steps) {
            ++rows;
            if (s.s_count > s.l_count || s.l_count + s.s_count > s.iteration - 1 || 2 * s.s_count > s.iteration - 1) {
                return {false, name + ": counters violated at k = " + std::to_string(s.iteration)};
            }
        }
    }
    return {rows > 0, std::to_string(g_log.traces.size()) + " traces, " + std::to_string(rows) + " rows"};
}

Outcome monotonicity() {
    bool exact = false, adaptive = false;
    double worst = -INFINITY;
    for (const auto& [name, t] : g_log.traces) {
        (t.config.stepsize == StepsizeRule::Adaptive ? adaptive : exact) = true;
        for (std::size_t k = 1; k < t.steps.size(); ++k) {
            worst = std::max(worst, t.steps[k].f_value - t.steps[k - 1].f_value);
        }
    }
    return {exact && adaptive && worst <= 1e-9, "max increase " + fmt(worst) + " over " +
                                                    std::to_string(g_log.traces.size()) + " traces (both rules)"};
}

Outcome counterexample() {
    const auto ex = mapped_oracle_counterexample();
    const bool ext = ex.image_extreme == std::vector<std::string>{"A", "B", "F", "H"};
    Vector c_img(3);
    c_img << -1, 1, -2;
    const bool bad = ex.bad_choice == "C" && ex.bad_image == c_img;
    const auto extreme = extreme_points(ex.images);
    bool not_extreme = true;
    for (const auto& v : extreme) not_extreme = not_extreme && (v - c_img).norm() > 1e-12;
    std::ostringstream d;
    d << "ext(EX) = {";
    for (const auto& l : ex.image_extreme) d << l << "'";
    d << "}, oracle ties {";
    for (const auto& l : ex.oracle_ties) d << l;
    d << "}, " << ex.bad_choice << "' = (" << ex.bad_image.transpose() << ")";
    return {ext && bad && not_extreme, d.str()};
}

} // namespace

int main() {
    // Criteria 5 and 9 audit the traces collected by the others, so they run last.
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, omega_closed_forms}, {2, oracle_correctness}, {3, rate_bound},   {4, linear_rate},
        {6, error_bound},        {7, irr_equivalence},    {8, vertex_facet}, {10, counterexample},
        {5, drop_accounting},    {9, monotonicity}};
    const char* names[] = {"",
                           "omega closed forms",
                           "oracle correctness",
                           "rate bound",
                           "linear rate on l1-LS",
                           "drop-step accounting",
                           "error bound",
                           "IRR equivalence",
                           "vertex-facet lemma",
                           "monotonicity",
                           "mapped-oracle counterexample"};
    std::vector<std::string> lines(11);
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        char head[96];
        std::snprintf(head, sizeof head, "%s [%2d] %-30s %7.2fs  ", o.pass ? "PASS" : "FAIL", id, names[id], secs);
        lines[id] = head + o.detail;
    }
    for (int id = 1; id <= 10; ++id) std::printf("%s\n", lines[id].c_str());
    std::printf("%d/10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
