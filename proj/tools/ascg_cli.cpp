// Command-line harness: problem generation, solver runs, constant tables and comparisons.

#include "ascg/certificates.hpp"
#include "ascg/compare.hpp"
#include "ascg/io.hpp"
#include "ascg/oracle.hpp"
#include "ascg/problems.hpp"
#include "ascg/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ascg;

Problem read_problem(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') {
        try {
            return problem_from_json(json::parse(spec));
        } catch (const json::exception& e) {
            fail(ErrorCode::ParseError, std::string("inline problem: ") + e.what());
        }
    }
    return load_problem(spec);
}

std::string vec_str(const Vector& v) {
    std::ostringstream out;
    out << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
    out << ')';
    return out.str();
}

struct SolveOptions {
    std::string problem;
    std::string algorithm = "ascg";
    std::string stepsize = "adaptive";
    std::string reduction = "trivial";
    int max_iters = 1000;
    double gap_tol = 1e-8;
    std::uint64_t seed = 0;
    long long start_vertex = -1;
    std::string out;
    std::string summary;
    bool debug = false;
};

SolverConfig make_config(const SolveOptions& o) {
    SolverConfig cfg;
    cfg.stepsize = parse_stepsize_rule(o.stepsize);
    cfg.reduction = parse_reduction_kind(o.reduction);
    cfg.max_iters = o.max_iters;
    cfg.gap_tolerance = o.gap_tol;
    cfg.seed = o.seed;
    cfg.debug_checks = o.debug;
    if (o.start_vertex >= 0) cfg.start_vertex_id = o.start_vertex;
    return cfg;
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "ascg") return Algorithm::ASCG;
    if (s == "cg") return Algorithm::CG;
    fail(ErrorCode::ParseError, "unknown algorithm '" + s + "'");
}

int cmd_solve(const SolveOptions& o) {
    const Problem pr = read_problem(o.problem);
    const SolverConfig cfg = make_config(o);
    const SolverTrace t = run(parse_algorithm(o.algorithm), pr.objective, pr.polytope, cfg);
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
        write_trace_csv(f, t.steps);
    }
    const json summary = trace_summary(t);
    if (!o.summary.empty()) {
        std::ofstream f(o.summary);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + o.summary + "'");
        f << dump(summary);
    }
    std::cout << dump(summary);
    const TraceCheck chk = validate_trace(t.steps, reduction_constant(pr.polytope, cfg.reduction));
    if (!chk.ok) {
        std::cerr << "trace check failed: " << chk.message << '\n';
        return 2;
    }
    return 0;
}

int cmd_compare(const SolveOptions& o, const std::vector<std::string>& specs, const std::string& csv, bool serial) {
    const Problem pr = read_problem(o.problem);
    std::vector<CompareEntry> entries;
    std::vector<std::string> use = specs;
    if (use.empty()) {
        use = {"cg:exact:trivial", "cg:adaptive:trivial", "ascg:exact:trivial", "ascg:adaptive:trivial",
               "ascg:adaptive:caratheodory"};
    }
    for (const auto& s : use) {
        // algorithm:stepsize:reduction
        std::vector<std::string> parts;
        std::stringstream ss(s);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) fail(ErrorCode::ParseError, "config '" + s + "' is not algorithm:stepsize:reduction");
        SolveOptions local = o;
        local.algorithm = parts[0];
        local.stepsize = parts[1];
        local.reduction = parts[2];
        entries.push_back({s, parse_algorithm(parts[0]), make_config(local)});
    }
    const auto rows = compare(pr, entries, !serial);
    std::cout << format_compare_table(rows);
    if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + csv + "'");
        write_compare_csv(f, rows);
    }
    for (const auto& r : rows) {
        if (!r.ok) return 2;
    }
    return 0;
}

int cmd_constants(const SolveOptions& o, bool classical) {
    const Problem pr = read_problem(o.problem);
    const SolverConfig cfg = make_config(o);
    CertificateOptions co;
    co.variant = classical ? HoffmanVariant::Classical : HoffmanVariant::InverseEigenvalue;
    const RateCertificate rc = rate_certificate(pr.objective, pr.polytope, cfg, co);
    const auto iters = rc.iterations_to(1e-6);
    std::printf("%-10s %.10g\n", "theta", rc.theta);
    std::printf("%-10s %.10g\n", "kappa", rc.kappa);
    std::printf("%-10s %.10g\n", "C", rc.C);
    std::printf("%-10s %.10g\n", "Omega_X", rc.omega);
    std::printf("%-10s %lld\n", "N", static_cast<long long>(rc.N));
    std::printf("%-10s %.10g\n", "rho", rc.rho);
    std::printf("%-10s %.10g\n", "alpha", rc.alpha_dagger);
    if (iters) {
        std::printf("%-10s %.10g\n", "k(1e-6)", *iters);
    } else {
        std::printf("%-10s %s\n", "k(1e-6)", "inf");
    }
    return 0;
}

int cmd_demo_oracle() {
    const MappedOracleCounterexample ex = mapped_oracle_counterexample();
    std::cout << "X = [-1,1]^3, E = [[1,1,1],[1,1,-1],[0,0,2]]\n";
    for (std::size_t i = 0; i < ex.labels.size(); ++i) {
        std::cout << "  " << ex.labels[i] << " = " << vec_str(ex.box_vertices[i]) << "  ->  " << ex.labels[i]
                  << "' = " << vec_str(ex.images[i]) << '\n';
    }
    std::cout << "ext(EX) = {";
    for (std::size_t i = 0; i < ex.image_extreme.size(); ++i) {
        std::cout << (i ? ", " : "") << ex.image_extreme[i] << '\'';
    }
    std::cout << "}\n";
    std::cout << "c = " << vec_str(ex.c) << ", E^T c = " << vec_str(ex.Etc) << '\n';
    std::cout << "minimizers of <E^T c, v> over X: {";
    for (std::size_t i = 0; i < ex.oracle_ties.size(); ++i) std::cout << (i ? ", " : "") << ex.oracle_ties[i];
    std::cout << "}\n";
    std::cout << "vertex_oracle picks " << ex.default_choice << "; a vertex oracle for X may equally return "
              << ex.bad_choice << '\n';
    std::cout << "naive mapped oracle E*" << ex.bad_choice << " = " << ex.bad_choice << "' = " << vec_str(ex.bad_image)
              << ", not a vertex of EX\n";
    return 0;
}

int cmd_generate(const std::string& kind, int k, int n, int m, double lambda, std::uint64_t seed,
                 const std::string& polytope, const std::string& out) {
    Problem pr = [&] {
        if (kind == "l1ls") return generate_l1ls(k, n, lambda, seed);
        if (kind == "quadratic") {
            Polytope p = polytope == "simplex" ? Polytope::simplex(n)
                         : polytope == "l1_ball" ? Polytope::l1_ball(n)
                         : polytope == "box"     ? Polytope::box(n)
                                                 : (fail(ErrorCode::ParseError, "unknown polytope '" + polytope + "'"),
                                                    Polytope::box(1));
            return random_quadratic(p, m > 0 ? m : n, seed);
        }
        fail(ErrorCode::ParseError, "unknown generator '" + kind + "'");
    }();
    const std::string text = dump(to_json(pr));
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + out + "'");
        f << text;
    }
    return 0;
}

void add_solver_flags(CLI::App* cmd, SolveOptions& o) {
    cmd->add_option("--problem", o.problem, "problem JSON file, or inline JSON")->required();
    cmd->add_option("--stepsize", o.stepsize, "adaptive | exact")->check(CLI::IsMember({"adaptive", "exact"}));
    cmd->add_option("--reduction", o.reduction, "trivial | caratheodory | caratheodory-oneshot")
        ->check(CLI::IsMember({"trivial", "caratheodory", "caratheodory-oneshot"}));
    cmd->add_option("--max-iters", o.max_iters, "iteration budget")->check(CLI::PositiveNumber);
    cmd->add_option("--gap-tol", o.gap_tol, "stop when the FW gap is at or below this")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for the start vertex direction");
    cmd->add_option("--start-vertex", o.start_vertex, "explicit start vertex id");
    cmd->add_flag("--debug", o.debug, "run representation and factor checks every step");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Away-step conditional gradient over polytopes"};
    app.require_subcommand(1);

    SolveOptions o;
    auto* solve = app.add_subcommand("solve", "run CG or ASCG and write the trace");
    add_solver_flags(solve, o);
    solve->add_option("--algorithm", o.algorithm, "ascg | cg")->check(CLI::IsMember({"ascg", "cg"}));
    solve->add_option("--out", o.out, "trace CSV path");
    solve->add_option("--summary", o.summary, "summary JSON path");

    std::vector<std::string> configs;
    std::string csv;
    bool serial = false;
    auto* cmp = app.add_subcommand("compare", "run several configurations on one problem");
    add_solver_flags(cmp, o);
    cmp->add_option("--config", configs, "algorithm:stepsize:reduction (repeatable)");
    cmp->add_option("--csv", csv, "summary CSV path");
    cmp->add_flag("--serial", serial, "run configurations one after another");

    bool classical = false;
    auto* consts = app.add_subcommand("constants", "print the convergence constants");
    add_solver_flags(consts, o);
    consts->add_flag("--classical-theta", classical, "use 1/sqrt(lambda_min) for the Hoffman constant");

    auto* demo = app.add_subcommand("demo-oracle", "show that the naive mapped oracle can miss ext(EX)");

    std::string gen_kind = "l1ls", gen_polytope = "box", gen_out;
    int gen_k = 10, gen_n = 20, gen_m = 0;
    double gen_lambda = 0.1;
    std::uint64_t gen_seed = 42;
    auto* gen = app.add_subcommand("generate", "write a problem JSON");
    gen->add_option("kind", gen_kind, "l1ls | quadratic")->check(CLI::IsMember({"l1ls", "quadratic"}));
    gen->add_option("--k", gen_k, "rows of B")->check(CLI::PositiveNumber);
    gen->add_option("--n", gen_n, "dimension")->check(CLI::PositiveNumber);
    gen->add_option("--m", gen_m, "image dimension for quadratic problems");
    gen->add_option("--lambda", gen_lambda, "l1 weight")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--polytope", gen_polytope, "simplex | l1_ball | box (quadratic only)");
    gen->add_option("--out", gen_out, "output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*cmp) return cmd_compare(o, configs, csv, serial);
        if (*consts) return cmd_constants(o, classical);
        if (*demo) return cmd_demo_oracle();
        if (*gen) return cmd_generate(gen_kind, gen_k, gen_n, gen_m, gen_lambda, gen_seed, gen_polytope, gen_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << app.help();
    return 1;
}
