#include "ascg/compare.hpp"

#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>

namespace ascg {

int iterations_to_gap(const std::vector<StepRecord>& steps, double threshold) {
    for (const auto& r : steps) {
        if (r.fw_gap <= threshold) return r.iteration;
    }
    return -1;
}

namespace {

CompareRow run_entry(const Problem& problem, const CompareEntry& e) {
    CompareRow row;
    row.label = e.label;
    try {
        const SolverTrace t = run(e.algorithm, problem.objective, problem.polytope, e.config);
        row.iterations = static_cast<int>(t.steps.size());
        row.iters_to_1e3 = iterations_to_gap(t.steps, 1e-3);
        row.iters_to_1e6 = iterations_to_gap(t.steps, 1e-6);
        row.final_f = t.f;
        row.final_gap = t.gap;
        row.drop_steps = t.drop_count;
        row.max_repr_size = t.max_repr_size;
    } catch (const std::exception& ex) {
        row.ok = false;
        row.error = ex.what();
    }
    return row;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<CompareRow> compare(const Problem& problem, const std::vector<CompareEntry>& entries, bool parallel) {
    if (entries.empty()) fail(ErrorCode::InvalidArgument, "compare needs at least one configuration");
    std::vector<CompareRow> rows;
    if (!parallel) {
        for (const auto& e : entries) rows.push_back(run_entry(problem, e));
        return rows;
    }
    std::vector<std::future<CompareRow>> jobs;
    for (const auto& e : entries) {
        jobs.push_back(std::async(std::launch::async, [&problem, &e] { return run_entry(problem, e); }));
    }
    for (auto& j : jobs) rows.push_back(j.get());
    return rows;
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << "label,ok,iterations,iters_to_1e-3,iters_to_1e-6,final_f,final_gap,drop_steps,max_repr_size,error\n";
    for (const auto& r : rows) {
        std::string err = r.error;
        for (char& c : err) {
            if (c == ',' || c == '\n') c = ';';
        }
        out << r.label << ',' << (r.ok ? 1 : 0) << ',' << r.iterations << ',' << r.iters_to_1e3 << ','
            << r.iters_to_1e6 << ',' << fmt(r.final_f) << ',' << fmt(r.final_gap) << ',' << r.drop_steps << ','
            << r.max_repr_size << ',' << err << '\n';
    }
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %8s %9s %9s %22s %12s %6s %6s\n", "config", "iters", "gap<=1e-3",
                  "gap<=1e-6", "final f", "final gap", "drops", "max|U|");
    out << line;
    for (const auto& r : rows) {
        if (!r.ok) {
            out << r.label << "  FAILED: " << r.error << '\n';
            continue;
        }
        std::snprintf(line, sizeof line, "%-28s %8d %9d %9d %22.15g %12.4e %6d %6d\n", r.label.c_str(), r.iterations,
                      r.iters_to_1e3, r.iters_to_1e6, r.final_f, r.final_gap, r.drop_steps, r.max_repr_size);
        out << line;
    }
    return out.str();
}

} // namespace ascg
