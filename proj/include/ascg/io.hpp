#pragma once

#include "ascg/objective.hpp"
#include "ascg/polytope.hpp"
#include "ascg/solver.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace ascg {

using json = nlohmann::json;

/// A problem instance: minimize the objective over the polytope.
struct Problem {
    Polytope polytope;
    CompositeObjective objective;
    json meta = json::object();
};

json to_json(const Polytope& p);
Polytope polytope_from_json(const json& j);

/// Quadratic objectives only; general g has no serialized form.
json to_json(const CompositeObjective& obj);
CompositeObjective objective_from_json(const json& j);

json to_json(const Problem& problem);
Problem problem_from_json(const json& j);

Problem load_problem(const std::string& path);
void save_problem(const Problem& problem, const std::string& path);
/// Canonical text form (two-space indent, trailing newline).
std::string dump(const json& j);

inline constexpr const char* kTraceCsvHeader =
    "iteration,f_value,fw_gap,step_type,gamma,gamma_bar,repr_size,s_count,l_count";

void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& steps);
std::vector<StepRecord> read_trace_csv(std::istream& in);

json trace_summary(const SolverTrace& trace);

} // namespace ascg
