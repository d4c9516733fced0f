#include "ascg/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ascg {

namespace {

json matrix_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Matrix matrix_from(const json& j, const char* what) {
    if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& r = j[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) {
            fail(ErrorCode::ParseError, std::string(what) + " has ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = r[static_cast<std::size_t>(c)].get<double>();
    }
    return M;
}

Vector vector_from(const json& j, const char* what) {
    if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

json to_json(const Polytope& p) {
    json j;
    j["kind"] = std::string(to_string(p.kind()));
    j["n"] = p.base_dim();
    if (p.kind() == PolytopeKind::L1Epigraph) j["dim"] = p.dim();
    const bool explicit_rows = p.kind() == PolytopeKind::GenericH ||
                               (p.kind() == PolytopeKind::L1Epigraph && p.base_dim() <= 12);
    if (explicit_rows) {
        j["A"] = matrix_json(p.constraint_matrix());
        j["a"] = vector_json(p.constraint_rhs());
    }
    return j;
}

Polytope polytope_from_json(const json& j) {
    try {
        const std::string kind = field(j, "kind").get<std::string>();
        if (kind == "generic") {
            return Polytope::from_halfspaces(matrix_from(field(j, "A"), "A"), vector_from(field(j, "a"), "a"));
        }
        const int n = field(j, "n").get<int>();
        if (kind == "simplex") return Polytope::simplex(n);
        if (kind == "l1_ball") return Polytope::l1_ball(n);
        if (kind == "box") return Polytope::box(n);
        if (kind == "l1_epigraph") return Polytope::l1_epigraph(n);
        fail(ErrorCode::ParseError, "unknown polytope kind '" + kind + "'");
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("polytope: ") + e.what());
    }
}

json to_json(const CompositeObjective& obj) {
    const auto& q = obj.quadratic_form();
    if (!q) fail(ErrorCode::OutOfScope, "only quadratic objectives can be serialized");
    json j;
    j["E"] = matrix_json(obj.E());
    j["b"] = vector_json(obj.b());
    j["g"] = {{"type", "quadratic"}, {"Q", matrix_json(q->Q)}, {"c", vector_json(q->c)}, {"r", q->r}};
    return j;
}

CompositeObjective objective_from_json(const json& j) {
    try {
        Matrix E = matrix_from(field(j, "E"), "E");
        Vector b = j.contains("b") ? vector_from(j.at("b"), "b") : Vector::Zero(E.cols());
        const json& g = field(j, "g");
        if (field(g, "type").get<std::string>() != "quadratic") {
            fail(ErrorCode::ParseError, "only g.type = \"quadratic\" is supported");
        }
        QuadraticForm qf;
        qf.Q = matrix_from(field(g, "Q"), "Q");
        qf.c = g.contains("c") ? vector_from(g.at("c"), "c") : Vector::Zero(E.rows());
        qf.r = g.value("r", 0.0);
        return CompositeObjective::quadratic(std::move(E), std::move(b), std::move(qf));
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("objective: ") + e.what());
    }
}

json to_json(const Problem& problem) {
    json j;
    j["polytope"] = to_json(problem.polytope);
    j["objective"] = to_json(problem.objective);
    j["meta"] = problem.meta;
    return j;
}

Problem problem_from_json(const json& j) {
    Problem pr{polytope_from_json(field(j, "polytope")), objective_from_json(field(j, "objective")),
               j.value("meta", json::object())};
    require_dim(pr.objective.dim(), pr.polytope.dim(), "problem objective");
    return pr;
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
    return problem_from_json(j);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void save_problem(const Problem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << dump(to_json(problem));
}

void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& steps) {
    out << kTraceCsvHeader << '\n';
    for (const auto& r : steps) {
        out << r.iteration << ',' << format_double(r.f_value) << ',' << format_double(r.fw_gap) << ','
            << to_string(r.step_type) << ',' << format_double(r.gamma) << ',' << format_double(r.gamma_bar) << ','
            << r.repr_size << ',' << r.s_count << ',' << r.l_count << '\n';
    }
}

std::vector<StepRecord> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader) fail(ErrorCode::ParseError, "bad trace CSV header");
    std::vector<StepRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 9) fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 9 fields");
        try {
            StepRecord r;
            r.iteration = std::stoi(cells[0]);
            r.f_value = std::stod(cells[1]);
            r.fw_gap = std::stod(cells[2]);
            r.step_type = parse_step_type(cells[3]);
            r.gamma = std::stod(cells[4]);
            r.gamma_bar = std::stod(cells[5]);
            r.repr_size = std::stoi(cells[6]);
            r.s_count = std::stoi(cells[7]);
            r.l_count = std::stoi(cells[8]);
            out.push_back(r);
        } catch (const std::logic_error&) {
            fail(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

json trace_summary(const SolverTrace& t) {
    json j;
    j["algorithm"] = std::string(to_string(t.algorithm));
    j["stepsize"] = std::string(to_string(t.config.stepsize));
    j["reduction"] = std::string(to_string(t.config.reduction));
    j["iterations"] = t.steps.size();
    j["converged"] = t.converged;
    j["f"] = t.f;
    j["fw_gap"] = t.gap;
    j["drop_steps"] = t.drop_count;
    j["max_repr_size"] = t.max_repr_size;
    j["final_repr_size"] = t.final_repr.size();
    j["x"] = vector_json(t.x);
    return j;
}

} // namespace ascg
