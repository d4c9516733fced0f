#include "ascg/caratheodory.hpp"
#include "ascg/certificates.hpp"
#include "ascg/io.hpp"
#include "ascg/oracle.hpp"
#include "ascg/problems.hpp"
#include "ascg/solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ascg;

namespace {

py::dict step_dict(const StepRecord& r) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["f_value"] = r.f_value;
    d["fw_gap"] = r.fw_gap;
    d["step_type"] = std::string(to_string(r.step_type));
    d["gamma"] = r.gamma;
    d["gamma_bar"] = r.gamma_bar;
    d["repr_size"] = r.repr_size;
    d["s_count"] = r.s_count;
    d["l_count"] = r.l_count;
    d["forward_id"] = r.forward_id;
    d["away_id"] = r.away_id;
    return d;
}

SolverConfig make_config(const std::string& stepsize, const std::string& reduction, int max_iters, double gap_tol,
                         std::uint64_t seed, std::optional<VertexId> start, bool record_iterates, bool debug) {
    SolverConfig cfg;
    cfg.stepsize = parse_stepsize_rule(stepsize);
    cfg.reduction = parse_reduction_kind(reduction);
    cfg.max_iters = max_iters;
    cfg.gap_tolerance = gap_tol;
    cfg.seed = seed;
    cfg.start_vertex_id = start;
    cfg.record_iterates = record_iterates;
    cfg.debug_checks = debug;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_ascg, m) {
    m.doc() = "Away-step conditional gradient over polytopes.";

    static py::exception<Error> exc(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, e.what());
        }
    });

    py::class_<Polytope>(m, "Polytope")
        .def_static("simplex", &Polytope::simplex, py::arg("n"))
        .def_static("l1_ball", &Polytope::l1_ball, py::arg("n"))
        .def_static("box", &Polytope::box, py::arg("n"))
        .def_static("l1_epigraph", &Polytope::l1_epigraph, py::arg("n"))
        .def_static("from_halfspaces", [](Matrix A, Vector a) { return Polytope::from_halfspaces(std::move(A), std::move(a)); },
                    py::arg("A"), py::arg("a"))
        .def_property_readonly("kind", [](const Polytope& p) { return std::string(to_string(p.kind())); })
        .def_property_readonly("dim", &Polytope::dim)
        .def_property_readonly("num_vertices", &Polytope::num_vertices)
        .def("vertices", &Polytope::vertices, py::return_value_policy::copy)
        .def("vertex", &Polytope::vertex, py::arg("id"))
        .def("vertex_id", &Polytope::vertex_id, py::arg("v"))
        .def("constraint_matrix", &Polytope::constraint_matrix)
        .def("constraint_rhs", &Polytope::constraint_rhs)
        .def("active_set", [](const Polytope& p, const Vector& x, double tol) { return active_set(p, x, tol).indices; },
             py::arg("x"), py::arg("tol") = kActivityTol)
        .def("to_json", [](const Polytope& p) { return to_json(p).dump(); });

    py::class_<GeometricConstants>(m, "GeometricConstants")
        .def_readonly("zeta", &GeometricConstants::zeta)
        .def_readonly("phi", &GeometricConstants::phi)
        .def_readonly("omega", &GeometricConstants::omega)
        .def_readonly("diameter", &GeometricConstants::diameter);
    m.def("geometric_constants", [](const Polytope& p, bool closed_form) {
        GeometricOptions o;
        o.closed_form = closed_form;
        return geometric_constants(p, o);
    }, py::arg("p"), py::arg("closed_form") = true);
    m.def("diameter_of_image", &diameter_of_image, py::arg("p"), py::arg("E"));

    m.def("vertex_oracle", [](const Polytope& p, const Vector& c) {
        const OracleAnswer a = vertex_oracle(p, c);
        return py::make_tuple(a.vertex, a.vertex_id, a.objective_value);
    }, py::arg("p"), py::arg("c"), "Returns (vertex, vertex_id, value).");
    m.def("mapped_oracle_naive", [](const Polytope& p, const Matrix& E, const Vector& c) {
        return mapped_oracle_naive(p, E, c);
    }, py::arg("p"), py::arg("E"), py::arg("c"));

    py::class_<CompositeObjective>(m, "Objective")
        .def_static("quadratic", [](Matrix E, Vector b, Matrix Q, std::optional<Vector> c, double r) {
            return CompositeObjective::quadratic(std::move(E), std::move(b),
                                                 QuadraticForm{std::move(Q), c ? *c : Vector(), r});
        }, py::arg("E"), py::arg("b"), py::arg("Q"), py::arg("c") = py::none(), py::arg("r") = 0.0)
        .def_static("general", [](Matrix E, Vector b, std::function<double(const Vector&)> value,
                                  std::function<Vector(const Vector&)> gradient, double sigma,
                                  std::optional<double> lipschitz) {
            return CompositeObjective::general(std::move(E), std::move(b),
                                               InnerFunction{std::move(value), std::move(gradient), sigma, lipschitz});
        }, py::arg("E"), py::arg("b"), py::arg("value"), py::arg("gradient"), py::arg("sigma"),
            py::arg("lipschitz") = py::none())
        .def_property_readonly("dim", &CompositeObjective::dim)
        .def("value", &CompositeObjective::value, py::arg("x"))
        .def("gradient", &CompositeObjective::gradient, py::arg("x"))
        .def("lipschitz_rho", [](const CompositeObjective& o) { return lipschitz_rho(o); });

    py::class_<SolverTrace>(m, "Trace")
        .def_property_readonly("steps", [](const SolverTrace& t) {
            py::list out;
            for (const auto& r : t.steps) out.append(step_dict(r));
            return out;
        })
        .def_readonly("iterates", &SolverTrace::iterates)
        .def_readonly("x", &SolverTrace::x)
        .def_readonly("f", &SolverTrace::f)
        .def_readonly("gap", &SolverTrace::gap)
        .def_readonly("converged", &SolverTrace::converged)
        .def_readonly("max_repr_size", &SolverTrace::max_repr_size)
        .def_readonly("drop_count", &SolverTrace::drop_count)
        .def_property_readonly("representation", [](const SolverTrace& t) {
            py::list out;
            for (const auto& a : t.final_repr.atoms()) out.append(py::make_tuple(a.id, a.vertex, a.weight));
            return out;
        })
        .def("to_csv", [](const SolverTrace& t) {
            std::ostringstream s;
            write_trace_csv(s, t.steps);
            return s.str();
        });

    m.def("solve", [](const CompositeObjective& obj, const Polytope& p, const std::string& algorithm,
                      const std::string& stepsize, const std::string& reduction, int max_iters, double gap_tol,
                      std::uint64_t seed, std::optional<VertexId> start, bool record_iterates, bool debug) {
        const SolverConfig cfg = make_config(stepsize, reduction, max_iters, gap_tol, seed, start, record_iterates, debug);
        if (algorithm != "ascg" && algorithm != "cg") fail(ErrorCode::InvalidArgument, "algorithm must be ascg or cg");
        py::gil_scoped_release release;
        return run(algorithm == "cg" ? Algorithm::CG : Algorithm::ASCG, obj, p, cfg);
    }, py::arg("objective"), py::arg("polytope"), py::arg("algorithm") = "ascg", py::arg("stepsize") = "adaptive",
          py::arg("reduction") = "trivial", py::arg("max_iters") = 1000, py::arg("gap_tol") = 1e-8,
          py::arg("seed") = 0, py::arg("start_vertex") = py::none(), py::arg("record_iterates") = false,
          py::arg("debug") = false);

    m.def("reduce_full", [](const std::vector<Vector>& points, const std::vector<double>& weights, double tol) {
        const ReductionResult r = reduce_full_indices(points, weights, tol);
        return py::make_tuple(r.kept, r.weights);
    }, py::arg("points"), py::arg("weights"), py::arg("tol") = 1e-9, "Returns (kept indices, weights).");

    m.def("hoffman_theta", [](const Matrix& M, bool classical) {
        return hoffman_theta(M, classical ? HoffmanVariant::Classical : HoffmanVariant::InverseEigenvalue);
    }, py::arg("M"), py::arg("classical") = false);

    m.def("rate_certificate", [](const CompositeObjective& obj, const Polytope& p, const std::string& reduction) {
        SolverConfig cfg;
        cfg.reduction = parse_reduction_kind(reduction);
        const RateCertificate rc = rate_certificate(obj, p, cfg);
        py::dict d;
        d["theta"] = rc.theta;
        d["kappa"] = rc.kappa;
        d["C"] = rc.C;
        d["omega"] = rc.omega;
        d["N"] = rc.N;
        d["alpha_dagger"] = rc.alpha_dagger;
        d["rho"] = rc.rho;
        return d;
    }, py::arg("objective"), py::arg("polytope"), py::arg("reduction") = "trivial");

    m.def("generate_l1ls", [](int k, int n, double lambda, std::uint64_t seed) {
        Problem pr = generate_l1ls(k, n, lambda, seed);
        return py::make_tuple(pr.objective, pr.polytope);
    }, py::arg("k"), py::arg("n"), py::arg("lam"), py::arg("seed"), "Returns (objective, polytope).");

    m.def("load_problem", [](const std::string& text) {
        Problem pr = problem_from_json(json::parse(text));
        return py::make_tuple(pr.objective, pr.polytope);
    }, py::arg("text"), "Parses problem JSON text; returns (objective, polytope).");

    m.def("mapped_oracle_counterexample", [] {
        const MappedOracleCounterexample ex = mapped_oracle_counterexample();
        py::dict d;
        d["E"] = ex.E;
        d["c"] = ex.c;
        d["labels"] = ex.labels;
        d["images"] = ex.images;
        d["image_extreme"] = ex.image_extreme;
        d["oracle_ties"] = ex.oracle_ties;
        d["bad_choice"] = ex.bad_choice;
        d["bad_image"] = ex.bad_image;
        return d;
    });
}
