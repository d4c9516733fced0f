#pragma once

#include "ascg/caratheodory.hpp"
#include "ascg/objective.hpp"
#include "ascg/oracle.hpp"
#include "ascg/polytope.hpp"
#include "ascg/representation.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ascg {

/// None marks the terminal trace row, written when the gap test stops the run.
enum class StepType { Forward, Away, Drop, None };
enum class StepsizeRule { ExactLineSearch, Adaptive };
/// CaratheodoryOneShot applies reduce_full after every step instead of the incremental scheme.
enum class ReductionKind { Trivial, Caratheodory, CaratheodoryOneShot };
enum class Algorithm { CG, ASCG };

std::string_view to_string(StepType t);
std::string_view to_string(StepsizeRule r);
std::string_view to_string(ReductionKind r);
std::string_view to_string(Algorithm a);
StepType parse_step_type(std::string_view s);
StepsizeRule parse_stepsize_rule(std::string_view s);
ReductionKind parse_reduction_kind(std::string_view s);

struct SolverConfig {
    StepsizeRule stepsize = StepsizeRule::Adaptive;
    ReductionKind reduction = ReductionKind::Trivial;
    int max_iters = 1000;
    double gap_tolerance = 1e-8;
    double mu_zero_tolerance = 1e-12;
    std::optional<VertexId> start_vertex_id;
    std::uint64_t seed = 0;
    /// Overrides lipschitz_rho(obj) for the adaptive rule.
    std::optional<double> rho;
    bool record_iterates = false;
    /// Representation checks every step, W = T V checks, active-set comparison every 10th step.
    bool debug_checks = false;
    double monotonicity_tolerance = 1e-9;
    IrrOptions irr;

    void validate() const;
};

/// Row k of a trace: the state at x^k and the step taken from it.
struct StepRecord {
    int iteration = 0;
    double f_value = 0;
    double fw_gap = 0;
    StepType step_type = StepType::None;
    double gamma = 0;
    double gamma_bar = 0;
    int repr_size = 0;
    /// Drop and forward steps taken before iteration k.
    int s_count = 0;
    int l_count = 0;
    VertexId forward_id = -1;
    VertexId away_id = -1;
};

struct SolverTrace {
    Algorithm algorithm = Algorithm::ASCG;
    SolverConfig config;
    std::vector<StepRecord> steps;
    /// x^1, x^2, ... when config.record_iterates is set.
    std::vector<Vector> iterates;
    Representation final_repr;
    Vector x;
    double f = 0;
    double gap = 0;
    bool converged = false;
    int max_repr_size = 0;
    int drop_count = 0;
    /// Debug-mode count of iterations where I(x) != I(U) at tolerance 1e-7.
    int active_set_mismatches = 0;
};

/// Step length along d from x; `g` is grad f(x).
double stepsize(const CompositeObjective& obj, const Vector& x, const Vector& g, const Vector& d, double gamma_bar,
                StepsizeRule rule, double rho);
/// Convenience form that evaluates the gradient and rho (from cfg or the objective).
double stepsize(const CompositeObjective& obj, const Vector& x, const Vector& d, double gamma_bar,
                const SolverConfig& cfg);

/// Away-step conditional gradient with vertex representation updating.
class AscgSolver {
public:
    AscgSolver(const CompositeObjective& obj, const Polytope& p, SolverConfig cfg, Algorithm alg = Algorithm::ASCG);
    /// Start from an explicit representation (validated).
    AscgSolver(const CompositeObjective& obj, const Polytope& p, SolverConfig cfg, Representation start,
               Algorithm alg = Algorithm::ASCG);

    /// Performs one iteration; returns its trace row. Row type None means the gap test passed
    /// and nothing moved.
    StepRecord step();
    /// Runs until the gap test passes or max_iters rows have been produced.
    SolverTrace run();

    const Representation& representation() const noexcept { return repr_; }
    const Vector& x() const noexcept { return repr_.point(); }
    double f() const noexcept { return f_; }
    int iteration() const noexcept { return k_; }
    const IncrementalReducer* reducer() const noexcept { return reducer_.get(); }
    std::size_t max_size() const;

private:
    void init(Representation start);
    void apply_reduction(const RepresentationEvent& event);
    void debug_check();

    const CompositeObjective& obj_;
    const Polytope& p_;
    SolverConfig cfg_;
    Algorithm alg_;
    double rho_ = 0;
    Representation repr_;
    std::unique_ptr<IncrementalReducer> reducer_;
    double f_ = 0;
    int k_ = 1;
    int s_ = 0;
    int l_ = 0;
    int active_mismatch_ = 0;
};

/// One ASCG iteration as a pure function of the representation.
std::pair<Representation, StepRecord> ascg_step(const CompositeObjective& obj, const Polytope& p,
                                                const Representation& repr, const SolverConfig& cfg);

SolverTrace ascg_run(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg);
SolverTrace cg_run(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg);
SolverTrace run(Algorithm alg, const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg);

/// Representation bound N of the reduction: |V| for Trivial, n+1 otherwise.
std::int64_t reduction_constant(const Polytope& p, ReductionKind r);

struct TraceCheck {
    bool ok = true;
    int first_bad_iteration = -1;
    std::string message;
};

/// Trace-level invariants: gap >= -1e-10, gamma in [0, gamma_bar], f nonincreasing within
/// tol, s <= l, l + s <= k - 1, and repr_size <= max_repr (if positive).
TraceCheck validate_trace(const std::vector<StepRecord>& steps, std::int64_t max_repr = 0,
                          double monotonicity_tol = 1e-9);

} // namespace ascg
