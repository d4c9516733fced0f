#include "ascg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace ascg {

std::string_view to_string(StepType t) {
    switch (t) {
    case StepType::Forward: return "forward";
    case StepType::Away: return "away";
    case StepType::Drop: return "drop";
    case StepType::None: return "none";
    }
    return "?";
}

std::string_view to_string(StepsizeRule r) {
    return r == StepsizeRule::Adaptive ? "adaptive" : "exact";
}

std::string_view to_string(ReductionKind r) {
    switch (r) {
    case ReductionKind::Trivial: return "trivial";
    case ReductionKind::Caratheodory: return "caratheodory";
    case ReductionKind::CaratheodoryOneShot: return "caratheodory-oneshot";
    }
    return "?";
}

std::string_view to_string(Algorithm a) { return a == Algorithm::CG ? "cg" : "ascg"; }

StepType parse_step_type(std::string_view s) {
    for (StepType t : {StepType::Forward, StepType::Away, StepType::Drop, StepType::None}) {
        if (to_string(t) == s) return t;
    }
    fail(ErrorCode::ParseError, "unknown step type '" + std::string(s) + "'");
}

StepsizeRule parse_stepsize_rule(std::string_view s) {
    if (s == "adaptive") return StepsizeRule::Adaptive;
    if (s == "exact" || s == "exact-line-search") return StepsizeRule::ExactLineSearch;
    fail(ErrorCode::ParseError, "unknown stepsize rule '" + std::string(s) + "'");
}

ReductionKind parse_reduction_kind(std::string_view s) {
    for (ReductionKind r : {ReductionKind::Trivial, ReductionKind::Caratheodory, ReductionKind::CaratheodoryOneShot}) {
        if (to_string(r) == s) return r;
    }
    fail(ErrorCode::ParseError, "unknown reduction '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
    if (!(gap_tolerance > 0)) fail(ErrorCode::InvalidArgument, "gap_tolerance must be positive");
    if (max_iters < 1) fail(ErrorCode::InvalidArgument, "max_iters must be >= 1");
    if (!(mu_zero_tolerance >= 0)) fail(ErrorCode::InvalidArgument, "mu_zero_tolerance must be nonnegative");
    if (rho && !(*rho >= 0)) fail(ErrorCode::InvalidArgument, "rho must be nonnegative");
}

// ---------------------------------------------------------------------------------------

namespace {

double golden_section(const CompositeObjective& obj, const Vector& x, const Vector& d, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    auto phi = [&](double t) { return obj.value(x + t * d); };
    double a = 0, b = hi;
    double c = b - r * (b - a), e = a + r * (b - a);
    double fc = phi(c), fe = phi(e);
    while (b - a > 1e-10) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + r * (b - a);
            fe = phi(e);
        }
    }
    const double mid = 0.5 * (a + b);
    return phi(hi) <= phi(mid) ? hi : mid;
}

} // namespace

double stepsize(const CompositeObjective& obj, const Vector& x, const Vector& g, const Vector& d, double gamma_bar,
                StepsizeRule rule, double rho) {
    const double dd = d.squaredNorm();
    if (dd == 0.0) fail(ErrorCode::ZeroDirection, "search direction is zero");
    const double gd = g.dot(d);
    if (gd > 1e-12) fail(ErrorCode::AscentDirection, "direction is not a descent direction");
    if (gd >= 0) return 0.0;
    if (rule == StepsizeRule::Adaptive) {
        if (rho <= 0) return gamma_bar;
        return std::min(-gd / (rho * dd), gamma_bar);
    }
    if (const auto curv = obj.curvature(d)) {
        if (*curv <= 0) return gamma_bar;
        return std::min(-gd / (2.0 * *curv), gamma_bar);
    }
    return golden_section(obj, x, d, gamma_bar);
}

double stepsize(const CompositeObjective& obj, const Vector& x, const Vector& d, double gamma_bar,
                const SolverConfig& cfg) {
    double rho = 0;
    if (cfg.stepsize == StepsizeRule::Adaptive) rho = cfg.rho ? *cfg.rho : lipschitz_rho(obj);
    return stepsize(obj, x, obj.gradient(x), d, gamma_bar, cfg.stepsize, rho);
}

std::int64_t reduction_constant(const Polytope& p, ReductionKind r) {
    if (r == ReductionKind::Trivial) return p.num_vertices();
    return std::int64_t{p.dim()} + 1;
}

// ---------------------------------------------------------------------------------------

AscgSolver::AscgSolver(const CompositeObjective& obj, const Polytope& p, SolverConfig cfg, Algorithm alg)
    : obj_(obj), p_(p), cfg_(std::move(cfg)), alg_(alg) {
    cfg_.validate();
    require_dim(obj_.dim(), p_.dim(), "solver objective");
    VertexId id;
    if (cfg_.start_vertex_id) {
        id = *cfg_.start_vertex_id;
    } else {
        std::mt19937_64 rng(cfg_.seed);
        std::normal_distribution<double> normal;
        Vector c(p_.dim());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
        id = vertex_oracle(p_, c).vertex_id;
    }
    init(Representation::singleton(id, p_.vertex(id)));
}

AscgSolver::AscgSolver(const CompositeObjective& obj, const Polytope& p, SolverConfig cfg, Representation start,
                       Algorithm alg)
    : obj_(obj), p_(p), cfg_(std::move(cfg)), alg_(alg) {
    cfg_.validate();
    require_dim(obj_.dim(), p_.dim(), "solver objective");
    init(std::move(start));
}

void AscgSolver::init(Representation start) {
    start.refresh_point();
    const auto chk = check_representation(start, std::numeric_limits<std::size_t>::max());
    if (!chk.ok) fail(ErrorCode::InvalidArgument, "invalid start representation: " + chk.message);
    repr_ = std::move(start);
    if (cfg_.stepsize == StepsizeRule::Adaptive) rho_ = cfg_.rho ? *cfg_.rho : lipschitz_rho(obj_);
    if (cfg_.reduction == ReductionKind::Caratheodory) {
        IrrOptions o = cfg_.irr;
        o.debug_checks = o.debug_checks || cfg_.debug_checks;
        o.zero_weight_tol = cfg_.mu_zero_tolerance;
        reducer_ = std::make_unique<IncrementalReducer>(p_.dim(), o);
        reducer_->reset(repr_);
    } else if (cfg_.reduction == ReductionKind::CaratheodoryOneShot) {
        reduce_representation(repr_, cfg_.irr.rank_tol, cfg_.mu_zero_tolerance);
    }
    f_ = obj_.value(repr_.point());
}

std::size_t AscgSolver::max_size() const {
    return static_cast<std::size_t>(reduction_constant(p_, cfg_.reduction));
}

void AscgSolver::apply_reduction(const RepresentationEvent& event) {
    if (reducer_) {
        reducer_->update(repr_, event);
    } else if (cfg_.reduction == ReductionKind::CaratheodoryOneShot) {
        reduce_representation(repr_, cfg_.irr.rank_tol, cfg_.mu_zero_tolerance);
    }
    repr_.refresh_point();
}

void AscgSolver::debug_check() {
    const auto chk = check_representation(repr_, max_size());
    if (!chk.ok) fail(ErrorCode::InconsistentState, "iteration " + std::to_string(k_) + ": " + chk.message);
    if (k_ % 10 == 0 && p_.rows_materializable()) {
        std::vector<Vector> pts;
        for (const auto& a : repr_.atoms()) pts.push_back(a.vertex);
        if (!(active_set(p_, repr_.point(), 1e-7) == active_set_of_union(p_, pts, 1e-7))) ++active_mismatch_;
    }
}

StepRecord AscgSolver::step() {
    StepRecord rec;
    rec.iteration = k_;
    rec.f_value = f_;
    rec.repr_size = static_cast<int>(repr_.size());
    rec.s_count = s_;
    rec.l_count = l_;

    const Vector x = repr_.point();
    const Vector g = obj_.gradient(x);
    const OracleAnswer pa = vertex_oracle(p_, g);
    const double gx = g.dot(x);
    rec.forward_id = pa.vertex_id;
    rec.fw_gap = gx - pa.objective_value;
    if (rec.fw_gap <= cfg_.gap_tolerance) {
        rec.step_type = StepType::None;
        return rec;
    }

    bool forward = true;
    std::size_t u = 0;
    if (alg_ == Algorithm::ASCG) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < repr_.size(); ++i) {
            const double v = g.dot(repr_[i].vertex);
            if (v > best || (v == best && repr_[i].id < repr_[u].id)) {
                best = v;
                u = i;
            }
        }
        rec.away_id = repr_[u].id;
        const double away_gap = best - gx;
        forward = rec.fw_gap >= away_gap;
    }

    RepresentationEvent event;
    if (forward) {
        const Vector d = pa.vertex - x;
        rec.gamma_bar = 1.0;
        rec.gamma = stepsize(obj_, x, g, d, 1.0, cfg_.stepsize, rho_);
        rec.step_type = StepType::Forward;
        ++l_;
        const double gamma = rec.gamma;
        if (gamma >= 1.0) {
            repr_ = Representation::singleton(pa.vertex_id, pa.vertex);
        } else if (gamma > 0) {
            for (std::size_t i = 0; i < repr_.size(); ++i) repr_.set_weight(i, repr_[i].weight * (1.0 - gamma));
            if (const auto idx = repr_.index_of(pa.vertex_id)) {
                repr_.set_weight(*idx, repr_[*idx].weight + gamma);
            } else {
                repr_.append(pa.vertex_id, pa.vertex, gamma);
                event = RepresentationEvent::add(pa.vertex_id);
            }
            repr_.erase_small_weights(cfg_.mu_zero_tolerance);
        }
    } else {
        if (repr_.size() == 1) fail(ErrorCode::SingletonAway, "away step selected with a single vertex");
        const double mu_u = repr_[u].weight;
        double rest = 0;
        for (std::size_t i = 0; i < repr_.size(); ++i) {
            if (i != u) rest += repr_[i].weight;
        }
        rec.gamma_bar = mu_u / rest;
        const Vector d = x - repr_[u].vertex;
        rec.gamma = stepsize(obj_, x, g, d, rec.gamma_bar, cfg_.stepsize, rho_);
        const double gamma = rec.gamma;
        for (std::size_t i = 0; i < repr_.size(); ++i) repr_.set_weight(i, repr_[i].weight * (1.0 + gamma));
        double new_u = mu_u * (1.0 + gamma) - gamma;
        if (gamma >= rec.gamma_bar) new_u = 0.0;
        repr_.set_weight(u, new_u);
        if (new_u <= cfg_.mu_zero_tolerance) {
            rec.step_type = StepType::Drop;
            event = RepresentationEvent::drop(repr_[u].id);
            repr_.erase_at(u);
            ++s_;
        } else {
            rec.step_type = StepType::Away;
        }
    }
    repr_.renormalize();
    repr_.refresh_point();
    apply_reduction(event);

    const double f_new = obj_.value(repr_.point());
    if (f_new > f_ + cfg_.monotonicity_tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "f increased from " << f_ << " to " << f_new << " at iteration " << k_;
        fail(ErrorCode::StallDetected, msg.str());
    }
    f_ = f_new;
    ++k_;
    if (cfg_.debug_checks) debug_check();
    return rec;
}

SolverTrace AscgSolver::run() {
    SolverTrace t;
    t.algorithm = alg_;
    t.config = cfg_;
    if (cfg_.record_iterates) t.iterates.push_back(repr_.point());
    int max_size = static_cast<int>(repr_.size());
    for (int i = 0; i < cfg_.max_iters; ++i) {
        const StepRecord rec = step();
        t.steps.push_back(rec);
        max_size = std::max({max_size, rec.repr_size, static_cast<int>(repr_.size())});
        if (rec.step_type == StepType::None) {
            t.converged = true;
            t.gap = rec.fw_gap;
            break;
        }
        if (cfg_.record_iterates) t.iterates.push_back(repr_.point());
    }
    t.final_repr = repr_;
    t.x = repr_.point();
    t.f = f_;
    if (!t.converged) {
        const Vector g = obj_.gradient(t.x);
        t.gap = g.dot(t.x) - vertex_oracle(p_, g).objective_value;
    }
    t.max_repr_size = max_size;
    t.drop_count = s_;
    t.active_set_mismatches = active_mismatch_;
    return t;
}

std::pair<Representation, StepRecord> ascg_step(const CompositeObjective& obj, const Polytope& p,
                                                const Representation& repr, const SolverConfig& cfg) {
    AscgSolver solver(obj, p, cfg, repr);
    StepRecord rec = solver.step();
    return {solver.representation(), rec};
}

SolverTrace run(Algorithm alg, const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg) {
    AscgSolver solver(obj, p, cfg, alg);
    return solver.run();
}

SolverTrace ascg_run(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg) {
    return run(Algorithm::ASCG, obj, p, cfg);
}

SolverTrace cg_run(const CompositeObjective& obj, const Polytope& p, const SolverConfig& cfg) {
    return run(Algorithm::CG, obj, p, cfg);
}

TraceCheck validate_trace(const std::vector<StepRecord>& steps, std::int64_t max_repr, double monotonicity_tol) {
    TraceCheck out;
    auto bad = [&](const StepRecord& r, const std::string& what) {
        if (out.ok) {
            out.ok = false;
            out.first_bad_iteration = r.iteration;
            out.message = "iteration " + std::to_string(r.iteration) + ": " + what;
        }
    };
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const StepRecord& r = steps[i];
        if (r.fw_gap < -1e-10) bad(r, "negative FW gap");
        if (r.gamma < 0 || r.gamma > r.gamma_bar) bad(r, "gamma outside [0, gamma_bar]");
        if (r.s_count > r.l_count) bad(r, "more drop steps than forward steps");
        if (r.l_count + r.s_count > r.iteration - 1) bad(r, "l + s exceeds k - 1");
        if (max_repr > 0 && r.repr_size > max_repr) bad(r, "representation larger than N");
        if (i > 0 && r.f_value > steps[i - 1].f_value + monotonicity_tol) bad(r, "f increased");
        if (r.step_type == StepType::None && i + 1 != steps.size()) bad(r, "terminal row before end of trace");
    }
    return out;
}

} // namespace ascg
