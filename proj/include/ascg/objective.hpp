#pragma once

#include "ascg/polytope.hpp"

#include <functional>
#include <optional>

namespace ascg {

/// g(y) = <y, Qy> + <c, y> + r.
struct QuadraticForm {
    Matrix Q;
    Vector c;
    double r = 0;
};

/// A general smooth, strongly convex inner function g.
struct InnerFunction {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    double sigma = 0;                 // strong convexity parameter
    std::optional<double> lipschitz;  // gradient Lipschitz constant L_g
};

/// f(x) = g(Ex) + <b, x>.
class CompositeObjective {
public:
    static CompositeObjective quadratic(Matrix E, Vector b, QuadraticForm g);
    static CompositeObjective general(Matrix E, Vector b, InnerFunction g);

    int dim() const noexcept { return static_cast<int>(E_.cols()); }
    int image_dim() const noexcept { return static_cast<int>(E_.rows()); }
    const Matrix& E() const noexcept { return E_; }
    const Vector& b() const noexcept { return b_; }
    double sigma_g() const noexcept { return sigma_g_; }
    std::optional<double> lipschitz_g() const noexcept { return lipschitz_g_; }
    bool is_quadratic() const noexcept { return quadratic_.has_value(); }
    /// Q is stored symmetrized.
    const std::optional<QuadraticForm>& quadratic_form() const noexcept { return quadratic_; }

    double inner_value(const Vector& y) const;
    Vector inner_gradient(const Vector& y) const;

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    /// <Ed, Q Ed>: f(x + t d) = f(x) + t <grad f(x), d> + t^2 * curvature(d) for quadratic g.
    std::optional<double> curvature(const Vector& d) const;

private:
    CompositeObjective(Matrix E, Vector b);

    Matrix E_;
    Vector b_;
    double sigma_g_ = 0;
    std::optional<double> lipschitz_g_;
    std::optional<QuadraticForm> quadratic_;
    InnerFunction general_;
};

double eval(const CompositeObjective& obj, const Vector& x);
Vector grad(const CompositeObjective& obj, const Vector& x);

/// Quadratic g: 2 * lambda_max(E^T Q E). Otherwise L_g * ||E||^2.
double lipschitz_rho(const CompositeObjective& obj);

struct ProblemConstants {
    double rho = 0;
    double sigma_g = 0;
    double G = 0;   // max ||grad g(Ex)|| over X
    double D = 0;   // diameter of X
    double D_E = 0; // diameter of EX
    double C = 0;   // G * D_E + ||b|| * D
    double b_norm = 0;
    /// False when g is not quadratic: the vertex maximum of ||grad g(Ev)|| may then
    /// underestimate G.
    bool G_exact = true;
};

ProblemConstants problem_constants(const CompositeObjective& obj, const Polytope& p);

} // namespace ascg
