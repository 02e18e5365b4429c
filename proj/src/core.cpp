#include "jnr/core.hpp"

#include <cmath>
#include <stdexcept>

namespace jnr::core {

QuadraticFunction::QuadraticFunction(Eigen::MatrixXd A, Eigen::VectorXd a, double a0)
    : a_(std::move(a)), a0_(a0) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("QuadraticFunction: A must be square");
    if (A.rows() != a_.size())
        throw std::invalid_argument("QuadraticFunction: A and a dimensions differ");
    if (a_.size() < 1)
        throw std::invalid_argument("QuadraticFunction: dimension must be >= 1");
    if (!A.allFinite() || !a_.allFinite() || !std::isfinite(a0_))
        throw std::invalid_argument("QuadraticFunction: non-finite data");
    input_asymmetry_ = 0.5 * (A - A.transpose()).cwiseAbs().maxCoeff();
    A_ = 0.5 * (A + A.transpose());
}

double QuadraticFunction::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != a_.size())
        throw std::invalid_argument("QuadraticFunction: x dimension mismatch");
    return x.dot(A_ * x) + a_.dot(x) + a0_;
}

Eigen::VectorXd QuadraticFunction::gradient(const Eigen::VectorXd& x) const {
    if (x.size() != a_.size())
        throw std::invalid_argument("QuadraticFunction: x dimension mismatch");
    return 2.0 * (A_ * x) + a_;
}

double eval_quadratic(const QuadraticFunction& q, const Eigen::VectorXd& x) { return q(x); }

RangeObjective::RangeObjective(double theta1, double theta2, double theta3,
                               double eta1, double eta2) {
    theta_ << theta1, theta2, theta2, theta3;
    eta_ << eta1, eta2;
    if (!theta_.allFinite() || !eta_.allFinite())
        throw std::invalid_argument("RangeObjective: non-finite data");
    // trace/det test for the 2x2 case; tolerance matches the stored-flag contract
    const double tr = theta1 + theta3;
    const double det = theta1 * theta3 - theta2 * theta2;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    theta_psd_ = (tr / 2.0 - disc) >= -1e-10;
}

double RangeObjective::operator()(const Eigen::Vector2d& z) const {
    return z.dot(theta_ * z) + eta_.dot(z);
}

bool RangeObjective::is_sum_of_squares() const {
    return theta_(0, 0) == 1.0 && theta_(0, 1) == 0.0 && theta_(1, 1) == 1.0
        && eta_(0) == 0.0 && eta_(1) == 0.0;
}

double eval_F(const RangeObjective& F, const Eigen::Vector2d& z) { return F(z); }

CompositeProblem::CompositeProblem(QuadraticFunction f_, QuadraticFunction g_,
                                   RangeObjective objective_, Eigen::VectorXd lin_a_,
                                   Eigen::VectorXd lin_b_, Eigen::VectorXd lin_c_)
    : f(std::move(f_)), g(std::move(g_)), objective(std::move(objective_)),
      lin_a(std::move(lin_a_)), lin_b(std::move(lin_b_)), lin_c(std::move(lin_c_)) {
    if (f.dim() != g.dim())
        throw std::invalid_argument("CompositeProblem: f and g dimensions differ");
    if (lin_a.size() != lin_b.size() || lin_a.size() != lin_c.size())
        throw std::invalid_argument("CompositeProblem: linear rows a, b, c must share length");
}

Eigen::Vector2d CompositeProblem::range_point(const Eigen::VectorXd& x) const {
    return {f(x), g(x)};
}

double CompositeProblem::objective_at(const Eigen::VectorXd& x) const {
    return objective(range_point(x));
}

double CompositeProblem::linear_violation(const Eigen::Vector2d& z) const {
    double worst = -std::numeric_limits<double>::infinity();
    if (m() == 0) return 0.0;
    for (int i = 0; i < m(); ++i)
        worst = std::max(worst, z[0] * lin_a[i] + z[1] * lin_b[i] - lin_c[i]);
    return worst;
}

JointRangePoint JointRangePoint::from_witness(const QuadraticFunction& f,
                                              const QuadraticFunction& g,
                                              const Eigen::VectorXd& x) {
    Eigen::Vector2d z{f(x), g(x)};
    return JointRangePoint(z, x);
}

ValidationReport validate_problem(const CompositeProblem& p) {
    ValidationReport r;
    r.n = p.n();
    r.m = p.m();
    r.f_input_asymmetry = p.f.input_asymmetry();
    r.g_input_asymmetry = p.g.input_asymmetry();
    r.theta_psd = p.objective.theta_psd();
    r.dependence = linalg::linear_dependence(p.f.A(), p.g.A());
    if (!r.theta_psd)
        r.path = SolvePath::Unsupported;
    else if (r.dependence.kind == linalg::DependenceKind::Independent)
        r.path = SolvePath::ConvexSdp;
    else
        r.path = SolvePath::DependentCase;
    return r;
}

const char* to_string(SolvePath path) {
    switch (path) {
        case SolvePath::ConvexSdp: return "SDP";
        case SolvePath::DependentCase: return "dependent";
        case SolvePath::Unsupported: return "unsupported";
    }
    return "?";
}

} // namespace jnr::core
