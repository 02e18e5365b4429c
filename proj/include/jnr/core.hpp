#pragma once

#include <Eigen/Dense>
#include <optional>

#include "jnr/linalg.hpp"

namespace jnr::core {

/// x -> x'Ax + a'x + a0 with A symmetric. An asymmetric input A is silently
/// replaced by (A + A')/2; the defect of the original input is kept for
/// diagnostics.
class QuadraticFunction {
public:
    QuadraticFunction(Eigen::MatrixXd A, Eigen::VectorXd a, double a0);

    int dim() const { return static_cast<int>(a_.size()); }
    double operator()(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;  // 2Ax + a
    Eigen::MatrixXd hessian() const { return 2.0 * A_; }

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::VectorXd& a() const { return a_; }
    double a0() const { return a0_; }
    double input_asymmetry() const { return input_asymmetry_; }

private:
    Eigen::MatrixXd A_;
    Eigen::VectorXd a_;
    double a0_;
    double input_asymmetry_;
};

double eval_quadratic(const QuadraticFunction& q, const Eigen::VectorXd& x);

/// Objective on the range plane: F(z) = z'Theta z + eta'z,
/// i.e. theta1 z1^2 + 2 theta2 z1 z2 + theta3 z2^2 + eta1 z1 + eta2 z2.
class RangeObjective {
public:
    RangeObjective(double theta1, double theta2, double theta3, double eta1, double eta2);
    static RangeObjective sum_of_squares() { return {1.0, 0.0, 1.0, 0.0, 0.0}; }

    double operator()(const Eigen::Vector2d& z) const;
    const Eigen::Matrix2d& theta() const { return theta_; }
    const Eigen::Vector2d& eta() const { return eta_; }
    bool theta_psd() const { return theta_psd_; }
    bool is_sum_of_squares() const;

private:
    Eigen::Matrix2d theta_;
    Eigen::Vector2d eta_;
    bool theta_psd_;
};

double eval_F(const RangeObjective& F, const Eigen::Vector2d& z);

/// One problem instance: minimize F(f(x), g(x)) subject to
/// z1 a + z2 b - c <= 0 on z = (f(x), g(x)). m = 0 means no linear rows.
struct CompositeProblem {
    CompositeProblem(QuadraticFunction f_, QuadraticFunction g_, RangeObjective objective_,
                     Eigen::VectorXd lin_a = {}, Eigen::VectorXd lin_b = {},
                     Eigen::VectorXd lin_c = {});

    QuadraticFunction f;
    QuadraticFunction g;
    RangeObjective objective;
    Eigen::VectorXd lin_a, lin_b, lin_c;

    int n() const { return f.dim(); }
    int m() const { return static_cast<int>(lin_a.size()); }

    Eigen::Vector2d range_point(const Eigen::VectorXd& x) const;
    double objective_at(const Eigen::VectorXd& x) const;
    /// max_i (z1 a_i + z2 b_i - c_i); <= 0 means z satisfies the linear rows
    double linear_violation(const Eigen::Vector2d& z) const;
};

/// A point of the joint numerical range, optionally with the x that realizes it.
struct JointRangePoint {
    JointRangePoint(Eigen::Vector2d z_, std::optional<Eigen::VectorXd> witness = std::nullopt)
        : z(std::move(z_)), witness_x(std::move(witness)) {}

    static JointRangePoint from_witness(const QuadraticFunction& f, const QuadraticFunction& g,
                                        const Eigen::VectorXd& x);

    Eigen::Vector2d z;
    std::optional<Eigen::VectorXd> witness_x;
};

enum class SolvePath { ConvexSdp, DependentCase, Unsupported };

struct ValidationReport {
    int n = 0;
    int m = 0;
    double f_input_asymmetry = 0.0;
    double g_input_asymmetry = 0.0;
    bool theta_psd = false;
    linalg::DependenceResult dependence;
    SolvePath path = SolvePath::Unsupported;
};

/// Never throws on degenerate data; reports which solve path applies.
ValidationReport validate_problem(const CompositeProblem& p);

const char* to_string(SolvePath path);

} // namespace jnr::core
