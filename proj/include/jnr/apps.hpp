#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

#include "jnr/core.hpp"
#include "jnr/recovery.hpp"

namespace jnr::apps {

enum class QsicCase { Independent, Dependent, BothZero };
const char* to_string(QsicCase c);

struct QsicResult {
    double value = 0.0;  // inf f(x)^2 + g(x)^2
    std::optional<Eigen::VectorXd> x;
    bool intersects = false;  // value < rho
    double rho_used = 0.0;
    QsicCase case_ = QsicCase::Independent;
    bool value_reliable = false;  // solver reached an optimal status
    std::string message;
};

struct QsicOptions {
    sdp::SolverOptions sdp;
    recovery::FullSolveOptions full;
    double epsilon = 1e-6;  // recovery accuracy for the independent case
};

/// Least-squares intersection test of the hypersurfaces f = 0 and g = 0.
QsicResult solve_qsic(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                      double rho = 1e-8, const QsicOptions& opts = {});

enum class AqpCase { Case1Zero, Case1PositiveRight, Case1PositiveLeft, Case2Kkt };
enum class KktBranch { MuPositive, BothZero, Lambda1Only };
const char* to_string(AqpCase c);
const char* to_string(KktBranch b);

struct BranchOutcome {
    bool evaluated = false;
    bool accepted = false;
    double z1 = 0.0;
    std::optional<Eigen::VectorXd> x;
    std::string note;
};

enum class AqpStatus { Optimal, Infeasible, Inconclusive };
const char* to_string(AqpStatus s);

struct AqpResult {
    AqpStatus status = AqpStatus::Inconclusive;
    double value = 0.0;  // optimum of |f|
    std::optional<Eigen::VectorXd> x;
    AqpCase case_ = AqpCase::Case2Kkt;
    std::optional<KktBranch> kkt_branch;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::array<BranchOutcome, 3> branches;  // audit of (i) mu>0, (ii) both zero, (iii) lambda1 only
    std::string message;
};

struct AqpOptions {
    sdp::SolverOptions sdp;
    double zero_tol = 1e-7;
};

/// min |f(x)| subject to g(x) <= 0.
AqpResult solve_aqp(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                    const AqpOptions& opts = {});

struct KktLinearSolutions {
    bool consistent = false;           // 2Px + p = 0 admits a solution
    Eigen::VectorXd x_particular;
    Eigen::MatrixXd null_basis;        // n x r, orthonormal; empty when P is regular
    double z1 = 0.0;                   // p.x/2 + p0, constant over the family
    double lambda1 = 0.0;              // 2 z1, must be nonzero for this branch
    bool inequality_feasible = false;  // some member satisfies the linear inequality
    std::optional<Eigen::VectorXd> x_example;
};

/// Stationary-interior branch of the dependent-case KKT system: the affine
/// solution family of 2Px + p = 0 filtered by the eliminated inequality.
KktLinearSolutions kkt_linear_branch(const core::QuadraticFunction& f,
                                     const core::QuadraticFunction& g, double t_star);

} // namespace jnr::apps
