#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "jnr/core.hpp"
#include "jnr/sdp.hpp"

namespace jnr::subsolvers {

enum class SubStatus { Optimal, Unbounded, Infeasible, RelaxationGap };
const char* to_string(SubStatus s);

/// [[A, a/2], [a'/2, a0]]; satisfies <H, [x;1][x;1]'> = q(x).
Eigen::MatrixXd homogenize(const core::QuadraticFunction& q);

struct LiftedSolution {
    linalg::SymmetricMatrix Y;  // (n+1) x (n+1), homogenizing coordinate last
    double value = 0.0;
    std::optional<Eigen::VectorXd> x;
    int rank_estimate = 0;
};

struct QpResult {
    SubStatus status = SubStatus::RelaxationGap;
    double value = 0.0;
    bool bound_valid = false;  // value carries a converged relaxation bound
    std::optional<Eigen::VectorXd> x;
    LiftedSolution lifted;
    std::string message;
};

/// inf f(x) s.t. g(x) = 0, through the lifted SDP relaxation plus rank-one
/// extraction. RelaxationGap is reported when no x matching the SDP value
/// within 1e-5 relative can be recovered.
QpResult solve_qp1eqc(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                      const sdp::SolverOptions& opts = {});

/// inf f(x) s.t. g(x) <= 0, same route with a signed multiplier.
QpResult solve_qp1qc(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                     const sdp::SolverOptions& opts = {});

enum class ConstraintSense { EqualZero, LeqZero };

struct HomogenizedConstraint {
    Eigen::MatrixXd H;
    ConstraintSense sense = ConstraintSense::EqualZero;
};

/// Pairwise-rotation rank-one splitting: decomposes Y into rank-one terms and
/// rotates a pair so one term meets the constraint sign, then de-homogenizes.
/// Fails when the matching term has (numerically) zero homogenizing mass.
std::optional<Eigen::VectorXd> rank_one_extract(
    const linalg::SymmetricMatrix& Y, const std::vector<HomogenizedConstraint>& constraints);

} // namespace jnr::subsolvers
