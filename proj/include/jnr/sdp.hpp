#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "jnr/linalg.hpp"

namespace jnr::sdp {

/// maximize c.y  subject to  F0 + sum_i y_i Fi >= 0 (PSD),
/// y_j >= 0 for every j in nonneg.
struct LmiProblem {
    Eigen::VectorXd c;
    linalg::SymmetricMatrix F0;
    std::vector<linalg::SymmetricMatrix> Fi;
    std::vector<int> nonneg;
    std::vector<int> block_dims;  // optional partition of the matrix dimension

    int num_vars() const { return static_cast<int>(c.size()); }
    int dim() const { return F0.dim(); }
    void validate() const;  // throws on inconsistent dimensions
};

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIterations, NumericalTrouble };

const char* to_string(SdpStatus s);

struct SolverOptions {
    double gap_tol = 1e-8;
    double feas_tol = 1e-9;
    int max_iter = 200;
    double step_fraction = 0.98;  // fraction-to-boundary
    double unbounded_cap = 1e12;
    double phase1_box = 1e6;      // variable bound used by the feasibility classifier
    std::ostream* log = nullptr;  // iteration log (iteration, gap, step lengths)
};

struct SdpSolution {
    SdpStatus status = SdpStatus::NumericalTrouble;
    Eigen::VectorXd y;
    double objective_value = 0.0;   // c.y
    double primal_objective = 0.0;  // <F0, X>, an upper bound at optimality
    linalg::SymmetricMatrix dual_X;
    double gap = std::numeric_limits<double>::infinity();  // relative duality gap
    double min_eig_slack = 0.0;     // lambda_min(F0 + sum y_i Fi) recomputed from y
    int iterations = 0;
    std::string message;
};

/// Primal-dual path-following with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector. Nonnegative variables ride along as 1x1 PSD blocks.
SdpSolution solve_lmi(const LmiProblem& p, const SolverOptions& opts = {});

struct FeasibilityCheck {
    bool feasible = false;
    double min_eig = 0.0;
};

/// Evaluates F0 + sum y_i Fi at a fixed y and tests PSD-ness within feas_tol.
FeasibilityCheck check_feasibility(const LmiProblem& p, const Eigen::VectorXd& fixed_y,
                                   double feas_tol = 1e-9);

} // namespace jnr::sdp
