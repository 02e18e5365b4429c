#pragma once

#include <Eigen/Dense>

#include "jnr/core.hpp"
#include "jnr/sdp.hpp"

namespace jnr::sprocedure {

/// Multipliers (gamma, alpha, beta, mu >= 0) certifying gamma as a lower
/// bound: F(z) - gamma + alpha(f(x)-z1) + beta(g(x)-z2) + mu.(z1 a + z2 b - c) >= 0.
struct Certificate {
    Certificate() = default;
    Certificate(double gamma_, double alpha_, double beta_, Eigen::VectorXd mu_ = {});

    double gamma = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Eigen::VectorXd mu;
};

/// The (n+3)x(n+3) certificate matrix, rows/cols ordered (z1, z2, x_1..x_n, 1).
/// Its quadratic form at v = (z, x, 1) reproduces the multiplier combination above.
linalg::SymmetricMatrix assemble_M(const core::CompositeProblem& p, const Certificate& cert);

/// LMI over y = (gamma, alpha, beta, mu_1..mu_m) maximizing gamma with M(y) PSD.
sdp::LmiProblem assemble_lmi(const core::CompositeProblem& p);

enum class ValueStatus { Optimal, Unbounded, Infeasible, NumericalTrouble };
const char* to_string(ValueStatus s);

struct ValueResult {
    ValueStatus status = ValueStatus::NumericalTrouble;
    double value = 0.0;  // -inf when the problem is unbounded below
    Certificate certificate;
    sdp::SdpSolution sdp;
};

/// Optimal value of the instance through the certificate LMI. Requires the
/// convex path (theta PSD, {P, Q} independent); other instances are rejected
/// toward the dependent-case solvers.
ValueResult solve_value(const core::CompositeProblem& p, const sdp::SolverOptions& opts = {});

struct CertificateReport {
    double g2_min_eig = 0.0;
    bool g2_pass = false;
    int g1_samples = 0;     // requested
    int g1_checked = 0;     // satisfied linear rows and were evaluated
    int g1_violations = 0;  // F(z) - gamma below the tolerance margin
    double g1_worst_margin = 0.0;
    bool g1_pass = false;
};

/// G2: PSD check of the assembled matrix. G1: seeded spot check of
/// F(f(x), g(x)) - gamma over random x (samples violating the linear rows
/// are skipped; they do not witness either side).
CertificateReport verify_certificate(const core::CompositeProblem& p, const Certificate& cert,
                                     int samples, unsigned seed = 7);

} // namespace jnr::sprocedure
