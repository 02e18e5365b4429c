#include "jnr/sprocedure.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace jnr::sprocedure {

Certificate::Certificate(double gamma_, double alpha_, double beta_, Eigen::VectorXd mu_)
    : gamma(gamma_), alpha(alpha_), beta(beta_), mu(std::move(mu_)) {
    for (int i = 0; i < mu.size(); ++i) {
        if (mu[i] < -1e-12)
            throw std::invalid_argument("Certificate: mu must be entrywise nonnegative");
        if (mu[i] < 0.0) mu[i] = 0.0;
    }
}

linalg::SymmetricMatrix assemble_M(const core::CompositeProblem& p, const Certificate& cert) {
    const int n = p.n();
    const int m = p.m();
    if (cert.mu.size() != m)
        throw std::invalid_argument("assemble_M: mu length must equal the constraint count");

    const double mua = m ? cert.mu.dot(p.lin_a) : 0.0;
    const double mub = m ? cert.mu.dot(p.lin_b) : 0.0;
    const double muc = m ? cert.mu.dot(p.lin_c) : 0.0;
    const Eigen::Matrix2d& Th = p.objective.theta();
    const Eigen::Vector2d& eta = p.objective.eta();

    const int d = n + 3;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
    M(0, 0) = Th(0, 0);
    M(0, 1) = M(1, 0) = Th(0, 1);
    M(1, 1) = Th(1, 1);
    M.block(2, 2, n, n) = cert.alpha * p.f.A() + cert.beta * p.g.A();
    M(0, d - 1) = M(d - 1, 0) = (mua + eta[0] - cert.alpha) / 2.0;
    M(1, d - 1) = M(d - 1, 1) = (mub + eta[1] - cert.beta) / 2.0;
    M.block(2, d - 1, n, 1) = 0.5 * (cert.alpha * p.f.a() + cert.beta * p.g.a());
    M.block(d - 1, 2, 1, n) = M.block(2, d - 1, n, 1).transpose();
    M(d - 1, d - 1) = cert.alpha * p.f.a0() + cert.beta * p.g.a0() - muc - cert.gamma;
    return linalg::SymmetricMatrix::from_dense(M);
}

sdp::LmiProblem assemble_lmi(const core::CompositeProblem& p) {
    const int m = p.m();
    const int k = 3 + m;
    sdp::LmiProblem lmi;
    lmi.c = Eigen::VectorXd::Zero(k);
    lmi.c[0] = 1.0;

    Certificate zero(0.0, 0.0, 0.0, Eigen::VectorXd::Zero(m));
    lmi.F0 = assemble_M(p, zero);
    const Eigen::MatrixXd base = lmi.F0.dense();
    lmi.Fi.reserve(k);
    for (int i = 0; i < k; ++i) {
        Certificate unit(i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0,
                         Eigen::VectorXd::Zero(m));
        if (i >= 3) unit.mu[i - 3] = 1.0;
        lmi.Fi.push_back(
            linalg::SymmetricMatrix::from_dense(assemble_M(p, unit).dense() - base));
    }
    for (int j = 0; j < m; ++j) lmi.nonneg.push_back(3 + j);
    lmi.block_dims = {p.n() + 3};
    return lmi;
}

const char* to_string(ValueStatus s) {
    switch (s) {
        case ValueStatus::Optimal: return "Optimal";
        case ValueStatus::Unbounded: return "Unbounded";
        case ValueStatus::Infeasible: return "Infeasible";
        case ValueStatus::NumericalTrouble: return "NumericalTrouble";
    }
    return "?";
}

ValueResult solve_value(const core::CompositeProblem& p, const sdp::SolverOptions& opts) {
    const core::ValidationReport v = core::validate_problem(p);
    if (v.path != core::SolvePath::ConvexSdp)
        throw std::invalid_argument(
            "solve_value: instance is outside the convex SDP path (theta must be PSD and "
            "{P, Q} linearly independent); use the dependent-case application solvers");

    ValueResult r;
    r.sdp = sdp::solve_lmi(assemble_lmi(p), opts);
    const Eigen::VectorXd& y = r.sdp.y;
    if (y.size() >= 3)
        r.certificate = Certificate(y[0], y[1], y[2],
                                    y.size() > 3 ? y.tail(y.size() - 3).cwiseMax(0.0).eval()
                                                 : Eigen::VectorXd{});
    switch (r.sdp.status) {
        case sdp::SdpStatus::Optimal:
            r.status = ValueStatus::Optimal;
            r.value = r.sdp.objective_value;
            break;
        case sdp::SdpStatus::Infeasible:
            // no multiplier certificate exists at any level: unbounded below
            r.status = ValueStatus::Unbounded;
            r.value = -std::numeric_limits<double>::infinity();
            break;
        case sdp::SdpStatus::Unbounded:
            // every gamma is certified: the constraint set is empty
            r.status = ValueStatus::Infeasible;
            r.value = std::numeric_limits<double>::infinity();
            break;
        default:
            r.status = ValueStatus::NumericalTrouble;
            r.value = r.sdp.objective_value;
            break;
    }
    return r;
}

CertificateReport verify_certificate(const core::CompositeProblem& p, const Certificate& cert,
                                     int samples, unsigned seed) {
    CertificateReport rep;
    rep.g2_min_eig = linalg::min_eigenvalue(assemble_M(p, cert));
    rep.g2_pass = rep.g2_min_eig >= -1e-8;

    rep.g1_samples = samples;
    const double margin = -1e-6 * (1.0 + std::abs(cert.gamma));
    rep.g1_worst_margin = std::numeric_limits<double>::infinity();
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 2.0);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd x(p.n());
        for (int i = 0; i < p.n(); ++i) x[i] = dist(rng);
        const Eigen::Vector2d z = p.range_point(x);
        if (p.m() > 0 && p.linear_violation(z) > 1e-9) continue;
        ++rep.g1_checked;
        const double val = p.objective(z) - cert.gamma;
        rep.g1_worst_margin = std::min(rep.g1_worst_margin, val);
        if (val < margin) ++rep.g1_violations;
    }
    rep.g1_pass = rep.g1_violations == 0;
    return rep;
}

} // namespace jnr::sprocedure
