#include "jnr/subsolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jnr::subsolvers {

const char* to_string(SubStatus s) {
    switch (s) {
        case SubStatus::Optimal: return "Optimal";
        case SubStatus::Unbounded: return "Unbounded";
        case SubStatus::Infeasible: return "Infeasible";
        case SubStatus::RelaxationGap: return "RelaxationGap";
    }
    return "?";
}

Eigen::MatrixXd homogenize(const core::QuadraticFunction& q) {
    const int n = q.dim();
    Eigen::MatrixXd H(n + 1, n + 1);
    H.topLeftCorner(n, n) = q.A();
    H.block(0, n, n, 1) = 0.5 * q.a();
    H.block(n, 0, 1, n) = 0.5 * q.a().transpose();
    H(n, n) = q.a0();
    return H;
}

namespace {

std::vector<Eigen::VectorXd> rank_terms(const Eigen::MatrixXd& Y, int* rank_out) {
    linalg::EigenDecomposition ed = linalg::sym_eig(Y);
    const double wmax = std::max(ed.values.maxCoeff(), 1e-300);
    std::vector<Eigen::VectorXd> vs;
    for (int i = 0; i < ed.values.size(); ++i)
        if (ed.values[i] > 1e-7 * wmax)
            vs.push_back(std::sqrt(ed.values[i]) * ed.vectors.col(i));
    if (rank_out) *rank_out = static_cast<int>(vs.size());
    return vs;
}

// Rank-one terms of Y rotated pairwise so that candidates meet the
// constraint sign on G; homogenizing coordinate is the last one.
std::vector<Eigen::VectorXd> extraction_candidates(const Eigen::MatrixXd& Y,
                                                   const Eigen::MatrixXd& G, bool eq) {
    std::vector<Eigen::VectorXd> vs = rank_terms(Y, nullptr);
    auto gval = [&](const Eigen::VectorXd& v) { return v.dot(G * v); };
    const double gscale = std::max(1.0, G.cwiseAbs().maxCoeff());

    std::vector<Eigen::VectorXd> out;
    for (const auto& v : vs) {
        // generous admission: callers verify the de-homogenized residual
        const double gv = gval(v);
        const double scale = 1e-6 * gscale * (1.0 + v.squaredNorm());
        if (eq ? std::abs(gv) <= scale : gv <= scale) out.push_back(v);
    }
    if (!vs.empty()) {
        // the dominant term is always worth a try; near-rank-one optima live there
        out.push_back(vs.back());
    }
    if (eq && vs.size() >= 2) {
        auto cmp = [&](const auto& a, const auto& b) { return gval(a) < gval(b); };
        Eigen::VectorXd lo = *std::min_element(vs.begin(), vs.end(), cmp);
        Eigen::VectorXd hi = *std::max_element(vs.begin(), vs.end(), cmp);
        const double glo = gval(lo), ghi = gval(hi);
        if (glo < 0.0 && ghi > 0.0) {
            // rotate the straddling pair: (g_hi) s^2 + 2 s (lo.G.hi) + g_lo = 0
            const double b = lo.dot(G * hi);
            const double sq = std::sqrt(std::max(b * b - ghi * glo, 0.0));
            for (double s : {(-b + sq) / ghi, (-b - sq) / ghi}) {
                const double norm = std::sqrt(1.0 + s * s);
                out.push_back((lo + s * hi) / norm);
                Eigen::VectorXd comp = (hi - s * lo) / norm;
                if (std::abs(gval(comp)) <= 1e-6 * gscale * (1.0 + comp.squaredNorm()))
                    out.push_back(comp);
            }
        }
    }
    return out;
}

std::optional<Eigen::VectorXd> dehomogenize(const Eigen::VectorXd& v) {
    const double h = v[v.size() - 1];
    if (std::abs(h) < 1e-8) return std::nullopt;
    return (v.head(v.size() - 1) / h).eval();
}

// A few Newton projection steps onto {g = 0} (or down to {g <= 0}) remove the
// extraction noise left by the finite SDP tolerance.
Eigen::VectorXd polish_onto(const core::QuadraticFunction& g, Eigen::VectorXd x, bool equality) {
    for (int it = 0; it < 12; ++it) {
        const double gv = g(x);
        if (equality ? std::abs(gv) < 1e-14 : gv < 1e-14) break;
        const Eigen::VectorXd grad = g.gradient(x);
        const double n2 = grad.squaredNorm();
        if (n2 < 1e-20) break;
        x -= (gv / n2) * grad;
    }
    return x;
}

QpResult solve_lifted(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                      bool inequality, const sdp::SolverOptions& opts_in) {
    if (f.dim() != g.dim())
        throw std::invalid_argument("subsolver: f and g dimensions differ");
    const int n = f.dim();
    const Eigen::MatrixXd Hf = homogenize(f);
    const Eigen::MatrixXd Hg = homogenize(g);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, n + 1);
    E(n, n) = 1.0;

    // max nu s.t. Hf + lambda Hg - nu E >= 0 (lambda >= 0 for the inequality).
    // The dual matrix of this LMI is the lifted relaxation variable Y with
    // Y_hh = 1 and <Hg, Y> = 0 (<= 0 for the inequality).
    sdp::LmiProblem lmi;
    lmi.c = Eigen::VectorXd::Zero(2);
    lmi.c[0] = 1.0;
    lmi.F0 = linalg::SymmetricMatrix::from_dense(Hf);
    lmi.Fi = {linalg::SymmetricMatrix::from_dense(-E), linalg::SymmetricMatrix::from_dense(Hg)};
    if (inequality) lmi.nonneg = {1};

    sdp::SolverOptions opts = opts_in;
    opts.gap_tol = std::min(opts.gap_tol, 1e-9);
    sdp::SdpSolution s = sdp::solve_lmi(lmi, opts);
    if (s.status == sdp::SdpStatus::NumericalTrouble ||
        s.status == sdp::SdpStatus::MaxIterations) {
        // degenerate optima (tangency cases) sometimes stall the tight target
        opts.gap_tol = 1e-7;
        opts.feas_tol = 1e-8;
        s = sdp::solve_lmi(lmi, opts);
    }

    QpResult r;
    r.message = s.message;
    if (s.status == sdp::SdpStatus::Unbounded) {
        // relaxation admits no matrix feasible point, hence neither does the problem
        r.status = SubStatus::Infeasible;
        return r;
    }
    if (s.status == sdp::SdpStatus::Infeasible) {
        // no finite lower-bound certificate: unbounded below
        r.status = SubStatus::Unbounded;
        r.value = -std::numeric_limits<double>::infinity();
        r.bound_valid = true;
        return r;
    }
    if (s.status != sdp::SdpStatus::Optimal) {
        r.status = SubStatus::RelaxationGap;
        r.message = "SDP did not converge: " + std::string(sdp::to_string(s.status));
        return r;
    }

    r.value = s.objective_value;
    r.bound_valid = true;
    r.lifted.value = s.objective_value;
    Eigen::MatrixXd Y = s.dual_X.dense();
    if (Y(n, n) > 1e-10) Y /= Y(n, n);  // pin the homogenizing corner at 1
    r.lifted.Y = linalg::SymmetricMatrix::from_dense(Y);
    rank_terms(Y, &r.lifted.rank_estimate);

    const double vtol = 1e-5 * (1.0 + std::abs(r.value));
    std::optional<Eigen::VectorXd> best;
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& v : extraction_candidates(Y, Hg, !inequality)) {
        auto x0 = dehomogenize(v);
        if (!x0) continue;
        for (bool do_polish : {true, false}) {
            Eigen::VectorXd x = do_polish ? polish_onto(g, *x0, !inequality) : *x0;
            const double gv = g(x);
            const bool feas = inequality ? gv <= 1e-7 : std::abs(gv) <= 1e-7;
            if (!feas) continue;
            const double err = std::abs(f(x) - r.value);
            if (err < best_err) {
                best = x;
                best_err = err;
            }
        }
    }
    if (best && best_err <= vtol) {
        r.status = SubStatus::Optimal;
        r.x = best;
        if (best_err <= 1e-6 * (1.0 + std::abs(r.value))) r.lifted.x = best;
        return r;
    }
    r.status = SubStatus::RelaxationGap;
    if (Y(n, n) <= 1e-10)
        r.message = "lifted mass at infinity (infimum likely unattained)";
    else if (r.message.empty())
        r.message = "no rank-one point matched the SDP value";
    return r;
}

} // namespace

QpResult solve_qp1eqc(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                      const sdp::SolverOptions& opts) {
    return solve_lifted(f, g, false, opts);
}

QpResult solve_qp1qc(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                     const sdp::SolverOptions& opts) {
    return solve_lifted(f, g, true, opts);
}

std::optional<Eigen::VectorXd> rank_one_extract(
    const linalg::SymmetricMatrix& Y, const std::vector<HomogenizedConstraint>& constraints) {
    const Eigen::MatrixXd Yd = Y.dense();
    const int d = Y.dim();
    if (Yd(d - 1, d - 1) <= 1e-10) return std::nullopt;  // solution at infinity
    if (linalg::min_eigenvalue(Y) < -1e-8 * std::max(1.0, Y.max_abs()))
        throw std::invalid_argument("rank_one_extract: Y must be PSD");

    if (constraints.empty()) {
        // no side condition: take the term with the largest homogenizing mass
        std::vector<Eigen::VectorXd> vs = rank_terms(Yd, nullptr);
        if (vs.empty()) return std::nullopt;
        auto best = std::max_element(vs.begin(), vs.end(),
                                     [d](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                                         return std::abs(a[d - 1]) < std::abs(b[d - 1]);
                                     });
        return dehomogenize(*best);
    }

    const Eigen::MatrixXd& G = constraints.front().H;
    const bool eq = constraints.front().sense == ConstraintSense::EqualZero;
    const double gscale = std::max(1.0, G.cwiseAbs().maxCoeff());
    std::optional<Eigen::VectorXd> best;
    double best_mass = 0.0;
    for (const auto& v : extraction_candidates(Yd, G, eq)) {
        const double mass = std::abs(v[d - 1]);
        if (mass <= best_mass) continue;
        auto x = dehomogenize(v);
        if (!x) continue;
        // the de-homogenized point must meet the constraint sign
        const double gv = v.dot(G * v) / (v[d - 1] * v[d - 1]);
        const double tol = 1e-7 * gscale * (1.0 + x->squaredNorm());
        if (eq ? std::abs(gv) > tol : gv > tol) continue;
        best = x;
        best_mass = mass;
    }
    return best;
}

} // namespace jnr::subsolvers
