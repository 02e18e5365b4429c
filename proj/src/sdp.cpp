#include "jnr/sdp.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace jnr::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DenseLmi {
    Eigen::VectorXd c;
    Eigen::MatrixXd F0;
    std::vector<Eigen::MatrixXd> Fi;
};

// Nonnegative variables become trailing 1x1 diagonal blocks of the slack.
DenseLmi extend(const LmiProblem& p) {
    const int k = p.num_vars();
    const int d0 = p.dim();
    const int d = d0 + static_cast<int>(p.nonneg.size());
    DenseLmi e;
    e.c = p.c;
    e.F0 = Eigen::MatrixXd::Zero(d, d);
    e.F0.topLeftCorner(d0, d0) = p.F0.dense();
    e.Fi.reserve(k);
    for (int i = 0; i < k; ++i) {
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
        F.topLeftCorner(d0, d0) = p.Fi[i].dense();
        for (std::size_t t = 0; t < p.nonneg.size(); ++t)
            if (p.nonneg[t] == i) F(d0 + static_cast<int>(t), d0 + static_cast<int>(t)) = 1.0;
        e.Fi.push_back(std::move(F));
    }
    return e;
}

double inner(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return (A.array() * B.array()).sum();
}

// Largest step alpha with M + alpha*dM staying PD, via L^-1 dM L^-T.
double max_step(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& dM) {
    Eigen::MatrixXd W = llt.matrixL().solve(dM);
    W = llt.matrixL().solve(W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double wmin = es.eigenvalues().minCoeff();
    if (!std::isfinite(wmin)) return 0.0;
    return wmin >= 0.0 ? kInf : -1.0 / wmin;
}

struct CoreResult {
    SdpStatus status = SdpStatus::MaxIterations;
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    double obj = 0.0;
    double primal_obj = 0.0;
    double gap = kInf;
    int iterations = 0;
    std::string message;
};

// Infeasible-start path following on the extended dense problem.
CoreResult solve_core(const DenseLmi& e, const SolverOptions& opts, double init_scale = 1.0) {
    const int k = static_cast<int>(e.c.size());
    const int d = static_cast<int>(e.F0.rows());

    double scale = std::max(1.0, e.F0.norm());
    for (const auto& F : e.Fi) scale = std::max(scale, F.norm());

    CoreResult res;
    Eigen::MatrixXd X =
        Eigen::MatrixXd::Identity(d, d) * init_scale * std::max(1.0, e.c.norm());
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(d, d) * init_scale * scale;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);

    auto slack_of = [&](const Eigen::VectorXd& yy) {
        Eigen::MatrixXd M = e.F0;
        for (int i = 0; i < k; ++i) M += yy[i] * e.Fi[i];
        return M;
    };

    // floor slightly the spectrum of a nearly-PD iterate so the factorization
    // survives the final squeeze toward the central path
    auto clamp_pd = [](Eigen::MatrixXd& M) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        const double floor_val =
            1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        M = es.eigenvectors() * es.eigenvalues().cwiseMax(floor_val).asDiagonal() *
            es.eigenvectors().transpose();
    };
    int rescues = 0;

    double relgap = kInf;
    for (int it = 0; it < opts.max_iter; ++it) {
        res.iterations = it + 1;
        Eigen::MatrixXd Sy = slack_of(y);
        Eigen::MatrixXd Rp = Sy - S;
        Eigen::VectorXd rd(k);
        for (int i = 0; i < k; ++i) rd[i] = -e.c[i] - inner(e.Fi[i], X);

        const double mu = inner(X, S) / d;
        if (!std::isfinite(mu) || !Rp.allFinite() || !rd.allFinite() || std::abs(mu) > 1e60) {
            res.status = SdpStatus::NumericalTrouble;
            res.message = "iterates diverged";
            break;
        }

        const double P = inner(e.F0, X);
        const double D = e.c.dot(y);
        relgap = std::abs(P - D) / (1.0 + std::abs(P) + std::abs(D));
        const double pinf = Rp.norm() / (1.0 + e.F0.norm());
        const double dinf = rd.norm() / (1.0 + e.c.norm());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rep(Sy, Eigen::EigenvaluesOnly);
        const double lmin_replay = rep.eigenvalues().minCoeff();

        if (opts.log)
            (*opts.log) << "it=" << it << " mu=" << mu << " relgap=" << relgap
                        << " pinf=" << pinf << " dinf=" << dinf << " obj=" << D << '\n';

        if (relgap <= opts.gap_tol && lmin_replay >= -opts.feas_tol && dinf <= 1e-7) {
            res.status = SdpStatus::Optimal;
            res.y = y; res.X = X; res.obj = D; res.primal_obj = P; res.gap = relgap;
            return res;
        }
        if (D > opts.unbounded_cap && lmin_replay >= -1e-6 * scale) {
            res.status = SdpStatus::Unbounded;
            res.y = y; res.X = X; res.obj = D; res.gap = relgap;
            res.message = "objective exceeded cap with feasible iterate";
            return res;
        }
        if (D < -1e13) {
            res.status = SdpStatus::NumericalTrouble;
            res.message = "objective diverging below";
            break;
        }

        Eigen::LLT<Eigen::MatrixXd> lltX(X), lltS(S);
        if (lltX.info() != Eigen::Success || lltS.info() != Eigen::Success) {
            if (++rescues <= 5) {
                clamp_pd(X);
                clamp_pd(S);
                lltX.compute(X);
                lltS.compute(S);
            }
            if (lltX.info() != Eigen::Success || lltS.info() != Eigen::Success) {
                res.status = SdpStatus::NumericalTrouble;
                res.message = "iterate lost positive definiteness";
                break;
            }
        }
        Eigen::MatrixXd L1 = lltX.matrixL();
        Eigen::MatrixXd L2 = lltS.matrixL();

        // Nesterov-Todd scaling point W = G G' with W S W = X.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(L2.transpose() * L1,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd sig = svd.singularValues();
        if (sig.minCoeff() < 1e-150) {
            res.status = SdpStatus::NumericalTrouble;
            res.message = "scaling breakdown";
            break;
        }
        Eigen::MatrixXd G = L1 * svd.matrixV() * sig.cwiseSqrt().cwiseInverse().asDiagonal();
        Eigen::MatrixXd Ginv = sig.cwiseSqrt().asDiagonal() * svd.matrixV().transpose()
                             * L1.triangularView<Eigen::Lower>().solve(
                                   Eigen::MatrixXd::Identity(d, d));
        Eigen::MatrixXd W = G * G.transpose();

        // Schur complement M_ij = <Fi, W Fj W>.
        std::vector<Eigen::MatrixXd> WFW(k);
        for (int j = 0; j < k; ++j) WFW[j] = W * e.Fi[j] * W;
        Eigen::MatrixXd Schur(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j <= i; ++j)
                Schur(i, j) = Schur(j, i) = inner(e.Fi[i], WFW[j]);
        Eigen::LDLT<Eigen::MatrixXd> schur_fac(
            Schur + 1e-14 * (Schur.trace() / k + 1.0) * Eigen::MatrixXd::Identity(k, k));
        if (schur_fac.info() != Eigen::Success) {
            res.status = SdpStatus::NumericalTrouble;
            res.message = "Schur factorization failed";
            break;
        }

        Eigen::ArrayXXd Ksum(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) Ksum(i, j) = sig[i] + sig[j];

        struct Direction { Eigen::VectorXd dy; Eigen::MatrixXd dX, dS; };
        auto newton = [&](const Eigen::MatrixXd& Rc) -> Direction {
            Eigen::MatrixXd T = (2.0 * Rc.array() / Ksum).matrix();
            Eigen::MatrixXd GTGt = G * T * G.transpose();
            Eigen::MatrixXd WRpW = W * Rp * W;
            Eigen::VectorXd rhs(k);
            for (int i = 0; i < k; ++i) rhs[i] = inner(e.Fi[i], GTGt - WRpW) - rd[i];
            Direction dir;
            dir.dy = schur_fac.solve(rhs);
            dir.dS = Rp;
            for (int i = 0; i < k; ++i) dir.dS += dir.dy[i] * e.Fi[i];
            dir.dX = GTGt - W * dir.dS * W;
            dir.dX = (0.5 * (dir.dX + dir.dX.transpose())).eval();
            dir.dS = (0.5 * (dir.dS + dir.dS.transpose())).eval();
            return dir;
        };

        // predictor
        Eigen::MatrixXd Lam2 = sig.cwiseAbs2().asDiagonal();
        Direction aff = newton(-Lam2);
        double ap = std::min(1.0, opts.step_fraction * max_step(lltX, aff.dX));
        double ad = std::min(1.0, opts.step_fraction * max_step(lltS, aff.dS));
        const double mu_aff =
            inner(X + ap * aff.dX, S + ad * aff.dS) / d;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::min(1.0, std::max(1e-10, sigma));
        // keep the barrier from outrunning infeasibility: complementarity must
        // not collapse while the residuals are still large
        if ((pinf + dinf) * scale > 1e3 * mu) sigma = std::max(sigma, 0.5);

        // corrector
        Eigen::MatrixXd dXt = Ginv * aff.dX * Ginv.transpose();
        Eigen::MatrixXd dSt = G.transpose() * aff.dS * G;
        Eigen::MatrixXd H = 0.5 * (dXt * dSt + dSt * dXt);
        Eigen::MatrixXd Rc =
            sigma * mu * Eigen::MatrixXd::Identity(d, d) - Lam2 - H;
        Direction dir = newton(Rc);
        ap = std::min(1.0, opts.step_fraction * max_step(lltX, dir.dX));
        ad = std::min(1.0, opts.step_fraction * max_step(lltS, dir.dS));
        if (opts.log) (*opts.log) << "    steps ap=" << ap << " ad=" << ad << '\n';
        if (std::min(ap, ad) < 1e-10) {
            res.status = SdpStatus::NumericalTrouble;
            res.message = "step length collapsed";
            break;
        }
        X += ap * dir.dX;
        y += ad * dir.dy;
        S += ad * dir.dS;
    }
    res.y = y; res.X = X;
    res.obj = e.c.dot(y);
    res.primal_obj = inner(e.F0, X);
    res.gap = relgap;
    return res;
}

// max t s.t. F0 + sum y_i Fi - t I >= 0, |y_i| <= box, t <= 1 + 2||F0||.
// Strictly feasible and bounded by construction, so it converges reliably
// and its optimal t classifies feasibility of the original constraint set.
double phase1_value(const DenseLmi& e, const SolverOptions& opts, SdpStatus* status_out) {
    const int k = static_cast<int>(e.c.size());
    const int d0 = static_cast<int>(e.F0.rows());
    const int d = d0 + 2 * k + 1;
    const double box = opts.phase1_box;
    const double tcap = 1.0 + 2.0 * e.F0.norm();

    DenseLmi ph;
    ph.c = Eigen::VectorXd::Zero(k + 1);
    ph.c[0] = 1.0;
    ph.F0 = Eigen::MatrixXd::Zero(d, d);
    ph.F0.topLeftCorner(d0, d0) = e.F0;
    for (int i = 0; i < 2 * k; ++i) ph.F0(d0 + i, d0 + i) = box;
    ph.F0(d - 1, d - 1) = tcap;

    Eigen::MatrixXd Ft = Eigen::MatrixXd::Zero(d, d);
    Ft.topLeftCorner(d0, d0) = -Eigen::MatrixXd::Identity(d0, d0);
    Ft(d - 1, d - 1) = -1.0;
    ph.Fi.push_back(std::move(Ft));
    for (int i = 0; i < k; ++i) {
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d);
        F.topLeftCorner(d0, d0) = e.Fi[i];
        F(d0 + 2 * i, d0 + 2 * i) = -1.0;
        F(d0 + 2 * i + 1, d0 + 2 * i + 1) = 1.0;
        ph.Fi.push_back(std::move(F));
    }

    SolverOptions ph_opts = opts;
    ph_opts.log = nullptr;
    ph_opts.gap_tol = std::max(opts.gap_tol, 1e-9);
    CoreResult r = solve_core(ph, ph_opts);
    if (status_out) *status_out = r.status;
    return r.obj;
}

} // namespace

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "Optimal";
        case SdpStatus::Infeasible: return "Infeasible";
        case SdpStatus::Unbounded: return "Unbounded";
        case SdpStatus::MaxIterations: return "MaxIterations";
        case SdpStatus::NumericalTrouble: return "NumericalTrouble";
    }
    return "?";
}

void LmiProblem::validate() const {
    if (num_vars() < 1) throw std::invalid_argument("LmiProblem: at least one variable required");
    if (static_cast<int>(Fi.size()) != num_vars())
        throw std::invalid_argument("LmiProblem: c and Fi count differ");
    const int d = F0.dim();
    for (const auto& F : Fi)
        if (F.dim() != d) throw std::invalid_argument("LmiProblem: matrix dimension mismatch");
    for (int j : nonneg)
        if (j < 0 || j >= num_vars())
            throw std::invalid_argument("LmiProblem: nonneg index out of range");
    if (!block_dims.empty()) {
        int sum = 0;
        for (int b : block_dims) {
            if (b < 1) throw std::invalid_argument("LmiProblem: block dims must be positive");
            sum += b;
        }
        if (sum != d) throw std::invalid_argument("LmiProblem: block dims must sum to dim");
    }
}

SdpSolution solve_lmi(const LmiProblem& p, const SolverOptions& opts) {
    p.validate();
    DenseLmi e = extend(p);
    CoreResult r = solve_core(e, opts);
    if (r.status != SdpStatus::Optimal && r.status != SdpStatus::Unbounded) {
        // a wider starting box often clears stalls of the infeasible start
        CoreResult retry = solve_core(e, opts, 30.0);
        if (retry.status == SdpStatus::Optimal || retry.status == SdpStatus::Unbounded)
            r = std::move(retry);
    }

    SdpSolution sol;
    sol.iterations = r.iterations;
    sol.message = r.message;
    sol.y = r.y;
    sol.objective_value = r.obj;
    sol.primal_objective = r.primal_obj;
    sol.gap = r.gap;
    if (r.X.size() > 0) {
        const int d0 = p.dim();
        sol.dual_X = linalg::SymmetricMatrix::from_dense(r.X.topLeftCorner(d0, d0));
    }
    {
        Eigen::MatrixXd Sy = p.F0.dense();
        for (int i = 0; i < p.num_vars(); ++i) Sy += r.y[i] * p.Fi[i].dense();
        sol.min_eig_slack = linalg::min_eigenvalue(Sy);
    }
    sol.status = r.status;

    if (r.status == SdpStatus::Optimal || r.status == SdpStatus::Unbounded) return sol;

    // Main loop failed to certify anything; classify with the phase-I bound.
    SdpStatus ph_status;
    const double t_star = phase1_value(e, opts, &ph_status);
    const double scale = std::max(1.0, e.F0.norm());
    if (t_star < -1e-7 * scale) {
        sol.status = SdpStatus::Infeasible;
        sol.message = "phase-I slack bound " + std::to_string(t_star);
    } else if (r.status == SdpStatus::MaxIterations) {
        sol.status = SdpStatus::MaxIterations;
    } else {
        sol.status = SdpStatus::NumericalTrouble;
        if (sol.message.empty()) sol.message = "unclassified breakdown";
    }
    return sol;
}

FeasibilityCheck check_feasibility(const LmiProblem& p, const Eigen::VectorXd& fixed_y,
                                   double feas_tol) {
    p.validate();
    if (fixed_y.size() != p.num_vars())
        throw std::invalid_argument("check_feasibility: y dimension mismatch");
    Eigen::MatrixXd Sy = p.F0.dense();
    for (int i = 0; i < p.num_vars(); ++i) Sy += fixed_y[i] * p.Fi[i].dense();
    FeasibilityCheck out;
    out.min_eig = linalg::min_eigenvalue(Sy);
    out.feasible = out.min_eig >= -feas_tol;
    for (int j : p.nonneg)
        if (fixed_y[j] < -feas_tol) out.feasible = false;
    return out;
}

} // namespace jnr::sdp
