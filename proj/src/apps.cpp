#include "jnr/apps.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jnr::apps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using core::QuadraticFunction;

QuadraticFunction reduce_through_hyperplane(const QuadraticFunction& q,
                                            const linalg::NullspaceBasis& ns) {
    // q restricted to y = y0 + V w as a quadratic in w
    const Eigen::MatrixXd A = ns.V.transpose() * q.A() * ns.V;
    const Eigen::VectorXd a = ns.V.transpose() * (2.0 * q.A() * ns.y0 + q.a());
    const double a0 = ns.y0.dot(q.A() * ns.y0) + q.a().dot(ns.y0) + q.a0();
    return QuadraticFunction(A, a, a0);
}

// Unconstrained min of a quadratic; -inf when unbounded below.
double unconstrained_min(const QuadraticFunction& q) {
    linalg::EigenDecomposition ed = linalg::sym_eig(q.A());
    const double scale = std::max(1.0, ed.values.cwiseAbs().maxCoeff());
    Eigen::VectorXd proj = ed.vectors.transpose() * q.a();
    double value = q.a0();
    for (int i = 0; i < ed.values.size(); ++i) {
        if (ed.values[i] < -1e-12 * scale) return -kInf;
        if (std::abs(ed.values[i]) <= 1e-12 * scale) {
            if (std::abs(proj[i]) > 1e-10) return -kInf;  // linear term along a null direction
        } else {
            value -= proj[i] * proj[i] / (4.0 * ed.values[i]);
        }
    }
    return value;
}

// Feasible point of {con(x) = 0, obj(x) <= tol}: first the plain minimizer of
// obj on the quadric, then a ridge path obj + lambda |x|^2 when that infimum
// is unattained or out of reach.
std::optional<Eigen::VectorXd> feasible_on_quadric(const QuadraticFunction& obj,
                                                   const QuadraticFunction& con, double tol,
                                                   const sdp::SolverOptions& sdp_opts) {
    subsolvers::QpResult direct = subsolvers::solve_qp1eqc(obj, con, sdp_opts);
    if (direct.status == subsolvers::SubStatus::Optimal && direct.x && obj(*direct.x) <= tol)
        return direct.x;
    if (direct.status == subsolvers::SubStatus::Optimal && direct.value > tol)
        return std::nullopt;  // certified infeasible

    const int n = obj.dim();
    for (double lambda : {1e3, 1e2, 1e1, 1.0, 1e-1, 1e-2, 1e-3, 1e-4}) {
        QuadraticFunction ridge(obj.A() + lambda * Eigen::MatrixXd::Identity(n, n), obj.a(),
                                obj.a0());
        subsolvers::QpResult r = subsolvers::solve_qp1eqc(ridge, con, sdp_opts);
        if (r.status == subsolvers::SubStatus::Optimal && r.x && obj(*r.x) <= tol &&
            std::abs(con(*r.x)) <= 1e-6)
            return r.x;
    }
    return std::nullopt;
}

} // namespace

const char* to_string(QsicCase c) {
    switch (c) {
        case QsicCase::Independent: return "Independent";
        case QsicCase::Dependent: return "Dependent";
        case QsicCase::BothZero: return "BothZero";
    }
    return "?";
}

const char* to_string(AqpCase c) {
    switch (c) {
        case AqpCase::Case1Zero: return "Case1_zero";
        case AqpCase::Case1PositiveRight: return "Case1_positive_right";
        case AqpCase::Case1PositiveLeft: return "Case1_positive_left";
        case AqpCase::Case2Kkt: return "Case2_KKT";
    }
    return "?";
}

const char* to_string(KktBranch b) {
    switch (b) {
        case KktBranch::MuPositive: return "MuPositive";
        case KktBranch::BothZero: return "BothZero";
        case KktBranch::Lambda1Only: return "Lambda1Only";
    }
    return "?";
}

const char* to_string(AqpStatus s) {
    switch (s) {
        case AqpStatus::Optimal: return "Optimal";
        case AqpStatus::Infeasible: return "Infeasible";
        case AqpStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

QsicResult solve_qsic(const core::QuadraticFunction& f_in, const core::QuadraticFunction& g_in,
                      double rho, const QsicOptions& opts) {
    if (f_in.dim() != g_in.dim())
        throw std::invalid_argument("solve_qsic: f and g dimensions differ");
    if (rho <= 0.0) throw std::invalid_argument("solve_qsic: rho must be positive");

    QsicResult res;
    res.rho_used = rho;
    linalg::DependenceResult dep = linalg::linear_dependence(f_in.A(), g_in.A());

    // objective f^2 + g^2 is symmetric; put the nonzero matrix first
    const bool swap = dep.swapped;
    const core::QuadraticFunction& f = swap ? g_in : f_in;
    const core::QuadraticFunction& g = swap ? f_in : g_in;
    const double t_star = swap ? 0.0 : dep.t_star;
    const int n = f.dim();

    switch (dep.kind) {
        case linalg::DependenceKind::Independent: {
            res.case_ = QsicCase::Independent;
            core::CompositeProblem p(f, g, core::RangeObjective::sum_of_squares());
            recovery::FullSolveOptions fopts = opts.full;
            fopts.sdp = opts.sdp;
            recovery::FullSolveResult full = recovery::solve_po4_full(p, opts.epsilon, fopts);
            if (full.status != sprocedure::ValueStatus::Optimal) {
                res.message = "value stage: " + std::string(sprocedure::to_string(full.status));
                return res;
            }
            res.value = std::max(0.0, full.value);
            res.value_reliable = true;
            if (full.x_bar) res.x = full.x_bar;
            else res.message = "solution recovery failed at stage: " + full.stage;
            break;
        }
        case linalg::DependenceKind::Dependent: {
            res.case_ = QsicCase::Dependent;
            // eliminate the quadratic part of g, then drop the resulting
            // affine constraint through its nullspace
            Eigen::VectorXd h(n + 2);
            h.head(n) = g.a() - t_star * f.a();
            h[n] = t_star;
            h[n + 1] = -1.0;
            const double h0 = g.a0() - t_star * f.a0();
            linalg::NullspaceBasis ns = linalg::nullspace_basis(h, h0);

            Eigen::MatrixXd Abar = Eigen::MatrixXd::Zero(n + 2, n + 2);
            Abar(n, n) = Abar(n + 1, n + 1) = 1.0;
            QuadraticFunction lifted_obj(Abar, Eigen::VectorXd::Zero(n + 2), 0.0);

            Eigen::MatrixXd Pbar = Eigen::MatrixXd::Zero(n + 2, n + 2);
            Pbar.topLeftCorner(n, n) = f.A();
            Eigen::VectorXd pbar = Eigen::VectorXd::Zero(n + 2);
            pbar.head(n) = f.a();
            pbar[n] = -1.0;
            QuadraticFunction lifted_con(Pbar, pbar, f.a0());

            subsolvers::QpResult qr = subsolvers::solve_qp1eqc(
                reduce_through_hyperplane(lifted_obj, ns), reduce_through_hyperplane(lifted_con, ns),
                opts.sdp);
            if (qr.status != subsolvers::SubStatus::Optimal) {
                res.message = "reduced subproblem: " + std::string(subsolvers::to_string(qr.status));
                if (qr.status == subsolvers::SubStatus::Unbounded) res.value = 0.0;
                return res;
            }
            res.value = std::max(0.0, qr.value);
            res.value_reliable = true;
            if (qr.x) {
                Eigen::VectorXd y = ns.y0 + ns.V * (*qr.x);
                res.x = y.head(n).eval();
            }
            break;
        }
        case linalg::DependenceKind::BothZero: {
            res.case_ = QsicCase::BothZero;
            // both surfaces are affine: least-squares closed form
            Eigen::MatrixXd Gm = f.a() * f.a().transpose() + g.a() * g.a().transpose();
            Eigen::VectorXd rhs = -(f.a0() * f.a() + g.a0() * g.a());
            Eigen::VectorXd x = Gm.completeOrthogonalDecomposition().solve(rhs);
            res.value = f(x) * f(x) + g(x) * g(x);
            res.value_reliable = true;
            res.x = x;
            break;
        }
    }

    res.intersects = res.value_reliable && res.value < rho;
    return res;
}

KktLinearSolutions kkt_linear_branch(const core::QuadraticFunction& f,
                                     const core::QuadraticFunction& g, double t_star) {
    const int n = f.dim();
    KktLinearSolutions out;

    linalg::EigenDecomposition ed = linalg::sym_eig(f.A());
    const double scale = std::max(1.0, ed.values.cwiseAbs().maxCoeff());
    Eigen::VectorXd proj = ed.vectors.transpose() * f.a();
    Eigen::VectorXd xp = Eigen::VectorXd::Zero(n);
    int null_dim = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(ed.values[i]) <= 1e-10 * scale) {
            ++null_dim;
            if (std::abs(proj[i]) > 1e-9 * (1.0 + f.a().norm())) return out;  // inconsistent
        } else {
            xp -= proj[i] / (2.0 * ed.values[i]) * ed.vectors.col(i);
        }
    }
    if ((2.0 * f.A() * xp + f.a()).norm() > 1e-9 * (1.0 + f.a().norm())) return out;
    out.consistent = true;
    out.x_particular = xp;
    out.null_basis.resize(n, null_dim);
    for (int i = 0, c = 0; i < n; ++i)
        if (std::abs(ed.values[i]) <= 1e-10 * scale) out.null_basis.col(c++) = ed.vectors.col(i);

    // z1 = p.x/2 + p0 is constant over the family: p lies in range(P)
    out.z1 = 0.5 * f.a().dot(xp) + f.a0();
    out.lambda1 = 2.0 * out.z1;

    const Eigen::VectorXd lin = g.a() - t_star * f.a();
    const double lin0 = g.a0() - t_star * f.a0() + t_star * out.z1;
    auto ineq = [&](const Eigen::VectorXd& x) { return lin.dot(x) + lin0; };

    if (std::abs(out.lambda1) <= 1e-10) return out;  // lambda1 must be nonzero on this branch

    if (ineq(xp) <= 1e-9) {
        out.inequality_feasible = true;
        out.x_example = xp;
        return out;
    }
    if (null_dim > 0) {
        Eigen::VectorXd dir = out.null_basis.transpose() * lin;
        if (dir.norm() > 1e-12) {
            // walk along the family to the constraint boundary
            Eigen::VectorXd w = -(ineq(xp) / dir.squaredNorm()) * dir;
            Eigen::VectorXd x = xp + out.null_basis * w;
            if (ineq(x) <= 1e-7) {
                out.inequality_feasible = true;
                out.x_example = x;
            }
        }
    }
    return out;
}

namespace {

struct BranchCandidate {
    bool valid = false;
    double z1 = 0.0;
    Eigen::VectorXd x;
    double lambda1 = 0.0, lambda2 = 0.0;
};

// branch (i): active eliminated constraint, lambda2 > 0 required
BranchCandidate branch_mu_positive(const QuadraticFunction& f, const QuadraticFunction& g,
                                   double t_star, BranchOutcome& audit,
                                   const sdp::SolverOptions& sdp_opts) {
    BranchCandidate cand;
    audit.evaluated = true;
    const int n = f.dim();

    Eigen::VectorXd h(n + 1);
    h.head(n) = g.a() - t_star * f.a();
    h[n] = t_star;
    const double h0 = g.a0() - t_star * f.a0();

    Eigen::MatrixXd Aobj = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Aobj(n, n) = 1.0;
    QuadraticFunction lifted_obj(Aobj, Eigen::VectorXd::Zero(n + 1), 0.0);
    Eigen::MatrixXd Pb = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Pb.topLeftCorner(n, n) = f.A();
    Eigen::VectorXd pb(n + 1);
    pb.head(n) = f.a();
    pb[n] = -1.0;
    QuadraticFunction lifted_con(Pb, pb, f.a0());

    Eigen::MatrixXd back_V = Eigen::MatrixXd::Identity(n + 1, n + 1);
    Eigen::VectorXd back_y0 = Eigen::VectorXd::Zero(n + 1);
    std::optional<QuadraticFunction> red_obj, red_con;
    if (h.norm() <= 1e-12) {
        if (std::abs(h0) > 1e-10) {
            audit.note = "active constraint is a nonzero constant: branch empty";
            return cand;
        }
        // the eliminated row holds identically: no reduction needed
        red_obj = lifted_obj;
        red_con = lifted_con;
    } else {
        linalg::NullspaceBasis ns = linalg::nullspace_basis(h, h0);
        red_obj = reduce_through_hyperplane(lifted_obj, ns);
        red_con = reduce_through_hyperplane(lifted_con, ns);
        back_V = ns.V;
        back_y0 = ns.y0;
    }

    subsolvers::QpResult qr = subsolvers::solve_qp1eqc(*red_obj, *red_con, sdp_opts);
    if (qr.status != subsolvers::SubStatus::Optimal || !qr.x) {
        audit.note = "equality subproblem: " + std::string(subsolvers::to_string(qr.status));
        return cand;
    }
    Eigen::VectorXd y = back_y0 + back_V * (*qr.x);
    Eigen::VectorXd x = y.head(n);
    const double z1 = y[n];
    audit.z1 = z1;
    audit.x = x;

    // recover (lambda1, lambda2) from stationarity and check lambda2 > 0
    Eigen::MatrixXd Asys(n + 1, 2);
    Eigen::VectorXd bsys(n + 1);
    Asys(0, 0) = 1.0;
    Asys(0, 1) = -t_star;
    bsys[0] = 2.0 * z1;
    Asys.block(1, 0, n, 1) = 2.0 * f.A() * x + f.a();
    Asys.block(1, 1, n, 1) = g.a() - t_star * f.a();
    bsys.tail(n).setZero();
    Eigen::Vector2d lam = Asys.completeOrthogonalDecomposition().solve(bsys);
    const double resid = (Asys * lam - bsys).norm();
    if (resid > 1e-6 * (1.0 + bsys.norm())) {
        audit.note = "multiplier check failed: stationarity residual " + std::to_string(resid);
        return cand;
    }
    if (lam[1] <= 1e-9) {
        audit.note = "multiplier check failed: lambda2 = " + std::to_string(lam[1]) +
                     " not positive";
        return cand;
    }
    cand.valid = audit.accepted = true;
    cand.z1 = z1;
    cand.x = x;
    cand.lambda1 = lam[0];
    cand.lambda2 = lam[1];
    audit.note = "accepted";
    return cand;
}

// branch (ii): lambda1 = lambda2 = 0, so z1 = 0; decide feasibility of
// {f = 0, eliminated inequality} by minimizing the affine part on the quadric
BranchCandidate branch_both_zero(const QuadraticFunction& f, const QuadraticFunction& g,
                                 double t_star, BranchOutcome& audit,
                                 const sdp::SolverOptions& sdp_opts) {
    BranchCandidate cand;
    audit.evaluated = true;
    const int n = f.dim();
    const Eigen::VectorXd lin = g.a() - t_star * f.a();
    const double lin0 = g.a0() - t_star * f.a0();
    QuadraticFunction affine(Eigen::MatrixXd::Zero(n, n), lin, lin0);

    std::optional<Eigen::VectorXd> x = feasible_on_quadric(affine, f, 1e-9, sdp_opts);
    if (!x) {
        audit.note = "system {f = 0, inequality} infeasible";
        return cand;
    }
    cand.valid = audit.accepted = true;
    cand.z1 = 0.0;
    cand.x = *x;
    audit.z1 = 0.0;
    audit.x = *x;
    audit.note = "accepted (z1 = 0)";
    return cand;
}

// branch (iii): lambda1 != 0, lambda2 = 0 through the linear system
BranchCandidate branch_lambda1_only(const QuadraticFunction& f, const QuadraticFunction& g,
                                    double t_star, BranchOutcome& audit) {
    BranchCandidate cand;
    audit.evaluated = true;
    KktLinearSolutions lin = kkt_linear_branch(f, g, t_star);
    if (!lin.consistent) {
        audit.note = "2Px + p = 0 inconsistent";
        return cand;
    }
    audit.z1 = lin.z1;
    if (std::abs(lin.lambda1) <= 1e-10) {
        audit.note = "lambda1 vanishes: branch empty";
        return cand;
    }
    if (!lin.inequality_feasible || !lin.x_example) {
        audit.note = "stationary family violates the inequality";
        return cand;
    }
    cand.valid = audit.accepted = true;
    cand.z1 = lin.z1;
    cand.x = *lin.x_example;
    cand.lambda1 = lin.lambda1;
    audit.x = cand.x;
    audit.note = "accepted";
    return cand;
}

// Swapped dependent case (P = 0, Q != 0): minimize |affine| over the
// quadratic constraint, same three-branch enumeration with f affine.
AqpResult solve_aqp_affine_objective(const QuadraticFunction& f, const QuadraticFunction& g,
                                     const AqpOptions& opts) {
    AqpResult res;
    res.case_ = AqpCase::Case2Kkt;
    const int n = f.dim();
    const Eigen::VectorXd& pvec = f.a();

    // (i) lambda2 > 0: g active; minimize f^2 on {g = 0}
    {
        BranchOutcome& audit = res.branches[0];
        audit.evaluated = true;
        QuadraticFunction fsq(pvec * pvec.transpose(), 2.0 * f.a0() * pvec,
                              f.a0() * f.a0());
        subsolvers::QpResult qr = subsolvers::solve_qp1eqc(fsq, g, opts.sdp);
        if (qr.status == subsolvers::SubStatus::Optimal && qr.x) {
            const Eigen::VectorXd& x = *qr.x;
            const double z1 = f(x);
            audit.z1 = z1;
            audit.x = x;
            Eigen::VectorXd grad_g = g.gradient(x);
            // 2 z1 p + lambda2 grad_g = 0 in least squares
            const double denom = grad_g.squaredNorm();
            if (denom > 1e-14) {
                const double lambda2 = -2.0 * z1 * pvec.dot(grad_g) / denom;
                const double resid = (2.0 * z1 * pvec + lambda2 * grad_g).norm();
                if (lambda2 > 1e-9 && resid <= 1e-6 * (1.0 + std::abs(z1))) {
                    audit.accepted = true;
                    audit.note = "accepted";
                } else {
                    audit.note = "multiplier check failed";
                }
            } else {
                audit.note = "degenerate constraint gradient";
            }
        } else {
            audit.note = "equality subproblem: " + std::string(subsolvers::to_string(qr.status));
        }
    }
    // (ii) lambda1 = lambda2 = 0: feasibility of {f = 0, g <= 0}
    {
        BranchOutcome& audit = res.branches[1];
        audit.evaluated = true;
        if (pvec.norm() <= 1e-14) {
            audit.note = std::abs(f.a0()) <= opts.zero_tol
                             ? "f identically zero"
                             : "f is a nonzero constant: branch empty";
            if (std::abs(f.a0()) <= opts.zero_tol) audit.accepted = true;
        } else {
            QuadraticFunction fq(Eigen::MatrixXd::Zero(n, n), pvec, f.a0());
            std::optional<Eigen::VectorXd> x = feasible_on_quadric(g, fq, 1e-9, opts.sdp);
            if (x) {
                audit.accepted = true;
                audit.z1 = 0.0;
                audit.x = *x;
                audit.note = "accepted (z1 = 0)";
            } else {
                audit.note = "system {f = 0, g <= 0} infeasible";
            }
        }
    }
    // (iii) lambda1 != 0, lambda2 = 0 forces p = 0
    {
        BranchOutcome& audit = res.branches[2];
        audit.evaluated = true;
        if (pvec.norm() > 1e-12) {
            audit.note = "stationarity forces p = 0: branch empty";
        } else if (std::abs(f.a0()) > 1e-12) {
            const double gmin = unconstrained_min(g);
            if (gmin <= 1e-9) {
                audit.accepted = true;
                audit.z1 = f.a0();
                audit.note = "constant objective on a feasible set";
            } else {
                audit.note = "constraint set empty";
            }
        } else {
            audit.note = "lambda1 vanishes: branch empty";
        }
    }

    // merge by smallest z1^2
    int best = -1;
    for (int i = 0; i < 3; ++i) {
        if (!res.branches[i].accepted) continue;
        if (best < 0 || res.branches[i].z1 * res.branches[i].z1 <
                            res.branches[best].z1 * res.branches[best].z1)
            best = i;
    }
    if (best < 0) {
        const double gmin = unconstrained_min(g);
        if (gmin > 1e-9) {
            res.status = AqpStatus::Infeasible;
            res.message = "constraint set is empty";
        } else {
            res.status = AqpStatus::Inconclusive;
            res.message = "no KKT-qualified branch validated";
        }
        return res;
    }
    res.status = AqpStatus::Optimal;
    res.kkt_branch = static_cast<KktBranch>(best);
    res.value = std::abs(res.branches[best].z1);
    res.x = res.branches[best].x;
    return res;
}

} // namespace

AqpResult solve_aqp(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                    const AqpOptions& opts) {
    if (f.dim() != g.dim())
        throw std::invalid_argument("solve_aqp: f and g dimensions differ");
    AqpResult res;
    linalg::DependenceResult dep = linalg::linear_dependence(f.A(), g.A());

    if (dep.kind == linalg::DependenceKind::Independent) {
        // gamma* = inf z1^2 over the range with z2 <= 0
        core::CompositeProblem p(f, g, core::RangeObjective(1, 0, 0, 0, 0),
                                 Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1),
                                 Eigen::VectorXd::Zero(1));
        sprocedure::ValueResult vr = sprocedure::solve_value(p, opts.sdp);
        if (vr.status == sprocedure::ValueStatus::Infeasible) {
            res.status = AqpStatus::Infeasible;
            res.message = "constraint set is empty";
            return res;
        }
        if (vr.status != sprocedure::ValueStatus::Optimal) {
            res.status = AqpStatus::Inconclusive;
            res.message = "value stage: " + std::string(sprocedure::to_string(vr.status));
            return res;
        }
        const double gamma_star = std::max(0.0, vr.value);
        if (gamma_star <= opts.zero_tol) {
            res.case_ = AqpCase::Case1Zero;
            res.value = 0.0;
            std::optional<Eigen::VectorXd> x = feasible_on_quadric(g, f, 1e-9, opts.sdp);
            if (x) {
                res.status = AqpStatus::Optimal;
                res.x = *x;
            } else {
                res.status = AqpStatus::Inconclusive;
                res.message = "optimal value 0 but no witness found (possibly unattained)";
            }
            return res;
        }
        const double root = std::sqrt(gamma_star);
        subsolvers::QpResult right = subsolvers::solve_qp1qc(f, g, opts.sdp);
        if (right.status == subsolvers::SubStatus::Optimal &&
            right.value >= root - opts.zero_tol * (1.0 + root)) {
            res.case_ = AqpCase::Case1PositiveRight;
            res.status = AqpStatus::Optimal;
            res.value = root;
            res.x = right.x;
            return res;
        }
        QuadraticFunction neg_f(-f.A(), -f.a(), -f.a0());
        subsolvers::QpResult left = subsolvers::solve_qp1qc(neg_f, g, opts.sdp);
        if (left.status == subsolvers::SubStatus::Optimal && left.x) {
            res.case_ = AqpCase::Case1PositiveLeft;
            res.status = AqpStatus::Optimal;
            res.value = root;
            res.x = left.x;
            return res;
        }
        res.status = AqpStatus::Inconclusive;
        res.case_ = AqpCase::Case1Zero;
        res.value = root;
        res.message = "side decision failed: " + std::string(subsolvers::to_string(right.status)) +
                      " / " + std::string(subsolvers::to_string(left.status));
        return res;
    }

    // dependent case
    res.case_ = AqpCase::Case2Kkt;
    if (dep.kind == linalg::DependenceKind::BothZero && f.A().norm() == 0.0 &&
        g.A().norm() == 0.0) {
        return solve_aqp_affine_objective(f, g, opts);
    }
    if (dep.swapped) {
        // P = 0, Q != 0: same enumeration with an affine objective
        return solve_aqp_affine_objective(f, g, opts);
    }

    const double t_star = dep.t_star;
    // quick feasibility screen of {g <= 0}
    if (unconstrained_min(g) > 1e-9) {
        res.status = AqpStatus::Infeasible;
        res.message = "constraint set is empty";
        return res;
    }

    BranchCandidate c1 = branch_mu_positive(f, g, t_star, res.branches[0], opts.sdp);
    BranchCandidate c2 = branch_both_zero(f, g, t_star, res.branches[1], opts.sdp);
    BranchCandidate c3 = branch_lambda1_only(f, g, t_star, res.branches[2]);

    const BranchCandidate* cands[3] = {&c1, &c2, &c3};
    int best = -1;
    for (int i = 0; i < 3; ++i) {
        if (!cands[i]->valid) continue;
        if (best < 0 || cands[i]->z1 * cands[i]->z1 < cands[best]->z1 * cands[best]->z1) best = i;
    }
    if (best < 0) {
        res.status = AqpStatus::Inconclusive;
        res.message = "no KKT-qualified branch validated (minimizer may be unattained)";
        return res;
    }
    res.status = AqpStatus::Optimal;
    res.kkt_branch = static_cast<KktBranch>(best);
    res.value = std::abs(cands[best]->z1);
    res.x = cands[best]->x;
    res.lambda1 = cands[best]->lambda1;
    res.lambda2 = cands[best]->lambda2;
    return res;
}

} // namespace jnr::apps
