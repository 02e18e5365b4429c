#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "jnr/sdp.hpp"
#include "jnr/sprocedure.hpp"

using namespace jnr;
using namespace jnr::sdp;
using linalg::SymmetricMatrix;

namespace {

LmiProblem eye_bound_problem() {
    // max g s.t. (1 - g) I >= 0
    LmiProblem p;
    p.c = Eigen::VectorXd::Ones(1);
    p.F0 = SymmetricMatrix::from_dense(Eigen::Matrix2d::Identity());
    p.Fi = {SymmetricMatrix::from_dense(-Eigen::Matrix2d::Identity())};
    return p;
}

// brute maximum of c.y over the PSD region inside the given box
double grid_pass(const LmiProblem& p, Eigen::VectorXd& lo, Eigen::VectorXd& hi, int steps) {
    const int k = p.num_vars();
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_y = Eigen::VectorXd::Zero(k);
    std::vector<int> idx(k, 0);
    const long long total = static_cast<long long>(std::pow(steps, k));
    for (long long t = 0; t < total; ++t) {
        long long rem = t;
        Eigen::VectorXd y(k);
        bool ok = true;
        for (int i = 0; i < k; ++i) {
            idx[i] = static_cast<int>(rem % steps);
            rem /= steps;
            y[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (steps - 1.0);
        }
        for (int j : p.nonneg)
            if (y[j] < 0) { ok = false; break; }
        if (!ok) continue;
        Eigen::MatrixXd S = p.F0.dense();
        for (int i = 0; i < k; ++i) S += y[i] * p.Fi[i].dense();
        if (linalg::min_eigenvalue(S) < -1e-9) continue;
        if (p.c.dot(y) > best) {
            best = p.c.dot(y);
            best_y = y;
        }
    }
    if (std::isfinite(best)) {
        const Eigen::VectorXd width = (hi - lo) / (steps - 1.0);
        lo = best_y - 2.0 * width;
        hi = best_y + 2.0 * width;
    }
    return best;
}

double grid_optimum(const LmiProblem& p, double bound, int steps, int stages = 5) {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(p.num_vars(), -bound);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(p.num_vars(), bound);
    double best = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < stages; ++s) {
        const double v = grid_pass(p, lo, hi, steps);
        if (!std::isfinite(v)) break;
        best = v;
    }
    return best;
}

// bounded random instance: strictly feasible at y = 0, every matrix negative
// definite so large y always hurts
LmiProblem bounded_random_lmi(std::mt19937& rng, int k, int d) {
    LmiProblem p;
    p.c = testutil::random_vector(rng, k).cwiseAbs() + Eigen::VectorXd::Constant(k, 0.1);
    Eigen::MatrixXd G = testutil::random_symmetric(rng, d);
    p.F0 = SymmetricMatrix::from_dense(G * G.transpose() +
                                       0.4 * Eigen::MatrixXd::Identity(d, d));
    for (int i = 0; i < k; ++i) {
        Eigen::MatrixXd F = testutil::random_symmetric(rng, d);
        F -= (linalg::sym_eig(F).values.maxCoeff() + 0.25) * Eigen::MatrixXd::Identity(d, d);
        p.Fi.push_back(SymmetricMatrix::from_dense(F));
    }
    return p;
}

} // namespace

TEST_SUITE("sdp") {

TEST_CASE("smallest eigenvalue bound") {
    SdpSolution s = solve_lmi(eye_bound_problem());
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(s.objective_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(s.gap <= 1e-8);
    CHECK(s.min_eig_slack >= -1e-9);
}

TEST_CASE("reference certificate LMI value") {
    LmiProblem lmi = sprocedure::assemble_lmi(testutil::reference_instance());
    CHECK(lmi.num_vars() == 3);
    CHECK(lmi.dim() == 6);
    SdpSolution s = solve_lmi(lmi);
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(std::abs(s.objective_value - 43.7102) <= 5e-3);
}

TEST_CASE("unbounded objective is detected") {
    // S = diag(1 + g, 1 + a): g free to grow
    LmiProblem p;
    p.c = Eigen::VectorXd::Zero(2);
    p.c[0] = 1.0;
    p.F0 = SymmetricMatrix::from_dense(Eigen::Matrix2d::Identity());
    p.Fi = {SymmetricMatrix::from_dense(Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()),
            SymmetricMatrix::from_dense(Eigen::Vector2d(0, 1).asDiagonal().toDenseMatrix())};
    SdpSolution s = solve_lmi(p);
    CHECK(s.status == SdpStatus::Unbounded);
}

TEST_CASE("infeasible constraint set is classified") {
    LmiProblem lmi = sprocedure::assemble_lmi(testutil::unbounded_instance());
    SdpSolution s = solve_lmi(lmi);
    CHECK(s.status == SdpStatus::Infeasible);
}

TEST_CASE("fixed-point feasibility checks") {
    jnr::core::CompositeProblem ex1 = testutil::parabola_instance();
    LmiProblem lmi1 = sprocedure::assemble_lmi(ex1);
    for (double alpha : {-2.0, 0.0, 1.0, 5.0}) {
        Eigen::VectorXd y(3);
        y << 0.0, alpha, 0.0;  // gamma = 0, beta = 0
        FeasibilityCheck c = check_feasibility(lmi1, y);
        CHECK_FALSE(c.feasible);
        CHECK(c.min_eig <= -0.4);  // the (z2, const) block contributes eigenvalue -1/2
    }

    jnr::core::CompositeProblem ex2 = testutil::cross_term_instance();
    LmiProblem lmi2 = sprocedure::assemble_lmi(ex2);
    std::mt19937 rng(2);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd y(3);
        y << 0.0, testutil::random_vector(rng, 1)[0], testutil::random_vector(rng, 1)[0];
        CHECK_FALSE(check_feasibility(lmi2, y).feasible);
    }

    FeasibilityCheck ok = check_feasibility(eye_bound_problem(), Eigen::VectorXd::Zero(1));
    CHECK(ok.feasible);
    CHECK(ok.min_eig == doctest::Approx(1.0));
}

TEST_CASE("weak duality and slack replay on random instances") {
    std::mt19937 rng(31);
    int solved = 0;
    for (int t = 0; t < 12; ++t) {
        const int k = 2, d = 3;
        LmiProblem p = bounded_random_lmi(rng, k, d);
        SdpSolution s = solve_lmi(p);
        if (s.status != SdpStatus::Optimal) continue;
        ++solved;
        CHECK(s.objective_value <=
              s.primal_objective + 1e-8 * (1 + std::abs(s.objective_value)));
        // replay
        Eigen::MatrixXd Sy = p.F0.dense();
        for (int i = 0; i < k; ++i) Sy += s.y[i] * p.Fi[i].dense();
        CHECK(std::abs(linalg::min_eigenvalue(Sy) - s.min_eig_slack) <= 1e-10);
        CHECK(s.min_eig_slack >= -1e-9);
        CHECK(s.gap <= 1e-8);
    }
    CHECK(solved >= 8);
}

TEST_CASE("duplicating a nonnegative variable block never raises the optimum") {
    std::mt19937 rng(41);
    for (int t = 0; t < 8; ++t) {
        LmiProblem p = bounded_random_lmi(rng, 2, 3);
        p.nonneg = {0};
        SdpSolution base = solve_lmi(p);
        if (base.status != SdpStatus::Optimal) continue;

        LmiProblem q = p;
        q.nonneg = {0, 0};  // duplicate enforcement of the same variable
        SdpSolution dup = solve_lmi(q);
        if (dup.status != SdpStatus::Optimal) continue;
        CHECK(dup.objective_value <=
              base.objective_value + 1e-6 * (1 + std::abs(base.objective_value)));
    }
}

TEST_CASE("grid-search oracle equivalence on tiny instances") {
    std::mt19937 rng(59);
    int compared = 0;
    for (int t = 0; t < 40 && compared < 12; ++t) {
        const int k = 1 + static_cast<int>(rng() % 3);
        const int d = 2 + static_cast<int>(rng() % 3);
        LmiProblem p = bounded_random_lmi(rng, k, d);
        SdpSolution s = solve_lmi(p);
        if (s.status != SdpStatus::Optimal) continue;
        if (s.y.cwiseAbs().maxCoeff() > 2.4) continue;  // keep the grid box authoritative
        const double g = grid_optimum(p, 3.0, k == 3 ? 25 : 61);
        CHECK(std::abs(s.objective_value - g) <= 2e-3);
        ++compared;
    }
    CHECK(compared >= 8);
}

TEST_CASE("iteration log stream") {
    std::ostringstream log;
    SolverOptions opts;
    opts.log = &log;
    SdpSolution s = solve_lmi(eye_bound_problem(), opts);
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(log.str().find("relgap") != std::string::npos);
    CHECK(log.str().find("it=0") != std::string::npos);
}

TEST_CASE("dimension validation") {
    LmiProblem p = eye_bound_problem();
    p.Fi.push_back(SymmetricMatrix::from_dense(Eigen::Matrix3d::Identity()));
    CHECK_THROWS_AS(solve_lmi(p), std::invalid_argument);
    LmiProblem q = eye_bound_problem();
    q.nonneg = {5};
    CHECK_THROWS_AS(solve_lmi(q), std::invalid_argument);
    LmiProblem r = eye_bound_problem();
    CHECK_THROWS_AS(check_feasibility(r, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

} // TEST_SUITE
