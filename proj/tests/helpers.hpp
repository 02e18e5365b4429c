#pragma once

#include <random>

#include "jnr/core.hpp"
#include "jnr/oracle.hpp"

namespace testutil {

// Grid minimization with window refinement around the incumbent; resolves the
// optimum well below the coarse grid spacing on smooth instances.
inline double zoom_oracle(const jnr::core::CompositeProblem& p, double box, int grid,
                          int stages) {
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(p.n(), -box);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(p.n(), box);
    jnr::oracle::BruteResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < stages; ++s) {
        jnr::oracle::BruteResult r = jnr::oracle::brute_min_po4(p, lo, hi, grid);
        if (!r.feasible_found) break;
        best = r;
        const Eigen::VectorXd width = (hi - lo) / (grid - 1.0);
        lo = r.x - 2.0 * width;
        hi = r.x + 2.0 * width;
    }
    return best.feasible_found ? best.value : std::numeric_limits<double>::infinity();
}

// Instance with Theta = diag(1,2), eta = (1,2) whose certificate LMI optimum
// is +43.7102; the linear coefficients are stored in the solver's a.x
// convention.
inline jnr::core::CompositeProblem reference_instance() {
    Eigen::MatrixXd P = Eigen::Vector3d(1, 2, 3).asDiagonal();
    Eigen::VectorXd p(3);
    p << 0, 2, 2;
    Eigen::MatrixXd Q(3, 3);
    Q << 1, -2, 2, -2, 1, 3, 2, 3, 1;
    Eigen::VectorXd q(3);
    q << 2, 4, 6;
    return jnr::core::CompositeProblem(jnr::core::QuadraticFunction(P, p, 7),
                                       jnr::core::QuadraticFunction(Q, q, 2),
                                       jnr::core::RangeObjective(1, 0, 2, 1, 2));
}

// f = x1 + x2, g = 2 x1^2 - x2^2, F = 4 z1^2 + z2: convex objective over a
// non-convex range (the region above z2 = -2 z1^2).
inline jnr::core::CompositeProblem parabola_instance() {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2, 2);
    Eigen::VectorXd p(2);
    p << 1, 1;
    Eigen::MatrixXd Q = Eigen::Vector2d(2, -1).asDiagonal();
    return jnr::core::CompositeProblem(jnr::core::QuadraticFunction(P, p, 0),
                                       jnr::core::QuadraticFunction(Q, Eigen::VectorXd::Zero(2), 0),
                                       jnr::core::RangeObjective(4, 0, 0, 0, 1));
}

// f = x1^2, g = x2^2, F = 2 z1 z2: convex range, indefinite objective.
inline jnr::core::CompositeProblem cross_term_instance() {
    Eigen::MatrixXd P = Eigen::Vector2d(1, 0).asDiagonal();
    Eigen::MatrixXd Q = Eigen::Vector2d(0, 1).asDiagonal();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    return jnr::core::CompositeProblem(jnr::core::QuadraticFunction(P, z, 0),
                                       jnr::core::QuadraticFunction(Q, z, 0),
                                       jnr::core::RangeObjective(0, 1, 0, 0, 0));
}

// f = x1^2, g = x2^2, F = z1^2 - z2: unbounded below.
inline jnr::core::CompositeProblem unbounded_instance() {
    Eigen::MatrixXd P = Eigen::Vector2d(1, 0).asDiagonal();
    Eigen::MatrixXd Q = Eigen::Vector2d(0, 1).asDiagonal();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    return jnr::core::CompositeProblem(jnr::core::QuadraticFunction(P, z, 0),
                                       jnr::core::QuadraticFunction(Q, z, 0),
                                       jnr::core::RangeObjective(1, 0, 0, 0, -1));
}

// f = x1^2, g = x1 x2 - 1, F = z1^2 with z2 = 0 enforced through two rows:
// value 0, not attained.
inline jnr::core::CompositeProblem unattained_instance() {
    Eigen::MatrixXd P = Eigen::Vector2d(1, 0).asDiagonal();
    Eigen::MatrixXd Q(2, 2);
    Q << 0, 0.5, 0.5, 0;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd a(2), b(2), c(2);
    a << 0, 0;
    b << 1, -1;
    c << 0, 0;
    return jnr::core::CompositeProblem(jnr::core::QuadraticFunction(P, z, 0),
                                       jnr::core::QuadraticFunction(Q, z, -1),
                                       jnr::core::RangeObjective(1, 0, 0, 0, 0), a, b, c);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = dist(rng);
    return 0.5 * (A + A.transpose()).eval();
}

inline Eigen::VectorXd random_vector(std::mt19937& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

} // namespace testutil
