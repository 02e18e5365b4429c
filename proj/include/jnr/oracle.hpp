#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "jnr/core.hpp"
#include "jnr/recovery.hpp"

namespace jnr::oracle {

struct SampleCloud {
    std::vector<core::JointRangePoint> points;
    Eigen::VectorXd lo, hi;  // sampling box
    int count = 0;
};

/// Deterministic low-discrepancy sampling of the box mapped through (f, g).
SampleCloud sample_range(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count,
                         unsigned seed);

struct BruteResult {
    bool feasible_found = false;
    double value = 0.0;
    Eigen::VectorXd x;
};

/// Exhaustive grid minimization of F(f(x), g(x)) over feasible samples.
/// An upper bound on the true optimum; n <= 4 enforced.
BruteResult brute_min_po4(const core::CompositeProblem& p, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, int grid_per_dim);

/// Midpoint reachability probe: for sampled pairs from the cloud, tries to hit
/// the midpoint of their range values by root finding. Failures are soft
/// evidence of non-convexity, not proof.
int convexity_probe(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                    const SampleCloud& cloud, int pairs, const recovery::NewtonOptions& newton,
                    unsigned seed);

/// CSV with header x1..xn,z1,z2.
void write_csv(const SampleCloud& cloud, std::ostream& os);

} // namespace jnr::oracle
