#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jnr/core.hpp"
#include "jnr/sdp.hpp"
#include "jnr/sprocedure.hpp"
#include "jnr/subsolvers.hpp"

namespace jnr::recovery {

/// Iteration bound floor(log2(2 pi / arccos(sqrt(v)/sqrt(v + eps/2)))) + 1.
int k_star(double v_bar, double epsilon);

struct HalfPlaneCut {
    double phi = 0.0;
    int sign = +1;  // +1 keeps (sin phi) z1 - (cos phi) z2 >= 0, -1 the other side
};

struct BisectionState {
    double l = 0.0;
    double u = 2.0 * M_PI;
    std::vector<HalfPlaneCut> cuts;
    int k = 0;
    double v_bar = 0.0;
    double epsilon = 0.0;
};

struct SectorEndpoints {
    Eigen::Vector2d z_check = Eigen::Vector2d::Zero();  // radius sqrt(v_bar), angle u_k
    Eigen::Vector2d z_hat = Eigen::Vector2d::Zero();    // radius sqrt(v_bar) sec(u_k - l_k), angle l_k
};

enum class RecoveryCase { OriginShortCircuit, RayCheck, RayHat, TangentChord, Fallback };
const char* to_string(RecoveryCase c);

struct BisectOptions {
    double delta_scale = 1e-6;   // sector acceptance slack delta = delta_scale * (1 + v_bar)
    sdp::SolverOptions sdp;
    std::ostream* trace = nullptr;  // per-iteration: k, phi, sector value, branch
};

struct BisectResult {
    bool ok = false;
    Eigen::Vector2d z_bar = Eigen::Vector2d::Zero();
    int iterations = 0;
    RecoveryCase final_case = RecoveryCase::Fallback;
    BisectionState state;
    SectorEndpoints endpoints;
    std::string message;
};

/// Angular bisection for the minimizer direction when F = z1^2 + z2^2.
/// v_bar should sit in [v, v + eps/2]; v_bar <= 0 short-circuits to the origin.
BisectResult bisect_z(const core::CompositeProblem& p, double v_bar, double epsilon,
                      const BisectOptions& opts = {});

/// Segment test [O, z] against the feasible range set: true when the segment
/// meets it, decided by the value of the associated line subproblem.
bool ray_membership(const core::CompositeProblem& p, const Eigen::Vector2d& z, double v_bar,
                    const BisectOptions& opts = {});

enum class LineKind { RayThrough, TangentChord };

/// Solution recovery on a line in the range plane (requires m = 0):
/// RayThrough minimizes anchor.(f,g) on {anchor x (f,g) = 0}; TangentChord
/// minimizes the cross term on {anchor.(f,g) = v_bar}.
subsolvers::QpResult nearest_on_line(const core::CompositeProblem& p, LineKind kind,
                                     const Eigen::Vector2d& anchor, double v_bar,
                                     const sdp::SolverOptions& opts = {});

struct NewtonOptions {
    int restarts = 20;
    int max_iter = 80;
    double tol = 1e-9;        // residual inf-norm, relative to 1 + |z_target|
    double radius = 0.0;      // sampling box half-width; 0 = adapt to data scale
    double divergence = 0.0;  // abort a restart past this iterate norm; 0 = 1e3 * radius
    unsigned seed = 12345;
};

/// Gauss-Newton with backtracking on the residual (f(x)-z1, g(x)-z2).
/// Restarts whose iterates run far outside the sampling scale are abandoned:
/// a root escaping to infinity signals an unattained target.
std::optional<Eigen::VectorXd> newton_root(const core::QuadraticFunction& f,
                                           const core::QuadraticFunction& g,
                                           const Eigen::Vector2d& z_target,
                                           const NewtonOptions& opts = {});

struct FullSolveOptions {
    sdp::SolverOptions sdp;
    NewtonOptions newton;
    BisectOptions bisect;
    int support_directions = 16;  // generic-objective fallback polygon size
};

struct FullSolveResult {
    sprocedure::ValueStatus status = sprocedure::ValueStatus::NumericalTrouble;
    double value = 0.0;
    sprocedure::Certificate certificate;
    std::optional<Eigen::VectorXd> x_bar;
    bool z_bar_valid = false;
    Eigen::Vector2d z_bar = Eigen::Vector2d::Zero();
    double quality_gap = 0.0;    // F(f(x),g(x)) - value when x_bar is present
    bool lin_feasible = true;    // recovered point satisfies the linear rows
    int bisect_iterations = 0;
    RecoveryCase recovery_case = RecoveryCase::Fallback;
    std::string stage;           // where recovery stopped when x_bar is absent
};

/// Value first, then solution recovery: direct line recovery when
/// F = z1^2 + z2^2 with no linear rows, bisection plus root finding when rows
/// are present, and a support-polygon fallback for other convex objectives.
FullSolveResult solve_po4_full(const core::CompositeProblem& p, double epsilon,
                               const FullSolveOptions& opts = {});

} // namespace jnr::recovery
