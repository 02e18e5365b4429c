#include "jnr/recovery.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

namespace jnr::recovery {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

core::QuadraticFunction combine(const core::CompositeProblem& p, double wf, double wg,
                                double shift = 0.0) {
    return core::QuadraticFunction(wf * p.f.A() + wg * p.g.A(), wf * p.f.a() + wg * p.g.a(),
                                   wf * p.f.a0() + wg * p.g.a0() + shift);
}

// Sector subproblem: original rows plus accumulated cuts, F unchanged.
core::CompositeProblem with_cuts(const core::CompositeProblem& p,
                                 const std::vector<HalfPlaneCut>& cuts) {
    const int m = p.m();
    const int mc = static_cast<int>(cuts.size());
    Eigen::VectorXd a(m + mc), b(m + mc), c(m + mc);
    a.head(m) = p.lin_a;
    b.head(m) = p.lin_b;
    c.head(m) = p.lin_c;
    for (int i = 0; i < mc; ++i) {
        // keep (sin phi) z1 - (cos phi) z2 >= 0  <=>  -sin(phi) z1 + cos(phi) z2 <= 0
        const double s = cuts[i].sign >= 0 ? 1.0 : -1.0;
        a[m + i] = -s * std::sin(cuts[i].phi);
        b[m + i] = s * std::cos(cuts[i].phi);
        c[m + i] = 0.0;
    }
    return core::CompositeProblem(p.f, p.g, p.objective, a, b, c);
}

// (Po4) with a linear range objective d.z, used by membership tests and the
// generic-objective support fallback.
core::CompositeProblem with_linear_objective(const core::CompositeProblem& p,
                                             const Eigen::Vector2d& d,
                                             Eigen::VectorXd extra_a = {},
                                             Eigen::VectorXd extra_b = {},
                                             Eigen::VectorXd extra_c = {}) {
    const int m = p.m();
    const int me = static_cast<int>(extra_a.size());
    Eigen::VectorXd a(m + me), b(m + me), c(m + me);
    a.head(m) = p.lin_a;
    b.head(m) = p.lin_b;
    c.head(m) = p.lin_c;
    a.tail(me) = extra_a;
    b.tail(me) = extra_b;
    c.tail(me) = extra_c;
    return core::CompositeProblem(p.f, p.g, core::RangeObjective(0, 0, 0, d[0], d[1]), a, b, c);
}

} // namespace

const char* to_string(RecoveryCase c) {
    switch (c) {
        case RecoveryCase::OriginShortCircuit: return "origin";
        case RecoveryCase::RayCheck: return "ray-zcheck";
        case RecoveryCase::RayHat: return "ray-zhat";
        case RecoveryCase::TangentChord: return "tangent-chord";
        case RecoveryCase::Fallback: return "fallback";
    }
    return "?";
}

int k_star(double v_bar, double epsilon) {
    if (v_bar <= 0.0 || epsilon <= 0.0)
        throw std::invalid_argument("k_star: v_bar and epsilon must be positive");
    const double angle = std::acos(std::sqrt(v_bar) / std::sqrt(v_bar + epsilon / 2.0));
    return static_cast<int>(std::floor(std::log2(2.0 * M_PI / angle))) + 1;
}

BisectResult bisect_z(const core::CompositeProblem& p, double v_bar, double epsilon,
                      const BisectOptions& opts) {
    if (!p.objective.is_sum_of_squares())
        throw std::invalid_argument("bisect_z: objective must be z1^2 + z2^2");
    if (epsilon <= 0.0) throw std::invalid_argument("bisect_z: epsilon must be positive");

    BisectResult res;
    res.state.v_bar = v_bar;
    res.state.epsilon = epsilon;
    if (v_bar <= 0.0) {
        // the level circle degenerates: the optimum sits at the origin up to eps
        res.ok = true;
        res.final_case = RecoveryCase::OriginShortCircuit;
        res.z_bar.setZero();
        return res;
    }

    const double delta = opts.delta_scale * (1.0 + v_bar);
    const double stop_angle = std::acos(std::sqrt(v_bar) / std::sqrt(v_bar + epsilon / 2.0));
    BisectionState& st = res.state;

    while (st.u - st.l > stop_angle) {
        const double phi = 0.5 * (st.l + st.u);
        std::vector<HalfPlaneCut> lower_cuts = st.cuts;
        lower_cuts.push_back({phi, +1});

        // -1 undecided, 0 keep lower, 1 keep upper
        int branch = -1;
        double shown_value = std::numeric_limits<double>::quiet_NaN();
        sprocedure::ValueResult lower =
            sprocedure::solve_value(with_cuts(p, lower_cuts), opts.sdp);
        shown_value = lower.value;
        if (lower.status == sprocedure::ValueStatus::Optimal)
            branch = lower.value <= v_bar + delta ? 0 : 1;
        else if (lower.status == sprocedure::ValueStatus::Unbounded)
            branch = 0;  // cannot happen for a nonnegative objective; defensive
        else if (lower.status == sprocedure::ValueStatus::Infeasible)
            branch = 1;  // empty sector: the optimum is in the other half
        if (branch == -1) {
            // thin sectors can defeat the subproblem solver; the other half
            // still decides the split since the union holds the optimum
            std::vector<HalfPlaneCut> upper_cuts = st.cuts;
            upper_cuts.push_back({phi, -1});
            sprocedure::ValueResult upper =
                sprocedure::solve_value(with_cuts(p, upper_cuts), opts.sdp);
            shown_value = upper.value;
            if (upper.status == sprocedure::ValueStatus::Optimal)
                branch = upper.value <= v_bar + delta ? 1 : 0;
            else if (upper.status == sprocedure::ValueStatus::Infeasible)
                branch = 0;
        }
        if (branch == -1) {
            // both halves inconclusive: stop at the current wider sector and
            // let the endpoint stage work with a degraded angle
            res.message = "sector subproblems inconclusive at k=" + std::to_string(st.k + 1) +
                          "; stopped early";
            break;
        }

        ++st.k;
        ++res.iterations;
        if (opts.trace)
            (*opts.trace) << "bisect k=" << st.k << " phi=" << phi
                          << " value=" << shown_value
                          << " branch=" << (branch == 0 ? "lower" : "upper") << '\n';

        if (branch == 0) {
            st.u = phi;
            st.cuts = std::move(lower_cuts);
        } else {
            st.l = phi;
            st.cuts.push_back({phi, -1});
        }
    }

    const double r = std::sqrt(v_bar);
    const double sec = 1.0 / std::cos(st.u - st.l);
    res.endpoints.z_check = {r * std::cos(st.u), r * std::sin(st.u)};
    res.endpoints.z_hat = {r * sec * std::cos(st.l), r * sec * std::sin(st.l)};

    // Step 2.5: locate z_bar on whichever segment or chord meets the set.
    // Without linear rows the line subproblems are one-constraint programs and
    // go through the lifted relaxation; with rows they are encoded as
    // linear-objective instances with an equality row pair.
    const double vb = v_bar;
    auto ray_value = [&](const Eigen::Vector2d& z) -> std::optional<double> {
        if (p.m() == 0) {
            subsolvers::QpResult qr = subsolvers::solve_qp1eqc(
                combine(p, z[0], z[1]), combine(p, z[1], -z[0]), opts.sdp);
            if (qr.bound_valid && std::isfinite(qr.value))
                return qr.value;  // the bound is valid even without a witness
            if (qr.status == subsolvers::SubStatus::Unbounded)
                return -kInf;
            return std::nullopt;
        }
        Eigen::VectorXd ea(2), eb(2), ec(2);
        ea << z[1], -z[1];
        eb << -z[0], z[0];
        ec << 0.0, 0.0;
        sprocedure::ValueResult rv =
            sprocedure::solve_value(with_linear_objective(p, z, ea, eb, ec), opts.sdp);
        if (rv.status == sprocedure::ValueStatus::Optimal) return rv.value;
        if (rv.status == sprocedure::ValueStatus::Unbounded) return -kInf;
        return std::nullopt;
    };

    auto try_ray = [&](const Eigen::Vector2d& z, RecoveryCase c) -> bool {
        std::optional<double> rv = ray_value(z);
        if (!rv || *rv < -delta || *rv > vb + delta) return false;
        res.final_case = c;
        res.z_bar = (*rv / z.squaredNorm()) * z;
        res.ok = true;
        return true;
    };

    if (try_ray(res.endpoints.z_check, RecoveryCase::RayCheck)) return res;
    if (try_ray(res.endpoints.z_hat, RecoveryCase::RayHat)) return res;

    // tangent chord: inf zc2 z1 - zc1 z2 on {zc . z = v_bar} within the rows
    const Eigen::Vector2d zc = res.endpoints.z_check;
    std::optional<double> chord;
    if (p.m() == 0) {
        subsolvers::QpResult qr = subsolvers::solve_qp1eqc(
            combine(p, zc[1], -zc[0]), combine(p, zc[0], zc[1], -vb), opts.sdp);
        if (qr.bound_valid && std::isfinite(qr.value)) chord = qr.value;
    } else {
        Eigen::VectorXd ea(2), eb(2), ec(2);
        ea << zc[0], -zc[0];
        eb << zc[1], -zc[1];
        ec << vb, -vb;
        sprocedure::ValueResult cv = sprocedure::solve_value(
            with_linear_objective(p, {zc[1], -zc[0]}, ea, eb, ec), opts.sdp);
        if (cv.status == sprocedure::ValueStatus::Optimal) chord = cv.value;
    }
    // the chord minimizer must land between the endpoints: its cross value
    // runs from 0 at the circle endpoint to vb tan(u - l) at the outer one
    const double chord_cap = vb * std::tan(st.u - st.l) + delta;
    if (chord && *chord >= -delta && *chord <= chord_cap) {
        res.final_case = RecoveryCase::TangentChord;
        res.z_bar = zc + (*chord / vb) * Eigen::Vector2d{zc[1], -zc[0]};
        res.ok = true;
        return res;
    }
    res.final_case = RecoveryCase::Fallback;
    res.z_bar = zc;
    res.ok = false;
    res.message = "step 2.5 subproblems did not resolve; returning the circle endpoint";
    return res;
}

bool ray_membership(const core::CompositeProblem& p, const Eigen::Vector2d& z, double v_bar,
                    const BisectOptions& opts) {
    if (z.norm() == 0.0) {
        // origin membership: is 0 in the feasible range set?
        core::CompositeProblem q(p.f, p.g, core::RangeObjective::sum_of_squares(), p.lin_a,
                                 p.lin_b, p.lin_c);
        sprocedure::ValueResult rv = sprocedure::solve_value(q, opts.sdp);
        return rv.status == sprocedure::ValueStatus::Optimal &&
               rv.value <= opts.delta_scale * (1.0 + std::abs(v_bar));
    }
    const double delta = opts.delta_scale * (1.0 + std::abs(v_bar));
    Eigen::VectorXd ea(2), eb(2), ec(2);
    ea << z[1], -z[1];
    eb << -z[0], z[0];
    ec << 0.0, 0.0;
    sprocedure::ValueResult rv =
        sprocedure::solve_value(with_linear_objective(p, z, ea, eb, ec), opts.sdp);
    if (rv.status != sprocedure::ValueStatus::Optimal) return false;
    return rv.value >= -delta && rv.value <= v_bar + delta;
}

subsolvers::QpResult nearest_on_line(const core::CompositeProblem& p, LineKind kind,
                                     const Eigen::Vector2d& anchor, double v_bar,
                                     const sdp::SolverOptions& opts) {
    if (p.m() != 0)
        throw std::invalid_argument("nearest_on_line: requires an instance without linear rows");
    if (kind == LineKind::RayThrough) {
        // min anchor.(f,g)  s.t.  anchor2 f - anchor1 g = 0
        return subsolvers::solve_qp1eqc(combine(p, anchor[0], anchor[1]),
                                        combine(p, anchor[1], -anchor[0]), opts);
    }
    // min anchor2 f - anchor1 g  s.t.  anchor.(f,g) = v_bar
    return subsolvers::solve_qp1eqc(combine(p, anchor[1], -anchor[0]),
                                    combine(p, anchor[0], anchor[1], -v_bar), opts);
}

std::optional<Eigen::VectorXd> newton_root(const core::QuadraticFunction& f,
                                           const core::QuadraticFunction& g,
                                           const Eigen::Vector2d& z_target,
                                           const NewtonOptions& opts) {
    if (f.dim() != g.dim()) throw std::invalid_argument("newton_root: dimension mismatch");
    const int n = f.dim();
    const double ztol = opts.tol * (1.0 + z_target.cwiseAbs().maxCoeff());
    const double radius =
        opts.radius > 0.0 ? opts.radius
                          : std::max(10.0, 4.0 * std::sqrt(1.0 + z_target.cwiseAbs().maxCoeff()));
    const double divergence = opts.divergence > 0.0 ? opts.divergence : 1e2 * radius;

    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> unif(-radius, radius);

    for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
        Eigen::VectorXd x(n);
        if (attempt == 0)
            x.setZero();
        else
            for (int i = 0; i < n; ++i) x[i] = unif(rng);

        for (int it = 0; it < opts.max_iter; ++it) {
            if (x.cwiseAbs().maxCoeff() > divergence) break;
            Eigen::Vector2d r{f(x) - z_target[0], g(x) - z_target[1]};
            if (r.cwiseAbs().maxCoeff() <= ztol) return x;
            Eigen::MatrixXd J(2, n);
            J.row(0) = f.gradient(x).transpose();
            J.row(1) = g.gradient(x).transpose();
            Eigen::VectorXd step =
                J.completeOrthogonalDecomposition().solve((-r).eval());
            if (!step.allFinite() || step.norm() < 1e-16) break;
            const double base = r.squaredNorm();
            double t = 1.0;
            Eigen::VectorXd xn;
            for (int bt = 0; bt < 30; ++bt) {
                xn = x + t * step;
                Eigen::Vector2d rn{f(xn) - z_target[0], g(xn) - z_target[1]};
                if (rn.squaredNorm() < base * (1.0 - 1e-4 * t)) break;
                t *= 0.5;
            }
            x = xn;
        }
        // final check for the last iterate of this restart
        if (x.cwiseAbs().maxCoeff() > divergence) continue;
        Eigen::Vector2d r{f(x) - z_target[0], g(x) - z_target[1]};
        if (r.cwiseAbs().maxCoeff() <= ztol) return x;
    }
    return std::nullopt;
}

namespace {

// Outer polygon of the feasible range set from supporting half-planes, then a
// plain 2-D scan for the objective minimizer over it. Best effort for convex
// objectives other than z1^2 + z2^2.
std::optional<Eigen::Vector2d> support_polygon_argmin(const core::CompositeProblem& p,
                                                      int directions,
                                                      const sdp::SolverOptions& sdp_opts) {
    struct Halfplane { Eigen::Vector2d d; double h; };
    std::vector<Halfplane> cuts;
    for (int j = 0; j < directions; ++j) {
        const double ang = 2.0 * M_PI * j / directions;
        const Eigen::Vector2d d{std::cos(ang), std::sin(ang)};
        core::CompositeProblem lp(p.f, p.g, core::RangeObjective(0, 0, 0, d[0], d[1]), p.lin_a,
                                  p.lin_b, p.lin_c);
        try {
            sprocedure::ValueResult rv = sprocedure::solve_value(lp, sdp_opts);
            if (rv.status == sprocedure::ValueStatus::Optimal) cuts.push_back({d, rv.value});
            else if (rv.status == sprocedure::ValueStatus::Infeasible) return std::nullopt;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    if (cuts.size() < 3) return std::nullopt;

    // scan box: supported sides come from the cuts, open sides from the
    // magnitude of the supported values (the minimizer of a convex objective
    // over the polygon sits near the supported region)
    double hmax = 0.0;
    for (const auto& c : cuts) hmax = std::max(hmax, std::abs(c.h));
    const double open = 10.0 * (1.0 + hmax);
    double lo1 = -open, hi1 = open, lo2 = -open, hi2 = open;
    for (const auto& c : cuts) {
        if (c.d[0] > 0.99) lo1 = std::max(lo1, c.h);
        if (c.d[0] < -0.99) hi1 = std::min(hi1, -c.h);
        if (c.d[1] > 0.99) lo2 = std::max(lo2, c.h);
        if (c.d[1] < -0.99) hi2 = std::min(hi2, -c.h);
    }
    if (!(lo1 < hi1) || !(lo2 < hi2)) return std::nullopt;

    const int grid = 1001;
    std::optional<Eigen::Vector2d> best;
    double best_val = kInf;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Eigen::Vector2d z{lo1 + (hi1 - lo1) * i / (grid - 1.0),
                              lo2 + (hi2 - lo2) * j / (grid - 1.0)};
            bool inside = true;
            for (const auto& c : cuts)
                if (c.d.dot(z) < c.h - 1e-6 * (1.0 + std::abs(c.h))) { inside = false; break; }
            if (!inside) continue;
            const double val = p.objective(z);
            if (val < best_val) {
                best_val = val;
                best = z;
            }
        }
    }
    return best;
}

} // namespace

FullSolveResult solve_po4_full(const core::CompositeProblem& p, double epsilon,
                               const FullSolveOptions& opts) {
    if (epsilon <= 0.0) throw std::invalid_argument("solve_po4_full: epsilon must be positive");

    FullSolveResult out;
    sprocedure::ValueResult vr = sprocedure::solve_value(p, opts.sdp);
    out.status = vr.status;
    out.value = vr.value;
    out.certificate = vr.certificate;
    if (vr.status != sprocedure::ValueStatus::Optimal) {
        out.stage = "value";
        return out;
    }

    const bool radial = p.objective.is_sum_of_squares();
    auto finish_with_x = [&](const Eigen::VectorXd& x, RecoveryCase c) {
        out.x_bar = x;
        out.recovery_case = c;
        const Eigen::Vector2d z = p.range_point(x);
        out.z_bar = z;
        out.z_bar_valid = true;
        out.quality_gap = p.objective(z) - out.value;
        out.lin_feasible = p.linear_violation(z) <= 1e-7;
    };

    if (radial) {
        const double v_bar = out.value + epsilon / 4.0;
        if (out.value <= 1e-8 * (1.0 + epsilon)) {
            // optimum at the origin of the range plane
            out.recovery_case = RecoveryCase::OriginShortCircuit;
            out.z_bar.setZero();
            out.z_bar_valid = true;
            if (auto x = newton_root(p.f, p.g, Eigen::Vector2d::Zero(), opts.newton)) {
                finish_with_x(*x, RecoveryCase::OriginShortCircuit);
            } else {
                out.stage = "newton at origin";
            }
            return out;
        }

        BisectResult b = bisect_z(p, v_bar, epsilon, opts.bisect);
        out.bisect_iterations = b.iterations;
        out.recovery_case = b.final_case;
        out.z_bar = b.z_bar;
        out.z_bar_valid = true;

        const double qtol = 1e-6 * (1.0 + std::abs(out.value));
        auto accepts = [&](const Eigen::VectorXd& x) {
            const Eigen::Vector2d z = p.range_point(x);
            const double val = p.objective(z);
            return val >= out.value - qtol && val <= out.value + epsilon + qtol &&
                   p.linear_violation(z) <= 1e-7;
        };

        if (p.m() == 0 && b.ok && b.iterations > 0) {
            // direct line recovery through one more equality-constrained subproblem
            LineKind kind = LineKind::TangentChord;
            Eigen::Vector2d anchor = b.endpoints.z_check;
            if (b.final_case == RecoveryCase::RayCheck) kind = LineKind::RayThrough;
            else if (b.final_case == RecoveryCase::RayHat) {
                kind = LineKind::RayThrough;
                anchor = b.endpoints.z_hat;
            }
            subsolvers::QpResult qr = nearest_on_line(p, kind, anchor, v_bar, opts.sdp);
            if (qr.status == subsolvers::SubStatus::Optimal && qr.x && accepts(*qr.x)) {
                finish_with_x(*qr.x, b.final_case);
                return out;
            }
        }
        // root finding at the located z_bar (also the m > 0 path)
        if (auto x = newton_root(p.f, p.g, b.z_bar, opts.newton)) {
            if (accepts(*x)) {
                finish_with_x(*x, b.final_case);
                return out;
            }
        }
        if (b.iterations > 0) {
            // the segment between the sector endpoints crosses the feasible
            // range whenever both rays miss it; walk it with root finding
            const int samples = 12;
            std::vector<int> reachable(samples + 1, 0);
            for (int s = 0; s <= samples; ++s) {
                const Eigen::Vector2d xi = b.endpoints.z_check +
                    (static_cast<double>(s) / samples) *
                        (b.endpoints.z_hat - b.endpoints.z_check);
                auto x = newton_root(p.f, p.g, xi, opts.newton);
                reachable[s] = x.has_value() ? 1 : 0;
                if (x && accepts(*x)) {
                    finish_with_x(*x, b.final_case);
                    return out;
                }
            }
            if (p.m() > 0) {
                // rows can clip the reachable part of the segment at a corner;
                // close in on it between a reachable point and the row-feasible side
                for (int s = 0; s < samples; ++s) {
                    if (reachable[s] == reachable[s + 1]) continue;
                    double t_ok = reachable[s] ? static_cast<double>(s) / samples
                                               : static_cast<double>(s + 1) / samples;
                    double t_other = reachable[s] ? static_cast<double>(s + 1) / samples
                                                  : static_cast<double>(s) / samples;
                    for (int it = 0; it < 40; ++it) {
                        const double t = 0.5 * (t_ok + t_other);
                        const Eigen::Vector2d xi = b.endpoints.z_check +
                            t * (b.endpoints.z_hat - b.endpoints.z_check);
                        auto x = newton_root(p.f, p.g, xi, opts.newton);
                        if (x && accepts(*x)) {
                            finish_with_x(*x, b.final_case);
                            return out;
                        }
                        (x ? t_ok : t_other) = t;
                    }
                }
            }
        }
        out.stage = "newton at z_bar";
        return out;
    }

    // Generic convex objective: approximate the feasible range set by
    // supporting half-planes and scan for the minimizer direction.
    std::optional<Eigen::Vector2d> z = support_polygon_argmin(p, opts.support_directions, opts.sdp);
    if (!z) {
        out.stage = "support polygon";
        return out;
    }
    out.z_bar = *z;
    out.z_bar_valid = true;
    if (auto x = newton_root(p.f, p.g, *z, opts.newton)) {
        finish_with_x(*x, RecoveryCase::Fallback);
        return out;
    }
    out.stage = "newton at polygon argmin";
    out.recovery_case = RecoveryCase::Fallback;
    return out;
}

} // namespace jnr::recovery
