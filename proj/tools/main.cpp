// Batch front end: value / solve / qsic / aqp / range subcommands over JSON
// problem files. Exit codes: 0 optimal, 1 input error, 2 unbounded,
// 3 infeasible, 4 numerical trouble.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jnr/apps.hpp"
#include "jnr/io.hpp"
#include "jnr/oracle.hpp"
#include "jnr/recovery.hpp"
#include "jnr/sprocedure.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnbounded = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int status_exit(jnr::sprocedure::ValueStatus s) {
    switch (s) {
        case jnr::sprocedure::ValueStatus::Optimal: return kExitOk;
        case jnr::sprocedure::ValueStatus::Unbounded: return kExitUnbounded;
        case jnr::sprocedure::ValueStatus::Infeasible: return kExitInfeasible;
        case jnr::sprocedure::ValueStatus::NumericalTrouble: return kExitNumerical;
    }
    return kExitNumerical;
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void emit(const json& report, bool as_json) {
    if (as_json) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::cout << "status      : " << report.at("status").get<std::string>() << '\n';
    if (report.contains("value")) {
        if (report["value"].is_string())
            std::cout << "value       : " << report["value"].get<std::string>() << '\n';
        else
            std::cout << "value       : " << report["value"].get<double>() << '\n';
    }
    for (const auto& [key, val] : report.items()) {
        if (key == "status" || key == "value" || key == "elapsed_ms") continue;
        std::cout << key << std::string(key.size() < 12 ? 12 - key.size() : 1, ' ') << ": "
                  << val.dump() << '\n';
    }
    std::cout << "elapsed_ms  : " << report.at("elapsed_ms").get<double>() << '\n';
}

json value_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for composite quadratic programs over the joint range of two "
                 "quadratic functions, with QSIC and AQP front ends"};
    app.require_subcommand(1);

    std::string file;
    bool as_json = false;
    bool dump = false;
    double tol = 1e-8;
    double epsilon = 1e-2;
    double rho = 1e-8;
    int restarts = 20;
    bool trace = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "problem file (JSON)")->required();
        cmd->add_flag("--json", as_json, "emit a single JSON object");
        cmd->add_flag("--dump", dump, "re-emit the parsed problem as JSON and exit");
    };

    CLI::App* cmd_value = app.add_subcommand("value", "optimal value by the certificate LMI");
    add_common(cmd_value);
    cmd_value->add_option("--tol", tol, "SDP relative gap tolerance");

    CLI::App* cmd_solve = app.add_subcommand("solve", "value plus solution recovery");
    add_common(cmd_solve);
    cmd_solve->add_option("--epsilon", epsilon, "recovery accuracy");
    cmd_solve->add_option("--restarts", restarts, "root-finding restarts");
    cmd_solve->add_flag("--trace", trace, "stream bisection iterations to stderr");

    CLI::App* cmd_qsic = app.add_subcommand("qsic", "quadric intersection detection");
    add_common(cmd_qsic);
    cmd_qsic->add_option("--rho", rho, "intersection decision threshold");

    CLI::App* cmd_aqp = app.add_subcommand("aqp", "minimize |f| under g <= 0");
    add_common(cmd_aqp);

    CLI::App* cmd_range = app.add_subcommand("range", "sample the joint range to CSV");
    add_common(cmd_range);
    double box = 10.0;
    int count = 1000;
    unsigned seed = 1;
    std::string out_path;
    cmd_range->add_option("--box", box, "sampling box half-width");
    cmd_range->add_option("--count", count, "number of samples");
    cmd_range->add_option("--seed", seed, "sampling seed");
    cmd_range->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    Timer timer;
    std::optional<jnr::core::CompositeProblem> problem;
    try {
        problem = jnr::io::load_problem(file);
    } catch (const jnr::io::ParseError& e) {
        std::cerr << "input error at " << e.path() << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    }

    if (dump) {
        std::cout << jnr::io::dump_problem(*problem).dump(2) << '\n';
        return kExitOk;
    }

    try {
        if (*cmd_value) {
            jnr::sdp::SolverOptions opts;
            opts.gap_tol = tol;
            jnr::sprocedure::ValueResult r = jnr::sprocedure::solve_value(*problem, opts);
            json rep;
            rep["status"] = jnr::sprocedure::to_string(r.status);
            rep["value"] = value_json(r.value);
            if (r.status == jnr::sprocedure::ValueStatus::Optimal)
                rep["certificate"] = {{"gamma", r.certificate.gamma},
                                      {"alpha", r.certificate.alpha},
                                      {"beta", r.certificate.beta},
                                      {"mu", vec_json(r.certificate.mu)}};
            rep["sdp_status"] = jnr::sdp::to_string(r.sdp.status);
            rep["sdp_gap"] = r.sdp.gap;
            rep["sdp_iterations"] = r.sdp.iterations;
            rep["elapsed_ms"] = timer.elapsed_ms();
            if (!as_json && r.status == jnr::sprocedure::ValueStatus::Unbounded)
                std::cout << "UNBOUNDED\n";
            if (!as_json && r.status == jnr::sprocedure::ValueStatus::Infeasible)
                std::cout << "INFEASIBLE\n";
            emit(rep, as_json);
            return status_exit(r.status);
        }
        if (*cmd_solve) {
            jnr::recovery::FullSolveOptions opts;
            opts.newton.restarts = restarts;
            if (trace) opts.bisect.trace = &std::cerr;
            jnr::recovery::FullSolveResult r =
                jnr::recovery::solve_po4_full(*problem, epsilon, opts);
            json rep;
            rep["status"] = jnr::sprocedure::to_string(r.status);
            rep["value"] = value_json(r.value);
            rep["bisect_iterations"] = r.bisect_iterations;
            rep["recovery_case"] = jnr::recovery::to_string(r.recovery_case);
            if (r.z_bar_valid) rep["z_bar"] = {r.z_bar[0], r.z_bar[1]};
            if (r.x_bar) {
                rep["x_bar"] = vec_json(*r.x_bar);
                rep["quality_gap"] = r.quality_gap;
                rep["linear_rows_satisfied"] = r.lin_feasible;
            } else if (r.status == jnr::sprocedure::ValueStatus::Optimal) {
                rep["recovery"] = "RECOVERY FAILED (possible non-attainment)";
                rep["failed_stage"] = r.stage;
                if (!problem->objective.is_sum_of_squares())
                    rep["note"] =
                        "solution recovery is best-effort for objectives other than z1^2+z2^2";
            }
            rep["elapsed_ms"] = timer.elapsed_ms();
            emit(rep, as_json);
            return status_exit(r.status);
        }
        if (*cmd_qsic) {
            jnr::apps::QsicResult r = jnr::apps::solve_qsic(problem->f, problem->g, rho);
            json rep;
            rep["status"] = r.value_reliable ? "Optimal" : "NumericalTrouble";
            rep["value"] = r.value;
            rep["decision"] = r.intersects ? "INTERSECT" : "DISJOINT";
            rep["case"] = jnr::apps::to_string(r.case_);
            rep["rho"] = r.rho_used;
            if (r.x) {
                rep["x"] = vec_json(*r.x);
                rep["residual_f"] = problem->f(*r.x);
                rep["residual_g"] = problem->g(*r.x);
            }
            if (!r.message.empty()) rep["note"] = r.message;
            rep["elapsed_ms"] = timer.elapsed_ms();
            if (!as_json) std::cout << (r.intersects ? "INTERSECT" : "DISJOINT") << '\n';
            emit(rep, as_json);
            return r.value_reliable ? kExitOk : kExitNumerical;
        }
        if (*cmd_aqp) {
            jnr::apps::AqpResult r = jnr::apps::solve_aqp(problem->f, problem->g);
            json rep;
            rep["status"] = jnr::apps::to_string(r.status);
            rep["value"] = r.value;
            rep["case"] = jnr::apps::to_string(r.case_);
            if (r.kkt_branch) rep["kkt_branch"] = jnr::apps::to_string(*r.kkt_branch);
            if (r.x) rep["x"] = vec_json(*r.x);
            json audit = json::array();
            const char* names[3] = {"mu_positive", "both_zero", "lambda1_only"};
            for (int i = 0; i < 3; ++i) {
                if (!r.branches[i].evaluated) continue;
                audit.push_back({{"branch", names[i]},
                                 {"accepted", r.branches[i].accepted},
                                 {"note", r.branches[i].note}});
            }
            if (!audit.empty()) rep["branch_audit"] = audit;
            if (!r.message.empty()) rep["note"] = r.message;
            rep["elapsed_ms"] = timer.elapsed_ms();
            emit(rep, as_json);
            switch (r.status) {
                case jnr::apps::AqpStatus::Optimal: return kExitOk;
                case jnr::apps::AqpStatus::Infeasible: return kExitInfeasible;
                case jnr::apps::AqpStatus::Inconclusive: return kExitNumerical;
            }
        }
        if (*cmd_range) {
            if (count < 1) {
                std::cerr << "input error: --count must be >= 1\n";
                return kExitInput;
            }
            const int n = problem->n();
            Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -box);
            Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, box);
            jnr::oracle::SampleCloud cloud =
                jnr::oracle::sample_range(problem->f, problem->g, lo, hi, count, seed);
            if (out_path.empty()) {
                jnr::oracle::write_csv(cloud, std::cout);
            } else {
                std::ofstream out(out_path);
                if (!out) {
                    std::cerr << "input error: cannot open " << out_path << '\n';
                    return kExitInput;
                }
                jnr::oracle::write_csv(cloud, out);
            }
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitInput;
}
