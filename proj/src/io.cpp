#include "jnr/io.hpp"

#include <fstream>

namespace jnr::io {

namespace {

using nlohmann::json;

const json& need(const json& doc, const std::string& key, const std::string& path) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(path + "." + key, "missing field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    return j.get<double>();
}

Eigen::VectorXd vector_at(const json& j, int expect, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    if (expect >= 0 && static_cast<int>(j.size()) != expect)
        throw ParseError(path, "expected length " + std::to_string(expect) + ", got " +
                                   std::to_string(j.size()));
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<int>(i)] = number_at(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Eigen::MatrixXd matrix_at(const json& j, int n, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array of rows");
    if (static_cast<int>(j.size()) != n)
        throw ParseError(path, "expected " + std::to_string(n) + " rows, got " +
                                   std::to_string(j.size()));
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
        A.row(r) = vector_at(j[r], n, path + "[" + std::to_string(r) + "]").transpose();
    return A;
}

core::QuadraticFunction quadratic_at(const json& j, int n, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    Eigen::MatrixXd A = matrix_at(need(j, "A", path), n, path + ".A");
    Eigen::VectorXd a = vector_at(need(j, "a", path), n, path + ".a");
    double a0 = number_at(need(j, "a0", path), path + ".a0");
    return core::QuadraticFunction(std::move(A), std::move(a), a0);
}

} // namespace

core::CompositeProblem parse_problem(const json& doc) {
    if (!doc.is_object()) throw ParseError("$", "expected a JSON object");
    const json& jn = need(doc, "n", "$");
    if (!jn.is_number_integer() || jn.get<int>() < 1)
        throw ParseError("$.n", "expected a positive integer");
    const int n = jn.get<int>();

    core::QuadraticFunction f = quadratic_at(need(doc, "f", "$"), n, "$.f");
    core::QuadraticFunction g = quadratic_at(need(doc, "g", "$"), n, "$.g");

    core::RangeObjective F = core::RangeObjective::sum_of_squares();
    if (doc.contains("F")) {
        const json& jF = doc["F"];
        if (!jF.is_object()) throw ParseError("$.F", "expected an object");
        Eigen::VectorXd th = vector_at(need(jF, "theta", "$.F"), 3, "$.F.theta");
        Eigen::VectorXd eta = vector_at(need(jF, "eta", "$.F"), 2, "$.F.eta");
        F = core::RangeObjective(th[0], th[1], th[2], eta[0], eta[1]);
    }

    Eigen::VectorXd la, lb, lc;
    if (doc.contains("linear")) {
        const json& jl = doc["linear"];
        if (!jl.is_object()) throw ParseError("$.linear", "expected an object");
        la = vector_at(need(jl, "a", "$.linear"), -1, "$.linear.a");
        lb = vector_at(need(jl, "b", "$.linear"), static_cast<int>(la.size()), "$.linear.b");
        lc = vector_at(need(jl, "c", "$.linear"), static_cast<int>(la.size()), "$.linear.c");
    }
    return core::CompositeProblem(std::move(f), std::move(g), F, std::move(la), std::move(lb),
                                  std::move(lc));
}

core::CompositeProblem load_problem(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw ParseError("$", "cannot open file: " + filename);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_problem(doc);
}

nlohmann::json dump_problem(const core::CompositeProblem& p) {
    auto quad = [](const core::QuadraticFunction& q) {
        json rows = json::array();
        for (int r = 0; r < q.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < q.dim(); ++c) row.push_back(q.A()(r, c));
            rows.push_back(std::move(row));
        }
        json a = json::array();
        for (int i = 0; i < q.dim(); ++i) a.push_back(q.a()[i]);
        return json{{"A", std::move(rows)}, {"a", std::move(a)}, {"a0", q.a0()}};
    };
    json doc;
    doc["n"] = p.n();
    doc["f"] = quad(p.f);
    doc["g"] = quad(p.g);
    doc["F"] = json{{"theta", {p.objective.theta()(0, 0), p.objective.theta()(0, 1),
                               p.objective.theta()(1, 1)}},
                    {"eta", {p.objective.eta()[0], p.objective.eta()[1]}}};
    if (p.m() > 0) {
        json a = json::array(), b = json::array(), c = json::array();
        for (int i = 0; i < p.m(); ++i) {
            a.push_back(p.lin_a[i]);
            b.push_back(p.lin_b[i]);
            c.push_back(p.lin_c[i]);
        }
        doc["linear"] = json{{"a", std::move(a)}, {"b", std::move(b)}, {"c", std::move(c)}};
    }
    return doc;
}

} // namespace jnr::io
