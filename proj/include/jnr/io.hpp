#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jnr/core.hpp"

namespace jnr::io {

/// Parse failure with the JSON field path that caused it.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Problem document: {"n", "f": {"A", "a", "a0"}, "g": {...},
/// optional "F": {"theta": [t1,t2,t3], "eta": [e1,e2]},
/// optional "linear": {"a", "b", "c"}}. "A" is row-major n x n.
/// Missing "F" defaults to z1^2 + z2^2; missing "linear" means m = 0.
core::CompositeProblem parse_problem(const nlohmann::json& doc);
core::CompositeProblem load_problem(const std::string& filename);

/// Inverse of parse_problem, field for field.
nlohmann::json dump_problem(const core::CompositeProblem& p);

} // namespace jnr::io
