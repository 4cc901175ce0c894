#pragma once

// Problem files, command dispatch and JSON reports for the `arbor` tool.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/ramify.hpp"

namespace arbor::cli {

inline constexpr const char* kToolVersion = "0.1.0";

using ElemLiteral = std::vector<Rational>;  // power-basis coordinates

struct Options {
  std::optional<std::size_t> depth;
  std::optional<std::string> policy;
  std::vector<std::uint64_t> primes;
  std::optional<std::uint64_t> p_max;
  std::optional<ElemLiteral> base;
  std::optional<ElemLiteral> critical_point;
  std::optional<unsigned> threads;
  friend bool operator==(const Options&, const Options&) = default;
};

struct ProblemConfig {
  std::vector<Integer> min_poly;
  // Forms of a common degree d: entry i is the coefficient of x^i y^(d-i).
  std::vector<ElemLiteral> num;
  std::optional<std::vector<ElemLiteral>> den;  // absent: polynomial map
  Options options;
  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

/// Strict parse; throws ParseError carrying a JSON pointer.
ProblemConfig parse_config(std::string_view text);
/// Canonical JSON text; parse_config(serialize(c)) == c.
std::string serialize(const ProblemConfig& c);

struct Problem {
  std::shared_ptr<const NumberField> K;
  RationalMap f;
};
Problem build(const ProblemConfig& c);

/// Field element from "5", "-1/3", "5 - t - t^2" or a JSON array literal.
NFElem parse_element(const NumberField& K, std::string_view text);
NFElem to_element(const NumberField& K, const ElemLiteral& c);

/// Command-line values; each one overrides the matching option.
struct Overrides {
  std::optional<std::uint64_t> prime;
  std::optional<std::uint64_t> p_max;
  std::optional<std::size_t> depth;
  std::optional<std::string> base;
  std::optional<std::string> policy;
};

struct RunResult {
  std::string json;  // the report, newline terminated
  std::string dot;   // portrait only
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"pcf", "portrait", "branch", "scan",
                                          "gcr", "height", "newton", "sparseness"};
  return c;
}

RunResult run(const std::string& command, const ProblemConfig& config, const Overrides& o = {});

/// {"error": {...}} document for an escaped error.
std::string error_json(const std::string& kind, const std::string& message,
                       const std::string& path = "");

}  // namespace arbor::cli
