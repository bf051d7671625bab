#pragma once

// Sectioned key-value problem files (format described in docs/problem-format.md).

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tancone/expr.hpp"
#include "tancone/optcheck.hpp"
#include "tancone/setmodels.hpp"

namespace tancone {

class ProblemError : public std::runtime_error {
 public:
  /// line is 1-based; 0 when the problem is not tied to a line.
  ProblemError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Problem {
  std::size_t dimension = 0;
  std::vector<std::string> variables;
  std::optional<std::string> objectiveText;
  std::optional<Expr> objective;
  Vec point;
  SetDesc set;
  std::vector<std::pair<std::string, std::vector<Vec>>> collections;
  SampleConfig config;

  /// nullptr when no collection has this name.
  const std::vector<Vec>* collection(std::string_view name) const;
};

/// Throws ProblemError with a line number on any malformed or unknown entry.
Problem parse_problem(std::string_view text);

/// Throws ProblemError (line 0) when the file cannot be read.
Problem load_problem(const std::filesystem::path& path);

/// Comma-separated reals; throws std::invalid_argument on malformed input.
Vec parse_vector(std::string_view text);

}  // namespace tancone
