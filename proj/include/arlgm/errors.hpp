#pragma once

#include <stdexcept>

namespace arlgm {

/// Invalid options or parameter combinations (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally valid but unusable input data (CLI exit code 1).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside an iterative solver (CLI exit code 2).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File system or parse failure (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace arlgm
