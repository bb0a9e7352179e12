#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqsrc/field.hpp"
#include "eqsrc/numerics.hpp"

namespace eqsrc {

// Batch job description; JSON in, CSV/JSON out.
struct JobSpec {
  std::string command;  // equilibrium | density | asymptotics | oracle-compare
                        // | convergence-report
  FieldSpec field = FieldSpec::quadratic(1.0);
  std::vector<int> n_list;
  int k = 0;
  std::vector<Complex> points;
  double delta = 0.0;  // 0 = resolved to 0.05 (b - a) after the solve
  int precision_bits = kOracleDefaultBits;
  double tol = 1e-10;
  std::string output_path;  // empty = stdout
  std::string format;       // "json" | "csv" (defaulted per command)
  int grid_points = 201;
  std::optional<std::pair<double, double>> overrides;  // (c1, c0): skip the solve
};

// Parse + validate UTF-8 JSON text into a fully-defaulted JobSpec.
// Unknown keys are rejected; violations raise schema-error with the
// offending JSON path. EQSRC_PRECISION_BITS overrides precision_bits.
JobSpec validate_schema(const std::string& raw);

// Execute the job, writing the primary output to output_path (or stdout)
// and diagnostics to stderr. Returns the process exit status
// (0 ok; numerical errors are thrown as eqsrc::Error).
int run(const JobSpec& job);

}  // namespace eqsrc
