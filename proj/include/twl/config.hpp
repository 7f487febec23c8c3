#pragma once
// Flat key = value experiment configuration with dotted section names.
// Unknown keys and malformed values raise config errors naming the field.
//
//   model.d          ambient projective dimension (1..9)        default 1
//   symbol           expression text                            default "1"
//   action.weights   comma-separated integers or "none"         default none
//   k_max            highest degree block (>= 1)                required
//   cutoff.epsilon   support half-width of the window           default 0.5
//   lambda.start     first grid value                           |
//   lambda.stop      last grid value                            | default: none
//   lambda.count     number of grid points (>= 1)               |
//   isotypes         comma-separated weights, empty = free      default empty
//   base_point       interleaved re,im ambient coordinates      default unset
//   seed             unsigned integer                           default 0
//   output.dir       directory for result files                 default "."
//
// Validation enforces k_max >= 1, epsilon in (0, 4], a nonempty symbol that
// parses, weights of length d+1 when present, and the completeness bound
// lambda.stop <= k_max * (min of the symbol on the sphere).

#include <optional>
#include <string>

#include "twl/common.hpp"
#include "twl/symbol.hpp"

namespace twl {

struct LambdaGrid {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;  // 0 = no grid configured
};

struct ExperimentConfig {
  int d = 1;
  std::string symbol = "1";
  Weights weights;  // empty = no action
  int k_max = 0;
  double epsilon = 0.5;
  LambdaGrid lambda;
  std::vector<int> isotypes;  // empty = free counting
  std::optional<CVec> base_point;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
};

// Parses the text form; throws config errors with the offending field path.
ExperimentConfig parse_config_text(const std::string& text);

// Reads a file and parses it; io error when unreadable.
ExperimentConfig load_config(const std::string& path);

// Cross-field checks (symbol parses and is positive where required, grid
// within the completeness bound, base point on the sphere).  Returns the
// parsed symbol for reuse.
SymbolFunction validate_config(const ExperimentConfig& cfg);

// the lambda grid as explicit values (count == 1 yields {start})
std::vector<double> lambda_values(const LambdaGrid& g);

}  // namespace twl
