#pragma once
// Experiment orchestration behind the CLI: obtains spectra through the disk
// cache, evaluates the measured-vs-predicted comparisons for each subcommand,
// and writes one CSV (fixed seven-column schema with a header row) plus one
// JSON summary per run.  Output is byte-identical for identical config and
// seed.

#include <optional>
#include <string>
#include <vector>

#include "twl/config.hpp"
#include "twl/spectral.hpp"

namespace twl {

struct RunOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;  // CLI --seed overrides the config seed
  int jobs = 0;
  std::string out_dir;  // overrides config output.dir when nonempty
  bool check = false;   // enforce acceptance-style thresholds (exit 3)
  int instances = 1000;
};

struct ResultRow {
  std::string experiment;
  double lambda = 0.0;
  std::optional<int> varpi;
  double measured = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;  // measured/predicted when predicted != 0, else 0
  double trunc = 0.0;  // certified truncation bound where applicable
};

std::string format_g(double x);  // %.12g
std::string rows_to_csv(const std::vector<ResultRow>& rows);

// cache-or-compute; `cache_note` (when non-null) receives hit/miss/store info
SpectrumRecord obtain_record(const ExperimentConfig& cfg, int jobs,
                             bool with_vectors, std::string* cache_note);

// Dispatch for: spectrum | weyl | trace | kernel | contact-check |
// hessian-check | szego-check.  `config_path` may be empty for the three
// check subcommands (built-in model defaults).  Returns the process exit
// code (0 ok, 3 threshold failure in check mode); errors are thrown.
int run_subcommand(const std::string& sub, const std::string& config_path,
                   const RunOptions& opt);

}  // namespace twl
