// Command-line front end: each subcommand reads a flat key=value config,
// runs one experiment family, and writes <name>.csv + <name>.json into the
// output directory.  Exit codes: 0 success, 1 usage/config error,
// 2 numerical failure, 3 threshold failure in --check mode.

#include <iostream>

#include "CLI11.hpp"
#include "twl/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spherical Berezin-Toeplitz spectral laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  twl::RunOptions opt;
  long long seed_arg = -1;

  const char* names[] = {"spectrum",      "weyl",          "trace",
                         "kernel",        "contact-check", "hessian-check",
                         "szego-check"};
  const char* descs[] = {
      "compute and persist the eigenvalue ladder",
      "counting function vs predicted power law",
      "smoothed spectral trace vs predicted constant",
      "smoothed projector kernel on the diagonal vs prediction",
      "flow-transport identity residuals for three multiplier classes",
      "random-instance verification of the three Hessian normal forms",
      "near-diagonal kernel universality ratio on an offset grid"};
  for (int i = 0; i < 7; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "path to key=value config file");
    sub->add_option("--seed", seed_arg, "override the config seed");
    sub->add_option("--jobs", opt.jobs, "worker threads (0 = hardware)");
    sub->add_option("--out", opt.out_dir, "output directory override");
    sub->add_flag("--check", opt.check, "enforce acceptance thresholds");
    if (std::string(names[i]) == "hessian-check")
      sub->add_option("--instances", opt.instances,
                      "random instances per lemma");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (seed_arg >= 0) {
    opt.seed = static_cast<std::uint64_t>(seed_arg);
    opt.seed_given = true;
  }

  try {
    std::string sub = app.get_subcommands().front()->get_name();
    return twl::run_subcommand(sub, config_path, opt);
  } catch (const twl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case twl::ErrorCode::parse:
      case twl::ErrorCode::config:
        return 1;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
