#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "twl/cache.hpp"
#include "twl/config.hpp"
#include "twl/runner.hpp"

using namespace twl;
namespace fs = std::filesystem;

namespace {

// every cache/runner test works inside an isolated scratch tree
const fs::path& scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("twl-harness-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p / "cache");
    ::setenv("TWL_CACHE_DIR", (p / "cache").c_str(), 1);
    return p;
  }();
  return root;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  REQUIRE(static_cast<bool>(out));
  out << text;
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config text parses every documented key") {
  ExperimentConfig cfg = parse_config_text(
      "# experiment description\n"
      "model.d = 1\n"
      "symbol = 1+0.5*w1   # trailing comment\n"
      "action.weights = -1,1\n"
      "k_max = 120\n"
      "cutoff.epsilon = 0.5\n"
      "lambda.start = 100\n"
      "lambda.stop = 110\n"
      "lambda.count = 6\n"
      "isotypes = 0,1,5\n"
      "base_point = 0.70710678118654752,0,0.70710678118654752,0\n"
      "seed = 42\n"
      "output.dir = out\n");
  CHECK(cfg.d == 1);
  CHECK(cfg.symbol == "1+0.5*w1");
  CHECK(cfg.weights == Weights{-1, 1});
  CHECK(cfg.k_max == 120);
  CHECK(cfg.epsilon == 0.5);
  CHECK(cfg.lambda.start == 100.0);
  CHECK(cfg.lambda.stop == 110.0);
  CHECK(cfg.lambda.count == 6);
  CHECK(cfg.isotypes == std::vector<int>{0, 1, 5});
  REQUIRE(cfg.base_point.has_value());
  CHECK(cfg.base_point->size() == 2);
  CHECK(cfg.seed == 42);
  CHECK(cfg.output_dir == "out");
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("config defaults") {
  ExperimentConfig cfg = parse_config_text("k_max = 10\n");
  CHECK(cfg.d == 1);
  CHECK(cfg.symbol == "1");
  CHECK(cfg.weights.empty());
  CHECK(cfg.epsilon == 0.5);
  CHECK(cfg.lambda.count == 0);
  CHECK(cfg.isotypes.empty());
  CHECK(!cfg.base_point.has_value());
  CHECK(cfg.output_dir == ".");
  CHECK_NOTHROW(validate_config(cfg));
  CHECK(parse_config_text("action.weights = none\nk_max = 3\n")
            .weights.empty());
}

TEST_CASE("config errors name the offending field") {
  auto msg1 = error_message([] { parse_config_text("mystery.key = 3\n"); });
  CHECK(msg1.find("mystery.key") != std::string::npos);
  auto msg2 = error_message([] { parse_config_text("k_max = abc\n"); });
  CHECK(msg2.find("k_max") != std::string::npos);
  CHECK_THROWS_AS(parse_config_text("cutoff.epsilon = 5\n"), Error);
  CHECK_THROWS_AS(parse_config_text("just some words\n"), Error);

  // cross-field validation
  auto need = error_message([] {
    validate_config(parse_config_text(
        "k_max = 10\nlambda.start = 5\nlambda.stop = 11\nlambda.count = 3\n"));
  });
  CHECK(need.find("lambda.stop") != std::string::npos);
  CHECK(need.find("11") != std::string::npos);
  CHECK_THROWS_AS(validate_config(parse_config_text(
                      "k_max = 5\naction.weights = 1,2,3\n")),
                  Error);
  CHECK_THROWS_AS(validate_config(parse_config_text(
                      "k_max = 5\nbase_point = 1,0,1,0\n")),
                  Error);
  CHECK_THROWS_AS(validate_config(parse_config_text(
                      "k_max = 5\nsymbol = w1-2\n")),
                  Error);
  CHECK_THROWS_AS(validate_config(parse_config_text("symbol = 1\n")), Error);
}

TEST_CASE("lambda grids expand to explicit values") {
  CHECK(lambda_values({2.0, 10.0, 5}) ==
        std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0});
  CHECK(lambda_values({7.5, 99.0, 1}) == std::vector<double>{7.5});
  CHECK(lambda_values({0.0, 0.0, 0}).empty());
}

TEST_CASE("result rows serialize to a stable CSV") {
  CHECK(format_g(1.0) == "1");
  CHECK(format_g(0.5) == "0.5");
  CHECK(format_g(1234.0) == "1234");
  std::vector<ResultRow> rows(2);
  rows[0] = {"weyl", 10.0, 1, 5.0, 5.0, 1.0, 0.0};
  rows[1] = {"trace", 2.5, std::nullopt, 3.25, 0.0, 0.0, 1e-9};
  CHECK(rows_to_csv(rows) ==
        "experiment,lambda,varpi,measured,predicted,ratio,trunc_error\n"
        "weyl,10,1,5,5,1,0\n"
        "trace,2.5,,3.25,0,0,1e-09\n");
}

TEST_CASE("cache keys separate configurations") {
  scratch_root();
  std::string a = cache_key("1", {-1, 1}, 1, 100);
  CHECK(a.size() == 16);
  CHECK(a != cache_key("1+0.5*w1", {-1, 1}, 1, 100));
  CHECK(a != cache_key("1", {}, 1, 100));
  CHECK(a != cache_key("1", {-1, 1}, 1, 101));
  CHECK(a == cache_key("1", {-1, 1}, 1, 100));
  CHECK(cache_file_path(a).find((scratch_root() / "cache").string()) == 0);
}

TEST_CASE("cache round-trips a spectrum bit-for-bit") {
  scratch_root();
  SymbolFunction f = SymbolFunction::parse("1+0.5*w1");
  SpectrumRecord rec = compute_spectrum(f, {}, 1, 12, 0, true);
  cache_store(rec);
  std::string note;
  auto back = cache_load("1+0.5*w1", {}, 1, 12, true, &note);
  REQUIRE(back.has_value());
  CHECK(note == "cache: hit");
  CHECK(back->k_max == rec.k_max);
  CHECK(back->fmin == rec.fmin);
  CHECK(back->fmax == rec.fmax);
  CHECK(back->max_resid == rec.max_resid);
  REQUIRE(back->blocks.size() == rec.blocks.size());
  for (size_t i = 0; i < rec.blocks.size(); ++i) {
    const auto& a = rec.blocks[i];
    const auto& b = back->blocks[i];
    REQUIRE(a.evals.size() == b.evals.size());
    for (int j = 0; j < a.evals.size(); ++j)
      CHECK(a.evals[j] == b.evals[j]);  // bitwise
    REQUIRE(a.evecs.size() == b.evecs.size());
    CHECK((a.evecs - b.evecs).norm() == 0.0);
    CHECK(a.alphas == b.alphas);
  }
}

TEST_CASE("cache misses are explained") {
  scratch_root();
  std::string note;

  CHECK(!cache_load("77+w1", {}, 1, 9, false, &note).has_value());
  CHECK(note == "cache: no entry");

  // stored without vectors, requested with vectors
  SymbolFunction f = SymbolFunction::parse("1");
  SpectrumRecord novec = compute_spectrum(f, {}, 1, 7, 0, false);
  cache_store(novec);
  CHECK(!cache_load("1", {}, 1, 7, true, &note).has_value());
  CHECK(note.find("lacks eigenvectors") != std::string::npos);
  CHECK(cache_load("1", {}, 1, 7, false, &note).has_value());
  CHECK(note == "cache: hit");

  std::string path = cache_file_path(cache_key("1", {}, 1, 7));

  // version bump invalidates
  {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    j["version"] = "0";
    write_file(path, j.dump());
    CHECK(!cache_load("1", {}, 1, 7, false, &note).has_value());
    CHECK(note.find("version mismatch") != std::string::npos);
  }
  // silent data corruption is caught by the sampled re-verification
  {
    cache_store(novec);
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    double v = j["blocks"][0]["evals"][0].get<double>();
    j["blocks"][0]["evals"][0] = v + 1e-3;
    write_file(path, j.dump());
    CHECK(!cache_load("1", {}, 1, 7, false, &note).has_value());
    CHECK(note.find("sample verification failed") != std::string::npos);
  }
  // unparseable file
  {
    write_file(path, "definitely not json");
    CHECK(!cache_load("1", {}, 1, 7, false, &note).has_value());
    CHECK(note.find("unreadable") != std::string::npos);
  }
}

TEST_CASE("obtain_record computes once then hits the cache") {
  scratch_root();
  ExperimentConfig cfg = parse_config_text("symbol = w0+w1\nk_max = 8\n");
  std::string note1, note2;
  SpectrumRecord r1 = obtain_record(cfg, 1, false, &note1);
  CHECK(note1.find("computed and stored") != std::string::npos);
  SpectrumRecord r2 = obtain_record(cfg, 1, false, &note2);
  CHECK(note2 == "cache: hit");
  REQUIRE(r1.blocks.size() == r2.blocks.size());
  for (size_t i = 0; i < r1.blocks.size(); ++i)
    for (int j = 0; j < r1.blocks[i].evals.size(); ++j)
      CHECK(r1.blocks[i].evals[j] == r2.blocks[i].evals[j]);
}

TEST_CASE("weyl runs write byte-identical outputs for identical inputs") {
  scratch_root();
  fs::path cfg_path = scratch_root() / "weyl.cfg";
  fs::path out_a = scratch_root() / "outA";
  fs::path out_b = scratch_root() / "outB";
  write_file(cfg_path,
             "model.d = 1\n"
             "symbol = 1\n"
             "action.weights = -1,1\n"
             "k_max = 40\n"
             "lambda.start = 10\n"
             "lambda.stop = 30\n"
             "lambda.count = 3\n"
             "isotypes = 0,1\n");
  RunOptions opt;
  opt.jobs = 1;
  opt.out_dir = out_a.string();
  CHECK(run_subcommand("weyl", cfg_path.string(), opt) == 0);
  opt.out_dir = out_b.string();
  CHECK(run_subcommand("weyl", cfg_path.string(), opt) == 0);

  std::string csv_a = read_file(out_a / "weyl.csv");
  CHECK(csv_a == read_file(out_b / "weyl.csv"));
  CHECK(csv_a.rfind("experiment,lambda,varpi,measured,predicted,ratio,"
                    "trunc_error\n",
                    0) == 0);
  // 2 isotypes x 3 grid points
  CHECK(std::count(csv_a.begin(), csv_a.end(), '\n') == 7);

  nlohmann::json meta =
      nlohmann::json::parse(read_file(out_a / "weyl.json"));
  CHECK(meta["experiment"] == "weyl");
  CHECK(meta["rows"].size() == 6);
  CHECK(meta["config"]["k_max"] == 40);
}

TEST_CASE("spectrum run lists every level of the ladder") {
  scratch_root();
  fs::path cfg_path = scratch_root() / "spectrum.cfg";
  fs::path out = scratch_root() / "outS";
  write_file(cfg_path,
             "model.d = 1\n"
             "symbol = 1\n"
             "k_max = 5\n");
  RunOptions opt;
  opt.jobs = 1;
  opt.out_dir = out.string();
  CHECK(run_subcommand("spectrum", cfg_path.string(), opt) == 0);
  std::string csv = read_file(out / "spectrum.csv");
  // header + sum of block dimensions 2+3+4+5+6
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("check subcommands run without a config file") {
  scratch_root();
  RunOptions opt;
  opt.jobs = 1;
  opt.check = true;
  opt.instances = 25;
  opt.out_dir = (scratch_root() / "outH").string();
  CHECK(run_subcommand("hessian-check", "", opt) == 0);
  nlohmann::json meta = nlohmann::json::parse(
      read_file(scratch_root() / "outH" / "hessian-check.json"));
  CHECK(meta["metadata"]["instances"] == 25);
  CHECK(meta["metadata"]["nonzero_signatures"] == 0);

  CHECK_THROWS_AS(run_subcommand("weyl", "", opt), Error);
  CHECK_THROWS_AS(run_subcommand("nonsense", "", opt), Error);
}
