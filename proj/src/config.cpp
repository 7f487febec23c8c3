#include "twl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace twl {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  fail(ErrorCode::config, "config: field '" + key + "': " + what);
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) bad_field(key, "trailing characters in '" + v + "'");
    return n;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad_field(key, "expected an integer, got '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) bad_field(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad_field(key, "expected a number, got '" + v + "'");
  }
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.push_back("");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_commas(v)) {
    if (item.empty()) bad_field(key, "empty list entry");
    long long n = parse_int(key, item);
    if (n < -1000000 || n > 1000000) bad_field(key, "entry out of range");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::config, "config: line " + std::to_string(lineno) +
                                  ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::config,
           "config: line " + std::to_string(lineno) + ": empty key");

    if (key == "model.d") {
      long long d = parse_int(key, val);
      if (d < 1 || d > 9) bad_field(key, "must be in 1..9");
      cfg.d = static_cast<int>(d);
    } else if (key == "symbol") {
      if (val.empty()) bad_field(key, "must not be empty");
      cfg.symbol = val;
    } else if (key == "action.weights") {
      if (val == "none")
        cfg.weights.clear();
      else
        cfg.weights = parse_int_list(key, val);
    } else if (key == "k_max") {
      long long k = parse_int(key, val);
      if (k < 1 || k > 100000) bad_field(key, "must be in 1..100000");
      cfg.k_max = static_cast<int>(k);
    } else if (key == "cutoff.epsilon") {
      double e = parse_real(key, val);
      if (!(e > 0.0) || e > 4.0) bad_field(key, "must be in (0, 4]");
      cfg.epsilon = e;
    } else if (key == "lambda.start") {
      cfg.lambda.start = parse_real(key, val);
      if (cfg.lambda.count == 0) cfg.lambda.count = 1;
    } else if (key == "lambda.stop") {
      cfg.lambda.stop = parse_real(key, val);
      if (cfg.lambda.count == 0) cfg.lambda.count = 1;
    } else if (key == "lambda.count") {
      long long c = parse_int(key, val);
      if (c < 1 || c > 1000000) bad_field(key, "must be in 1..1000000");
      cfg.lambda.count = static_cast<int>(c);
    } else if (key == "isotypes") {
      cfg.isotypes = val.empty() ? std::vector<int>{} : parse_int_list(key, val);
    } else if (key == "base_point") {
      std::vector<std::string> parts = split_commas(val);
      if (parts.empty() || parts.size() % 2 != 0)
        bad_field(key, "expected interleaved re,im pairs");
      CVec z(static_cast<int>(parts.size() / 2));
      for (size_t i = 0; i + 1 < parts.size(); i += 2)
        z[static_cast<int>(i / 2)] =
            cplx(parse_real(key, parts[i]), parse_real(key, parts[i + 1]));
      cfg.base_point = z;
    } else if (key == "seed") {
      long long s = parse_int(key, val);
      if (s < 0) bad_field(key, "must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "output.dir") {
      if (val.empty()) bad_field(key, "must not be empty");
      cfg.output_dir = val;
    } else {
      fail(ErrorCode::config, "config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io,
          "config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

SymbolFunction validate_config(const ExperimentConfig& cfg) {
  require(cfg.k_max >= 1, ErrorCode::config,
          "config: field 'k_max': required and must be >= 1");
  SymbolFunction f = [&] {
    try {
      return SymbolFunction::parse(cfg.symbol);
    } catch (const Error& e) {
      fail(ErrorCode::config,
           std::string("config: field 'symbol': ") + e.what());
    }
  }();
  if (f.min_ambient_vars() > cfg.d + 1)
    fail(ErrorCode::config,
         "config: field 'symbol': references more coordinates than model.d "
         "allows");
  if (!cfg.weights.empty() &&
      cfg.weights.size() != static_cast<size_t>(cfg.d) + 1)
    fail(ErrorCode::config,
         "config: field 'action.weights': needs exactly d+1 entries");
  auto b = f.bounds_on_sphere(cfg.d);
  if (!(b.lo > 0.0))
    fail(ErrorCode::config,
         "config: field 'symbol': must be positive on the sphere");
  if (cfg.lambda.count > 0) {
    if (cfg.lambda.count > 1 && !(cfg.lambda.stop >= cfg.lambda.start))
      fail(ErrorCode::config,
           "config: field 'lambda.stop': must be >= lambda.start");
    double top = cfg.lambda.count > 1 ? cfg.lambda.stop : cfg.lambda.start;
    double bound = cfg.k_max * b.lo;
    if (top > bound) {
      int need = static_cast<int>(std::ceil(top / b.lo));
      fail(ErrorCode::config,
           "config: field 'lambda.stop': exceeds the completeness bound "
           "k_max * min f = " +
               std::to_string(bound) + "; need k_max >= " +
               std::to_string(need));
    }
  }
  if (cfg.base_point) {
    if (cfg.base_point->size() != cfg.d + 1)
      fail(ErrorCode::config,
           "config: field 'base_point': needs d+1 complex coordinates");
    if (std::abs(cfg.base_point->norm() - 1.0) > 1e-9)
      fail(ErrorCode::config,
           "config: field 'base_point': must lie on the unit sphere");
  }
  return f;
}

std::vector<double> lambda_values(const LambdaGrid& g) {
  std::vector<double> out;
  if (g.count <= 0) return out;
  if (g.count == 1) {
    out.push_back(g.start);
    return out;
  }
  for (int i = 0; i < g.count; ++i)
    out.push_back(g.start + (g.stop - g.start) * i / (g.count - 1));
  return out;
}

}  // namespace twl
