#include "twl/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace twl {

using nlohmann::json;

std::string cache_key(const std::string& symbol_text, const Weights& w, int d,
                      int k_max) {
  std::string s = symbol_text + "|";
  for (int x : w) s += std::to_string(x) + ",";
  s += "|" + std::to_string(d) + "|" + std::to_string(k_max);
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string cache_directory() {
  if (const char* env = std::getenv("TWL_CACHE_DIR"); env && *env)
    return env;
  return ".twl-cache";
}

std::string cache_file_path(const std::string& key) {
  return cache_directory() + "/twl-" + key + ".json";
}

void cache_store(const SpectrumRecord& rec) {
  json j;
  j["version"] = kCacheVersion;
  j["symbol"] = rec.symbol_text;
  j["weights"] = rec.weights;
  j["d"] = rec.d;
  j["k_max"] = rec.k_max;
  j["with_vectors"] = rec.with_vectors;
  j["fmin"] = rec.fmin;
  j["fmax"] = rec.fmax;
  j["bounds_exact"] = rec.bounds_exact;
  j["max_resid"] = rec.max_resid;
  json blocks = json::array();
  for (const auto& sb : rec.blocks) {
    json b;
    b["k"] = sb.k;
    if (sb.has_varpi) b["varpi"] = sb.varpi;
    b["alphas"] = sb.alphas;
    b["log_norm2"] = std::vector<double>(
        sb.log_norm2.data(), sb.log_norm2.data() + sb.log_norm2.size());
    b["evals"] = std::vector<double>(sb.evals.data(),
                                     sb.evals.data() + sb.evals.size());
    if (sb.evecs.size() > 0) {
      std::vector<double> re, im;
      re.reserve(sb.evecs.size());
      im.reserve(sb.evecs.size());
      for (int c = 0; c < sb.evecs.cols(); ++c)
        for (int r = 0; r < sb.evecs.rows(); ++r) {
          re.push_back(sb.evecs(r, c).real());
          im.push_back(sb.evecs(r, c).imag());
        }
      b["evecs_re"] = re;
      b["evecs_im"] = im;
    }
    b["resid"] = sb.resid;
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);

  std::filesystem::create_directories(cache_directory());
  std::string path = cache_file_path(
      cache_key(rec.symbol_text, rec.weights, rec.d, rec.k_max));
  std::ofstream out(path, std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io,
          "cache_store: cannot write " + path);
  out << j.dump();
  require(static_cast<bool>(out), ErrorCode::io,
          "cache_store: write failed for " + path);
}

namespace {

// sampled consistency check: reassemble the operator for ~1% of the blocks
// and confirm the stored decomposition still satisfies it
bool verify_sample(const SpectrumRecord& rec) {
  if (rec.blocks.empty()) return true;
  SymbolFunction f = SymbolFunction::parse(rec.symbol_text);
  size_t n = rec.blocks.size();
  std::vector<size_t> picks;
  for (size_t i = 0; i < n; i += 97) picks.push_back(i);
  if (picks.back() != n - 1) picks.push_back(n - 1);
  for (size_t i : picks) {
    const auto& sb = rec.blocks[i];
    if (sb.alphas.empty() ||
        sb.evals.size() != static_cast<int>(sb.alphas.size()))
      return false;
    HardyBlock B = monomial_norms(sb.k, rec.d);
    std::vector<int> basis;
    basis.reserve(sb.alphas.size());
    for (const auto& a : sb.alphas) {
      int idx = B.index_of(a);
      if (idx < 0) return false;
      basis.push_back(idx);
    }
    CMat T;
    try {
      T = toeplitz_sub_block(f, B, basis);
    } catch (const Error&) {
      return false;
    }
    double scale = std::max(1.0, T.norm());
    if (sb.evecs.size() > 0) {
      if (sb.evecs.rows() != T.rows() || sb.evecs.cols() != T.cols())
        return false;
      CMat R = T * sb.evecs - sb.evecs * sb.evals.asDiagonal();
      if (R.norm() > 1e-8 * scale) return false;
    } else {
      Eigen::SelfAdjointEigenSolver<CMat> es(T, Eigen::EigenvaluesOnly);
      if ((es.eigenvalues() - sb.evals).cwiseAbs().maxCoeff() >
          1e-8 * scale)
        return false;
    }
  }
  return true;
}

}  // namespace

std::optional<SpectrumRecord> cache_load(const std::string& symbol_text,
                                         const Weights& w, int d, int k_max,
                                         bool need_vectors,
                                         std::string* note) {
  auto miss = [&](const std::string& why) -> std::optional<SpectrumRecord> {
    if (note) *note = why;
    return std::nullopt;
  };
  std::string path = cache_file_path(cache_key(symbol_text, w, d, k_max));
  std::ifstream in(path);
  if (!in) return miss("cache: no entry");
  json j;
  try {
    in >> j;
  } catch (const std::exception&) {
    return miss("cache: unreadable entry, recomputing");
  }
  try {
    if (!j.contains("version") || j["version"].get<std::string>() !=
                                      std::string(kCacheVersion))
      return miss("cache: version mismatch, recomputing");
    SpectrumRecord rec;
    rec.symbol_text = j.at("symbol").get<std::string>();
    rec.weights = j.at("weights").get<Weights>();
    rec.d = j.at("d").get<int>();
    rec.k_max = j.at("k_max").get<int>();
    rec.with_vectors = j.at("with_vectors").get<bool>();
    rec.fmin = j.at("fmin").get<double>();
    rec.fmax = j.at("fmax").get<double>();
    rec.bounds_exact = j.at("bounds_exact").get<bool>();
    rec.max_resid = j.at("max_resid").get<double>();
    if (rec.symbol_text != symbol_text || rec.weights != w || rec.d != d ||
        rec.k_max != k_max)
      return miss("cache: metadata mismatch, recomputing");
    if (need_vectors && !rec.with_vectors)
      return miss("cache: entry lacks eigenvectors, recomputing");
    for (const auto& b : j.at("blocks")) {
      SpectralSubBlock sb;
      sb.k = b.at("k").get<int>();
      if (b.contains("varpi")) {
        sb.has_varpi = true;
        sb.varpi = b["varpi"].get<int>();
      }
      sb.alphas = b.at("alphas").get<std::vector<MultiIndex>>();
      auto ln = b.at("log_norm2").get<std::vector<double>>();
      auto ev = b.at("evals").get<std::vector<double>>();
      sb.log_norm2 =
          Eigen::Map<const RVec>(ln.data(), static_cast<int>(ln.size()));
      sb.evals =
          Eigen::Map<const RVec>(ev.data(), static_cast<int>(ev.size()));
      if (b.contains("evecs_re")) {
        auto re = b["evecs_re"].get<std::vector<double>>();
        auto im = b["evecs_im"].get<std::vector<double>>();
        int nn = static_cast<int>(sb.evals.size());
        if (static_cast<int>(re.size()) != nn * nn || re.size() != im.size())
          return miss("cache: corrupt entry, recomputing");
        sb.evecs.resize(nn, nn);
        int pos = 0;
        for (int c = 0; c < nn; ++c)
          for (int r = 0; r < nn; ++r, ++pos)
            sb.evecs(r, c) = cplx(re[pos], im[pos]);
      }
      sb.resid = b.at("resid").get<double>();
      rec.blocks.push_back(std::move(sb));
    }
    if (!verify_sample(rec))
      return miss("cache: sample verification failed, recomputing");
    if (note) *note = "cache: hit";
    return rec;
  } catch (const json::exception&) {
    return miss("cache: corrupt entry, recomputing");
  }
}

}  // namespace twl
