#include "twl/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "twl/asymptotics.hpp"
#include "twl/cache.hpp"
#include "twl/dynamics.hpp"

namespace twl {

using nlohmann::json;

std::string format_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "experiment,lambda,varpi,measured,predicted,ratio,trunc_error\n";
  for (const auto& r : rows) {
    out += r.experiment + "," + format_g(r.lambda) + ",";
    if (r.varpi) out += std::to_string(*r.varpi);
    out += "," + format_g(r.measured) + "," + format_g(r.predicted) + "," +
           format_g(r.ratio) + "," + format_g(r.trunc) + "\n";
  }
  return out;
}

SpectrumRecord obtain_record(const ExperimentConfig& cfg, int jobs,
                             bool with_vectors, std::string* cache_note) {
  auto hit = cache_load(cfg.symbol, cfg.weights, cfg.d, cfg.k_max,
                        with_vectors, cache_note);
  if (hit) return std::move(*hit);
  SymbolFunction f = validate_config(cfg);
  SpectrumRecord rec = compute_spectrum(f, cfg.weights, cfg.d, cfg.k_max,
                                        jobs, with_vectors);
  cache_store(rec);
  if (cache_note) *cache_note += " (computed and stored)";
  return rec;
}

namespace {

double safe_ratio(double m, double p) { return p != 0.0 ? m / p : 0.0; }

// chosen kernel/weyl base point: explicit config value, the first coordinate
// axis when there is no action, or the standard locus point for a mixed-sign
// weight pair in d = 1
AmbientPoint base_point_for(const ExperimentConfig& cfg) {
  if (cfg.base_point) return make_point(*cfg.base_point);
  if (cfg.weights.empty()) {
    CVec z = CVec::Zero(cfg.d + 1);
    z[0] = 1.0;
    return make_point(z);
  }
  require(cfg.d == 1 && cfg.weights.size() == 2 &&
              cfg.weights[0] * cfg.weights[1] < 0,
          ErrorCode::config,
          "config: field 'base_point': required for this action");
  double c0sq = static_cast<double>(cfg.weights[1]) /
                static_cast<double>(cfg.weights[1] - cfg.weights[0]);
  CVec z(2);
  z[0] = std::sqrt(c0sq);
  z[1] = std::sqrt(1.0 - c0sq);
  return make_point(z);
}

std::vector<std::optional<int>> isotype_list(const ExperimentConfig& cfg) {
  std::vector<std::optional<int>> out;
  if (cfg.isotypes.empty()) {
    out.push_back(std::nullopt);
  } else {
    for (int w : cfg.isotypes) out.push_back(w);
  }
  return out;
}

json row_json(const ResultRow& r) {
  json j;
  j["experiment"] = r.experiment;
  j["lambda"] = r.lambda;
  if (r.varpi)
    j["varpi"] = *r.varpi;
  else
    j["varpi"] = nullptr;
  j["measured"] = r.measured;
  j["predicted"] = r.predicted;
  j["ratio"] = r.ratio;
  j["trunc_error"] = r.trunc;
  return j;
}

void emit(const ExperimentConfig& cfg, const RunOptions& opt,
          const std::string& sub, const std::vector<ResultRow>& rows,
          const json& meta) {
  std::string dir = !opt.out_dir.empty() ? opt.out_dir : cfg.output_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir + "/" + sub + ".csv", std::ios::trunc);
    require(static_cast<bool>(csv), ErrorCode::io,
            "cannot write CSV in " + dir);
    csv << rows_to_csv(rows);
  }
  json j;
  j["experiment"] = sub;
  j["config"] = {{"model.d", cfg.d},
                 {"symbol", cfg.symbol},
                 {"action.weights", cfg.weights},
                 {"k_max", cfg.k_max},
                 {"cutoff.epsilon", cfg.epsilon},
                 {"seed", cfg.seed}};
  j["metadata"] = meta;
  json jr = json::array();
  for (const auto& r : rows) jr.push_back(row_json(r));
  j["rows"] = std::move(jr);
  std::ofstream js(dir + "/" + sub + ".json", std::ios::trunc);
  require(static_cast<bool>(js), ErrorCode::io,
          "cannot write JSON in " + dir);
  js << j.dump(2) << "\n";
}

Prediction prediction_for(const ExperimentConfig& cfg,
                          const SymbolFunction& f, int varpi,
                          const AmbientPoint& x) {
  return make_prediction(f, cfg.weights, cfg.d, x, varpi);
}

int run_spectrum(const ExperimentConfig& cfg, const RunOptions& opt) {
  std::string note;
  SpectrumRecord rec = obtain_record(cfg, opt.jobs, false, &note);
  std::vector<ResultRow> rows;
  for (const auto& sb : rec.blocks)
    for (int i = 0; i < sb.evals.size(); ++i) {
      ResultRow r;
      r.experiment = "spectrum";
      r.lambda = sb.evals[i];
      if (sb.has_varpi) r.varpi = sb.varpi;
      r.measured = sb.evals[i];
      r.trunc = sb.resid;
      rows.push_back(std::move(r));
    }
  json meta;
  meta["cache"] = note;
  meta["max_resid"] = rec.max_resid;
  meta["blocks"] = rec.blocks.size();
  emit(cfg, opt, "spectrum", rows, meta);
  return 0;
}

int run_weyl(const ExperimentConfig& cfg, const RunOptions& opt) {
  require(cfg.lambda.count >= 1, ErrorCode::config,
          "config: field 'lambda.count': weyl needs a lambda grid");
  SymbolFunction f = validate_config(cfg);
  std::string note;
  SpectrumRecord rec = obtain_record(cfg, opt.jobs, false, &note);
  AmbientPoint x = base_point_for(cfg);
  std::vector<double> grid = lambda_values(cfg.lambda);
  std::vector<ResultRow> rows;
  json meta;
  meta["cache"] = note;
  bool ok = true;
  for (auto w : isotype_list(cfg)) {
    Prediction P = prediction_for(cfg, f, w.value_or(0), x);
    for (double lam : grid) {
      ResultRow r;
      r.experiment = "weyl";
      r.lambda = lam;
      r.varpi = w;
      r.measured =
          static_cast<double>(counting(rec, CountingQuery{lam, w}));
      r.predicted = predicted_counting(P, lam);
      r.ratio = safe_ratio(r.measured, r.predicted);
      if (opt.check && !(r.ratio >= 0.9 && r.ratio <= 1.1)) ok = false;
      rows.push_back(std::move(r));
    }
    try {
      auto fit = weyl_fit(rec, grid, w);
      std::string key =
          w ? "fit_exponent_varpi_" + std::to_string(*w) : "fit_exponent";
      meta[key] = fit.first;
    } catch (const Error&) {
      // grid too small for a fit; omit
    }
  }
  emit(cfg, opt, "weyl", rows, meta);
  return ok ? 0 : 3;
}

int run_trace(const ExperimentConfig& cfg, const RunOptions& opt) {
  require(cfg.lambda.count >= 1, ErrorCode::config,
          "config: field 'lambda.count': trace needs a lambda grid");
  SymbolFunction f = validate_config(cfg);
  std::string note;
  SpectrumRecord rec = obtain_record(cfg, opt.jobs, false, &note);
  const GoodCutoff& cut = shared_cutoff(cfg.epsilon, opt.jobs);
  AmbientPoint x = base_point_for(cfg);
  std::vector<ResultRow> rows;
  bool ok = true;
  for (auto w : isotype_list(cfg)) {
    Prediction P = prediction_for(cfg, f, w.value_or(0), x);
    for (double lam : lambda_values(cfg.lambda)) {
      ResultRow r;
      r.experiment = "trace";
      r.lambda = lam;
      r.varpi = w;
      r.measured = smoothed_trace(rec, cut, lam, w, &r.trunc);
      r.predicted = predicted_trace(P, lam);
      r.ratio = safe_ratio(r.measured, r.predicted);
      if (opt.check && !(r.ratio >= 0.9 && r.ratio <= 1.1)) ok = false;
      rows.push_back(std::move(r));
    }
  }
  json meta;
  meta["cache"] = note;
  meta["lambda_tail"] = cut.lambda_tail;
  emit(cfg, opt, "trace", rows, meta);
  return ok ? 0 : 3;
}

int run_kernel(const ExperimentConfig& cfg, const RunOptions& opt) {
  require(cfg.lambda.count >= 1, ErrorCode::config,
          "config: field 'lambda.count': kernel needs a lambda grid");
  SymbolFunction f = validate_config(cfg);
  std::string note;
  SpectrumRecord rec = obtain_record(cfg, opt.jobs, true, &note);
  const GoodCutoff& cut = shared_cutoff(cfg.epsilon, opt.jobs);
  AmbientPoint x = base_point_for(cfg);
  std::vector<ResultRow> rows;
  bool ok = true;
  for (auto w : isotype_list(cfg)) {
    Prediction P = prediction_for(cfg, f, w.value_or(0), x);
    for (double lam : lambda_values(cfg.lambda)) {
      ResultRow r;
      r.experiment = "kernel";
      r.lambda = lam;
      r.varpi = w;
      r.measured =
          smoothed_kernel(rec, cut, lam, w, x, x, &r.trunc).real();
      r.predicted = predicted_kernel_diag(P, 0.0, lam);
      r.ratio = safe_ratio(r.measured, r.predicted);
      if (opt.check && !(r.ratio >= 0.85 && r.ratio <= 1.15)) ok = false;
      rows.push_back(std::move(r));
    }
  }
  json meta;
  meta["cache"] = note;
  meta["base_point_abs"] = x.z.cwiseAbs().maxCoeff();
  emit(cfg, opt, "kernel", rows, meta);
  return ok ? 0 : 3;
}

int run_contact_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  std::uint64_t seed = opt.seed_given ? opt.seed : cfg.seed;
  const std::vector<std::string> texts = {"1", "1+0.5*w1", "1+0.25*rz0"};
  std::vector<ResultRow> rows;
  bool ok = true;
  for (const auto& text : texts) {
    FiberSymbol s = make_fiber_symbol(text, cfg.d);
    SplitMix64 rng(seed ^ 0x5eedc0dedULL);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      CVec z(cfg.d + 1);
      for (int j = 0; j <= cfg.d; ++j)
        z[j] = cplx(rng.normal(), rng.normal());
      AmbientPoint x = normalize_point(z);
      LieReport lie = lie_identities_check(s, x);
      worst = std::max({worst, lie.transport_resid, lie.derivative_resid,
                        lie.conformal_resid});
      if (i % 10 == 0) {
        PullbackReport pb = pullback_check(s, x, 0.6);
        worst = std::max(worst, pb.resid);
      }
    }
    ResultRow r;
    r.experiment = "contact:" + text;
    r.measured = worst;
    r.predicted = 1e-6;
    r.ratio = safe_ratio(worst, 1e-6);
    rows.push_back(std::move(r));
    if (worst >= 1e-6) ok = false;
  }
  json meta;
  meta["points"] = 50;
  meta["seed"] = seed;
  emit(cfg, opt, "contact-check", rows, meta);
  return (!opt.check || ok) ? 0 : 3;
}

int run_hessian_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  std::uint64_t seed = opt.seed_given ? opt.seed : cfg.seed;
  SplitMix64 rng(seed ^ 0x4e55a9ULL);
  int N = opt.instances;
  double worst_sig = 0.0, worst_ups = 0.0, worst_k = 0.0, worst_inv = 0.0;
  int bad_signatures = 0;
  for (int i = 0; i < N; ++i) {
    int dd = 1 + static_cast<int>(rng.next() % 3);
    // signature lemma: real R with positive determinant, symmetric S
    int r = 2 + static_cast<int>(rng.next() % 4);
    RMat R(r, r), S0(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        R(a, b) = rng.normal();
        S0(a, b) = rng.normal();
      }
    if (R.determinant() < 0) R.row(0) *= -1.0;
    RMat S = 0.5 * (S0 + S0.transpose());
    HessianReport h1 = signature_lemma_check(R, S);
    worst_sig = std::max(worst_sig, h1.det_rel_err);
    if (h1.signature != 0) ++bad_signatures;

    // unitary-frame instance shared by the other two lemmas
    CMat G(dd, dd);
    for (int a = 0; a < dd; ++a)
      for (int b = 0; b < dd; ++b)
        G(a, b) = cplx(rng.normal(), rng.normal());
    CMat Q = Eigen::HouseholderQR<CMat>(G).householderQ();
    HessianReport h2 = hessian_upsilon_check(realify(Q), rng.uniform(-2, 2));
    worst_ups = std::max(worst_ups, h2.det_rel_err);
    if (h2.signature != 0) ++bad_signatures;

    RVec D(2 * dd);
    for (int a = 0; a < 2 * dd; ++a) D[a] = rng.normal();
    HessianReport h3 = hessian_K_check(rng.uniform(0.3, 3.0), D, Q, dd,
                                       rng.uniform(-1.0, 1.0));
    worst_k = std::max(worst_k, h3.det_rel_err);
    worst_inv = std::max(worst_inv, h3.inverse_resid);
    if (h3.signature != 0) ++bad_signatures;
  }
  std::vector<ResultRow> rows;
  auto push = [&](const std::string& name, double worst, double tol) {
    ResultRow r;
    r.experiment = name;
    r.lambda = static_cast<double>(N);
    r.measured = worst;
    r.predicted = tol;
    r.ratio = safe_ratio(worst, tol);
    rows.push_back(std::move(r));
  };
  push("hessian:signature", worst_sig, 1e-8);
  push("hessian:upsilon", worst_ups, 1e-8);
  push("hessian:kernel-det", worst_k, 1e-8);
  push("hessian:kernel-inverse", worst_inv, 1e-8);
  json meta;
  meta["instances"] = N;
  meta["seed"] = seed;
  meta["nonzero_signatures"] = bad_signatures;
  emit(cfg, opt, "hessian-check", rows, meta);
  bool ok = bad_signatures == 0 && worst_sig <= 1e-8 && worst_ups <= 1e-8 &&
            worst_k <= 1e-8 && worst_inv <= 1e-8;
  return (!opt.check || ok) ? 0 : 3;
}

int run_szego_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  int k = cfg.k_max >= 1 ? cfg.k_max : 300;
  CVec z = CVec::Zero(cfg.d + 1);
  z[0] = 1.0;
  AmbientPoint x = make_point(z);
  std::vector<cplx> offsets;
  for (double re : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (double im : {-0.5, 0.0, 0.5})
      if (re * re + im * im <= 1.0 + 1e-12) offsets.push_back(cplx(re, im));
  std::vector<ResultRow> rows;
  bool ok = true;
  double worst = 0.0;
  for (const cplx& uu : offsets)
    for (const cplx& vv : offsets) {
      CVec u = CVec::Zero(cfg.d), v = CVec::Zero(cfg.d);
      u[0] = uu;
      v[0] = vv;
      SzegoCheck sc = near_diagonal_szego(k, x, u, v);
      double ratio = std::abs(sc.measured) / std::abs(sc.predicted);
      worst = std::max(worst, std::abs(ratio - 1.0));
      ResultRow r;
      r.experiment = "szego";
      r.lambda = static_cast<double>(k);
      r.measured = std::abs(sc.measured);
      r.predicted = std::abs(sc.predicted);
      r.ratio = ratio;
      rows.push_back(std::move(r));
      if (!(ratio >= 0.95 && ratio <= 1.05)) ok = false;
    }
  json meta;
  meta["k"] = k;
  meta["worst_deviation"] = worst;
  emit(cfg, opt, "szego-check", rows, meta);
  return (!opt.check || ok) ? 0 : 3;
}

}  // namespace

int run_subcommand(const std::string& sub, const std::string& config_path,
                   const RunOptions& opt) {
  ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = load_config(config_path);
  } else {
    require(sub == "contact-check" || sub == "hessian-check" ||
                sub == "szego-check",
            ErrorCode::config, "subcommand '" + sub + "' needs --config");
  }
  if (opt.seed_given) cfg.seed = opt.seed;
  if (sub == "spectrum") return run_spectrum(cfg, opt);
  if (sub == "weyl") return run_weyl(cfg, opt);
  if (sub == "trace") return run_trace(cfg, opt);
  if (sub == "kernel") return run_kernel(cfg, opt);
  if (sub == "contact-check") return run_contact_check(cfg, opt);
  if (sub == "hessian-check") return run_hessian_check(cfg, opt);
  if (sub == "szego-check") return run_szego_check(cfg, opt);
  fail(ErrorCode::config, "unknown subcommand '" + sub + "'");
}

}  // namespace twl
