#include "twl/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace twl {

namespace {

void solve_block(const CMat& T, SpectralSubBlock& out, bool with_vectors) {
  int n = static_cast<int>(T.rows());
  double scale = T.norm();  // Frobenius
  if (n == 1) {
    out.evals.resize(1);
    out.evals[0] = T(0, 0).real();
    if (with_vectors) {
      out.evecs.resize(1, 1);
      out.evecs(0, 0) = 1.0;
    }
    out.resid = 0.0;
    return;
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(T);
  require(es.info() == Eigen::Success, ErrorCode::numeric,
          "compute_spectrum: eigensolver failed to converge");
  out.evals = es.eigenvalues();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double r =
        (T * es.eigenvectors().col(j) - out.evals[j] * es.eigenvectors().col(j))
            .norm();
    worst = std::max(worst, r);
  }
  out.resid = worst / std::max(scale, 1e-300);
  require(out.resid <= 1e-10, ErrorCode::numeric,
          "compute_spectrum: eigenpair residual above 1e-10 of the block "
          "norm");
  if (with_vectors) out.evecs = es.eigenvectors();
}

void run_pool(int n_tasks, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, n_tasks);
  if (jobs <= 1) {
    for (int t = 0; t < n_tasks; ++t) work(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int u = next.fetch_add(1); u < n_tasks; u = next.fetch_add(1))
        work(u);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

SpectrumRecord compute_spectrum(const SymbolFunction& f, const Weights& p,
                                int d, int k_max, int jobs,
                                bool with_vectors) {
  require(k_max >= 1, ErrorCode::precondition, "compute_spectrum: k_max >= 1");
  require(f.min_ambient_vars() <= d + 1, ErrorCode::precondition,
          "compute_spectrum: symbol references coordinates beyond C^{d+1}");
  require(f.fiber_invariant(), ErrorCode::precondition,
          "compute_spectrum: symbol must be invariant under the overall "
          "phase");
  bool with_action = !p.empty();
  if (with_action) {
    require(static_cast<int>(p.size()) == d + 1, ErrorCode::precondition,
            "compute_spectrum: need one weight per ambient coordinate");
    require(f.invariant_under(p), ErrorCode::precondition,
            "compute_spectrum: symbol is not invariant under the action");
  }
  SymbolFunction::Bounds bounds = f.bounds_on_sphere(d);
  require(bounds.lo > 0.0, ErrorCode::precondition,
          "compute_spectrum: symbol must be positive on the sphere");

  SpectrumRecord rec;
  rec.symbol_text = f.text();
  rec.weights = p;
  rec.d = d;
  rec.k_max = k_max;
  rec.with_vectors = with_vectors;
  rec.fmin = bounds.lo;
  rec.fmax = bounds.hi;
  rec.bounds_exact = bounds.exact;

  // pre-size the (k, varpi) layout in deterministic order, then fill slots
  // from the worker pool
  std::vector<std::vector<SpectralSubBlock>> per_k(k_max + 1);
  run_pool(k_max + 1, jobs, [&](int k) {
    if (k == 0) return;  // T_0 = 0: no spectral content at degree zero
    HardyBlock B = monomial_norms(k, d);
    std::vector<std::pair<int, std::vector<int>>> parts;
    if (with_action) {
      std::vector<int> ws = isotype_weights_in_block(B, p);
      for (int w : ws) parts.emplace_back(w, isotype_basis(B, p, w));
    } else {
      std::vector<int> all(B.dim());
      for (int i = 0; i < B.dim(); ++i) all[i] = i;
      parts.emplace_back(0, std::move(all));
    }
    for (auto& [w, basis] : parts) {
      SpectralSubBlock sb;
      sb.k = k;
      sb.has_varpi = with_action;
      sb.varpi = with_action ? w : 0;
      sb.alphas.reserve(basis.size());
      sb.log_norm2.resize(static_cast<int>(basis.size()));
      for (size_t i = 0; i < basis.size(); ++i) {
        sb.alphas.push_back(B.alphas[basis[i]]);
        sb.log_norm2[static_cast<int>(i)] = B.log_norm2[basis[i]];
      }
      CMat T = toeplitz_sub_block(f, B, basis);
      solve_block(T, sb, with_vectors);
      // range invariant: spectrum inside k [fmin, fmax] (exact bounds), or
      // inside a slack window when the bounds themselves were sampled
      double slack = bounds.exact
                         ? 1e-8 * k * std::max(1.0, std::abs(rec.fmax))
                         : 0.02 * k * (rec.fmax - rec.fmin + 1.0);
      require(sb.evals.minCoeff() >= k * rec.fmin - slack &&
                  sb.evals.maxCoeff() <= k * rec.fmax + slack,
              ErrorCode::numeric,
              "compute_spectrum: eigenvalue escaped the symbol range");
      per_k[k].push_back(std::move(sb));
    }
  });
  for (int k = 1; k <= k_max; ++k)
    for (auto& sb : per_k[k]) {
      rec.max_resid = std::max(rec.max_resid, sb.resid);
      rec.blocks.push_back(std::move(sb));
    }
  return rec;
}

namespace {

bool varpi_matches(const SpectralSubBlock& sb, const std::optional<int>& w) {
  if (!w.has_value()) return true;
  return sb.has_varpi && sb.varpi == *w;
}

void check_isotype_exists(const SpectrumRecord& rec,
                          const std::optional<int>& w) {
  if (!w.has_value()) return;
  for (const auto& sb : rec.blocks)
    if (sb.has_varpi && sb.varpi == *w) return;
  fail(ErrorCode::config,
       "isotype " + std::to_string(*w) +
           " does not occur in this spectrum record");
}

void check_complete(const SpectrumRecord& rec, double lambda_needed,
                    const char* who) {
  double bound = rec.k_max * rec.fmin;
  if (lambda_needed > bound) {
    int need = static_cast<int>(std::ceil(lambda_needed / rec.fmin));
    fail(ErrorCode::precondition,
         std::string(who) +
             ": spectrum incomplete at this lambda; recompute with k_max >= " +
             std::to_string(need));
  }
}

}  // namespace

long counting(const SpectrumRecord& rec, const CountingQuery& q) {
  check_complete(rec, q.lambda, "counting");
  check_isotype_exists(rec, q.varpi);
  long n = 0;
  for (const auto& sb : rec.blocks) {
    if (!varpi_matches(sb, q.varpi)) continue;
    for (int j = 0; j < sb.evals.size(); ++j)
      if (sb.evals[j] <= q.lambda) ++n;
  }
  return n;
}

double smoothed_trace(const SpectrumRecord& rec, const GoodCutoff& cutoff,
                      double lambda, std::optional<int> varpi,
                      double* trunc_err) {
  check_complete(rec, lambda + cutoff.lambda_tail, "smoothed_trace");
  check_isotype_exists(rec, varpi);
  double acc = 0.0;
  for (const auto& sb : rec.blocks) {
    if (!varpi_matches(sb, varpi)) continue;
    for (int j = 0; j < sb.evals.size(); ++j)
      acc += cutoff.chat(lambda - sb.evals[j]);
  }
  if (trunc_err)
    *trunc_err = spectral_tail_bound(cutoff, lambda, rec.fmin, rec.k_max,
                                     rec.d, /*kernel_weighted=*/false);
  return acc;
}

double spectral_tail_bound(const GoodCutoff& cutoff, double lambda,
                           double fmin, int k_max, int d,
                           bool kernel_weighted) {
  require(d <= 2, ErrorCode::precondition,
          "spectral_tail_bound: closed-form remainder needs d <= 2");
  require(fmin > 0.0, ErrorCode::precondition,
          "spectral_tail_bound: needs a positive lower bound");
  // every omitted eigenvalue sits in some level k > k_max and is >= k*fmin;
  // the window weight there is at most min(envelope(k*fmin - lambda),
  // ipp_bound / (k*fmin - lambda)^4).  Per level there are C(k+d, d) states;
  // for kernel sums Cauchy-Schwarz gives the extra reproducing-diagonal
  // factor d!/pi^d per state.
  double diag = kernel_weighted
                    ? std::exp(log_factorial(d)) / std::pow(kPi, d)
                    : 1.0;
  double grid_end = cutoff.ds * static_cast<double>(cutoff.chat_grid.size() - 1);
  double acc = 0.0;
  int k = k_max + 1;
  for (; ; ++k) {
    double s = k * fmin - lambda;
    require(s > 0.0, ErrorCode::precondition,
            "spectral_tail_bound: spectrum not complete past lambda");
    if (s > grid_end) break;
    double env = std::min(cutoff.chat_envelope(s),
                          cutoff.ipp_bound / (s * s * s * s));
    double dimk = std::exp(log_factorial(k + d) - log_factorial(k) -
                           log_factorial(d));
    acc += env * dimk * diag;
  }
  // remainder over k with s(k) = k*fmin - lambda > grid_end, via
  // C(k+d,d) <= (k+d)^d/d! and the s^-4 bound: substitute u = s(k),
  // (k+d)^d = ((u + lambda)/fmin + d)^d, and integrate u^(i-4) upward.
  double s0 = k * fmin - lambda;
  double lam_eff = lambda + d * fmin;
  double rem = 0.0;
  for (int i = 0; i <= d; ++i) {
    double binom = std::exp(log_factorial(d) - log_factorial(i) -
                            log_factorial(d - i));
    rem += binom * std::pow(lam_eff, d - i) *
           std::pow(s0, i - 3) / static_cast<double>(3 - i);
  }
  rem *= cutoff.ipp_bound * diag /
         (std::exp(log_factorial(d)) * std::pow(fmin, d + 1));
  // the sum over k >= k of term(k) is dominated by the integral from s0 - fmin,
  // but term(k) itself is included via starting the integral at s0 and adding
  // the first term explicitly
  double env0 = cutoff.ipp_bound / (s0 * s0 * s0 * s0);
  double dim0 = std::exp(log_factorial(k + d) - log_factorial(k) -
                         log_factorial(d));
  return acc + rem + env0 * dim0 * diag;
}

cplx smoothed_kernel(const SpectrumRecord& rec, const GoodCutoff& cutoff,
                     double lambda, std::optional<int> varpi,
                     const AmbientPoint& x1, const AmbientPoint& x2,
                     double* trunc_err) {
  require(rec.with_vectors, ErrorCode::precondition,
          "smoothed_kernel: record was computed without eigenvectors");
  check_complete(rec, lambda + cutoff.lambda_tail, "smoothed_kernel");
  check_isotype_exists(rec, varpi);
  require(x1.z.size() == rec.d + 1 && x2.z.size() == rec.d + 1,
          ErrorCode::precondition, "smoothed_kernel: dimension mismatch");
  PointEvaluator L1(x1.z);
  PointEvaluator L2(x2.z);
  bool same_point = (x1.z - x2.z).norm() == 0.0;
  cplx acc = 0.0;
  for (const auto& sb : rec.blocks) {
    if (!varpi_matches(sb, varpi)) continue;
    int n = static_cast<int>(sb.evals.size());
    // basis values at both points
    CVec s1(n), s2(n);
    for (int i = 0; i < n; ++i) {
      s1[i] = L1.monomial(sb.alphas[i], sb.log_norm2[i]);
      s2[i] = same_point ? s1[i] : L2.monomial(sb.alphas[i], sb.log_norm2[i]);
    }
    for (int j = 0; j < n; ++j) {
      double w = cutoff.chat(lambda - sb.evals[j]);
      if (w == 0.0) continue;
      // e_j(x) = sum_i evecs(i, j) s_i(x): plain (unconjugated) contraction
      cplx ej1 = (sb.evecs.col(j).array() * s1.array()).sum();
      cplx ej2 = (sb.evecs.col(j).array() * s2.array()).sum();
      acc += w * ej1 * std::conj(ej2);
    }
  }
  if (trunc_err)
    *trunc_err = spectral_tail_bound(cutoff, lambda, rec.fmin, rec.k_max,
                                     rec.d, /*kernel_weighted=*/true);
  return acc;
}

double smoothed_trace_cumulative(const SpectrumRecord& rec,
                                 const GoodCutoff& cutoff, double lambda,
                                 std::optional<int> varpi) {
  check_complete(rec, lambda + cutoff.lambda_tail, "smoothed_trace");
  check_isotype_exists(rec, varpi);
  double acc = 0.0;
  for (const auto& sb : rec.blocks) {
    if (!varpi_matches(sb, varpi)) continue;
    for (int j = 0; j < sb.evals.size(); ++j)
      acc += cutoff.cumulative_at(lambda - sb.evals[j]);
  }
  return acc;
}

std::pair<double, double> weyl_fit(const SpectrumRecord& rec,
                                   const std::vector<double>& lambdas,
                                   std::optional<int> varpi) {
  require(lambdas.size() >= 10, ErrorCode::precondition,
          "weyl_fit: need at least 10 grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double lam : lambdas) {
    long c = counting(rec, CountingQuery{lam, varpi});
    require(c > 0, ErrorCode::precondition,
            "weyl_fit: empty count in the grid (degenerate regression)");
    double X = std::log(lam), Y = std::log(static_cast<double>(c));
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
    ++n;
  }
  double denom = n * sxx - sx * sx;
  require(std::abs(denom) > 1e-12, ErrorCode::precondition,
          "weyl_fit: degenerate lambda grid");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

}  // namespace twl
