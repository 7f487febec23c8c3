#include "twl/cutoff.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace twl {

namespace {

constexpr int kGammaIntervals = 4096;   // on [0, eps/2]
constexpr int kGridPerEps = 400;        // chat spacing = eps / 400
constexpr double kTailRel = 1e-12;      // certified envelope level
constexpr double kStopRel = 1e-13;      // stop extending once below this
constexpr int kUnit = 16384;            // fixed work unit (jobs-independent)
constexpr double kMaxS = 4000.0;        // hard cap on the table extent

double bump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

// gammahat(s) = 2 int_0^{T} gamma cos(st) dt by trapezoid; the inner loop is
// a phase recurrence seeded per call, so a fixed block of s values always
// produces identical doubles.
void gammahat_block(const RVec& gamma_half, double dt, double s0, double ds,
                    int count, double* out) {
  const int n = static_cast<int>(gamma_half.size());
  for (int m = 0; m < count; ++m) out[m] = 0.5 * gamma_half[0];
  for (int i = 1; i < n - 1; ++i) {
    double t = i * dt;
    double c = std::cos(s0 * t), s = std::sin(s0 * t);
    const double cd = std::cos(ds * t), sd = std::sin(ds * t);
    const double g = gamma_half[i];
    for (int m = 0; m < count; ++m) {
      out[m] += g * c;
      double cn = c * cd - s * sd;
      s = c * sd + s * cd;
      c = cn;
    }
  }
  for (int m = 0; m < count; ++m) out[m] *= 2.0 * dt;
}

void run_units(int n_units, int jobs, const std::function<void(int)>& work) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, n_units);
  if (jobs <= 1) {
    for (int u = 0; u < n_units; ++u) work(u);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int u = next.fetch_add(1); u < n_units; u = next.fetch_add(1))
        work(u);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

GoodCutoff good_cutoff(double eps, int jobs) {
  require(eps > 0.0 && eps <= 4.0, ErrorCode::precondition,
          "good_cutoff: eps must lie in (0, 4]");
  GoodCutoff C;
  C.eps = eps;
  C.dt = 0.5 * eps / kGammaIntervals;
  C.gamma_half.resize(kGammaIntervals + 1);
  for (int i = 0; i <= kGammaIntervals; ++i)
    C.gamma_half[i] = bump(static_cast<double>(i) / kGammaIntervals);
  // L^2 normalization with the same trapezoid rule used by chi(0)
  double q = 0.5 * C.gamma_half[0] * C.gamma_half[0];
  for (int i = 1; i < kGammaIntervals; ++i)
    q += C.gamma_half[i] * C.gamma_half[i];
  q *= 2.0 * C.dt;  // even extension
  C.gamma_half /= std::sqrt(q);

  // grow the chat table in fixed units until the tail certifies
  C.ds = eps / kGridPerEps;
  std::vector<double> chat;
  const int max_units =
      static_cast<int>(kMaxS / (C.ds * kUnit)) + 1;
  int low_units = 0;  // consecutive units entirely below the stop level
  int used_units = 0;
  double peak = 0.0;
  {
    // first unit serial to get the peak scale
    std::vector<double> buf(kUnit);
    gammahat_block(C.gamma_half, C.dt, 0.0, C.ds, kUnit, buf.data());
    for (double& v : buf) v = v * v;
    peak = buf[0];
    chat.insert(chat.end(), buf.begin(), buf.end());
    used_units = 1;
  }
  while (used_units < max_units && low_units < 2) {
    // extend by a batch of units in parallel
    int batch = std::min(8, max_units - used_units);
    size_t base = chat.size();
    chat.resize(base + static_cast<size_t>(batch) * kUnit);
    run_units(batch, jobs, [&](int u) {
      double s0 = (base + static_cast<size_t>(u) * kUnit) * C.ds;
      double* out = chat.data() + base + static_cast<size_t>(u) * kUnit;
      gammahat_block(C.gamma_half, C.dt, s0, C.ds, kUnit, out);
      for (int m = 0; m < kUnit; ++m) out[m] = out[m] * out[m];
    });
    for (int u = 0; u < batch; ++u) {
      double mx = 0.0;
      const double* blk = chat.data() + base + static_cast<size_t>(u) * kUnit;
      for (int m = 0; m < kUnit; ++m) mx = std::max(mx, blk[m]);
      if (mx < kStopRel * peak)
        ++low_units;
      else
        low_units = 0;
    }
    used_units += batch;
  }
  require(low_units >= 2, ErrorCode::numeric,
          "good_cutoff: transform tail failed to certify within the cap");

  int Ns = static_cast<int>(chat.size());
  C.chat_grid = Eigen::Map<RVec>(chat.data(), Ns);
  C.chat0 = C.chat_grid[0];
  require(C.chat_grid.minCoeff() > -1e-20 * C.chat0, ErrorCode::numeric,
          "good_cutoff: transform lost positivity");

  C.envelope_grid.resize(Ns);
  double run = 0.0;
  for (int j = Ns - 1; j >= 0; --j) {
    run = std::max(run, C.chat_grid[j]);
    C.envelope_grid[j] = run;
  }
  // certified tail point: envelope below 1e-12 * peak from there on
  int jt = Ns - 1;
  while (jt > 0 && C.envelope_grid[jt - 1] <= kTailRel * C.chat0) --jt;
  C.lambda_tail = jt * C.ds;

  // chat(s) = |gammahat(s)|^2 and two integrations by parts give
  // |gammahat(s)| <= ||gamma''||_L1 / s^2; estimate the L1 norm by central
  // differences of the (even) generator and pad by 1.21 = 1.1^2 after squaring
  {
    double l1 = 0.0;
    int Ng = static_cast<int>(C.gamma_half.size());
    auto g = [&](int i) {
      int a = std::abs(i);
      return a < Ng ? C.gamma_half[a] : 0.0;
    };
    for (int i = -Ng; i <= Ng; ++i) {
      double second = (g(i + 1) - 2.0 * g(i) + g(i - 1)) / (C.dt * C.dt);
      l1 += std::abs(second) * C.dt;
    }
    C.ipp_bound = 1.21 * l1 * l1;
  }

  C.cumulative_half.resize(Ns);
  C.cumulative_half[0] = 0.0;
  for (int j = 1; j < Ns; ++j)
    C.cumulative_half[j] = C.cumulative_half[j - 1] +
                           0.5 * C.ds * (C.chat_grid[j - 1] + C.chat_grid[j]);
  C.total = 2.0 * C.cumulative_half[Ns - 1];
  // chi(0) re-runs the identical autocorrelation sum, so the ratio is 1.0
  // bit-exactly
  C.chi_norm = C.chi_raw(0.0);
  require(C.chi_norm > 0.0, ErrorCode::numeric,
          "good_cutoff: autocorrelation normalization vanished");
  return C;
}

double GoodCutoff::chi(double t) const { return chi_raw(t) / chi_norm; }

double GoodCutoff::chi_raw(double t) const {
  double T = 0.5 * eps;
  if (std::abs(t) >= eps) return 0.0;
  // autocorrelation int gamma(u) gamma(u - t) du on the sample grid with
  // linear interpolation of the shifted factor
  auto gamma_at = [&](double u) -> double {
    double a = std::abs(u);
    if (a >= T) return 0.0;
    double x = a / dt;
    int i = static_cast<int>(x);
    double fr = x - i;
    if (i + 1 >= static_cast<int>(gamma_half.size())) return 0.0;
    return gamma_half[i] * (1.0 - fr) + gamma_half[i + 1] * fr;
  };
  int n = static_cast<int>(gamma_half.size()) - 1;
  double acc = 0.0;
  for (int i = -n; i <= n; ++i) {
    double u = i * dt;
    double w = (i == -n || i == n) ? 0.5 : 1.0;
    acc += w * gamma_at(u) * gamma_at(u - t);
  }
  return acc * dt;
}

double GoodCutoff::chat(double s) const {
  double a = std::abs(s) / ds;
  int n = static_cast<int>(chat_grid.size());
  if (a >= n - 1) return 0.0;
  int j = static_cast<int>(a);
  // 4-point cubic (Lagrange) on j-1..j+2, clamped at the ends
  int j0 = std::max(0, std::min(j - 1, n - 4));
  double xr = a - j0;  // in [0, 3]
  const double* y = chat_grid.data() + j0;
  double l0 = (xr - 1) * (xr - 2) * (xr - 3) / -6.0;
  double l1 = xr * (xr - 2) * (xr - 3) / 2.0;
  double l2 = xr * (xr - 1) * (xr - 3) / -2.0;
  double l3 = xr * (xr - 1) * (xr - 2) / 6.0;
  return y[0] * l0 + y[1] * l1 + y[2] * l2 + y[3] * l3;
}

double GoodCutoff::chat_envelope(double s) const {
  double a = std::abs(s) / ds;
  int n = static_cast<int>(envelope_grid.size());
  int j = static_cast<int>(a);  // floor: conservative (envelope decreasing)
  if (j >= n) j = n - 1;        // beyond the table: last certified level
  return envelope_grid[j];
}

double GoodCutoff::cumulative_at(double s) const {
  int n = static_cast<int>(cumulative_half.size());
  double a = std::abs(s) / ds;
  double half;
  if (a >= n - 1) {
    half = cumulative_half[n - 1];
  } else {
    int j = static_cast<int>(a);
    double x = a - j;
    half = cumulative_half[j] * (1.0 - x) + cumulative_half[j + 1] * x;
  }
  return s >= 0.0 ? 0.5 * total + half : 0.5 * total - half;
}

const GoodCutoff& shared_cutoff(double eps, int jobs) {
  static std::mutex mu;
  static std::map<long long, std::unique_ptr<GoodCutoff>> table;
  long long key = static_cast<long long>(std::llround(eps * 1e9));
  std::lock_guard<std::mutex> lock(mu);
  auto it = table.find(key);
  if (it == table.end()) {
    auto ptr = std::make_unique<GoodCutoff>(good_cutoff(eps, jobs));
    it = table.emplace(key, std::move(ptr)).first;
  }
  return *it->second;
}

}  // namespace twl
