#include "qcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcs/recovery.hpp"
#include "qcs/rng.hpp"
#include "qcs/simplex_code.hpp"

namespace qcs {

namespace {

constexpr uint64_t kLambdaTag = 0x6C;  // 'l'
constexpr uint64_t kWidthTag = 0x77;   // 'w'

struct RunningMean {
  double sum = 0.0;
  double sum_sq = 0.0;
  long n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / (n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace

LambdaEstimate estimate_lambda(int q, double sigma, long n_samples, uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("estimate_lambda: n_samples must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("estimate_lambda: sigma must be >= 0");
  const SimplexCode code = build_simplex_code(q);
  const int dim = q - 1;

  Rng rng(mix_key(seed, {kLambdaTag, static_cast<uint64_t>(q)}));
  Eigen::VectorXd g(dim), noisy(dim);
  RunningMean acc;
  for (long t = 0; t < n_samples; ++t) {
    for (int i = 0; i < dim; ++i) g(i) = rng.gaussian();
    if (sigma > 0.0) {
      for (int i = 0; i < dim; ++i) noisy(i) = g(i) + sigma * rng.gaussian();
    } else {
      noisy = g;
    }
    // Symbol chosen against the (possibly noisy) scores, correlation scored
    // against the clean draw, exactly as the decoder experiences it.
    int gamma = 0;
    double best = code.vectors.row(0).dot(noisy);
    for (int j = 1; j < q; ++j) {
      const double sc = code.vectors.row(j).dot(noisy);
      if (sc > best) {
        best = sc;
        gamma = j;
      }
    }
    acc.add(code.vectors.row(gamma).dot(g));
  }

  LambdaEstimate est;
  est.q = q;
  est.sigma = sigma;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.n_samples = n_samples;
  return est;
}

double support_function_K1(const Eigen::VectorXd& g, int s) {
  const int d = static_cast<int>(g.size());
  if (s < 1 || s > d)
    throw std::invalid_argument("support_function_K1: s must be in [1, d], got " +
                                std::to_string(s));
  const double norm2 = g.norm();
  if (norm2 == 0.0) return 0.0;
  const double sqrt_s = std::sqrt(static_cast<double>(s));
  if (g.lpNorm<1>() / norm2 <= sqrt_s) return norm2;  // l1 constraint inactive

  // ||u(tau)||_1 decreases from ||g||_1/||g||_2 > sqrt(s) at tau = 0 towards
  // 1 <= sqrt(s) as tau approaches max|g_i|, so a root always brackets.
  double lo = 0.0, hi = g.cwiseAbs().maxCoeff();
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const Eigen::VectorXd st = soft_threshold(g, mid);
    const double n2 = st.norm();
    if (n2 == 0.0 || st.lpNorm<1>() / n2 <= sqrt_s)
      hi = mid;
    else
      lo = mid;
  }
  const Eigen::VectorXd st = soft_threshold(g, hi);  // feasible side of the bracket
  const double n2 = st.norm();
  if (n2 == 0.0) return 0.0;
  return g.dot(st) / n2;
}

WidthEstimate estimate_mean_width_K1(int d, int s, long n_samples, uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("estimate_mean_width_K1: n_samples must be >= 1");
  if (s < 1 || s > d) throw std::invalid_argument("estimate_mean_width_K1: s must be in [1, d]");

  Rng rng(mix_key(seed, {kWidthTag, static_cast<uint64_t>(d), static_cast<uint64_t>(s)}));
  Eigen::VectorXd g(d);
  RunningMean acc;
  for (long t = 0; t < n_samples; ++t) {
    for (int i = 0; i < d; ++i) g(i) = rng.gaussian();
    acc.add(2.0 * support_function_K1(g, s));
  }

  WidthEstimate est;
  est.d = d;
  est.s = s;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.n_samples = n_samples;
  return est;
}

double bound_curve(int m, int q, double wK, double C, double delta) {
  if (m < 1 || q < 2) throw std::invalid_argument("bound_curve: m >= 1 and q >= 2 required");
  if (!(delta >= 0.0)) throw std::invalid_argument("bound_curve: delta must be >= 0");
  return C * (wK / std::sqrt(std::log(static_cast<double>(q)) * m) + delta);
}

double reconstruction_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat) {
  if (x.size() != xhat.size())
    throw std::invalid_argument("reconstruction_error: length mismatch");
  return (x - xhat).squaredNorm();
}

double snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat) {
  if (x.size() != xhat.size()) throw std::invalid_argument("snr_db: length mismatch");
  const double signal = x.squaredNorm();
  if (signal == 0.0) throw std::invalid_argument("snr_db: reference signal is all-zero");
  const double err = (x - xhat).squaredNorm();
  if (err == 0.0) return 300.0;
  return std::min(10.0 * std::log10(signal / err), 300.0);
}

}  // namespace qcs
