#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace qcs {

// Monte Carlo estimate of the expected argmax-symbol correlation
// E <a_gamma, g> for g standard normal in q-1 dimensions, gamma the symbol
// whose code vector best matches g (optionally perturbed by score noise of
// level sigma). This is the margin constant that sets the recovery error
// scale; it grows like sqrt(log q) and shrinks like 1/sqrt(1 + sigma^2).
struct LambdaEstimate {
  int q = 0;
  double sigma = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

LambdaEstimate estimate_lambda(int q, double sigma, long n_samples, uint64_t seed);

// max <g, u> over K1 = { ||u||_1 <= sqrt(s), ||u||_2 <= 1 }, via the
// stationarity form u(tau) = soft_threshold(g, tau)/||.||_2 with tau found
// by bisection on the l1 norm (tau = 0 when the ball maximizer is feasible).
double support_function_K1(const Eigen::VectorXd& g, int s);

// Gaussian mean width of K1: Monte Carlo average of 2 * support_function_K1
// (K1 is symmetric, so the width of K1 - K1 is twice the support function).
struct WidthEstimate {
  int d = 0;
  int s = 0;
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

WidthEstimate estimate_mean_width_K1(int d, int s, long n_samples, uint64_t seed);

// C * (wK / sqrt(log(q) * m) + delta); arithmetic helper for bound curves.
double bound_curve(int m, int q, double wK, double C, double delta);

// Squared euclidean distance ||x - xhat||^2.
double reconstruction_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat);

// 10*log10(||x||^2 / ||x - xhat||^2), capped at 300 dB (exact reconstruction).
double snr_db(const Eigen::VectorXd& x, const Eigen::VectorXd& xhat);

}  // namespace qcs
