// Test-only reference implementations. These deliberately take different
// routes than the library code so the two sides can check each other.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcs/sensing.hpp"

namespace oracles {

// --- support function of K1 = {||u||_1 <= sqrt(s), ||u||_2 <= 1} ----------

namespace detail {

// Direction in the positive orthant from spherical angles in [0, pi/2]^(d-1).
inline Eigen::VectorXd direction(const std::vector<double>& angles) {
  const int d = static_cast<int>(angles.size()) + 1;
  Eigen::VectorXd v(d);
  double prod = 1.0;
  for (int i = 0; i < d - 1; ++i) {
    v(i) = prod * std::cos(angles[static_cast<size_t>(i)]);
    prod *= std::sin(angles[static_cast<size_t>(i)]);
  }
  v(d - 1) = prod;
  return v;
}

inline double objective(const Eigen::VectorXd& mags, double sqrt_s,
                        const std::vector<double>& angles) {
  const Eigen::VectorXd v = direction(angles);
  const double l1 = v.sum();  // v >= 0 on this chart
  const double radius = l1 > sqrt_s ? sqrt_s / l1 : 1.0;
  return mags.dot(v) * radius;
}

inline void sweep_box(const Eigen::VectorXd& mags, double sqrt_s, const std::vector<double>& lo,
                      const std::vector<double>& hi, int res,
                      std::vector<std::pair<double, std::vector<double>>>& evals) {
  const int k = static_cast<int>(lo.size());
  std::vector<int> idx(static_cast<size_t>(k), 0);
  std::vector<double> angles(static_cast<size_t>(k));
  for (;;) {
    for (int i = 0; i < k; ++i)
      angles[static_cast<size_t>(i)] =
          lo[static_cast<size_t>(i)] +
          (hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]) * idx[static_cast<size_t>(i)] /
              (res - 1);
    evals.emplace_back(objective(mags, sqrt_s, angles), angles);
    int axis = 0;
    while (axis < k && ++idx[static_cast<size_t>(axis)] == res) {
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == k) break;
  }
}

}  // namespace detail

// Brute-force grid search over the feasible set: every feasible point is a
// scaled unit direction, and the maximizer lives in the orthant aligned with
// g, so searching positive directions against |g| suffices. A coarse global
// sweep keeps several candidate basins, each refined by shrinking boxes.
inline double grid_support_function(const Eigen::VectorXd& g, int s) {
  const int d = static_cast<int>(g.size());
  const int k = d - 1;
  const Eigen::VectorXd mags = g.cwiseAbs();
  const double sqrt_s = std::sqrt(static_cast<double>(s));
  const double half_pi = 1.5707963267948966;

  std::vector<std::pair<double, std::vector<double>>> evals;
  detail::sweep_box(mags, sqrt_s, std::vector<double>(static_cast<size_t>(k), 0.0),
                    std::vector<double>(static_cast<size_t>(k), half_pi), 16, evals);
  std::sort(evals.begin(), evals.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  double best = evals.front().first;
  const size_t candidates = std::min<size_t>(evals.size(), 10);
  for (size_t c = 0; c < candidates; ++c) {
    std::vector<double> center = evals[c].second;
    double half = half_pi / 15.0;
    for (int pass = 0; pass < 7; ++pass) {
      std::vector<double> lo(static_cast<size_t>(k)), hi(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) {
        lo[static_cast<size_t>(i)] = std::max(0.0, center[static_cast<size_t>(i)] - half);
        hi[static_cast<size_t>(i)] = std::min(half_pi, center[static_cast<size_t>(i)] + half);
      }
      std::vector<std::pair<double, std::vector<double>>> local;
      detail::sweep_box(mags, sqrt_s, lo, hi, 9, local);
      const auto it = std::max_element(
          local.begin(), local.end(),
          [](const auto& a, const auto& b) { return a.first < b.first; });
      center = it->second;
      best = std::max(best, it->first);
      half *= 0.35;
    }
  }
  return best;
}

// Exact optimum by support enumeration: on the top-k magnitudes the active
// l1 constraint pins the shrinkage t through a quadratic. Every candidate t
// is re-evaluated from scratch and kept only if the point it induces is
// feasible, so spurious roots of the squared equation cannot contribute.
inline double enum_support_function(const Eigen::VectorXd& g, int s) {
  const int d = static_cast<int>(g.size());
  std::vector<double> w(g.data(), g.data() + d);
  for (auto& v : w) v = std::abs(v);
  std::sort(w.begin(), w.end(), std::greater<double>());

  if (g.norm() == 0.0) return 0.0;
  const double sqrt_s = std::sqrt(static_cast<double>(s));

  const auto feasible_value = [&](double t) {
    double l1 = 0.0, l2_sq = 0.0, corr = 0.0;
    for (int i = 0; i < d; ++i) {
      const double di = w[static_cast<size_t>(i)] - t;
      if (di <= 0.0) break;  // magnitudes are sorted
      l1 += di;
      l2_sq += di * di;
      corr += w[static_cast<size_t>(i)] * di;
    }
    if (l2_sq == 0.0) return 0.0;
    const double l2 = std::sqrt(l2_sq);
    if (l1 > sqrt_s * l2 * (1.0 + 1e-9)) return 0.0;  // violates the l1 cap
    return corr / l2;
  };

  double best = feasible_value(0.0);
  double a = 0.0, b = 0.0;
  for (int k = 1; k <= d; ++k) {
    a += w[static_cast<size_t>(k - 1)];
    b += w[static_cast<size_t>(k - 1)] * w[static_cast<size_t>(k - 1)];
    const double qa = static_cast<double>(k) * k - static_cast<double>(s) * k;
    const double qb = -2.0 * a * (k - s);
    const double qc = a * a - static_cast<double>(s) * b;
    if (std::abs(qa) < 1e-14) {
      // k == s: the active-constraint equation degenerates to an identity;
      // probe the window midpoint and let the feasibility check decide.
      const double lo = k == d ? 0.0 : w[static_cast<size_t>(k)];
      best = std::max(best, feasible_value(0.5 * (lo + w[static_cast<size_t>(k - 1)])));
      continue;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) continue;
    for (const double sign : {-1.0, 1.0}) {
      const double t = (-qb + sign * std::sqrt(disc)) / (2.0 * qa);
      if (t >= 0.0) best = std::max(best, feasible_value(t));
    }
  }
  return best;
}

// --- direct 1-bit decoder ---------------------------------------------------

// Sign-measurement decoder: the maximizer of sum_i y_i <w_i, u> over the
// unit ball is the normalized sign-weighted row sum. Rebuilds the rows
// through materialize_matrix only.
inline Eigen::VectorXd one_bit_decode(const qcs::SensingEnsemble& ensemble,
                                      const std::vector<int>& signs) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(ensemble.d);
  for (int i = 0; i < ensemble.m; ++i) {
    const Eigen::MatrixXd W = materialize_matrix(ensemble, i);
    acc += signs[static_cast<size_t>(i)] * W.row(0).transpose();
  }
  acc /= static_cast<double>(ensemble.m);
  const double n = acc.norm();
  return n > 0.0 ? Eigen::VectorXd(acc / n) : acc;
}

// --- CSV helpers ------------------------------------------------------------

// Drops the trailing runtime_ms column so byte comparisons ignore wall time.
inline std::string strip_runtime_column(const std::string& csv) {
  std::string out;
  size_t start = 0;
  while (start < csv.size()) {
    size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    const size_t comma = csv.rfind(',', end);
    out.append(csv, start, (comma != std::string::npos && comma >= start ? comma : end) - start);
    out.push_back('\n');
    start = end + 1;
  }
  return out;
}

}  // namespace oracles
