#include "qcs/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qcs/rng.hpp"

namespace qcs {

namespace {

constexpr uint64_t kSignalTag = 0x78;  // 'x'
constexpr double kInvSqrt2 = 0.70710678118654752440;

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void check_transform_dims(int width, int height) {
  if (!is_power_of_two(width) || !is_power_of_two(height))
    throw std::invalid_argument("haar2d: dimensions must be powers of two, got " +
                                std::to_string(width) + "x" + std::to_string(height));
}

// One analysis step along a row segment of even length n: averages to the
// front half, differences to the back half, both scaled by 1/sqrt(2).
void haar_rows_forward(std::vector<double>& buf, int stride, int n, int rows,
                       std::vector<double>& tmp) {
  const int half = n / 2;
  for (int y = 0; y < rows; ++y) {
    double* row = buf.data() + static_cast<size_t>(y) * stride;
    for (int i = 0; i < half; ++i) {
      tmp[i] = (row[2 * i] + row[2 * i + 1]) * kInvSqrt2;
      tmp[half + i] = (row[2 * i] - row[2 * i + 1]) * kInvSqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + n, row);
  }
}

void haar_cols_forward(std::vector<double>& buf, int stride, int cols, int n,
                       std::vector<double>& tmp) {
  const int half = n / 2;
  for (int x = 0; x < cols; ++x) {
    for (int i = 0; i < half; ++i) {
      const double a = buf[static_cast<size_t>(2 * i) * stride + x];
      const double b = buf[static_cast<size_t>(2 * i + 1) * stride + x];
      tmp[i] = (a + b) * kInvSqrt2;
      tmp[half + i] = (a - b) * kInvSqrt2;
    }
    for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i) * stride + x] = tmp[i];
  }
}

void haar_rows_inverse(std::vector<double>& buf, int stride, int n, int rows,
                       std::vector<double>& tmp) {
  const int half = n / 2;
  for (int y = 0; y < rows; ++y) {
    double* row = buf.data() + static_cast<size_t>(y) * stride;
    for (int i = 0; i < half; ++i) {
      tmp[2 * i] = (row[i] + row[half + i]) * kInvSqrt2;
      tmp[2 * i + 1] = (row[i] - row[half + i]) * kInvSqrt2;
    }
    std::copy(tmp.begin(), tmp.begin() + n, row);
  }
}

void haar_cols_inverse(std::vector<double>& buf, int stride, int cols, int n,
                       std::vector<double>& tmp) {
  const int half = n / 2;
  for (int x = 0; x < cols; ++x) {
    for (int i = 0; i < half; ++i) {
      const double a = buf[static_cast<size_t>(i) * stride + x];
      const double b = buf[static_cast<size_t>(half + i) * stride + x];
      tmp[2 * i] = (a + b) * kInvSqrt2;
      tmp[2 * i + 1] = (a - b) * kInvSqrt2;
    }
    for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i) * stride + x] = tmp[i];
  }
}

// The pyramid recurses on the low band: sizes halve each level until both
// reach 1. Collected up front so the inverse can replay them backwards.
std::vector<std::pair<int, int>> level_sizes(int width, int height) {
  std::vector<std::pair<int, int>> levels;
  int w = width, h = height;
  while (w > 1 || h > 1) {
    levels.emplace_back(w, h);
    if (w > 1) w /= 2;
    if (h > 1) h /= 2;
  }
  return levels;
}

}  // namespace

SparseSignal gauss_bernoulli(int d, int s, uint64_t seed) {
  if (s < 1 || s > d)
    throw std::invalid_argument("gauss_bernoulli: s must be in [1, d], got s=" +
                                std::to_string(s) + ", d=" + std::to_string(d));
  Rng rng(mix_key(seed, kSignalTag));

  // Partial Fisher-Yates: first s slots end up a uniform s-subset.
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < s; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(d - i)));
    std::swap(idx[i], idx[j]);
  }

  SparseSignal sig;
  sig.d = d;
  sig.s = s;
  sig.seed = seed;
  sig.vector = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < s; ++i) {
    double v = rng.gaussian();
    while (v == 0.0) v = rng.gaussian();  // keep the support size exact
    sig.vector(idx[i]) = v;
  }
  sig.vector /= sig.vector.norm();
  return sig;
}

Eigen::VectorXd haar2d_forward(const ImagePlane& img) {
  check_transform_dims(img.width, img.height);
  std::vector<double> buf = img.pixels;
  std::vector<double> tmp(static_cast<size_t>(std::max(img.width, img.height)));
  for (const auto& [w, h] : level_sizes(img.width, img.height)) {
    if (w > 1) haar_rows_forward(buf, img.width, w, h, tmp);
    if (h > 1) haar_cols_forward(buf, img.width, w, h, tmp);
  }
  return Eigen::Map<const Eigen::VectorXd>(buf.data(), static_cast<Eigen::Index>(buf.size()));
}

ImagePlane haar2d_inverse(const Eigen::VectorXd& coeffs, int width, int height) {
  check_transform_dims(width, height);
  if (coeffs.size() != static_cast<Eigen::Index>(width) * height)
    throw std::invalid_argument("haar2d_inverse: coefficient count does not match dimensions");
  ImagePlane img;
  img.width = width;
  img.height = height;
  img.pixels.assign(coeffs.data(), coeffs.data() + coeffs.size());
  std::vector<double> tmp(static_cast<size_t>(std::max(width, height)));
  const auto levels = level_sizes(width, height);
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const auto [w, h] = *it;
    if (h > 1) haar_cols_inverse(img.pixels, width, w, h, tmp);
    if (w > 1) haar_rows_inverse(img.pixels, width, w, h, tmp);
  }
  return img;
}

Eigen::VectorXd threshold_top_k(const Eigen::VectorXd& coeffs, int k) {
  const int n = static_cast<int>(coeffs.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("threshold_top_k: k must be in [1, length], got " +
                                std::to_string(k));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(coeffs(a)) > std::abs(coeffs(b));
  });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) out(order[i]) = coeffs(order[i]);
  return out;
}

Normalized normalize(const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  return {v / n, n};
}

ImagePlane make_test_image(int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("make_test_image: bad dimensions");
  ImagePlane img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height);
  const double cx = 0.62 * width, cy = 0.40 * height;
  const double r = 0.22 * std::min(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.25 + 0.5 * static_cast<double>(y) / height;  // sky-to-ground gradient
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy < r * r) v = 0.92;                           // disk
      if (x > 0.15 * width && x < 0.45 * width && y > 0.55 * height &&
          y < 0.85 * height)
        v = 0.10;                                                        // dark block
      if (std::abs((x - 0.1 * width) - 1.4 * (height - 1 - y)) < 0.02 * width) v = 0.75;  // stripe
      v += 0.03 * std::sin(14.0 * x / width) * std::cos(9.0 * y / height);
      img.at(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

}  // namespace qcs
