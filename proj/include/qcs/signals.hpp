#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qcs {

// Unit-norm vector with exactly s nonzero entries: support chosen uniformly
// at random, nonzeros i.i.d. standard normal.
struct SparseSignal {
  Eigen::VectorXd vector;
  int d = 0;
  int s = 0;
  uint64_t seed = 0;
};

SparseSignal gauss_bernoulli(int d, int s, uint64_t seed);

// Grayscale intensity plane, row-major; both dimensions must be powers of
// two for the wavelet transform.
struct ImagePlane {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

// Orthonormal multi-level 2-D Haar transform, full depth. Coefficients come
// back as the row-major flattening of the coefficient plane; Parseval holds
// to machine precision and haar2d_inverse is the exact inverse.
Eigen::VectorXd haar2d_forward(const ImagePlane& img);
ImagePlane haar2d_inverse(const Eigen::VectorXd& coeffs, int width, int height);

// Keep the k largest-magnitude components, zero the rest; ties at the
// cutoff keep the lower index.
Eigen::VectorXd threshold_top_k(const Eigen::VectorXd& coeffs, int k);

// v / ||v||_2 together with the scale factor, so callers can undo the
// normalization before computing image-domain metrics.
struct Normalized {
  Eigen::VectorXd unit;
  double scale = 0.0;
};

Normalized normalize(const Eigen::VectorXd& v);

// Deterministic synthetic grayscale target (smooth background plus a few
// geometric features); used when no input image is supplied.
ImagePlane make_test_image(int width, int height);

}  // namespace qcs
