#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "qcs/pgm.hpp"
#include "qcs/rng.hpp"
#include "qcs/signals.hpp"

using namespace qcs;

namespace {

ImagePlane random_image(int w, int h, uint64_t key) {
  Rng rng(key);
  ImagePlane img;
  img.width = w;
  img.height = h;
  img.pixels.resize(static_cast<size_t>(w) * h);
  for (auto& px : img.pixels) px = rng.uniform();
  return img;
}

double plane_norm(const ImagePlane& img) {
  double ss = 0.0;
  for (double v : img.pixels) ss += v * v;
  return std::sqrt(ss);
}

}  // namespace

TEST_CASE("gauss-bernoulli signals have exact support and unit norm") {
  const SparseSignal sig = gauss_bernoulli(100, 5, 17);
  int nonzeros = 0;
  for (int i = 0; i < 100; ++i) nonzeros += sig.vector(i) != 0.0 ? 1 : 0;
  CHECK(nonzeros == 5);
  CHECK(std::abs(sig.vector.norm() - 1.0) < 1e-12);

  const SparseSignal dense = gauss_bernoulli(12, 12, 3);
  CHECK(dense.vector.cwiseAbs().minCoeff() > 0.0);
  CHECK(std::abs(dense.vector.norm() - 1.0) < 1e-12);
}

TEST_CASE("gauss-bernoulli is deterministic in the seed") {
  const SparseSignal a = gauss_bernoulli(50, 7, 99);
  const SparseSignal b = gauss_bernoulli(50, 7, 99);
  CHECK((a.vector.array() == b.vector.array()).all());
  const SparseSignal c = gauss_bernoulli(50, 7, 100);
  CHECK(!(a.vector.array() == c.vector.array()).all());
}

TEST_CASE("gauss-bernoulli support is uniform over coordinates") {
  const int d = 20, s = 4, draws = 4000;
  std::vector<int> hits(d, 0);
  for (int t = 0; t < draws; ++t) {
    const SparseSignal sig = gauss_bernoulli(d, s, 1000 + static_cast<uint64_t>(t));
    for (int i = 0; i < d; ++i)
      if (sig.vector(i) != 0.0) ++hits[static_cast<size_t>(i)];
  }
  const double expected = static_cast<double>(s) / d;
  const double se = std::sqrt(expected * (1.0 - expected) / draws);
  for (int i = 0; i < d; ++i) {
    const double freq = static_cast<double>(hits[static_cast<size_t>(i)]) / draws;
    CHECK(std::abs(freq - expected) < 3.5 * se);
  }
}

TEST_CASE("gauss-bernoulli rejects bad sparsity") {
  CHECK_THROWS_AS((void)gauss_bernoulli(10, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)gauss_bernoulli(10, 11, 1), std::invalid_argument);
}

TEST_CASE("haar transform of a constant image concentrates in one coefficient") {
  ImagePlane img;
  img.width = img.height = 16;
  img.pixels.assign(256, 0.625);
  const Eigen::VectorXd coeffs = haar2d_forward(img);
  CHECK(coeffs(0) == doctest::Approx(0.625 * 16.0).epsilon(1e-12));
  for (int i = 1; i < 256; ++i) CHECK(coeffs(i) == 0.0);
}

TEST_CASE("haar round-trip and parseval hold across sizes") {
  int checked = 0;
  for (const auto& [w, h] : std::vector<std::pair<int, int>>{
           {8, 8}, {16, 16}, {32, 32}, {64, 64}, {8, 32}, {64, 4}, {1, 16}}) {
    for (int rep = 0; rep < 15; ++rep) {
      const ImagePlane img = random_image(w, h, 40 + static_cast<uint64_t>(checked));
      const Eigen::VectorXd coeffs = haar2d_forward(img);
      CHECK(std::abs(coeffs.norm() - plane_norm(img)) < 1e-10);

      const ImagePlane back = haar2d_inverse(coeffs, w, h);
      double worst = 0.0;
      for (size_t i = 0; i < img.pixels.size(); ++i)
        worst = std::max(worst, std::abs(img.pixels[i] - back.pixels[i]));
      CHECK(worst < 1e-10);
      ++checked;
    }
  }
  CHECK(checked == 105);
}

TEST_CASE("haar validates dimensions") {
  ImagePlane img;
  img.width = 12;
  img.height = 8;
  img.pixels.assign(96, 0.0);
  CHECK_THROWS_AS((void)haar2d_forward(img), std::invalid_argument);
  CHECK_THROWS_AS((void)haar2d_inverse(Eigen::VectorXd::Zero(96), 12, 8), std::invalid_argument);
  CHECK_THROWS_AS((void)haar2d_inverse(Eigen::VectorXd::Zero(100), 16, 8), std::invalid_argument);
}

TEST_CASE("top-k thresholding keeps the largest magnitudes") {
  Eigen::VectorXd v(3);
  v << 5.0, -3.0, 1.0;
  const Eigen::VectorXd r = threshold_top_k(v, 2);
  CHECK(r(0) == 5.0);
  CHECK(r(1) == -3.0);
  CHECK(r(2) == 0.0);

  CHECK((threshold_top_k(v, 3).array() == v.array()).all());

  Eigen::VectorXd ties(3);
  ties << 2.0, -2.0, 1.0;
  const Eigen::VectorXd t = threshold_top_k(ties, 1);
  CHECK(t(0) == 2.0);  // tie at the cutoff keeps the lower index
  CHECK(t(1) == 0.0);

  CHECK_THROWS_AS((void)threshold_top_k(v, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)threshold_top_k(v, 4), std::invalid_argument);
}

TEST_CASE("top-k thresholding is the best k-sparse approximation") {
  Rng rng(777);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 8;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.gaussian();
    for (int k = 1; k <= n; ++k) {
      const double mine = (v - threshold_top_k(v, k)).squaredNorm();
      // Brute force over all supports of size k.
      double best = 1e300;
      for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != k) continue;
        double dist = 0.0;
        for (int i = 0; i < n; ++i)
          if (!(mask & (1 << i))) dist += v(i) * v(i);
        best = std::min(best, dist);
      }
      CHECK(mine == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalize returns the unit vector and its scale") {
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  const Normalized n = normalize(v);
  CHECK(n.scale == doctest::Approx(5.0));
  CHECK(n.unit(0) == doctest::Approx(0.6));
  CHECK(n.unit(1) == doctest::Approx(0.8));

  const Normalized u = normalize(n.unit);
  CHECK(u.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((u.unit - n.unit).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS((void)normalize(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("pgm binary round-trip stays within quantization error") {
  const ImagePlane img = random_image(32, 16, 4242);
  const std::string path = "test_roundtrip.pgm";
  write_pgm(path, img);
  const ImagePlane back = read_pgm(path);
  REQUIRE(back.width == 32);
  REQUIRE(back.height == 16);
  for (size_t i = 0; i < img.pixels.size(); ++i)
    CHECK(std::abs(img.pixels[i] - back.pixels[i]) <= 0.5 / 255.0 + 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("pgm reads ascii files with comments") {
  const std::string path = "test_ascii.pgm";
  {
    std::ofstream out(path);
    out << "P2\n# a comment line\n3 2\n# another\n255\n0 128 255\n64 32 16\n";
  }
  const ImagePlane img = read_pgm(path);
  REQUIRE(img.width == 3);
  REQUIRE(img.height == 2);
  CHECK(img.at(0, 0) == doctest::Approx(0.0));
  CHECK(img.at(1, 0) == doctest::Approx(128.0 / 255.0));
  CHECK(img.at(2, 0) == doctest::Approx(1.0));
  CHECK(img.at(0, 1) == doctest::Approx(64.0 / 255.0));
  std::remove(path.c_str());
}

TEST_CASE("pgm reads 16-bit binary rasters") {
  const std::string path = "test_16bit.pgm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 1\n65535\n";
    const unsigned char bytes[4] = {0xFF, 0xFF, 0x00, 0x80};  // 65535, 128
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  const ImagePlane img = read_pgm(path);
  CHECK(img.at(0, 0) == doctest::Approx(1.0));
  CHECK(img.at(1, 0) == doctest::Approx(128.0 / 65535.0));
  std::remove(path.c_str());
}

TEST_CASE("pgm reader failure modes") {
  CHECK_THROWS_AS((void)read_pgm("no_such_file.pgm"), IoError);

  const std::string path = "test_bad.pgm";
  {
    std::ofstream out(path);
    out << "P6\n2 2\n255\n";
  }
  CHECK_THROWS_AS((void)read_pgm(path), IoError);
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n4 4\n255\nab";  // truncated raster
  }
  CHECK_THROWS_AS((void)read_pgm(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("built-in test image is well-formed and compressible") {
  const ImagePlane img = make_test_image(64, 64);
  CHECK(img.width == 64);
  CHECK(img.height == 64);
  for (double v : img.pixels) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // Most of the energy should live in few wavelet coefficients.
  const Eigen::VectorXd coeffs = haar2d_forward(img);
  const Eigen::VectorXd top = threshold_top_k(coeffs, 400);
  CHECK(top.norm() / coeffs.norm() > 0.95);
}
