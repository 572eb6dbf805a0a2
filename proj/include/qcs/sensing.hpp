#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcs/rng.hpp"
#include "qcs/simplex_code.hpp"

namespace qcs {

// Noise applied at sensing time: none, Gaussian perturbation of the symbol
// scores before the argmax, or random replacement of the emitted symbol.
struct NoiseSpec {
  enum class Kind { Noiseless, PreQuantGaussian, SymbolFlip };

  Kind kind = Kind::Noiseless;
  double sigma = 0.0;      // PreQuantGaussian: score noise std deviation, >= 0
  double p = 1.0;          // SymbolFlip: retention probability, in (1/2, 1]
  uint64_t flip_seed = 0;  // SymbolFlip: keys the flip stream

  static NoiseSpec noiseless() { return {}; }
  static NoiseSpec pre_quant_gaussian(double sigma);
  static NoiseSpec symbol_flip(double p, uint64_t flip_seed);

  void validate() const;
  std::string to_string() const;                  // header token, no spaces
  static NoiseSpec parse(const std::string& s);   // inverse of to_string
};

// Logical collection of m Gaussian matrices W_i of shape (q-1) x d. Matrices
// are regenerated on demand from (master_seed, i, q, d) instead of stored;
// sensing and recovery therefore see identical entries without O(m*q*d)
// memory.
struct SensingEnsemble {
  uint64_t master_seed = 0;
  int m = 0;  // measurement count
  int q = 0;  // alphabet size
  int d = 0;  // ambient dimension
};

// m symbols over {0,...,q-1} plus the provenance needed to reproduce them.
struct MeasurementVector {
  std::vector<int> symbols;
  int q = 0;
  int m = 0;
  NoiseSpec noise;
};

// The i-th Gaussian matrix, entries in row-major generation order.
Eigen::MatrixXd materialize_matrix(const SensingEnsemble& ensemble, int i);

// argmax_j <a_j, Wx>; ties broken by lowest index.
int quantize(const SimplexCode& code, const Eigen::MatrixXd& W, const Eigen::VectorXd& x);

// Full sensing pass: y_i = argmax_j <a_j, W_i x> (+ score noise / symbol
// flips per `noise`). Requires ||x||_2 <= 1 + 1e-9.
MeasurementVector sense(const SensingEnsemble& ensemble, const SimplexCode& code,
                        const Eigen::VectorXd& x, const NoiseSpec& noise = {});

// Fraction of positions where the two symbol sequences disagree, in [0, 1].
double hamming_distance(const MeasurementVector& u, const MeasurementVector& v);

// Text round-trip: header line "q=<q> m=<m> noise=<spec>" then the symbols
// space-separated on one line.
void write_measurements(std::ostream& out, const MeasurementVector& y);
MeasurementVector read_measurements(std::istream& in);

// Generator positioned at entry (0,0) of W_i; gaussian() draws come out in
// row-major order. Shared by materialize_matrix, sense and the recovery-side
// correlation so all of them see identical matrices without storing them.
Rng matrix_stream(const SensingEnsemble& ensemble, int i);

}  // namespace qcs
