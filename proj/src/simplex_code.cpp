#include "qcs/simplex_code.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcs {

SimplexCode build_simplex_code(int q) {
  if (q < 2) throw std::invalid_argument("build_simplex_code: q must be >= 2, got " + std::to_string(q));

  // Basis vector b_k (k = 1..q-1) of the hyperplane orthogonal to the
  // all-ones direction: components -1/sqrt(k(k+1)) at indices < k,
  // k/sqrt(k(k+1)) at index k, zero above. a_j[k-1] is then the projection
  // of the scaled centered vertex onto b_k, which reduces to
  // sqrt(q/(q-1)) * b_k[j] because b_k is orthogonal to the ones vector.
  SimplexCode code;
  code.q = q;
  code.vectors = Eigen::MatrixXd::Zero(q, q - 1);
  const double scale = std::sqrt(static_cast<double>(q) / (q - 1));
  for (int k = 1; k <= q - 1; ++k) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) code.vectors(j, k - 1) = -scale * inv;
    code.vectors(k, k - 1) = scale * static_cast<double>(k) * inv;
  }
  return code;
}

Eigen::VectorXd code_vector(const SimplexCode& code, int j) {
  if (j < 0 || j >= code.q)
    throw std::out_of_range("code_vector: symbol " + std::to_string(j) + " outside [0, " +
                            std::to_string(code.q - 1) + "]");
  return code.vectors.row(j);
}

}  // namespace qcs
