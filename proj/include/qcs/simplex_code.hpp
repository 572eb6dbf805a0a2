#pragma once

#include <Eigen/Dense>

namespace qcs {

// The q unit vectors a_0, ..., a_{q-1} in R^{q-1} with pairwise inner
// product -1/(q-1) and zero sum. Row j of `vectors` is a_j.
struct SimplexCode {
  int q = 0;
  Eigen::MatrixXd vectors;  // q rows, q-1 columns
};

// Deterministic construction: the scaled, centered standard-basis vectors
// sqrt(q/(q-1)) * (e_j - 1/q) of q-space expressed in a fixed orthonormal
// (Helmert-style) basis of the hyperplane orthogonal to the all-ones vector.
// The basis sign is chosen so that for q=2 the code is a_0 = -1, a_1 = +1,
// which makes 2*quantize(x) - 1 == sign(Wx) hold for binary measurements.
SimplexCode build_simplex_code(int q);

// Row j as a vector copy; throws std::out_of_range for j outside [0, q-1].
Eigen::VectorXd code_vector(const SimplexCode& code, int j);

}  // namespace qcs
