#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "qcs/sensing.hpp"
#include "qcs/simplex_code.hpp"

namespace qcs {

// xi_bar = (1/m) sum_i a_{y_i}^T W_i. Sufficient statistic for linear-loss
// recovery: <xi_bar, u> equals the averaged measurement objective for any u.
struct CorrelationVector {
  Eigen::VectorXd xi_bar;
  int m = 0;
};

enum class Loss { Linear, Hinge, Logistic, Exponential };

struct RecoveryConfig {
  double eta = 0.0;        // l1 penalty
  double step = 1.0;       // gradient step size
  int max_iters = 10000;
  double tol = 1e-8;       // stop when the iterate moves less than this
  Loss loss = Loss::Linear;
  uint64_t init_seed = 0;  // seeds the random unit initialization

  void validate() const;
};

struct RecoveryResult {
  Eigen::VectorXd x;
  bool converged = true;
  bool degenerate = false;  // all-zero output (eta at or above max |xi_bar_i|)
  int iterations = 0;
  double objective = 0.0;   // value of the solved program at x
};

CorrelationVector correlation_vector(const SensingEnsemble& ensemble, const SimplexCode& code,
                                     const MeasurementVector& y);

// Componentwise max(1 - eta/|u_i|, 0) * u_i, with 0 mapped to 0.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& u, double eta);

// u unchanged if inside the unit ball, else u / ||u||_2.
Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& u);

// <xi_bar, u> - eta * ||u||_1, the penalized linear objective.
double sparse_objective(const Eigen::VectorXd& xi_bar, const Eigen::VectorXd& u, double eta);

// Analytic maximizer of the penalized linear objective over the unit ball:
// the soft-thresholded correlation vector, renormalized. Degenerate (zero)
// output is flagged, not thrown, so eta sweeps can proceed.
RecoveryResult recover_closed_form(const CorrelationVector& xi, double eta);

// Iterative solver for the same program: gradient step, componentwise
// shrinkage, ball projection, from a seeded random unit start. Returns the
// best iterate by objective with a non-converged flag when max_iters is hit.
RecoveryResult recover_proximal(const CorrelationVector& xi, const RecoveryConfig& config);

// Projected proximal-subgradient descent on the empirical loss
// (1/m) sum_i V(-<a_{y_i}, W_i u>) over the unit ball, for hinge, logistic
// or exponential V, plus the optional l1 penalty. The best iterate is
// returned; its objective never exceeds the initial one.
RecoveryResult recover_loss(const SensingEnsemble& ensemble, const SimplexCode& code,
                            const MeasurementVector& y, const RecoveryConfig& config);

}  // namespace qcs
