#include "qcs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qcs {

namespace {

constexpr uint64_t kInitTag = 0x75;  // 'u'

Eigen::VectorXd random_unit_vector(int d, uint64_t seed) {
  Rng rng(mix_key(seed, kInitTag));
  Eigen::VectorXd u(d);
  for (;;) {
    for (int i = 0; i < d; ++i) u(i) = rng.gaussian();
    const double n = u.norm();
    if (n > 0.0) return u / n;
  }
}

double loss_value(Loss loss, double arg) {
  switch (loss) {
    case Loss::Hinge:
      return std::max(1.0 + arg, 0.0);
    case Loss::Logistic:
      return std::log1p(std::exp(std::min(arg, 700.0)));
    case Loss::Exponential:
      return std::exp(std::min(arg, 700.0));
    default:
      return arg;
  }
}

double loss_slope(Loss loss, double arg) {
  switch (loss) {
    case Loss::Hinge:
      return arg > -1.0 ? 1.0 : 0.0;
    case Loss::Logistic:
      return 1.0 / (1.0 + std::exp(std::min(-arg, 700.0)));
    case Loss::Exponential:
      return std::exp(std::min(arg, 700.0));
    default:
      return 1.0;
  }
}

}  // namespace

void RecoveryConfig::validate() const {
  if (!(eta >= 0.0)) throw std::invalid_argument("RecoveryConfig: eta must be >= 0");
  if (!(step > 0.0)) throw std::invalid_argument("RecoveryConfig: step must be > 0");
  if (max_iters < 0) throw std::invalid_argument("RecoveryConfig: max_iters must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("RecoveryConfig: tol must be > 0");
}

CorrelationVector correlation_vector(const SensingEnsemble& ensemble, const SimplexCode& code,
                                     const MeasurementVector& y) {
  if (code.q != ensemble.q || y.q != ensemble.q)
    throw std::invalid_argument("correlation_vector: alphabet mismatch");
  if (y.m != ensemble.m)
    throw std::invalid_argument("correlation_vector: measurement count mismatch");

  CorrelationVector result;
  result.m = y.m;
  result.xi_bar = Eigen::VectorXd::Zero(ensemble.d);
  const int rows = ensemble.q - 1;
  for (int i = 0; i < ensemble.m; ++i) {
    // xi_i = a_{y_i}^T W_i, accumulated while W_i streams past row-major.
    Rng wrng = matrix_stream(ensemble, i);
    for (int r = 0; r < rows; ++r) {
      const double coef = code.vectors(y.symbols[i], r);
      for (int c = 0; c < ensemble.d; ++c) result.xi_bar(c) += coef * wrng.gaussian();
    }
  }
  result.xi_bar /= static_cast<double>(ensemble.m);
  return result;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& u, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("soft_threshold: eta must be >= 0");
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double a = std::abs(u(i));
    out(i) = a > eta ? (1.0 - eta / a) * u(i) : 0.0;
  }
  return out;
}

Eigen::VectorXd project_unit_ball(const Eigen::VectorXd& u) {
  const double n = u.norm();
  return n > 1.0 ? Eigen::VectorXd(u / n) : u;
}

double sparse_objective(const Eigen::VectorXd& xi_bar, const Eigen::VectorXd& u, double eta) {
  return xi_bar.dot(u) - eta * u.lpNorm<1>();
}

RecoveryResult recover_closed_form(const CorrelationVector& xi, double eta) {
  RecoveryResult res;
  Eigen::VectorXd st = soft_threshold(xi.xi_bar, eta);
  const double n = st.norm();
  if (n == 0.0) {
    res.x = Eigen::VectorXd::Zero(xi.xi_bar.size());
    res.degenerate = true;
    res.objective = 0.0;
    return res;
  }
  res.x = st / n;
  res.objective = sparse_objective(xi.xi_bar, res.x, eta);
  return res;
}

RecoveryResult recover_proximal(const CorrelationVector& xi, const RecoveryConfig& config) {
  config.validate();
  if (config.loss != Loss::Linear)
    throw std::invalid_argument("recover_proximal: only the linear loss is supported here");

  const int d = static_cast<int>(xi.xi_bar.size());
  Eigen::VectorXd u = random_unit_vector(d, config.init_seed);

  RecoveryResult res;
  res.x = u;
  res.objective = sparse_objective(xi.xi_bar, u, config.eta);
  res.converged = false;

  int t = 0;
  for (; t < config.max_iters; ++t) {
    Eigen::VectorXd next = u + config.step * xi.xi_bar;
    next = soft_threshold(next, config.eta);
    next = project_unit_ball(next);
    const double change = (next - u).norm();
    u = std::move(next);
    const double obj = sparse_objective(xi.xi_bar, u, config.eta);
    if (obj > res.objective) {
      res.objective = obj;
      res.x = u;
    }
    if (change < config.tol) {
      res.converged = true;
      ++t;
      break;
    }
  }
  res.iterations = t;
  res.degenerate = (res.x.norm() == 0.0);
  return res;
}

RecoveryResult recover_loss(const SensingEnsemble& ensemble, const SimplexCode& code,
                            const MeasurementVector& y, const RecoveryConfig& config) {
  config.validate();
  if (config.loss == Loss::Linear)
    throw std::invalid_argument("recover_loss: use recover_proximal for the linear loss");

  // xi rows are materialized once (m x d); the subgradient iteration then
  // never touches the sensing matrices again.
  Eigen::MatrixXd Xi(ensemble.m, ensemble.d);
  {
    const int rows = ensemble.q - 1;
    if (code.q != ensemble.q || y.q != ensemble.q || y.m != ensemble.m)
      throw std::invalid_argument("recover_loss: shape mismatch");
    for (int i = 0; i < ensemble.m; ++i) {
      Rng wrng = matrix_stream(ensemble, i);
      Xi.row(i).setZero();
      for (int r = 0; r < rows; ++r) {
        const double coef = code.vectors(y.symbols[i], r);
        for (int c = 0; c < ensemble.d; ++c) Xi(i, c) += coef * wrng.gaussian();
      }
    }
  }

  const double inv_m = 1.0 / static_cast<double>(ensemble.m);
  const auto objective = [&](const Eigen::VectorXd& u) {
    const Eigen::VectorXd s = Xi * u;
    double risk = 0.0;
    for (int i = 0; i < ensemble.m; ++i) risk += loss_value(config.loss, -s(i));
    return risk * inv_m + config.eta * u.lpNorm<1>();
  };

  Eigen::VectorXd u = random_unit_vector(ensemble.d, config.init_seed);

  RecoveryResult res;
  res.x = u;
  res.objective = objective(u);
  res.converged = (config.max_iters == 0);

  Eigen::VectorXd slopes(ensemble.m);
  for (int t = 1; t <= config.max_iters; ++t) {
    const Eigen::VectorXd s = Xi * u;
    for (int i = 0; i < ensemble.m; ++i) slopes(i) = loss_slope(config.loss, -s(i));
    // d/du (1/m) sum V(-<xi_i, u>) = -(1/m) Xi^T slopes
    const double step_t = config.step / std::sqrt(static_cast<double>(t));
    Eigen::VectorXd next = u + step_t * inv_m * (Xi.transpose() * slopes);
    if (config.eta > 0.0) next = soft_threshold(next, config.eta * step_t);
    next = project_unit_ball(next);

    const double change = (next - u).norm();
    u = std::move(next);
    const double obj = objective(u);
    if (obj < res.objective) {
      res.objective = obj;
      res.x = u;
    }
    res.iterations = t;
    if (change < config.tol) {
      res.converged = true;
      break;
    }
  }
  res.degenerate = (res.x.norm() == 0.0);
  return res;
}

}  // namespace qcs
