#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qcs/sensing.hpp"

namespace qcs::harness {

enum class EtaPolicy { AutoSparsity, Fixed };

// One experiment description; `kind` selects the runner. Grids that a kind
// does not use are ignored by it but validated when supplied.
struct ExperimentSpec {
  std::string kind;  // sweep_q, sweep_m, surface, budget, noise_sigma, noise_flip, image, lambda, width

  int d = 100;
  int s = 5;
  std::vector<int> m_grid;
  std::vector<int> q_grid;
  int trials = 20;
  std::vector<double> sigma_grid;  // noise_sigma / image grid, or fixed noise on other sweeps
  std::vector<double> p_grid;      // noise_flip grid, or fixed flip noise on other sweeps
  EtaPolicy eta_policy = EtaPolicy::AutoSparsity;
  double eta_value = 0.0;
  uint64_t master_seed = 1;
  long budget_bits = 0;         // budget: total bit budget, m = floor(budget / log2(q))
  long n_samples = 100000;      // lambda / width sample counts
  std::vector<int> d_grid;      // width
  std::vector<int> s_grid;      // width
  int image_top_k = 400;        // image: wavelet coefficients kept
  std::string image_input;      // image: PGM path; empty selects the built-in test image
  std::string image_out_prefix; // image: where reconstructions go; empty disables image output
  int threads = 1;

  void validate() const;  // throws std::invalid_argument with a usable message
};

struct ResultRow {
  std::string kind;
  std::optional<int> d, s;
  std::optional<long> m;
  std::optional<int> q;
  std::optional<double> sigma, p;
  int trial = 0;
  uint64_t seed = 0;
  double error = 0.0;  // squared reconstruction error, or the estimate for lambda/width rows
  std::optional<double> snr_db;
  std::optional<double> bound;
  double runtime_ms = 0.0;
};

// Per-grid-point aggregate over trials.
struct CellStat {
  std::optional<int> d, s;
  std::optional<long> m;
  std::optional<int> q;
  std::optional<double> sigma, p;
  double mean_error = 0.0;
  double std_error = 0.0;  // standard error of the mean (MC stderr for lambda/width)
  double predictor = 0.0;  // theory curve value the bound fit regresses against
};

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<CellStat> cells;
  double fitted_c = std::numeric_limits<double>::quiet_NaN();
  double pearson = std::numeric_limits<double>::quiet_NaN();       // corr(mean error, predictor)
  double loglog_slope = std::numeric_limits<double>::quiet_NaN();  // sweep_m: slope of log error vs log m
  std::string warning;  // non-fatal conditions (e.g. empty budget enumeration)
};

// Deterministic per-row seed; every row is regenerable from the master seed,
// its grid point and its trial index alone.
uint64_t row_seed(uint64_t master_seed, long m, int q, double sigma, double p, int trial);

RunResult run(const ExperimentSpec& spec);

// Fixed schema: kind,d,s,m,q,sigma,p,trial,seed,error,snr_db,bound,runtime_ms.
// Inapplicable fields stay empty. Rows are ordered by grid point then trial
// regardless of how many threads computed them.
std::string to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace qcs::harness
