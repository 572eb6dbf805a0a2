#include "qcs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qcs/analysis.hpp"
#include "qcs/pgm.hpp"
#include "qcs/recovery.hpp"
#include "qcs/signals.hpp"
#include "qcs/text.hpp"

namespace qcs::harness {

namespace {

// Sub-stream indices under a row seed.
constexpr uint64_t kSubSignal = 1;
constexpr uint64_t kSubEnsemble = 2;
constexpr uint64_t kSubFlip = 3;
constexpr uint64_t kSubInit = 4;

const std::vector<std::string> kKinds = {"sweep_q",     "sweep_m",    "surface",
                                         "budget",      "noise_sigma", "noise_flip",
                                         "image",       "lambda",      "width"};

[[noreturn]] void bad_spec(const std::string& msg) { throw std::invalid_argument("spec: " + msg); }

struct Cell {
  int d = 0, s = 0;
  long m = 0;
  int q = 0;
  std::optional<double> sigma, p;  // reported values; absent when inapplicable
  NoiseSpec noise;                 // flip_seed is re-keyed per trial
  double predictor = 0.0;          // theory curve value for the bound fit
};

double ln_q(int q) { return std::log(static_cast<double>(q)); }

// eta making the closed-form estimate exactly s-sparse on generic inputs:
// the (s+1)-th largest |xi_bar_i|.
double auto_eta(const Eigen::VectorXd& xi_bar, int s) {
  const int d = static_cast<int>(xi_bar.size());
  if (s >= d) return 0.0;
  std::vector<double> mags(xi_bar.data(), xi_bar.data() + d);
  for (auto& v : mags) v = std::abs(v);
  std::nth_element(mags.begin(), mags.begin() + s, mags.end(), std::greater<double>());
  return mags[static_cast<size_t>(s)];
}

// Runs fn(0..n-1), optionally across threads; any exception is re-thrown on
// the calling thread after the pool drains.
void for_each_index(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// signal -> sense -> correlate -> recover; returns the squared error.
double sweep_trial_error(const ExperimentSpec& spec, const Cell& cell, uint64_t seed) {
  const SparseSignal signal = gauss_bernoulli(cell.d, cell.s, mix_key(seed, kSubSignal));
  const SensingEnsemble ensemble{mix_key(seed, kSubEnsemble), static_cast<int>(cell.m), cell.q,
                                 cell.d};
  const SimplexCode code = build_simplex_code(cell.q);

  NoiseSpec noise = cell.noise;
  if (noise.kind == NoiseSpec::Kind::SymbolFlip) noise.flip_seed = mix_key(seed, kSubFlip);

  const MeasurementVector y = sense(ensemble, code, signal.vector, noise);
  const CorrelationVector xi = correlation_vector(ensemble, code, y);

  RecoveryConfig cfg;
  cfg.eta = spec.eta_policy == EtaPolicy::Fixed ? spec.eta_value : auto_eta(xi.xi_bar, cell.s);
  cfg.init_seed = mix_key(seed, kSubInit);
  const RecoveryResult rec = recover_proximal(xi, cfg);
  return reconstruction_error(signal.vector, rec.x);
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                   static_cast<double>(v.size()));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = mean_of(x), my = mean_of(y);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

// Least-squares scale C for mean ~ C * predictor, through the origin.
double fit_scale(const std::vector<CellStat>& cells) {
  double num = 0.0, den = 0.0;
  for (const auto& c : cells) {
    num += c.mean_error * c.predictor;
    den += c.predictor * c.predictor;
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

void check_grid_int(const std::vector<int>& grid, const char* name, int lo) {
  if (grid.empty()) bad_spec(std::string(name) + " grid is empty");
  for (int v : grid)
    if (v < lo) bad_spec(std::string(name) + " value " + std::to_string(v) + " below " +
                         std::to_string(lo));
}

void check_signal_dims(int d, int s) {
  if (d < 1) bad_spec("d must be >= 1");
  if (s < 1 || s > d) bad_spec("s must be in [1, d]");
}

// Fixed sensing noise for the plain sweeps: one sigma or one p, not both.
NoiseSpec fixed_noise(const ExperimentSpec& spec) {
  if (!spec.sigma_grid.empty() && !spec.p_grid.empty())
    bad_spec("give either --sigma or --p for this sweep, not both");
  if (!spec.sigma_grid.empty()) {
    if (spec.sigma_grid.size() != 1) bad_spec("this sweep takes a single sigma value");
    return spec.sigma_grid[0] > 0.0 ? NoiseSpec::pre_quant_gaussian(spec.sigma_grid[0])
                                    : NoiseSpec::noiseless();
  }
  if (!spec.p_grid.empty()) {
    if (spec.p_grid.size() != 1) bad_spec("this sweep takes a single p value");
    return spec.p_grid[0] < 1.0 ? NoiseSpec::symbol_flip(spec.p_grid[0], 0) : NoiseSpec::noiseless();
  }
  return NoiseSpec::noiseless();
}

std::optional<double> noise_sigma_column(const NoiseSpec& n) {
  if (n.kind == NoiseSpec::Kind::PreQuantGaussian) return n.sigma;
  return std::nullopt;
}

std::optional<double> noise_p_column(const NoiseSpec& n) {
  if (n.kind == NoiseSpec::Kind::SymbolFlip) return n.p;
  return std::nullopt;
}

std::vector<Cell> build_cells(const ExperimentSpec& spec, std::string& warning) {
  std::vector<Cell> cells;
  const auto push = [&](long m, int q, NoiseSpec noise, double predictor,
                        std::optional<double> sigma_col, std::optional<double> p_col) {
    Cell c;
    c.d = spec.d;
    c.s = spec.s;
    c.m = m;
    c.q = q;
    c.noise = noise;
    c.predictor = predictor;
    c.sigma = sigma_col;
    c.p = p_col;
    cells.push_back(std::move(c));
  };

  if (spec.kind == "sweep_q") {
    const NoiseSpec noise = fixed_noise(spec);
    const long m = spec.m_grid[0];
    for (int q : spec.q_grid)
      push(m, q, noise, 1.0 / std::sqrt(ln_q(q)), noise_sigma_column(noise),
           noise_p_column(noise));
  } else if (spec.kind == "sweep_m") {
    const NoiseSpec noise = fixed_noise(spec);
    const int q = spec.q_grid[0];
    for (int m : spec.m_grid)
      push(m, q, noise, 1.0 / std::sqrt(static_cast<double>(m)), noise_sigma_column(noise),
           noise_p_column(noise));
  } else if (spec.kind == "surface") {
    const NoiseSpec noise = fixed_noise(spec);
    for (int m : spec.m_grid)
      for (int q : spec.q_grid)
        push(m, q, noise, 1.0 / std::sqrt(m * ln_q(q)), noise_sigma_column(noise),
             noise_p_column(noise));
  } else if (spec.kind == "budget") {
    const NoiseSpec noise = fixed_noise(spec);
    for (int q : spec.q_grid) {
      const long m = static_cast<long>(static_cast<double>(spec.budget_bits) /
                                       std::log2(static_cast<double>(q)));
      if (m < 1) continue;  // q too expensive for this budget
      push(m, q, noise, 1.0 / std::sqrt(m * ln_q(q)), noise_sigma_column(noise),
           noise_p_column(noise));
    }
    if (cells.empty())
      warning = "budget of " + std::to_string(spec.budget_bits) +
                " bits cannot afford a single measurement at any requested q";
  } else if (spec.kind == "noise_sigma") {
    const long m = spec.m_grid[0];
    const int q = spec.q_grid[0];
    for (double sigma : spec.sigma_grid) {
      const NoiseSpec noise =
          sigma > 0.0 ? NoiseSpec::pre_quant_gaussian(sigma) : NoiseSpec::noiseless();
      push(m, q, noise, std::sqrt(1.0 + sigma * sigma) / std::sqrt(m * ln_q(q)), sigma,
           std::nullopt);
    }
  } else if (spec.kind == "noise_flip") {
    const long m = spec.m_grid[0];
    const int q = spec.q_grid[0];
    for (double p : spec.p_grid) {
      const NoiseSpec noise = p < 1.0 ? NoiseSpec::symbol_flip(p, 0) : NoiseSpec::noiseless();
      push(m, q, noise, 1.0 / ((2.0 * p - 1.0) * std::sqrt(m * ln_q(q))), std::nullopt, p);
    }
  }
  return cells;
}

RunResult run_sweep(const ExperimentSpec& spec) {
  RunResult result;
  const std::vector<Cell> cells = build_cells(spec, result.warning);
  const int trials = spec.trials;
  const int n_jobs = static_cast<int>(cells.size()) * trials;
  result.rows.resize(static_cast<size_t>(n_jobs));

  for_each_index(n_jobs, spec.threads, [&](int job) {
    const int ci = job / trials;
    const int trial = job % trials;
    const Cell& cell = cells[static_cast<size_t>(ci)];
    const double sigma_key = cell.sigma.value_or(0.0);
    const double p_key = cell.p.value_or(1.0);
    const uint64_t seed = row_seed(spec.master_seed, cell.m, cell.q, sigma_key, p_key, trial);

    const auto t0 = std::chrono::steady_clock::now();
    const double error = sweep_trial_error(spec, cell, seed);
    const auto t1 = std::chrono::steady_clock::now();

    ResultRow& row = result.rows[static_cast<size_t>(job)];
    row.kind = spec.kind;
    row.d = cell.d;
    row.s = cell.s;
    row.m = cell.m;
    row.q = cell.q;
    row.sigma = cell.sigma;
    row.p = cell.p;
    row.trial = trial;
    row.seed = seed;
    row.error = error;
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });

  // Aggregate, fit the bound scale on cell means, stamp bounds per row.
  result.cells.reserve(cells.size());
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    std::vector<double> errs(static_cast<size_t>(trials));
    for (int t = 0; t < trials; ++t) errs[static_cast<size_t>(t)] = result.rows[ci * trials + t].error;
    CellStat stat;
    stat.d = cells[ci].d;
    stat.s = cells[ci].s;
    stat.m = cells[ci].m;
    stat.q = cells[ci].q;
    stat.sigma = cells[ci].sigma;
    stat.p = cells[ci].p;
    stat.mean_error = mean_of(errs);
    stat.std_error = stderr_of(errs);
    stat.predictor = cells[ci].predictor;
    result.cells.push_back(stat);
  }
  result.fitted_c = fit_scale(result.cells);
  if (std::isfinite(result.fitted_c)) {
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const double bound = result.fitted_c * cells[ci].predictor;
      for (int t = 0; t < trials; ++t) result.rows[ci * trials + t].bound = bound;
    }
  }

  std::vector<double> means, preds;
  for (const auto& c : result.cells) {
    means.push_back(c.mean_error);
    preds.push_back(c.predictor);
  }
  result.pearson = pearson(means, preds);

  if (spec.kind == "sweep_m") {
    std::vector<double> log_m, log_err;
    for (const auto& c : result.cells) {
      if (c.mean_error > 0.0) {
        log_m.push_back(std::log(static_cast<double>(*c.m)));
        log_err.push_back(std::log(c.mean_error));
      }
    }
    result.loglog_slope = ols_slope(log_m, log_err);
  }
  return result;
}

RunResult run_image(const ExperimentSpec& spec) {
  const ImagePlane input =
      spec.image_input.empty() ? make_test_image(64, 64) : read_pgm(spec.image_input);
  const Eigen::VectorXd coeffs = haar2d_forward(input);
  const int d_full = static_cast<int>(coeffs.size());
  if (spec.image_top_k < 1 || spec.image_top_k > d_full)
    bad_spec("image top-k must be in [1, " + std::to_string(d_full) + "]");

  const Eigen::VectorXd sparse_coeffs = threshold_top_k(coeffs, spec.image_top_k);
  const Normalized norm = normalize(sparse_coeffs);
  const ImagePlane reference = haar2d_inverse(sparse_coeffs, input.width, input.height);
  const Eigen::Map<const Eigen::VectorXd> ref_pixels(reference.pixels.data(),
                                                     static_cast<Eigen::Index>(reference.pixels.size()));
  if (!spec.image_out_prefix.empty())
    write_pgm(spec.image_out_prefix + "_reference.pgm", reference);

  const long m = spec.m_grid[0];
  struct ImageCell {
    int q;
    double sigma;
  };
  std::vector<ImageCell> cells;
  for (int q : spec.q_grid)
    for (double sigma : spec.sigma_grid) cells.push_back({q, sigma});

  RunResult result;
  result.rows.resize(cells.size());
  std::vector<ImagePlane> recons(cells.size());

  for_each_index(static_cast<int>(cells.size()), spec.threads, [&](int ci) {
    const auto& cell = cells[static_cast<size_t>(ci)];
    const uint64_t seed = row_seed(spec.master_seed, m, cell.q, cell.sigma, 1.0, 0);

    const auto t0 = std::chrono::steady_clock::now();
    const SensingEnsemble ensemble{mix_key(seed, kSubEnsemble), static_cast<int>(m), cell.q,
                                   d_full};
    const SimplexCode code = build_simplex_code(cell.q);
    const NoiseSpec noise = cell.sigma > 0.0 ? NoiseSpec::pre_quant_gaussian(cell.sigma)
                                             : NoiseSpec::noiseless();
    const MeasurementVector y = sense(ensemble, code, norm.unit, noise);
    const CorrelationVector xi = correlation_vector(ensemble, code, y);

    RecoveryConfig cfg;
    cfg.eta = spec.eta_policy == EtaPolicy::Fixed ? spec.eta_value
                                                  : auto_eta(xi.xi_bar, spec.image_top_k);
    cfg.init_seed = mix_key(seed, kSubInit);
    const RecoveryResult rec = recover_proximal(xi, cfg);

    const Eigen::VectorXd coeffs_hat = norm.scale * rec.x;
    ImagePlane recon = haar2d_inverse(coeffs_hat, input.width, input.height);
    const Eigen::Map<const Eigen::VectorXd> rec_pixels(recon.pixels.data(),
                                                       static_cast<Eigen::Index>(recon.pixels.size()));
    const auto t1 = std::chrono::steady_clock::now();

    ResultRow& row = result.rows[static_cast<size_t>(ci)];
    row.kind = spec.kind;
    row.d = d_full;
    row.s = spec.image_top_k;
    row.m = m;
    row.q = cell.q;
    row.sigma = cell.sigma;
    row.trial = 0;
    row.seed = seed;
    row.error = reconstruction_error(norm.unit, rec.x);
    row.snr_db = snr_db(ref_pixels, rec_pixels);
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    recons[static_cast<size_t>(ci)] = std::move(recon);
  });

  if (!spec.image_out_prefix.empty()) {
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      const std::string name = spec.image_out_prefix + "_q" + std::to_string(cells[ci].q) +
                               "_sigma" + format_double(cells[ci].sigma) + ".pgm";
      write_pgm(name, recons[ci]);
    }
  }

  for (const auto& row : result.rows) {
    CellStat stat;
    stat.d = row.d;
    stat.s = row.s;
    stat.m = row.m;
    stat.q = row.q;
    stat.sigma = row.sigma;
    stat.mean_error = row.error;
    result.cells.push_back(stat);
  }
  return result;
}

RunResult run_lambda(const ExperimentSpec& spec) {
  RunResult result;
  const std::vector<double> sigmas = spec.sigma_grid.empty() ? std::vector<double>{0.0}
                                                             : spec.sigma_grid;
  struct LambdaCell {
    int q;
    double sigma;
  };
  std::vector<LambdaCell> cells;
  for (int q : spec.q_grid)
    for (double sigma : sigmas) cells.push_back({q, sigma});
  result.rows.resize(cells.size());
  result.cells.resize(cells.size());

  for_each_index(static_cast<int>(cells.size()), spec.threads, [&](int ci) {
    const auto& cell = cells[static_cast<size_t>(ci)];
    const uint64_t seed = row_seed(spec.master_seed, spec.n_samples, cell.q, cell.sigma, 1.0, 0);
    const auto t0 = std::chrono::steady_clock::now();
    const LambdaEstimate est = estimate_lambda(cell.q, cell.sigma, spec.n_samples, seed);
    const auto t1 = std::chrono::steady_clock::now();

    ResultRow& row = result.rows[static_cast<size_t>(ci)];
    row.kind = spec.kind;
    row.m = spec.n_samples;
    row.q = cell.q;
    row.sigma = cell.sigma;
    row.trial = 0;
    row.seed = seed;
    row.error = est.value;
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    CellStat& stat = result.cells[static_cast<size_t>(ci)];
    stat.m = spec.n_samples;
    stat.q = cell.q;
    stat.sigma = cell.sigma;
    stat.mean_error = est.value;
    stat.std_error = est.std_error;
    stat.predictor = std::sqrt(ln_q(cell.q) / (1.0 + cell.sigma * cell.sigma));
  });

  result.fitted_c = fit_scale(result.cells);
  if (std::isfinite(result.fitted_c))
    for (size_t ci = 0; ci < cells.size(); ++ci)
      result.rows[ci].bound = result.fitted_c * result.cells[ci].predictor;

  std::vector<double> means, preds;
  for (const auto& c : result.cells) {
    means.push_back(c.mean_error);
    preds.push_back(c.predictor);
  }
  result.pearson = pearson(means, preds);
  return result;
}

RunResult run_width(const ExperimentSpec& spec) {
  RunResult result;
  struct WidthCell {
    int d, s;
  };
  std::vector<WidthCell> cells;
  for (int d : spec.d_grid)
    for (int s : spec.s_grid) {
      if (s > d) bad_spec("width grid pair s=" + std::to_string(s) + " > d=" + std::to_string(d));
      cells.push_back({d, s});
    }
  result.rows.resize(cells.size());
  result.cells.resize(cells.size());

  for_each_index(static_cast<int>(cells.size()), spec.threads, [&](int ci) {
    const auto& cell = cells[static_cast<size_t>(ci)];
    const uint64_t seed = mix_key(spec.master_seed, {static_cast<uint64_t>(cell.d),
                                                     static_cast<uint64_t>(cell.s),
                                                     static_cast<uint64_t>(spec.n_samples)});
    const auto t0 = std::chrono::steady_clock::now();
    const WidthEstimate est = estimate_mean_width_K1(cell.d, cell.s, spec.n_samples, seed);
    const auto t1 = std::chrono::steady_clock::now();

    ResultRow& row = result.rows[static_cast<size_t>(ci)];
    row.kind = spec.kind;
    row.d = cell.d;
    row.s = cell.s;
    row.m = spec.n_samples;
    row.trial = 0;
    row.seed = seed;
    row.error = est.value;
    row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    CellStat& stat = result.cells[static_cast<size_t>(ci)];
    stat.d = cell.d;
    stat.s = cell.s;
    stat.m = spec.n_samples;
    stat.mean_error = est.value;
    stat.std_error = est.std_error;
    stat.predictor = std::sqrt(cell.s * std::log(2.0 * cell.d / cell.s));
  });

  result.fitted_c = fit_scale(result.cells);
  if (std::isfinite(result.fitted_c))
    for (size_t ci = 0; ci < cells.size(); ++ci)
      result.rows[ci].bound = result.fitted_c * result.cells[ci].predictor;
  return result;
}

}  // namespace

uint64_t row_seed(uint64_t master_seed, long m, int q, double sigma, double p, int trial) {
  return mix_key(master_seed,
                 {static_cast<uint64_t>(m), static_cast<uint64_t>(q),
                  std::bit_cast<uint64_t>(sigma), std::bit_cast<uint64_t>(p),
                  static_cast<uint64_t>(trial)});
}

void ExperimentSpec::validate() const {
  if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end())
    bad_spec("unknown kind '" + kind + "'");
  if (trials < 1) bad_spec("trials must be >= 1");
  if (threads < 1) bad_spec("threads must be >= 1");

  const auto check_q = [&] { check_grid_int(q_grid, "q", 2); };
  const auto check_m = [&] { check_grid_int(m_grid, "m", 1); };
  const auto one_m = [&] {
    check_m();
    if (m_grid.size() != 1) bad_spec("this kind takes a single m value");
  };
  const auto one_q = [&] {
    check_q();
    if (q_grid.size() != 1) bad_spec("this kind takes a single q value");
  };

  if (kind == "sweep_q") {
    check_signal_dims(d, s);
    one_m();
    check_q();
  } else if (kind == "sweep_m") {
    check_signal_dims(d, s);
    check_m();
    one_q();
  } else if (kind == "surface") {
    check_signal_dims(d, s);
    check_m();
    check_q();
  } else if (kind == "budget") {
    check_signal_dims(d, s);
    check_q();
    if (budget_bits < 1) bad_spec("budget must be >= 1 bit");
  } else if (kind == "noise_sigma") {
    check_signal_dims(d, s);
    one_m();
    one_q();
    if (sigma_grid.empty()) bad_spec("sigma grid is empty");
    for (double v : sigma_grid)
      if (!(v >= 0.0)) bad_spec("sigma must be >= 0");
  } else if (kind == "noise_flip") {
    check_signal_dims(d, s);
    one_m();
    one_q();
    if (p_grid.empty()) bad_spec("p grid is empty");
    for (double v : p_grid)
      if (!(v > 0.5 && v <= 1.0)) bad_spec("p must be in (1/2, 1]");
  } else if (kind == "image") {
    one_m();
    check_q();
    if (sigma_grid.empty()) bad_spec("sigma grid is empty (use 0 for the noiseless cell)");
    for (double v : sigma_grid)
      if (!(v >= 0.0)) bad_spec("sigma must be >= 0");
    if (image_top_k < 1) bad_spec("image top-k must be >= 1");
  } else if (kind == "lambda") {
    check_q();
    if (n_samples < 1) bad_spec("samples must be >= 1");
    for (double v : sigma_grid)
      if (!(v >= 0.0)) bad_spec("sigma must be >= 0");
  } else if (kind == "width") {
    check_grid_int(d_grid, "d", 1);
    check_grid_int(s_grid, "s", 1);
    if (n_samples < 1) bad_spec("samples must be >= 1");
  }
  if (eta_policy == EtaPolicy::Fixed && !(eta_value >= 0.0)) bad_spec("eta must be >= 0");
}

RunResult run(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.kind == "image") return run_image(spec);
  if (spec.kind == "lambda") return run_lambda(spec);
  if (spec.kind == "width") return run_width(spec);
  return run_sweep(spec);
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = "kind,d,s,m,q,sigma,p,trial,seed,error,snr_db,bound,runtime_ms\n";
  const auto opt_int = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  const auto opt_dbl = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : rows) {
    char runtime[32];
    const auto rt =
        std::to_chars(runtime, runtime + sizeof(runtime), r.runtime_ms, std::chars_format::fixed, 3);
    *rt.ptr = '\0';
    out += r.kind;
    out += ',' + opt_int(r.d) + ',' + opt_int(r.s) + ',' + opt_int(r.m) + ',' + opt_int(r.q);
    out += ',' + opt_dbl(r.sigma) + ',' + opt_dbl(r.p);
    out += ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed);
    out += ',' + format_double(r.error) + ',' + opt_dbl(r.snr_db) + ',' + opt_dbl(r.bound);
    out += ',';
    out += runtime;
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("csv: cannot create " + path);
  out << to_csv(rows);
  if (!out) throw IoError("csv: write failed for " + path);
}

}  // namespace qcs::harness
