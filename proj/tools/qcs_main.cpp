// Experiment harness CLI: error-scaling sweeps, the quantization versus
// measurement-budget tradeoff, noise studies, theory-constant tables and the
// image reconstruction pipeline. Emits CSV (plus PGM files for image runs).

#include <cmath>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcs/harness.hpp"
#include "qcs/pgm.hpp"
#include "qcs/text.hpp"

namespace {

constexpr int kExitInvalidSpec = 2;
constexpr int kExitIo = 3;

struct Command {
  qcs::harness::ExperimentSpec spec;
  std::string out_path;
  double eta = -1.0;  // negative selects the sparsity-driven automatic policy
  bool quiet = false;
  CLI::App* app = nullptr;
};

void add_common_flags(CLI::App* cmd, Command& c) {
  cmd->add_option("--eta", c.eta, "Fixed l1 penalty (default: automatic from sparsity)");
  cmd->add_option("--seed", c.spec.master_seed, "Master seed")->capture_default_str();
  cmd->add_option("--out", c.out_path, "CSV output path (default: stdout)");
  cmd->add_option("--threads", c.spec.threads, "Worker threads")->capture_default_str();
  cmd->add_flag("--quiet", c.quiet, "Suppress the run summary");
}

void add_signal_flags(CLI::App* cmd, Command& c) {
  cmd->add_option("--d", c.spec.d, "Signal dimension")->capture_default_str();
  cmd->add_option("--s", c.spec.s, "Signal sparsity")->capture_default_str();
  cmd->add_option("--trials", c.spec.trials, "Trials per grid point")->capture_default_str();
}

CLI::Option* add_list_int(CLI::App* cmd, const std::string& name, std::vector<int>& target,
                          const std::string& help) {
  return cmd->add_option(name, target, help)->delimiter(',')->capture_default_str();
}

CLI::Option* add_list_dbl(CLI::App* cmd, const std::string& name, std::vector<double>& target,
                          const std::string& help) {
  return cmd->add_option(name, target, help)->delimiter(',')->capture_default_str();
}

std::string cell_label(const qcs::harness::CellStat& c) {
  std::string label;
  const auto append = [&](const char* name, const std::string& value) {
    if (!label.empty()) label += ' ';
    label += name;
    label += '=';
    label += value;
  };
  if (c.d) append("d", std::to_string(*c.d));
  if (c.s) append("s", std::to_string(*c.s));
  if (c.m) append("m", std::to_string(*c.m));
  if (c.q) append("q", std::to_string(*c.q));
  if (c.sigma) append("sigma", qcs::format_double(*c.sigma));
  if (c.p) append("p", qcs::format_double(*c.p));
  return label;
}

void print_summary(const qcs::harness::ExperimentSpec& spec,
                   const qcs::harness::RunResult& result, std::ostream& os) {
  os << "# " << spec.kind << ": " << result.rows.size() << " rows\n";
  for (const auto& c : result.cells) {
    os << "#   " << cell_label(c) << "  mean=" << qcs::format_double(c.mean_error);
    if (c.std_error > 0.0) os << " +- " << qcs::format_double(c.std_error);
    os << "\n";
  }
  if (std::isfinite(result.fitted_c))
    os << "# fitted C = " << qcs::format_double(result.fitted_c) << "\n";
  if (std::isfinite(result.pearson))
    os << "# pearson(mean error, predictor) = " << qcs::format_double(result.pearson) << "\n";
  if (std::isfinite(result.loglog_slope))
    os << "# log-log slope = " << qcs::format_double(result.loglog_slope) << "\n";
}

int run_command(Command& c) {
  if (c.eta >= 0.0) {
    c.spec.eta_policy = qcs::harness::EtaPolicy::Fixed;
    c.spec.eta_value = c.eta;
  }
  if (c.spec.kind == "image" && c.spec.image_out_prefix.empty()) {
    // Reconstructions land next to the CSV by default.
    if (!c.out_path.empty()) {
      const auto dot = c.out_path.rfind('.');
      c.spec.image_out_prefix = dot == std::string::npos ? c.out_path : c.out_path.substr(0, dot);
    } else {
      c.spec.image_out_prefix = "image";
    }
  }

  const qcs::harness::RunResult result = qcs::harness::run(c.spec);
  if (!result.warning.empty()) std::cerr << "warning: " << result.warning << "\n";

  if (c.out_path.empty()) {
    std::cout << qcs::harness::to_csv(result.rows);
    if (!c.quiet) print_summary(c.spec, result, std::cerr);
  } else {
    qcs::harness::write_csv(c.out_path, result.rows);
    if (!c.quiet) print_summary(c.spec, result, std::cout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-ary compressive sensing experiment harness"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> commands;
  const auto make = [&](const std::string& name, const std::string& kind,
                        const std::string& help) -> Command& {
    commands.push_back(std::make_unique<Command>());
    Command& c = *commands.back();
    c.spec.kind = kind;
    c.app = app.add_subcommand(name, help);
    return c;
  };

  {
    Command& c = make("sweep-q", "sweep_q", "Reconstruction error versus alphabet size q");
    c.spec.m_grid = {70};
    c.spec.q_grid = {2, 4, 8, 16, 32};
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement count (single value)");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet sizes");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Fixed score-noise level");
    add_list_dbl(c.app, "--p", c.spec.p_grid, "Fixed symbol retention probability");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("sweep-m", "sweep_m", "Reconstruction error versus measurement count m");
    c.spec.m_grid = {25, 50, 100, 200, 400};
    c.spec.q_grid = {3};
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement counts");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet size (single value)");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Fixed score-noise level");
    add_list_dbl(c.app, "--p", c.spec.p_grid, "Fixed symbol retention probability");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("surface", "surface", "Error surface over the (m, q) grid");
    c.spec.m_grid = {50, 100, 200, 400};
    c.spec.q_grid = {2, 4, 8, 16};
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement counts");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet sizes");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Fixed score-noise level");
    add_list_dbl(c.app, "--p", c.spec.p_grid, "Fixed symbol retention probability");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("budget", "budget", "Equal-bit operating points: m = floor(budget/log2 q)");
    c.spec.q_grid = {2, 4, 16};
    c.spec.budget_bits = 512;
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet sizes");
    c.app->add_option("--budget", c.spec.budget_bits, "Total bit budget")->capture_default_str();
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Fixed score-noise level");
    add_list_dbl(c.app, "--p", c.spec.p_grid, "Fixed symbol retention probability");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("noise-sigma", "noise_sigma", "Error versus pre-quantization noise level");
    c.spec.m_grid = {200};
    c.spec.q_grid = {32};
    c.spec.sigma_grid = {0.0, 0.4, 0.8, 1.6};
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement count (single value)");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet size (single value)");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Noise levels");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("noise-flip", "noise_flip", "Error versus symbol retention probability");
    c.spec.m_grid = {200};
    c.spec.q_grid = {8};
    c.spec.p_grid = {0.6, 0.75, 0.9, 1.0};
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement count (single value)");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet size (single value)");
    add_list_dbl(c.app, "--p", c.spec.p_grid, "Retention probabilities");
    add_signal_flags(c.app, c);
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("image", "image", "Image reconstruction from quantized measurements");
    c.spec.m_grid = {2048};
    c.spec.q_grid = {2, 32};
    c.spec.sigma_grid = {0.0, 0.8};
    c.app->add_option("--input", c.spec.image_input,
                      "Input PGM (power-of-two dims; default: built-in test image)");
    add_list_int(c.app, "--m", c.spec.m_grid, "Measurement count (single value)");
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet sizes");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Noise levels (0 = noiseless)");
    c.app->add_option("--k", c.spec.image_top_k, "Wavelet coefficients kept")
        ->capture_default_str();
    c.app->add_option("--img-prefix", c.spec.image_out_prefix,
                      "Prefix for reconstructed PGMs (default: derived from --out)");
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("lambda", "lambda", "Monte Carlo table of the margin constant");
    c.spec.q_grid = {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
    c.spec.sigma_grid = {0.0};
    c.spec.n_samples = 200000;
    add_list_int(c.app, "--q", c.spec.q_grid, "Alphabet sizes");
    add_list_dbl(c.app, "--sigma", c.spec.sigma_grid, "Score-noise levels");
    c.app->add_option("--samples", c.spec.n_samples, "Monte Carlo samples per cell")
        ->capture_default_str();
    add_common_flags(c.app, c);
  }
  {
    Command& c = make("width", "width", "Monte Carlo table of the sparse-set mean width");
    c.spec.d_grid = {50, 100, 200};
    c.spec.s_grid = {1, 5, 10};
    c.spec.n_samples = 20000;
    add_list_int(c.app, "--d", c.spec.d_grid, "Ambient dimensions");
    add_list_int(c.app, "--s", c.spec.s_grid, "Sparsity levels");
    c.app->add_option("--samples", c.spec.n_samples, "Monte Carlo samples per cell")
        ->capture_default_str();
    add_common_flags(c.app, c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidSpec;
  }

  try {
    for (auto& c : commands)
      if (c->app->parsed()) return run_command(*c);
    std::cerr << "error: no subcommand selected\n";
    return kExitInvalidSpec;
  } catch (const qcs::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
