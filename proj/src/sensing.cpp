#include "qcs/sensing.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qcs/text.hpp"

namespace qcs {

namespace {

// Stream tags: matrix entries, pre-quantization score noise and symbol flips
// are keyed independently so the same ensemble can be reused across noise
// settings.
constexpr uint64_t kMatrixTag = 0x57;  // 'W'
constexpr uint64_t kScoreNoiseTag = 0x67;  // 'g'
constexpr uint64_t kFlipTag = 0x72;  // 'r'

uint64_t matrix_key(const SensingEnsemble& e, int i) {
  return mix_key(e.master_seed, {kMatrixTag, static_cast<uint64_t>(i), static_cast<uint64_t>(e.q),
                                 static_cast<uint64_t>(e.d)});
}

void check_index(const SensingEnsemble& e, int i) {
  if (i < 0 || i >= e.m)
    throw std::out_of_range("measurement index " + std::to_string(i) + " outside [0, " +
                            std::to_string(e.m - 1) + "]");
}

// scores_j = <a_j, z>; argmax with ties resolved to the lowest index.
int argmax_symbol(const SimplexCode& code, const Eigen::VectorXd& scores) {
  int best = 0;
  double best_score = scores(0);
  for (int j = 1; j < code.q; ++j) {
    if (scores(j) > best_score) {
      best_score = scores(j);
      best = j;
    }
  }
  return best;
}

}  // namespace

NoiseSpec NoiseSpec::pre_quant_gaussian(double sigma) {
  NoiseSpec n;
  n.kind = Kind::PreQuantGaussian;
  n.sigma = sigma;
  n.validate();
  return n;
}

NoiseSpec NoiseSpec::symbol_flip(double p, uint64_t flip_seed) {
  NoiseSpec n;
  n.kind = Kind::SymbolFlip;
  n.p = p;
  n.flip_seed = flip_seed;
  n.validate();
  return n;
}

void NoiseSpec::validate() const {
  if (kind == Kind::PreQuantGaussian && !(sigma >= 0.0))
    throw std::invalid_argument("NoiseSpec: sigma must be >= 0");
  if (kind == Kind::SymbolFlip && !(p > 0.5 && p <= 1.0))
    throw std::invalid_argument("NoiseSpec: retention probability must be in (1/2, 1]");
}

std::string NoiseSpec::to_string() const {
  switch (kind) {
    case Kind::Noiseless:
      return "noiseless";
    case Kind::PreQuantGaussian:
      return "gaussian:sigma=" + format_double(sigma);
    case Kind::SymbolFlip:
      return "flip:p=" + format_double(p) + ":seed=" + std::to_string(flip_seed);
  }
  return "noiseless";
}

NoiseSpec NoiseSpec::parse(const std::string& s) {
  if (s == "noiseless") return noiseless();
  if (s.rfind("gaussian:sigma=", 0) == 0)
    return pre_quant_gaussian(parse_double(s.substr(15)));
  if (s.rfind("flip:p=", 0) == 0) {
    const auto seed_pos = s.find(":seed=", 7);
    if (seed_pos != std::string::npos)
      return symbol_flip(parse_double(s.substr(7, seed_pos - 7)),
                         parse_u64(s.substr(seed_pos + 6)));
  }
  throw std::invalid_argument("NoiseSpec: cannot parse '" + s + "'");
}

Rng matrix_stream(const SensingEnsemble& ensemble, int i) {
  check_index(ensemble, i);
  return Rng(matrix_key(ensemble, i));
}

Eigen::MatrixXd materialize_matrix(const SensingEnsemble& ensemble, int i) {
  Rng rng = matrix_stream(ensemble, i);
  Eigen::MatrixXd W(ensemble.q - 1, ensemble.d);
  for (int r = 0; r < ensemble.q - 1; ++r)
    for (int c = 0; c < ensemble.d; ++c) W(r, c) = rng.gaussian();
  return W;
}

int quantize(const SimplexCode& code, const Eigen::MatrixXd& W, const Eigen::VectorXd& x) {
  if (W.rows() != code.q - 1)
    throw std::invalid_argument("quantize: W has " + std::to_string(W.rows()) +
                                " rows, expected q-1 = " + std::to_string(code.q - 1));
  if (W.cols() != x.size())
    throw std::invalid_argument("quantize: W has " + std::to_string(W.cols()) +
                                " columns but x has length " + std::to_string(x.size()));
  const Eigen::VectorXd scores = code.vectors * (W * x);
  return argmax_symbol(code, scores);
}

MeasurementVector sense(const SensingEnsemble& ensemble, const SimplexCode& code,
                        const Eigen::VectorXd& x, const NoiseSpec& noise) {
  noise.validate();
  if (code.q != ensemble.q) throw std::invalid_argument("sense: code/ensemble alphabet mismatch");
  if (x.size() != ensemble.d)
    throw std::invalid_argument("sense: x has length " + std::to_string(x.size()) +
                                ", ensemble expects d = " + std::to_string(ensemble.d));
  if (x.norm() > 1.0 + 1e-9)
    throw std::domain_error("sense: ||x||_2 = " + std::to_string(x.norm()) +
                            " exceeds the unit ball");

  const int rows = ensemble.q - 1;
  MeasurementVector y;
  y.q = ensemble.q;
  y.m = ensemble.m;
  y.noise = noise;
  y.symbols.resize(ensemble.m);

  Eigen::VectorXd z(rows);
  Eigen::VectorXd scores(ensemble.q);
  for (int i = 0; i < ensemble.m; ++i) {
    // z = W_i x, streamed row-major so no matrix is stored.
    Rng wrng = matrix_stream(ensemble, i);
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (int c = 0; c < ensemble.d; ++c) acc += wrng.gaussian() * x(c);
      z(r) = acc;
    }
    scores.noalias() = code.vectors * z;

    if (noise.kind == NoiseSpec::Kind::PreQuantGaussian) {
      Rng nrng(mix_key(ensemble.master_seed, {kScoreNoiseTag, static_cast<uint64_t>(i)}));
      for (int j = 0; j < ensemble.q; ++j) scores(j) += noise.sigma * nrng.gaussian();
    }

    int symbol = argmax_symbol(code, scores);

    if (noise.kind == NoiseSpec::Kind::SymbolFlip) {
      Rng frng(mix_key(noise.flip_seed, {kFlipTag, static_cast<uint64_t>(i)}));
      if (frng.uniform() >= noise.p)
        symbol = static_cast<int>(frng.below(static_cast<uint64_t>(ensemble.q)));
    }
    y.symbols[i] = symbol;
  }
  return y;
}

double hamming_distance(const MeasurementVector& u, const MeasurementVector& v) {
  if (u.m != v.m || u.q != v.q)
    throw std::invalid_argument("hamming_distance: shape mismatch (m or q differ)");
  if (u.m == 0) return 0.0;
  int diff = 0;
  for (int i = 0; i < u.m; ++i) diff += (u.symbols[i] != v.symbols[i]) ? 1 : 0;
  return static_cast<double>(diff) / u.m;
}

void write_measurements(std::ostream& out, const MeasurementVector& y) {
  out << "q=" << y.q << " m=" << y.m << " noise=" << y.noise.to_string() << "\n";
  for (int i = 0; i < y.m; ++i) {
    if (i) out << ' ';
    out << y.symbols[i];
  }
  out << "\n";
}

MeasurementVector read_measurements(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("read_measurements: missing header");
  std::istringstream hs(header);
  std::string tok;
  MeasurementVector y;
  bool have_q = false, have_m = false, have_noise = false;
  while (hs >> tok) {
    if (tok.rfind("q=", 0) == 0) {
      y.q = static_cast<int>(parse_long(tok.substr(2)));
      have_q = true;
    } else if (tok.rfind("m=", 0) == 0) {
      y.m = static_cast<int>(parse_long(tok.substr(2)));
      have_m = true;
    } else if (tok.rfind("noise=", 0) == 0) {
      y.noise = NoiseSpec::parse(tok.substr(6));
      have_noise = true;
    } else {
      throw std::runtime_error("read_measurements: unexpected header token '" + tok + "'");
    }
  }
  if (!have_q || !have_m || !have_noise)
    throw std::runtime_error("read_measurements: incomplete header '" + header + "'");
  if (y.q < 2 || y.m < 0) throw std::runtime_error("read_measurements: bad q or m");

  y.symbols.resize(y.m);
  for (int i = 0; i < y.m; ++i) {
    if (!(in >> y.symbols[i])) throw std::runtime_error("read_measurements: truncated symbol list");
    if (y.symbols[i] < 0 || y.symbols[i] >= y.q)
      throw std::runtime_error("read_measurements: symbol out of range");
  }
  return y;
}

}  // namespace qcs
