#include "tmrpca/synth_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tmrpca {

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, what); };
  if (rows < 2 || cols < 1) fail("synthetic matrix needs at least 2 rows and 1 column");
  if (rank < 1) fail("rank must be at least 1");
  if (rank > std::min(rows, cols)) fail("rank exceeds min(rows, cols)");
  if (!(interval_minutes > 0.0)) fail("interval length must be positive");
  if (!(density >= 0.0 && density < 1.0)) fail("anomaly density must lie in [0, 1)");
  if (!(magnitude_min >= 0.0 && magnitude_max >= magnitude_min)) fail("invalid anomaly magnitude range");
  if (duration_min < 1 || duration_max < duration_min) fail("invalid anomaly duration range");
  if (duration_max > rows) fail("anomaly duration exceeds the number of rows");
  if (noise_sigmas.size() != 1 && noise_sigmas.size() != static_cast<std::size_t>(cols))
    fail("noise_sigmas must hold one value or one per column");
  for (double s : noise_sigmas)
    if (!(s >= 0.0) || !std::isfinite(s)) fail("noise scales must be finite and nonnegative");
  if (!(amplitude > 0.0)) fail("amplitude must be positive");
  if (baseline && !(*baseline >= 0.0)) fail("baseline must be nonnegative");
}

double SynthSpec::sigma(int column) const {
  return noise_sigmas.size() == 1 ? noise_sigmas.front() : noise_sigmas[static_cast<std::size_t>(column)];
}

std::vector<std::string> synthetic_od_labels(int cols) {
  const int pops = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(cols))));
  const int width = pops >= 10 ? 2 : 1;
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(cols));
  auto name = [width](int k) {
    std::string digits = std::to_string(k + 1);
    return "P" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0') + digits;
  };
  for (int j = 0; j < cols; ++j) labels.push_back(name(j / pops) + "→" + name(j % pops));
  return labels;
}

SyntheticGroundTruth generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int t = spec.rows;
  const int p = spec.cols;
  double max_sigma = 0.0;
  for (int j = 0; j < p; ++j) max_sigma = std::max(max_sigma, spec.sigma(j));
  const double baseline =
      spec.baseline.value_or(6.0 * max_sigma + (spec.allow_dips ? spec.magnitude_max : 0.0));
  const double guaranteed = baseline - (spec.allow_dips ? spec.magnitude_max : 0.0);
  if (guaranteed < 6.0 * max_sigma) {
    std::ostringstream msg;
    msg << "baseline " << baseline << " cannot keep X >= 0 at 6 sigma (needs "
        << 6.0 * max_sigma + (spec.allow_dips ? spec.magnitude_max : 0.0) << ")";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }

  // Low-rank diurnal part.
  Matrix profiles(t, spec.rank);
  Matrix magnitudes(p, spec.rank);
  const double omega = 2.0 * std::numbers::pi * spec.interval_minutes / (60.0 * 24.0);
  for (int i = 0; i < spec.rank; ++i) {
    const double phase = 2.0 * std::numbers::pi * (i + 0.5 * (unit(rng) - 0.5)) / spec.rank;
    for (int k = 0; k < t; ++k) profiles(k, i) = std::max(0.0, std::sin(omega * k + phase));
    for (int j = 0; j < p; ++j) magnitudes(j, i) = spec.amplitude * (0.2 + 0.8 * unit(rng));
  }
  profiles.col(0).array() += baseline / magnitudes.col(0).minCoeff();
  Matrix a_true = profiles * magnitudes.transpose();

  // Sparse block anomalies.
  Matrix e_true = Matrix::Zero(t, p);
  const auto target = static_cast<long long>(std::llround(spec.density * t * p));
  long long covered = 0;
  std::uniform_int_distribution<int> pick_col(0, p - 1);
  std::uniform_int_distribution<int> pick_len(spec.duration_min, spec.duration_max);
  std::uniform_real_distribution<double> pick_mag(spec.magnitude_min, spec.magnitude_max);
  while (covered < target) {
    const int col = pick_col(rng);
    const int len = pick_len(rng);
    const int start = std::uniform_int_distribution<int>(0, t - len)(rng);
    double height = pick_mag(rng);
    if (spec.allow_dips && unit(rng) < 0.5) height = -height;
    for (int k = start; k < start + len; ++k) {
      if (e_true(k, col) == 0.0 && height != 0.0) ++covered;
      e_true(k, col) += height;
    }
  }

  for (int j = 0; j < p; ++j) {
    const double floor = (a_true.col(j) + e_true.col(j).cwiseMin(0.0)).minCoeff();
    // overlapping dips can still undercut the guarantee
    if (floor < 6.0 * spec.sigma(j) * (1.0 - 1e-9)) {
      std::ostringstream msg;
      msg << "baseline too small: column " << j << " dips to " << floor << " but 6 sigma = "
          << 6.0 * spec.sigma(j);
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
  }

  // Gaussian noise; a draw beyond the 6 sigma guarantee is truncated so X stays >= 0.
  Matrix n_true = Matrix::Zero(t, p);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < p; ++j) {
    const double s = spec.sigma(j);
    for (int k = 0; k < t; ++k) {
      const double draw = gauss(rng) * s;
      n_true(k, j) = std::max(draw, -(a_true(k, j) + e_true(k, j)));
    }
  }

  Matrix x = (a_true + e_true) + n_true;
  TrafficMatrix tm(std::move(x), spec.interval_minutes, synthetic_od_labels(p), "synthetic");
  return SyntheticGroundTruth{std::move(tm), std::move(a_true), std::move(e_true), std::move(n_true), spec};
}

}  // namespace tmrpca
