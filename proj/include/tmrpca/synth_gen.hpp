#pragma once

// Synthetic traffic matrices with known (A, E, N): a rank-r diurnal part,
// sparse block anomalies and per-column Gaussian noise.

#include "tmrpca/traffic_matrix.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tmrpca {

struct SynthSpec {
  int rows = 672;
  int cols = 50;
  int rank = 5;
  double interval_minutes = 15.0;
  double density = 0.05;       // target fraction of anomalous cells
  double magnitude_min = 50.0;  // anomaly block height, absolute units
  double magnitude_max = 100.0;
  int duration_min = 1;  // anomaly block length in intervals
  int duration_max = 12;
  std::vector<double> noise_sigmas = {1.0};  // one value, or one per column
  double amplitude = 100.0;                  // scale of the factor magnitudes
  std::optional<double> baseline;            // min offset per column; default 6 max(sigma)
  bool allow_dips = false;
  std::uint64_t seed = 42;

  void validate() const;
  double sigma(int column) const;
};

struct SyntheticGroundTruth {
  TrafficMatrix X;
  Matrix A_true;
  Matrix E_true;
  Matrix N_true;
  SynthSpec spec;
};

/// A_true = sum_i g_i f_i^T where g_i is a rectified 24-hour sinusoid with
/// its own phase and f_i a nonnegative magnitude vector; the baseline is
/// folded into g_1 so rank(A_true) stays exactly r.
SyntheticGroundTruth generate(const SynthSpec& spec);

/// "P<a>→P<b>" labels over ceil(sqrt(p)) points of presence.
std::vector<std::string> synthetic_od_labels(int cols);

}  // namespace tmrpca
