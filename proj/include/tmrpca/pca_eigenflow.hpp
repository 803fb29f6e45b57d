#pragma once

// Classical PCA baseline: eigenflows of a column-centred traffic matrix and
// the periodic / spike / Gaussian classification of each eigenflow.

#include "tmrpca/traffic_matrix.hpp"

#include <span>
#include <string>
#include <vector>

namespace tmrpca {

struct SvdResult {
  Vector singular_values;  // descending, >= 0
  Matrix left_vectors;     // t x k, the eigenflows u_i
  Matrix right_vectors;    // p x k, principal component vectors v_i
  Vector eigenvalues;      // sigma_i^2
};

/// Thin SVD of a centred matrix, k = min(t, p) components. Each v_i is
/// flipped so its largest-magnitude entry (lowest index on ties) is positive.
SvdResult pca(const Matrix& x_centered);

enum class EigenflowLabel { d, s, n, indeterminate, non_determinate };

const char* to_string(EigenflowLabel label);

struct EigenflowClassification {
  int index = 0;  // 1-based, in singular-value order
  bool satisfies_d = false;
  bool satisfies_s = false;
  bool satisfies_n = false;
  EigenflowLabel label = EigenflowLabel::non_determinate;
  double sigma_value = 0.0;
};

EigenflowLabel label_from_flags(bool d, bool s, bool n);

struct PeriodSet {
  std::vector<double> hours;           // the candidate periods H
  std::vector<double> target_periods;  // periods that mark a d-eigenflow

  /// H = {1..10} U {12, 14, ..., 50}, targets {12, 24}.
  static PeriodSet standard();
  void validate() const;
};

/// |sum_k u[k] exp(-i w k)|^2 / t with w = 2 pi t0 / (60 h).
double fourier_power(std::span<const double> u, double hours, double interval_minutes);

bool classify_d(std::span<const double> u, const PeriodSet& periods, double interval_minutes);

/// Any entry outside mean +/- 5 sample standard deviations.
bool classify_s(std::span<const double> u);

/// Kolmogorov-Smirnov statistic of the standardised sample against N(0, 1).
/// Throws when the sample standard deviation is zero.
double ks_statistic_normal(std::span<const double> u);

inline constexpr double kKsCritical05 = 1.358;

/// D < c / sqrt(t). `critical_constant` is c(alpha); only alpha = 0.05 has a
/// built-in constant, see ks_critical_constant.
bool classify_n(std::span<const double> u, double critical_constant = kKsCritical05);

/// Asymptotic c(alpha) = sqrt(-ln(alpha / 2) / 2); returns 1.358 for 0.05.
double ks_critical_constant(double alpha);

struct ClassificationCounts {
  int satisfy_d = 0;
  int satisfy_s = 0;
  int satisfy_n = 0;
  int non_determinate = 0;
  int indeterminate = 0;
  int classified = 0;
};

struct ClassificationResult {
  std::vector<EigenflowClassification> eigenflows;
  std::vector<std::string> warnings;
  ClassificationCounts counts() const;
};

ClassificationResult classify_all(const SvdResult& svd, const PeriodSet& periods,
                                  double interval_minutes, double alpha = 0.05);

/// Share of total eigenvalue energy carried by indeterminate and
/// non-determinate eigenflows.
double unclassified_energy_rate(const SvdResult& svd,
                                const std::vector<EigenflowClassification>& classes);

/// sum_{i<=r} sigma_i u_i v_i^T
Matrix rank_r_approximation(const SvdResult& svd, int r);

}  // namespace tmrpca
