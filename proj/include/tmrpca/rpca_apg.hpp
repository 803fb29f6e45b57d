#pragma once

// Relaxed Principal Component Pursuit by Accelerated Proximal Gradient.
//
// Minimises   mu ||A||_* + mu lambda ||E||_1 + 1/2 ||X - A - E||_F^2
// over a column-whitened traffic matrix X, alternating a momentum step, a
// gradient step of size 1/2 and the two proximal maps (singular value
// thresholding for A, entrywise soft thresholding for E).

#include "tmrpca/noise_estimation.hpp"
#include "tmrpca/traffic_matrix.hpp"

#include <optional>

namespace tmrpca {

struct ApgParams {
  std::optional<double> lambda;  // default 1 / sqrt(max(t, p))
  std::optional<double> mu;      // default sqrt(2 ln(tp) max(t, p)), noise scale 1
  double tolerance = 1e-6;
  int max_iterations = 5000;

  void validate() const;
};

/// Entrywise shrinkage towards zero by eps (proximal map of eps * ||.||_1).
Matrix soft_threshold(const Matrix& m, double eps);

struct SvtResult {
  Matrix value;
  int rank = 0;               // singular values that survive the shrinkage
  double nuclear_norm = 0.0;  // of `value`
};

/// Proximal map of eps * ||.||_*: shrink every singular value by eps.
SvtResult singular_value_threshold(const Matrix& m, double eps);

double compute_lambda(long long t, long long p);
double compute_mu(long long t, long long p, double sigma);

/// mu ||A||_* + mu lambda ||E||_1 + 1/2 ||X - A - E||_F^2
double apg_objective(const Matrix& x, const Matrix& a, const Matrix& e, double lambda, double mu);

struct ApgSolution {
  Matrix A;
  Matrix E;
  int iterations = 0;
  int rank_A = 0;
  bool converged = false;
  double final_stopping_quantity = 0.0;
  std::vector<double> objective_trace;
  std::vector<double> stopping_trace;
};

/// Runs the APG iteration on an already whitened matrix.
ApgSolution apg_solve(const Matrix& x, double lambda, double mu, double tolerance,
                      int max_iterations);

/// Full pipeline: estimate sigma_j per column, whiten, solve, un-whiten,
/// N = X - A - E. A non-converged run is returned with converged = false.
/// Throws when any column's noise estimate is zero (e.g. constant columns).
Decomposition apg_decompose(const TrafficMatrix& x, const ApgParams& params = {},
                            const WaveletConfig& cfg = {});

}  // namespace tmrpca
