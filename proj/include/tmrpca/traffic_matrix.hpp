#pragma once

// Traffic-matrix data model shared by every analysis stage.
//
// A traffic matrix holds t time intervals (rows) by p origin-destination
// flows (columns) of nonnegative byte counts. Matrices are stored as
// column-major Eigen matrices so each OD-flow time series is contiguous.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmrpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  invalid_argument,
  parse,
  io,
  numeric,
};

/// Library error; `code()` is what the C API maps onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class TrafficMatrix {
 public:
  /// Validates: t >= 2, p >= 1, every entry finite and >= 0,
  /// interval_minutes > 0 and one label per column.
  TrafficMatrix(Matrix values, double interval_minutes,
                std::vector<std::string> od_labels,
                std::string origin_label = {});

  const Matrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }
  double interval_minutes() const noexcept { return interval_minutes_; }
  const std::vector<std::string>& od_labels() const noexcept { return od_labels_; }
  const std::string& origin_label() const noexcept { return origin_label_; }

 private:
  Matrix values_;
  double interval_minutes_;
  std::vector<std::string> od_labels_;
  std::string origin_label_;
};

/// X = A + E + N together with the solver bookkeeping that produced it.
struct Decomposition {
  Matrix A;  // deterministic (low rank)
  Matrix E;  // anomaly (sparse)
  Matrix N;  // noise, always X - A - E
  double lambda = 0.0;
  double mu = 0.0;
  Vector sigmas;  // per-column noise scales used to whiten X
  int iterations = 0;
  std::vector<double> objective_trace;  // one entry per iteration
  std::vector<double> stopping_trace;   // stopping quantity per iteration
  double elapsed_seconds = 0.0;
  bool converged = false;
  int rank_A = 0;  // SVT survivor count of the final iterate
};

Matrix center_columns(const Matrix& x);
Matrix center_columns(const TrafficMatrix& x);

struct FilterOptions {
  double zero_fraction_limit = 0.5;
  std::optional<std::string> excluded_pop;
  std::string label_delimiter = "→";  // "SRC→DST"
};

/// Drops unstable columns: those with a zero fraction above the limit, and
/// (optionally) those whose source or destination PoP is excluded.
/// Throws if nothing survives.
TrafficMatrix preprocess_filter(const TrafficMatrix& x, const FilterOptions& opts = {});

/// Splits an OD label into (source, destination). A label without the
/// delimiter yields the whole label as source and an empty destination.
std::pair<std::string, std::string> split_od_label(const std::string& label,
                                                   const std::string& delimiter);

enum class ScaleDirection { divide, multiply };

Matrix scale_columns(const Matrix& x, const Vector& sigmas, ScaleDirection direction);

}  // namespace tmrpca
