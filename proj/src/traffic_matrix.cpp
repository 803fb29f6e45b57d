#include "tmrpca/traffic_matrix.hpp"

#include <cmath>
#include <sstream>

namespace tmrpca {

TrafficMatrix::TrafficMatrix(Matrix values, double interval_minutes,
                             std::vector<std::string> od_labels,
                             std::string origin_label)
    : values_(std::move(values)),
      interval_minutes_(interval_minutes),
      od_labels_(std::move(od_labels)),
      origin_label_(std::move(origin_label)) {
  if (values_.rows() < 2 || values_.cols() < 1) {
    std::ostringstream msg;
    msg << "traffic matrix needs at least 2 rows and 1 column, got "
        << values_.rows() << "x" << values_.cols();
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  if (!(interval_minutes_ > 0.0) || !std::isfinite(interval_minutes_))
    throw Error(ErrorCode::invalid_argument, "interval length must be a positive number of minutes");
  if (static_cast<Eigen::Index>(od_labels_.size()) != values_.cols()) {
    std::ostringstream msg;
    msg << "expected " << values_.cols() << " OD labels, got " << od_labels_.size();
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << "entry (" << i << ", " << j << ") = " << v << " is not a finite nonnegative number";
        throw Error(ErrorCode::invalid_argument, msg.str());
      }
    }
  }
}

Matrix center_columns(const Matrix& x) {
  Matrix out = x;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double mean = out.col(j).mean();
    out.col(j).array() -= mean;
  }
  return out;
}

Matrix center_columns(const TrafficMatrix& x) { return center_columns(x.values()); }

std::pair<std::string, std::string> split_od_label(const std::string& label,
                                                   const std::string& delimiter) {
  if (delimiter.empty()) return {label, {}};
  const auto pos = label.find(delimiter);
  if (pos == std::string::npos) return {label, {}};
  return {label.substr(0, pos), label.substr(pos + delimiter.size())};
}

TrafficMatrix preprocess_filter(const TrafficMatrix& x, const FilterOptions& opts) {
  if (!(opts.zero_fraction_limit >= 0.0 && opts.zero_fraction_limit <= 1.0))
    throw Error(ErrorCode::invalid_argument, "zero fraction limit must lie in [0, 1]");

  const Matrix& v = x.values();
  const auto t = static_cast<double>(v.rows());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double zeros = static_cast<double>((v.col(j).array() == 0.0).count());
    if (zeros / t > opts.zero_fraction_limit) continue;
    if (opts.excluded_pop) {
      const auto [src, dst] = split_od_label(x.od_labels()[j], opts.label_delimiter);
      if (src == *opts.excluded_pop || dst == *opts.excluded_pop) continue;
    }
    keep.push_back(j);
  }
  if (keep.empty())
    throw Error(ErrorCode::invalid_argument, "every column was removed by the preprocessing filter");

  Matrix out(v.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> labels;
  labels.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = v.col(keep[k]);
    labels.push_back(x.od_labels()[keep[k]]);
  }
  return TrafficMatrix(std::move(out), x.interval_minutes(), std::move(labels), x.origin_label());
}

Matrix scale_columns(const Matrix& x, const Vector& sigmas, ScaleDirection direction) {
  if (sigmas.size() != x.cols())
    throw Error(ErrorCode::invalid_argument, "one scale per column is required");
  for (Eigen::Index j = 0; j < sigmas.size(); ++j) {
    if (!(sigmas[j] > 0.0) || !std::isfinite(sigmas[j])) {
      std::ostringstream msg;
      msg << "column scale " << j << " = " << sigmas[j] << " must be positive";
      throw Error(ErrorCode::invalid_argument, msg.str());
    }
  }
  if (direction == ScaleDirection::divide)
    return x * sigmas.cwiseInverse().asDiagonal();
  return x * sigmas.asDiagonal();
}

}  // namespace tmrpca
