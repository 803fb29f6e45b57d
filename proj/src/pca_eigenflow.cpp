#include "tmrpca/pca_eigenflow.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace tmrpca {
namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;  // divisor n - 1
};

Moments sample_moments(std::span<const double> u) {
  Moments m;
  if (u.empty()) return m;
  double sum = 0.0;
  for (double v : u) sum += v;
  m.mean = sum / static_cast<double>(u.size());
  if (u.size() < 2) return m;
  double ss = 0.0;
  for (double v : u) ss += (v - m.mean) * (v - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(u.size() - 1));
  return m;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

SvdResult pca(const Matrix& x) {
  if (!x.allFinite()) throw Error(ErrorCode::numeric, "PCA input contains non-finite entries");
  if (x.rows() == 0 || x.cols() == 0) throw Error(ErrorCode::invalid_argument, "PCA input is empty");

  Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out;
  out.singular_values = svd.singularValues();
  out.left_vectors = svd.matrixU();
  out.right_vectors = svd.matrixV();

  for (Eigen::Index i = 0; i < out.right_vectors.cols(); ++i) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < out.right_vectors.rows(); ++r) {
      const double a = std::abs(out.right_vectors(r, i));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (out.right_vectors(arg, i) < 0.0) {
      out.right_vectors.col(i) *= -1.0;
      out.left_vectors.col(i) *= -1.0;
    }
  }
  out.eigenvalues = out.singular_values.array().square();
  return out;
}

const char* to_string(EigenflowLabel label) {
  switch (label) {
    case EigenflowLabel::d: return "d";
    case EigenflowLabel::s: return "s";
    case EigenflowLabel::n: return "n";
    case EigenflowLabel::indeterminate: return "indeterminate";
    case EigenflowLabel::non_determinate: return "non_determinate";
  }
  return "?";
}

EigenflowLabel label_from_flags(bool d, bool s, bool n) {
  const int hits = int(d) + int(s) + int(n);
  if (hits == 0) return EigenflowLabel::non_determinate;
  if (hits > 1) return EigenflowLabel::indeterminate;
  if (d) return EigenflowLabel::d;
  if (s) return EigenflowLabel::s;
  return EigenflowLabel::n;
}

PeriodSet PeriodSet::standard() {
  PeriodSet ps;
  for (int k = 1; k <= 10; ++k) ps.hours.push_back(k);
  for (int k = 6; k <= 25; ++k) ps.hours.push_back(2 * k);
  ps.target_periods = {12.0, 24.0};
  return ps;
}

void PeriodSet::validate() const {
  if (hours.empty()) throw Error(ErrorCode::invalid_argument, "period set is empty");
  for (double h : hours)
    if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "periods must be positive");
  for (double target : target_periods)
    if (std::find(hours.begin(), hours.end(), target) == hours.end())
      throw Error(ErrorCode::invalid_argument, "target period is not a member of the period set");
}

double fourier_power(std::span<const double> u, double hours, double interval_minutes) {
  const double period = 60.0 * hours / interval_minutes;  // in samples
  const double omega = 2.0 * std::numbers::pi / period;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double phase = omega * static_cast<double>(k);
    re += u[k] * std::cos(phase);
    im -= u[k] * std::sin(phase);
  }
  return (re * re + im * im) / static_cast<double>(u.size());
}

bool classify_d(std::span<const double> u, const PeriodSet& periods, double interval_minutes) {
  std::vector<double> power;
  power.reserve(periods.hours.size());
  for (double h : periods.hours) power.push_back(fourier_power(u, h, interval_minutes));
  const double peak = *std::max_element(power.begin(), power.end());
  for (std::size_t i = 0; i < power.size(); ++i) {
    if (peak - power[i] > 1e-12 * std::abs(peak)) continue;  // not in the argmax set
    if (std::find(periods.target_periods.begin(), periods.target_periods.end(), periods.hours[i]) !=
        periods.target_periods.end())
      return true;
  }
  return false;
}

bool classify_s(std::span<const double> u) {
  const auto m = sample_moments(u);
  const double half_width = 5.0 * m.sd;
  for (double v : u)
    if (std::abs(v - m.mean) > half_width) return true;
  return false;
}

double ks_statistic_normal(std::span<const double> u) {
  const auto m = sample_moments(u);
  if (!(m.sd > 0.0)) throw Error(ErrorCode::numeric, "K-S test on a sample with zero standard deviation");
  std::vector<double> z(u.begin(), u.end());
  for (double& v : z) v = (v - m.mean) / m.sd;
  std::sort(z.begin(), z.end());
  const auto n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = standard_normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::invalid_argument, "significance level must lie in (0, 1)");
  if (alpha == 0.05) return kKsCritical05;
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

bool classify_n(std::span<const double> u, double critical_constant) {
  const double d = ks_statistic_normal(u);
  return d < critical_constant / std::sqrt(static_cast<double>(u.size()));
}

ClassificationCounts ClassificationResult::counts() const {
  ClassificationCounts c;
  for (const auto& e : eigenflows) {
    c.satisfy_d += e.satisfies_d;
    c.satisfy_s += e.satisfies_s;
    c.satisfy_n += e.satisfies_n;
    switch (e.label) {
      case EigenflowLabel::indeterminate: ++c.indeterminate; break;
      case EigenflowLabel::non_determinate: ++c.non_determinate; break;
      default: ++c.classified; break;
    }
  }
  return c;
}

ClassificationResult classify_all(const SvdResult& svd, const PeriodSet& periods,
                                  double interval_minutes, double alpha) {
  periods.validate();
  const double critical = ks_critical_constant(alpha);
  ClassificationResult result;
  const Eigen::Index k = svd.left_vectors.cols();
  const Eigen::Index t = svd.left_vectors.rows();
  result.eigenflows.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    std::span<const double> u(svd.left_vectors.col(i).data(), static_cast<std::size_t>(t));
    EigenflowClassification e;
    e.index = static_cast<int>(i + 1);
    e.sigma_value = svd.singular_values[i];
    e.satisfies_d = classify_d(u, periods, interval_minutes);
    e.satisfies_s = classify_s(u);
    try {
      e.satisfies_n = classify_n(u, critical);
    } catch (const Error& err) {
      std::ostringstream msg;
      msg << "eigenflow " << e.index << ": " << err.what() << "; n-criterion set to false";
      result.warnings.push_back(msg.str());
      e.satisfies_n = false;
    }
    e.label = label_from_flags(e.satisfies_d, e.satisfies_s, e.satisfies_n);
    result.eigenflows.push_back(e);
  }
  return result;
}

double unclassified_energy_rate(const SvdResult& svd,
                                const std::vector<EigenflowClassification>& classes) {
  if (static_cast<Eigen::Index>(classes.size()) != svd.eigenvalues.size())
    throw Error(ErrorCode::invalid_argument, "one classification per eigenflow is required");
  const double total = svd.eigenvalues.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::numeric, "all eigenvalues are zero");
  double unclassified = 0.0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto label = classes[i].label;
    if (label == EigenflowLabel::indeterminate || label == EigenflowLabel::non_determinate)
      unclassified += svd.eigenvalues[static_cast<Eigen::Index>(i)];
  }
  return unclassified / total;
}

Matrix rank_r_approximation(const SvdResult& svd, int r) {
  if (r < 1 || r > svd.singular_values.size()) {
    std::ostringstream msg;
    msg << "rank " << r << " outside [1, " << svd.singular_values.size() << "]";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  return svd.left_vectors.leftCols(r) * svd.singular_values.head(r).asDiagonal() *
         svd.right_vectors.leftCols(r).transpose();
}

}  // namespace tmrpca
