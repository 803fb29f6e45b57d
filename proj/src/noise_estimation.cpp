#include "tmrpca/noise_estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace tmrpca {
namespace {

// Daubechies-5 orthogonal scaling filter (10 taps, 5 vanishing moments).
constexpr std::array<double, 10> kDb5Lowpass = {
    0.0033357252854737712, -0.012580751999081999, -0.006241490212798274,
    0.07757149384004572,   -0.032244869584638375, -0.24229488706638203,
    0.13842814590132074,   0.7243085284377729,    0.6038292697971896,
    0.16010239797419293,
};

constexpr double kMadToSigma = 0.6745;

}  // namespace

std::span<const double> lowpass_filter(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::daubechies5: return kDb5Lowpass;
  }
  throw Error(ErrorCode::invalid_argument, "unknown wavelet family");
}

std::vector<double> highpass_filter(WaveletFamily family) {
  const auto h = lowpass_filter(family);
  const std::size_t len = h.size();
  std::vector<double> g(len);
  for (std::size_t k = 0; k < len; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[len - 1 - k];
  return g;
}

std::vector<double> finest_detail_coefficients(std::span<const double> x, const WaveletConfig& cfg) {
  const auto g = highpass_filter(cfg.family);
  const std::size_t len = g.size();
  const std::size_t t = x.size() - (x.size() % 2);
  if (x.size() < len) {
    std::ostringstream msg;
    msg << "series of length " << x.size() << " is shorter than the " << len << "-tap wavelet filter";
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  const auto tt = static_cast<std::ptrdiff_t>(t);
  const auto shift = static_cast<std::ptrdiff_t>(len / 2);
  std::vector<double> d(t / 2, 0.0);
  for (std::size_t n = 0; n < t / 2; ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      auto idx = (2 * static_cast<std::ptrdiff_t>(n) + shift - static_cast<std::ptrdiff_t>(k)) % tt;
      if (idx < 0) idx += tt;
      acc += g[k] * x[static_cast<std::size_t>(idx)];
    }
    d[n] = acc;
  }
  return d;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mad_sigma(std::span<const double> coefficients) {
  std::vector<double> w(coefficients.begin(), coefficients.end());
  const double center = median(w);
  for (double& v : w) v = std::abs(v - center);
  return median(std::move(w)) / kMadToSigma;
}

double estimate_sigma(std::span<const double> x, const WaveletConfig& cfg) {
  const auto d = finest_detail_coefficients(x, cfg);
  return mad_sigma(d);
}

Vector estimate_column_sigmas(const Matrix& x, const WaveletConfig& cfg) {
  Vector sigmas(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    sigmas[j] = estimate_sigma(std::span<const double>(x.col(j).data(), static_cast<std::size_t>(x.rows())), cfg);
  return sigmas;
}

}  // namespace tmrpca
