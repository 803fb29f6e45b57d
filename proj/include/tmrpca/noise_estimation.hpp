#pragma once

// Per-flow Gaussian noise scale from finest-scale wavelet detail
// coefficients (median absolute deviation / 0.6745).

#include "tmrpca/traffic_matrix.hpp"

#include <span>
#include <vector>

namespace tmrpca {

enum class WaveletFamily { daubechies5 };
enum class BoundaryMode { periodic };

struct WaveletConfig {
  WaveletFamily family = WaveletFamily::daubechies5;
  BoundaryMode boundary = BoundaryMode::periodic;
};

/// Analysis low-pass taps h_k of the configured family.
std::span<const double> lowpass_filter(WaveletFamily family);

/// High-pass taps g_k = (-1)^k h_{L-1-k}.
std::vector<double> highpass_filter(WaveletFamily family);

/// One level of the DWT high-pass branch with downsampling by two:
///   d[n] = sum_k g[k] x[(2n + L/2 - k) mod t],  n = 0 .. t/2 - 1.
/// Odd-length input drops its final sample. Throws when t < filter length.
std::vector<double> finest_detail_coefficients(std::span<const double> x,
                                               const WaveletConfig& cfg = {});

/// Median; even lengths average the two central order statistics.
double median(std::vector<double> values);

/// median(|w - median(w)|) / 0.6745
double mad_sigma(std::span<const double> coefficients);

double estimate_sigma(std::span<const double> x, const WaveletConfig& cfg = {});

/// estimate_sigma applied to every column.
Vector estimate_column_sigmas(const Matrix& x, const WaveletConfig& cfg = {});

}  // namespace tmrpca
