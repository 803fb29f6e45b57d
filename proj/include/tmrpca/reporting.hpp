#pragma once

// Summary metrics of a decomposition, the noise-scale vs. mean-volume
// study, and their JSON / TSV serialisations.

#include "tmrpca/pca_eigenflow.hpp"
#include "tmrpca/traffic_matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tmrpca {

/// Singular values above max(t, p) * machine epsilon * sigma_max.
int numerical_rank(const Matrix& m);

struct DecompositionReport {
  std::string name;
  int rank_A = 0;
  int rank_X = 0;
  double rank_ratio = 0.0;
  long long l0_E = 0;
  long long cells = 0;
  double sparsity_ratio = 0.0;
  double noise_energy_ratio = 0.0;  // ||N||_F / ||X||_F
  int iterations = 0;
  double elapsed_seconds = 0.0;

  bool operator==(const DecompositionReport&) const = default;
};

/// rank_A is taken from the solver (`d.rank_A`); l0_E counts exact nonzeros.
DecompositionReport decomposition_report(const std::string& name, const Matrix& x, const Decomposition& d);

struct PowerLawBounds {
  double b1 = 4.0;
  double c1 = 0.6;
  double b2 = 4.0;
  double c2 = 0.9;

  static PowerLawBounds abilene() { return {4.0, 0.6, 4.0, 0.9}; }
  static PowerLawBounds geant() { return {4.0, 0.5, 4.0, 0.9}; }
  bool operator==(const PowerLawBounds&) const = default;
};

struct NoisePoint {
  double mean_volume = 0.0;
  double noise_std = 0.0;
  bool operator==(const NoisePoint&) const = default;
};

struct NoiseCorrelationReport {
  std::vector<NoisePoint> points;  // one per OD column
  PowerLawBounds bounds;
  std::optional<double> fraction_within_bounds;  // over usable points
  std::optional<double> log_log_correlation;     // Pearson r of (ln m, ln std)
  int excluded = 0;  // points with zero mean or zero noise std

  bool operator==(const NoiseCorrelationReport&) const = default;
};

NoiseCorrelationReport noise_correlation(const Matrix& x, const Matrix& noise,
                                         const PowerLawBounds& bounds = PowerLawBounds::abilene());

nlohmann::json to_json(const DecompositionReport& r);
DecompositionReport decomposition_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NoiseCorrelationReport& r);
NoiseCorrelationReport noise_correlation_from_json(const nlohmann::json& j);

/// Per-eigenflow records plus the summary counts.
nlohmann::json to_json(const ClassificationResult& c, const SvdResult& svd);

/// Two-column TSV: "mean_volume\tnoise_std".
void write_noise_scatter_tsv(std::ostream& out, const NoiseCorrelationReport& r);
/// Two-column TSV: "period_hours\tpower" for one eigenflow.
void write_power_spectrum_tsv(std::ostream& out, std::span<const double> u, const PeriodSet& periods,
                              double interval_minutes);
/// Two-column TSV: "interval\tvalue".
void write_series_tsv(std::ostream& out, std::span<const double> u);

// Decomposition directory: A.csv, E.csv, N.csv (input header) + meta.json.
void write_decomposition(const std::filesystem::path& dir, const std::vector<std::string>& labels,
                         const Decomposition& d);

struct LoadedDecomposition {
  std::vector<std::string> labels;
  Decomposition decomposition;
  Matrix X;  // A + E + N
};

LoadedDecomposition read_decomposition(const std::filesystem::path& dir);

struct SyntheticGroundTruth;
struct SynthSpec;
nlohmann::json to_json(const SynthSpec& spec);
// Synthetic directory: X.csv, A_true.csv, E_true.csv, N_true.csv + spec.json.
void write_synthetic(const std::filesystem::path& dir, const SyntheticGroundTruth& gt);

}  // namespace tmrpca
