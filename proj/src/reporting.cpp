#include "tmrpca/reporting.hpp"

#include "tmrpca/csv_io.hpp"
#include "tmrpca/synth_gen.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace tmrpca {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

double sample_std(const Eigen::Ref<const Vector>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  const Vector s = Eigen::BDCSVD<Matrix>(m).singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * s[0];
  return static_cast<int>((s.array() > tol).count());
}

DecompositionReport decomposition_report(const std::string& name, const Matrix& x, const Decomposition& d) {
  if (d.A.rows() != x.rows() || d.A.cols() != x.cols() || d.E.rows() != x.rows() ||
      d.E.cols() != x.cols() || d.N.rows() != x.rows() || d.N.cols() != x.cols())
    throw Error(ErrorCode::invalid_argument, "decomposition shape does not match the traffic matrix");
  DecompositionReport r;
  r.name = name;
  r.rank_A = d.rank_A;
  r.rank_X = numerical_rank(x);
  r.rank_ratio = r.rank_X > 0 ? static_cast<double>(r.rank_A) / r.rank_X : 0.0;
  r.l0_E = static_cast<long long>((d.E.array() != 0.0).count());
  r.cells = static_cast<long long>(x.size());
  r.sparsity_ratio = static_cast<double>(r.l0_E) / static_cast<double>(r.cells);
  const double x_norm = x.norm();
  r.noise_energy_ratio = x_norm > 0.0 ? d.N.norm() / x_norm : 0.0;
  r.iterations = d.iterations;
  r.elapsed_seconds = d.elapsed_seconds;
  return r;
}

NoiseCorrelationReport noise_correlation(const Matrix& x, const Matrix& noise, const PowerLawBounds& bounds) {
  if (x.rows() != noise.rows() || x.cols() != noise.cols())
    throw Error(ErrorCode::invalid_argument, "noise matrix shape does not match the traffic matrix");
  NoiseCorrelationReport r;
  r.bounds = bounds;
  std::vector<double> log_m;
  std::vector<double> log_s;
  int within = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    NoisePoint pt{x.col(j).mean(), sample_std(noise.col(j))};
    r.points.push_back(pt);
    if (!(pt.mean_volume > 0.0) || !(pt.noise_std > 0.0)) {
      ++r.excluded;
      continue;
    }
    const double lo = bounds.b1 * std::pow(pt.mean_volume, bounds.c1);
    const double hi = bounds.b2 * std::pow(pt.mean_volume, bounds.c2);
    if (lo <= pt.noise_std && pt.noise_std <= hi) ++within;
    log_m.push_back(std::log(pt.mean_volume));
    log_s.push_back(std::log(pt.noise_std));
  }
  const auto usable = log_m.size();
  if (usable > 0) r.fraction_within_bounds = static_cast<double>(within) / static_cast<double>(usable);
  if (usable >= 2) {
    const Eigen::Map<const Vector> lm(log_m.data(), static_cast<Eigen::Index>(usable));
    const Eigen::Map<const Vector> ls(log_s.data(), static_cast<Eigen::Index>(usable));
    const Vector dm = lm.array() - lm.mean();
    const Vector ds = ls.array() - ls.mean();
    const double denom = std::sqrt(dm.squaredNorm() * ds.squaredNorm());
    if (denom > 0.0) r.log_log_correlation = dm.dot(ds) / denom;
  }
  return r;
}

nlohmann::json to_json(const DecompositionReport& r) {
  return json{{"name", r.name},
              {"rank_A", r.rank_A},
              {"rank_X", r.rank_X},
              {"rank_ratio", r.rank_ratio},
              {"l0_E", r.l0_E},
              {"cells", r.cells},
              {"sparsity_ratio", r.sparsity_ratio},
              {"noise_energy_ratio", r.noise_energy_ratio},
              {"iterations", r.iterations},
              {"elapsed_seconds", r.elapsed_seconds}};
}

DecompositionReport decomposition_report_from_json(const nlohmann::json& j) {
  DecompositionReport r;
  j.at("name").get_to(r.name);
  j.at("rank_A").get_to(r.rank_A);
  j.at("rank_X").get_to(r.rank_X);
  j.at("rank_ratio").get_to(r.rank_ratio);
  j.at("l0_E").get_to(r.l0_E);
  j.at("cells").get_to(r.cells);
  j.at("sparsity_ratio").get_to(r.sparsity_ratio);
  j.at("noise_energy_ratio").get_to(r.noise_energy_ratio);
  j.at("iterations").get_to(r.iterations);
  j.at("elapsed_seconds").get_to(r.elapsed_seconds);
  return r;
}

nlohmann::json to_json(const NoiseCorrelationReport& r) {
  json points = json::array();
  for (const auto& p : r.points) points.push_back({{"mean_volume", p.mean_volume}, {"noise_std", p.noise_std}});
  return json{{"points", std::move(points)},
              {"bounds", {{"b1", r.bounds.b1}, {"c1", r.bounds.c1}, {"b2", r.bounds.b2}, {"c2", r.bounds.c2}}},
              {"fraction_within_bounds", optional_number(r.fraction_within_bounds)},
              {"log_log_correlation", optional_number(r.log_log_correlation)},
              {"excluded", r.excluded}};
}

NoiseCorrelationReport noise_correlation_from_json(const nlohmann::json& j) {
  NoiseCorrelationReport r;
  for (const auto& p : j.at("points"))
    r.points.push_back({p.at("mean_volume").get<double>(), p.at("noise_std").get<double>()});
  const auto& b = j.at("bounds");
  r.bounds = {b.at("b1").get<double>(), b.at("c1").get<double>(), b.at("b2").get<double>(),
              b.at("c2").get<double>()};
  r.fraction_within_bounds = read_optional(j, "fraction_within_bounds");
  r.log_log_correlation = read_optional(j, "log_log_correlation");
  j.at("excluded").get_to(r.excluded);
  return r;
}

nlohmann::json to_json(const ClassificationResult& c, const SvdResult& svd) {
  json records = json::array();
  for (const auto& e : c.eigenflows) {
    records.push_back({{"index", e.index},
                       {"satisfies_d", e.satisfies_d},
                       {"satisfies_s", e.satisfies_s},
                       {"satisfies_n", e.satisfies_n},
                       {"label", to_string(e.label)},
                       {"sigma_value", e.sigma_value}});
  }
  const auto counts = c.counts();
  json summary{{"satisfy_d", counts.satisfy_d},
               {"satisfy_s", counts.satisfy_s},
               {"satisfy_n", counts.satisfy_n},
               {"non_determinate", counts.non_determinate},
               {"indeterminate", counts.indeterminate},
               {"classified", counts.classified}};
  const double total = svd.eigenvalues.sum();
  summary["unclassified_energy_rate"] =
      total > 0.0 ? json(unclassified_energy_rate(svd, c.eigenflows)) : json(nullptr);
  return json{{"eigenflows", std::move(records)}, {"summary", std::move(summary)}, {"warnings", c.warnings}};
}

void write_noise_scatter_tsv(std::ostream& out, const NoiseCorrelationReport& r) {
  out << "mean_volume\tnoise_std\n";
  for (const auto& p : r.points) out << format_double(p.mean_volume) << '\t' << format_double(p.noise_std) << '\n';
}

void write_power_spectrum_tsv(std::ostream& out, std::span<const double> u, const PeriodSet& periods,
                              double interval_minutes) {
  out << "period_hours\tpower\n";
  for (double h : periods.hours)
    out << format_double(h) << '\t' << format_double(fourier_power(u, h, interval_minutes)) << '\n';
}

void write_series_tsv(std::ostream& out, std::span<const double> u) {
  out << "interval\tvalue\n";
  for (std::size_t k = 0; k < u.size(); ++k) out << (k + 1) << '\t' << format_double(u[k]) << '\n';
}

void write_decomposition(const std::filesystem::path& dir, const std::vector<std::string>& labels,
                         const Decomposition& d) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  write_matrix_csv(dir / "A.csv", labels, d.A);
  write_matrix_csv(dir / "E.csv", labels, d.E);
  write_matrix_csv(dir / "N.csv", labels, d.N);

  json meta{{"lambda", d.lambda},
            {"mu", d.mu},
            {"sigmas", std::vector<double>(d.sigmas.data(), d.sigmas.data() + d.sigmas.size())},
            {"iterations", d.iterations},
            {"elapsed_seconds", d.elapsed_seconds},
            {"converged", d.converged},
            {"rank_A", d.rank_A},
            {"l0_E", static_cast<long long>((d.E.array() != 0.0).count())},
            {"stopping_quantity", d.stopping_trace.empty() ? json(nullptr) : json(d.stopping_trace.back())}};
  std::ofstream out(dir / "meta.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

LoadedDecomposition read_decomposition(const std::filesystem::path& dir) {
  LoadedDecomposition loaded;
  auto& d = loaded.decomposition;
  d.A = read_matrix_csv(dir / "A.csv", &loaded.labels);
  std::vector<std::string> e_labels;
  std::vector<std::string> n_labels;
  d.E = read_matrix_csv(dir / "E.csv", &e_labels);
  d.N = read_matrix_csv(dir / "N.csv", &n_labels);
  if (e_labels != loaded.labels || n_labels != loaded.labels || d.E.rows() != d.A.rows() ||
      d.N.rows() != d.A.rows())
    throw Error(ErrorCode::parse, "A.csv, E.csv and N.csv disagree in shape or header");

  std::ifstream in(dir / "meta.json");
  if (!in) throw Error(ErrorCode::io, "cannot open " + (dir / "meta.json").string());
  json meta;
  try {
    in >> meta;
    d.lambda = meta.at("lambda").get<double>();
    d.mu = meta.at("mu").get<double>();
    const auto sigmas = meta.at("sigmas").get<std::vector<double>>();
    d.sigmas = Eigen::Map<const Vector>(sigmas.data(), static_cast<Eigen::Index>(sigmas.size()));
    d.iterations = meta.at("iterations").get<int>();
    d.elapsed_seconds = meta.at("elapsed_seconds").get<double>();
    d.converged = meta.at("converged").get<bool>();
    d.rank_A = meta.at("rank_A").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("meta.json: ") + e.what());
  }
  loaded.X = d.A + d.E + d.N;
  return loaded;
}

nlohmann::json to_json(const SynthSpec& spec) {
  return json{{"rows", spec.rows},
              {"cols", spec.cols},
              {"rank", spec.rank},
              {"interval_minutes", spec.interval_minutes},
              {"density", spec.density},
              {"magnitude_min", spec.magnitude_min},
              {"magnitude_max", spec.magnitude_max},
              {"duration_min", spec.duration_min},
              {"duration_max", spec.duration_max},
              {"noise_sigmas", spec.noise_sigmas},
              {"amplitude", spec.amplitude},
              {"baseline", optional_number(spec.baseline)},
              {"allow_dips", spec.allow_dips},
              {"seed", spec.seed}};
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticGroundTruth& gt) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  const auto& labels = gt.X.od_labels();
  write_matrix_csv(dir / "X.csv", labels, gt.X.values());
  write_matrix_csv(dir / "A_true.csv", labels, gt.A_true);
  write_matrix_csv(dir / "E_true.csv", labels, gt.E_true);
  write_matrix_csv(dir / "N_true.csv", labels, gt.N_true);
  std::ofstream out(dir / "spec.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + (dir / "spec.json").string());
  out << to_json(gt.spec).dump(2) << '\n';
}

}  // namespace tmrpca
