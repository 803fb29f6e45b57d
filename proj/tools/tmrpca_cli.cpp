// tmrpca: command-line front end over the C interface of libtmrpca.
//
//   tmrpca decompose --input X.csv --interval-minutes 5 --out-dir out/
//   tmrpca classify  --input X.csv --interval-minutes 5 --out report.json
//   tmrpca synth     --rows 672 --cols 50 --rank 5 --density 0.05 --seed 1 --out-dir synth/
//   tmrpca report    --decomposition out/ --format json
//
// Exit status: 0 success, 1 input or runtime error, 2 solver did not converge
// (the decomposition is still written).

#include "tmrpca/tmrpca.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct MatrixDeleter {
  void operator()(tmr_matrix* m) const { tmr_matrix_free(m); }
};
struct DecompositionDeleter {
  void operator()(tmr_decomposition* d) const { tmr_decomposition_free(d); }
};
struct ClassificationDeleter {
  void operator()(tmr_classification* c) const { tmr_classification_free(c); }
};
struct SyntheticDeleter {
  void operator()(tmr_synthetic* s) const { tmr_synthetic_free(s); }
};
using MatrixPtr = std::unique_ptr<tmr_matrix, MatrixDeleter>;

int report_failure(const char* what, tmr_status status) {
  std::cerr << "tmrpca: " << what << ": " << tmr_status_string(status);
  const std::string detail = tmr_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << '\n';
  return kExitError;
}

struct InputOptions {
  std::string input;
  double interval_minutes = 0.0;
  double zero_fraction_limit = 0.5;
  std::optional<std::string> exclude_pop;
  std::string od_delimiter = "→";
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.input, "traffic matrix CSV (header of OD labels)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--interval-minutes", in.interval_minutes, "length of one time interval in minutes")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--zero-fraction-limit", in.zero_fraction_limit,
                  "drop OD flows with a larger fraction of zero entries")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--exclude-pop", in.exclude_pop, "drop OD flows with this PoP as source or destination");
  cmd->add_option("--od-delimiter", in.od_delimiter, "separator between source and destination in OD labels")
      ->capture_default_str();
}

int load_input(const InputOptions& in, MatrixPtr& out) {
  tmr_matrix* raw = nullptr;
  if (auto s = tmr_matrix_load_csv(in.input.c_str(), in.interval_minutes, &raw); s != TMR_OK)
    return report_failure("reading input", s);
  MatrixPtr loaded(raw);
  tmr_matrix* filtered = nullptr;
  const char* pop = in.exclude_pop ? in.exclude_pop->c_str() : nullptr;
  if (auto s = tmr_matrix_filter(loaded.get(), in.zero_fraction_limit, pop, in.od_delimiter.c_str(), &filtered);
      s != TMR_OK)
    return report_failure("filtering input", s);
  out.reset(filtered);
  const auto before = tmr_matrix_cols(loaded.get());
  const auto after = tmr_matrix_cols(out.get());
  if (after != before) std::cerr << "tmrpca: kept " << after << " of " << before << " OD flows\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic-matrix structural analysis: low-rank + sparse + noise decomposition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tmr_version()));

  // decompose
  InputOptions dec_in;
  tmr_apg_options apg;
  tmr_apg_options_init(&apg);
  std::string dec_out;
  auto* decompose = app.add_subcommand("decompose", "split X into deterministic, anomaly and noise matrices");
  add_input_options(decompose, dec_in);
  decompose->add_option("--tol", apg.tolerance, "stopping tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  decompose->add_option("--max-iters", apg.max_iterations, "iteration cap")->capture_default_str()->check(CLI::PositiveNumber);
  decompose->add_option("--lambda", apg.lambda, "override the sparsity weight");
  decompose->add_option("--mu", apg.mu, "override the Lagrangian weight");
  decompose->add_option("--out-dir", dec_out, "output directory")->required();

  // classify
  InputOptions cls_in;
  double alpha = 0.05;
  std::string cls_out;
  std::string plot_dir;
  std::size_t plot_count = 6;
  auto* classify = app.add_subcommand("classify", "classical PCA eigenflow classification");
  add_input_options(classify, cls_in);
  classify->add_option("--alpha", alpha, "K-S significance level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  classify->add_option("--out", cls_out, "JSON report path")->required();
  classify->add_option("--plot-dir", plot_dir, "also write eigenflow series and spectra as TSV");
  classify->add_option("--plot-count", plot_count, "number of leading eigenflows to plot")->capture_default_str();

  // synth
  tmr_synth_options syn;
  tmr_synth_options_init(&syn);
  std::string syn_out;
  bool dips = false;
  auto* synth = app.add_subcommand("synth", "generate a traffic matrix with known components");
  synth->add_option("--rows", syn.rows)->required()->check(CLI::PositiveNumber);
  synth->add_option("--cols", syn.cols)->required()->check(CLI::PositiveNumber);
  synth->add_option("--rank", syn.rank)->required()->check(CLI::PositiveNumber);
  synth->add_option("--density", syn.density)->required()->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", syn.seed)->required();
  synth->add_option("--interval-minutes", syn.interval_minutes)->capture_default_str();
  synth->add_option("--noise-sigma", syn.noise_sigma)->capture_default_str();
  synth->add_option("--magnitude-min", syn.magnitude_min)->capture_default_str();
  synth->add_option("--magnitude-max", syn.magnitude_max)->capture_default_str();
  synth->add_option("--duration-min", syn.duration_min)->capture_default_str();
  synth->add_option("--duration-max", syn.duration_max)->capture_default_str();
  synth->add_option("--amplitude", syn.amplitude)->capture_default_str();
  synth->add_option("--baseline", syn.baseline, "minimum per-column offset (default 6 * noise sigma)");
  synth->add_flag("--allow-dips", dips, "anomalies may also be negative");
  synth->add_option("--out-dir", syn_out)->required();

  // report
  std::string rep_dir;
  std::string rep_format = "json";
  std::string rep_bounds = "abilene";
  std::string scatter_out;
  auto* report = app.add_subcommand("report", "summarise a decomposition directory");
  report->add_option("--decomposition", rep_dir, "directory written by decompose")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", rep_format)->capture_default_str()->check(CLI::IsMember({"json", "tsv"}));
  report->add_option("--bounds", rep_bounds, "noise power-law bounds preset")
      ->capture_default_str()
      ->check(CLI::IsMember({"abilene", "geant"}));
  report->add_option("--scatter-out", scatter_out, "write per-flow (mean volume, noise std) TSV here");

  CLI11_PARSE(app, argc, argv);

  if (*decompose) {
    MatrixPtr x;
    if (int rc = load_input(dec_in, x); rc != kExitOk) return rc;
    tmr_decomposition* raw = nullptr;
    const auto status = tmr_decompose(x.get(), &apg, &raw);
    if (status != TMR_OK && status != TMR_NOT_CONVERGED) return report_failure("decomposing", status);
    std::unique_ptr<tmr_decomposition, DecompositionDeleter> d(raw);
    if (auto s = tmr_decomposition_save(d.get(), dec_out.c_str()); s != TMR_OK)
      return report_failure("writing decomposition", s);
    std::cout << "iterations " << tmr_decomposition_iterations(d.get()) << ", rank(A) "
              << tmr_decomposition_rank_a(d.get()) << ", |E|_0 " << tmr_decomposition_l0_e(d.get()) << ", "
              << tmr_decomposition_elapsed_seconds(d.get()) << " s\n";
    if (status == TMR_NOT_CONVERGED) {
      std::cerr << "tmrpca: warning: " << tmr_last_error() << '\n';
      return kExitNotConverged;
    }
    return kExitOk;
  }

  if (*classify) {
    MatrixPtr x;
    if (int rc = load_input(cls_in, x); rc != kExitOk) return rc;
    tmr_classification* raw = nullptr;
    if (auto s = tmr_classify(x.get(), alpha, &raw); s != TMR_OK) return report_failure("classifying", s);
    std::unique_ptr<tmr_classification, ClassificationDeleter> c(raw);
    if (auto s = tmr_classification_save_json(c.get(), cls_out.c_str()); s != TMR_OK)
      return report_failure("writing report", s);
    if (!plot_dir.empty()) {
      if (auto s = tmr_classification_save_plots(c.get(), plot_count, plot_dir.c_str()); s != TMR_OK)
        return report_failure("writing plots", s);
    }
    tmr_classification_counts k;
    tmr_classification_counts_get(c.get(), &k);
    std::cout << "d " << k.satisfy_d << ", s " << k.satisfy_s << ", n " << k.satisfy_n << ", non-determinate "
              << k.non_determinate << ", indeterminate " << k.indeterminate << ", classified " << k.classified
              << '\n';
    return kExitOk;
  }

  if (*synth) {
    syn.allow_dips = dips ? 1 : 0;
    tmr_synthetic* raw = nullptr;
    if (auto s = tmr_synthesize(&syn, &raw); s != TMR_OK) return report_failure("generating", s);
    std::unique_ptr<tmr_synthetic, SyntheticDeleter> g(raw);
    if (auto s = tmr_synthetic_save(g.get(), syn_out.c_str()); s != TMR_OK)
      return report_failure("writing synthetic data", s);
    return kExitOk;
  }

  if (*report) {
    const bool geant = rep_bounds == "geant";
    const double c1 = geant ? 0.5 : 0.6;
    char* text = nullptr;
    const auto format = rep_format == "tsv" ? TMR_REPORT_TSV : TMR_REPORT_JSON;
    if (auto s = tmr_report_render_bounds(rep_dir.c_str(), format, 4.0, c1, 4.0, 0.9, &text); s != TMR_OK)
      return report_failure("building report", s);
    std::cout << text;
    tmr_string_free(text);
    if (!scatter_out.empty()) {
      if (auto s = tmr_report_render_bounds(rep_dir.c_str(), TMR_REPORT_SCATTER_TSV, 4.0, c1, 4.0, 0.9, &text);
          s != TMR_OK)
        return report_failure("building scatter data", s);
      std::ofstream out(scatter_out, std::ios::binary);
      out << text;
      tmr_string_free(text);
      if (!out) {
        std::cerr << "tmrpca: cannot write " << scatter_out << '\n';
        return kExitError;
      }
    }
    return kExitOk;
  }
  return kExitError;
}
