#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tmrpca/tmrpca.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tmrpca_capi_" + name);
  fs::remove_all(dir);
  return dir;
}

tmr_synthetic* small_synthetic(uint64_t seed) {
  tmr_synth_options o;
  tmr_synth_options_init(&o);
  o.rows = 192;
  o.cols = 9;
  o.rank = 2;
  o.seed = seed;
  tmr_synthetic* s = nullptr;
  REQUIRE(tmr_synthesize(&o, &s) == TMR_OK);
  return s;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(tmr_status_string(TMR_OK)) == "ok");
  CHECK(std::string(tmr_status_string(TMR_NOT_CONVERGED)).size() > 0);
  CHECK(std::string(tmr_version()).size() > 0);
}

TEST_CASE("matrix handles") {
  const double values[] = {1, 2, 3, 4, 5, 6};
  const char* labels[] = {"a→b", "b→a"};
  tmr_matrix* m = nullptr;
  REQUIRE(tmr_matrix_create(values, 3, 2, labels, 5.0, &m) == TMR_OK);
  CHECK(tmr_matrix_rows(m) == 3);
  CHECK(tmr_matrix_cols(m) == 2);
  CHECK(tmr_matrix_interval_minutes(m) == 5.0);
  CHECK(std::string(tmr_matrix_label(m, 1)) == "b→a");
  CHECK(tmr_matrix_label(m, 2) == nullptr);
  double back[6];
  REQUIRE(tmr_matrix_copy_values(m, back, 6) == TMR_OK);
  for (int i = 0; i < 6; ++i) CHECK(back[i] == values[i]);
  CHECK(tmr_matrix_copy_values(m, back, 5) == TMR_INVALID_ARGUMENT);

  tmr_matrix* f = nullptr;
  REQUIRE(tmr_matrix_filter(m, 0.5, "c", "→", &f) == TMR_OK);
  CHECK(tmr_matrix_cols(f) == 2);
  tmr_matrix_free(f);
  f = nullptr;
  // both flows touch PoP a
  CHECK(tmr_matrix_filter(m, 0.5, "a", "→", &f) == TMR_INVALID_ARGUMENT);
  CHECK(f == nullptr);
  tmr_matrix_free(m);

  const double negative[] = {1, -1};
  CHECK(tmr_matrix_create(negative, 2, 1, nullptr, 5.0, &m) == TMR_INVALID_ARGUMENT);
  CHECK(std::string(tmr_last_error()).size() > 0);
  CHECK(tmr_matrix_create(values, 3, 2, nullptr, 5.0, nullptr) == TMR_INVALID_ARGUMENT);
  tmr_matrix_free(nullptr);
}

TEST_CASE("CSV load errors map to status codes") {
  tmr_matrix* m = nullptr;
  CHECK(tmr_matrix_load_csv("/nonexistent/file.csv", 5.0, &m) == TMR_IO_ERROR);
  const auto dir = scratch_dir("csv");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "bad.csv");
    out << "a,b\n1,2\n3\n";
  }
  CHECK(tmr_matrix_load_csv((dir / "bad.csv").c_str(), 5.0, &m) == TMR_PARSE_ERROR);
  fs::remove_all(dir);
}

TEST_CASE("decompose, classify and report through the C interface") {
  tmr_synthetic* s = small_synthetic(5);
  const tmr_matrix* x = tmr_synthetic_matrix(s);
  REQUIRE(x != nullptr);

  tmr_apg_options opts;
  tmr_apg_options_init(&opts);
  CHECK(opts.tolerance == 1e-6);
  CHECK(opts.max_iterations == 5000);
  tmr_decomposition* d = nullptr;
  REQUIRE(tmr_decompose(x, &opts, &d) == TMR_OK);
  CHECK(tmr_decomposition_converged(d) == 1);
  CHECK(tmr_decomposition_iterations(d) > 0);
  CHECK(tmr_decomposition_stopping_quantity(d) < 1e-6);
  CHECK(tmr_decomposition_lambda(d) == doctest::Approx(1.0 / std::sqrt(192.0)));

  const std::size_t n = 192 * 9;
  std::vector<double> xa(n), a(n), e(n), noise(n);
  REQUIRE(tmr_matrix_copy_values(x, xa.data(), n) == TMR_OK);
  REQUIRE(tmr_decomposition_copy(d, TMR_COMPONENT_A, a.data(), n) == TMR_OK);
  REQUIRE(tmr_decomposition_copy(d, TMR_COMPONENT_E, e.data(), n) == TMR_OK);
  REQUIRE(tmr_decomposition_copy(d, TMR_COMPONENT_N, noise.data(), n) == TMR_OK);
  for (std::size_t i = 0; i < n; ++i) CHECK(a[i] + e[i] + noise[i] == doctest::Approx(xa[i]).epsilon(1e-10));

  const auto dir = scratch_dir("decomp");
  REQUIRE(tmr_decomposition_save(d, dir.c_str()) == TMR_OK);
  char* text = nullptr;
  REQUIRE(tmr_report_render(dir.c_str(), TMR_REPORT_JSON, &text) == TMR_OK);
  const std::string json = text;
  tmr_string_free(text);
  CHECK(json.find("\"rank_A\"") != std::string::npos);
  REQUIRE(tmr_report_render(dir.c_str(), TMR_REPORT_SCATTER_TSV, &text) == TMR_OK);
  CHECK(std::string(text).rfind("mean_volume\tnoise_std\n", 0) == 0);
  tmr_string_free(text);
  CHECK(tmr_report_render((dir / "missing").c_str(), TMR_REPORT_JSON, &text) == TMR_IO_ERROR);

  tmr_classification* c = nullptr;
  REQUIRE(tmr_classify(x, 0.05, &c) == TMR_OK);
  CHECK(tmr_classification_size(c) == 9);
  tmr_classification_counts k;
  REQUIRE(tmr_classification_counts_get(c, &k) == TMR_OK);
  CHECK(k.non_determinate + k.indeterminate + k.classified == 9);
  double rate = -1.0;
  REQUIRE(tmr_classification_unclassified_energy_rate(c, &rate) == TMR_OK);
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);
  CHECK(tmr_classification_label(c, 0) != nullptr);
  CHECK(tmr_classification_label(c, 9) == nullptr);
  REQUIRE(tmr_classification_save_json(c, (dir / "classes.json").c_str()) == TMR_OK);
  REQUIRE(tmr_classification_save_plots(c, 2, (dir / "plots").c_str()) == TMR_OK);
  CHECK(!fs::is_empty(dir / "plots"));

  tmr_classification_free(c);
  tmr_decomposition_free(d);
  tmr_synthetic_free(s);
  fs::remove_all(dir);
}

TEST_CASE("iteration cap yields NOT_CONVERGED with a usable result") {
  tmr_synthetic* s = small_synthetic(6);
  tmr_apg_options opts;
  tmr_apg_options_init(&opts);
  opts.max_iterations = 2;
  tmr_decomposition* d = nullptr;
  CHECK(tmr_decompose(tmr_synthetic_matrix(s), &opts, &d) == TMR_NOT_CONVERGED);
  REQUIRE(d != nullptr);
  CHECK(tmr_decomposition_converged(d) == 0);
  CHECK(tmr_decomposition_iterations(d) == 2);
  tmr_decomposition_free(d);
  tmr_synthetic_free(s);
}

TEST_CASE("invalid synthetic options") {
  tmr_synth_options o;
  tmr_synth_options_init(&o);
  o.rank = 0;
  tmr_synthetic* s = nullptr;
  CHECK(tmr_synthesize(&o, &s) == TMR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
}
