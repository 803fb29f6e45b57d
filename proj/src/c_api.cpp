#include "tmrpca/tmrpca.h"

#include "tmrpca/csv_io.hpp"
#include "tmrpca/pca_eigenflow.hpp"
#include "tmrpca/reporting.hpp"
#include "tmrpca/rpca_apg.hpp"
#include "tmrpca/synth_gen.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>

using namespace tmrpca;

struct tmr_matrix {
  TrafficMatrix value;
};

struct tmr_decomposition {
  Decomposition value;
  std::vector<std::string> labels;
};

struct tmr_classification {
  SvdResult svd;
  ClassificationResult result;
  double interval_minutes;
};

struct tmr_synthetic {
  SyntheticGroundTruth truth;
  tmr_matrix matrix;
};

namespace {

thread_local std::string g_last_error;

tmr_status fail(tmr_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

tmr_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return TMR_INVALID_ARGUMENT;
    case ErrorCode::parse: return TMR_PARSE_ERROR;
    case ErrorCode::io: return TMR_IO_ERROR;
    case ErrorCode::numeric: return TMR_NUMERIC_ERROR;
  }
  return TMR_INTERNAL_ERROR;
}

template <class F>
tmr_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TMR_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(TMR_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(TMR_INTERNAL_ERROR, "unknown error");
  }
}

#define TMR_REQUIRE(cond, msg) \
  do {                         \
    if (!(cond)) return fail(TMR_INVALID_ARGUMENT, msg); \
  } while (0)

tmr_status copy_row_major(const Matrix& m, double* out, size_t count) {
  TMR_REQUIRE(out != nullptr, "output buffer is null");
  TMR_REQUIRE(count == static_cast<size_t>(m.size()), "output buffer size must equal rows * cols");
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
  return TMR_OK;
}

tmr_status render_report(const char* dir, tmr_report_format format, const PowerLawBounds& bounds, char** out) {
  TMR_REQUIRE(dir && out, "null argument");
  return guarded([&] {
    const std::filesystem::path path(dir);
    const auto loaded = read_decomposition(path);
    const auto name = path.filename().empty() ? path.parent_path().filename().string() : path.filename().string();
    const auto report = decomposition_report(name, loaded.X, loaded.decomposition);
    const auto noise = noise_correlation(loaded.X, loaded.decomposition.N, bounds);
    std::ostringstream text;
    switch (format) {
      case TMR_REPORT_JSON: {
        nlohmann::json j = to_json(report);
        j["converged"] = loaded.decomposition.converged;
        j["noise_correlation"] = to_json(noise);
        text << j.dump(2) << '\n';
        break;
      }
      case TMR_REPORT_TSV:
        text << "metric\tvalue\n"
             << "name\t" << report.name << '\n'
             << "rank_A\t" << report.rank_A << '\n'
             << "rank_X\t" << report.rank_X << '\n'
             << "rank_ratio\t" << format_double(report.rank_ratio) << '\n'
             << "l0_E\t" << report.l0_E << '\n'
             << "cells\t" << report.cells << '\n'
             << "sparsity_ratio\t" << format_double(report.sparsity_ratio) << '\n'
             << "noise_energy_ratio\t" << format_double(report.noise_energy_ratio) << '\n'
             << "iterations\t" << report.iterations << '\n'
             << "elapsed_seconds\t" << format_double(report.elapsed_seconds) << '\n'
             << "fraction_within_bounds\t"
             << (noise.fraction_within_bounds ? format_double(*noise.fraction_within_bounds) : "null") << '\n'
             << "log_log_correlation\t"
             << (noise.log_log_correlation ? format_double(*noise.log_log_correlation) : "null") << '\n';
        break;
      case TMR_REPORT_SCATTER_TSV:
        write_noise_scatter_tsv(text, noise);
        break;
      default:
        return fail(TMR_INVALID_ARGUMENT, "unknown report format");
    }
    const std::string s = text.str();
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
    return TMR_OK;
  });
}

}  // namespace

extern "C" {

const char* tmr_status_string(tmr_status status) {
  switch (status) {
    case TMR_OK: return "ok";
    case TMR_INVALID_ARGUMENT: return "invalid argument";
    case TMR_PARSE_ERROR: return "parse error";
    case TMR_IO_ERROR: return "i/o error";
    case TMR_NUMERIC_ERROR: return "numeric error";
    case TMR_NOT_CONVERGED: return "not converged";
    case TMR_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* tmr_last_error(void) { return g_last_error.c_str(); }

const char* tmr_version(void) { return "0.1.0"; }

tmr_status tmr_matrix_load_csv(const char* path, double interval_minutes, tmr_matrix** out) {
  TMR_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new tmr_matrix{read_traffic_csv(path, interval_minutes)};
    return TMR_OK;
  });
}

tmr_status tmr_matrix_create(const double* row_major, size_t rows, size_t cols, const char* const* labels,
                             double interval_minutes, tmr_matrix** out) {
  TMR_REQUIRE(row_major && out, "null argument");
  return guarded([&] {
    const auto r = static_cast<Eigen::Index>(rows);
    const auto c = static_cast<Eigen::Index>(cols);
    Matrix values =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(row_major, r, c);
    std::vector<std::string> names;
    for (size_t j = 0; j < cols; ++j)
      names.push_back(labels && labels[j] ? std::string(labels[j]) : "c" + std::to_string(j + 1));
    *out = new tmr_matrix{TrafficMatrix(std::move(values), interval_minutes, std::move(names))};
    return TMR_OK;
  });
}

void tmr_matrix_free(tmr_matrix* m) { delete m; }
size_t tmr_matrix_rows(const tmr_matrix* m) { return m ? static_cast<size_t>(m->value.rows()) : 0; }
size_t tmr_matrix_cols(const tmr_matrix* m) { return m ? static_cast<size_t>(m->value.cols()) : 0; }
double tmr_matrix_interval_minutes(const tmr_matrix* m) { return m ? m->value.interval_minutes() : 0.0; }

const char* tmr_matrix_label(const tmr_matrix* m, size_t col) {
  if (!m || col >= m->value.od_labels().size()) return nullptr;
  return m->value.od_labels()[col].c_str();
}

tmr_status tmr_matrix_copy_values(const tmr_matrix* m, double* row_major, size_t count) {
  TMR_REQUIRE(m, "null matrix");
  return copy_row_major(m->value.values(), row_major, count);
}

tmr_status tmr_matrix_save_csv(const tmr_matrix* m, const char* path) {
  TMR_REQUIRE(m && path, "null argument");
  return guarded([&] {
    write_matrix_csv(std::filesystem::path(path), m->value.od_labels(), m->value.values());
    return TMR_OK;
  });
}

tmr_status tmr_matrix_filter(const tmr_matrix* m, double zero_fraction_limit, const char* excluded_pop,
                             const char* delimiter, tmr_matrix** out) {
  TMR_REQUIRE(m && out, "null argument");
  return guarded([&] {
    FilterOptions opts;
    opts.zero_fraction_limit = zero_fraction_limit;
    if (excluded_pop) opts.excluded_pop = excluded_pop;
    if (delimiter) opts.label_delimiter = delimiter;
    *out = new tmr_matrix{preprocess_filter(m->value, opts)};
    return TMR_OK;
  });
}

void tmr_apg_options_init(tmr_apg_options* opts) {
  if (!opts) return;
  const ApgParams defaults;
  opts->tolerance = defaults.tolerance;
  opts->max_iterations = defaults.max_iterations;
  opts->lambda = 0.0;
  opts->mu = 0.0;
}

tmr_status tmr_decompose(const tmr_matrix* x, const tmr_apg_options* opts, tmr_decomposition** out) {
  TMR_REQUIRE(x && out, "null argument");
  return guarded([&] {
    ApgParams params;
    if (opts) {
      params.tolerance = opts->tolerance;
      params.max_iterations = opts->max_iterations;
      if (opts->lambda > 0.0) params.lambda = opts->lambda;
      if (opts->mu > 0.0) params.mu = opts->mu;
    }
    auto* handle = new tmr_decomposition{apg_decompose(x->value, params), x->value.od_labels()};
    *out = handle;
    if (!handle->value.converged) {
      std::ostringstream msg;
      msg << "no convergence after " << handle->value.iterations << " iterations (stopping quantity "
          << handle->value.stopping_trace.back() << ")";
      return fail(TMR_NOT_CONVERGED, msg.str());
    }
    return TMR_OK;
  });
}

void tmr_decomposition_free(tmr_decomposition* d) { delete d; }
int tmr_decomposition_iterations(const tmr_decomposition* d) { return d ? d->value.iterations : 0; }
int tmr_decomposition_converged(const tmr_decomposition* d) { return d && d->value.converged ? 1 : 0; }
int tmr_decomposition_rank_a(const tmr_decomposition* d) { return d ? d->value.rank_A : 0; }

int64_t tmr_decomposition_l0_e(const tmr_decomposition* d) {
  return d ? static_cast<int64_t>((d->value.E.array() != 0.0).count()) : 0;
}

double tmr_decomposition_lambda(const tmr_decomposition* d) { return d ? d->value.lambda : 0.0; }
double tmr_decomposition_mu(const tmr_decomposition* d) { return d ? d->value.mu : 0.0; }

double tmr_decomposition_stopping_quantity(const tmr_decomposition* d) {
  return d && !d->value.stopping_trace.empty() ? d->value.stopping_trace.back() : 0.0;
}

double tmr_decomposition_elapsed_seconds(const tmr_decomposition* d) { return d ? d->value.elapsed_seconds : 0.0; }

tmr_status tmr_decomposition_copy(const tmr_decomposition* d, tmr_component which, double* row_major,
                                  size_t count) {
  TMR_REQUIRE(d, "null decomposition");
  switch (which) {
    case TMR_COMPONENT_A: return copy_row_major(d->value.A, row_major, count);
    case TMR_COMPONENT_E: return copy_row_major(d->value.E, row_major, count);
    case TMR_COMPONENT_N: return copy_row_major(d->value.N, row_major, count);
  }
  return fail(TMR_INVALID_ARGUMENT, "unknown component");
}

tmr_status tmr_decomposition_save(const tmr_decomposition* d, const char* dir) {
  TMR_REQUIRE(d && dir, "null argument");
  return guarded([&] {
    write_decomposition(dir, d->labels, d->value);
    return TMR_OK;
  });
}

tmr_status tmr_classify(const tmr_matrix* x, double alpha, tmr_classification** out) {
  TMR_REQUIRE(x && out, "null argument");
  return guarded([&] {
    auto svd = pca(center_columns(x->value));
    auto result = classify_all(svd, PeriodSet::standard(), x->value.interval_minutes(), alpha);
    *out = new tmr_classification{std::move(svd), std::move(result), x->value.interval_minutes()};
    return TMR_OK;
  });
}

void tmr_classification_free(tmr_classification* c) { delete c; }
size_t tmr_classification_size(const tmr_classification* c) { return c ? c->result.eigenflows.size() : 0; }

tmr_status tmr_classification_counts_get(const tmr_classification* c, tmr_classification_counts* out) {
  TMR_REQUIRE(c && out, "null argument");
  const auto k = c->result.counts();
  *out = {k.satisfy_d, k.satisfy_s, k.satisfy_n, k.non_determinate, k.indeterminate, k.classified};
  return TMR_OK;
}

const char* tmr_classification_label(const tmr_classification* c, size_t index) {
  if (!c || index >= c->result.eigenflows.size()) return nullptr;
  return to_string(c->result.eigenflows[index].label);
}

tmr_status tmr_classification_unclassified_energy_rate(const tmr_classification* c, double* out) {
  TMR_REQUIRE(c && out, "null argument");
  return guarded([&] {
    *out = unclassified_energy_rate(c->svd, c->result.eigenflows);
    return TMR_OK;
  });
}

tmr_status tmr_classification_save_json(const tmr_classification* c, const char* path) {
  TMR_REQUIRE(c && path, "null argument");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) return fail(TMR_IO_ERROR, std::string("cannot write ") + path);
    out << to_json(c->result, c->svd).dump(2) << '\n';
    return out ? TMR_OK : fail(TMR_IO_ERROR, std::string("write failed for ") + path);
  });
}

tmr_status tmr_classification_save_plots(const tmr_classification* c, size_t count, const char* dir) {
  TMR_REQUIRE(c && dir, "null argument");
  return guarded([&] {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    const auto periods = PeriodSet::standard();
    const auto& u = c->svd.left_vectors;
    const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(count), u.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      std::span<const double> col(u.col(i).data(), static_cast<size_t>(u.rows()));
      const auto tag = std::to_string(i + 1);
      std::ofstream series(root / ("eigenflow_" + tag + ".tsv"), std::ios::binary);
      std::ofstream spectrum(root / ("spectrum_" + tag + ".tsv"), std::ios::binary);
      if (!series || !spectrum) return fail(TMR_IO_ERROR, "cannot write plot files in " + root.string());
      write_series_tsv(series, col);
      write_power_spectrum_tsv(spectrum, col, periods, c->interval_minutes);
    }
    return TMR_OK;
  });
}

void tmr_synth_options_init(tmr_synth_options* opts) {
  if (!opts) return;
  const SynthSpec d;
  opts->rows = d.rows;
  opts->cols = d.cols;
  opts->rank = d.rank;
  opts->density = d.density;
  opts->seed = d.seed;
  opts->interval_minutes = d.interval_minutes;
  opts->noise_sigma = d.noise_sigmas.front();
  opts->magnitude_min = d.magnitude_min;
  opts->magnitude_max = d.magnitude_max;
  opts->duration_min = d.duration_min;
  opts->duration_max = d.duration_max;
  opts->amplitude = d.amplitude;
  opts->baseline = -1.0;
  opts->allow_dips = 0;
}

tmr_status tmr_synthesize(const tmr_synth_options* opts, tmr_synthetic** out) {
  TMR_REQUIRE(opts && out, "null argument");
  return guarded([&] {
    SynthSpec spec;
    spec.rows = opts->rows;
    spec.cols = opts->cols;
    spec.rank = opts->rank;
    spec.density = opts->density;
    spec.seed = opts->seed;
    spec.interval_minutes = opts->interval_minutes;
    spec.noise_sigmas = {opts->noise_sigma};
    spec.magnitude_min = opts->magnitude_min;
    spec.magnitude_max = opts->magnitude_max;
    spec.duration_min = opts->duration_min;
    spec.duration_max = opts->duration_max;
    spec.amplitude = opts->amplitude;
    if (opts->baseline >= 0.0) spec.baseline = opts->baseline;
    spec.allow_dips = opts->allow_dips != 0;
    auto truth = generate(spec);
    auto matrix = tmr_matrix{truth.X};
    *out = new tmr_synthetic{std::move(truth), std::move(matrix)};
    return TMR_OK;
  });
}

void tmr_synthetic_free(tmr_synthetic* s) { delete s; }
const tmr_matrix* tmr_synthetic_matrix(const tmr_synthetic* s) { return s ? &s->matrix : nullptr; }

tmr_status tmr_synthetic_save(const tmr_synthetic* s, const char* dir) {
  TMR_REQUIRE(s && dir, "null argument");
  return guarded([&] {
    write_synthetic(dir, s->truth);
    return TMR_OK;
  });
}

tmr_status tmr_report_render(const char* decomposition_dir, tmr_report_format format, char** out) {
  return render_report(decomposition_dir, format, PowerLawBounds::abilene(), out);
}

tmr_status tmr_report_render_bounds(const char* decomposition_dir, tmr_report_format format, double b1,
                                    double c1, double b2, double c2, char** out) {
  return render_report(decomposition_dir, format, PowerLawBounds{b1, c1, b2, c2}, out);
}

void tmr_string_free(char* s) { delete[] s; }

}  // extern "C"
