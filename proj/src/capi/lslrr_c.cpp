#include "lslrr/lslrr.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "lslrr/error.hpp"
#include "lslrr/io.hpp"
#include "lslrr/metrics.hpp"
#include "lslrr/pipeline.hpp"
#include "lslrr/run.hpp"
#include "lslrr/structure.hpp"
#include "lslrr/synthetic.hpp"

struct lslrr_matrix {
  lslrr::Matrix value;
};
struct lslrr_dataset {
  lslrr::PixelDataset value;
};
struct lslrr_split {
  lslrr::Split value;
  std::vector<int> test_labels;
};
struct lslrr_solution {
  lslrr::SolverSolution value;
};
struct lslrr_report {
  lslrr::EvalReport value;
};
struct lslrr_run {
  lslrr::RunOutcome value;
  lslrr_report report;
  lslrr_solution solution;
};

namespace {

thread_local std::string g_last_error;

lslrr_status fail(lslrr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body` and translates every exception into a status code.
template <typename F>
lslrr_status guarded(F&& body) {
  try {
    body();
    return LSLRR_OK;
  } catch (const lslrr::DivergenceError& e) {
    return fail(LSLRR_ERR_DIVERGENCE, e.what());
  } catch (const lslrr::SplitError& e) {
    return fail(LSLRR_ERR_SPLIT, e.what());
  } catch (const lslrr::LoadError& e) {
    return fail(LSLRR_ERR_LOAD, e.what());
  } catch (const lslrr::IoError& e) {
    return fail(LSLRR_ERR_IO, e.what());
  } catch (const lslrr::ConfigError& e) {
    return fail(LSLRR_ERR_CONFIG, e.what());
  } catch (const lslrr::InvalidInputError& e) {
    return fail(LSLRR_ERR_INVALID_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LSLRR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LSLRR_ERR_INTERNAL, e.what());
  }
}

#define LSLRR_REQUIRE(cond)                                          \
  do {                                                               \
    if (!(cond)) return fail(LSLRR_ERR_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

lslrr::SolverConfig to_core(const lslrr_config& c) {
  lslrr::SolverConfig cfg;
  cfg.lambda = c.lambda;
  cfg.alpha = c.alpha;
  cfg.beta = c.beta;
  cfg.m_param = c.m;
  if (!c.auto_sigma) cfg.sigma = c.sigma;
  if (!c.auto_theta) cfg.theta = c.theta;
  cfg.w = c.w;
  cfg.mu0 = c.mu0;
  cfg.rho = c.rho;
  cfg.mu_max = c.mu_max;
  cfg.epsilon = c.epsilon;
  cfg.max_iter = c.max_iter;
  cfg.dictionary_learning = c.dictionary_learning != 0;
  cfg.column_sum_constraint = c.column_sum_constraint != 0;
  return cfg;
}

lslrr::SyntheticSpec to_core(const lslrr_synthetic_spec& s) {
  lslrr::SyntheticSpec spec;
  spec.band_count = s.band_count;
  spec.classes = s.classes;
  spec.subspace_dim = s.subspace_dim;
  spec.pixels_per_class = s.pixels_per_class;
  spec.grid_side = s.grid_side;
  spec.noise_sigma = s.noise_sigma;
  spec.corrupt_fraction = s.corrupt_fraction;
  spec.seed = s.seed;
  return spec;
}

lslrr::Matrix from_row_major(std::size_t rows, std::size_t cols, const double* data) {
  lslrr::Matrix m(static_cast<lslrr::Index>(rows), static_cast<lslrr::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<lslrr::Index>(r), static_cast<lslrr::Index>(c)) = data[r * cols + c];
    }
  }
  return m;
}

lslrr_status new_matrix(lslrr::Matrix m, lslrr_matrix** out) {
  return guarded([&] { *out = new lslrr_matrix{std::move(m)}; });
}

std::string opt_path(const char* p) { return p ? std::string(p) : std::string(); }

}  // namespace

extern "C" {

const char* lslrr_version(void) { return "1.0.0"; }

const char* lslrr_last_error(void) { return g_last_error.c_str(); }

const char* lslrr_status_name(lslrr_status status) {
  switch (status) {
    case LSLRR_OK: return "ok";
    case LSLRR_ERR_ARGUMENT: return "argument";
    case LSLRR_ERR_INVALID_INPUT: return "invalid-input";
    case LSLRR_ERR_CONFIG: return "config";
    case LSLRR_ERR_SPLIT: return "split";
    case LSLRR_ERR_LOAD: return "load";
    case LSLRR_ERR_IO: return "io";
    case LSLRR_ERR_DIVERGENCE: return "divergence";
    case LSLRR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void lslrr_config_default(lslrr_config* cfg) {
  if (!cfg) return;
  const lslrr::SolverConfig d;
  *cfg = lslrr_config{};
  cfg->lambda = d.lambda;
  cfg->alpha = d.alpha;
  cfg->beta = d.beta;
  cfg->m = d.m_param;
  cfg->auto_sigma = 1;
  cfg->auto_theta = 1;
  cfg->w = d.w;
  cfg->mu0 = d.mu0;
  cfg->rho = d.rho;
  cfg->mu_max = d.mu_max;
  cfg->epsilon = d.epsilon;
  cfg->max_iter = d.max_iter;
  cfg->dictionary_learning = d.dictionary_learning ? 1 : 0;
  cfg->column_sum_constraint = d.column_sum_constraint ? 1 : 0;
}

lslrr_status lslrr_config_validate(const lslrr_config* cfg) {
  LSLRR_REQUIRE(cfg);
  return guarded([&] { to_core(*cfg).validate(); });
}

void lslrr_synthetic_spec_default(lslrr_synthetic_spec* spec) {
  if (!spec) return;
  const lslrr::SyntheticSpec d;
  spec->band_count = d.band_count;
  spec->classes = d.classes;
  spec->subspace_dim = d.subspace_dim;
  spec->pixels_per_class = d.pixels_per_class;
  spec->grid_side = d.grid_side;
  spec->noise_sigma = d.noise_sigma;
  spec->corrupt_fraction = d.corrupt_fraction;
  spec->seed = d.seed;
}

/* ---- matrices ---- */

lslrr_status lslrr_matrix_create(size_t rows, size_t cols, const double* row_major,
                                 lslrr_matrix** out) {
  LSLRR_REQUIRE(out && (row_major || rows * cols == 0));
  return new_matrix(from_row_major(rows, cols, row_major), out);
}

lslrr_status lslrr_matrix_load(const char* path, lslrr_matrix** out) {
  LSLRR_REQUIRE(path && out);
  return guarded([&] { *out = new lslrr_matrix{lslrr::io::read_matrix(path)}; });
}

lslrr_status lslrr_matrix_save(const lslrr_matrix* m, const char* path) {
  LSLRR_REQUIRE(m && path);
  return guarded([&] { lslrr::io::write_matrix(path, m->value); });
}

size_t lslrr_matrix_rows(const lslrr_matrix* m) { return m ? static_cast<size_t>(m->value.rows()) : 0; }
size_t lslrr_matrix_cols(const lslrr_matrix* m) { return m ? static_cast<size_t>(m->value.cols()) : 0; }

lslrr_status lslrr_matrix_copy_out(const lslrr_matrix* m, double* row_major, size_t capacity) {
  LSLRR_REQUIRE(m && row_major);
  const auto rows = static_cast<size_t>(m->value.rows()), cols = static_cast<size_t>(m->value.cols());
  if (capacity < rows * cols) return fail(LSLRR_ERR_ARGUMENT, "buffer too small");
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      row_major[r * cols + c] = m->value(static_cast<lslrr::Index>(r), static_cast<lslrr::Index>(c));
    }
  }
  return LSLRR_OK;
}

void lslrr_matrix_free(lslrr_matrix* m) { delete m; }

/* ---- datasets ---- */

lslrr_status lslrr_dataset_create(size_t bands, size_t pixels, const double* spectra_row_major,
                                  const double* coords_row_major, const int* labels,
                                  lslrr_dataset** out) {
  LSLRR_REQUIRE(out && spectra_row_major && coords_row_major);
  return guarded([&] {
    std::vector<int> l;
    if (labels) l.assign(labels, labels + pixels);
    *out = new lslrr_dataset{lslrr::make_dataset(from_row_major(bands, pixels, spectra_row_major),
                                                 from_row_major(2, pixels, coords_row_major),
                                                 std::move(l))};
  });
}

lslrr_status lslrr_dataset_load(const char* spectra_path, const char* coords_path,
                                const char* labels_path, lslrr_dataset** out) {
  LSLRR_REQUIRE(spectra_path && coords_path && out);
  return guarded([&] {
    *out = new lslrr_dataset{
        lslrr::io::read_dataset(spectra_path, coords_path, opt_path(labels_path))};
  });
}

lslrr_status lslrr_dataset_save(const lslrr_dataset* ds, const char* spectra_path,
                                const char* coords_path, const char* labels_path) {
  LSLRR_REQUIRE(ds && spectra_path && coords_path);
  return guarded([&] {
    lslrr::io::write_dataset(ds->value, spectra_path, coords_path, opt_path(labels_path));
  });
}

lslrr_status lslrr_dataset_generate(const lslrr_synthetic_spec* spec, int normalized,
                                    lslrr_dataset** out) {
  LSLRR_REQUIRE(spec && out);
  return guarded([&] {
    const auto core = to_core(*spec);
    *out = new lslrr_dataset{normalized ? lslrr::generate(core) : lslrr::generate_raw(core).dataset};
  });
}

lslrr_status lslrr_dataset_normalize(const lslrr_dataset* ds, lslrr_dataset** out) {
  LSLRR_REQUIRE(ds && out);
  return guarded([&] { *out = new lslrr_dataset{lslrr::normalize(ds->value)}; });
}

size_t lslrr_dataset_bands(const lslrr_dataset* ds) {
  return ds ? static_cast<size_t>(ds->value.band_count()) : 0;
}
size_t lslrr_dataset_pixels(const lslrr_dataset* ds) {
  return ds ? static_cast<size_t>(ds->value.pixel_count()) : 0;
}
int lslrr_dataset_classes(const lslrr_dataset* ds) { return ds ? ds->value.class_count : 0; }

lslrr_status lslrr_dataset_spectra(const lslrr_dataset* ds, lslrr_matrix** out) {
  LSLRR_REQUIRE(ds && out);
  return new_matrix(ds->value.spectra, out);
}

lslrr_status lslrr_dataset_coords(const lslrr_dataset* ds, lslrr_matrix** out) {
  LSLRR_REQUIRE(ds && out);
  return new_matrix(ds->value.coords, out);
}

void lslrr_dataset_free(lslrr_dataset* ds) { delete ds; }

/* ---- splits ---- */

lslrr_status lslrr_split_create(const lslrr_dataset* ds, double train_fraction, uint64_t seed,
                                lslrr_split** out) {
  LSLRR_REQUIRE(ds && out);
  return guarded([&] {
    auto split = lslrr::stratified_split(ds->value, train_fraction, seed);
    std::vector<int> truth;
    for (auto p : split.test_indices) truth.push_back(ds->value.labels[static_cast<size_t>(p)]);
    *out = new lslrr_split{std::move(split), std::move(truth)};
  });
}

lslrr_status lslrr_split_load(const char* path, lslrr_split** out) {
  LSLRR_REQUIRE(path && out);
  return guarded([&] {
    auto f = lslrr::io::read_split(path);
    *out = new lslrr_split{std::move(f.split), std::move(f.test_labels)};
  });
}

lslrr_status lslrr_split_save(const lslrr_split* split, const char* path) {
  LSLRR_REQUIRE(split && path);
  return guarded([&] {
    // Rebuild a sparse label vector covering every referenced pixel.
    lslrr::Index max_pixel = -1;
    for (const auto& cls : split->value.train_indices) {
      for (auto p : cls) max_pixel = std::max(max_pixel, p);
    }
    for (auto p : split->value.test_indices) max_pixel = std::max(max_pixel, p);
    std::vector<int> labels(static_cast<size_t>(max_pixel + 1), 0);
    for (size_t k = 0; k < split->value.test_indices.size(); ++k) {
      labels[static_cast<size_t>(split->value.test_indices[k])] = split->test_labels[k];
    }
    lslrr::io::write_split(path, split->value, labels);
  });
}

int lslrr_split_classes(const lslrr_split* split) { return split ? split->value.class_count() : 0; }
size_t lslrr_split_train_count(const lslrr_split* split) {
  return split ? static_cast<size_t>(split->value.train_count()) : 0;
}
size_t lslrr_split_test_count(const lslrr_split* split) {
  return split ? static_cast<size_t>(split->value.test_count()) : 0;
}

lslrr_status lslrr_split_class_sizes(const lslrr_split* split, size_t* out, size_t capacity) {
  LSLRR_REQUIRE(split && out);
  const auto& sizes = split->value.class_sizes;
  if (capacity < sizes.size()) return fail(LSLRR_ERR_ARGUMENT, "buffer too small");
  for (size_t k = 0; k < sizes.size(); ++k) out[k] = static_cast<size_t>(sizes[k]);
  return LSLRR_OK;
}

lslrr_status lslrr_split_test_labels(const lslrr_split* split, int* out, size_t capacity) {
  LSLRR_REQUIRE(split && out);
  if (capacity < split->test_labels.size()) return fail(LSLRR_ERR_ARGUMENT, "buffer too small");
  std::copy(split->test_labels.begin(), split->test_labels.end(), out);
  return LSLRR_OK;
}

void lslrr_split_free(lslrr_split* split) { delete split; }

/* ---- matrices for inspection, solve ---- */

lslrr_status lslrr_build_matrices(const lslrr_dataset* ds, const lslrr_split* split,
                                  const lslrr_config* cfg, lslrr_matrix** locality,
                                  lslrr_matrix** structure) {
  LSLRR_REQUIRE(ds && split && cfg && locality && structure);
  return guarded([&] {
    auto core = to_core(*cfg);
    const auto normalized = lslrr::normalize(ds->value);
    // Always materialize Q here, even when beta == 0.
    if (core.beta == 0.0) core.beta = 1.0;
    auto p = lslrr::prepare_problem(normalized, split->value, core);
    auto m = std::make_unique<lslrr_matrix>(lslrr_matrix{std::move(p.instance.M)});
    auto q = std::make_unique<lslrr_matrix>(lslrr_matrix{std::move(p.instance.Q)});
    *locality = m.release();
    *structure = q.release();
  });
}

lslrr_status lslrr_solve(const lslrr_dataset* ds, const lslrr_split* split,
                         const lslrr_config* cfg, lslrr_solution** out) {
  LSLRR_REQUIRE(ds && split && cfg && out);
  return guarded([&] {
    const auto core = to_core(*cfg);
    const auto normalized = lslrr::normalize(ds->value);
    const auto p = lslrr::prepare_problem(normalized, split->value, core);
    *out = new lslrr_solution{lslrr::solve_lslrr(p.instance, core)};
  });
}

int lslrr_solution_converged(const lslrr_solution* sol) { return sol && sol->value.converged ? 1 : 0; }
int lslrr_solution_iterations(const lslrr_solution* sol) { return sol ? sol->value.iterations_used : 0; }

lslrr_status lslrr_solution_z(const lslrr_solution* sol, lslrr_matrix** out) {
  LSLRR_REQUIRE(sol && out);
  return new_matrix(sol->value.Z, out);
}
lslrr_status lslrr_solution_e(const lslrr_solution* sol, lslrr_matrix** out) {
  LSLRR_REQUIRE(sol && out);
  return new_matrix(sol->value.E, out);
}
lslrr_status lslrr_solution_d(const lslrr_solution* sol, lslrr_matrix** out) {
  LSLRR_REQUIRE(sol && out);
  return new_matrix(sol->value.D, out);
}

size_t lslrr_solution_trace_length(const lslrr_solution* sol) {
  return sol ? sol->value.history.size() : 0;
}

lslrr_status lslrr_solution_trace_at(const lslrr_solution* sol, size_t index,
                                     lslrr_residuals* out) {
  LSLRR_REQUIRE(sol && out);
  if (index >= sol->value.history.size()) return fail(LSLRR_ERR_ARGUMENT, "trace index out of range");
  const auto& rec = sol->value.history[index];
  *out = lslrr_residuals{rec.iteration,
                         rec.mu,
                         rec.residuals.reconstruction,
                         rec.residuals.z_minus_j,
                         rec.residuals.h_minus_z,
                         rec.residuals.dictionary_change,
                         rec.residuals.column_sum};
  return LSLRR_OK;
}

lslrr_status lslrr_solution_trace_save(const lslrr_solution* sol, const char* path) {
  LSLRR_REQUIRE(sol && path);
  return guarded([&] { lslrr::io::write_file_atomic(path, lslrr::io::encode_trace(sol->value.history)); });
}

void lslrr_solution_free(lslrr_solution* sol) { delete sol; }

/* ---- classification and metrics ---- */

lslrr_status lslrr_classify(const lslrr_matrix* z, const size_t* class_sizes, size_t class_count,
                            int* labels_out, size_t count) {
  LSLRR_REQUIRE(z && class_sizes && labels_out);
  return guarded([&] {
    if (count > static_cast<size_t>(z->value.cols())) {
      throw lslrr::InvalidInputError("representation has fewer columns than requested labels");
    }
    std::vector<lslrr::Index> sizes(class_sizes, class_sizes + class_count);
    const auto labels =
        lslrr::assign_labels(z->value.rightCols(static_cast<lslrr::Index>(count)), sizes);
    std::copy(labels.begin(), labels.end(), labels_out);
  });
}

lslrr_status lslrr_labels_load(const char* path, int** labels, size_t* count) {
  LSLRR_REQUIRE(path && labels && count);
  return guarded([&] {
    const auto v = lslrr::io::read_labels(path);
    auto buf = std::make_unique<int[]>(v.size() ? v.size() : 1);
    std::copy(v.begin(), v.end(), buf.get());
    *count = v.size();
    *labels = buf.release();
  });
}

lslrr_status lslrr_labels_save(const char* path, const int* labels, size_t count) {
  LSLRR_REQUIRE(path && (labels || count == 0));
  return guarded([&] { lslrr::io::write_labels(path, std::vector<int>(labels, labels + count)); });
}

void lslrr_labels_free(int* labels) { delete[] labels; }

lslrr_status lslrr_evaluate(const int* predicted, const int* truth, size_t count, int class_count,
                            lslrr_report** out) {
  LSLRR_REQUIRE(out && ((predicted && truth) || count == 0));
  return guarded([&] {
    *out = new lslrr_report{lslrr::evaluate(std::vector<int>(predicted, predicted + count),
                                            std::vector<int>(truth, truth + count), class_count)};
  });
}

double lslrr_report_overall_accuracy(const lslrr_report* r) { return r ? r->value.overall_accuracy : NAN; }
double lslrr_report_average_accuracy(const lslrr_report* r) { return r ? r->value.average_accuracy : NAN; }
double lslrr_report_kappa(const lslrr_report* r) { return r ? r->value.kappa : NAN; }
int lslrr_report_classes(const lslrr_report* r) {
  return r ? static_cast<int>(r->value.confusion.rows()) : 0;
}

double lslrr_report_class_accuracy(const lslrr_report* r, int class_id) {
  if (!r || class_id < 1 || class_id > lslrr_report_classes(r)) return NAN;
  return r->value.per_class_accuracy[static_cast<size_t>(class_id - 1)];
}

long lslrr_report_confusion(const lslrr_report* r, int true_class, int predicted_class) {
  const int c = lslrr_report_classes(r);
  if (!r || true_class < 1 || true_class > c || predicted_class < 1 || predicted_class > c) return -1;
  return r->value.confusion(true_class - 1, predicted_class - 1);
}

void lslrr_report_free(lslrr_report* r) { delete r; }

lslrr_status lslrr_write_classification_map(const int* labels, size_t rows, size_t cols,
                                            const char* path) {
  LSLRR_REQUIRE(path && (labels || rows * cols == 0));
  return guarded([&] {
    lslrr::io::write_classification_map(std::vector<int>(labels, labels + rows * cols), rows, cols,
                                        path);
  });
}

/* ---- end-to-end runs ---- */

namespace {

lslrr_status start_run(const lslrr::RunRequest& request, lslrr_run** out) {
  return guarded([&] {
    auto run = std::make_unique<lslrr_run>();
    run->value = lslrr::run_pipeline(request);
    run->report.value = run->value.result.report;
    run->solution.value = run->value.result.solution;
    *out = run.release();
  });
}

}  // namespace

lslrr_status lslrr_run_synthetic(const lslrr_synthetic_spec* spec, double train_fraction,
                                 uint64_t split_seed, const lslrr_config* cfg, lslrr_run** out) {
  LSLRR_REQUIRE(spec && cfg && out);
  lslrr::RunRequest r;
  r.source = lslrr::RunRequest::Source::kSynthetic;
  r.synthetic = to_core(*spec);
  r.train_fraction = train_fraction;
  r.split_seed = split_seed;
  r.config = to_core(*cfg);
  return start_run(r, out);
}

lslrr_status lslrr_run_files(const char* spectra_path, const char* coords_path,
                             const char* labels_path, double train_fraction, uint64_t split_seed,
                             const lslrr_config* cfg, lslrr_run** out) {
  LSLRR_REQUIRE(spectra_path && coords_path && labels_path && cfg && out);
  lslrr::RunRequest r;
  r.source = lslrr::RunRequest::Source::kFiles;
  r.spectra_path = spectra_path;
  r.coords_path = coords_path;
  r.labels_path = labels_path;
  r.train_fraction = train_fraction;
  r.split_seed = split_seed;
  r.config = to_core(*cfg);
  return start_run(r, out);
}

lslrr_status lslrr_run_from_manifest(const char* manifest_path, lslrr_run** out) {
  LSLRR_REQUIRE(manifest_path && out);
  lslrr::Manifest recorded;
  lslrr::RunRequest request;
  const lslrr_status parsed = guarded([&] {
    recorded = lslrr::Manifest::parse(lslrr::io::read_file(manifest_path), manifest_path);
    request = lslrr::request_from_manifest(recorded);
  });
  if (parsed != LSLRR_OK) return parsed;

  lslrr_run* run = nullptr;
  const lslrr_status status = start_run(request, &run);
  if (status != LSLRR_OK) return status;
  for (const char* key : {"digest.spectra", "digest.coords", "digest.labels"}) {
    if (run->value.manifest.get(key) != recorded.get(key)) {
      lslrr_run_free(run);
      return fail(LSLRR_ERR_LOAD, std::string(manifest_path) + ": " + key +
                                      " differs from the recorded run");
    }
  }
  *out = run;
  return LSLRR_OK;
}

lslrr_status lslrr_run_save_manifest(const lslrr_run* run, const char* path) {
  LSLRR_REQUIRE(run && path);
  return guarded([&] { lslrr::io::write_file_atomic(path, run->value.manifest.encode()); });
}

lslrr_status lslrr_run_save_map(const lslrr_run* run, const char* path) {
  LSLRR_REQUIRE(run && path);
  return guarded([&] {
    lslrr::io::write_classification_map(run->value.label_map,
                                        static_cast<size_t>(run->value.map_rows),
                                        static_cast<size_t>(run->value.map_cols), path);
  });
}

const lslrr_report* lslrr_run_report(const lslrr_run* run) { return run ? &run->report : nullptr; }
const lslrr_solution* lslrr_run_solution(const lslrr_run* run) {
  return run ? &run->solution : nullptr;
}

void lslrr_run_free(lslrr_run* run) { delete run; }

}  // extern "C"
