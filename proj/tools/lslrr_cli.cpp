// Command-line front end. Talks to the library through the C API only.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lslrr/lslrr.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kDiverged = 3 };

// Carries a library status up to main().
struct Failure {
  lslrr_status status;
  std::string context;
  std::string detail;
};

void check(lslrr_status s, const std::string& context) {
  if (s != LSLRR_OK) throw Failure{s, context, lslrr_last_error()};
}

int exit_code_for(lslrr_status s) {
  switch (s) {
    case LSLRR_OK: return kOk;
    case LSLRR_ERR_ARGUMENT:
    case LSLRR_ERR_CONFIG: return kUsage;
    case LSLRR_ERR_DIVERGENCE: return kDiverged;
    default: return kData;
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Matrix = std::unique_ptr<lslrr_matrix, Deleter<lslrr_matrix, lslrr_matrix_free>>;
using Dataset = std::unique_ptr<lslrr_dataset, Deleter<lslrr_dataset, lslrr_dataset_free>>;
using Split = std::unique_ptr<lslrr_split, Deleter<lslrr_split, lslrr_split_free>>;
using Solution = std::unique_ptr<lslrr_solution, Deleter<lslrr_solution, lslrr_solution_free>>;
using Report = std::unique_ptr<lslrr_report, Deleter<lslrr_report, lslrr_report_free>>;
using Run = std::unique_ptr<lslrr_run, Deleter<lslrr_run, lslrr_run_free>>;

struct DataPaths {
  std::string dir;
  std::string spectra, coords, labels;

  void add(CLI::App* cmd, bool need_labels) {
    cmd->add_option("--data", dir, "Dataset directory (spectra.mat, coords.mat, labels.txt)");
    cmd->add_option("--spectra", spectra, "Spectra matrix file (bands x pixels)");
    cmd->add_option("--coords", coords, "Coordinate matrix file (2 x pixels)");
    if (need_labels) cmd->add_option("--labels", labels, "Label file, one integer per line");
  }

  void resolve() {
    auto pick = [&](std::string& v, const char* name) {
      if (v.empty() && !dir.empty()) v = (fs::path(dir) / name).string();
    };
    pick(spectra, "spectra.mat");
    pick(coords, "coords.mat");
    pick(labels, "labels.txt");
    if (spectra.empty() || coords.empty()) {
      throw CLI::ValidationError("dataset", "give --data or both --spectra and --coords");
    }
  }

  Dataset load() {
    resolve();
    lslrr_dataset* ds = nullptr;
    check(lslrr_dataset_load(spectra.c_str(), coords.c_str(), labels.empty() ? nullptr : labels.c_str(),
                             &ds),
          "loading dataset");
    return Dataset(ds);
  }
};

struct SolverFlags {
  lslrr_config cfg{};
  double sigma = 0.0, theta = 0.0;
  bool no_dl = false, no_colsum = false;

  SolverFlags() { lslrr_config_default(&cfg); }

  void add(CLI::App* cmd) {
    cmd->add_option("--lambda", cfg.lambda, "Weight of the column-sparse noise term")->capture_default_str();
    cmd->add_option("--alpha", cfg.alpha, "Weight of the locality term")->capture_default_str();
    cmd->add_option("--beta", cfg.beta, "Weight of the structure term")->capture_default_str();
    cmd->add_option("--m", cfg.m, "Spatial weight inside the locality distance")->capture_default_str();
    cmd->add_option("--sigma", sigma, "Kernel width (default: from data)");
    cmd->add_option("--theta", theta, "Kernel cutoff on squared distance (default: from data)");
    cmd->add_option("--w", cfg.w, "Dictionary damping weight in [0,1]")->capture_default_str();
    cmd->add_option("--mu0", cfg.mu0, "Initial penalty")->capture_default_str();
    cmd->add_option("--rho", cfg.rho, "Penalty growth factor")->capture_default_str();
    cmd->add_option("--mu-max", cfg.mu_max, "Penalty cap")->capture_default_str();
    cmd->add_option("--eps", cfg.epsilon, "Convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", cfg.max_iter, "Iteration limit")->capture_default_str();
    cmd->add_flag("--no-dict-learning", no_dl, "Keep the dictionary fixed");
    cmd->add_flag("--no-colsum", no_colsum, "Drop the column-sum constraint");
  }

  lslrr_config finish(CLI::App* cmd) {
    if (cmd->count("--sigma")) {
      cfg.sigma = sigma;
      cfg.auto_sigma = 0;
    }
    if (cmd->count("--theta")) {
      cfg.theta = theta;
      cfg.auto_theta = 0;
    }
    if (no_dl) cfg.dictionary_learning = 0;
    if (no_colsum) cfg.column_sum_constraint = 0;
    check(lslrr_config_validate(&cfg), "solver configuration");
    return cfg;
  }
};

struct SyntheticFlags {
  lslrr_synthetic_spec spec{};
  SyntheticFlags() { lslrr_synthetic_spec_default(&spec); }

  void add(CLI::App* cmd) {
    cmd->add_option("--bands", spec.band_count, "Spectral bands")->capture_default_str();
    cmd->add_option("--classes", spec.classes, "Number of classes")->capture_default_str();
    cmd->add_option("--rank", spec.subspace_dim, "Subspace dimension per class")->capture_default_str();
    cmd->add_option("--per-class", spec.pixels_per_class, "Pixels per class")->capture_default_str();
    cmd->add_option("--grid", spec.grid_side, "Grid side length (0 = smallest fit)")->capture_default_str();
    cmd->add_option("--noise", spec.noise_sigma, "Gaussian noise level")->capture_default_str();
    cmd->add_option("--corrupt", spec.corrupt_fraction, "Fraction of grossly corrupted pixels")
        ->capture_default_str();
    cmd->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  }
};

Split load_split(const std::string& path) {
  lslrr_split* s = nullptr;
  check(lslrr_split_load(path.c_str(), &s), "loading split " + path);
  return Split(s);
}

std::vector<int> load_labels(const std::string& path) {
  int* raw = nullptr;
  size_t n = 0;
  check(lslrr_labels_load(path.c_str(), &raw, &n), "loading labels " + path);
  std::vector<int> out(raw, raw + n);
  lslrr_labels_free(raw);
  return out;
}

std::vector<int> split_test_labels(const lslrr_split* split) {
  std::vector<int> truth(lslrr_split_test_count(split));
  check(lslrr_split_test_labels(split, truth.data(), truth.size()), "reading split labels");
  return truth;
}

void print_report(const lslrr_report* r, std::FILE* out) {
  std::fprintf(out, "oa=%.6f\naa=%.6f\nkappa=%.6f\n", lslrr_report_overall_accuracy(r),
               lslrr_report_average_accuracy(r), lslrr_report_kappa(r));
  for (int c = 1; c <= lslrr_report_classes(r); ++c) {
    std::fprintf(out, "class.%d.accuracy=%.6f\n", c, lslrr_report_class_accuracy(r, c));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank representation classifier for hyperspectral-style pixel data", "lslrr"};
  app.set_version_flag("--version", lslrr_version());
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic labelled dataset");
  SyntheticFlags gen_flags;
  gen_flags.add(gen);
  std::string gen_out;
  bool gen_raw = false;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_flag("--raw", gen_raw, "Skip per-band min-max scaling");

  // split
  auto* split_cmd = app.add_subcommand("split", "Draw a stratified train/test split");
  DataPaths split_data;
  split_data.add(split_cmd, true);
  double split_fraction = 0.2;
  std::uint64_t split_seed = 0;
  std::string split_out;
  split_cmd->add_option("--fraction", split_fraction, "Training fraction per class")->capture_default_str();
  split_cmd->add_option("--seed", split_seed, "Split seed")->capture_default_str();
  split_cmd->add_option("--out", split_out, "Split file to write")->required();

  // qbuild
  auto* qbuild = app.add_subcommand("qbuild", "Write the locality and structure matrices");
  DataPaths q_data;
  q_data.add(qbuild, false);
  SolverFlags q_flags;
  q_flags.add(qbuild);
  std::string q_split, q_m_out, q_q_out;
  qbuild->add_option("--split", q_split, "Split file")->required();
  qbuild->add_option("--m-out", q_m_out, "Locality matrix output")->required();
  qbuild->add_option("--q-out", q_q_out, "Structure matrix output")->required();

  // solve and trace share the same inputs
  DataPaths solve_data, trace_data;
  SolverFlags solve_flags, trace_flags;
  std::string solve_split, solve_z, solve_e, solve_d, solve_trace, trace_split, trace_out;
  auto* solve = app.add_subcommand("solve", "Solve for the representation matrix");
  solve_data.add(solve, false);
  solve_flags.add(solve);
  solve->add_option("--split", solve_split, "Split file")->required();
  solve->add_option("--z-out", solve_z, "Representation output (atoms x samples)")->required();
  solve->add_option("--e-out", solve_e, "Noise matrix output");
  solve->add_option("--d-out", solve_d, "Learned dictionary output");
  solve->add_option("--trace-out", solve_trace, "Residual history CSV");

  auto* trace = app.add_subcommand("trace", "Solve and dump the residual history as CSV");
  trace_data.add(trace, false);
  trace_flags.add(trace);
  trace->add_option("--split", trace_split, "Split file")->required();
  trace->add_option("--out", trace_out, "CSV output (default: stdout)");

  // classify
  auto* classify = app.add_subcommand("classify", "Assign test labels from a representation");
  std::string cl_z, cl_split, cl_out;
  classify->add_option("--z", cl_z, "Representation matrix")->required();
  classify->add_option("--split", cl_split, "Split file the representation was solved on")->required();
  classify->add_option("--out", cl_out, "Predicted labels output")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Report OA, AA and kappa");
  std::string ev_pred, ev_split, ev_truth, ev_out;
  evaluate->add_option("--predicted", ev_pred, "Predicted labels")->required();
  auto* ev_split_opt = evaluate->add_option("--split", ev_split, "Split file holding the true test labels");
  evaluate->add_option("--truth", ev_truth, "True labels file")->excludes(ev_split_opt);
  evaluate->add_option("--out", ev_out, "Report output (default: stdout)");

  // run
  auto* run = app.add_subcommand("run", "End-to-end run writing a manifest and a label map");
  SyntheticFlags run_synth;
  run_synth.add(run);
  DataPaths run_data;
  run_data.add(run, true);
  SolverFlags run_flags;
  run_flags.add(run);
  double run_fraction = 0.2;
  std::uint64_t run_split_seed = 0;
  std::string run_manifest, run_map, run_replay;
  run->add_option("--fraction", run_fraction, "Training fraction per class")->capture_default_str();
  run->add_option("--split-seed", run_split_seed, "Split seed")->capture_default_str();
  run->add_option("--manifest", run_manifest, "Manifest output")->required();
  run->add_option("--map", run_map, "Classification map output (PPM)");
  run->add_option("--replay", run_replay, "Re-run an existing manifest instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fprintf(stderr, "\n%s", app.help().c_str());
    return kUsage;
  }

  try {
    if (*gen) {
      lslrr_dataset* raw = nullptr;
      check(lslrr_dataset_generate(&gen_flags.spec, gen_raw ? 0 : 1, &raw), "generating dataset");
      Dataset ds(raw);
      fs::create_directories(gen_out);
      const auto dir = fs::path(gen_out);
      check(lslrr_dataset_save(ds.get(), (dir / "spectra.mat").c_str(), (dir / "coords.mat").c_str(),
                               (dir / "labels.txt").c_str()),
            "writing dataset");
      std::printf("wrote %zu pixels x %zu bands to %s\n", lslrr_dataset_pixels(ds.get()),
                  lslrr_dataset_bands(ds.get()), gen_out.c_str());
    } else if (*split_cmd) {
      auto ds = split_data.load();
      lslrr_split* raw = nullptr;
      check(lslrr_split_create(ds.get(), split_fraction, split_seed, &raw), "splitting");
      Split s(raw);
      check(lslrr_split_save(s.get(), split_out.c_str()), "writing split");
      std::printf("train=%zu test=%zu\n", lslrr_split_train_count(s.get()), lslrr_split_test_count(s.get()));
    } else if (*qbuild) {
      auto cfg = q_flags.finish(qbuild);
      auto ds = q_data.load();
      auto s = load_split(q_split);
      lslrr_matrix *m = nullptr, *q = nullptr;
      check(lslrr_build_matrices(ds.get(), s.get(), &cfg, &m, &q), "building matrices");
      Matrix mm(m), qq(q);
      check(lslrr_matrix_save(mm.get(), q_m_out.c_str()), "writing " + q_m_out);
      check(lslrr_matrix_save(qq.get(), q_q_out.c_str()), "writing " + q_q_out);
    } else if (*solve || *trace) {
      const bool is_solve = static_cast<bool>(*solve);
      auto cfg = is_solve ? solve_flags.finish(solve) : trace_flags.finish(trace);
      auto ds = (is_solve ? solve_data : trace_data).load();
      auto s = load_split(is_solve ? solve_split : trace_split);
      lslrr_solution* raw = nullptr;
      check(lslrr_solve(ds.get(), s.get(), &cfg, &raw), "solving");
      Solution sol(raw);
      if (is_solve) {
        auto save = [&](lslrr_status (*get)(const lslrr_solution*, lslrr_matrix**), const std::string& path) {
          if (path.empty()) return;
          lslrr_matrix* m = nullptr;
          check(get(sol.get(), &m), "extracting result");
          Matrix owned(m);
          check(lslrr_matrix_save(owned.get(), path.c_str()), "writing " + path);
        };
        save(lslrr_solution_z, solve_z);
        save(lslrr_solution_e, solve_e);
        save(lslrr_solution_d, solve_d);
        if (!solve_trace.empty()) check(lslrr_solution_trace_save(sol.get(), solve_trace.c_str()), "writing trace");
        std::printf("iterations=%d converged=%d\n", lslrr_solution_iterations(sol.get()),
                    lslrr_solution_converged(sol.get()));
      } else if (!trace_out.empty()) {
        check(lslrr_solution_trace_save(sol.get(), trace_out.c_str()), "writing trace");
      } else {
        std::printf("iteration,mu,reconstruction,z_minus_j,h_minus_z,dictionary_change,column_sum\n");
        for (size_t k = 0; k < lslrr_solution_trace_length(sol.get()); ++k) {
          lslrr_residuals r{};
          check(lslrr_solution_trace_at(sol.get(), k, &r), "reading trace");
          std::printf("%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iteration, r.mu, r.reconstruction,
                      r.z_minus_j, r.h_minus_z, r.dictionary_change, r.column_sum);
        }
      }
    } else if (*classify) {
      lslrr_matrix* raw = nullptr;
      check(lslrr_matrix_load(cl_z.c_str(), &raw), "loading " + cl_z);
      Matrix z(raw);
      auto s = load_split(cl_split);
      std::vector<size_t> sizes(static_cast<size_t>(lslrr_split_classes(s.get())));
      check(lslrr_split_class_sizes(s.get(), sizes.data(), sizes.size()), "reading split");
      std::vector<int> labels(lslrr_split_test_count(s.get()));
      check(lslrr_classify(z.get(), sizes.data(), sizes.size(), labels.data(), labels.size()), "classifying");
      check(lslrr_labels_save(cl_out.c_str(), labels.data(), labels.size()), "writing " + cl_out);
    } else if (*evaluate) {
      const auto predicted = load_labels(ev_pred);
      std::vector<int> truth;
      int classes = 0;
      if (!ev_split.empty()) {
        auto s = load_split(ev_split);
        truth = split_test_labels(s.get());
        classes = lslrr_split_classes(s.get());
      } else if (!ev_truth.empty()) {
        truth = load_labels(ev_truth);
      } else {
        throw CLI::ValidationError("evaluate", "give --split or --truth");
      }
      if (truth.size() != predicted.size()) {
        throw Failure{LSLRR_ERR_INVALID_INPUT, "evaluating", "predicted and true label counts differ"};
      }
      lslrr_report* raw = nullptr;
      check(lslrr_evaluate(predicted.data(), truth.data(), truth.size(), classes, &raw), "evaluating");
      Report r(raw);
      if (ev_out.empty()) {
        print_report(r.get(), stdout);
      } else {
        std::FILE* f = std::fopen(ev_out.c_str(), "w");
        if (!f) throw Failure{LSLRR_ERR_IO, "writing report", "cannot open " + ev_out};
        print_report(r.get(), f);
        std::fclose(f);
      }
    } else if (*run) {
      lslrr_run* raw = nullptr;
      if (!run_replay.empty()) {
        check(lslrr_run_from_manifest(run_replay.c_str(), &raw), "replaying " + run_replay);
      } else {
        auto cfg = run_flags.finish(run);
        const bool from_files = !run_data.dir.empty() || !run_data.spectra.empty();
        if (from_files) {
          run_data.resolve();
          check(lslrr_run_files(run_data.spectra.c_str(), run_data.coords.c_str(), run_data.labels.c_str(),
                                run_fraction, run_split_seed, &cfg, &raw),
                "running");
        } else {
          check(lslrr_run_synthetic(&run_synth.spec, run_fraction, run_split_seed, &cfg, &raw), "running");
        }
      }
      Run r(raw);
      check(lslrr_run_save_manifest(r.get(), run_manifest.c_str()), "writing " + run_manifest);
      if (!run_map.empty()) check(lslrr_run_save_map(r.get(), run_map.c_str()), "writing " + run_map);
      print_report(lslrr_run_report(r.get()), stdout);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "lslrr: %s: %s (%s)\n", f.context.c_str(), f.detail.c_str(),
                 lslrr_status_name(f.status));
    return exit_code_for(f.status);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "lslrr: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lslrr: %s\n", e.what());
    return kData;
  }
  return kOk;
}
