#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lslrr/pipeline.hpp"
#include "lslrr/synthetic.hpp"

namespace lslrr {

// Flat key=value record, one pair per line, in insertion order.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;  // LoadError if missing
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string encode() const;
  static Manifest parse(const std::string& text, const std::string& origin = "<memory>");

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct RunRequest {
  enum class Source { kSynthetic, kFiles };
  Source source = Source::kSynthetic;
  SyntheticSpec synthetic;
  std::string spectra_path, coords_path, labels_path;
  double train_fraction = 0.2;
  std::uint64_t split_seed = 0;
  SolverConfig config;
};

struct RunOutcome {
  Classification result;
  Manifest manifest;
  std::vector<int> label_map;  // row-major, map_rows x map_cols
  Index map_rows = 0;
  Index map_cols = 0;
  double wall_seconds = 0.0;
};

// Loads or generates the data, splits, solves, classifies, evaluates and
// records everything needed to replay the run in the manifest.
RunOutcome run_pipeline(const RunRequest& request);

// Inverse of the manifest's request section. Throws LoadError on missing or
// malformed keys.
RunRequest request_from_manifest(const Manifest& manifest);

// Config echo shared by the manifest writer and reader.
void put_config(Manifest& m, const SolverConfig& cfg);
SolverConfig config_from_manifest(const Manifest& m);

}  // namespace lslrr
