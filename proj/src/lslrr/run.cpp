#include "lslrr/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "lslrr/error.hpp"
#include "lslrr/io.hpp"

namespace lslrr {

namespace {

constexpr const char* kFormat = "lslrr-manifest-1";

std::string exact(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw InvalidInputError("manifest keys and values must be single-line, keys without '='");
  }
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) { set(key, exact(value)); }

bool Manifest::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

const std::string& Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw LoadError("manifest", 0, "missing key '" + key + "'");
}

double Manifest::get_double(const std::string& key) const {
  const std::string& s = get(key);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw LoadError("manifest", 0, "key '" + key + "' is not a number: " + s);
  }
  return v;
}

std::int64_t Manifest::get_int(const std::string& key) const {
  const std::string& s = get(key);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw LoadError("manifest", 0, "key '" + key + "' is not an integer: " + s);
  }
  return v;
}

std::string Manifest::encode() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

Manifest Manifest::parse(const std::string& text, const std::string& origin) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw LoadError(origin, line_no, "expected key=value");
    const std::string key = line.substr(0, eq);
    if (m.has(key)) throw LoadError(origin, line_no, "duplicate key '" + key + "'");
    m.entries_.emplace_back(key, line.substr(eq + 1));
  }
  return m;
}

void put_config(Manifest& m, const SolverConfig& cfg) {
  m.set("config.lambda", cfg.lambda);
  m.set("config.alpha", cfg.alpha);
  m.set("config.beta", cfg.beta);
  m.set("config.m", cfg.m_param);
  m.set("config.sigma", cfg.sigma ? exact(*cfg.sigma) : std::string("auto"));
  m.set("config.theta", cfg.theta ? exact(*cfg.theta) : std::string("auto"));
  m.set("config.w", cfg.w);
  m.set("config.mu0", cfg.mu0);
  m.set("config.rho", cfg.rho);
  m.set("config.mu_max", cfg.mu_max);
  m.set("config.epsilon", cfg.epsilon);
  m.set("config.max_iter", std::to_string(cfg.max_iter));
  m.set("config.dictionary_learning", flag(cfg.dictionary_learning));
  m.set("config.column_sum_constraint", flag(cfg.column_sum_constraint));
}

SolverConfig config_from_manifest(const Manifest& m) {
  SolverConfig cfg;
  cfg.lambda = m.get_double("config.lambda");
  cfg.alpha = m.get_double("config.alpha");
  cfg.beta = m.get_double("config.beta");
  cfg.m_param = m.get_double("config.m");
  if (m.get("config.sigma") != "auto") cfg.sigma = m.get_double("config.sigma");
  if (m.get("config.theta") != "auto") cfg.theta = m.get_double("config.theta");
  cfg.w = m.get_double("config.w");
  cfg.mu0 = m.get_double("config.mu0");
  cfg.rho = m.get_double("config.rho");
  cfg.mu_max = m.get_double("config.mu_max");
  cfg.epsilon = m.get_double("config.epsilon");
  cfg.max_iter = static_cast<int>(m.get_int("config.max_iter"));
  cfg.dictionary_learning = m.get_int("config.dictionary_learning") != 0;
  cfg.column_sum_constraint = m.get_int("config.column_sum_constraint") != 0;
  return cfg;
}

RunOutcome run_pipeline(const RunRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  Manifest& m = out.manifest;
  m.set("format", kFormat);

  PixelDataset ds;
  if (request.source == RunRequest::Source::kSynthetic) {
    const SyntheticSpec& s = request.synthetic;
    ds = generate_raw(s).dataset;
    out.map_rows = out.map_cols = s.resolved_grid_side();
    m.set("source", "synthetic");
    m.set("synthetic.band_count", std::to_string(s.band_count));
    m.set("synthetic.classes", std::to_string(s.classes));
    m.set("synthetic.subspace_dim", std::to_string(s.subspace_dim));
    m.set("synthetic.pixels_per_class", std::to_string(s.pixels_per_class));
    m.set("synthetic.grid_side", std::to_string(s.grid_side));
    m.set("synthetic.noise_sigma", s.noise_sigma);
    m.set("synthetic.corrupt_fraction", s.corrupt_fraction);
    m.set("synthetic.seed", std::to_string(s.seed));
  } else {
    ds = io::read_dataset(request.spectra_path, request.coords_path, request.labels_path);
    if (ds.pixel_count() > 0) {
      out.map_rows = static_cast<Index>(std::llround(ds.coords.row(0).maxCoeff())) + 1;
      out.map_cols = static_cast<Index>(std::llround(ds.coords.row(1).maxCoeff())) + 1;
    }
    m.set("source", "files");
    m.set("spectra_path", request.spectra_path);
    m.set("coords_path", request.coords_path);
    m.set("labels_path", request.labels_path);
  }
  m.set("digest.spectra", io::digest(ds.spectra));
  m.set("digest.coords", io::digest(ds.coords));
  m.set("digest.labels", io::digest(ds.labels));
  m.set("split.train_fraction", request.train_fraction);
  m.set("split.seed", std::to_string(request.split_seed));
  put_config(m, request.config);

  const Split split = stratified_split(ds, request.train_fraction, request.split_seed);
  out.result = classify_dataset(ds, split, request.config);

  std::vector<int> pixel_labels(ds.labels.size(), 0);
  for (const auto& cls : split.train_indices) {
    for (Index p : cls) pixel_labels[static_cast<std::size_t>(p)] = ds.labels[static_cast<std::size_t>(p)];
  }
  for (std::size_t k = 0; k < split.test_indices.size(); ++k) {
    pixel_labels[static_cast<std::size_t>(split.test_indices[k])] = out.result.predicted[k];
  }
  out.label_map = label_image(ds.coords, pixel_labels, out.map_rows, out.map_cols);

  const auto& rep = out.result.report;
  m.set("result.sigma", out.result.kernel.sigma);
  m.set("result.theta", out.result.kernel.theta);
  m.set("result.iterations", std::to_string(out.result.solution.iterations_used));
  m.set("result.converged", flag(out.result.solution.converged));
  m.set("result.oa", rep.overall_accuracy);
  m.set("result.aa", rep.average_accuracy);
  m.set("result.kappa", rep.kappa);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.set("result.wall_time_seconds", out.wall_seconds);
  return out;
}

RunRequest request_from_manifest(const Manifest& m) {
  if (m.get("format") != kFormat) throw LoadError("manifest", 0, "unknown format " + m.get("format"));
  RunRequest r;
  const std::string& source = m.get("source");
  if (source == "synthetic") {
    r.source = RunRequest::Source::kSynthetic;
    r.synthetic.band_count = static_cast<int>(m.get_int("synthetic.band_count"));
    r.synthetic.classes = static_cast<int>(m.get_int("synthetic.classes"));
    r.synthetic.subspace_dim = static_cast<int>(m.get_int("synthetic.subspace_dim"));
    r.synthetic.pixels_per_class = static_cast<int>(m.get_int("synthetic.pixels_per_class"));
    r.synthetic.grid_side = static_cast<int>(m.get_int("synthetic.grid_side"));
    r.synthetic.noise_sigma = m.get_double("synthetic.noise_sigma");
    r.synthetic.corrupt_fraction = m.get_double("synthetic.corrupt_fraction");
    r.synthetic.seed = static_cast<std::uint64_t>(m.get_int("synthetic.seed"));
  } else if (source == "files") {
    r.source = RunRequest::Source::kFiles;
    r.spectra_path = m.get("spectra_path");
    r.coords_path = m.get("coords_path");
    r.labels_path = m.get("labels_path");
  } else {
    throw LoadError("manifest", 0, "unknown source '" + source + "'");
  }
  r.train_fraction = m.get_double("split.train_fraction");
  r.split_seed = static_cast<std::uint64_t>(m.get_int("split.seed"));
  r.config = config_from_manifest(m);
  return r;
}

}  // namespace lslrr
