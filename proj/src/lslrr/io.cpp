#include "lslrr/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lslrr/error.hpp"

namespace lslrr::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  auto bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xFFu));
    bits >>= 8;
  }
}

template <typename T>
T get_le(const std::string& in, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    bits = (bits << 8) | static_cast<unsigned char>(in[offset + i]);
  }
  return std::bit_cast<T>(bits);
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string hex(const unsigned char* data, unsigned len) {
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) {
    s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(data[i]);
  }
  return s.str();
}

std::string sha256(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 digest failed");
  }
  return hex(md.data(), len);
}

}  // namespace

std::string encode_matrix(const Matrix& m) {
  std::string out(kMatrixMagic, sizeof(kMatrixMagic));
  put_le(out, kMatrixVersion);
  put_le(out, kDtypeF64);
  put_le(out, static_cast<std::uint64_t>(m.rows()));
  put_le(out, static_cast<std::uint64_t>(m.cols()));
  out.reserve(kMatrixHeaderBytes + static_cast<std::size_t>(m.size()) * 8);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) put_le(out, m(r, c));
  }
  return out;
}

Matrix decode_matrix(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < kMatrixHeaderBytes) {
    throw LoadError(origin, bytes.size(), "file shorter than the 32-byte header");
  }
  if (std::memcmp(bytes.data(), kMatrixMagic, sizeof(kMatrixMagic)) != 0) {
    throw LoadError(origin, 0, "bad magic, expected LSLRRMAT");
  }
  const auto version = get_le<std::uint32_t>(bytes, 8);
  if (version != kMatrixVersion) {
    throw LoadError(origin, 8, "unsupported version " + std::to_string(version));
  }
  const auto dtype = get_le<std::uint32_t>(bytes, 12);
  if (dtype != kDtypeF64) throw LoadError(origin, 12, "unsupported dtype " + std::to_string(dtype));
  const auto rows = get_le<std::uint64_t>(bytes, 16);
  const auto cols = get_le<std::uint64_t>(bytes, 24);
  const std::uint64_t payload = bytes.size() - kMatrixHeaderBytes;
  if (cols != 0 && rows > payload / 8 / cols) {
    throw LoadError(origin, bytes.size(), "payload truncated");
  }
  if (payload != rows * cols * 8) {
    throw LoadError(origin, bytes.size(),
                    "payload is " + std::to_string(payload) + " bytes, header implies " +
                        std::to_string(rows * cols * 8));
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t offset = kMatrixHeaderBytes;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c, offset += 8) m(r, c) = get_le<double>(bytes, offset);
  }
  return m;
}

void write_matrix_file(const fs::path& path, const Matrix& m) {
  write_file_atomic(path, encode_matrix(m));
}

Matrix read_matrix_file(const fs::path& path) { return decode_matrix(read_file(path), path.string()); }

Matrix parse_matrix_csv(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= body.size()) {
      const auto comma = body.find(',', start);
      const auto field = trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - start));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw LoadError(origin, line_no, "cannot parse number '" + std::string(field) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw LoadError(origin, line_no,
                      "row has " + std::to_string(row.size()) + " fields, expected " +
                          std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), rows.empty() ? 0 : static_cast<Index>(rows[0].size()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  return m;
}

Matrix read_matrix_csv(const fs::path& path) { return parse_matrix_csv(read_file(path), path.string()); }

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  std::string out;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      out += format_double(m(r, c));
    }
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

Matrix read_matrix(const fs::path& path) {
  return path.extension() == ".csv" ? read_matrix_csv(path) : read_matrix_file(path);
}

void write_matrix(const fs::path& path, const Matrix& m) {
  if (path.extension() == ".csv") {
    write_matrix_csv(path, m);
  } else {
    write_matrix_file(path, m);
  }
}

std::vector<int> read_labels(const fs::path& path) {
  const std::string text = read_file(path);
  std::vector<int> labels;
  std::size_t line_no = 1, start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool end = i == text.size();
    if (!end && text[i] != ',' && text[i] != '\n') continue;
    const auto field = trim(std::string_view(text).substr(start, i - start));
    if (!field.empty()) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw LoadError(path.string(), line_no, "label '" + std::string(field) + "' is not an integer");
      }
      labels.push_back(v);
    }
    if (!end && text[i] == '\n') ++line_no;
    start = i + 1;
  }
  return labels;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + "\n";
  write_file_atomic(path, out);
}

PixelDataset read_dataset(const fs::path& spectra, const fs::path& coords, const fs::path& labels) {
  Matrix s = read_matrix(spectra);
  Matrix c = read_matrix(coords);
  std::vector<int> l;
  if (!labels.empty()) l = read_labels(labels);
  if (c.rows() != 2) {
    throw LoadError(coords.string(), 0, "coords must have 2 rows, got " + std::to_string(c.rows()));
  }
  if (c.cols() != s.cols()) {
    throw LoadError(coords.string(), 0,
                    "coords has " + std::to_string(c.cols()) + " columns, spectra has " +
                        std::to_string(s.cols()));
  }
  if (!l.empty() && static_cast<Index>(l.size()) != s.cols()) {
    throw LoadError(labels.string(), 0,
                    "expected " + std::to_string(s.cols()) + " labels, got " + std::to_string(l.size()));
  }
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] < 0) throw LoadError(labels.string(), i + 1, "negative label");
  }
  return make_dataset(std::move(s), std::move(c), std::move(l));
}

void write_dataset(const PixelDataset& ds, const fs::path& spectra, const fs::path& coords,
                   const fs::path& labels) {
  write_matrix(spectra, ds.spectra);
  write_matrix(coords, ds.coords);
  if (!labels.empty()) write_labels(labels, ds.labels);
}

void write_split(const fs::path& path, const Split& split, const std::vector<int>& dataset_labels) {
  auto label_of = [&](Index p) {
    if (p < 0 || static_cast<std::size_t>(p) >= dataset_labels.size()) {
      throw InvalidInputError("split pixel " + std::to_string(p) + " has no label");
    }
    return dataset_labels[static_cast<std::size_t>(p)];
  };
  std::string out;
  for (std::size_t l = 0; l < split.train_indices.size(); ++l) {
    for (Index p : split.train_indices[l]) {
      out += std::to_string(p) + "," + std::to_string(l + 1) + ",1\n";
    }
  }
  for (Index p : split.test_indices) out += std::to_string(p) + "," + std::to_string(label_of(p)) + ",0\n";
  write_file_atomic(path, out);
}

SplitFile read_split(const fs::path& path) {
  const Matrix rows = read_matrix_csv(path);
  if (rows.rows() > 0 && rows.cols() != 3) {
    throw LoadError(path.string(), 1, "split lines need 3 fields: pixel,label,is_train");
  }
  SplitFile f;
  int c = 0;
  for (Index r = 0; r < rows.rows(); ++r) {
    if (rows(r, 0) != std::floor(rows(r, 0)) || rows(r, 1) != std::floor(rows(r, 1)) ||
        rows(r, 0) < 0 || rows(r, 1) < 0 || (rows(r, 2) != 0 && rows(r, 2) != 1)) {
      throw LoadError(path.string(), static_cast<std::size_t>(r + 1), "malformed split line");
    }
    c = std::max(c, static_cast<int>(rows(r, 1)));
  }
  f.split.train_indices.resize(static_cast<std::size_t>(c));
  f.split.class_sizes.assign(static_cast<std::size_t>(c), 0);
  int last_train_class = 0;
  bool seen_test = false;
  for (Index r = 0; r < rows.rows(); ++r) {
    const auto pixel = static_cast<Index>(rows(r, 0));
    const int label = static_cast<int>(rows(r, 1));
    if (rows(r, 2) == 1) {
      if (seen_test || label < last_train_class || label == 0) {
        throw LoadError(path.string(), static_cast<std::size_t>(r + 1),
                        "training lines must precede test lines in class order");
      }
      last_train_class = label;
      f.split.train_indices[static_cast<std::size_t>(label - 1)].push_back(pixel);
      ++f.split.class_sizes[static_cast<std::size_t>(label - 1)];
    } else {
      seen_test = true;
      f.split.test_indices.push_back(pixel);
      f.test_labels.push_back(label);
    }
  }
  return f;
}

std::string encode_classification_map(const std::vector<int>& labels, std::size_t rows,
                                      std::size_t cols) {
  static constexpr std::array<std::array<unsigned char, 3>, 17> kPalette{{
      {0, 0, 0},       {230, 25, 75},   {60, 180, 75},  {255, 225, 25}, {0, 130, 200},
      {245, 130, 48},  {145, 30, 180},  {70, 240, 240}, {240, 50, 230}, {210, 245, 60},
      {250, 190, 212}, {0, 128, 128},   {220, 190, 255}, {170, 110, 40}, {255, 250, 200},
      {128, 0, 0},     {170, 255, 195},
  }};
  if (labels.size() != rows * cols) {
    throw InvalidInputError("map needs " + std::to_string(rows * cols) + " labels, got " +
                            std::to_string(labels.size()));
  }
  std::string out = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  for (int l : labels) {
    if (l < 0) throw InvalidInputError("negative label in classification map");
    const auto& rgb = kPalette[l == 0 ? 0 : static_cast<std::size_t>((l - 1) % 16 + 1)];
    out.append(reinterpret_cast<const char*>(rgb.data()), 3);
  }
  return out;
}

void write_classification_map(const std::vector<int>& labels, std::size_t rows, std::size_t cols,
                              const fs::path& path) {
  write_file_atomic(path, encode_classification_map(labels, rows, cols));
}

std::string encode_trace(const std::vector<IterationRecord>& history) {
  std::string out = "iteration,mu,reconstruction,z_minus_j,h_minus_z,dictionary_change,column_sum\n";
  for (const auto& rec : history) {
    const auto& r = rec.residuals;
    out += std::to_string(rec.iteration) + "," + format_double(rec.mu) + "," +
           format_double(r.reconstruction) + "," + format_double(r.z_minus_j) + "," +
           format_double(r.h_minus_z) + "," + format_double(r.dictionary_change) + "," +
           format_double(r.column_sum) + "\n";
  }
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string digest(const Matrix& m) { return sha256(encode_matrix(m)); }

std::string digest(const std::vector<int>& labels) {
  std::string bytes;
  for (int l : labels) put_le(bytes, static_cast<std::uint32_t>(l));
  return sha256(bytes);
}

}  // namespace lslrr::io
