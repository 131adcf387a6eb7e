#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lslrr/data_model.hpp"
#include "lslrr/solver.hpp"

namespace lslrr::io {

namespace fs = std::filesystem;

// Binary matrix container. 32-byte little-endian header
//   "LSLRRMAT" | u32 version = 1 | u32 dtype = 1 (f64) | u64 rows | u64 cols
// followed by rows*cols doubles, row-major, little-endian.
inline constexpr char kMatrixMagic[8] = {'L', 'S', 'L', 'R', 'R', 'M', 'A', 'T'};
inline constexpr std::uint32_t kMatrixVersion = 1;
inline constexpr std::uint32_t kDtypeF64 = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 32;

std::string encode_matrix(const Matrix& m);
Matrix decode_matrix(const std::string& bytes, const std::string& origin = "<memory>");

void write_matrix_file(const fs::path& path, const Matrix& m);
Matrix read_matrix_file(const fs::path& path);

// Comma-separated values, one matrix row per line, no header.
void write_matrix_csv(const fs::path& path, const Matrix& m);
Matrix read_matrix_csv(const fs::path& path);
Matrix parse_matrix_csv(const std::string& text, const std::string& origin = "<memory>");

// Dispatches on extension: ".csv" is text, anything else the binary format.
Matrix read_matrix(const fs::path& path);
void write_matrix(const fs::path& path, const Matrix& m);

// Integers separated by commas and/or newlines. Written one per line.
std::vector<int> read_labels(const fs::path& path);
void write_labels(const fs::path& path, const std::vector<int>& labels);

// spectra d x n, coords 2 x n, labels optional (empty path = none).
PixelDataset read_dataset(const fs::path& spectra, const fs::path& coords,
                          const fs::path& labels = {});
void write_dataset(const PixelDataset& ds, const fs::path& spectra, const fs::path& coords,
                   const fs::path& labels = {});

// Split file: one "pixel,label,is_train" line per selected pixel, training
// pixels first in class order, then test pixels.
struct SplitFile {
  Split split;
  std::vector<int> test_labels;
};
void write_split(const fs::path& path, const Split& split, const std::vector<int>& dataset_labels);
SplitFile read_split(const fs::path& path);

// Binary PPM (P6). Label 0 is black; labels 1..16 map onto a fixed palette,
// larger labels wrap around it.
std::string encode_classification_map(const std::vector<int>& labels, std::size_t rows,
                                      std::size_t cols);
void write_classification_map(const std::vector<int>& labels, std::size_t rows, std::size_t cols,
                              const fs::path& path);

// Header line "iteration,mu,reconstruction,z_minus_j,h_minus_z,dictionary_change,column_sum",
// then one record per iteration.
std::string encode_trace(const std::vector<IterationRecord>& history);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

// Hex SHA-256 of a matrix in its binary encoding, or of a label list.
std::string digest(const Matrix& m);
std::string digest(const std::vector<int>& labels);

}  // namespace lslrr::io
