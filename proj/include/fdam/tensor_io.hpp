#pragma once

#include <string>

#include "fdam/tensor.hpp"

namespace fdam {

// Raw tensor file: magic "FDAM", version byte (currently 1), dtype byte
// {f64=0, c128=1}, rank and extents as 64-bit little-endian, then the
// row-major little-endian payload (complex scalars as re,im pairs).
void write_tensor(const std::string& path, const Tensor& t);
void write_tensor(const std::string& path, const ComplexTensor& t);

// Readers throw std::runtime_error naming the defect (bad magic, unsupported
// version, truncated payload with expected vs. actual byte counts, ...).
Tensor read_tensor(const std::string& path);
ComplexTensor read_complex_tensor(const std::string& path);

// Shortest round-trip decimal form of x (std::to_chars); used everywhere a
// double lands in a text file so reruns are byte-identical.
std::string format_double(double x);

// Rank-2 tensor as a plain CSV grid of format_double cells, no header.
void write_csv_matrix(const std::string& path, const Tensor& m);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fdam
