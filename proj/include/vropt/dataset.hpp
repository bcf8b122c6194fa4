#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vropt/linalg.hpp"

namespace vropt {

struct parse_error : std::runtime_error {
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
  explicit parse_error(const std::string& what) : std::runtime_error(what), line_no(0) {}
  std::size_t line_no;
};

// One example a_i: sorted sparse coordinates plus a cached squared norm.
struct SparseRow {
  std::vector<std::uint32_t> indices;  // strictly increasing, 0-based
  std::vector<double> values;          // nonzero, same length as indices
  double squared_norm = 0.0;

  double dot(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * x[indices[k]];
    return s;
  }

  // out += alpha * a_i
  void add_scaled(double alpha, std::span<double> out) const {
    for (std::size_t k = 0; k < indices.size(); ++k) out[indices[k]] += alpha * values[k];
  }

  void recompute_norm() {
    squared_norm = 0.0;
    for (double v : values) squared_norm += v * v;
  }
};

// Immutable after construction; safe to share read-only across threads.
struct SparseDataset {
  std::vector<SparseRow> rows;
  std::vector<double> labels;  // each exactly -1 or +1
  std::size_t dim = 0;

  std::size_t size() const { return rows.size(); }
};

// LIBSVM text: `<label> <idx>:<val> ...`, 1-based indices, '#' comment lines.
// dim is the max index seen or dim_override, whichever is larger. Labels are
// mapped positive -> +1, otherwise -1.
SparseDataset parse_libsvm(std::istream& in, std::size_t dim_override = 0);
SparseDataset parse_libsvm(const std::string& text, std::size_t dim_override = 0);
SparseDataset load_libsvm_file(const std::string& path, std::size_t dim_override = 0);

// Scales every nonzero row to unit Euclidean norm; zero rows pass through.
SparseDataset normalize_rows(SparseDataset ds);

void write_libsvm(const SparseDataset& ds, std::ostream& out);
std::string to_libsvm(const SparseDataset& ds);
void save_libsvm_file(const SparseDataset& ds, const std::string& path);

}  // namespace vropt
