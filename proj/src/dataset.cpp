#include "vropt/dataset.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vropt {

namespace {

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

double parse_double(const std::string& tok, std::size_t line_no, const char* what) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    throw parse_error(std::string("malformed ") + what + " '" + tok + "'", line_no);
  return v;
}

}  // namespace

SparseDataset parse_libsvm(std::istream& in, std::size_t dim_override) {
  SparseDataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_index = 0;  // 1-based
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '#') continue;

    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    const double raw_label = parse_double(tok, line_no, "label");

    SparseRow row;
    long long prev_index = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        throw parse_error("malformed feature token '" + tok + "'", line_no);
      const std::string idx_str = tok.substr(0, colon);
      const std::string val_str = tok.substr(colon + 1);

      const char* ib = idx_str.c_str();
      char* ie = nullptr;
      const long long idx = std::strtoll(ib, &ie, 10);
      if (ie != ib + idx_str.size())
        throw parse_error("malformed feature index '" + idx_str + "'", line_no);
      if (idx < 1) throw parse_error("feature index must be >= 1", line_no);
      if (idx <= prev_index)
        throw parse_error("non-increasing feature index " + std::to_string(idx), line_no);
      prev_index = idx;

      const double val = parse_double(val_str, line_no, "feature value");
      if (static_cast<std::size_t>(idx) > max_index) max_index = static_cast<std::size_t>(idx);
      if (val != 0.0) {
        row.indices.push_back(static_cast<std::uint32_t>(idx - 1));
        row.values.push_back(val);
      }
    }
    row.recompute_norm();
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(raw_label > 0.0 ? 1.0 : -1.0);
  }
  if (ds.rows.empty()) throw parse_error("empty dataset");
  ds.dim = std::max(max_index, dim_override);
  return ds;
}

SparseDataset parse_libsvm(const std::string& text, std::size_t dim_override) {
  std::istringstream in(text);
  return parse_libsvm(in, dim_override);
}

SparseDataset load_libsvm_file(const std::string& path, std::size_t dim_override) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  return parse_libsvm(in, dim_override);
}

SparseDataset normalize_rows(SparseDataset ds) {
  for (auto& row : ds.rows) {
    if (row.squared_norm <= 0.0) continue;
    const double inv = 1.0 / std::sqrt(row.squared_norm);
    for (double& v : row.values) v *= inv;
    row.recompute_norm();
  }
  return ds;
}

void write_libsvm(const SparseDataset& ds, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    out << (ds.labels[i] > 0.0 ? "+1" : "-1");
    const SparseRow& row = ds.rows[i];
    for (std::size_t k = 0; k < row.indices.size(); ++k) {
      std::snprintf(buf, sizeof(buf), " %u:%.17g", row.indices[k] + 1, row.values[k]);
      out << buf;
    }
    out << '\n';
  }
}

std::string to_libsvm(const SparseDataset& ds) {
  std::ostringstream out;
  write_libsvm(ds, out);
  return out.str();
}

void save_libsvm_file(const SparseDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write '" + path + "'");
  write_libsvm(ds, out);
}

}  // namespace vropt
