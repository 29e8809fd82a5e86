// SPDX-License-Identifier: Apache-2.0
#include "aigsage/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace aigsage::spmm {

namespace {

CsrMatrix<float> from_triplets(std::uint32_t rows, std::uint32_t cols,
                               std::vector<std::tuple<std::uint32_t, std::uint32_t, float>>& t) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  CsrMatrix<float> m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& [r, c, v] : t) ++m.row_ptr[r + 1];
  for (std::uint32_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  m.col_idx.reserve(t.size());
  m.values.reserve(t.size());
  for (const auto& [r, c, v] : t) {
    m.col_idx.push_back(c);
    m.values.push_back(v);
  }
  return m;
}

}  // namespace

CsrMatrix<float> read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error("MatrixMarket: missing banner");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate")
    throw std::runtime_error("MatrixMarket: only coordinate matrices supported");
  if (field != "real" && field != "pattern" && field != "integer")
    throw std::runtime_error("MatrixMarket: unsupported field " + field);
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";

  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  std::uint64_t rows, cols, entries;
  if (!(header >> rows >> cols >> entries)) throw std::runtime_error("MatrixMarket: bad size line");

  std::vector<std::tuple<std::uint32_t, std::uint32_t, float>> t;
  t.reserve(entries);
  for (std::uint64_t i = 0; i < entries; ++i) {
    std::uint64_t r, c;
    float v = 1.0f;
    if (!(in >> r >> c)) throw std::runtime_error("MatrixMarket: truncated entries");
    if (!pattern && !(in >> v)) throw std::runtime_error("MatrixMarket: truncated entries");
    if (r < 1 || c < 1 || r > rows || c > cols)
      throw std::runtime_error("MatrixMarket: index out of range");
    t.emplace_back(static_cast<std::uint32_t>(r - 1), static_cast<std::uint32_t>(c - 1), v);
    if (symmetric && r != c)
      t.emplace_back(static_cast<std::uint32_t>(c - 1), static_cast<std::uint32_t>(r - 1), v);
  }
  return from_triplets(static_cast<std::uint32_t>(rows), static_cast<std::uint32_t>(cols), t);
}

CsrMatrix<float> read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return read_matrix_market(in);
}

void write_matrix_market(const CsrMatrix<float>& m, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << ' ' << m.cols << ' ' << m.nnz() << '\n';
  for (std::uint32_t r = 0; r < m.rows; ++r)
    for (std::uint64_t e = m.row_ptr[r]; e < m.row_ptr[r + 1]; ++e)
      out << (r + 1) << ' ' << (m.col_idx[e] + 1) << ' ' << m.values[e] << '\n';
}

void write_matrix_market_file(const CsrMatrix<float>& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  write_matrix_market(m, out);
}

namespace {

void fill_random_row(std::vector<std::uint32_t>& cols, std::uint32_t degree, std::uint32_t ncols,
                     std::mt19937_64& rng, std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::uniform_int_distribution<std::uint32_t> pick(0, ncols - 1);
  while (scratch.size() < degree) {
    const std::uint32_t c = pick(rng);
    if (std::find(scratch.begin(), scratch.end(), c) == scratch.end()) scratch.push_back(c);
  }
  std::sort(scratch.begin(), scratch.end());
  cols.insert(cols.end(), scratch.begin(), scratch.end());
}

}  // namespace

CsrMatrix<float> make_polarized(std::uint32_t rows, std::uint32_t cols, double hd_fraction,
                                std::uint32_t hd_degree, std::uint32_t ld_max_degree,
                                std::uint64_t seed) {
  if (hd_degree > cols || ld_max_degree < 1)
    throw std::invalid_argument("make_polarized: bad degree parameters");
  const std::uint32_t hd_rows =
      static_cast<std::uint32_t>(std::min<double>(rows, std::ceil(rows * hd_fraction)));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> val(1e-3f, 1.0f);
  std::uniform_int_distribution<std::uint32_t> ld_deg(1, ld_max_degree);

  CsrMatrix<float> m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t r = 0; r < rows; ++r) {
    const std::uint32_t d = r < hd_rows ? hd_degree : ld_deg(rng);
    fill_random_row(m.col_idx, d, cols, rng, scratch);
    m.row_ptr[r + 1] = m.row_ptr[r] + d;
  }
  m.values.resize(m.col_idx.size());
  for (float& v : m.values) v = val(rng);
  return m;
}

CsrMatrix<float> make_uniform(std::uint32_t rows, std::uint32_t cols, std::uint32_t degree,
                              std::uint64_t seed) {
  if (degree > cols) throw std::invalid_argument("make_uniform: degree exceeds column count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> val(1e-3f, 1.0f);
  CsrMatrix<float> m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<std::uint32_t> scratch;
  for (std::uint32_t r = 0; r < rows; ++r) {
    fill_random_row(m.col_idx, degree, cols, rng, scratch);
    m.row_ptr[r + 1] = m.row_ptr[r] + degree;
  }
  m.values.resize(m.col_idx.size());
  for (float& v : m.values) v = val(rng);
  return m;
}

CsrMatrix<float> make_identity(std::uint32_t n) {
  CsrMatrix<float> m;
  m.rows = m.cols = n;
  m.row_ptr.resize(static_cast<std::size_t>(n) + 1);
  m.col_idx.resize(n);
  m.values.assign(n, 1.0f);
  for (std::uint32_t i = 0; i < n; ++i) {
    m.row_ptr[i] = i;
    m.col_idx[i] = i;
  }
  m.row_ptr[n] = n;
  return m;
}

}  // namespace aigsage::spmm
