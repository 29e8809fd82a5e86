// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "aigsage/spmm.hpp"

namespace aigsage::spmm {

/// Matrix Market coordinate format, "real general" or "pattern general".
CsrMatrix<float> read_matrix_market(std::istream& in);
CsrMatrix<float> read_matrix_market_file(const std::string& path);
void write_matrix_market(const CsrMatrix<float>& m, std::ostream& out);
void write_matrix_market_file(const CsrMatrix<float>& m, const std::string& path);

/// Degree-polarized synthetic matrix: the first ceil(rows*hd_fraction) rows
/// have hd_degree nonzeros, the rest draw a degree from 1..ld_max_degree.
/// Values are uniform in (0,1]. Deterministic per seed.
CsrMatrix<float> make_polarized(std::uint32_t rows, std::uint32_t cols, double hd_fraction,
                                std::uint32_t hd_degree, std::uint32_t ld_max_degree,
                                std::uint64_t seed);

/// Every row has exactly `degree` nonzeros at random columns.
CsrMatrix<float> make_uniform(std::uint32_t rows, std::uint32_t cols, std::uint32_t degree,
                              std::uint64_t seed);

CsrMatrix<float> make_identity(std::uint32_t n);

}  // namespace aigsage::spmm
