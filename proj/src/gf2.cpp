#include "nuimlc/gf2.hpp"

#include <stdexcept>

namespace nuimlc {

std::vector<std::size_t> gf2_rref(BitMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && !m.get(pivot, col)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(row, pivot);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != row && m.get(r, col)) m.xor_rows(r, row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t gf2_rank(BitMatrix m) { return gf2_rref(m).size(); }

NullSpace gf2_null_space(const BitMatrix& m) {
  BitMatrix r = m;
  const std::vector<std::size_t> pivots = gf2_rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;

  NullSpace ns;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) ns.free_columns.push_back(c);
  }
  ns.basis = BitMatrix(ns.free_columns.size(), m.cols());
  for (std::size_t j = 0; j < ns.free_columns.size(); ++j) {
    const std::size_t fc = ns.free_columns[j];
    ns.basis.set(j, fc, true);
    // pivot variables solve row i: x_{pivot_i} = sum of free entries in row i
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (r.get(i, fc)) ns.basis.set(j, pivots[i], true);
    }
  }
  return ns;
}

std::vector<std::uint8_t> gf2_vecmat(const std::vector<std::uint8_t>& x, const BitMatrix& m) {
  if (x.size() != m.rows()) throw std::invalid_argument("gf2_vecmat: length mismatch");
  std::vector<std::uint64_t> acc(m.words_per_row(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (x[r] & 1u) m.xor_row_into(r, acc);
  }
  std::vector<std::uint8_t> out(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) out[c] = (acc[c / 64] >> (c % 64)) & 1u;
  return out;
}

std::vector<std::uint8_t> gf2_matvec(const BitMatrix& m, const std::vector<std::uint8_t>& y) {
  if (y.size() != m.cols()) throw std::invalid_argument("gf2_matvec: length mismatch");
  std::vector<std::uint64_t> packed(m.words_per_row(), 0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (y[c] & 1u) packed[c / 64] |= std::uint64_t{1} << (c % 64);
  }
  std::vector<std::uint8_t> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    int parity = 0;
    for (std::size_t w = 0; w < packed.size(); ++w) {
      parity ^= __builtin_parityll(m.row_word(r, w) & packed[w]);
    }
    out[r] = static_cast<std::uint8_t>(parity);
  }
  return out;
}

}  // namespace nuimlc
