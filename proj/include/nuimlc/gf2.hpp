#ifndef NUIMLC_GF2_HPP
#define NUIMLC_GF2_HPP

#include <cstdint>
#include <vector>

namespace nuimlc {

// Dense bit matrix over GF(2), rows packed into 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_(cols == 0 ? 0 : (cols + 63) / 64),
        data_(rows * words_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = data_[r * words_ + c / 64];
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    if (v) w |= mask; else w &= ~mask;
  }
  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  void xor_rows(std::size_t dst, std::size_t src) {
    std::uint64_t* d = &data_[dst * words_];
    const std::uint64_t* s = &data_[src * words_];
    for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
  }
  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t w = 0; w < words_; ++w) std::swap(data_[r1 * words_ + w], data_[r2 * words_ + w]);
  }

  // XOR this row into a packed accumulator of the same width.
  void xor_row_into(std::size_t r, std::vector<std::uint64_t>& acc) const {
    const std::uint64_t* s = &data_[r * words_];
    for (std::size_t w = 0; w < words_; ++w) acc[w] ^= s[w];
  }

  std::size_t words_per_row() const { return words_; }
  std::uint64_t row_word(std::size_t r, std::size_t w) const { return data_[r * words_ + w]; }

  bool operator==(const BitMatrix& other) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> data_;
};

// In-place reduced row echelon form; returns the pivot columns (one per
// independent row), so the rank is pivots.size().
std::vector<std::size_t> gf2_rref(BitMatrix& m);

std::size_t gf2_rank(BitMatrix m);

// Basis of the null space {x : m x^T = 0}, one row per basis vector, plus the
// free columns; basis row j has a 1 at free column j and 0 at the others.
struct NullSpace {
  BitMatrix basis;
  std::vector<std::size_t> free_columns;
};
NullSpace gf2_null_space(const BitMatrix& m);

// y = x * m over GF(2) (x is a bit vector of length m.rows()).
std::vector<std::uint8_t> gf2_vecmat(const std::vector<std::uint8_t>& x, const BitMatrix& m);

// m * y^T over GF(2) (y is a bit vector of length m.cols()).
std::vector<std::uint8_t> gf2_matvec(const BitMatrix& m, const std::vector<std::uint8_t>& y);

}  // namespace nuimlc

#endif  // NUIMLC_GF2_HPP
