#pragma once

// Dense matrices over a prime field F_q with canonical reduced row echelon
// form. A subspace of F_q^n is identified with the unique strict RREF basis
// of its row space: equal subspaces <=> equal RREF matrices.

#include <cstdint>
#include <vector>

#include "eposets/errors.hpp"

namespace eposets {

/// Row-major matrix over F_q, q prime < 256. Rows are basis vectors.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(int q, int cols) : q_(q), cols_(cols) {}
  FqMatrix(int q, int cols, std::vector<std::uint8_t> data)
      : q_(q), cols_(cols), data_(std::move(data)) {}

  int q() const { return q_; }
  int rows() const { return cols_ == 0 ? 0 : static_cast<int>(data_.size()) / cols_; }
  int cols() const { return cols_; }
  std::uint8_t at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
  std::uint8_t& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  void append_row(const std::vector<std::uint8_t>& row);

  /// In-place reduction to strict RREF; drops zero rows. Returns the rank.
  int reduce();

  /// Rank of the row space (self is left untouched).
  int rank() const;

  /// True iff the matrix is already in strict RREF with no zero rows.
  bool is_canonical() const;

  /// True iff every row of sub lies in this row space.
  bool contains(const FqMatrix& sub) const;

  bool operator==(const FqMatrix& o) const {
    return q_ == o.q_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int q_ = 2;
  int cols_ = 0;
  std::vector<std::uint8_t> data_;
};

/// dim(rowspace(a) ∩ rowspace(b)) = rank a + rank b - rank [a; b].
/// Inputs must be canonical (rank = row count). Bit-packed fast path for q=2.
int intersection_dim(const FqMatrix& a, const FqMatrix& b);

/// Multiplicative inverse in F_q, q prime.
std::uint8_t fq_inverse(int q, std::uint8_t a);

}  // namespace eposets
