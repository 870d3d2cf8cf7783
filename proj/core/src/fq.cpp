#include "eposets/fq.hpp"

#include <array>
#include <cstring>

namespace eposets {

namespace {

// Per-q inverse tables, built on first use. q < 256 and prime.
const std::uint8_t* inverse_table(int q) {
  static std::array<std::vector<std::uint8_t>, 256> tables;
  auto& tab = tables[static_cast<size_t>(q)];
  if (tab.empty()) {
    tab.assign(static_cast<size_t>(q), 0);
    for (int a = 1; a < q; ++a)
      for (int b = 1; b < q; ++b)
        if (a * b % q == 1) { tab[static_cast<size_t>(a)] = static_cast<std::uint8_t>(b); break; }
  }
  return tab.data();
}

int rref_in_place(int q, int cols, std::vector<std::uint8_t>& m) {
  const std::uint8_t* inv = inverse_table(q);
  int rows = cols == 0 ? 0 : static_cast<int>(m.size()) / cols;
  auto at = [&](int r, int c) -> std::uint8_t& { return m[static_cast<size_t>(r) * cols + c]; };
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int pivot = -1;
    for (int r = pr; r < rows; ++r)
      if (at(r, pc) != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != pr)
      for (int c = 0; c < cols; ++c) std::swap(at(pivot, c), at(pr, c));
    std::uint8_t s = inv[at(pr, pc)];
    if (s != 1)
      for (int c = pc; c < cols; ++c) at(pr, c) = static_cast<std::uint8_t>(at(pr, c) * s % q);
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      std::uint8_t f = at(r, pc);
      if (f == 0) continue;
      for (int c = pc; c < cols; ++c)
        at(r, c) = static_cast<std::uint8_t>((at(r, c) + (q - f) * at(pr, c)) % q);
    }
    ++pr;
  }
  m.resize(static_cast<size_t>(pr) * cols);
  return pr;
}

int rank_packed_f2(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::uint64_t r = rows[i];
    for (size_t j = 0; j < i; ++j) {
      std::uint64_t hj = rows[j] & ~(rows[j] - 1);  // lowest set bit of pivot row
      if (r & hj) r ^= rows[j];
    }
    if (r) { rows[static_cast<size_t>(rank)] = r; ++rank; }
    rows[i] = r;
  }
  return rank;
}

std::uint64_t pack_row_f2(const FqMatrix& m, int r) {
  std::uint64_t w = 0;
  for (int c = 0; c < m.cols(); ++c)
    if (m.at(r, c)) w |= (std::uint64_t{1} << c);
  return w;
}

}  // namespace

std::uint8_t fq_inverse(int q, std::uint8_t a) { return inverse_table(q)[a]; }

void FqMatrix::append_row(const std::vector<std::uint8_t>& row) {
  if (static_cast<int>(row.size()) != cols_) throw DimensionMismatchError("FqMatrix row width mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
}

int FqMatrix::reduce() { return rref_in_place(q_, cols_, data_); }

int FqMatrix::rank() const {
  std::vector<std::uint8_t> copy = data_;
  return rref_in_place(q_, cols_, copy);
}

bool FqMatrix::is_canonical() const {
  FqMatrix copy = *this;
  copy.reduce();
  return copy == *this;
}

bool FqMatrix::contains(const FqMatrix& sub) const {
  if (sub.cols() != cols_ || sub.q() != q_) return false;
  FqMatrix stacked = *this;
  stacked.data_.insert(stacked.data_.end(), sub.data_.begin(), sub.data_.end());
  return stacked.rank() == rank();
}

int intersection_dim(const FqMatrix& a, const FqMatrix& b) {
  if (a.q() != b.q() || a.cols() != b.cols())
    throw DimensionMismatchError("intersection_dim: incompatible matrices");
  int stacked_rank;
  if (a.q() == 2 && a.cols() <= 64) {
    std::vector<std::uint64_t> rows;
    rows.reserve(static_cast<size_t>(a.rows() + b.rows()));
    for (int r = 0; r < a.rows(); ++r) rows.push_back(pack_row_f2(a, r));
    for (int r = 0; r < b.rows(); ++r) rows.push_back(pack_row_f2(b, r));
    stacked_rank = rank_packed_f2(std::move(rows));
  } else {
    std::vector<std::uint8_t> m = a.data();
    m.insert(m.end(), b.data().begin(), b.data().end());
    stacked_rank = rref_in_place(a.q(), a.cols(), m);
  }
  return a.rows() + b.rows() - stacked_rank;
}

}  // namespace eposets
