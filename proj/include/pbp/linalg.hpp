#pragma once

#include <optional>

#include "pbp/numeric.hpp"

namespace pbp {

// Dense integer matrix with big-integer entries. Rows are the primary
// objects throughout (lattices are row spans).
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(long rows, long cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static IntMatrix identity(long n);
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);

  long rows() const { return r_; }
  long cols() const { return c_; }
  Int& at(long i, long j) { return a_[static_cast<std::size_t>(i * c_ + j)]; }
  const Int& at(long i, long j) const {
    return a_[static_cast<std::size_t>(i * c_ + j)];
  }
  std::vector<Int> row(long i) const;

  IntMatrix transposed() const;
  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const;

  void swap_rows(long i, long j);
  void negate_row(long i);
  // row i += f * row j
  void add_multiple(long i, long j, const Int& f);

  std::string str() const;

 private:
  long r_ = 0, c_ = 0;
  std::vector<Int> a_;
};

std::vector<Int> mat_vec(const IntMatrix& m, const std::vector<Int>& x);
std::vector<Int> vec_mat(const std::vector<Int>& x, const IntMatrix& m);

// Row-style Hermite normal form. Returns (H, U, Uinv) with U unimodular,
// U*A = H, A = Uinv*H. Convention: pivots are positive and move strictly
// right as rows advance, entries above each pivot are reduced into
// [0, pivot), and zero rows sink to the bottom.
struct HnfResult {
  IntMatrix H, U, Uinv;
  long rank = 0;
};
HnfResult hnf(const IntMatrix& A);

// Basis of the left integer kernel {x : x*A = 0} as rows (may be empty).
IntMatrix int_kernel(const IntMatrix& A);

// Saturation of the row lattice: a basis for (row span tensor Q) cap Z^n.
// Rank of the result equals the rational rank of A.
IntMatrix saturate(const IntMatrix& A);

// Does v lie in the integer row span of H (any matrix, HNF is taken
// internally)? If yes, returns coordinates z with z*A = v.
std::optional<std::vector<Int>> membership(const IntMatrix& A,
                                           const std::vector<Int>& v);

// Reduce v modulo the integer row span of A: the canonical representative
// obtained by subtracting multiples of HNF pivot rows. Two vectors reduce
// equal iff they differ by a lattice element.
std::vector<Int> reduce_mod_lattice(const IntMatrix& A,
                                    const std::vector<Int>& v);

// Rational rank.
long rank(const IntMatrix& A);

// Exact Q-span membership: coefficients x with sum x_i * basis_i = target,
// or nullopt when target is outside the rational span.
std::optional<std::vector<Rat>> rat_membership(
    const std::vector<std::vector<Rat>>& basis, const std::vector<Rat>& target);

// Incremental rational rank tracker: feed candidate rows, keep those that
// grow the rank. Used to pick maximal independent subsets greedily.
class RankTracker {
 public:
  explicit RankTracker(long cols) : cols_(cols) {}
  // Returns true (and absorbs the row) iff it is independent of prior rows.
  bool offer(const std::vector<Int>& row);
  long rank() const { return static_cast<long>(rows_.size()); }

 private:
  long cols_;
  std::vector<std::vector<Rat>> rows_;  // reduced echelon rows
  std::vector<long> pivots_;
};

}  // namespace pbp
