#include "pbp/linalg.hpp"

#include <sstream>

namespace pbp {

IntMatrix IntMatrix::identity(long n) {
  IntMatrix m(n, n);
  for (long i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
  long r = static_cast<long>(rows.size());
  long c = r ? static_cast<long>(rows[0].size()) : 0;
  IntMatrix m(r, c);
  for (long i = 0; i < r; ++i) {
    if (static_cast<long>(rows[static_cast<std::size_t>(i)].size()) != c)
      throw std::domain_error("from_rows: ragged rows");
    for (long j = 0; j < c; ++j)
      m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

std::vector<Int> IntMatrix::row(long i) const {
  std::vector<Int> v(static_cast<std::size_t>(c_));
  for (long j = 0; j < c_; ++j) v[static_cast<std::size_t>(j)] = at(i, j);
  return v;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix m(c_, r_);
  for (long i = 0; i < r_; ++i)
    for (long j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (c_ != o.r_) throw std::domain_error("matmul: shape mismatch");
  IntMatrix m(r_, o.c_);
  for (long i = 0; i < r_; ++i)
    for (long k = 0; k < c_; ++k) {
      const Int& v = at(i, k);
      if (v == 0) continue;
      for (long j = 0; j < o.c_; ++j) m.at(i, j) += v * o.at(k, j);
    }
  return m;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
}

void IntMatrix::swap_rows(long i, long j) {
  if (i == j) return;
  for (long k = 0; k < c_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMatrix::negate_row(long i) {
  for (long k = 0; k < c_; ++k) at(i, k) = -at(i, k);
}

void IntMatrix::add_multiple(long i, long j, const Int& f) {
  if (f == 0) return;
  for (long k = 0; k < c_; ++k) at(i, k) += f * at(j, k);
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  for (long i = 0; i < r_; ++i) {
    os << '[';
    for (long j = 0; j < c_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

std::vector<Int> mat_vec(const IntMatrix& m, const std::vector<Int>& x) {
  if (static_cast<long>(x.size()) != m.cols())
    throw std::domain_error("mat_vec: shape mismatch");
  std::vector<Int> y(static_cast<std::size_t>(m.rows()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j)
      y[static_cast<std::size_t>(i)] += m.at(i, j) * x[static_cast<std::size_t>(j)];
  return y;
}

std::vector<Int> vec_mat(const std::vector<Int>& x, const IntMatrix& m) {
  if (static_cast<long>(x.size()) != m.rows())
    throw std::domain_error("vec_mat: shape mismatch");
  std::vector<Int> y(static_cast<std::size_t>(m.cols()));
  for (long i = 0; i < m.rows(); ++i) {
    const Int& v = x[static_cast<std::size_t>(i)];
    if (v == 0) continue;
    for (long j = 0; j < m.cols(); ++j)
      y[static_cast<std::size_t>(j)] += v * m.at(i, j);
  }
  return y;
}

HnfResult hnf(const IntMatrix& A) {
  HnfResult res{A, IntMatrix::identity(A.rows()), IntMatrix::identity(A.rows()), 0};
  IntMatrix& H = res.H;
  IntMatrix& U = res.U;
  IntMatrix& Ui = res.Uinv;
  long r = 0;
  // Every row operation on H is mirrored on U; the inverse operation is
  // applied to Uinv on the *column* side so that Uinv*U = I throughout.
  auto do_swap = [&](long i, long j) {
    H.swap_rows(i, j);
    U.swap_rows(i, j);
    // column swap on Uinv
    for (long k = 0; k < Ui.rows(); ++k) std::swap(Ui.at(k, i), Ui.at(k, j));
  };
  auto do_neg = [&](long i) {
    H.negate_row(i);
    U.negate_row(i);
    for (long k = 0; k < Ui.rows(); ++k) Ui.at(k, i) = -Ui.at(k, i);
  };
  auto do_add = [&](long i, long j, const Int& f) {
    H.add_multiple(i, j, f);
    U.add_multiple(i, j, f);
    for (long k = 0; k < Ui.rows(); ++k) Ui.at(k, j) -= f * Ui.at(k, i);
  };
  for (long col = 0; col < A.cols() && r < A.rows(); ++col) {
    // Euclidean elimination within the column below row r.
    while (true) {
      long piv = -1;
      for (long i = r; i < H.rows(); ++i) {
        if (H.at(i, col) == 0) continue;
        if (piv < 0 || abs(H.at(i, col)) < abs(H.at(piv, col))) piv = i;
      }
      if (piv < 0) break;
      do_swap(r, piv);
      if (H.at(r, col) < 0) do_neg(r);
      bool cleared = true;
      for (long i = r + 1; i < H.rows(); ++i) {
        if (H.at(i, col) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(),
                   H.at(r, col).get_mpz_t());
        do_add(i, r, -q);
        if (H.at(i, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (H.at(r, col) == 0) continue;
    // Reduce entries above the pivot into [0, pivot).
    for (long i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), H.at(i, col).get_mpz_t(),
                 H.at(r, col).get_mpz_t());
      do_add(i, r, -q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

IntMatrix int_kernel(const IntMatrix& A) {
  HnfResult h = hnf(A);
  // Rows of U beyond the rank map A to zero rows of H.
  std::vector<std::vector<Int>> rows;
  for (long i = h.rank; i < A.rows(); ++i) rows.push_back(h.U.row(i));
  if (rows.empty()) return IntMatrix(0, A.rows());
  return IntMatrix::from_rows(rows);
}

IntMatrix saturate(const IntMatrix& A) {
  // The saturation of the row span of A is the lattice orthogonal to the
  // integer kernel of A^T restricted appropriately; equivalently it is the
  // kernel of the kernel: S = ker_Z( ker_Z(A^T)^T ).
  IntMatrix K = int_kernel(A.transposed());  // rows x with x*A^T=0, i.e. A x=0
  if (K.rows() == 0) {
    // Full column rank: saturation is all of Z^n intersected with the span,
    // which for square/overdetermined full-rank A is Z^n itself only when
    // rank == cols; handle uniformly through the kernel-of-kernel identity
    // with an empty K meaning the span is all of Q^n.
    return IntMatrix::identity(A.cols());
  }
  IntMatrix S = int_kernel(K.transposed());
  // int_kernel returns a basis of {x : x * K^T = 0} = {x : K x = 0}, which
  // is exactly span_Q(rows A) cap Z^n, and the HNF-derived basis is already
  // primitive.
  return S;
}

namespace {
// Solve z * H = v over the integers where H is in row HNF with given rank;
// returns nullopt if no integer solution. On success also zeroes v.
std::optional<std::vector<Int>> solve_against_hnf(const HnfResult& h,
                                                  std::vector<Int> v) {
  std::vector<Int> z(static_cast<std::size_t>(h.H.rows()));
  for (long i = 0; i < h.rank; ++i) {
    long p = 0;
    while (p < h.H.cols() && h.H.at(i, p) == 0) ++p;
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(),
                v[static_cast<std::size_t>(p)].get_mpz_t(),
                h.H.at(i, p).get_mpz_t());
    if (r != 0) return std::nullopt;
    if (q != 0)
      for (long j = 0; j < h.H.cols(); ++j)
        v[static_cast<std::size_t>(j)] -= q * h.H.at(i, j);
    z[static_cast<std::size_t>(i)] = q;
  }
  for (const Int& x : v)
    if (x != 0) return std::nullopt;
  return z;
}
}  // namespace

std::optional<std::vector<Int>> membership(const IntMatrix& A,
                                           const std::vector<Int>& v) {
  if (static_cast<long>(v.size()) != A.cols())
    throw std::domain_error("membership: shape mismatch");
  HnfResult h = hnf(A);
  auto z = solve_against_hnf(h, v);
  if (!z) return std::nullopt;
  // z*H = v and H = U*A, so (z*U)*A = v.
  return vec_mat(*z, h.U);
}

std::vector<Int> reduce_mod_lattice(const IntMatrix& A,
                                    const std::vector<Int>& v) {
  HnfResult h = hnf(A);
  std::vector<Int> w = v;
  for (long i = 0; i < h.rank; ++i) {
    long p = 0;
    while (p < h.H.cols() && h.H.at(i, p) == 0) ++p;
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), w[static_cast<std::size_t>(p)].get_mpz_t(),
               h.H.at(i, p).get_mpz_t());
    if (q != 0)
      for (long j = 0; j < h.H.cols(); ++j)
        w[static_cast<std::size_t>(j)] -= q * h.H.at(i, j);
  }
  return w;
}

long rank(const IntMatrix& A) { return hnf(A).rank; }

bool RankTracker::offer(const std::vector<Int>& row) {
  if (static_cast<long>(row.size()) != cols_)
    throw std::domain_error("RankTracker: shape mismatch");
  std::vector<Rat> v(row.begin(), row.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    long p = pivots_[k];
    if (v[static_cast<std::size_t>(p)] == 0) continue;
    Rat f = v[static_cast<std::size_t>(p)];
    for (long j = 0; j < cols_; ++j)
      v[static_cast<std::size_t>(j)] -= f * rows_[k][static_cast<std::size_t>(j)];
  }
  long p = 0;
  while (p < cols_ && v[static_cast<std::size_t>(p)] == 0) ++p;
  if (p == cols_) return false;
  Rat inv = 1 / v[static_cast<std::size_t>(p)];
  for (long j = 0; j < cols_; ++j) v[static_cast<std::size_t>(j)] *= inv;
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

std::optional<std::vector<Rat>> rat_membership(
    const std::vector<std::vector<Rat>>& basis,
    const std::vector<Rat>& target) {
  const std::size_t d = basis.size();
  const std::size_t n = target.size();
  for (auto& b : basis)
    if (b.size() != n) throw std::domain_error("rat_membership: shape mismatch");
  // Reduced rows alongside their expression in the original basis.
  std::vector<std::vector<Rat>> rows, expr;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Rat> v = basis[i];
    std::vector<Rat> e(d, Rat(0));
    e[i] = 1;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const Rat& f = v[pivots[t]];
      if (f == 0) continue;
      Rat g = f;
      for (std::size_t j = 0; j < n; ++j) v[j] -= g * rows[t][j];
      for (std::size_t j = 0; j < d; ++j) e[j] -= g * expr[t][j];
    }
    std::size_t p = 0;
    while (p < n && v[p] == 0) ++p;
    if (p == n) continue;  // dependent element; harmless
    Rat inv = 1 / v[p];
    for (std::size_t j = 0; j < n; ++j) v[j] *= inv;
    for (std::size_t j = 0; j < d; ++j) e[j] *= inv;
    rows.push_back(std::move(v));
    expr.push_back(std::move(e));
    pivots.push_back(p);
  }
  std::vector<Rat> v = target;
  std::vector<Rat> comb(d, Rat(0));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const Rat& f = v[pivots[t]];
    if (f == 0) continue;
    Rat g = f;
    for (std::size_t j = 0; j < n; ++j) v[j] -= g * rows[t][j];
    for (std::size_t j = 0; j < d; ++j) comb[j] += g * expr[t][j];
  }
  for (std::size_t j = 0; j < n; ++j)
    if (v[j] != 0) return std::nullopt;
  return comb;
}

}  // namespace pbp
