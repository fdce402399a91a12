#pragma once

#include "pbp/laurent.hpp"

namespace pbp {

// Thrown by series_divide when a convolution step fails to divide exactly.
struct SeriesDivideError : std::runtime_error {
  long failing_index;  // q-index (relative to the quotient offset) that failed
  explicit SeriesDivideError(long n)
      : std::runtime_error("series_divide: nonzero remainder at q-index " +
                           std::to_string(n)),
        failing_index(n) {}
};

// A truncated Laurent series in q with LaurentPoly coefficients:
//   q^offset * (c[0] + c[1] q + ... + c[L] q^L),
// where offset is rational (raw eta/theta factors have fractional q-order)
// and L = trunc_order() is inclusive. After normalization c[0] is nonzero
// unless the series is identically zero (a zero series keeps its window).
class QSeriesTrunc {
 public:
  QSeriesTrunc() = default;

  // q^offset * (sum of given coefficients); trailing window is preserved.
  QSeriesTrunc(Rat offset, std::vector<LaurentPoly> coeffs);

  // The constant series v + O(q^(L+1)).
  static QSeriesTrunc constant(Rat v, long L);
  static QSeriesTrunc one(long L) { return constant(1, L); }
  static QSeriesTrunc zero(long L);

  bool is_zero() const;
  const Rat& offset() const { return offset_; }
  long trunc_order() const { return static_cast<long>(c_.size()) - 1; }
  const LaurentPoly& coeff_rel(long n) const;  // n in [0, trunc_order]

  // Coefficient of q^e (absolute exponent); zero if e-offset is not an
  // integer in the window; throws if e is beyond the truncation window.
  const LaurentPoly& coeff_abs(const Rat& e) const;
  // Highest absolute exponent known (offset + trunc_order).
  Rat known_through() const { return offset_ + trunc_order(); }
  bool integral() const;

  QSeriesTrunc operator+(const QSeriesTrunc& o) const;
  QSeriesTrunc operator-(const QSeriesTrunc& o) const;
  QSeriesTrunc operator*(const QSeriesTrunc& o) const;
  QSeriesTrunc operator*(const Rat& s) const;
  QSeriesTrunc operator-() const;
  bool operator==(const QSeriesTrunc& o) const;

  // Multiply by q^e.
  QSeriesTrunc q_shifted(const Rat& e) const;
  // Map zeta -> zeta^j in every coefficient.
  QSeriesTrunc zeta_power(long j) const;
  // Halve every zeta exponent (requires all even).
  QSeriesTrunc zeta_halved() const;
  // Truncate so that known_through() <= e.
  QSeriesTrunc truncated_through(const Rat& e) const;
  // Substitute q -> q^(1/s): divide every exponent by s. All nonzero
  // terms must sit on a common coset of s*Z relative to the leading term
  // (throws std::domain_error otherwise); known_through becomes
  // floor-on-the-new-grid of the old reach.
  QSeriesTrunc q_compressed(long s) const;

 private:
  Rat offset_ = 0;
  std::vector<LaurentPoly> c_;  // empty means unusable/default

  void renormalize();
  friend QSeriesTrunc series_divide(const QSeriesTrunc&, const QSeriesTrunc&);
  friend QSeriesTrunc series_mul_pow(const QSeriesTrunc&, long);
};

// f^e at the truncation order of f. For e < 0, the leading coefficient of f
// must be invertible in the Laurent ring (unit monomial) or the division
// must succeed exactly at every step (it is routed through series_divide).
QSeriesTrunc series_mul_pow(const QSeriesTrunc& f, long e);

// a / b to the common truncation; offset(a/b) = offset(a) - offset(b).
// The recurrence a_n = b_0 c_n + ... + b_n c_0 is solved by lp_divide at
// each step; a nonzero remainder raises SeriesDivideError with the failing
// q-index (the caller treats this as "not a multiple").
QSeriesTrunc series_divide(const QSeriesTrunc& a, const QSeriesTrunc& b);

}  // namespace pbp
