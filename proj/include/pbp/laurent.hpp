#pragma once

#include <functional>
#include <map>
#include <utility>

#include "pbp/numeric.hpp"

namespace pbp {

// A Laurent polynomial in zeta with exact rational coefficients.
// Storage is a dense window [lo, lo+size) of coefficients; the window ends
// are nonzero after normalization (interior zeros are allowed, and the
// "terms" view skips them). An integrality flag records whether every
// coefficient is an integer.
class LaurentPoly {
 public:
  LaurentPoly() = default;  // zero

  static LaurentPoly monomial(long e, Rat v);
  static LaurentPoly constant(Rat v);
  static LaurentPoly from_terms(const std::map<long, Rat>& terms);

  bool is_zero() const { return c_.empty(); }
  long lo() const;  // lowest exponent; requires nonzero
  long hi() const;  // highest exponent; requires nonzero
  long degree_span() const { return is_zero() ? -1 : hi() - lo(); }
  bool integral() const { return integral_; }
  std::size_t term_count() const;

  // Coefficient of zeta^e (zero outside the window).
  const Rat& coeff(long e) const;

  std::map<long, Rat> terms() const;  // nonzero terms only
  void for_each_term(const std::function<void(long, const Rat&)>& f) const;

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(const Rat& s) const;
  LaurentPoly shifted(long e) const;  // multiply by zeta^e
  LaurentPoly substituted_power(long j) const;  // zeta -> zeta^j, j >= 1
  // zeta -> zeta^(1/2): requires every exponent even; halves all exponents.
  LaurentPoly halved_exponents() const;
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  // True if the polynomial is a single term +-zeta^e or any nonzero monomial.
  bool is_monomial() const { return term_count() == 1; }
  bool is_unit_monomial() const;

  std::string str() const;  // human-readable, for diagnostics

 private:
  long lo_ = 0;
  std::vector<Rat> c_;
  bool integral_ = true;

  void normalize();
  friend std::pair<LaurentPoly, LaurentPoly> lp_divide(const LaurentPoly&,
                                                       const LaurentPoly&);
};

// Division with remainder per the baby-block division algorithm:
// a = Q*b + R with R a true polynomial (no negative exponents) and
// deg R < degree span of b. Requires b nonzero with unit (+-1) extreme
// coefficients. Throws std::domain_error otherwise.
std::pair<LaurentPoly, LaurentPoly> lp_divide(const LaurentPoly& a,
                                              const LaurentPoly& b);

// r-th cyclotomic polynomial (memoized). r >= 1.
const LaurentPoly& cyclotomic(long r);

}  // namespace pbp
