#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pbp/laurent.hpp"

using namespace pbp;

static LaurentPoly lp(std::map<long, Rat> m) { return LaurentPoly::from_terms(m); }

TEST_CASE("number-theoretic helpers") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(2) == -1);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(totient(1) == 1);
  CHECK(totient(12) == 4);
  CHECK(divisors(12) == std::vector<long>{1, 2, 3, 4, 6, 12});
  CHECK(sigma_pow(6, 3) == Int(1 + 8 + 27 + 216));
  // atom weights: w(1)=1, w(2)=3, w(4)=12, w(6)=24, w(12)=96
  CHECK(atom_weight(1) == 1);
  CHECK(atom_weight(2) == 3);
  CHECK(atom_weight(3) == 8);
  CHECK(atom_weight(4) == 12);
  CHECK(atom_weight(6) == 24);
  CHECK(atom_weight(12) == 96);
  CHECK(parse_rat("-3/6") == Rat(-1, 2));
  CHECK(floor_div(Rat(-1, 2)) == -1);
  CHECK(floor_div(Rat(7, 2)) == 3);
}

TEST_CASE("basic arithmetic and window bookkeeping") {
  LaurentPoly a = lp({{-1, 1}, {0, 2}, {1, 1}});  // zeta^-1 + 2 + zeta
  LaurentPoly b = lp({{-1, 1}, {1, -1}});
  CHECK(a.lo() == -1);
  CHECK(a.hi() == 1);
  CHECK((a + (-a)).is_zero());
  CHECK(a - a == LaurentPoly());
  CHECK(a.coeff(0) == 2);
  CHECK(a.coeff(5) == 0);
  CHECK((a * b) == lp({{-2, 1}, {-1, 2}, {1, -2}, {2, -1}}));
  CHECK(a.shifted(3) == lp({{2, 1}, {3, 2}, {4, 1}}));
  CHECK(a.substituted_power(2) == lp({{-2, 1}, {0, 2}, {2, 1}}));
  CHECK(lp({{-2, 1}, {0, 2}, {2, 1}}).halved_exponents() == a);
  CHECK(a * Rat(1, 2) == lp({{-1, {1, 2}}, {0, 1}, {1, {1, 2}}}));
  CHECK(a.integral());
  CHECK_FALSE((a * Rat(1, 2)).integral());
  CHECK(LaurentPoly::monomial(-3, -1).is_unit_monomial());
  CHECK_FALSE(a.is_unit_monomial());
}

TEST_CASE("multiplication matches a schoolbook convolution oracle") {
  // Oracle: convolve term maps directly with map arithmetic.
  LaurentPoly a = lp({{-3, {2, 3}}, {0, 5}, {2, -1}, {7, 4}});
  LaurentPoly b = lp({{-2, 1}, {-1, -7}, {4, {3, 5}}});
  std::map<long, Rat> conv;
  for (auto& [ea, va] : a.terms())
    for (auto& [eb, vb] : b.terms()) conv[ea + eb] += va * vb;
  CHECK(a * b == LaurentPoly::from_terms(conv));
}

TEST_CASE("lp_divide: quotient-remainder contract") {
  // (zeta^-1 - 2 + zeta) divides squares of itself exactly.
  LaurentPoly d = lp({{-1, 1}, {0, -2}, {1, 1}});
  auto [q, r] = lp_divide(d * d, d);
  CHECK(r.is_zero());
  CHECK(q == d);

  // A non-multiple leaves a true-polynomial remainder with deg < span(b).
  LaurentPoly a = lp({{-2, 3}, {0, 1}, {3, 5}});
  auto [q2, r2] = lp_divide(a, d);
  CHECK(q2 * d + r2 == a);
  CHECK((r2.is_zero() || r2.lo() >= 0));
  CHECK((r2.is_zero() || r2.hi() < d.degree_span()));

  // Divisor must have unit extreme coefficients.
  CHECK_THROWS_AS(lp_divide(a, lp({{0, 2}, {1, 1}})), std::domain_error);
}

TEST_CASE("lp_divide randomized round trip against construction") {
  // Build random products Q*B + R with admissible B and recover them.
  unsigned long seed = 12345;
  auto next = [&seed]() {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<long>((seed >> 33) % 11) - 5;
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::map<long, Rat> bm;
    long blo = next(), span = 1 + (std::abs(next()) % 4);
    bm[blo] = (trial % 2) ? 1 : -1;
    bm[blo + span] = (trial % 3) ? 1 : -1;
    for (long e = blo + 1; e < blo + span; ++e) bm[e] = next();
    LaurentPoly B = LaurentPoly::from_terms(bm);
    std::map<long, Rat> qm, rm;
    for (int i = 0; i < 4; ++i) qm[next()] += next();
    for (long e = 0; e < span; ++e) rm[e] = next();
    LaurentPoly Q = LaurentPoly::from_terms(qm);
    LaurentPoly R = LaurentPoly::from_terms(rm);
    LaurentPoly A = Q * B + R;
    auto [q, r] = lp_divide(A, B);
    CHECK(q == Q);
    CHECK(r == R);
  }
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic(1) == lp({{0, -1}, {1, 1}}));
  CHECK(cyclotomic(2) == lp({{0, 1}, {1, 1}}));
  CHECK(cyclotomic(6) == lp({{0, 1}, {1, -1}, {2, 1}}));
  CHECK(cyclotomic(12) == lp({{0, 1}, {2, -1}, {4, 1}}));
  // Phi_105 is the first with a coefficient outside {-1,0,1}: c_7 = -2.
  const LaurentPoly& p105 = cyclotomic(105);
  CHECK(p105.hi() == totient(105));
  CHECK(p105.coeff(7) == -2);
  CHECK(p105.coeff(41) == -2);
  // Product of Phi_d over d | n reassembles X^n - 1.
  for (long n : {1L, 2L, 8L, 12L, 30L}) {
    LaurentPoly prod = LaurentPoly::constant(1);
    for (long d : divisors(n)) prod = prod * cyclotomic(d);
    CHECK(prod == lp({{0, -1}, {n, 1}}));
  }
}
