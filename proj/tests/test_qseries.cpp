#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "pbp/qseries.hpp"

using namespace pbp;

static LaurentPoly lp(std::map<long, Rat> m) { return LaurentPoly::from_terms(m); }

// q^off * sum_n coeffs[n] q^n with scalar coefficients, handy for tests.
static QSeriesTrunc scal(Rat off, std::vector<Rat> v) {
  std::vector<LaurentPoly> c;
  for (auto& x : v) c.push_back(LaurentPoly::constant(x));
  return QSeriesTrunc(off, std::move(c));
}

TEST_CASE("construction, normalization, access") {
  // Leading zero coefficients fold into the offset.
  std::vector<LaurentPoly> c(5);
  c[2] = LaurentPoly::constant(3);
  c[4] = lp({{-1, 1}});
  QSeriesTrunc f(Rat(1, 2), std::move(c));
  CHECK(f.offset() == Rat(5, 2));
  CHECK(f.trunc_order() == 2);
  CHECK(f.known_through() == Rat(9, 2));
  CHECK(f.coeff_abs(Rat(5, 2)) == LaurentPoly::constant(3));
  CHECK(f.coeff_abs(3).is_zero());  // between lattice points
  CHECK(f.coeff_abs(Rat(9, 2)) == lp({{-1, 1}}));
  CHECK_THROWS_AS(f.coeff_abs(5), std::out_of_range);
  CHECK(QSeriesTrunc::zero(3).is_zero());
  CHECK_FALSE(f.is_zero());
}

TEST_CASE("ring operations with offsets") {
  QSeriesTrunc a = scal(0, {1, 2, 3, 4});
  QSeriesTrunc b = scal(1, {5, 6});
  QSeriesTrunc s = a + b;
  CHECK(s.offset() == 0);
  CHECK(s == scal(0, {1, 7, 9}));  // truncated to b's reach q^2
  CHECK(a - a == QSeriesTrunc::zero(3));
  QSeriesTrunc p = a * b;
  CHECK(p.offset() == 1);
  CHECK(p == scal(1, {5, 16}));
  CHECK((a * Rat(2)) == scal(0, {2, 4, 6, 8}));
  CHECK(a.q_shifted(Rat(-1, 3)).offset() == Rat(-1, 3));
}

TEST_CASE("multiplication against brute-force double convolution") {
  // Coefficients are Laurent polynomials; the oracle convolves both layers.
  std::vector<LaurentPoly> ca = {lp({{-1, 1}, {1, 1}}), lp({{0, -3}}),
                                 lp({{-2, 2}, {0, 1}})};
  std::vector<LaurentPoly> cb = {lp({{0, 1}}), lp({{-1, 4}, {2, -1}}),
                                 lp({{1, 7}})};
  QSeriesTrunc a(Rat(1, 3), ca), b(Rat(-1, 3), cb);
  QSeriesTrunc p = a * b;
  CHECK(p.offset() == 0);
  for (long n = 0; n <= 2; ++n) {
    LaurentPoly want;
    for (long i = 0; i <= n; ++i) want = want + ca[i] * cb[n - i];
    CHECK(p.coeff_rel(n) == want);
  }
}

TEST_CASE("series_divide: geometric and binomial examples") {
  // 1 / (1 - q) = 1 + q + q^2 + ...
  QSeriesTrunc one = QSeriesTrunc::one(6);
  QSeriesTrunc g = series_divide(one, scal(0, {1, -1, 0, 0, 0, 0, 0}));
  CHECK(g == scal(0, {1, 1, 1, 1, 1, 1, 1}));

  // (1 - q zeta)^3 / (1 - q zeta) = (1 - q zeta)^2, nontrivial zeta layer.
  std::vector<LaurentPoly> lin = {lp({{0, 1}}), lp({{1, -1}}),
                                  LaurentPoly(), LaurentPoly()};
  QSeriesTrunc f(0, lin);
  QSeriesTrunc cube = f * f * f;
  CHECK(series_divide(cube, f) == f * f);

  // Offsets subtract: (q^2 * f) / (q^(1/2) * f) = q^(3/2).
  QSeriesTrunc num = f.q_shifted(2), den = f.q_shifted(Rat(1, 2));
  QSeriesTrunc quot = series_divide(num, den);
  CHECK(quot.offset() == Rat(3, 2));
  CHECK(quot == QSeriesTrunc::one(3).q_shifted(Rat(3, 2)));
}

TEST_CASE("series_divide reports the failing q-index") {
  // (1 + q zeta) is not divisible by (zeta - 2 + zeta^-1); index 0 fails.
  std::vector<LaurentPoly> dc = {lp({{-1, 1}, {0, -2}, {1, 1}}), lp({{0, 1}})};
  std::vector<LaurentPoly> nc = {lp({{0, 1}}), lp({{1, 1}})};
  QSeriesTrunc den(0, dc), num(0, nc);
  try {
    series_divide(num, den);
    FAIL("expected SeriesDivideError");
  } catch (const SeriesDivideError& e) {
    CHECK(e.failing_index == 0);
  }
  // A failure deeper in: den * (1 + q) + q^2 fails at index 2.
  std::vector<LaurentPoly> dc4 = {dc[0], dc[1], LaurentPoly(), LaurentPoly()};
  den = QSeriesTrunc(0, dc4);
  QSeriesTrunc ok = den * scal(0, {1, 1, 0, 0});
  QSeriesTrunc bad = ok + scal(2, {1, 0});
  try {
    series_divide(bad, den);
    FAIL("expected SeriesDivideError");
  } catch (const SeriesDivideError& e) {
    CHECK(e.failing_index == 2);
  }
}

TEST_CASE("series_divide round trip on random-ish products") {
  std::vector<LaurentPoly> bc = {lp({{-2, -1}, {0, 3}, {1, 1}}),
                                 lp({{-1, 5}}), lp({{0, -2}, {3, 1}}),
                                 lp({{1, 1}})};
  // Both leading coefficients have unit extremes so either factor can be
  // the divisor.
  std::vector<LaurentPoly> ac = {lp({{0, 1}, {2, -1}}), lp({{-3, 1}}),
                                 LaurentPoly(), lp({{1, 9}})};
  QSeriesTrunc b(Rat(-1, 2), bc), a(Rat(3, 2), ac);
  CHECK(series_divide(a * b, b) == a);
  CHECK(series_divide(a * b, a) == b);
}

TEST_CASE("series_mul_pow: integral and negative powers") {
  QSeriesTrunc f = scal(0, {1, -1, 0, 0, 0, 0, 0, 0});  // 1 - q
  CHECK(series_mul_pow(f, 0) == QSeriesTrunc::one(7));
  CHECK(series_mul_pow(f, 3) == scal(0, {1, -3, 3, -1, 0, 0, 0, 0}));
  // (1-q)^(-2) = sum (n+1) q^n
  CHECK(series_mul_pow(f, -2) == scal(0, {1, 2, 3, 4, 5, 6, 7, 8}));
  // powers compose: f^5 * f^-5 = 1
  QSeriesTrunc g(0, {lp({{-1, 1}}), lp({{0, 2}, {1, 1}}), lp({{2, -3}}),
                     LaurentPoly(), LaurentPoly(), LaurentPoly()});
  CHECK(series_mul_pow(g, 5) * series_mul_pow(g, -5) == QSeriesTrunc::one(5));
  // fractional offsets scale with the power
  CHECK(series_mul_pow(g.q_shifted(Rat(1, 24)), 3).offset() == Rat(1, 8));
  CHECK(series_mul_pow(g.q_shifted(Rat(1, 24)), -2).offset() == Rat(-1, 12));
}

TEST_CASE("eta^24 head via explicit pentagonal-number series") {
  // eta(tau)^24 = q prod (1-q^n)^24; heads are classical:
  // q (1 - 24q + 252q^2 - 1472q^3 + 4830q^4 - 6048q^5 ...)
  long L = 8;
  QSeriesTrunc euler = QSeriesTrunc::one(L);
  for (long n = 1; n <= L; ++n) {
    std::vector<LaurentPoly> t(static_cast<std::size_t>(L) + 1);
    t[0] = LaurentPoly::constant(1);
    t[static_cast<std::size_t>(n)] = LaurentPoly::constant(-1);
    euler = euler * QSeriesTrunc(0, std::move(t));
  }
  QSeriesTrunc d = series_mul_pow(euler, 24).q_shifted(1);
  CHECK(d.offset() == 1);
  std::vector<Rat> want = {1, -24, 252, -1472, 4830, -6048, -16744, 84480};
  for (long n = 0; n < static_cast<long>(want.size()); ++n)
    CHECK(d.coeff_rel(n) == LaurentPoly::constant(want[static_cast<std::size_t>(n)]));
  CHECK(d.integral());
}
