#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "pbp/jacobi.hpp"

using namespace pbp;

namespace {

// Wraps a theta block as a truncated Jacobi form.
JacobiTrunc jt_of_block(const std::string& s, long q_order,
                        JacobiKind kind = JacobiKind::Cusp) {
  auto tb = tb_invariants(parse_theta_block(s));
  JacobiTrunc f;
  f.k = static_cast<long>(tb.k.get_num().get_si());
  f.m = static_cast<long>(tb.m.get_num().get_si());
  f.kind = kind;
  f.series = tb_expand(tb, q_order);
  return f;
}

// Independent V_2 oracle by substitution:
//   (phi|V_2)(tau,z) = 2^(k-1) phi(2 tau, 2z) + (phi(tau/2, z) + phi(tau/2 + 1/2, z))/2.
// The first summand scatters c(n,r) to q^(2n) zeta^(2r); the averaged pair
// keeps exactly the even-n coefficients at q^(n/2) zeta^r.
QSeriesTrunc v2_substitution(const QSeriesTrunc& s, long k, long out_order) {
  long n0 = static_cast<long>(s.offset().get_num().get_si());
  long T = static_cast<long>(s.known_through().get_num().get_si());
  long lo = std::min(2 * n0, n0 >= 0 ? (n0 + 1) / 2 : n0 / 2);
  std::map<long, std::map<long, Rat>> acc;
  Rat two_k1 = k >= 1 ? Rat(Int(1) << (k - 1)) : Rat(1) / Rat(Int(1) << (1 - k));
  for (long n = n0; n <= T; ++n) {
    s.coeff_abs(n).for_each_term([&](long r, const Rat& c) {
      if (2 * n <= out_order) acc[2 * n][2 * r] += two_k1 * c;
      if (n % 2 == 0 && n / 2 <= out_order) acc[n / 2][r] += c;
    });
  }
  std::vector<LaurentPoly> coeffs;
  for (long n = lo; n <= out_order; ++n) {
    auto it = acc.find(n);
    coeffs.push_back(it == acc.end() ? LaurentPoly()
                                     : LaurentPoly::from_terms(it->second));
  }
  return QSeriesTrunc(Rat(lo), std::move(coeffs));
}

}  // namespace

TEST_CASE("v_apply: ell=1 is the identity") {
  JacobiTrunc f = jt_of_block("0^24", 8);
  JacobiTrunc g = v_apply(f, 1);
  CHECK(g.series == f.series);
  CHECK(g.m == f.m);
}

TEST_CASE("v_apply: V_2 against the substitution oracle on 10 blocks") {
  // All with k + (number of theta factors) divisible by 12, so the
  // expansions live on the integer q-grid.
  const char* blocks[] = {
      "0^24",           // eta^24, index 0
      "0^20 1^2",       // k=10, m=1
      "0^20 1^1 3^1",   // k=10, m=5
      "0^16 1^4",       // k=8,  m=2
      "0^16 1^3 3^1",   // k=8,  m=6
      "0^16 1^2 2^2",   // k=8,  m=5
      "0^12 1^6",       // k=6,  m=3
      "0^12 1^4 2^2",   // k=6,  m=6
      "0^12 1^3 2^2 3^1",  // k=6, m=10
      "0^8 1^8",        // k=4,  m=4
  };
  for (const char* b : blocks) {
    JacobiTrunc f = jt_of_block(b, 16);
    JacobiTrunc g = v_apply(f, 2);
    CHECK(g.m == 2 * f.m);
    long out = static_cast<long>(g.series.known_through().get_num().get_si());
    CHECK(g.series == v2_substitution(f.series, f.k, out));
  }
}

TEST_CASE("v_apply: depth accounting and error reporting") {
  JacobiTrunc f = jt_of_block("0^16 1^4", 9);
  // floor(9/2) = 4 is the deepest V_2 output.
  CHECK(v_apply(f, 2).series.known_through() == 4);
  CHECK(v_apply_to(f, 2, 4).series.known_through() == 4);
  CHECK_THROWS_AS(v_apply_to(f, 2, 5), TruncationDepthError);
  try {
    v_apply_to(f, 3, 7);
  } catch (const TruncationDepthError& e) {
    CHECK(e.required_through == 21);
  }
}

TEST_CASE("v_apply: weight 0 produces rational coefficients at a>1 divisors") {
  // A synthetic weight-0 series with support at even (n, r).
  std::vector<LaurentPoly> c;
  c.push_back(LaurentPoly::from_terms({{0, 1}}));           // q^0
  c.push_back(LaurentPoly());                               // q^1
  c.push_back(LaurentPoly::from_terms({{-2, 3}, {2, 3}}));  // q^2
  c.push_back(LaurentPoly());
  c.push_back(LaurentPoly::from_terms({{0, 5}}));           // q^4
  JacobiTrunc f;
  f.k = 0;
  f.m = 1;
  f.kind = JacobiKind::WeaklyHolomorphic;
  f.series = QSeriesTrunc(Rat(0), c);
  JacobiTrunc g = v_apply(f, 2);
  // c|V_2(1, r) = c(2, r) + (1/2) c(1/2, ...) -> just c(2, r); and
  // c|V_2(2, 2) = c(4, 2) + (1/2) c(1, 1) = 0, c|V_2(2,0)=c(4,0)+.5*c(1,0)=5.
  CHECK(g.series.coeff_abs(1) == LaurentPoly::from_terms({{-2, 3}, {2, 3}}));
  // (n,r)=(0,0): a in {1,2}: c(0,0) + (1/2) c(0,0) = 3/2 -> rational.
  CHECK(g.series.coeff_abs(0).coeff(0) == Rat(3, 2));
  CHECK_FALSE(g.series.integral());
}

TEST_CASE("grit_lift: section property and FJ symmetry") {
  JacobiTrunc phi = jt_of_block("0^20 1^2", 12);
  auto fj = grit_lift(phi, 3, 4);
  REQUIRE(fj.size() == 3);
  // First FJ coefficient is phi itself.
  CHECK(fj[0].series == phi.series.truncated_through(4));
  CHECK(grit_lift(phi, 0, 4).empty());
  // Lift coefficient symmetry: A(n, r; ell N) = A(ell, r; n N), i.e.
  // c_{phi|V_ell}(n, r) = c_{phi|V_n}(ell, r) for n, ell >= 1.
  for (long n = 1; n <= 3; ++n)
    for (long ell = 1; ell <= 3; ++ell)
      CHECK(fj[static_cast<std::size_t>(ell - 1)].series.coeff_abs(n) ==
            fj[static_cast<std::size_t>(n - 1)].series.coeff_abs(ell));
}

TEST_CASE("v_apply keeps the elliptic coefficient symmetry") {
  JacobiTrunc phi = jt_of_block("0^12 1^3 2^2 3^1", 12);
  CHECK(jacobi_symmetry_check(phi));
  JacobiTrunc g = v_apply(phi, 2);
  CHECK(jacobi_symmetry_check(g));
  // A perturbed coefficient breaks the symmetry check.
  JacobiTrunc bad = phi;
  std::vector<LaurentPoly> c;
  for (long n = 0; n <= phi.series.trunc_order(); ++n)
    c.push_back(phi.series.coeff_rel(n));
  // Perturb at (n, r) = (m + 1, 2m): its lambda = 1 partner (1, 0) stays
  // inside the window, so the break is observable.
  c[static_cast<std::size_t>(phi.m + 1 -
                             phi.series.offset().get_num().get_si())] =
      c[static_cast<std::size_t>(phi.m + 1 -
                                 phi.series.offset().get_num().get_si())] +
      LaurentPoly::from_terms({{2 * phi.m, 1}});
  bad.series = QSeriesTrunc(phi.series.offset(), c);
  CHECK_FALSE(jacobi_symmetry_check(bad));
}

TEST_CASE("germ law: the q^0 coefficient of the signed V_2 quotient is the germ") {
  // For a block with leading exponent A, the source form is the signed
  // quotient (-1)^A (phi|V_2)/phi; its q^0 coefficient is the germ G(phi).
  // (The raw quotient has q^0 coefficient (-1)^A G: here A = 1.)
  auto tb = tb_invariants(parse_theta_block("0^4 1^2 2^2 3^2 4^1 5^1 14^1 17^1"));
  REQUIRE(tb.m == 277);
  REQUIRE(tb.k == 2);
  REQUIRE(tb.A == 1);
  JacobiTrunc phi;
  phi.k = 2;
  phi.m = 277;
  phi.kind = JacobiKind::Cusp;
  phi.series = tb_expand(tb, 8);
  JacobiTrunc v2 = v_apply(phi, 2);
  QSeriesTrunc quot = series_divide(v2.series, phi.series);
  CHECK(quot.offset() == 0);  // no principal part for this block
  CHECK(-quot.coeff_abs(0) == tb.germ);
}

TEST_CASE("delta_series and delta_power_basis") {
  QSeriesTrunc d = delta_series(6);
  CHECK(d.offset() == 1);
  CHECK(d.coeff_abs(1) == LaurentPoly::constant(1));
  CHECK(d.coeff_abs(2) == LaurentPoly::constant(-24));
  CHECK(d.coeff_abs(3) == LaurentPoly::constant(252));
  CHECK(d.coeff_abs(4) == LaurentPoly::constant(-1472));

  // Round trip: g = Delta^i * h returns h exactly (numeric check; the
  // synthetic basis only has to carry the weight tag 12 i).
  JacobiTrunc h = jt_of_block("0^24 1^4 2^8", 9);  // weight 12, index 18
  REQUIRE(h.m == 18);
  for (long i : {1L, 2L}) {
    BasisTrunc b;
    b.k = 12 * i;
    b.m = h.m;
    b.q_order = 9;
    BasisElement e;
    e.form.k = 12 * i;
    e.form.m = h.m;
    e.form.kind = JacobiKind::Cusp;
    e.form.series = (h.series * series_mul_pow(delta_series(9), i))
                        .truncated_through(9);
    e.provenance = "synthetic";
    b.elements.push_back(e);
    auto quots = delta_power_basis(i, b);
    REQUIRE(quots.size() == 1);
    // Output reaches floor(N/4) = 1 and matches h there.
    CHECK(quots[0].known_through() == h.m / 4);
    CHECK(quots[0] ==
          h.series.truncated_through(h.m / 4));
  }
  BasisTrunc shallow;
  shallow.k = 12;
  shallow.m = 6;
  shallow.q_order = 1;  // needs floor(6/4) + 1 = 2
  CHECK_THROWS_AS(delta_power_basis(1, shallow), TruncationDepthError);
}

TEST_CASE("divisibility_bound") {
  // Reference block eta^92 (theta_2/eta)^2: bound 23.
  auto big = tb_invariants(MultiplicityFunction::from_phi(92, {{2, 2}}));
  CHECK(divisibility_bound(big) == 23);
  // nu supported only at r=1 with nu(1)=v: floor((k + v - 1)/12).
  for (long v : {1L, 2L, 7L, 13L}) {
    auto tb = tb_invariants(MultiplicityFunction::from_phi(24, {{1, v}}));
    CHECK(divisibility_bound(tb) == (12 + v - 1) / 12);
  }
  // Monotonicity: increasing any nu(r) never decreases the bound.
  unsigned long seed = 5;
  for (int trial = 0; trial < 20; ++trial) {
    std::map<long, long> nu;
    for (int i = 0; i < 3; ++i) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      nu[1 + (seed >> 40) % 6] += 1 + (seed >> 20) % 3;
    }
    auto tb = tb_invariants(MultiplicityFunction::from_nu(20, nu));
    long base = divisibility_bound(tb);
    for (auto& [r, v] : nu) {
      auto nu2 = nu;
      nu2[r] += 1;
      CHECK(divisibility_bound(tb_invariants(
                MultiplicityFunction::from_nu(20, nu2))) >= base);
    }
  }
}

TEST_CASE("confirm_required_i follows the principal part and discriminants") {
  // Pure q^1 cusp-shaped support: i = 0 suffices only if discriminants
  // allow; start with a trivial positive-discriminant series.
  std::vector<LaurentPoly> c;
  c.push_back(LaurentPoly::from_terms({{0, 1}}));
  QSeriesTrunc s(Rat(1), c);
  CHECK(confirm_required_i(s, 6) == 0);
  // q^0 zeta^5 at N=6: D = -25, i > 25/24 -> 2; also i >= 1 - 0 = 1.
  std::vector<LaurentPoly> c2;
  c2.push_back(LaurentPoly::from_terms({{5, 1}}));
  CHECK(confirm_required_i(QSeriesTrunc(Rat(0), c2), 6) == 2);
  // Principal part q^-2 forces i >= 3.
  std::vector<LaurentPoly> c3;
  c3.push_back(LaurentPoly::constant(1));
  CHECK(confirm_required_i(QSeriesTrunc(Rat(-2), c3), 100) == 3);
}

TEST_CASE("confirm_truncation round trip and refutation") {
  // h spans J^cusp_{12,6} (the unique theta block 0^12 1^12); the
  // weight-24 basis element g = Delta * h yields quotient h in the i=1
  // Delta-quotient space.
  BasisTrunc b12 = provision_basis(12, 6, 9, {.theta_blocks = true});
  REQUIRE(b12.k == 12);
  REQUIRE(static_cast<long>(b12.elements.size()) == 1);
  auto quots = delta_power_basis(1, b12);
  REQUIRE(quots.size() == 1);
  QSeriesTrunc psi = quots[0] * Rat(3);
  auto conf = confirm_truncation(psi, 6, b12);
  REQUIRE(conf.has_value());
  CHECK(conf->i == 1);
  CHECK(conf->combination == std::vector<Rat>{Rat(3)});
  CHECK_FALSE(conf->used_subtraction);
  // Soundness: re-expansion reproduces psi on its window.
  CHECK(quots[0] * conf->combination[0] == psi);
  // A perturbed target falls outside the span.
  QSeriesTrunc off = psi + QSeriesTrunc::one(static_cast<long>(
                               psi.trunc_order()))
                               .q_shifted(psi.offset());
  CHECK_FALSE(confirm_truncation(off, 6, b12).has_value());
  // Subtraction variant: psi - subtract with subtract = quots[0] leaves
  // 2 * quots[0], confirmed with the flag set.
  auto conf2 = confirm_truncation(psi, 6, b12, &quots[0]);
  REQUIRE(conf2.has_value());
  CHECK(conf2->combination == std::vector<Rat>{Rat(2)});
  CHECK(conf2->used_subtraction);
}

TEST_CASE("confirm_by_quotients finds exact rational combinations") {
  BasisTrunc b12 = provision_basis(12, 6, 9, {.theta_blocks = true});
  auto quots = delta_power_basis(1, b12);
  QSeriesTrunc f = quots[0];
  // An independent companion on the same q-window.
  QSeriesTrunc g = f.zeta_power(2);
  std::vector<QSeriesTrunc> pool = {f, g};
  QSeriesTrunc psi = f * Rat(2) - g * Rat(1, 3);
  auto comb = confirm_by_quotients(psi, pool);
  REQUIRE(comb.has_value());
  CHECK(*comb == std::vector<Rat>{Rat(2), Rat(-1, 3)});
  // Outside the span: nullopt.
  QSeriesTrunc bad = psi + f.zeta_power(3);
  CHECK_FALSE(confirm_by_quotients(bad, pool).has_value());
  // Empty pool only matches the zero series.
  CHECK(confirm_by_quotients(psi - psi, {}).has_value());
  CHECK_FALSE(confirm_by_quotients(psi, {}).has_value());
}

TEST_CASE("confirm_by_inflation recovers a constructed witness") {
  auto phi = tb_invariants(parse_theta_block("0^24 1^12"));
  QSeriesTrunc phix = tb_expand(phi, 10);
  // psi: the Delta-quotient of a weight-24 multiple (weight-0-like data).
  BasisTrunc b12 = provision_basis(12, 6, 10, {.theta_blocks = true});
  QSeriesTrunc psi = delta_power_basis(1, b12)[0];
  QSeriesTrunc theta_good = (phix * psi).truncated_through(10);
  QSeriesTrunc theta_bad = (phix * psi * Rat(2)).truncated_through(10);
  auto w = confirm_by_inflation(psi, phi, {theta_bad, theta_good});
  REQUIRE(w.has_value());
  CHECK(w->index == 1);
  CHECK(w->quotient.coeff_abs(psi.offset()) == psi.coeff_abs(psi.offset()));
  CHECK_FALSE(confirm_by_inflation(psi, phi, {theta_bad}).has_value());
}

TEST_CASE("provision_basis: theta-block source, rank, and order invariance") {
  BasisTrunc b = provision_basis(12, 6, 8, {.theta_blocks = true});
  REQUIRE(b.elements.size() == 1);
  CHECK(b.elements[0].provenance == "0^24 1^12");
  CHECK(b.elements[0].form.kind == JacobiKind::Cusp);
  CHECK(b.elements[0].form.series.offset() == 2);
  // Empty sources -> empty basis.
  CHECK(provision_basis(12, 6, 8, {}).elements.empty());
  // Weight 10, index 1: the classical block eta^20 (theta_1/eta)^2.
  BasisTrunc b2 = provision_basis(10, 1, 8, {.theta_blocks = true});
  REQUIRE(b2.elements.size() == 1);
  CHECK(b2.elements[0].provenance == "0^20 1^2");
}

TEST_CASE("basis file round trip and parser rejection") {
  BasisTrunc b = provision_basis(12, 6, 8, {.theta_blocks = true});
  std::ostringstream out;
  write_basis_file(out, b);
  std::istringstream in(out.str());
  BasisTrunc r = read_basis_file(in, "roundtrip");
  REQUIRE(r.elements.size() == b.elements.size());
  CHECK(r.k == 12);
  CHECK(r.m == 6);
  CHECK(r.q_order == 8);
  CHECK(r.elements[0].form.series == b.elements[0].form.series);
  CHECK(r.elements[0].form.kind == JacobiKind::Cusp);

  auto reject = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(read_basis_file(s, "bad"), std::runtime_error);
  };
  reject("");                                    // missing header
  reject("k=12 m=6");                            // short header
  reject("k=12 m=6 qorder=8 junk");              // trailing garbage
  reject("k=12 m=6 qorder=8\nelement e0\n1 0 1\n");       // unterminated
  reject("k=12 m=6 qorder=8\nelement e0\n1 0 1 tail\nend\n");
  reject("k=12 m=6 qorder=8\nelement e0\n9 0 1\nend\n");  // beyond qorder
  reject("k=12 m=6 qorder=8\nwhat\n");           // not an element

  // File-source provisioning consumes the writer's output.
  std::string path = "/tmp/pbp_basis_test.txt";
  write_basis_file(path, b);
  BasisTrunc viafile =
      provision_basis(12, 6, 8, {.theta_blocks = false, .files = {path}});
  REQUIRE(viafile.elements.size() == 1);
  CHECK(viafile.elements[0].form.series == b.elements[0].form.series);
  CHECK(viafile.elements[0].provenance.rfind("file " + path, 0) == 0);
  // Header mismatch is rejected.
  CHECK_THROWS_AS(provision_basis(12, 7, 8, {.files = {path}}),
                  std::runtime_error);
  CHECK_THROWS_AS(provision_basis(12, 6, 9, {.files = {path}}),
                  std::runtime_error);
}
