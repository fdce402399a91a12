#include "pbp/ezbasis.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pbp {

namespace {

// theta_2(tau,z)^2 on the X = q^(1/8) grid:
//   sum over n, m of X^((2n+1)^2 + (2m+1)^2) zeta^(n+m+1).
// With zeta = 1 this is the theta constant. Depth: X-exponents <= 8 L.
QSeriesTrunc theta2_sq(long xdepth, bool with_z) {
  std::map<long, std::map<long, Rat>> acc;
  for (long n = 0;; ++n) {
    long en = (2 * n + 1) * (2 * n + 1);
    if (en + 1 > xdepth) break;
    for (long m = 0;; ++m) {
      long e = en + (2 * m + 1) * (2 * m + 1);
      if (e > xdepth) break;
      // (n, m) ranges over Z x Z; (2n+1)^2 identifies n and -n-1, so each
      // unordered magnitude pair occurs 4 times with zeta exponents
      // (+-(n) +- (m)) + 1 patterns: n' in {n, -n-1}, m' in {m, -m-1}.
      for (long n2 : {n, -n - 1})
        for (long m2 : {m, -m - 1}) acc[e][with_z ? n2 + m2 + 1 : 0] += 1;
    }
  }
  long lo = acc.begin()->first;
  std::vector<LaurentPoly> c;
  for (long e = lo; e <= xdepth; ++e) {
    auto it = acc.find(e);
    c.push_back(it == acc.end() ? LaurentPoly()
                                : LaurentPoly::from_terms(it->second));
  }
  return QSeriesTrunc(Rat(lo, 1), std::move(c));
}

// theta_3 (sign = +1) or theta_4 (sign = -1) squared on the X = q^(1/8)
// grid: sum over n, m of sign^(n+m) X^(4(n^2+m^2)) zeta^(n+m).
QSeriesTrunc theta34_sq(long xdepth, int sign, bool with_z) {
  std::map<long, std::map<long, Rat>> acc;
  for (long n = 0; 4 * n * n <= xdepth; ++n) {
    for (long m = 0; 4 * (n * n + m * m) <= xdepth; ++m) {
      long e = 4 * (n * n + m * m);
      long parity = (n + m) % 2;
      Rat v = (sign < 0 && parity) ? Rat(-1) : Rat(1);
      // n' in {n, -n} (coinciding when n = 0), likewise m'.
      std::vector<long> ns = n == 0 ? std::vector<long>{0}
                                    : std::vector<long>{n, -n};
      std::vector<long> ms = m == 0 ? std::vector<long>{0}
                                    : std::vector<long>{m, -m};
      for (long n2 : ns)
        for (long m2 : ms) acc[e][with_z ? n2 + m2 : 0] += v;
    }
  }
  std::vector<LaurentPoly> c;
  for (long e = 0; e <= xdepth; ++e) {
    auto it = acc.find(e);
    c.push_back(it == acc.end() ? LaurentPoly()
                                : LaurentPoly::from_terms(it->second));
  }
  return QSeriesTrunc(Rat(0), std::move(c));
}

// num/den where den is a pure q-series whose leading coefficient is a
// nonzero rational constant (not necessarily a unit): scale both sides.
QSeriesTrunc divide_by_constant_led(const QSeriesTrunc& num,
                                    const QSeriesTrunc& den) {
  const LaurentPoly& d0 = den.coeff_rel(0);
  if (!d0.is_monomial() || d0.lo() != 0)
    throw std::domain_error("divide_by_constant_led: leading term not constant");
  Rat s = Rat(1) / d0.coeff(0);
  return series_divide(num * s, den * s);
}

}  // namespace

QSeriesTrunc eisenstein_series(long weight, long q_order) {
  if (weight != 4 && weight != 6)
    throw std::domain_error("eisenstein_series: only E_4 and E_6");
  Rat scale = weight == 4 ? Rat(240) : Rat(-504);
  std::vector<LaurentPoly> c;
  c.push_back(LaurentPoly::constant(1));
  for (long n = 1; n <= q_order; ++n)
    c.push_back(LaurentPoly::constant(scale * Rat(sigma_pow(n, weight - 1))));
  return QSeriesTrunc(Rat(0), std::move(c));
}

std::vector<QSeriesTrunc> m_sl2_basis(long weight, long q_order) {
  std::vector<QSeriesTrunc> out;
  if (weight < 0 || weight % 2 != 0 || weight == 2) return out;
  if (weight == 0) {
    out.push_back(QSeriesTrunc::one(q_order));
    return out;
  }
  QSeriesTrunc e4 = eisenstein_series(4, q_order);
  QSeriesTrunc e6 = eisenstein_series(6, q_order);
  for (long a = weight / 4; a >= 0; --a) {
    long rest = weight - 4 * a;
    if (rest % 6 != 0) continue;
    long b = rest / 6;
    out.push_back(series_mul_pow(e4, a) * series_mul_pow(e6, b));
  }
  return out;
}

QSeriesTrunc phi_weak_m2_1(long q_order) {
  return tb_expand(
      tb_invariants(MultiplicityFunction::from_phi(-4, {{1, 2}})), q_order);
}

QSeriesTrunc phi_weak_m1_2(long q_order) {
  return tb_expand(
      tb_invariants(MultiplicityFunction::from_phi(-2, {{2, 1}})), q_order);
}

QSeriesTrunc phi_weak_0_1(long q_order) {
  long xdepth = 8 * q_order + 8;
  QSeriesTrunc f2 =
      divide_by_constant_led(theta2_sq(xdepth, true), theta2_sq(xdepth, false));
  QSeriesTrunc f3 = divide_by_constant_led(theta34_sq(xdepth, 1, true),
                                           theta34_sq(xdepth, 1, false));
  QSeriesTrunc f4 = divide_by_constant_led(theta34_sq(xdepth, -1, true),
                                           theta34_sq(xdepth, -1, false));
  QSeriesTrunc sum = (f2 + f3 + f4) * Rat(4);
  // The half-grid contributions of f3 and f4 cancel in the sum; compress
  // X = q^(1/8) back to the integer q-grid and trim to the exact order.
  return sum.q_compressed(8).truncated_through(q_order);
}

std::vector<JacobiTrunc> jweak_basis(long k, long m, long q_order) {
  std::vector<JacobiTrunc> out;
  if (m < 0) return out;
  if (k % 2 != 0) {
    if (m < 2) return out;
    QSeriesTrunc gen = phi_weak_m1_2(q_order);
    for (auto& f : jweak_basis(k + 1, m - 2, q_order)) {
      JacobiTrunc g;
      g.k = k;
      g.m = m;
      g.kind = JacobiKind::Weak;
      g.series = (f.series * gen).truncated_through(q_order);
      out.push_back(std::move(g));
    }
    return out;
  }
  QSeriesTrunc pm2 = phi_weak_m2_1(q_order);
  QSeriesTrunc p0 = phi_weak_0_1(q_order);
  // Cache the index factors phi_{-2,1}^a phi_{0,1}^(m-a) incrementally.
  std::vector<QSeriesTrunc> pair(static_cast<std::size_t>(m) + 1);
  pair[0] = series_mul_pow(p0, m).truncated_through(q_order);
  for (long a = 1; a <= m; ++a)
    pair[static_cast<std::size_t>(a)] =
        series_divide(pair[static_cast<std::size_t>(a - 1)] * pm2, p0)
            .truncated_through(q_order);
  // Recomputing via explicit powers would be quadratic; the incremental
  // division above stays exact because p0 has unit leading coefficient.
  for (long a = 0; a <= m; ++a) {
    for (auto& g : m_sl2_basis(k + 2 * a, q_order)) {
      JacobiTrunc f;
      f.k = k;
      f.m = m;
      f.kind = JacobiKind::Weak;
      f.series =
          (g * pair[static_cast<std::size_t>(a)]).truncated_through(q_order);
      out.push_back(std::move(f));
    }
  }
  return out;
}

BasisTrunc ez_cusp_basis(long k, long m, long q_order) {
  BasisTrunc basis;
  basis.k = k;
  basis.m = m;
  basis.q_order = q_order;
  std::vector<JacobiTrunc> gens = jweak_basis(k, m, q_order);
  if (gens.empty()) return basis;
  // Columns: every stored (n, r) position with discriminant 4nm - r^2 <= 0
  // in any generator (vanishing there characterizes the cusp subspace).
  std::set<std::pair<long, long>> cols_set;
  for (auto& g : gens) {
    const QSeriesTrunc& s = g.series;
    if (s.is_zero()) continue;
    for (long j = 0; j <= s.trunc_order(); ++j) {
      long n = static_cast<long>(Rat(s.offset() + j).get_num().get_si());
      s.coeff_rel(j).for_each_term([&](long r, const Rat&) {
        if (4 * n * m - r * r <= 0) cols_set.insert({n, r});
      });
    }
  }
  std::vector<std::pair<long, long>> cols(cols_set.begin(), cols_set.end());
  IntMatrix M(static_cast<long>(gens.size()), static_cast<long>(cols.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const QSeriesTrunc& s = gens[i].series;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto [n, r] = cols[j];
      Rat v = 0;
      if (!s.is_zero() && Rat(n) >= s.offset() && Rat(n) <= s.known_through())
        v = s.coeff_abs(n).coeff(r);
      if (!is_integer(v))
        throw std::logic_error("ez_cusp_basis: non-integral generator");
      M.at(static_cast<long>(i), static_cast<long>(j)) = v.get_num();
    }
  }
  IntMatrix K = int_kernel(M);
  std::vector<std::vector<Rat>> kept;
  for (long t = 0; t < K.rows(); ++t) {
    QSeriesTrunc f;
    bool first = true;
    std::string prov = "ez kernel";
    for (long i = 0; i < K.cols(); ++i) {
      const Int& z = K.at(t, i);
      prov += " " + z.get_str();
      if (z == 0) continue;
      QSeriesTrunc term = gens[static_cast<std::size_t>(i)].series * Rat(z);
      f = first ? term : f + term;
      first = false;
    }
    if (first || f.is_zero()) continue;
    BasisElement e;
    e.form.k = k;
    e.form.m = m;
    e.form.kind = JacobiKind::Cusp;
    e.form.series = f;
    e.provenance = prov;
    basis.elements.push_back(std::move(e));
  }
  return basis;
}

}  // namespace pbp
