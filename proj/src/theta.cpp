#include "pbp/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace pbp {

std::map<long, long> nu_phi_convert(const std::map<long, long>& f,
                                    ConvertDirection dir) {
  // Either direction is a divisor-multiple sum over the closure of the
  // support under divisors: collect every r dividing a support element.
  std::vector<long> rs;
  for (auto& [s, v] : f) {
    if (v == 0) continue;
    for (long d : divisors(s)) rs.push_back(d);
  }
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  auto get = [&f](long r) {
    auto it = f.find(r);
    return it == f.end() ? 0L : it->second;
  };
  long max_s = f.empty() ? 0 : f.rbegin()->first;
  std::map<long, long> out;
  for (long r : rs) {
    long acc = 0;
    for (long t = 1; t * r <= max_s; ++t) {
      long v = get(t * r);
      if (v == 0) continue;
      acc += (dir == ConvertDirection::PhiToNu) ? v : moebius(t) * v;
    }
    if (acc != 0) out[r] = acc;
  }
  return out;
}

MultiplicityFunction MultiplicityFunction::from_phi(
    long phi0, const std::map<long, long>& phi) {
  MultiplicityFunction m;
  m.phi0_ = phi0;
  for (auto& [r, v] : phi) {
    if (r < 1) throw std::domain_error("from_phi: support must be r >= 1");
    if (v != 0) m.phi_[r] = v;
  }
  m.nu_ = nu_phi_convert(m.phi_, ConvertDirection::PhiToNu);
  return m;
}

MultiplicityFunction MultiplicityFunction::from_nu(
    long nu0, const std::map<long, long>& nu) {
  std::map<long, long> clean;
  for (auto& [r, v] : nu) {
    if (r < 1) throw std::domain_error("from_nu: support must be r >= 1");
    if (v != 0) clean[r] = v;
  }
  return from_phi(nu0, nu_phi_convert(clean, ConvertDirection::NuToPhi));
}

long MultiplicityFunction::phi(long r) const {
  auto it = phi_.find(r);
  return it == phi_.end() ? 0 : it->second;
}

long MultiplicityFunction::nu(long r) const {
  auto it = nu_.find(r);
  return it == nu_.end() ? 0 : it->second;
}

long MultiplicityFunction::max_r() const {
  return phi_.empty() ? 0 : phi_.rbegin()->first;
}

MultiplicityFunction MultiplicityFunction::operator*(
    const MultiplicityFunction& o) const {
  std::map<long, long> sum = phi_;
  for (auto& [r, v] : o.phi_) sum[r] += v;
  return from_phi(phi0_ + o.phi0_, sum);
}

bool MultiplicityFunction::operator==(const MultiplicityFunction& o) const {
  return phi0_ == o.phi0_ && phi_ == o.phi_;
}

bool MultiplicityFunction::operator<(const MultiplicityFunction& o) const {
  if (phi0_ != o.phi0_) return phi0_ < o.phi0_;
  return phi_ < o.phi_;
}

ThetaBlock tb_invariants(const MultiplicityFunction& mult) {
  ThetaBlock tb;
  tb.mult = mult;
  long sum_phi = 0, sum_r_phi = 0, sum_r2_phi = 0;
  for (auto& [r, v] : mult.phi_support()) {
    sum_phi += v;
    sum_r_phi += r * v;
    sum_r2_phi += r * r * v;
    if (v < 0) tb.has_denominator = true;
  }
  tb.k = Rat(mult.phi0(), 2);
  tb.k.canonicalize();
  tb.m = Rat(sum_r2_phi, 2);
  tb.m.canonicalize();
  tb.A = Rat(mult.phi0(), 24) + Rat(sum_phi, 12);
  tb.A.canonicalize();
  tb.B = Rat(sum_r_phi, 2);
  tb.B.canonicalize();
  tb.C = tb.m;
  tb.basic = is_integer(tb.k) && is_integer(tb.m) && tb.m >= 0;
  tb.holomorphic = true;
  for (auto& [r, v] : mult.nu_support())
    if (v < 0) tb.holomorphic = false;

  // Germ G(zeta) = sum over r in Z of phi(|r|) zeta^r.
  std::map<long, Rat> g;
  if (mult.phi0() != 0) g[0] = mult.phi0();
  for (auto& [r, v] : mult.phi_support()) {
    g[r] += v;
    g[-r] += v;
  }
  tb.germ = LaurentPoly::from_terms(g);

  // Baby block b(zeta) = zeta^(-B) prod (zeta^r - 1)^phi(r). Only defined
  // as a Laurent polynomial when the block is holomorphic (nu >= 0); we
  // compute it on the doubled grid when B is a half-integer and cross-check
  // against the cyclotomic form prod Phi_d(zeta)^nu(d).
  if (tb.holomorphic) {
    long twoB = sum_r_phi;
    bool doubled = (twoB % 2) != 0;
    long scale = doubled ? 2 : 1;
    LaurentPoly num = LaurentPoly::constant(1), den = LaurentPoly::constant(1);
    for (auto& [r, v] : mult.phi_support()) {
      LaurentPoly f = LaurentPoly::from_terms({{scale * r, 1}, {0, -1}});
      for (long i = 0; i < std::abs(v); ++i)
        (v > 0 ? num : den) = (v > 0 ? num : den) * f;
    }
    auto [q, rem] = lp_divide(num.shifted(doubled ? -twoB : 0), den);
    if (!rem.is_zero())
      throw std::logic_error("tb_invariants: baby block not polynomial");
    LaurentPoly baby = doubled ? q : q.shifted(-twoB / 2);
    // Cross-check: same polynomial from the cyclotomic factorisation.
    LaurentPoly cyc = LaurentPoly::constant(1);
    for (auto& [d, v] : mult.nu_support()) {
      LaurentPoly f = doubled ? cyclotomic(d).substituted_power(2)
                              : cyclotomic(d);
      for (long i = 0; i < v; ++i) cyc = cyc * f;
    }
    cyc = doubled ? cyc.shifted(-twoB) : cyc.shifted(-twoB / 2);
    if (!(cyc == baby))
      throw std::logic_error("tb_invariants: baby-block formulas disagree");
    // When B is a half-integer the stored polynomial lives on the doubled
    // grid (variable zeta^(1/2)); basic blocks always land on the integer
    // grid.
    tb.baby = baby;
  }
  return tb;
}

namespace {

// theta_r on the doubled zeta grid, exact through relative q-order L:
// q^(1/8) sum_{j>=0} (-1)^j q^(j(j+1)/2) (zh^(r(2j+1)) - zh^(-r(2j+1))).
QSeriesTrunc theta_factor(long r, long L) {
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  for (long j = 0;; ++j) {
    long e = j * (j + 1) / 2;
    if (e > L) break;
    Rat s = (j % 2 == 0) ? 1 : -1;
    c[static_cast<std::size_t>(e)] =
        c[static_cast<std::size_t>(e)] +
        LaurentPoly::from_terms({{r * (2 * j + 1), s}, {-r * (2 * j + 1), -s}});
  }
  return QSeriesTrunc(Rat(1, 8), std::move(c));
}

// eta, exact through relative q-order L: q^(1/24) sum_j (-1)^j q^(j(3j-1)/2).
QSeriesTrunc eta_factor(long L) {
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  for (long j = -L - 1; j <= L + 1; ++j) {
    long e = j * (3 * j - 1) / 2;
    if (e < 0 || e > L) continue;
    c[static_cast<std::size_t>(e)] =
        c[static_cast<std::size_t>(e)] +
        LaurentPoly::constant((j % 2 == 0) ? 1 : -1);
  }
  return QSeriesTrunc(Rat(1, 24), std::move(c));
}

}  // namespace

QSeriesTrunc tb_expand_doubled(const ThetaBlock& tb, long q_order) {
  long L = q_order - static_cast<long>(floor_div(tb.A).get_si());
  if (L < 0) throw std::domain_error("tb_expand: q_order below leading exponent");
  long e_eta = tb.mult.phi0();
  QSeriesTrunc num = QSeriesTrunc::one(L), den = QSeriesTrunc::one(L);
  for (auto& [r, v] : tb.mult.phi_support()) {
    e_eta -= v;
    QSeriesTrunc p = series_mul_pow(theta_factor(r, L), std::abs(v));
    (v > 0 ? num : den) = (v > 0 ? num : den) * p;
  }
  if (e_eta != 0) {
    QSeriesTrunc p = series_mul_pow(eta_factor(L), std::abs(e_eta));
    (e_eta > 0 ? num : den) = (e_eta > 0 ? num : den) * p;
  }
  QSeriesTrunc res = series_divide(num, den);
  if (res.offset() != tb.A)
    throw std::logic_error("tb_expand: leading exponent mismatch");
  return res;
}

QSeriesTrunc tb_expand(const ThetaBlock& tb, long q_order) {
  return tb_expand_doubled(tb, q_order).zeta_halved();
}

Rat tb_ord_at(const ThetaBlock& tb, const Rat& x) {
  Rat acc = Rat(tb.mult.phi0()) / 24;
  for (auto& [r, v] : tb.mult.phi_support()) {
    Rat rx = Rat(r) * x;
    Rat f = rx - Rat(floor_div(rx));
    acc += Rat(v) * ((f * f - f) / 2 + Rat(1, 12));
  }
  return acc;
}

OrdResult tb_ord(const ThetaBlock& tb) {
  OrdResult out;
  // Breakpoints: j/r for every r in the support (plus the period ends).
  std::vector<Rat> bp = {Rat(0), Rat(1)};
  for (auto& [r, v] : tb.mult.phi_support()) {
    (void)v;
    for (long j = 1; j < r; ++j) {
      Rat q(j, r);
      q.canonicalize();
      bp.push_back(q);
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  out.Ord = tb_ord_at(tb, 0);
  out.argmin = 0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const Rat& x0 = bp[i];
    const Rat& x1 = bp[i + 1];
    Rat mid = (x0 + x1) / 2;
    // On the open interval, floor(r x) is constant; expand
    // ((rx-f)^2-(rx-f))/2 into a single quadratic a x^2 + b x + c.
    Rat a = 0, b = 0, c = Rat(tb.mult.phi0()) / 24;
    for (auto& [r, v] : tb.mult.phi_support()) {
      Rat f = Rat(floor_div(Rat(r) * mid));
      a += Rat(v * r * r) / 2;
      b += Rat(v) * (-(2 * f + 1) * r) / 2;
      c += Rat(v) * ((f * f + f) / 2 + Rat(1, 12));
    }
    out.pieces.push_back({x0, x1, a, b, c});
    auto consider = [&out](const Rat& x, const Rat& val) {
      if (val < out.Ord) {
        out.Ord = val;
        out.argmin = x;
      }
    };
    consider(x1, tb_ord_at(tb, x1));
    if (a > 0) {
      Rat xv = -b / (2 * a);
      if (x0 < xv && xv < x1) consider(xv, a * xv * xv + b * xv + c);
    }
  }
  out.is_cusp = out.Ord > 0;
  return out;
}

bool mult_is_cusp(const MultiplicityFunction& mult) {
  // 24 b^2 ord(a/b), exactly, in machine integers (supports r <= ~10^3).
  const auto& phi = mult.phi_support();
  long long phi0 = mult.phi0();
  auto ord24 = [&](long long a, long long b) {
    long long acc = phi0 * b * b;
    for (auto& [r, v] : phi) {
      long long mm = (r * a) % b;
      acc += v * (12 * (mm * mm - mm * b) + 2 * b * b);
    }
    return acc;
  };
  // ord is symmetric about x = 1/2, so scan [0, 1/2] only. A cheap grid
  // prescreen rejects the vast majority of non-cusp blocks.
  for (long a = 1; 2 * a <= 24; ++a)
    if (ord24(a, 24) <= 0) return false;
  // Exact minimum: breakpoints j/r and the interior vertex of each piece.
  std::vector<std::pair<long, long>> bp = {{0, 1}, {1, 2}};
  for (auto& [r, v] : phi) {
    (void)v;
    for (long j = 1; 2 * j < r; ++j) {
      long g = std::gcd(j, r);
      bp.emplace_back(j / g, r / g);
    }
  }
  auto less = [](const std::pair<long, long>& x, const std::pair<long, long>& y) {
    return x.first * y.second < y.first * x.second;
  };
  std::sort(bp.begin(), bp.end(), less);
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (ord24(bp[i].first, bp[i].second) <= 0) return false;
  long long alpha = 0;
  for (auto& [r, v] : phi) alpha += v * 12 * r * r;  // = 24 m
  if (alpha <= 0) return true;  // linear pieces: endpoint checks suffice
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    long long n0 = bp[i].first, d0 = bp[i].second;
    long long n1 = bp[i + 1].first, d1 = bp[i + 1].second;
    // floor(r * midpoint) is the constant floor on the open interval.
    long long beta = 0, gamma = phi0;
    long long mn = n0 * d1 + n1 * d0, md = 2 * d0 * d1;
    for (auto& [r, v] : phi) {
      long long f = (r * mn) / md;
      beta += -v * 12 * (2 * f + 1) * r;
      gamma += v * (12 * (f * f + f) + 2);
    }
    // Vertex x* = -beta/(2 alpha), compared by cross products (alpha > 0):
    // x0 < x*  <=>  n0 * 2 alpha < -beta * d0
    // x* < x1  <=>  -beta * d1 < n1 * 2 alpha
    if (n0 * 2 * alpha < -beta * d0 && -beta * d1 < n1 * 2 * alpha) {
      // 24 ord(x*) = gamma - beta^2/(4 alpha); sign of 4 alpha gamma - beta^2.
      if (4 * alpha * gamma - beta * beta <= 0) return false;
    }
  }
  return true;
}

namespace {

// Ascending-multiset DFS for the without-denominator enumeration:
// parts x_1 <= ... <= x_l, sum of squares = target.
void enum_parts(long parts_left, long min_x, long target,
                std::vector<long>& cur, long k,
                const std::function<void(MultiplicityFunction&&)>& sink) {
  if (parts_left == 0) {
    if (target != 0) return;
    std::map<long, long> phi;
    for (long x : cur) ++phi[x];
    sink(MultiplicityFunction::from_phi(2 * k, phi));
    return;
  }
  for (long x = min_x; x * x * parts_left <= target; ++x) {
    cur.push_back(x);
    enum_parts(parts_left - 1, x, target - x * x, cur, k, sink);
    cur.pop_back();
  }
}

// Ascending-multiset DFS over atoms x >= 2 with sum of atom weights = target.
void enum_atoms(long min_x, long target, std::vector<long>& cur, long k,
                long nu1, const std::function<void(MultiplicityFunction&&)>& sink) {
  if (target == 0) {
    std::map<long, long> nu;
    if (nu1 != 0) nu[1] = nu1;
    for (long x : cur) ++nu[x];
    sink(MultiplicityFunction::from_nu(2 * k, nu));
    return;
  }
  // atom_weight(x) >= x^2/2, so x^2/2 > target ends the scan.
  for (long x = min_x; x * x <= 2 * target; ++x) {
    long w = atom_weight(x);
    if (w > target) continue;  // weights are not monotone term-by-term
    cur.push_back(x);
    enum_atoms(x, target - w, cur, k, nu1, sink);
    cur.pop_back();
  }
}

void enumerate_mults(long k, long m, long A, bool allow_denominator,
                     const std::function<void(MultiplicityFunction&&)>& sink) {
  if (12 * A - k < 0)
    throw std::invalid_argument("tb_enumerate: 12A - k < 0, no blocks");
  std::vector<long> cur;
  if (!allow_denominator) {
    enum_parts(12 * A - k, 1, 2 * m, cur, k, sink);
  } else {
    long nu1 = 12 * A - k;
    long target = 2 * m - nu1;
    if (target >= 0) enum_atoms(2, target, cur, k, nu1, sink);
  }
}

}  // namespace

std::vector<ThetaBlock> tb_enumerate_raw(long k, long m, long A,
                                         bool allow_denominator) {
  std::vector<ThetaBlock> out;
  enumerate_mults(k, m, A, allow_denominator,
                  [&out, allow_denominator](MultiplicityFunction&& mu) {
                    ThetaBlock tb = tb_invariants(mu);
                    if (!allow_denominator || tb.has_denominator)
                      out.push_back(std::move(tb));
                  });
  return out;
}

std::vector<ThetaBlock> tb_enumerate(long k, long m, long A,
                                     bool allow_denominator) {
  std::vector<ThetaBlock> out;
  enumerate_mults(k, m, A, allow_denominator,
                  [&out, allow_denominator](MultiplicityFunction&& mu) {
                    if (!mult_is_cusp(mu)) return;
                    ThetaBlock tb = tb_invariants(mu);
                    if (!allow_denominator || tb.has_denominator)
                      out.push_back(std::move(tb));
                  });
  return out;
}

bool tb_wh_quotient_test(const ThetaBlock& tb) {
  for (auto& [r, v] : tb.mult.nu_support()) {
    (void)v;
    long odd = r;
    while (odd % 2 == 0) odd /= 2;
    // Walk the doubling chain from the odd part; covers every needed pair.
    for (long s = odd; s <= tb.mult.nu_support().rbegin()->first; s *= 2)
      if (tb.mult.nu(s) < tb.mult.nu(2 * s)) return false;
  }
  return true;
}

std::vector<std::pair<long, long>> ct_bounds(long k, long N) {
  if (N < 1 || N > 5)
    throw std::invalid_argument("ct_bounds: established only for N <= 5");
  std::vector<std::pair<long, long>> out;
  for (long c = 1; (12 - 2 * N) * c <= k; ++c) {
    // t >= max{(k-12c)/12, 0} and t <= (k-(12-2N)c)/12, integers.
    long lo = 0;
    if (k - 12 * c > 0) lo = (k - 12 * c + 11) / 12;  // ceil
    long hi_num = k - (12 - 2 * N) * c;
    long hi = hi_num / 12;  // floor (hi_num >= 0 by loop bound)
    for (long t = lo; t <= hi; ++t) out.emplace_back(c, t);
  }
  return out;
}

MultiplicityFunction parse_theta_block(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  long phi0 = 0;
  std::map<long, long> phi;
  while (is >> tok) {
    auto caret = tok.find('^');
    if (caret == std::string::npos || caret == 0 || caret + 1 == tok.size())
      throw std::invalid_argument("parse_theta_block: bad token '" + tok + "'");
    long base, e;
    try {
      std::size_t p1 = 0, p2 = 0;
      base = std::stol(tok.substr(0, caret), &p1);
      e = std::stol(tok.substr(caret + 1), &p2);
      if (p1 != caret || p2 != tok.size() - caret - 1) throw std::exception();
    } catch (...) {
      throw std::invalid_argument("parse_theta_block: bad token '" + tok + "'");
    }
    if (base < 0)
      throw std::invalid_argument("parse_theta_block: negative base");
    if (base == 0)
      phi0 += e;
    else
      phi[base] += e;
  }
  return MultiplicityFunction::from_phi(phi0, phi);
}

std::string theta_block_str(const MultiplicityFunction& m) {
  std::ostringstream os;
  os << "0^" << m.phi0();
  for (auto& [r, v] : m.phi_support()) os << ' ' << r << '^' << v;
  return os.str();
}

}  // namespace pbp
