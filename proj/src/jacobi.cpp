#include "pbp/jacobi.hpp"

#include "pbp/ezbasis.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pbp {

namespace {

long rat_to_long(const Rat& x, const char* what) {
  if (!is_integer(x)) throw std::domain_error(std::string(what) + ": not an integer");
  return static_cast<long>(x.get_num().get_si());
}

// a^(k-1) as an exact rational (k may be <= 0).
Rat hecke_scale(long a, long k) {
  if (a == 1) return Rat(1);
  Int p;
  if (k >= 1) {
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(a),
                  static_cast<unsigned long>(k - 1));
    return Rat(p);
  }
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(a),
                static_cast<unsigned long>(1 - k));
  Rat s = Rat(1) / Rat(p);
  s.canonicalize();
  return s;
}

// Flattens the series onto a shared (q, zeta) window: q runs over the
// integer grid from the smallest offset through the smallest
// known_through; coefficients below a series' own offset are exact zeros.
std::vector<std::vector<Rat>> flatten_common(
    const std::vector<const QSeriesTrunc*>& fs) {
  if (fs.empty()) return {};
  Rat qlo = fs[0]->offset(), qhi = fs[0]->known_through();
  for (auto* f : fs) {
    qlo = std::min(qlo, f->offset());
    qhi = std::min(qhi, f->known_through());
  }
  for (auto* f : fs)
    if (!is_integer(f->offset() - qlo))
      throw std::domain_error("flatten_common: offsets on different q-grids");
  if (qhi < qlo) throw TruncationDepthError(qlo);
  long nq = rat_to_long(qhi - qlo, "flatten_common: window length") + 1;
  long zlo = 0, zhi = 0;
  bool any = false;
  for (auto* f : fs)
    for (long n = 0; n <= f->trunc_order(); ++n) {
      if (f->offset() + n > qhi) break;
      const LaurentPoly& c = f->coeff_rel(n);
      if (c.is_zero()) continue;
      if (!any) {
        zlo = c.lo();
        zhi = c.hi();
        any = true;
      } else {
        zlo = std::min(zlo, c.lo());
        zhi = std::max(zhi, c.hi());
      }
    }
  long nz = any ? zhi - zlo + 1 : 1;
  std::vector<std::vector<Rat>> out;
  out.reserve(fs.size());
  for (auto* f : fs) {
    std::vector<Rat> v(static_cast<std::size_t>(nq * nz), Rat(0));
    for (long n = 0; n <= f->trunc_order(); ++n) {
      Rat e = f->offset() + n;
      if (e > qhi) break;
      long qi = rat_to_long(e - qlo, "flatten_common: q-index");
      f->coeff_rel(n).for_each_term([&](long r, const Rat& c) {
        if (r < zlo || r > zhi) return;
        v[static_cast<std::size_t>(qi * nz + (r - zlo))] = c;
      });
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Equality of two truncations through the shorter window, counting
// below-offset coefficients as exact zeros.
bool equal_through_common(const QSeriesTrunc& a, const QSeriesTrunc& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (!is_integer(a.offset() - b.offset())) return false;
  auto flat = flatten_common({&a, &b});
  return flat[0] == flat[1];
}

}  // namespace

bool jacobi_symmetry_check(const JacobiTrunc& f) {
  const QSeriesTrunc& s = f.series;
  if (s.is_zero()) return true;
  long n0 = rat_to_long(s.offset(), "jacobi_symmetry_check: offset");
  long n1 = rat_to_long(s.known_through(), "jacobi_symmetry_check: window");
  for (long n = n0; n <= n1; ++n) {
    const LaurentPoly& c = s.coeff_abs(n);
    bool ok = true;
    c.for_each_term([&](long r, const Rat& v) {
      for (long lam : {1L, -1L}) {
        long n2 = n - lam * r + lam * lam * f.m;
        long r2 = r - 2 * lam * f.m;
        if (n2 < n0 || n2 > n1) continue;
        if (s.coeff_abs(n2).coeff(r2) != v) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

JacobiTrunc v_apply(const JacobiTrunc& f, long ell) {
  if (ell < 1) throw std::domain_error("v_apply: ell must be positive");
  if (ell == 1) return f;
  const QSeriesTrunc& s = f.series;
  if (s.is_zero()) {
    JacobiTrunc out = f;
    out.m = f.m * ell;
    return out;
  }
  long n0 = rat_to_long(s.offset(), "v_apply: offset");
  long T = rat_to_long(s.known_through(), "v_apply: window");
  long n_out_lo = n0 >= 0 ? (n0 + ell - 1) / ell : n0 * ell;
  long n_out_hi = T >= 0 ? T / ell : -((-T + ell - 1) / ell);
  if (n_out_hi < n_out_lo)
    throw TruncationDepthError(Rat(ell) * std::max(n_out_lo, 0L));
  std::vector<LaurentPoly> coeffs;
  coeffs.reserve(static_cast<std::size_t>(n_out_hi - n_out_lo + 1));
  for (long n = n_out_lo; n <= n_out_hi; ++n) {
    std::map<long, Rat> terms;
    for (long a : divisors(ell)) {
      if (n % a != 0) continue;
      long n2 = (n / a) * (ell / a);
      if (n2 < n0 || n2 > T) continue;  // below offset: exact zero
      Rat s_a = hecke_scale(a, f.k);
      s.coeff_abs(n2).for_each_term([&](long r2, const Rat& v) {
        Rat t = s_a * v;
        if (t != 0) terms[a * r2] += t;
      });
    }
    coeffs.push_back(LaurentPoly::from_terms(terms));
  }
  JacobiTrunc out;
  out.k = f.k;
  out.m = f.m * ell;
  out.kind = f.kind;
  out.series = QSeriesTrunc(Rat(n_out_lo), std::move(coeffs));
  return out;
}

JacobiTrunc v_apply_to(const JacobiTrunc& f, long ell, long q_order) {
  if (ell >= 1 && f.series.known_through() < Rat(ell) * q_order)
    throw TruncationDepthError(Rat(ell) * q_order);
  JacobiTrunc out = v_apply(f, ell);
  out.series = out.series.truncated_through(q_order);
  return out;
}

std::vector<JacobiTrunc> grit_lift(const JacobiTrunc& phi, long xi_order,
                                   long q_order) {
  std::vector<JacobiTrunc> fj;
  for (long ell = 1; ell <= xi_order; ++ell)
    fj.push_back(v_apply_to(phi, ell, q_order));
  return fj;
}

QSeriesTrunc delta_series(long q_order) {
  return tb_expand(tb_invariants(MultiplicityFunction::from_phi(24, {})),
                   q_order);
}

std::vector<QSeriesTrunc> delta_power_basis(long i, const BasisTrunc& basis12i) {
  if (i < 1) throw std::domain_error("delta_power_basis: i must be >= 1");
  if (basis12i.k != 12 * i)
    throw std::domain_error("delta_power_basis: basis weight is not 12 i");
  long N = basis12i.m;
  long need = N / 4 + i;
  if (basis12i.q_order < need) throw TruncationDepthError(Rat(need));
  QSeriesTrunc dpow = series_mul_pow(delta_series(basis12i.q_order), i);
  std::vector<QSeriesTrunc> out;
  out.reserve(basis12i.elements.size());
  for (auto& e : basis12i.elements)
    out.push_back(series_divide(e.form.series, dpow).truncated_through(N / 4));
  return out;
}

long divisibility_bound(const ThetaBlock& tb) {
  long k = rat_to_long(tb.k, "divisibility_bound: weight");
  long best = 0;
  for (auto& [r, nu] : tb.mult.nu_support()) {
    if (nu <= 0) continue;
    Rat val = Rat((k + nu - 1) * r * atom_weight(r)) / 12;
    long b = static_cast<long>(floor_div(val).get_si());
    best = std::max(best, b);
  }
  return best;
}

long confirm_required_i(const QSeriesTrunc& psi, long N) {
  if (psi.is_zero()) return 0;
  long n_min = rat_to_long(psi.offset(), "confirm_required_i: offset");
  long i = std::max(0L, 1 - n_min);
  for (long n = 0; n <= psi.trunc_order(); ++n) {
    long nn = n_min + n;
    psi.coeff_rel(n).for_each_term([&](long r, const Rat&) {
      // least integer i with i > (r^2 - 4 n N) / (4 N)
      Rat v = Rat(r * r - 4 * nn * N) / (4 * N);
      long cand = static_cast<long>(floor_div(v).get_si()) + 1;
      i = std::max(i, cand);
    });
  }
  return i;
}

std::optional<Confirmation> confirm_truncation(const QSeriesTrunc& psi, long N,
                                               const BasisTrunc& basis12i,
                                               const QSeriesTrunc* subtract) {
  if (basis12i.m != N)
    throw std::domain_error("confirm_truncation: basis index does not match N");
  if (basis12i.k % 12 != 0)
    throw std::domain_error("confirm_truncation: basis weight is not 12 i");
  long i = basis12i.k / 12;
  QSeriesTrunc target = subtract ? psi - *subtract : psi;
  long need = confirm_required_i(target, N);
  if (i < need)
    throw std::domain_error("confirm_truncation: needs Delta-power i=" +
                            std::to_string(need) +
                            " beyond the supplied basis (i=" +
                            std::to_string(i) + ")");
  std::vector<QSeriesTrunc> quots = delta_power_basis(i, basis12i);
  std::vector<const QSeriesTrunc*> all;
  for (auto& q : quots) all.push_back(&q);
  all.push_back(&target);
  auto flat = flatten_common(all);
  std::vector<Rat> tvec = std::move(flat.back());
  flat.pop_back();
  auto comb = rat_membership(flat, tvec);
  if (!comb) return std::nullopt;
  Confirmation c;
  c.i = i;
  c.combination = std::move(*comb);
  c.used_subtraction = subtract != nullptr;
  return c;
}

std::optional<std::vector<Rat>> confirm_by_quotients(
    const QSeriesTrunc& psi, const std::vector<QSeriesTrunc>& pool) {
  if (pool.empty()) return psi.is_zero() ? std::optional(std::vector<Rat>{})
                                         : std::nullopt;
  std::vector<const QSeriesTrunc*> all;
  for (auto& f : pool) all.push_back(&f);
  all.push_back(&psi);
  auto flat = flatten_common(all);
  std::vector<Rat> tvec = std::move(flat.back());
  flat.pop_back();
  return rat_membership(flat, tvec);
}

std::optional<InflationWitness> confirm_by_inflation(
    const QSeriesTrunc& psi, const ThetaBlock& phi,
    const std::vector<QSeriesTrunc>& inflations) {
  for (std::size_t idx = 0; idx < inflations.size(); ++idx) {
    const QSeriesTrunc& theta = inflations[idx];
    if (theta.is_zero()) continue;
    long depth = static_cast<long>(floor_div(theta.known_through()).get_si()) + 1;
    QSeriesTrunc phix = tb_expand(phi, depth);
    QSeriesTrunc q;
    try {
      q = series_divide(theta, phix);
    } catch (const SeriesDivideError&) {
      continue;
    }
    if (equal_through_common(q, psi)) {
      InflationWitness w;
      w.index = idx;
      w.quotient = std::move(q);
      return w;
    }
  }
  return std::nullopt;
}

BasisTrunc provision_basis(long k, long m, long q_order,
                           const BasisSources& sources) {
  BasisTrunc basis;
  basis.k = k;
  basis.m = m;
  basis.q_order = q_order;
  std::vector<BasisElement> candidates;
  if (sources.theta_blocks) {
    // Leading exponent A = (k + l)/12 with l = number of theta factors;
    // l >= 1 parts each contribute >= 1 to sum x^2 = 2m, so l <= 2m.
    long l0 = ((-k) % 12 + 12) % 12;
    if (l0 == 0) l0 = 12;
    for (long l = l0; l <= 2 * m; l += 12) {
      long A = (k + l) / 12;
      for (auto& tb : tb_enumerate(k, m, A, false)) {
        BasisElement e;
        e.form.k = k;
        e.form.m = m;
        e.form.kind = JacobiKind::Cusp;
        e.form.series = tb_expand(tb, q_order);
        e.provenance = theta_block_str(tb.mult);
        candidates.push_back(std::move(e));
      }
    }
  }
  if (sources.ez) {
    BasisTrunc eb = ez_cusp_basis(k, m, q_order);
    for (auto& e : eb.elements) candidates.push_back(std::move(e));
  }
  for (auto& path : sources.files) {
    BasisTrunc fb = read_basis_file(path);
    if (fb.k != k || fb.m != m)
      throw std::runtime_error("provision_basis: basis file " + path +
                               " has (k=" + std::to_string(fb.k) +
                               ", m=" + std::to_string(fb.m) +
                               "), expected (k=" + std::to_string(k) +
                               ", m=" + std::to_string(m) + ")");
    if (fb.q_order < q_order)
      throw std::runtime_error("provision_basis: basis file " + path +
                               " stores through q^" +
                               std::to_string(fb.q_order) +
                               " < required q^" + std::to_string(q_order));
    for (auto& e : fb.elements) {
      BasisElement c;
      c.form = e.form;
      c.form.series = c.form.series.truncated_through(q_order);
      c.provenance = "file " + path + " element " + e.provenance;
      candidates.push_back(std::move(c));
    }
  }
  // Greedy maximal independent subset in the deterministic offer order.
  std::vector<std::vector<Rat>> kept;
  if (!candidates.empty()) {
    std::vector<const QSeriesTrunc*> all;
    for (auto& c : candidates) all.push_back(&c.form.series);
    auto flat = flatten_common(all);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      bool zero = std::all_of(flat[i].begin(), flat[i].end(),
                              [](const Rat& v) { return v == 0; });
      if (zero) continue;
      if (kept.empty() || !rat_membership(kept, flat[i])) {
        kept.push_back(flat[i]);
        basis.elements.push_back(std::move(candidates[i]));
      }
    }
  }
  return basis;
}

namespace {

[[noreturn]] void bad_basis(const std::string& name, long lineno,
                            const std::string& why) {
  throw std::runtime_error("basis file " + name + ":" + std::to_string(lineno) +
                           ": " + why);
}

}  // namespace

BasisTrunc read_basis_file(std::istream& in, const std::string& name) {
  BasisTrunc basis;
  std::string line;
  long lineno = 0;
  // Header: k=<int> m=<int> qorder=<int>
  if (!std::getline(in, line)) bad_basis(name, 1, "missing header");
  ++lineno;
  {
    std::istringstream hs(line);
    std::string tk, tm, tq, extra;
    if (!(hs >> tk >> tm >> tq) || (hs >> extra) ||
        tk.rfind("k=", 0) != 0 || tm.rfind("m=", 0) != 0 ||
        tq.rfind("qorder=", 0) != 0)
      bad_basis(name, lineno, "malformed header '" + line + "'");
    try {
      basis.k = std::stol(tk.substr(2));
      basis.m = std::stol(tm.substr(2));
      basis.q_order = std::stol(tq.substr(7));
    } catch (const std::exception&) {
      bad_basis(name, lineno, "malformed header '" + line + "'");
    }
  }
  if (basis.m <= 0) bad_basis(name, lineno, "index m must be positive");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream es(line);
    std::string kw, id, extra;
    if (!(es >> kw >> id) || kw != "element" || (es >> extra))
      bad_basis(name, lineno, "expected 'element <id>', got '" + line + "'");
    std::map<long, std::map<long, Rat>> rows;
    bool closed = false;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream cs(line);
      std::string f0;
      cs >> f0;
      if (f0 == "end") {
        std::string junk;
        if (cs >> junk) bad_basis(name, lineno, "trailing garbage after 'end'");
        closed = true;
        break;
      }
      std::string f1, f2, junk;
      if (!(cs >> f1 >> f2) || (cs >> junk))
        bad_basis(name, lineno, "expected '<n> <r> <coeff>', got '" + line + "'");
      long n, r;
      Rat c;
      try {
        n = std::stol(f0);
        r = std::stol(f1);
        c = parse_rat(f2);
      } catch (const std::exception&) {
        bad_basis(name, lineno, "malformed coefficient line '" + line + "'");
      }
      if (n > basis.q_order)
        bad_basis(name, lineno, "coefficient beyond the declared qorder");
      if (c != 0) rows[n][r] += c;
    }
    if (!closed) bad_basis(name, lineno, "unterminated element '" + id + "'");
    BasisElement e;
    e.form.k = basis.k;
    e.form.m = basis.m;
    e.provenance = id;
    if (rows.empty()) {
      e.form.series = QSeriesTrunc::zero(basis.q_order);
      e.form.kind = JacobiKind::Weak;
    } else {
      long lo = rows.begin()->first;
      std::vector<LaurentPoly> coeffs;
      bool cusp = lo >= 1;
      for (long n = lo; n <= basis.q_order; ++n) {
        auto it = rows.find(n);
        if (it == rows.end()) {
          coeffs.emplace_back();
          continue;
        }
        for (auto& [r, v] : it->second)
          if (4 * n * basis.m - r * r <= 0) cusp = false;
        coeffs.push_back(LaurentPoly::from_terms(it->second));
      }
      e.form.series = QSeriesTrunc(Rat(lo), std::move(coeffs));
      e.form.kind = cusp ? JacobiKind::Cusp
                         : (lo >= 0 ? JacobiKind::Weak
                                    : JacobiKind::WeaklyHolomorphic);
    }
    basis.elements.push_back(std::move(e));
  }
  return basis;
}

BasisTrunc read_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("basis file " + path + ": cannot open");
  return read_basis_file(in, path);
}

void write_basis_file(std::ostream& out, const BasisTrunc& basis) {
  out << "k=" << basis.k << " m=" << basis.m << " qorder=" << basis.q_order
      << "\n";
  long idx = 0;
  for (auto& e : basis.elements) {
    out << "element e" << idx++ << "\n";
    const QSeriesTrunc& s = e.form.series;
    if (!s.is_zero()) {
      for (long n = 0; n <= s.trunc_order(); ++n) {
        Rat ea = s.offset() + n;
        if (ea > basis.q_order) break;
        s.coeff_rel(n).for_each_term([&](long r, const Rat& c) {
          out << rat_str(ea) << " " << r << " " << rat_str(c) << "\n";
        });
      }
    }
    out << "end\n";
  }
}

void write_basis_file(const std::string& path, const BasisTrunc& basis) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("basis file " + path + ": cannot open");
  write_basis_file(out, basis);
}

}  // namespace pbp
