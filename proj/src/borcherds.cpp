#include "pbp/borcherds.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pbp {

namespace {

long offset_long(const QSeriesTrunc& s) {
  if (!is_integer(s.offset()))
    throw std::domain_error("source-form truncation off the integer q-grid");
  return static_cast<long>(s.offset().get_num().get_si());
}

long known_long(const QSeriesTrunc& s) {
  return static_cast<long>(Rat(s.known_through()).get_num().get_si());
}

// Generalized binomial coefficient over integer upper argument.
Int binom_int(long e, long j) {
  Int r;
  mpz_bin_ui(r.get_mpz_t(), Int(e).get_mpz_t(), static_cast<unsigned long>(j));
  return r;
}

// The largest j allowed by the minimum conceivable discriminant:
// j^2 (4nN - r^2) >= 4 n_low N - N^2.
long humbert_jmax(long N, long n, long r, long n_low) {
  long neg_disc = r * r - 4 * n * N;  // > 0
  long budget = N * N - 4 * n_low * N;
  long j = 1;
  while ((j + 1) * (j + 1) * neg_disc <= budget) ++j;
  return j;
}

}  // namespace

PsiCandidate make_psi_candidate(long N, const QSeriesTrunc& coeffs) {
  if (N <= 0) throw std::domain_error("make_psi_candidate: N must be positive");
  PsiCandidate psi;
  psi.N = N;
  psi.coeffs = coeffs;
  if (!coeffs.is_zero()) {
    long lo = offset_long(coeffs);
    long hi = known_long(coeffs);
    for (long n = lo; n <= hi; ++n) {
      coeffs.coeff_abs(n).for_each_term([&](long r, const Rat& v) {
        if (4 * n * N - r * r > 0) return;
        if (!is_integer(v))
          throw std::domain_error(
              "make_psi_candidate: non-integral singular coefficient at q^" +
              std::to_string(n) + " zeta^" + std::to_string(r));
        if (r >= -N && r < N) psi.singular_vector[{n, r}] = v.get_num();
      });
    }
    if (lo <= 0 && hi >= 0) psi.germ = coeffs.coeff_abs(0);
  }
  if (!is_integer(psi_A(psi)))
    throw std::domain_error("make_psi_candidate: non-integral invariant A");
  return psi;
}

Rat psi_A(const PsiCandidate& psi) {
  Rat a = psi.germ.coeff(0) / 24;
  psi.germ.for_each_term([&](long r, const Rat& v) {
    if (r >= 1) a += v / 12;
  });
  a.canonicalize();
  return a;
}

Classification classify(const PsiCandidate& psi) {
  Classification cl;
  const Rat& c00 = psi.germ.coeff(0);
  if (!is_integer(c00) || c00.get_num() % 2 != 0)
    throw std::domain_error("classify: c(0,0) must be an even integer");
  cl.k = static_cast<long>(c00.get_num().get_si()) / 2;
  if (!psi.coeffs.is_zero()) {
    long lo = offset_long(psi.coeffs);
    for (long n = lo; n <= -1; ++n) {
      const Rat& c = psi.coeffs.coeff_abs(n).coeff(0);
      if (!is_integer(c))
        throw std::domain_error("classify: non-integral principal part");
      cl.D0 += sigma0(-n) * static_cast<long>(c.get_num().get_si());
    }
  }
  cl.eps = (cl.k + cl.D0) % 2 == 0 ? 1 : -1;
  cl.symmetry = cl.D0 % 2 == 0 ? 1 : -1;
  return cl;
}

namespace {

// Looks up c(j^2 n, j r) through the theta-decomposition invariance:
// the coefficient depends only on the discriminant 4 n' N - r'^2 and on
// r' mod 2N, so every contribution reduces into the window r0 in [-N, N)
// with q-exponent n0 = (disc + r0^2) / (4N) <= N/4.  Indices below the
// stored offset lie under the pole bound of the true form and vanish.
Rat reduced_coeff(const QSeriesTrunc& s, long N, long n, long r, long j) {
  long disc = j * j * (4 * n * N - r * r);  // < 0
  long r0 = ((j * r) % (2 * N) + 3 * N) % (2 * N) - N;  // in [-N, N)
  long num = disc + r0 * r0;
  // num is divisible by 4N because r0^2 == (jr)^2 mod 4N.
  long n0 = num / (4 * N);
  if (n0 < offset_long(s)) return Rat(0);
  if (n0 > known_long(s)) throw TruncationDepthError(Rat(n0));
  return s.coeff_abs(n0).coeff(r0);
}

}  // namespace

Rat humbert_multiplicity(const QSeriesTrunc& s, long N, long n, long r,
                         long n_low) {
  if (4 * n * N - r * r >= 0)
    throw std::domain_error("humbert_multiplicity: discriminant must be < 0");
  Rat acc = 0;
  if (s.is_zero()) return acc;
  long jmax = humbert_jmax(N, n, r, n_low);
  for (long j = 1; j <= jmax; ++j) acc += reduced_coeff(s, N, n, r, j);
  return acc;
}

namespace {

// True when some contributing coefficient c(j^2 n, j r) is nonzero.
bool humbert_touched(const QSeriesTrunc& s, long N, long n, long r,
                     long n_low) {
  if (s.is_zero()) return false;
  long jmax = humbert_jmax(N, n, r, n_low);
  for (long j = 1; j <= jmax; ++j)
    if (reduced_coeff(s, N, n, r, j) != 0) return true;
  return false;
}

// All (n, r) in the Humbert scan range for level N:
// n_low <= n < N/4, -N <= r < N, r^2 > 4nN.
template <typename F>
void humbert_scan(long N, long n_low, F&& visit) {
  for (long n = n_low; 4 * n < N; ++n)
    for (long r = -N; r < N; ++r)
      if (r * r > 4 * n * N) visit(n, r);
}

}  // namespace

std::vector<HumbertEntry> humbert_support(const PsiCandidate& psi, long t,
                                          long delta) {
  long n_low = delta - t;
  std::vector<HumbertEntry> out;
  humbert_scan(psi.N, n_low, [&](long n, long r) {
    if (!humbert_touched(psi.coeffs, psi.N, n, r, n_low)) return;
    Rat m = humbert_multiplicity(psi.coeffs, psi.N, n, r, n_low);
    if (!is_integer(m))
      throw std::logic_error("humbert_support: non-integral multiplicity");
    out.push_back({n, r, m.get_num()});
  });
  return out;
}

IlpProblem assemble_ilp(const PsiCandidate& psi0,
                        const std::vector<QSeriesTrunc>& H0, long t,
                        long delta, long cap,
                        std::vector<std::pair<long, long>>* rows) {
  long N = psi0.N;
  long n_low = delta - t;
  std::vector<std::pair<long, long>> pairs;
  humbert_scan(N, n_low, [&](long n, long r) {
    bool touched = humbert_touched(psi0.coeffs, N, n, r, n_low);
    for (std::size_t i = 0; !touched && i < H0.size(); ++i)
      touched = humbert_touched(H0[i], N, n, r, n_low);
    if (touched) pairs.push_back({n, r});
  });
  IlpProblem p;
  p.cap = cap;
  p.M = IntMatrix(static_cast<long>(pairs.size()), static_cast<long>(H0.size()));
  p.b.resize(pairs.size());
  for (std::size_t row = 0; row < pairs.size(); ++row) {
    auto [n, r] = pairs[row];
    Rat bv = humbert_multiplicity(psi0.coeffs, N, n, r, n_low);
    if (!is_integer(bv))
      throw std::logic_error("assemble_ilp: non-integral entry in b");
    p.b[row] = bv.get_num();
    for (std::size_t i = 0; i < H0.size(); ++i) {
      Rat mv = humbert_multiplicity(H0[i], N, n, r, n_low);
      if (!is_integer(mv))
        throw std::logic_error("assemble_ilp: non-integral entry in M");
      p.M.at(static_cast<long>(row), static_cast<long>(i)) = mv.get_num();
    }
  }
  if (rows) *rows = std::move(pairs);
  return p;
}

std::vector<JacobiTrunc> bp_expand_series(const BorcherdsRecord& rec,
                                          long xi_order, long q_order) {
  long A = rec.c + rec.t;
  long n_min = rec.psi.coeffs.is_zero() ? 0 : offset_long(rec.psi.coeffs);
  long nb = std::max(0L, -n_min);
  long depth = q_order - A + xi_order * nb + 1;
  JacobiTrunc psi_jt;
  psi_jt.k = 0;
  psi_jt.m = rec.psi.N;
  psi_jt.kind = JacobiKind::WeaklyHolomorphic;
  psi_jt.series = rec.psi.coeffs;
  // xi^N-graded coefficients of -Grit(psi): S[ell] = -(psi | V_ell).
  std::vector<QSeriesTrunc> S(static_cast<std::size_t>(xi_order) + 1);
  for (long ell = 1; ell <= xi_order; ++ell)
    S[static_cast<std::size_t>(ell)] =
        -v_apply_to(psi_jt, ell, std::max(depth, 0L)).series;
  // E = exp(sum S[ell] X^ell) by the logarithmic-derivative recurrence
  // m E_m = sum_ell ell S_ell E_{m-ell}.
  std::vector<QSeriesTrunc> E(static_cast<std::size_t>(xi_order) + 1);
  E[0] = QSeriesTrunc::one(std::max(depth, 0L));
  for (long m = 1; m <= xi_order; ++m) {
    QSeriesTrunc acc = S[1] * E[static_cast<std::size_t>(m - 1)] * Rat(1);
    for (long ell = 2; ell <= m; ++ell)
      acc = acc + S[static_cast<std::size_t>(ell)] *
                      E[static_cast<std::size_t>(m - ell)] * Rat(ell);
    E[static_cast<std::size_t>(m)] = acc * (Rat(1) / m);
  }
  // The exponential's grade-m coefficient reaches down to q^{-m nb}, so
  // the theta block must be known correspondingly deeper.
  QSeriesTrunc tb = tb_expand(rec.theta_block, q_order + xi_order * nb);
  bool want_integral = rec.psi.coeffs.integral();
  std::vector<JacobiTrunc> out;
  for (long m = 0; m <= xi_order; ++m) {
    QSeriesTrunc fm = tb * E[static_cast<std::size_t>(m)];
    if (!fm.is_zero() && fm.known_through() < q_order)
      throw TruncationDepthError(Rat(q_order));
    fm = fm.truncated_through(q_order);
    if (want_integral && !fm.integral())
      throw std::logic_error(
          "bp_expand_series: non-integral Fourier-Jacobi coefficient");
    JacobiTrunc f;
    f.k = rec.k;
    f.m = (rec.c + m) * rec.psi.N;
    f.kind = rec.cusp == "cusp" ? JacobiKind::Cusp : JacobiKind::Weak;
    f.series = fm;
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

// One xi^N-grade slice of the partial product, as exact (q, zeta) terms.
using Slice = std::map<long, std::map<long, Rat>>;

void slice_add(Slice& s, long n, long r, const Rat& v, long q_cap) {
  if (n > q_cap) return;
  Rat& dst = s[n][r];
  dst += v;
}

}  // namespace

std::vector<JacobiTrunc> bp_expand_product(const BorcherdsRecord& rec,
                                           long xi_order, long q_order) {
  const long A = rec.c + rec.t;
  const long N = rec.psi.N;
  const QSeriesTrunc& psi = rec.psi.coeffs;
  if (psi.is_zero())
    throw std::domain_error("bp_expand_product: empty source form");
  const long n_min = offset_long(psi);
  const long T = known_long(psi);
  const long nb = std::max(0L, -n_min);
  const long q_hi0 = q_order - A;           // relative to the q^A prefactor
  const long q_cap = q_hi0 + xi_order * nb; // keep room for principal pullback

  // Germ data: c(0, r) and the multiplicity function it induces.
  const LaurentPoly& germ = rec.psi.germ;
  std::map<long, long> phi_pos;
  long phi0 = 0;
  germ.for_each_term([&](long r, const Rat& v) {
    if (!is_integer(v))
      throw std::domain_error("bp_expand_product: non-integral germ");
    long e = static_cast<long>(v.get_num().get_si());
    if (r == 0)
      phi0 = e;
    else if (r > 0)
      phi_pos[r] = e;
    else if (germ.coeff(-r) != v)
      throw std::domain_error("bp_expand_product: asymmetric germ");
  });

  std::vector<Slice> F(static_cast<std::size_t>(xi_order) + 1);
  F[0][0][0] = 1;

  // (m = 0, n = 0, r < 0) factors: prod_{r>=1} (1 - zeta^{-r})^{phi(r)}
  //   = zeta^{-2B} prod_d Phi_d(zeta)^{nu(d)}.
  long twoB = 0;
  for (auto& [r, e] : phi_pos) twoB += r * e;
  LaurentPoly l00 = LaurentPoly::constant(1);
  for (auto& [d, nu] : nu_phi_convert(phi_pos, ConvertDirection::PhiToNu)) {
    if (nu < 0)
      throw std::domain_error(
          "bp_expand_product: negative nu (non-holomorphic baby factor)");
    for (long i = 0; i < nu; ++i) l00 = l00 * cyclotomic(d);
  }
  l00 = l00.shifted(-twoB);
  {
    Slice next;
    for (auto& [n, poly] : F[0])
      for (auto& [r, v] : poly)
        l00.for_each_term([&](long r2, const Rat& v2) {
          slice_add(next, n, r + r2, v * v2, q_cap);
        });
    F[0] = std::move(next);
  }

  // Applies (1 - q^n0 zeta^r0 xi^{m0 N})^e to the graded slices.
  auto apply_factor = [&](long n0, long r0, long m0, long e) {
    if (e == 0) return;
    long jmax;
    if (m0 >= 1)
      jmax = xi_order / m0;
    else
      jmax = n0 >= 1 ? q_cap / n0 : 0;
    if (n0 >= 1) jmax = std::min(jmax, q_cap / n0);
    if (jmax <= 0) return;
    std::vector<Rat> b(static_cast<std::size_t>(jmax) + 1);
    for (long j = 1; j <= jmax; ++j) {
      Int c = binom_int(e, j);
      if (j % 2 != 0) c = -c;
      b[static_cast<std::size_t>(j)] = Rat(c);
    }
    if (m0 == 0) {
      for (auto& slice : F) {
        Slice add;
        for (long j = 1; j <= jmax; ++j) {
          if (b[static_cast<std::size_t>(j)] == 0) continue;
          for (auto& [n, poly] : slice) {
            if (n + j * n0 > q_cap) continue;
            for (auto& [r, v] : poly)
              slice_add(add, n + j * n0, r + j * r0,
                        v * b[static_cast<std::size_t>(j)], q_cap);
          }
        }
        for (auto& [n, poly] : add)
          for (auto& [r, v] : poly) slice_add(slice, n, r, v, q_cap);
      }
    } else {
      for (long mt = xi_order; mt >= m0; --mt) {
        for (long j = 1; j <= jmax && j * m0 <= mt; ++j) {
          if (b[static_cast<std::size_t>(j)] == 0) continue;
          const Slice& src = F[static_cast<std::size_t>(mt - j * m0)];
          for (auto& [n, poly] : src)
            for (auto& [r, v] : poly)
              slice_add(F[static_cast<std::size_t>(mt)], n + j * n0,
                        r + j * r0, v * b[static_cast<std::size_t>(j)], q_cap);
        }
      }
    }
  };

  // (m = 0, n >= 1): exponents are the germ coefficients c(0, r).
  auto germ_exp = [&](long r) -> long {
    const Rat& v = germ.coeff(r);
    return static_cast<long>(v.get_num().get_si());
  };
  for (long n = 1; n <= q_cap; ++n) {
    apply_factor(n, 0, 0, phi0);
    for (auto& [r, e] : phi_pos) {
      apply_factor(n, r, 0, e);
      apply_factor(n, -r, 0, germ_exp(-r));
    }
  }

  // m >= 1 factors: exponents c(n m, r) from the stored truncation.
  for (long m = 1; m <= xi_order; ++m) {
    long n_lo = -((nb + m - 1) / m);  // smallest n with n m >= n_min
    while (n_lo * m < n_min) ++n_lo;
    long n_hi = q_hi0 + (xi_order - m) * nb;
    if (n_hi * m > T) throw TruncationDepthError(Rat(n_hi * m));
    for (long n = n_lo; n <= n_hi; ++n) {
      long nm = n * m;
      if (nm < n_min) continue;
      psi.coeff_abs(nm).for_each_term([&](long r, const Rat& v) {
        if (!is_integer(v))
          throw std::domain_error(
              "bp_expand_product: non-integral product exponent at q^" +
              std::to_string(nm));
        apply_factor(n, r, m, static_cast<long>(v.get_num().get_si()));
      });
    }
  }

  // Prefactor q^A zeta^B and conversion to truncated series.
  const long B = twoB / 2;
  if (2 * B != twoB)
    throw std::domain_error("bp_expand_product: half-integral B");
  std::vector<JacobiTrunc> out;
  for (long m = 0; m <= xi_order; ++m) {
    const Slice& slice = F[static_cast<std::size_t>(m)];
    long lo = 0;
    for (auto& [n, poly] : slice) {
      lo = n;
      break;
    }
    std::vector<LaurentPoly> coeffs;
    for (long n = lo; n <= q_hi0; ++n) {
      auto it = slice.find(n);
      std::map<long, Rat> terms;
      if (it != slice.end())
        for (auto& [r, v] : it->second)
          if (v != 0) terms[r + B] = v;
      coeffs.push_back(LaurentPoly::from_terms(terms));
    }
    JacobiTrunc f;
    f.k = rec.k;
    f.m = (rec.c + m) * N;
    f.kind = rec.cusp == "cusp" ? JacobiKind::Cusp : JacobiKind::Weak;
    f.series = QSeriesTrunc(Rat(lo + A), std::move(coeffs));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<JacobiTrunc> bp_expand(const BorcherdsRecord& rec, long xi_order,
                                   long q_order, bool check_dual_route) {
  std::vector<JacobiTrunc> fj = bp_expand_series(rec, xi_order, q_order);
  if (check_dual_route) {
    std::vector<JacobiTrunc> alt = bp_expand_product(rec, xi_order, q_order);
    for (std::size_t i = 0; i < fj.size(); ++i) {
      if (!(fj[i].series.truncated_through(q_order) ==
            alt[i].series.truncated_through(q_order)))
        throw std::logic_error(
            "bp_expand: route disagreement at xi-grade " +
            std::to_string(rec.c + static_cast<long>(i)));
    }
  }
  return fj;
}

CoeffOracle fj_oracle(const std::vector<JacobiTrunc>& fj, long c, long /*N*/) {
  long top = c + static_cast<long>(fj.size()) - 1;
  return [fj, c, top](long n, long r, long m) -> std::optional<Rat> {
    if (m < c) return Rat(0);
    if (m > top) return std::nullopt;
    const QSeriesTrunc& s = fj[static_cast<std::size_t>(m - c)].series;
    if (s.is_zero()) return Rat(0);
    if (Rat(n) < s.offset()) return Rat(0);
    if (Rat(n) > s.known_through()) return std::nullopt;
    return s.coeff_abs(n).coeff(r);
  };
}

long I1_tilde(long ell) {
  if (ell <= 0) throw std::domain_error("I1_tilde: ell must be positive");
  if (ell == 1) return 1;
  if (ell == 2) return 3;
  // (ell^2/2) prod_{p | ell} (1 - 1/p^2), an integer for ell >= 3.
  long num = ell * ell, den = 2;
  long m = ell;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    num *= p * p - 1;
    den *= p * p;
  }
  if (m > 1) {
    num *= m * m - 1;
    den *= m * m;
  }
  if (num % den != 0) throw std::logic_error("I1_tilde: non-integral index");
  return num / den;
}

CuspVerdict cusp_test(const CoeffOracle& oracle, long k, long N,
                      int symmetry) {
  CuspVerdict v;
  bool unresolved = false;
  long worst_grade = 0;
  for (long m : divisors(N)) {
    CuspDivisorCheck d;
    d.m = m;
    d.ell = std::gcd(N / m, m);
    d.delta = (N / m) / d.ell;
    d.I1 = I1_tilde(d.ell);
    d.n_max = k * d.I1 / 12;
    if (k % 2 != 0 && d.ell < 3) {
      d.skipped_odd_k = true;
      v.divisors.push_back(std::move(d));
      continue;
    }
    for (long n = 0; n <= d.n_max; ++n) {
      long q1 = n * d.delta;
      long r1 = -2 * n * d.delta * m;
      long xi1 = n * m / d.ell;
      if (symmetry == -1 && q1 == xi1) {
        d.checked.push_back({q1, r1, -1});  // vanishes by antisymmetry
        continue;
      }
      // Swap to the cheaper xi-grade side when allowed by the involution.
      long qa = q1, xa = xi1;
      if (xi1 > q1) std::swap(qa, xa);
      std::optional<Rat> val = oracle(qa, r1, xa);
      if (!val) val = oracle(xa, r1, qa);  // the partner index
      if (!val) {
        unresolved = true;
        worst_grade = std::max(worst_grade, std::min(q1, xi1));
        continue;
      }
      d.checked.push_back({qa, r1, xa});
      if (*val != 0) {
        std::ostringstream os;
        os << "nonzero coefficient " << rat_str(*val) << " at q^" << qa
           << " zeta^" << r1 << " xi-grade " << xa << " (divisor m=" << m
           << ", n=" << n << ")";
        v.failures.push_back(os.str());
      }
    }
    v.divisors.push_back(std::move(d));
  }
  if (!v.failures.empty()) {
    v.decided = true;
    v.is_cusp = false;
  } else if (!unresolved) {
    v.decided = true;
    v.is_cusp = true;
  } else {
    v.required_xi_order = worst_grade;
  }
  return v;
}

}  // namespace pbp
