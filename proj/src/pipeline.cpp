#include "pbp/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pbp {

namespace {

// Sources for one internal provisioning call: the configured sources plus
// the basis-dir file named for this call's (k, m), when present.
BasisSources sources_for(const SearchConfig& cfg, long k, long m) {
  BasisSources s = cfg.sources;
  if (!cfg.basis_dir.empty()) {
    std::string path = cfg.basis_dir + "/k" + std::to_string(k) + "_m" +
                       std::to_string(m) + ".basis";
    if (std::ifstream(path).good()) s.files.push_back(path);
  }
  return s;
}

long known_long(const QSeriesTrunc& s) {
  return static_cast<long>(Rat(s.known_through()).get_num().get_si());
}

QSeriesTrunc combo(const std::vector<QSeriesTrunc>& gens,
                   const std::vector<Rat>& coeffs) {
  QSeriesTrunc acc;
  bool first = true;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (coeffs[i] == 0) continue;
    QSeriesTrunc term = gens[i] * coeffs[i];
    acc = first ? std::move(term) : acc + term;
    first = false;
  }
  if (first && !gens.empty())
    acc = QSeriesTrunc::zero(known_long(gens[0]));
  return acc;
}

QSeriesTrunc combo_int(const std::vector<QSeriesTrunc>& gens,
                       const std::vector<Int>& coeffs) {
  std::vector<Rat> r(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = Rat(coeffs[i]);
  return combo(gens, r);
}

std::vector<QSeriesTrunc> apply_kernel(const IntMatrix& K,
                                       const std::vector<QSeriesTrunc>& gens) {
  std::vector<QSeriesTrunc> out;
  for (long i = 0; i < K.rows(); ++i) out.push_back(combo_int(gens, K.row(i)));
  return out;
}

// Integer matrix whose row i holds the coefficients of series[i] at the
// listed absolute (n, r) positions; throws if any entry is non-integral.
IntMatrix coeff_matrix(const std::vector<QSeriesTrunc>& series,
                       const std::vector<std::pair<long, long>>& cols,
                       const char* what) {
  IntMatrix m(static_cast<long>(series.size()), static_cast<long>(cols.size()));
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto [n, r] = cols[j];
      Rat v = 0;
      if (Rat(n) >= series[i].offset() && Rat(n) <= series[i].known_through())
        v = series[i].coeff_abs(n).coeff(r);
      if (!is_integer(v))
        throw std::runtime_error(std::string(what) +
                                 ": non-integral coefficient at q^" +
                                 std::to_string(n) + " zeta^" +
                                 std::to_string(r));
      m.at(static_cast<long>(i), static_cast<long>(j)) = v.get_num();
    }
  }
  return m;
}

// Union of stored zeta-exponents of the q^n coefficients across series.
std::vector<std::pair<long, long>> coeff_columns(
    const std::vector<QSeriesTrunc>& series, long n_lo, long n_hi) {
  std::vector<std::pair<long, long>> cols;
  for (long n = n_lo; n <= n_hi; ++n) {
    long lo = 0, hi = -1;
    for (auto& s : series) {
      if (Rat(n) < s.offset() || Rat(n) > s.known_through()) continue;
      const LaurentPoly& p = s.coeff_abs(n);
      if (p.is_zero()) continue;
      if (hi < lo) {
        lo = p.lo();
        hi = p.hi();
      } else {
        lo = std::min(lo, p.lo());
        hi = std::max(hi, p.hi());
      }
    }
    for (long r = lo; r <= hi; ++r) cols.push_back({n, r});
  }
  return cols;
}

// Singular index classes (n, r): 4nN - r^2 <= 0, -N <= r < N, on the
// stated q-window.
std::vector<std::pair<long, long>> singular_columns(long N, long n_lo,
                                                    long n_hi) {
  std::vector<std::pair<long, long>> cols;
  for (long n = n_lo; n <= n_hi; ++n)
    for (long r = -N; r < N; ++r)
      if (4 * n * N - r * r <= 0) cols.push_back({n, r});
  return cols;
}

std::vector<std::vector<Rat>> rat_rows(const IntMatrix& m) {
  std::vector<std::vector<Rat>> rows(static_cast<std::size_t>(m.rows()));
  for (long i = 0; i < m.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].resize(
        static_cast<std::size_t>(m.cols()));
    for (long j = 0; j < m.cols(); ++j)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          Rat(m.at(i, j));
  }
  return rows;
}

// Saturate the lattice spanned by the projections `proj` (integer rows)
// and return the corresponding rational recombinations of `series`.
std::vector<QSeriesTrunc> saturated_combos(const IntMatrix& proj,
                                           const std::vector<QSeriesTrunc>& series) {
  IntMatrix sat = saturate(proj);
  auto basis = rat_rows(proj);
  std::vector<QSeriesTrunc> out;
  for (long i = 0; i < sat.rows(); ++i) {
    std::vector<Rat> target(static_cast<std::size_t>(sat.cols()));
    for (long j = 0; j < sat.cols(); ++j)
      target[static_cast<std::size_t>(j)] = Rat(sat.at(i, j));
    auto coeffs = rat_membership(basis, target);
    if (!coeffs)
      throw std::logic_error("saturation produced a row outside the span");
    out.push_back(combo(series, *coeffs));
  }
  return out;
}

}  // namespace

OffsetShape offset_shape(long t) {
  if (t < 0) throw std::domain_error("offset_shape: t must be >= 0");
  OffsetShape os;
  os.delta = t <= 1 ? 0 : 1;
  if (t == 0) {
    os.expected_symmetry = 1;
    os.principal_shape = "G + O(q)";
  } else if (t == 1) {
    os.expected_symmetry = -1;
    os.principal_shape = "q^-1 + G + O(q)";
  } else if (t == 2) {
    os.expected_symmetry = 1;
    os.principal_shape = "psi_-1 q^-1 + G + O(q)";
  } else {
    os.expected_symmetry = 0;
    os.principal_shape = "sum_{n=1-t}^{-1} psi_n q^n + G + O(q)";
  }
  return os;
}

namespace {

// Step-9 confirmation: returns a provenance string, or nullopt when no
// strategy succeeded (the candidate stays "unconfirmed"; with a complete
// basis that refutes existence).
std::optional<std::string> confirm_candidate(const SearchConfig& cfg,
                                             const ThetaBlock& phi,
                                             const QSeriesTrunc& psi,
                                             long basis_depth) {
  long bound = divisibility_bound(phi);
  if (cfg.assume_complete_basis && basis_depth >= bound) {
    std::ostringstream os;
    os << "guaranteed (divisibility certified: basis depth " << basis_depth
       << " >= bound " << bound << ")";
    return os.str();
  }
  if (!cfg.confirm_pool.empty()) {
    if (auto coeffs = confirm_by_quotients(psi, cfg.confirm_pool)) {
      std::ostringstream os;
      os << "confirmed (quotient pool:";
      for (auto& v : *coeffs) os << ' ' << rat_str(v);
      os << ")";
      return os.str();
    }
  }
  if (!cfg.confirm_inflations.empty()) {
    if (auto w = confirm_by_inflation(psi, phi, cfg.confirm_inflations)) {
      std::ostringstream os;
      os << "confirmed (inflation witness " << w->index << ")";
      return os.str();
    }
  }
  if (cfg.confirm_delta) {
    long i = confirm_required_i(psi, cfg.N);
    BasisTrunc b12i =
        provision_basis(12 * i, cfg.N, known_long(psi) + i,
                        sources_for(cfg, 12 * i, cfg.N));
    if (!b12i.elements.empty()) {
      if (auto conf = confirm_truncation(psi, cfg.N, b12i)) {
        std::ostringstream os;
        os << "confirmed (Delta quotient, i=" << conf->i << ")";
        return os.str();
      }
    }
  }
  return std::nullopt;
}

// Cuspidality pass: expands Fourier-Jacobi coefficients as deep as the
// stored source window allows and runs the coefficient test; a window
// shortfall records a deferred verdict with the required depth.
void run_cusp_pass(const SearchConfig& cfg, BorcherdsRecord& rec) {
  long N = cfg.N;
  // Planning pass: a blind oracle reveals every index the test needs.
  long q_need = rec.c + rec.t;
  CoeffOracle blind = [&](long n, long, long m) -> std::optional<Rat> {
    if (m < rec.c) return Rat(0);
    q_need = std::max(q_need, n);
    return std::nullopt;
  };
  CuspVerdict plan = cusp_test(blind, rec.k, N, rec.symmetry);
  if (plan.decided) {  // nothing to query (all diagonal / skipped)
    rec.cusp = plan.is_cusp ? "cusp" : "noncusp";
    return;
  }
  long xi_order = std::max(0L, plan.required_xi_order - rec.c);
  try {
    std::vector<JacobiTrunc> fj =
        bp_expand(rec, xi_order, q_need, cfg.dual_route_check);
    CuspVerdict v = cusp_test(fj_oracle(fj, rec.c, N), rec.k, N, rec.symmetry);
    if (v.decided) {
      rec.cusp = v.is_cusp ? "cusp" : "noncusp";
      if (v.is_cusp)
        for (auto& f : fj) f.kind = JacobiKind::Cusp;
    } else {
      std::ostringstream os;
      os << "deferred (needs xi-order " << v.required_xi_order << ")";
      rec.cusp = os.str();
    }
    rec.fj = std::move(fj);
  } catch (const TruncationDepthError& e) {
    std::ostringstream os;
    os << "deferred (source window too short: needs q^"
       << rat_str(e.required_through) << ")";
    rec.cusp = os.str();
  }
}

}  // namespace

SearchOutcome run_search(const SearchConfig& cfg) {
  if (cfg.c < 1 || cfg.t < 0 || cfg.k < 1 || cfg.N < 1)
    throw std::domain_error("run_search: need c >= 1, t >= 0, k >= 1, N >= 1");
  if (cfg.nextra < 0 || cfg.cap < 1)
    throw std::domain_error("run_search: need nextra >= 0, cap >= 1");
  SearchOutcome out;
  out.config = cfg;
  OffsetShape os = offset_shape(cfg.t);
  long delta = os.delta;
  out.delta = delta;
  long N = cfg.N, c = cfg.c, t = cfg.t;
  long nq = N / 4;
  long q1 = nq + c + t + cfg.nextra;  // step-1 depth

  // Step 1: provisioned cusp basis of weight k and index (c+1)N.
  BasisTrunc basis = provision_basis(cfg.k, (c + 1) * N, q1, cfg.sources);
  out.rank_step1 = static_cast<long>(basis.elements.size());
  std::vector<QSeriesTrunc> g1;
  for (auto& e : basis.elements) {
    if (!e.form.series.integral())
      throw std::runtime_error(
          "run_search: basis element with non-integral coefficients (" +
          e.provenance + "); the algorithm premise requires integral bases");
    g1.push_back(e.form.series);
  }

  // Step 2: the sublattice with the first c + delta - 1 coefficients zero.
  std::vector<QSeriesTrunc> g2;
  if (c + delta - 1 >= 1 && !g1.empty()) {
    auto cols = coeff_columns(g1, 1, c + delta - 1);
    IntMatrix low = coeff_matrix(g1, cols, "step 2");
    g2 = apply_kernel(int_kernel(low), g1);
  } else {
    g2 = g1;
  }
  out.rank_step2 = static_cast<long>(g2.size());

  // Step 3: all basic cuspidal theta blocks of weight k, index cN, leading
  // exponent c + t, without and with denominator.
  std::vector<ThetaBlock> blocks = tb_enumerate(cfg.k, c * N, c + t, false);
  for (auto& tb : tb_enumerate(cfg.k, c * N, c + t, true))
    blocks.push_back(tb);

  for (auto& phi : blocks) {
    BlockOutcome bo;
    bo.theta_block = phi;
    bo.final_cap = cfg.cap;
    // Step 3 continued: the truncated block, stored through the relative
    // window of the step-2 expansions.
    QSeriesTrunc phit = tb_expand(phi, q1);

    // Step 4: the sublattice whose coefficients are divisible by b(zeta).
    // Division with remainder by the baby block is a canonical linear map
    // on each q-coefficient, so the sublattice is an integer kernel.
    std::vector<QSeriesTrunc> g4;
    if (!g2.empty()) {
      long span = phi.baby.hi() - phi.baby.lo();
      long n_lo = c + delta, n_hi = q1;
      IntMatrix rem(static_cast<long>(g2.size()),
                    (n_hi - n_lo + 1) * span);
      for (std::size_t i = 0; i < g2.size(); ++i)
        for (long n = n_lo; n <= n_hi; ++n) {
          auto [quot, r] = lp_divide(g2[i].coeff_abs(n), phi.baby);
          (void)quot;
          r.for_each_term([&](long e, const Rat& v) {
            if (!is_integer(v))
              throw std::logic_error("step 4: non-integral remainder");
            rem.at(static_cast<long>(i), (n - n_lo) * span + e) = v.get_num();
          });
        }
      g4 = apply_kernel(int_kernel(rem), g2);
    }
    bo.rank_step4 = static_cast<long>(g4.size());
    if (g4.empty()) {
      bo.status = "done";
      out.blocks.push_back(std::move(bo));
      continue;
    }

    // Step 5: quotients by the truncated block, singular projection,
    // independence check, saturation.
    std::vector<QSeriesTrunc> h;
    for (auto& g : g4) h.push_back(series_divide(g, phit));
    auto sing = singular_columns(N, delta - t, nq);
    IntMatrix W = coeff_matrix(h, sing, "step 5");
    if (rank(W) != W.rows()) {
      bo.status = "abort-step5-dependence";
      bo.abort_reason =
          "singular projections of the step-5 quotients are dependent; "
          "rerun with a larger nextra";
      out.aborts.push_back(bo.abort_reason);
      out.blocks.push_back(std::move(bo));
      continue;
    }
    if (cfg.strict != StrictPolicy::Eschew) {
      // Optional stricter check: independence of the projections onto the
      // strictly negative-discriminant coordinates only.
      std::vector<std::pair<long, long>> strict_cols;
      for (auto& p : sing)
        if (4 * p.first * N - p.second * p.second < 0) strict_cols.push_back(p);
      IntMatrix Ws = coeff_matrix(h, strict_cols, "step 5 strict");
      if (rank(Ws) != Ws.rows()) {
        if (cfg.strict == StrictPolicy::AbortOnFalse) {
          bo.status = "abort-step5-strict";
          bo.abort_reason =
              "strict negative-discriminant projections are dependent "
              "(false truncations present); rerun with a larger nextra";
          out.aborts.push_back(bo.abort_reason);
          out.blocks.push_back(std::move(bo));
          continue;
        }
        bo.strict_flag = true;
      }
    }
    std::vector<QSeriesTrunc> hsat = saturated_combos(W, h);
    bo.rank_step5 = static_cast<long>(hsat.size());
    IntMatrix S = coeff_matrix(hsat, sing, "step 5 saturated");

    // Steps 6-7: solve the constant-term constraint over the lattice.
    // The full q^0 coefficient (all stored zeta-exponents) must equal G.
    auto q0cols = coeff_columns(hsat, 0, 0);
    phi.germ.for_each_term([&](long r, const Rat&) {
      if (std::find(q0cols.begin(), q0cols.end(), std::make_pair(0L, r)) ==
          q0cols.end())
        q0cols.push_back({0, r});
    });
    std::sort(q0cols.begin(), q0cols.end());
    // Scale to integers: saturated combos may be rational off the
    // singular coordinates.
    Int den = 1;
    for (auto& s : hsat)
      for (auto& [n0, r0] : q0cols) {
        (void)n0;
        Int d = Rat(s.coeff_abs(0).coeff(r0)).get_den();
        den = den / gcd(den, d) * d;
      }
    IntMatrix A0(static_cast<long>(hsat.size()),
                 static_cast<long>(q0cols.size()));
    std::vector<Int> gvec(q0cols.size());
    for (std::size_t i = 0; i < hsat.size(); ++i)
      for (std::size_t j = 0; j < q0cols.size(); ++j) {
        Rat v = hsat[i].coeff_abs(0).coeff(q0cols[j].second) * Rat(den);
        A0.at(static_cast<long>(i), static_cast<long>(j)) = v.get_num();
      }
    for (std::size_t j = 0; j < q0cols.size(); ++j) {
      Rat v = phi.germ.coeff(q0cols[j].second) * Rat(den);
      if (!is_integer(v)) throw std::logic_error("step 6: scaling failed");
      gvec[j] = v.get_num();
    }
    IntMatrix K0 = int_kernel(A0);
    auto z = membership(A0, gvec);
    if (!z) {
      bo.status = "no-psi0";
      out.blocks.push_back(std::move(bo));
      continue;
    }
    // Canonical representative modulo the kernel lattice (reproducibility).
    std::vector<Int> z0 = reduce_mod_lattice(K0, *z);
    QSeriesTrunc psi0_series = combo_int(hsat, z0);
    // Step 7: resaturate the kernel's singular projections.
    std::vector<QSeriesTrunc> H0;
    if (K0.rows() > 0) {
      std::vector<QSeriesTrunc> h0raw = apply_kernel(K0, hsat);
      H0 = saturated_combos(coeff_matrix(h0raw, sing, "step 7"), h0raw);
    }
    bo.dim_H0 = static_cast<long>(H0.size());

    // Steps 8-9 with the three-way cap branch.
    PsiCandidate psi0 = make_psi_candidate(N, psi0_series);
    long cap = cfg.cap;
    bool block_done = false;
    while (!block_done) {
      IlpProblem prob = assemble_ilp(psi0, H0, t, delta, cap);
      IlpResult res = ilp_enumerate(prob);
      bo.final_cap = cap;
      if (res.status == IlpResult::Status::Unbounded) {
        bo.ilp_status = "unbounded";
        bo.status = "abort-step8-unbounded";
        bo.abort_reason =
            "the Humbert feasibility problem is unbounded (false "
            "truncations); rerun with a larger nextra";
        out.aborts.push_back(bo.abort_reason);
        break;
      }
      bo.ilp_status =
          res.status == IlpResult::Status::Complete ? "complete" : "capped";
      bo.candidate_count = static_cast<long>(res.solutions.size());
      std::vector<BorcherdsRecord> records;
      bool any_unconfirmed = false;
      for (auto& x : res.solutions) {
        QSeriesTrunc psi_series = psi0.coeffs;
        for (std::size_t i = 0; i < H0.size(); ++i)
          if (x[i] != 0) psi_series = psi_series + H0[i] * Rat(x[i]);
        BorcherdsRecord rec;
        rec.theta_block = phi;
        rec.psi = make_psi_candidate(N, psi_series);
        rec.c = c;
        rec.t = t;
        Classification cl = classify(rec.psi);
        rec.k = cl.k;
        rec.eps = cl.eps;
        rec.symmetry = cl.symmetry;
        rec.humbert = humbert_support(rec.psi, t, delta);
        for (auto& e : rec.humbert)
          if (e.multiplicity < 0)
            throw std::logic_error("negative Humbert multiplicity slipped "
                                   "through the feasibility phase");
        auto conf = confirm_candidate(cfg, phi, psi_series, q1);
        if (!conf) {
          any_unconfirmed = true;
          if (res.status == IlpResult::Status::Complete &&
              cfg.assume_complete_basis)
            continue;  // refuted: no actual form truncates to it
          rec.confirmation = "unconfirmed";
        } else {
          rec.confirmation = *conf;
        }
        if (cfg.skip_cusp_test)
          rec.cusp = "skipped";
        else
          run_cusp_pass(cfg, rec);
        records.push_back(std::move(rec));
      }
      if (res.status == IlpResult::Status::Complete) {
        bo.records = std::move(records);
        bo.status = "done";
        block_done = true;
      } else if (any_unconfirmed) {
        bo.status = "abort-step9-capped-unconfirmed";
        bo.abort_reason =
            "solution cap reached with an unconfirmed candidate; rerun "
            "with a larger nextra";
        out.aborts.push_back(bo.abort_reason);
        break;
      } else {
        cap *= 2;  // all confirmed but possibly incomplete: raise the cap
      }
    }
    out.blocks.push_back(std::move(bo));
  }

  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const BlockOutcome& a, const BlockOutcome& b) {
              return theta_block_str(a.theta_block.mult) <
                     theta_block_str(b.theta_block.mult);
            });
  return out;
}

}  // namespace pbp
