#pragma once

#include <array>
#include <functional>

#include "pbp/ilp.hpp"
#include "pbp/jacobi.hpp"

namespace pbp {

// A truncated model of the weight-0 index-N product source form.
// coeffs holds the stored window q^(n_min) .. q^(known_through);
// singular_vector extracts the integer coefficients c(n, r) with
// 4nN - r^2 <= 0 at canonical representatives -N <= r < N; germ is the
// q^0 coefficient.
struct PsiCandidate {
  long N = 0;
  QSeriesTrunc coeffs;
  std::map<std::pair<long, long>, Int> singular_vector;
  LaurentPoly germ;
};

// Builds a candidate from a stored truncation, checking the product-theorem
// shape conditions: every stored singular coefficient is an integer, and
// A = (1/24) c(0,0) + (1/12) sum_{r>=1} c(0,r) is an integer. Throws
// std::domain_error naming the violated condition.
PsiCandidate make_psi_candidate(long N, const QSeriesTrunc& coeffs);

// The leading q-exponent invariant A of a candidate.
Rat psi_A(const PsiCandidate& psi);

struct Classification {
  long k = 0;        // weight = (1/2) c(0,0)
  long D0 = 0;       // sum_{n <= -1} sigma_0(|n|) c(n, 0)
  int eps = 1;       // Fricke sign (-1)^(k + D0)
  int symmetry = 1;  // (-1)^k * eps = (-1)^D0; +1 symmetric, -1 antisymmetric
};
// Rejects odd c(0,0) (non-integral weight) with std::domain_error.
Classification classify(const PsiCandidate& psi);

// sum_{j >= 1} c(j^2 n, j r) of the stored series, restricting j to
// j^2 (4nN - r^2) >= 4 n_low N - N^2 (the minimum conceivable
// discriminant for a form supported from q^(n_low)). Coefficients below
// the stored offset count as zero; a needed coefficient past the window
// raises TruncationDepthError with the required absolute q-exponent.
Rat humbert_multiplicity(const QSeriesTrunc& s, long N, long n, long r,
                         long n_low);

struct HumbertEntry {
  long n = 0;
  long r = 0;
  Int multiplicity = 0;
};

// Scans all (n, r) with delta - t <= n < N/4 and 4nN < r^2 <= N^2
// (representatives -N <= r < N) and returns the pairs where some raw
// contributing coefficient c(j^2 n, j r) is nonzero, with their
// multiplicities sum_j c(j^2 n, j r).
std::vector<HumbertEntry> humbert_support(const PsiCandidate& psi, long t,
                                          long delta);

// The ILP data for the lattice-translate psi0 + Z<H0>: rows are indexed by
// the union of the Humbert parameter-pairs of psi0 and every H0 element;
// M[(n,r), i] = sum_j c_{H0[i]}(j^2 n, j r) and b[(n,r)] likewise for
// psi0. Non-integer entries violate the saturation guarantee and raise
// std::logic_error. Also returns the row-index pairs.
IlpProblem assemble_ilp(const PsiCandidate& psi0,
                        const std::vector<QSeriesTrunc>& H0, long t,
                        long delta, long cap,
                        std::vector<std::pair<long, long>>* rows = nullptr);

// A fully classified Borcherds product result.
struct BorcherdsRecord {
  ThetaBlock theta_block;  // leading theta block; index c*N
  PsiCandidate psi;        // source-form truncation, q^0 coefficient = germ
  long c = 0;
  long t = 0;
  long k = 0;
  int eps = 1;
  int symmetry = 1;
  std::vector<HumbertEntry> humbert;
  std::vector<JacobiTrunc> fj;  // computed FJ coefficients phi_c, phi_{c+1}, ...
  std::string cusp;             // "cusp" / "noncusp" / "deferred(...)" / ""
  std::string confirmation;     // provenance of the existence proof
};

// Fourier-Jacobi truncations phi_c .. phi_{c+xi_order} of BL(psi), each
// through q^q_order, by the rearranged-series route
//   TB * xi^C * exp(-Grit(psi)).
std::vector<JacobiTrunc> bp_expand_series(const BorcherdsRecord& rec,
                                          long xi_order, long q_order);

// Same truncations by the triple-product route
//   q^A zeta^B xi^C prod (1 - q^n zeta^r xi^{mN})^{c(nm, r)},
// built directly from the stored psi coefficients (including the m = 0
// factors, so the two routes share no series machinery).
std::vector<JacobiTrunc> bp_expand_product(const BorcherdsRecord& rec,
                                           long xi_order, long q_order);

// Runs the series route and, when check_dual_route is set, also the
// product route, raising std::logic_error on any coefficient mismatch.
std::vector<JacobiTrunc> bp_expand(const BorcherdsRecord& rec, long xi_order,
                                   long q_order, bool check_dual_route = true);

// Serves the Fourier coefficient of q^n zeta^r xi^{mN}; nullopt when the
// expansion does not reach that index.
using CoeffOracle =
    std::function<std::optional<Rat>(long n, long r, long m)>;

// Oracle over a computed FJ list phi_c .. phi_{c+M}: grades below c are
// zero, grades past c+M are unknown, in-window q-indices are served.
CoeffOracle fj_oracle(const std::vector<JacobiTrunc>& fj, long c, long N);

// Index [SL2(Z) : <Gamma_1(ell), -I>]: 1, 3, or (ell^2/2) prod (1 - 1/p^2).
long I1_tilde(long ell);

struct CuspDivisorCheck {
  long m = 0;
  long ell = 0;
  long delta = 0;
  long I1 = 0;
  long n_max = 0;            // floor(k * I1 / 12)
  bool skipped_odd_k = false;
  // Indices (q-exponent, zeta-exponent, xi-grade) actually queried after
  // symmetry reduction; antisymmetric diagonal indices vanish identically
  // and are recorded with xi-grade -1.
  std::vector<std::array<long, 3>> checked;
};

struct CuspVerdict {
  bool decided = false;
  bool is_cusp = false;
  long required_xi_order = 0;  // when undecided: the grade the oracle lacks
  std::vector<CuspDivisorCheck> divisors;
  std::vector<std::string> failures;  // nonzero coefficients found
};

// The finite cuspidality test: for each divisor m | N with ell = gcd(N/m, m)
// and delta = N/(m ell), the coefficients of index n delta [[1,-m],[-m,m^2]]
// must vanish for 0 <= n <= k I1_tilde(ell)/12. Odd k skips divisors with
// ell in {1,2}. symmetry (+1/-1) enables the swap to the cheaper xi-grade
// side and the antisymmetric diagonal-vanishing shortcut.
CuspVerdict cusp_test(const CoeffOracle& oracle, long k, long N,
                      int symmetry);

}  // namespace pbp
