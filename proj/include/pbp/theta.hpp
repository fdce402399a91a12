#pragma once

#include "pbp/qseries.hpp"

namespace pbp {

// Finitely supported integer multiplicity function: the combinatorial
// identity of a theta block. phi(0) is the eta exponent; phi(r) for r >= 1
// the exponent of theta_r/eta. The nu-form nu(r) = sum_t phi(t*r) is
// cached; the two determine each other by Moebius inversion.
class MultiplicityFunction {
 public:
  MultiplicityFunction() = default;
  static MultiplicityFunction from_phi(long phi0, const std::map<long, long>& phi);
  static MultiplicityFunction from_nu(long nu0, const std::map<long, long>& nu);

  long phi0() const { return phi0_; }       // = nu(0) = 2k
  long phi(long r) const;                   // r >= 1
  long nu(long r) const;                    // r >= 1
  const std::map<long, long>& phi_support() const { return phi_; }
  const std::map<long, long>& nu_support() const { return nu_; }
  long max_r() const;  // largest r with phi(r) != 0 (0 if none)

  // Pointwise sum of multiplicities (the product of the theta blocks).
  MultiplicityFunction operator*(const MultiplicityFunction& o) const;
  bool operator==(const MultiplicityFunction& o) const;
  bool operator<(const MultiplicityFunction& o) const;

 private:
  long phi0_ = 0;
  std::map<long, long> phi_, nu_;  // nonzero entries only, r >= 1
};

enum class ConvertDirection { PhiToNu, NuToPhi };
// Standalone Moebius conversion exposed for testing; the class caches both.
std::map<long, long> nu_phi_convert(const std::map<long, long>& f,
                                    ConvertDirection dir);

// A theta block with all derived invariants populated.
struct ThetaBlock {
  MultiplicityFunction mult;
  Rat k;            // weight = phi(0)/2
  Rat m;            // index = (1/2) sum r^2 phi(r)
  Rat A;            // leading q-exponent = phi(0)/24 + (1/12) sum phi(r)
  Rat B;            // (1/2) sum r phi(r)
  Rat C;            // leading xi-exponent role; equals the index m
  LaurentPoly baby;  // b(zeta) = zeta^(-B) prod (zeta^r - 1)^phi(r)
  LaurentPoly germ;  // G(zeta) = sum_r phi(|r|) zeta^r
  bool basic = false;        // k integral and m a nonnegative integer
  bool holomorphic = false;  // nu(r) >= 0 for all r >= 1
  bool has_denominator = false;  // some phi(r) < 0, r >= 1
};

// Computes every derived field; cross-checks the two baby-block formulas
// (zeta^r-1 product vs. cyclotomic product over the nu-form).
ThetaBlock tb_invariants(const MultiplicityFunction& mult);

// Exact expansion q^A b(zeta)(1 - G(zeta) q + ...) with the series known
// through absolute q-exponent q_order (inclusive, relative to integer part).
QSeriesTrunc tb_expand(const ThetaBlock& tb, long q_order);

// Expansion on the doubled zeta grid (zeta^(1/2) as the variable); the
// public tb_expand halves the exponents afterwards. Exposed for atom tests.
QSeriesTrunc tb_expand_doubled(const ThetaBlock& tb, long q_order);

// The valuation function ord(x) on one period [0,1): piecewise quadratic
// with breakpoints at j/r for r in the support. Ord is its exact minimum.
struct OrdResult {
  struct Piece {
    Rat x0, x1;      // interval [x0, x1]
    Rat a, b, c;     // ord(x) = a x^2 + b x + c on the interior
  };
  std::vector<Piece> pieces;
  Rat Ord;
  Rat argmin;
  bool is_cusp = false;  // Ord > 0
};
OrdResult tb_ord(const ThetaBlock& tb);
// Direct evaluation of ord at a rational point (used by the oracle tests).
Rat tb_ord_at(const ThetaBlock& tb, const Rat& x);

// Fast machine-integer cusp check (Ord > 0), equivalent to
// tb_ord(...).is_cusp; used to filter the large raw enumerations.
bool mult_is_cusp(const MultiplicityFunction& mult);

// Exhaustive combinatorial enumeration of basic holomorphic blocks with
// the given weight, index, and leading exponent. Without denominator: all
// multisets x_1 >= ... >= x_l >= 1 with l = 12A - k parts and
// sum x_i^2 = 2m, as phi-form blocks. With denominator: atom multisets
// x >= 2 with sum atom_weight(x) = 2m - nu(1), nu(1) = 12A - k,
// nu(0) = 2k, keeping only blocks with a genuine denominator (some
// phi(r) < 0). Deterministic lexicographic order on the sorted vector.
std::vector<ThetaBlock> tb_enumerate_raw(long k, long m, long A,
                                         bool allow_denominator);

// The raw enumeration restricted to Jacobi *cusp* forms (valuation
// Ord > 0); this is what the search pipeline and the reference cell
// counts use.
std::vector<ThetaBlock> tb_enumerate(long k, long m, long A,
                                     bool allow_denominator);

// True iff nu(r) >= nu(2r) for all r >= 1: the weak-holomorphy criterion
// for the V_2 quotient (phi|V_2)/phi.
bool tb_wh_quotient_test(const ThetaBlock& tb);

// The discrete quadrilateral of admissible (c,t) pairs for weight k and
// level N <= 5: c >= 1 and max{(k-12c)/12, 0} <= t <= (k-(12-2N)c)/12.
std::vector<std::pair<long, long>> ct_bounds(long k, long N);

// Parses "0^4 1^2 7^-1 ..." (base^exponent tokens, duplicate bases summed).
MultiplicityFunction parse_theta_block(const std::string& text);
// Inverse of the parser: canonical "0^a r1^e1 r2^e2 ..." with ascending r.
std::string theta_block_str(const MultiplicityFunction& m);

}  // namespace pbp
