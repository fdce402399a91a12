#pragma once

#include <iosfwd>
#include <optional>

#include "pbp/linalg.hpp"
#include "pbp/theta.hpp"

namespace pbp {

enum class JacobiKind { Cusp, Weak, WeaklyHolomorphic };

// A truncated Jacobi form: weight k, index m, and the stored q-window.
// The series offset is an integer (the leading stored q-exponent); for
// cusp forms the offset is >= 1 and every stored (n, r) has 4nm - r^2 > 0.
struct JacobiTrunc {
  long k = 0;
  long m = 0;
  QSeriesTrunc series;
  JacobiKind kind = JacobiKind::Weak;
};

// Raised when an operation needs more stored q-terms than are available;
// carries the absolute q-exponent the input must reach.
struct TruncationDepthError : std::runtime_error {
  Rat required_through;
  explicit TruncationDepthError(const Rat& need)
      : std::runtime_error("insufficient truncation: input needed through q^" +
                           rat_str(need)),
        required_through(need) {}
};

// Elliptic coefficient symmetry c(n, r) = c(n - lambda r + lambda^2 m,
// r - 2 lambda m), checked for every stored coefficient whose partner
// lands inside the window. Exposed for the type-invariant tests.
bool jacobi_symmetry_check(const JacobiTrunc& f);

// Hecke operator V_ell by the divisor-sum coefficient rule
//   (c | V_ell)(n, r) = sum over a | gcd(n, r, ell) of a^(k-1) c(n ell/a^2, r/a).
// Output index ell*m; output window reaches floor(T/ell) for input depth T.
JacobiTrunc v_apply(const JacobiTrunc& f, long ell);
// Same, but guarantees the output reaches q^q_order or throws
// TruncationDepthError with the required input depth.
JacobiTrunc v_apply_to(const JacobiTrunc& f, long ell, long q_order);

// Fourier-Jacobi coefficients of the arithmetic lift of phi: the list
// phi, phi|V_2, ..., phi|V_xi_order, each truncated through q^q_order.
std::vector<JacobiTrunc> grit_lift(const JacobiTrunc& phi, long xi_order,
                                   long q_order);

// One provisioned basis element with its provenance (a theta-block
// descriptor string or "file <path> element <id>").
struct BasisElement {
  JacobiTrunc form;
  std::string provenance;
};

// A linearly independent list of truncated Jacobi forms spanning (part of)
// the cusp space of weight k and index m, stored through q^q_order.
struct BasisTrunc {
  long k = 0;
  long m = 0;
  long q_order = 0;
  std::vector<BasisElement> elements;
};

// Discriminant normal form Delta = eta^24 as a pure q-series (offset 1).
QSeriesTrunc delta_series(long q_order);

// The quotients g / Delta^i for each basis element g of the weight-12i
// cusp basis, offset 1 - i, truncated through q^floor(N/4) with
// N = basis12i.m. Requires the basis stored through q^(floor(N/4) + i).
std::vector<QSeriesTrunc> delta_power_basis(long i, const BasisTrunc& basis12i);

// The q-depth bound for baby-block divisibility certification:
//   max over r >= 1 with nu(r) > 0 of
//     floor( (k + nu(r) - 1)/12 * r^3 prod_{p | r} (1 - 1/p^2) ).
// Checking divisibility of g_n by b(zeta) for all n <= bound certifies it
// for the whole expansion.
long divisibility_bound(const ThetaBlock& tb);

// The least admissible Delta-power for confirming psi: the smallest
// nonnegative i with i > -D(n, r)/(4N) over the stored support of psi and
// i >= 1 - n_min.
long confirm_required_i(const QSeriesTrunc& psi, long N);

// A successful confirmation: psi (minus the optional subtracted quotient)
// equals the stated rational combination of the Delta-quotient basis.
struct Confirmation {
  long i = 0;
  std::vector<Rat> combination;
  bool used_subtraction = false;
};

// Membership of psi in the span of the Delta-power quotients of basis12i
// (i = basis12i.k / 12). With subtract, confirms psi - *subtract instead
// (the improved variant that lowers the needed i by one). nullopt means
// membership was not found; that refutes existence only when the supplied
// basis is known to be complete.
std::optional<Confirmation> confirm_truncation(
    const QSeriesTrunc& psi, long N, const BasisTrunc& basis12i,
    const QSeriesTrunc* subtract = nullptr);

// Quotient-pool confirmation (the direct practical checks): membership of
// psi in the Q-span of the supplied weight-zero quotients, e.g. the
// (phi'|V_2)/phi' for index-N blocks and/or inflation quotients Theta/phi.
std::optional<std::vector<Rat>> confirm_by_quotients(
    const QSeriesTrunc& psi, const std::vector<QSeriesTrunc>& pool);

// Inflation witness: Theta (index (c+1)N, divisible by the expansion of
// phi) whose quotient Theta/phi matches psi on the overlap window.
struct InflationWitness {
  std::size_t index = 0;
  QSeriesTrunc quotient;
};
std::optional<InflationWitness> confirm_by_inflation(
    const QSeriesTrunc& psi, const ThetaBlock& phi,
    const std::vector<QSeriesTrunc>& inflations);

// Basis provisioning sources: theta-block enumeration, the Eichler-Zagier
// generator construction (cusp kernel of the weak-form module), and/or
// basis files.
struct BasisSources {
  bool theta_blocks = false;
  bool ez = false;
  std::vector<std::string> files;
};

// Collects candidate elements from the sources, keeps a maximal linearly
// independent subset (exact rank over Q on the stored window) in a fixed
// deterministic order, and reports provenance per element.
BasisTrunc provision_basis(long k, long m, long q_order,
                           const BasisSources& sources);

// Line-oriented basis file format:
//   k=<int> m=<int> qorder=<int>
//   element <id>
//   <n> <r> <coeff>     (one stored coefficient per line, coeff = p or p/q)
//   end
//   element ... end     (repeated)
// The parser rejects malformed headers, out-of-order structure, and
// trailing garbage; the writer emits the same grammar.
BasisTrunc read_basis_file(std::istream& in, const std::string& name);
BasisTrunc read_basis_file(const std::string& path);
void write_basis_file(std::ostream& out, const BasisTrunc& basis);
void write_basis_file(const std::string& path, const BasisTrunc& basis);

}  // namespace pbp
