#pragma once

#include "pbp/borcherds.hpp"
#include "pbp/ilp.hpp"

namespace pbp {

// Policy for the optional step-5 stricter check (independence of the
// projections onto strictly negative-discriminant coordinates only).
enum class StrictPolicy { Eschew, AbortOnFalse, ContinueWithFlag };

struct SearchConfig {
  long k = 0;       // weight
  long N = 0;       // level (index of the source form psi)
  long c = 1;       // leading xi-grade of the product, in units of N
  long t = 0;       // offset: leading q-exponent A = c + t
  long nextra = 0;  // extra truncation length
  long cap = 1000;  // ILP solution cap s (doubled on the retry branch)
  BasisSources sources;                  // step-1 basis provisioning
  // Optional directory of k<K>_m<M>.basis files; a matching file is added
  // to the sources of each internal provisioning call (step 1 and the
  // Delta-quotient confirmation), keyed by that call's (k, m).
  std::string basis_dir;
  bool assume_complete_basis = false;    // sources span the full cusp space
  bool skip_cusp_test = false;
  bool dual_route_check = true;          // cross-check every FJ expansion
  StrictPolicy strict = StrictPolicy::Eschew;
  // Confirmation resources, tried in order: a pool of known weight-zero
  // index-N quotients, inflation numerators (index (c+1)N forms divisible
  // by the block), then the Delta-power truncation membership against a
  // provisioned cusp basis of weight 12i and index N.
  std::vector<QSeriesTrunc> confirm_pool;
  std::vector<QSeriesTrunc> confirm_inflations;
  bool confirm_delta = true;
};

struct OffsetShape {
  long delta = 0;          // 0 for t in {0,1}, 1 for t >= 2
  int expected_symmetry;   // +1 symmetric, -1 antisymmetric, 0 either
  std::string principal_shape;
};
OffsetShape offset_shape(long t);

// Per-theta-block result: diagnostics for every step plus the records.
struct BlockOutcome {
  ThetaBlock theta_block;
  std::string status;        // "done", "no-psi0", or an abort tag
  std::string abort_reason;  // empty unless status starts with "abort"
  long rank_step4 = 0;       // divisible-subspace dimension
  long rank_step5 = 0;       // saturated quotient-lattice dimension
  long dim_H0 = 0;           // step-7 kernel dimension
  std::string ilp_status;    // "complete", "capped", "unbounded", ""
  long final_cap = 0;        // cap in force when the ILP run ended
  long candidate_count = 0;  // ILP solutions examined in step 9
  bool strict_flag = false;  // stricter-check failure under ContinueWithFlag
  std::vector<BorcherdsRecord> records;
};

struct SearchOutcome {
  SearchConfig config;
  long delta = 0;
  long rank_step1 = 0;  // provisioned basis dimension
  long rank_step2 = 0;  // after zeroing the first c + delta - 1 coefficients
  std::vector<BlockOutcome> blocks;  // sorted by theta-block descriptor
  std::vector<std::string> aborts;   // collected abort reasons
};

// The steps-0-10 search for fixed (k, N, c, t, nextra, cap).
SearchOutcome run_search(const SearchConfig& cfg);

}  // namespace pbp
