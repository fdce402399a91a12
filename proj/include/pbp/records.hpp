#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "pbp/pipeline.hpp"

namespace pbp {

// Flat serializable view of one search result (or one abort/error), one
// line of JSON per record. Big-integer values travel as decimal strings
// so the round trip is lossless.
struct ResultRecord {
  std::string type = "record";  // "record" or "error"
  long k = 0, N = 0, c = 0, t = 0;
  std::string theta_block;
  long eps = 0;
  long symmetry = 0;
  std::string cusp;
  std::string confirmation;
  // block diagnostics
  std::string status;
  std::string ilp_status;
  long rank_step4 = 0, rank_step5 = 0, dim_H0 = 0, final_cap = 0;
  long candidate_count = 0;
  bool strict_flag = false;
  // singular coefficients of psi and the Humbert list: (n, r, value)
  std::vector<std::tuple<long, long, std::string>> singular;
  std::vector<std::tuple<long, long, std::string>> humbert;
  // error records only
  std::string message;

  bool operator==(const ResultRecord&) const = default;
};

// Flatten one confirmed record with its block diagnostics.
ResultRecord make_result_record(const SearchConfig& cfg,
                                const BlockOutcome& block,
                                const BorcherdsRecord& rec);

// Flatten an abort or failure into an error record.
ResultRecord make_error_record(const SearchConfig& cfg,
                               const std::string& status,
                               const std::string& message,
                               const std::string& theta_block = "");

// One line of JSON (no trailing newline); keys in fixed order.
std::string record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const std::string& line);

}  // namespace pbp
