#include "pbp/records.hpp"

#include <json.hpp>

namespace pbp {

using nlohmann::json;

namespace {

json triples_to_json(const std::vector<std::tuple<long, long, std::string>>& v) {
  json a = json::array();
  for (auto& [n, r, s] : v) a.push_back(json::array({n, r, s}));
  return a;
}

std::vector<std::tuple<long, long, std::string>> triples_from_json(
    const json& a) {
  std::vector<std::tuple<long, long, std::string>> v;
  for (auto& e : a)
    v.emplace_back(e.at(0).get<long>(), e.at(1).get<long>(),
                   e.at(2).get<std::string>());
  return v;
}

}  // namespace

ResultRecord make_result_record(const SearchConfig& cfg,
                                const BlockOutcome& block,
                                const BorcherdsRecord& rec) {
  ResultRecord r;
  r.type = "record";
  r.k = rec.k;
  r.N = cfg.N;
  r.c = rec.c;
  r.t = rec.t;
  r.theta_block = theta_block_str(rec.theta_block.mult);
  r.eps = rec.eps;
  r.symmetry = rec.symmetry;
  r.cusp = rec.cusp;
  r.confirmation = rec.confirmation;
  r.status = block.status;
  r.ilp_status = block.ilp_status;
  r.rank_step4 = block.rank_step4;
  r.rank_step5 = block.rank_step5;
  r.dim_H0 = block.dim_H0;
  r.final_cap = block.final_cap;
  r.candidate_count = block.candidate_count;
  r.strict_flag = block.strict_flag;
  for (auto& [key, value] : rec.psi.singular_vector)
    r.singular.emplace_back(key.first, key.second, value.get_str());
  for (auto& e : rec.humbert)
    r.humbert.emplace_back(e.n, e.r, e.multiplicity.get_str());
  return r;
}

ResultRecord make_error_record(const SearchConfig& cfg,
                               const std::string& status,
                               const std::string& message,
                               const std::string& theta_block) {
  ResultRecord r;
  r.type = "error";
  r.k = cfg.k;
  r.N = cfg.N;
  r.c = cfg.c;
  r.t = cfg.t;
  r.theta_block = theta_block;
  r.status = status;
  r.message = message;
  return r;
}

std::string record_to_json(const ResultRecord& r) {
  json j = json::object();
  j["type"] = r.type;
  j["k"] = r.k;
  j["N"] = r.N;
  j["c"] = r.c;
  j["t"] = r.t;
  j["theta_block"] = r.theta_block;
  j["eps"] = r.eps;
  j["symmetry"] = r.symmetry;
  j["cusp"] = r.cusp;
  j["confirmation"] = r.confirmation;
  j["status"] = r.status;
  j["ilp_status"] = r.ilp_status;
  j["rank_step4"] = r.rank_step4;
  j["rank_step5"] = r.rank_step5;
  j["dim_H0"] = r.dim_H0;
  j["final_cap"] = r.final_cap;
  j["candidate_count"] = r.candidate_count;
  j["strict_flag"] = r.strict_flag;
  j["singular"] = triples_to_json(r.singular);
  j["humbert"] = triples_to_json(r.humbert);
  j["message"] = r.message;
  return j.dump();
}

ResultRecord record_from_json(const std::string& line) {
  json j = json::parse(line);
  ResultRecord r;
  r.type = j.at("type").get<std::string>();
  r.k = j.at("k").get<long>();
  r.N = j.at("N").get<long>();
  r.c = j.at("c").get<long>();
  r.t = j.at("t").get<long>();
  r.theta_block = j.at("theta_block").get<std::string>();
  r.eps = j.at("eps").get<long>();
  r.symmetry = j.at("symmetry").get<long>();
  r.cusp = j.at("cusp").get<std::string>();
  r.confirmation = j.at("confirmation").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.ilp_status = j.at("ilp_status").get<std::string>();
  r.rank_step4 = j.at("rank_step4").get<long>();
  r.rank_step5 = j.at("rank_step5").get<long>();
  r.dim_H0 = j.at("dim_H0").get<long>();
  r.final_cap = j.at("final_cap").get<long>();
  r.candidate_count = j.at("candidate_count").get<long>();
  r.strict_flag = j.at("strict_flag").get<bool>();
  r.singular = triples_from_json(j.at("singular"));
  r.humbert = triples_from_json(j.at("humbert"));
  r.message = j.at("message").get<std::string>();
  return r;
}

}  // namespace pbp
