// pbpsearch: batch front end for theta-block enumeration, Borcherds
// product searches, and record post-processing.
//
// Subcommands
//   tb enum     enumerate theta blocks for (weight, index, qpow)
//   search      run the full search pipeline, one JSON record per line
//   confirm     re-derive a stored record and refresh its confirmation
//   cusp-check  re-derive a stored record at a given nextra and report cusp
//   bp expand   expand a stored record's Fourier-Jacobi coefficients
//
// Standard output carries records only (line-delimited JSON); progress and
// diagnostics go to standard error. Identical configurations produce
// byte-identical output. Exit status: 0 on success, 1 on usage or input
// errors, 2 when the search aborted (an error record is still emitted).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbp/borcherds.hpp"
#include "pbp/pipeline.hpp"
#include "pbp/records.hpp"
#include "pbp/theta.hpp"

using json = nlohmann::json;

namespace {

struct SearchFlags {
  long weight = 0;
  long level = 0;
  long c = 1;
  long t = 0;
  long nextra = 0;
  long cap = 1000;
  std::string seed_pairs;  // "c:t,c:t,..." for explicit (c,t) lists
  std::string basis_dir;
  std::vector<std::string> basis_files;
  bool theta_blocks = false;
  bool ez = true;
  bool assume_complete_basis = false;
  bool skip_cusp_test = false;
  bool no_dual_route = false;
  std::string strict = "eschew";  // eschew | abort | flag
  long threads = 1;               // accepted; execution is serial
  std::string config_path;
};

// Registers the shared search flags on a subcommand and returns the
// option handles so config-file defaults can respect explicit flags.
std::vector<CLI::Option*> add_search_flags(CLI::App* cmd, SearchFlags& f) {
  std::vector<CLI::Option*> opts;
  opts.push_back(cmd->add_option("--weight", f.weight, "Weight k"));
  opts.push_back(cmd->add_option("--level", f.level, "Level N"));
  opts.push_back(cmd->add_option("--c", f.c, "Leading xi-grade c"));
  opts.push_back(cmd->add_option("--t", f.t, "Principal-part depth t"));
  opts.push_back(cmd->add_option("--seed-pairs", f.seed_pairs,
                                 "Explicit (c,t) list, e.g. 1:0,2:1"));
  opts.push_back(cmd->add_option("--nextra", f.nextra,
                                 "Extra q-coefficients beyond the minimum"));
  opts.push_back(cmd->add_option("--cap", f.cap, "Initial solution cap"));
  opts.push_back(cmd->add_option("--basis-dir", f.basis_dir,
                                 "Directory of k<K>_m<M>.basis files "
                                 "(default from PBP_BASIS_DIR)"));
  opts.push_back(cmd->add_option("--basis-file", f.basis_files,
                                 "Explicit basis file (repeatable)"));
  opts.push_back(cmd->add_flag("--theta-block-basis", f.theta_blocks,
                               "Provision bases from theta blocks"));
  opts.push_back(cmd->add_flag("!--no-ez-basis", f.ez,
                               "Disable the cusp-kernel basis construction"));
  opts.push_back(cmd->add_flag("--assume-complete-basis",
                               f.assume_complete_basis,
                               "Treat provisioned bases as complete"));
  opts.push_back(cmd->add_flag("--skip-cusp-test", f.skip_cusp_test,
                               "Skip the cuspidality pass"));
  opts.push_back(cmd->add_flag("--no-dual-route", f.no_dual_route,
                               "Skip the product-route cross-check"));
  opts.push_back(cmd->add_option("--strict", f.strict,
                                 "Holomorphy policy: eschew | abort | flag")
                     ->check(CLI::IsMember({"eschew", "abort", "flag"})));
  opts.push_back(cmd->add_option("--threads", f.threads,
                                 "Worker threads (accepted; runs serially)"));
  return opts;
}

// Applies config-file values for every option the user did not set on the
// command line. Unknown keys are rejected.
void apply_config(const std::string& path, SearchFlags& f,
                  const std::vector<CLI::Option*>& opts) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  in >> j;
  auto given = [&](const std::string& name) {
    for (auto* o : opts)
      for (auto& n : o->get_lnames())
        if ("--" + n == name) return o->count() > 0;
    return false;
  };
  for (auto& [key, val] : j.items()) {
    if (key == "weight" && !given("--weight")) f.weight = val.get<long>();
    else if (key == "level" && !given("--level")) f.level = val.get<long>();
    else if (key == "c" && !given("--c")) f.c = val.get<long>();
    else if (key == "t" && !given("--t")) f.t = val.get<long>();
    else if (key == "seed_pairs" && !given("--seed-pairs"))
      f.seed_pairs = val.get<std::string>();
    else if (key == "nextra" && !given("--nextra")) f.nextra = val.get<long>();
    else if (key == "cap" && !given("--cap")) f.cap = val.get<long>();
    else if (key == "basis_dir" && !given("--basis-dir"))
      f.basis_dir = val.get<std::string>();
    else if (key == "basis_files" && !given("--basis-file"))
      f.basis_files = val.get<std::vector<std::string>>();
    else if (key == "theta_blocks" && !given("--theta-block-basis"))
      f.theta_blocks = val.get<bool>();
    else if (key == "ez" && !given("--no-ez-basis")) f.ez = val.get<bool>();
    else if (key == "assume_complete_basis" &&
             !given("--assume-complete-basis"))
      f.assume_complete_basis = val.get<bool>();
    else if (key == "skip_cusp_test" && !given("--skip-cusp-test"))
      f.skip_cusp_test = val.get<bool>();
    else if (key == "dual_route_check" && !given("--no-dual-route"))
      f.no_dual_route = !val.get<bool>();
    else if (key == "strict" && !given("--strict"))
      f.strict = val.get<std::string>();
    else if (key == "threads" && !given("--threads"))
      f.threads = val.get<long>();
    else if (given("--" + key) || given("--no-" + key)) continue;
    else
      throw CLI::ValidationError("--config", "unknown key \"" + key + "\"");
  }
}

std::vector<std::pair<long, long>> parse_seed_pairs(const std::string& s) {
  std::vector<std::pair<long, long>> pairs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--seed-pairs",
                                 "expected c:t entries, got \"" + item + "\"");
    pairs.emplace_back(std::stol(item.substr(0, colon)),
                       std::stol(item.substr(colon + 1)));
  }
  if (pairs.empty())
    throw CLI::ValidationError("--seed-pairs", "empty pair list");
  return pairs;
}

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

pbp::SearchConfig to_config(const SearchFlags& f, long c, long t) {
  pbp::SearchConfig cfg;
  cfg.k = f.weight;
  cfg.N = f.level;
  cfg.c = c;
  cfg.t = t;
  cfg.nextra = f.nextra;
  cfg.cap = f.cap;
  cfg.sources.theta_blocks = f.theta_blocks;
  cfg.sources.ez = f.ez;
  cfg.sources.files = f.basis_files;
  std::string dir = f.basis_dir;
  if (dir.empty())
    if (const char* env = std::getenv("PBP_BASIS_DIR")) dir = env;
  if (!dir.empty()) {
    // Basis files carry their own (k, m) header; offer the ones whose
    // names match the two indices the pipeline provisions.
    long kb = f.weight + (t >= 2 ? 1 : 0) * 0;  // search basis weight = k
    for (long m : {(c + 1) * f.level, f.level}) {
      std::string path = dir + "/k" + std::to_string(kb) + "_m" +
                         std::to_string(m) + ".basis";
      if (file_exists(path)) cfg.sources.files.push_back(path);
    }
  }
  cfg.assume_complete_basis = f.assume_complete_basis;
  cfg.skip_cusp_test = f.skip_cusp_test;
  cfg.dual_route_check = !f.no_dual_route;
  cfg.strict = f.strict == "abort" ? pbp::StrictPolicy::AbortOnFalse
               : f.strict == "flag" ? pbp::StrictPolicy::ContinueWithFlag
                                    : pbp::StrictPolicy::Eschew;
  return cfg;
}

// Runs one (c,t) search; emits a record line per confirmed product and an
// error record per abort. Returns true when any abort occurred.
bool emit_search(const pbp::SearchConfig& cfg, std::ostream& out) {
  std::cerr << "search k=" << cfg.k << " N=" << cfg.N << " c=" << cfg.c
            << " t=" << cfg.t << " nextra=" << cfg.nextra << "\n";
  pbp::SearchOutcome outcome = pbp::run_search(cfg);
  bool aborted = false;
  for (const pbp::BlockOutcome& b : outcome.blocks) {
    std::cerr << "  block " << pbp::theta_block_str(b.theta_block.mult)
              << ": " << b.status << "\n";
    if (b.status.rfind("abort", 0) == 0) {
      aborted = true;
      out << pbp::record_to_json(pbp::make_error_record(
                 cfg, b.status,
                 b.abort_reason.empty() ? b.status : b.abort_reason,
                 pbp::theta_block_str(b.theta_block.mult)))
          << "\n";
      continue;
    }
    for (const pbp::BorcherdsRecord& rec : b.records)
      out << pbp::record_to_json(pbp::make_result_record(cfg, b, rec))
          << "\n";
  }
  return aborted;
}

std::vector<pbp::ResultRecord> read_records(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw CLI::ValidationError("--record", "cannot open " + path);
    in = &file;
  }
  std::vector<pbp::ResultRecord> records;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    records.push_back(pbp::record_from_json(line));
  }
  if (records.empty())
    throw CLI::ValidationError("--record", "no records found");
  return records;
}

// Re-derives the full BorcherdsRecord behind a stored (flattened) record
// by re-running the pipeline at the stored parameters and matching the
// theta-block descriptor.
struct Rederived {
  pbp::SearchConfig cfg;
  pbp::BlockOutcome block;
  pbp::BorcherdsRecord rec;
};

Rederived rederive(const pbp::ResultRecord& stored, const SearchFlags& f) {
  SearchFlags local = f;
  local.weight = stored.k;
  local.level = stored.N;
  pbp::SearchConfig cfg = to_config(local, stored.c, stored.t);
  pbp::SearchOutcome outcome = pbp::run_search(cfg);
  for (const pbp::BlockOutcome& b : outcome.blocks) {
    if (pbp::theta_block_str(b.theta_block.mult) != stored.theta_block)
      continue;
    for (const pbp::BorcherdsRecord& rec : b.records) {
      pbp::ResultRecord fresh = pbp::make_result_record(cfg, b, rec);
      if (fresh.singular == stored.singular) return {cfg, b, rec};
    }
  }
  throw std::runtime_error(
      "stored record not re-derived: theta block " + stored.theta_block +
      " at (k=" + std::to_string(stored.k) + ", N=" +
      std::to_string(stored.N) + ", c=" + std::to_string(stored.c) +
      ", t=" + std::to_string(stored.t) + ") produced no matching product");
}

int run_record_op(const std::string& op, const std::string& record_path,
                  const SearchFlags& f, long xi_order, long q_order) {
  for (const pbp::ResultRecord& stored : read_records(record_path)) {
    if (stored.type != "record") continue;
    Rederived r = rederive(stored, f);
    if (op == "bp-expand") {
      std::vector<pbp::JacobiTrunc> fj =
          pbp::bp_expand(r.rec, xi_order, q_order, !f.no_dual_route);
      for (std::size_t i = 0; i < fj.size(); ++i) {
        json coeffs = json::array();
        const pbp::QSeriesTrunc& s = fj[i].series;
        for (long n = 0; n <= s.trunc_order(); ++n) {
          const pbp::LaurentPoly& p = s.coeff_rel(n);
          long abs_n = pbp::long_of(pbp::Rat(s.offset() + n));
          p.for_each_term([&](long rr, const pbp::Rat& v) {
            coeffs.push_back({abs_n, rr, pbp::rat_str(v)});
          });
        }
        json line = {{"type", "fj"},
                     {"theta_block", stored.theta_block},
                     {"xi_grade", stored.c + static_cast<long>(i)},
                     {"weight", fj[i].k},
                     {"index", fj[i].m},
                     {"coeffs", coeffs}};
        std::cout << line.dump() << "\n";
      }
    } else {
      // confirm / cusp-check: the pipeline recomputes both fields; emit
      // the refreshed record.
      std::cout << pbp::record_to_json(
                       pbp::make_result_record(r.cfg, r.block, r.rec))
                << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Paramodular Borcherds product search"};
  app.require_subcommand(1);

  // tb enum
  CLI::App* tb = app.add_subcommand("tb", "Theta-block utilities");
  tb->require_subcommand(1);
  CLI::App* tb_enum = tb->add_subcommand("enum", "Enumerate theta blocks");
  long eb_weight = 0, eb_index = 0, eb_qpow = 0;
  bool eb_denominator = false;
  tb_enum->add_option("--weight", eb_weight, "Weight k")->required();
  tb_enum->add_option("--index", eb_index, "Index m")->required();
  tb_enum->add_option("--qpow", eb_qpow, "Leading q-exponent A")->required();
  tb_enum->add_flag("--denominator", eb_denominator,
                    "Enumerate blocks with denominator instead");

  auto add_record_cmd = [&](const char* name, const char* desc,
                            SearchFlags& f, std::string& record_path) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_search_flags(cmd, f);
    cmd->add_option("--record", record_path,
                    "Record file (JSON lines; \"-\" for stdin)");
    return cmd;
  };

  // search
  SearchFlags sf;
  CLI::App* search = app.add_subcommand("search", "Run the search pipeline");
  auto search_opts = add_search_flags(search, sf);
  search->add_option("--config", sf.config_path,
                     "JSON config file; flags override its values");

  // confirm / cusp-check
  SearchFlags cf, kf;
  std::string confirm_record, cusp_record;
  add_record_cmd("confirm", "Refresh a stored record's confirmation", cf,
                 confirm_record);
  add_record_cmd("cusp-check", "Re-run the cuspidality pass on a record", kf,
                 cusp_record);

  // bp expand
  SearchFlags bf;
  std::string bp_record;
  CLI::App* bp = app.add_subcommand("bp", "Borcherds product utilities");
  bp->require_subcommand(1);
  CLI::App* bp_expand = bp->add_subcommand(
      "expand", "Expand a stored record's Fourier-Jacobi coefficients");
  add_search_flags(bp_expand, bf);
  bp_expand->add_option("--record", bp_record,
                        "Record file (JSON lines; \"-\" for stdin)");
  long xi_order = 1, q_order = 4;
  bp_expand->add_option("--xi-order", xi_order, "Highest xi-grade offset");
  bp_expand->add_option("--q-order", q_order, "q-truncation per grade");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tb_enum->parsed()) {
      for (const pbp::ThetaBlock& blk :
           pbp::tb_enumerate(eb_weight, eb_index, eb_qpow, eb_denominator)) {
        json line = {{"type", "theta_block"},
                     {"block", pbp::theta_block_str(blk.mult)},
                     {"weight", pbp::long_of(blk.k)},
                     {"index", pbp::long_of(blk.m)},
                     {"qpow", pbp::long_of(blk.A)},
                     {"cusp", pbp::mult_is_cusp(blk.mult)},
                     {"denominator", blk.has_denominator}};
        std::cout << line.dump() << "\n";
      }
      return 0;
    }
    if (search->parsed()) {
      if (!sf.config_path.empty())
        apply_config(sf.config_path, sf, search_opts);
      std::vector<std::pair<long, long>> pairs;
      if (!sf.seed_pairs.empty())
        pairs = parse_seed_pairs(sf.seed_pairs);
      else
        pairs = {{sf.c, sf.t}};
      bool aborted = false;
      for (auto [c, t] : pairs)
        aborted |= emit_search(to_config(sf, c, t), std::cout);
      return aborted ? 2 : 0;
    }
    for (auto& [name, flags, record] :
         {std::tuple<const char*, SearchFlags*, std::string*>{
              "confirm", &cf, &confirm_record},
          {"cusp-check", &kf, &cusp_record}}) {
      if (app.get_subcommand(name)->parsed())
        return run_record_op(name, *record, *flags, 0, 0);
    }
    if (bp_expand->parsed())
      return run_record_op("bp-expand", bp_record, bf, xi_order, q_order);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    pbp::ResultRecord err;
    err.type = "error";
    err.status = "exception";
    err.message = e.what();
    std::cout << pbp::record_to_json(err) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
