#include "pbp/ilp.hpp"

#include <algorithm>
#include <set>

namespace pbp {

namespace {

// A linear constraint sum_j a[j] x_j + c >= 0 over the first a.size()
// variables, with rational coefficients (FM combinations stay rational).
struct Row {
  std::vector<Rat> a;
  Rat c;
};

// Normalize so duplicate constraints dedupe: divide by the largest |coeff|.
void normalize(Row& r) {
  Rat scale = 0;
  for (const Rat& v : r.a)
    if (abs(v) > scale) scale = abs(v);
  if (scale == 0) scale = r.c == 0 ? Rat(1) : abs(r.c);
  r.a.shrink_to_fit();
  for (Rat& v : r.a) v /= scale;
  r.c /= scale;
}

bool row_less(const Row& x, const Row& y) {
  if (x.c != y.c) return x.c < y.c;
  return std::lexicographical_compare(x.a.begin(), x.a.end(), y.a.begin(),
                                      y.a.end());
}

// Eliminate the last variable by combining every positive-coefficient row
// with every negative-coefficient row. Rows not involving it are kept.
std::vector<Row> fm_eliminate(const std::vector<Row>& rows) {
  std::vector<Row> pos, neg, out;
  std::size_t d = rows.empty() ? 0 : rows[0].a.size();
  for (const Row& r : rows) {
    const Rat& lead = r.a[d - 1];
    Row trimmed{std::vector<Rat>(r.a.begin(), r.a.end() - 1), r.c};
    if (lead == 0)
      out.push_back(std::move(trimmed));
    else if (lead > 0)
      pos.push_back(r);
    else
      neg.push_back(r);
  }
  for (const Row& p : pos)
    for (const Row& n : neg) {
      // p: ap x + rest_p >= 0 gives x >= -rest_p / ap; n gives an upper
      // bound; combine to |an| * rest_p + ap * rest_n >= 0.
      Row comb;
      comb.a.resize(d - 1);
      Rat ap = p.a[d - 1], an = -n.a[d - 1];
      for (std::size_t j = 0; j + 1 < d; ++j)
        comb.a[j] = an * p.a[j] + ap * n.a[j];
      comb.c = an * p.c + ap * n.c;
      out.push_back(std::move(comb));
    }
  for (Row& r : out) normalize(r);
  std::sort(out.begin(), out.end(), row_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Row& x, const Row& y) {
                          return x.a == y.a && x.c == y.c;
                        }),
            out.end());
  return out;
}

// Feasibility of a system over rationals via full FM elimination; on
// success fills x (size d) with one rational solution by back-substitution.
bool fm_feasible(const std::vector<Row>& sys, long d, std::vector<Rat>* x) {
  std::vector<std::vector<Row>> levels(static_cast<std::size_t>(d) + 1);
  levels[static_cast<std::size_t>(d)] = sys;
  for (long j = d; j > 0; --j)
    levels[static_cast<std::size_t>(j - 1)] =
        fm_eliminate(levels[static_cast<std::size_t>(j)]);
  for (const Row& r : levels[0])
    if (r.c < 0) return false;
  if (!x) return true;
  x->assign(static_cast<std::size_t>(d), 0);
  for (long j = 1; j <= d; ++j) {
    // Bounds on x_j from level j with x_1..x_{j-1} already fixed.
    bool has_lo = false, has_hi = false;
    Rat lo, hi;
    for (const Row& r : levels[static_cast<std::size_t>(j)]) {
      const Rat& aj = r.a[static_cast<std::size_t>(j - 1)];
      if (aj == 0) continue;
      Rat rest = r.c;
      for (long i = 0; i + 1 < j; ++i)
        rest += r.a[static_cast<std::size_t>(i)] * (*x)[static_cast<std::size_t>(i)];
      Rat bound = -rest / aj;
      if (aj > 0) {
        if (!has_lo || bound > lo) lo = bound, has_lo = true;
      } else {
        if (!has_hi || bound < hi) hi = bound, has_hi = true;
      }
    }
    Rat v = has_lo ? (has_hi ? (lo + hi) / 2 : lo) : (has_hi ? hi : Rat(0));
    (*x)[static_cast<std::size_t>(j - 1)] = v;
  }
  return true;
}

void dfs(const std::vector<std::vector<Row>>& levels, long d, long depth,
         std::vector<Int>& cur, IlpResult& res, long cap, bool& capped) {
  if (capped) return;
  if (depth == d) {
    if (static_cast<long>(res.solutions.size()) == cap) {
      capped = true;
      return;
    }
    res.solutions.push_back(cur);
    return;
  }
  // Integer bounds on x_{depth+1} from the FM level for this depth.
  bool has_lo = false, has_hi = false;
  Rat lo, hi;
  for (const Row& r : levels[static_cast<std::size_t>(depth) + 1]) {
    const Rat& aj = r.a[static_cast<std::size_t>(depth)];
    if (aj == 0) {
      // Fully determined constraint: prune infeasible branches early.
      Rat rest = r.c;
      for (long i = 0; i < depth; ++i)
        rest += r.a[static_cast<std::size_t>(i)] * Rat(cur[static_cast<std::size_t>(i)]);
      if (rest < 0) return;
      continue;
    }
    Rat rest = r.c;
    for (long i = 0; i < depth; ++i)
      rest += r.a[static_cast<std::size_t>(i)] * Rat(cur[static_cast<std::size_t>(i)]);
    Rat bound = -rest / aj;
    if (aj > 0) {
      if (!has_lo || bound > lo) lo = bound, has_lo = true;
    } else {
      if (!has_hi || bound < hi) hi = bound, has_hi = true;
    }
  }
  if (!has_lo || !has_hi)
    throw std::logic_error("ilp: unbounded coordinate after cone check");
  Int lo_i = -floor_div(-lo), hi_i = floor_div(hi);  // ceil(lo), floor(hi)
  for (Int v = lo_i; v <= hi_i; ++v) {
    cur.push_back(v);
    dfs(levels, d, depth + 1, cur, res, cap, capped);
    cur.pop_back();
    if (capped) return;
  }
}

}  // namespace

IlpResult ilp_enumerate(const IlpProblem& p) {
  IlpResult res;
  res.status = IlpResult::Status::Complete;
  long d = p.M.cols();
  long nrows = p.M.rows();
  if (static_cast<long>(p.b.size()) != nrows)
    throw std::domain_error("ilp_enumerate: row counts disagree");
  std::vector<Row> sys;
  for (long i = 0; i < nrows; ++i) {
    Row r;
    r.a.resize(static_cast<std::size_t>(d));
    for (long j = 0; j < d; ++j) r.a[static_cast<std::size_t>(j)] = p.M.at(i, j);
    r.c = p.b[static_cast<std::size_t>(i)];
    normalize(r);
    sys.push_back(std::move(r));
  }
  if (d == 0) {
    bool ok = true;
    for (const Row& r : sys)
      if (r.c < 0) ok = false;
    if (ok) res.solutions.push_back({});
    return res;
  }
  // Recession-cone check: a nonzero integer direction v with M v >= 0
  // exists iff {M v >= 0, v_j = +-1} is rationally feasible for some j.
  for (long j = 0; j < d; ++j)
    for (int sgn : {1, -1}) {
      std::vector<Row> cone;
      for (long i = 0; i < nrows; ++i) {
        Row r;
        r.a.resize(static_cast<std::size_t>(d));
        for (long jj = 0; jj < d; ++jj)
          r.a[static_cast<std::size_t>(jj)] = p.M.at(i, jj);
        r.c = 0;
        cone.push_back(std::move(r));
      }
      // v_j = sgn as two inequalities.
      Row fix1, fix2;
      fix1.a.assign(static_cast<std::size_t>(d), 0);
      fix2.a.assign(static_cast<std::size_t>(d), 0);
      fix1.a[static_cast<std::size_t>(j)] = 1;
      fix1.c = -sgn;
      fix2.a[static_cast<std::size_t>(j)] = -1;
      fix2.c = sgn;
      cone.push_back(fix1);
      cone.push_back(fix2);
      std::vector<Rat> ray;
      if (fm_feasible(cone, d, &ray)) {
        // Scale the rational ray to a primitive integer certificate.
        Int lcm = 1;
        for (const Rat& v : ray)
          mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
        res.certificate.clear();
        for (const Rat& v : ray) {
          Rat s = v * Rat(lcm);
          res.certificate.push_back(s.get_num());
        }
        res.status = IlpResult::Status::Unbounded;
        return res;
      }
    }
  // Bounded: build the FM cascade once, then DFS lexicographically.
  std::vector<std::vector<Row>> levels(static_cast<std::size_t>(d) + 1);
  levels[static_cast<std::size_t>(d)] = sys;
  for (long j = d; j > 0; --j)
    levels[static_cast<std::size_t>(j - 1)] =
        fm_eliminate(levels[static_cast<std::size_t>(j)]);
  for (const Row& r : levels[0])
    if (r.c < 0) return res;  // infeasible: Complete with no solutions
  std::vector<Int> cur;
  bool capped = false;
  dfs(levels, d, 0, cur, res, p.cap, capped);
  if (capped) res.status = IlpResult::Status::Capped;
  std::sort(res.solutions.begin(), res.solutions.end());
  return res;
}

}  // namespace pbp
