#include "pbp/laurent.hpp"

#include <mutex>
#include <sstream>

namespace pbp {

namespace {
const Rat kZero = 0;
}

void LaurentPoly::normalize() {
  std::size_t begin = 0, end = c_.size();
  while (end > begin && c_[end - 1] == 0) --end;
  while (begin < end && c_[begin] == 0) ++begin;
  if (begin == end) {
    c_.clear();
    lo_ = 0;
    integral_ = true;
    return;
  }
  if (begin > 0 || end < c_.size()) {
    std::vector<Rat> trimmed(c_.begin() + begin, c_.begin() + end);
    c_ = std::move(trimmed);
    lo_ += static_cast<long>(begin);
  }
  integral_ = true;
  for (const Rat& v : c_)
    if (!is_integer(v)) {
      integral_ = false;
      break;
    }
}

LaurentPoly LaurentPoly::monomial(long e, Rat v) {
  LaurentPoly p;
  if (v != 0) {
    p.lo_ = e;
    p.c_.push_back(std::move(v));
    p.integral_ = is_integer(p.c_[0]);
  }
  return p;
}

LaurentPoly LaurentPoly::constant(Rat v) { return monomial(0, std::move(v)); }

LaurentPoly LaurentPoly::from_terms(const std::map<long, Rat>& terms) {
  LaurentPoly p;
  if (terms.empty()) return p;
  long lo = terms.begin()->first, hi = terms.rbegin()->first;
  p.lo_ = lo;
  p.c_.assign(static_cast<std::size_t>(hi - lo + 1), Rat(0));
  for (const auto& [e, v] : terms) p.c_[static_cast<std::size_t>(e - lo)] = v;
  p.normalize();
  return p;
}

long LaurentPoly::lo() const {
  if (is_zero()) throw std::logic_error("LaurentPoly::lo on zero polynomial");
  return lo_;
}

long LaurentPoly::hi() const {
  if (is_zero()) throw std::logic_error("LaurentPoly::hi on zero polynomial");
  return lo_ + static_cast<long>(c_.size()) - 1;
}

std::size_t LaurentPoly::term_count() const {
  std::size_t n = 0;
  for (const Rat& v : c_)
    if (v != 0) ++n;
  return n;
}

const Rat& LaurentPoly::coeff(long e) const {
  if (is_zero() || e < lo_ || e > lo_ + static_cast<long>(c_.size()) - 1) return kZero;
  return c_[static_cast<std::size_t>(e - lo_)];
}

std::map<long, Rat> LaurentPoly::terms() const {
  std::map<long, Rat> t;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) t.emplace(lo_ + static_cast<long>(i), c_[i]);
  return t;
}

void LaurentPoly::for_each_term(const std::function<void(long, const Rat&)>& f) const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) f(lo_ + static_cast<long>(i), c_[i]);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p(*this);
  for (Rat& v : p.c_) v = -v;
  return p;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  long lo = std::min(lo_, o.lo_);
  long hi = std::max(this->hi(), o.hi());
  LaurentPoly p;
  p.lo_ = lo;
  p.c_.assign(static_cast<std::size_t>(hi - lo + 1), Rat(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    p.c_[static_cast<std::size_t>(lo_ - lo) + i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i)
    p.c_[static_cast<std::size_t>(o.lo_ - lo) + i] += o.c_[i];
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly p;
  if (is_zero() || o.is_zero()) return p;
  p.lo_ = lo_ + o.lo_;
  p.c_.assign(c_.size() + o.c_.size() - 1, Rat(0));
  if (integral_ && o.integral_) {
    // Fast path: pure mpz accumulation on numerators (denominators are 1).
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const mpz_srcptr ai = mpq_numref(c_[i].get_mpq_t());
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        if (o.c_[j] == 0) continue;
        mpz_addmul(mpq_numref(p.c_[i + j].get_mpq_t()), ai,
                   mpq_numref(o.c_[j].get_mpq_t()));
      }
    }
  } else {
    Rat tmp;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        if (o.c_[j] == 0) continue;
        tmp = c_[i] * o.c_[j];
        p.c_[i + j] += tmp;
      }
    }
  }
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::operator*(const Rat& s) const {
  if (s == 0) return LaurentPoly();
  LaurentPoly p(*this);
  for (Rat& v : p.c_) v *= s;
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::shifted(long e) const {
  LaurentPoly p(*this);
  if (!p.is_zero()) p.lo_ += e;
  return p;
}

LaurentPoly LaurentPoly::substituted_power(long j) const {
  if (j < 1) throw std::invalid_argument("substituted_power: j must be >= 1");
  if (j == 1 || is_zero()) return *this;
  LaurentPoly p;
  p.lo_ = lo_ * j;
  p.c_.assign((c_.size() - 1) * static_cast<std::size_t>(j) + 1, Rat(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    p.c_[i * static_cast<std::size_t>(j)] = c_[i];
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::halved_exponents() const {
  if (is_zero()) return *this;
  if (lo_ % 2 != 0) throw std::domain_error("halved_exponents: odd low exponent");
  LaurentPoly p;
  p.lo_ = lo_ / 2;
  p.c_.assign((c_.size() + 1) / 2, Rat(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (i % 2 != 0) throw std::domain_error("halved_exponents: odd exponent present");
    p.c_[i / 2] = c_[i];
  }
  p.normalize();
  return p;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return lo_ == o.lo_ && c_ == o.c_;
}

bool LaurentPoly::is_unit_monomial() const {
  return c_.size() == 1 && (c_[0] == 1 || c_[0] == -1);
}

std::string LaurentPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for_each_term([&](long e, const Rat& v) {
    if (!first) os << (v > 0 ? " + " : " - ");
    else if (v < 0) os << "-";
    first = false;
    Rat a = abs(v);
    if (a != 1 || e == 0) os << a.get_str();
    if (e != 0) {
      if (a != 1) os << "*";
      os << "z^" << e;
    }
  });
  return os.str();
}

std::pair<LaurentPoly, LaurentPoly> lp_divide(const LaurentPoly& a,
                                              const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("lp_divide: division by zero");
  const Rat& btop = b.c_.back();
  const Rat& bbot = b.c_.front();
  if (!(btop == 1 || btop == -1) || !(bbot == 1 || bbot == -1))
    throw std::domain_error("lp_divide: divisor extremes are not units");
  const long d = b.degree_span();

  LaurentPoly rem = a;
  std::map<long, Rat> q;
  // Phase 1: cancel from the top until the highest exponent is < d.
  while (!rem.is_zero() && rem.hi() >= d) {
    long e = rem.hi() - b.hi();
    Rat f = rem.c_.back() / btop;
    q[e] += f;
    rem = rem - b.shifted(e) * f;
  }
  // Phase 2: cancel negative exponents from the bottom; each step has
  // top exponent rem.lo() + d < d so phase 1's invariant is preserved.
  while (!rem.is_zero() && rem.lo() < 0) {
    long e = rem.lo() - b.lo();
    Rat f = rem.c_.front() / bbot;
    q[e] += f;
    rem = rem - b.shifted(e) * f;
  }
  return {LaurentPoly::from_terms(q), rem};
}

const LaurentPoly& cyclotomic(long r) {
  if (r < 1) throw std::invalid_argument("cyclotomic: r must be positive");
  static std::vector<LaurentPoly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<long>(cache.size()) > r && !cache[r].is_zero()) return cache[r];
  if (static_cast<long>(cache.size()) <= r) cache.resize(r + 1);
  // Phi_r = (X^r - 1) / prod_{d | r, d < r} Phi_d, computed by exact division.
  std::function<const LaurentPoly&(long)> get = [&](long n) -> const LaurentPoly& {
    if (!cache[n].is_zero()) return cache[n];
    LaurentPoly num = LaurentPoly::from_terms({{n, Rat(1)}, {0, Rat(-1)}});
    for (long d : divisors(n)) {
      if (d == n) continue;
      auto [quot, remdr] = lp_divide(num, get(d));
      if (!remdr.is_zero()) throw std::logic_error("cyclotomic: nonzero remainder");
      num = quot;
    }
    cache[n] = num;
    return cache[n];
  };
  return get(r);
}

}  // namespace pbp
