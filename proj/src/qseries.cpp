#include "pbp/qseries.hpp"

#include <algorithm>

namespace pbp {

QSeriesTrunc::QSeriesTrunc(Rat offset, std::vector<LaurentPoly> coeffs)
    : offset_(std::move(offset)), c_(std::move(coeffs)) {
  if (c_.empty()) throw std::domain_error("QSeriesTrunc: empty window");
  renormalize();
}

void QSeriesTrunc::renormalize() {
  // Shift leading zero coefficients into the offset so that c_[0] != 0.
  // A series that is zero through its whole window stays as-is: we have no
  // information past the truncation, so the window records what we know.
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (lead == c_.size() || lead == 0) return;
  offset_ += static_cast<long>(lead);
  c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
}

QSeriesTrunc QSeriesTrunc::constant(Rat v, long L) {
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  c[0] = LaurentPoly::constant(std::move(v));
  return QSeriesTrunc(0, std::move(c));
}

QSeriesTrunc QSeriesTrunc::zero(long L) {
  return QSeriesTrunc(0, std::vector<LaurentPoly>(static_cast<std::size_t>(L) + 1));
}

bool QSeriesTrunc::is_zero() const {
  for (const auto& p : c_)
    if (!p.is_zero()) return false;
  return true;
}

const LaurentPoly& QSeriesTrunc::coeff_rel(long n) const {
  static const LaurentPoly kZero;
  if (n < 0 || n >= static_cast<long>(c_.size())) return kZero;
  return c_[static_cast<std::size_t>(n)];
}

const LaurentPoly& QSeriesTrunc::coeff_abs(const Rat& e) const {
  static const LaurentPoly kZero;
  if (e > known_through())
    throw std::out_of_range("QSeriesTrunc: q-exponent beyond truncation");
  Rat rel = e - offset_;
  if (!is_integer(rel) || rel < 0) return kZero;
  return c_[rel.get_num().get_ui()];
}

bool QSeriesTrunc::integral() const {
  for (const auto& p : c_)
    if (!p.integral()) return false;
  return true;
}

QSeriesTrunc QSeriesTrunc::operator+(const QSeriesTrunc& o) const {
  // Align the two series on a common offset; truncate to the shorter reach.
  Rat off = std::min(offset_, o.offset_);
  Rat da = offset_ - off, db = o.offset_ - off;
  if (!is_integer(da) || !is_integer(db))
    throw std::domain_error("QSeriesTrunc: incompatible fractional offsets");
  long sa = da.get_num().get_si(), sb = db.get_num().get_si();
  Rat reach = std::min(known_through(), o.known_through());
  long L = Rat(reach - off).get_num().get_si();
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  for (long n = 0; n <= L; ++n)
    c[static_cast<std::size_t>(n)] = coeff_rel(n - sa) + o.coeff_rel(n - sb);
  return QSeriesTrunc(off, std::move(c));
}

QSeriesTrunc QSeriesTrunc::operator-() const {
  auto c = c_;
  for (auto& p : c) p = -p;
  return QSeriesTrunc(offset_, std::move(c));
}

QSeriesTrunc QSeriesTrunc::operator-(const QSeriesTrunc& o) const {
  return *this + (-o);
}

QSeriesTrunc QSeriesTrunc::operator*(const QSeriesTrunc& o) const {
  // Truncation: this is exact through min(L_a, L_b) relative terms, since
  // the unknown tails start at offset+L+1 on each side.
  long L = std::min(trunc_order(), o.trunc_order());
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  for (long i = 0; i <= L && i <= trunc_order(); ++i) {
    const LaurentPoly& a = c_[static_cast<std::size_t>(i)];
    if (a.is_zero()) continue;
    for (long j = 0; i + j <= L; ++j) {
      const LaurentPoly& b = o.coeff_rel(j);
      if (b.is_zero()) continue;
      c[static_cast<std::size_t>(i + j)] = c[static_cast<std::size_t>(i + j)] + a * b;
    }
  }
  return QSeriesTrunc(offset_ + o.offset_, std::move(c));
}

QSeriesTrunc QSeriesTrunc::operator*(const Rat& s) const {
  auto c = c_;
  for (auto& p : c) p = p * s;
  return QSeriesTrunc(offset_, std::move(c));
}

bool QSeriesTrunc::operator==(const QSeriesTrunc& o) const {
  Rat reach = std::min(known_through(), o.known_through());
  Rat off = std::min(offset_, o.offset_);
  Rat da = offset_ - off, db = o.offset_ - off;
  if (!is_integer(da) || !is_integer(db)) return false;
  long sa = da.get_num().get_si(), sb = db.get_num().get_si();
  long L = Rat(reach - off).get_num().get_si();
  for (long n = 0; n <= L; ++n)
    if (!(coeff_rel(n - sa) == o.coeff_rel(n - sb))) return false;
  return true;
}

QSeriesTrunc QSeriesTrunc::q_shifted(const Rat& e) const {
  return QSeriesTrunc(offset_ + e, c_);
}

QSeriesTrunc QSeriesTrunc::zeta_power(long j) const {
  auto c = c_;
  for (auto& p : c) p = p.substituted_power(j);
  return QSeriesTrunc(offset_, std::move(c));
}

QSeriesTrunc QSeriesTrunc::zeta_halved() const {
  auto c = c_;
  for (auto& p : c) p = p.halved_exponents();
  return QSeriesTrunc(offset_, std::move(c));
}

QSeriesTrunc QSeriesTrunc::truncated_through(const Rat& e) const {
  Rat rel = e - offset_;
  long L = static_cast<long>(floor_div(rel).get_si());
  if (L < 0) throw std::domain_error("truncated_through: empty window");
  L = std::min(L, trunc_order());
  return QSeriesTrunc(offset_,
                      std::vector<LaurentPoly>(c_.begin(), c_.begin() + L + 1));
}

QSeriesTrunc QSeriesTrunc::q_compressed(long s) const {
  if (s < 1) throw std::domain_error("q_compressed: s must be positive");
  if (s == 1) return *this;
  if (is_zero()) {
    // Keep the zero window, compressing its reach.
    long L = trunc_order() / s;
    return QSeriesTrunc(offset_ / s, std::vector<LaurentPoly>(
                                         static_cast<std::size_t>(L) + 1));
  }
  // The leading coefficient is nonzero after normalization; every other
  // nonzero term must sit s*j above it.
  if ((*this).c_.empty()) return *this;
  std::vector<LaurentPoly> out;
  long L = trunc_order();
  long outL = L / s;
  out.resize(static_cast<std::size_t>(outL) + 1);
  for (long j = 0; j <= L; ++j) {
    const LaurentPoly& c = c_[static_cast<std::size_t>(j)];
    if (c.is_zero()) continue;
    if (j % s != 0)
      throw std::domain_error("q_compressed: term off the q^(1/" +
                              std::to_string(s) + ") grid");
    out[static_cast<std::size_t>(j / s)] = c;
  }
  Rat off = offset_ / s;
  off.canonicalize();
  return QSeriesTrunc(off, std::move(out));
}

QSeriesTrunc series_divide(const QSeriesTrunc& a, const QSeriesTrunc& b) {
  if (b.is_zero()) throw std::domain_error("series_divide: zero denominator");
  // b is normalized, so b_0 is its true leading Laurent coefficient.
  const LaurentPoly& b0 = b.coeff_rel(0);
  long L = std::min(a.trunc_order(), b.trunc_order());
  if (a.is_zero()) return QSeriesTrunc(a.offset_ - b.offset_,
                                       std::vector<LaurentPoly>(L + 1));
  std::vector<LaurentPoly> c(static_cast<std::size_t>(L) + 1);
  for (long n = 0; n <= L; ++n) {
    LaurentPoly rhs = a.coeff_rel(n);
    for (long i = 0; i < n; ++i) {
      if (c[static_cast<std::size_t>(i)].is_zero()) continue;
      rhs = rhs - c[static_cast<std::size_t>(i)] * b.coeff_rel(n - i);
    }
    if (rhs.is_zero()) continue;
    auto [q, r] = lp_divide(rhs, b0);
    if (!r.is_zero()) throw SeriesDivideError(n);
    c[static_cast<std::size_t>(n)] = std::move(q);
  }
  return QSeriesTrunc(a.offset_ - b.offset_, std::move(c));
}

QSeriesTrunc series_mul_pow(const QSeriesTrunc& f, long e) {
  long L = f.trunc_order();
  if (e == 0) return QSeriesTrunc::one(L).q_shifted(0);
  QSeriesTrunc base = e > 0 ? f : series_divide(QSeriesTrunc::one(L), f);
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  // Binary powering; every intermediate stays at truncation order L.
  QSeriesTrunc acc = QSeriesTrunc::one(L);
  QSeriesTrunc sq = base;
  while (n) {
    if (n & 1) acc = acc * sq;
    n >>= 1;
    if (n) sq = sq * sq;
  }
  return acc;
}

}  // namespace pbp
