#include "pbp/numeric.hpp"

namespace pbp {

int moebius(long n) {
  if (n < 1) throw std::invalid_argument("moebius: n must be positive");
  int result = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      result = -result;
    }
  }
  if (n > 1) result = -result;
  return result;
}

long totient(long n) {
  if (n < 1) throw std::invalid_argument("totient: n must be positive");
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<long> divisors(long n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be positive");
  std::vector<long> small, large;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

long sigma0(long n) { return static_cast<long>(divisors(n).size()); }

Int sigma_pow(long n, long k) {
  Int total = 0;
  for (long d : divisors(n)) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(k));
    total += p;
  }
  return total;
}

long atom_weight(long r) {
  if (r < 1) throw std::invalid_argument("atom_weight: r must be positive");
  long num = r * r, n = r;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      num = num / (p * p) * (p * p - 1);
    }
  }
  if (n > 1) num = num / (n * n) * (n * n - 1);
  return num;
}

Int floor_div(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rat: empty token");
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("parse_rat: bad token '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& x) { return x.get_str(); }

}  // namespace pbp
