#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbp {

using Int = mpz_class;
using Rat = mpq_class;

// Möbius function; 0 on non-squarefree n. n >= 1.
int moebius(long n);

// Euler totient. n >= 1.
long totient(long n);

// All positive divisors of n >= 1, ascending.
std::vector<long> divisors(long n);

// Number of positive divisors.
long sigma0(long n);

// sigma_k(n) = sum of k-th powers of divisors, as a big integer.
Int sigma_pow(long n, long k);

// r^2 * prod_{p | r} (1 - 1/p^2), an integer ("atom weight"; twice the
// index of the r-th atom). r >= 1.
long atom_weight(long r);

// floor of a rational.
Int floor_div(const Rat& x);

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

// Parses "p/q" or "p" into a rational; throws on malformed input.
Rat parse_rat(const std::string& s);

std::string rat_str(const Rat& x);

}  // namespace pbp
