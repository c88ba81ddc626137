#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "singmaster/common.hpp"

namespace singmaster::exact {

using Nat = mpz_class;

// --- elementary big-integer helpers -----------------------------------------

// Natural log of a positive big integer, accurate to long double precision.
long double log_nat(const Nat& x);

// Decimal round trip used by the JSON layer (t values overflow JSON numbers).
std::string to_decimal(const Nat& x);
Nat from_decimal(const std::string& s);  // throws domain_error on junk

// Deterministic Miller-Rabin, exact for all inputs < 2^64.
bool is_prime_u64(std::uint64_t n);

// --- the arithmetic the rest of the project is built on ---------------------

// C(n, m), exact.  Evaluated by the multiplicative formula
//   C(n,m) = prod_{k=1..m} (n-m+k)/k
// with a running gcd reduction so every intermediate divides the final
// result (no factorial-sized temporaries; n can be ~1e6 in census mode).
// When both arguments fit in machine words and m is large, evaluation is
// delegated to the library routine, which computes the same exact value
// faster; the two paths are property-tested equal.
Nat binomial(const Nat& n, std::uint64_t m);
Nat binomial(std::uint64_t n, std::uint64_t m);

// (n)_m = n (n-1) ... (n-m+1), exact; equals m! * C(n,m).  m = 0 gives 1.
Nat falling_factorial(const Nat& n, std::uint64_t m);
Nat falling_factorial(std::uint64_t n, std::uint64_t m);

Nat factorial(std::uint64_t m);

// An exact witness of C(n,m) = t resp. (n)_m = t with 1 <= m < n.
struct BinomialSolution {
  Nat t;
  Nat n;
  std::uint64_t m;
};
using FallingSolution = BinomialSolution;  // same shape, falling contract

// --- p-adic valuations, three independent ways -------------------------------
//
// v_p(C(n,m)) is computed as
//   legendre_diff:   v_p(n!) - v_p(m!) - v_p((n-m)!)    with v_p(x!) = sum_j floor(x/p^j)
//   kummer_carries:  carries when adding m and n-m in base p
//   fractional_sum:  sum_j ( {m/p^j} + {(n-m)/p^j} - {n/p^j} ),  p^j <= n,
//                    in exact rational arithmetic (the sum is an integer)
// All three must agree; they vanish whenever p > n.
struct ValuationReport {
  std::uint64_t p = 0;
  std::uint64_t legendre_diff = 0;
  std::uint64_t kummer_carries = 0;
  std::uint64_t fractional_sum = 0;

  bool consistent() const {
    return legendre_diff == kummer_carries && kummer_carries == fractional_sum;
  }
};

ValuationReport valuation_profile(const Nat& n, const Nat& m, std::uint64_t p);

// The shared-valuation identity for two witnesses of the same t: both sides'
// fractional-part sums must agree at every prime (they both equal v_p(t)).
// Throws domain_error when s1.t != s2.t.
bool check_pair_identity(const BinomialSolution& s1, const BinomialSolution& s2,
                         std::uint64_t p);

// Compact invariant suite used by the CLI's --selftest.
bool selftest(std::ostream& log);

}  // namespace singmaster::exact
