#pragma once

// Test-side oracles, deliberately implemented by routes independent of the
// library under test: trial division instead of Miller-Rabin, Pascal-row
// accumulation instead of the fingerprint census, Euler-Maclaurin constants
// instead of the recurrence-based special functions, fixed-step Simpson
// instead of adaptive quadrature, and a standalone axiom checker for the
// scale scan.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "singmaster/exactcore.hpp"

namespace oracle {

using singmaster::exact::Nat;

// --- primality / prime counting by trial division ----------------------------

inline bool is_prime_td(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t count_primes_td(std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t c = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) c += is_prime_td(n);
  return c;
}

// --- brute collision censuses -------------------------------------------------
//
// Every value in the scanned region, keyed exactly; entries with fewer than
// two representations dropped.  Row values maintained by one multiplication
// per step -- a different recurrence from the library's inverse-table route.

using WitnessList = std::vector<std::pair<std::uint64_t, std::uint64_t>>;

inline std::map<Nat, WitnessList> brute_binomial_census(std::uint64_t n_max,
                                                        std::uint64_t m_min) {
  std::map<Nat, WitnessList> hits;
  for (std::uint64_t n = 2 * m_min; n <= n_max; ++n) {
    Nat v = 1;  // C(n, m_min), prefix products of the ratio definition
    for (std::uint64_t i = 1; i <= m_min; ++i) {
      v *= n - m_min + i;
      v /= i;
    }
    for (std::uint64_t m = m_min; 2 * m <= n; ++m) {
      if (m > m_min) v = v * (n - m + 1) / m;  // C(n,m) from C(n,m-1)
      hits[v].emplace_back(n, m);
    }
  }
  std::erase_if(hits, [](const auto& kv) { return kv.second.size() < 2; });
  return hits;
}

inline std::map<Nat, WitnessList> brute_falling_census(std::uint64_t n_max,
                                                       std::uint64_t m_min) {
  std::map<Nat, WitnessList> hits;
  for (std::uint64_t n = m_min + 1; n <= n_max; ++n) {
    Nat v = 1;  // (n)_{m_min}
    for (std::uint64_t i = 0; i < m_min; ++i) v *= n - i;
    for (std::uint64_t m = m_min; m < n; ++m) {
      if (m > m_min) v *= n - m + 1;  // (n)_m from (n)_{m-1}
      hits[v].emplace_back(n, m);
    }
  }
  std::erase_if(hits, [](const auto& kv) { return kv.second.size() < 2; });
  return hits;
}

// --- classical constants via Euler-Maclaurin ----------------------------------

inline long double euler_gamma() {
  const unsigned n = 100000;
  long double h = 0;
  for (unsigned k = n; k >= 1; --k) h += 1.0L / k;
  long double x = n;
  return h - std::log(x) - 1 / (2 * x) + 1 / (12 * x * x) -
         1 / (120 * x * x * x * x);
}

inline long double pi_squared_over_six() {
  const unsigned K = 20000;
  long double s = 0;
  for (unsigned k = K; k >= 1; --k) s += 1.0L / ((long double)k * k);
  long double x = K;
  return s + 1 / x - 1 / (2 * x * x) + 1 / (6 * x * x * x);
}

// --- fixed-step Simpson quadrature --------------------------------------------

template <class F>
std::complex<long double> simpson_fixed(F f, long double a, long double b,
                                        int steps) {
  std::complex<long double> acc(0, 0);
  long double h = (b - a) / steps;
  for (int i = 0; i < steps; ++i) {
    long double x = a + i * h;
    acc += h / 6 * (f(x) + 4.0L * f(x + h / 2) + f(x + h));
  }
  return acc;
}

// --- standalone scale axiom checker -------------------------------------------
//
// Same three axioms, written directly from their statements with plain
// long-double arithmetic and j recomputed by powers, as a cross-check on the
// library's incremental evaluation.

struct ScaleAxioms {
  bool size_ok, dichotomy_ok, separation_ok;
  bool pass() const { return size_ok && dichotomy_ok && separation_ok; }
};

inline ScaleAxioms brute_scale_axioms(std::uint64_t m, std::uint64_t m2,
                                      std::uint64_t n, std::uint64_t n2,
                                      std::uint64_t P, double b_latch,
                                      double b_sep, std::int64_t H,
                                      unsigned j_max, double size_power) {
  ScaleAxioms ax{true, true, true};
  long double logP = std::log((long double)P);
  long double latch = std::pow(logP, (long double)b_latch);

  for (std::uint64_t v : {m, m2, n, n2})
    if ((long double)v >
        std::pow((long double)P, (long double)size_power))
      ax.size_ok = false;

  for (std::int64_t a = -H; a <= H; ++a)
    for (std::int64_t a2 = -H; a2 <= H; ++a2)
      for (std::int64_t b = -H; b <= H; ++b)
        for (std::int64_t b2 = -H; b2 <= H; ++b2) {
          if (!a && !a2 && !b && !b2) continue;
          long double combo = std::abs(
              (long double)a * m + (long double)a2 * m2 +
              (long double)b * n + (long double)b2 * n2);
          for (unsigned j = 1; j <= j_max; ++j) {
            long double pj = std::pow((long double)P, (long double)j);
            if (combo > pj / latch && combo < pj * latch)
              ax.dichotomy_ok = false;
          }
        }

  long double sep =
      (long double)P * std::pow(logP, (long double)b_sep);
  long double g1 = (long double)(m - m2);
  long double g2 = (long double)std::min(std::min(m, m2), n2 - n);
  ax.separation_ok = g1 >= sep || g2 >= sep;
  return ax;
}

}  // namespace oracle
