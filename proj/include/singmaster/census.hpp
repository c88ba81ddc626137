#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "singmaster/common.hpp"
#include "singmaster/exactcore.hpp"

// Exhaustive collision census over Pascal-triangle prefixes, the exact
// inverse problems (find all representations of a given value), and the
// parametric families that realize the sharp multiplicity bounds.
namespace singmaster::census {

using exact::Nat;

// One representation of a value: t = C(n, m) or t = (n)_m.  Both components
// are big integers: mirror witnesses such as (t, t-1) track the magnitude
// of t itself.
struct Witness {
  Nat n;
  Nat m;
  friend bool operator==(const Witness& a, const Witness& b) {
    return a.n == b.n && a.m == b.m;
  }
  friend bool operator<(const Witness& a, const Witness& b) {  // (n, m) lex
    int c = cmp(a.n, b.n);
    return c != 0 ? c < 0 : cmp(a.m, b.m) < 0;
  }
};

// --- exact inversion ---------------------------------------------------------

// The unique n >= m with C(n, m) = t (resp. (n)_m = t), or nullopt.  Both
// maps are strictly increasing in n for fixed m >= 1, so a binary search
// bracketed by a floating estimate of n settles existence; the returned n
// is confirmed by exact re-evaluation.  Requires t >= 2, m >= 1.
std::optional<Nat> invert(const Nat& t, std::uint64_t m, Kind kind);

// All solutions of C(n, m) = t (resp. (n)_m = t) with 1 <= m < n: iterate
// m upward while the smallest attainable value at that m — C(2m, m), resp.
// m! — still fits under t, invert each, and (binomial) close under the
// mirror (n, m) -> (n, n-m).  Sorted lexicographically by (n, m).
// Requires t >= 2.
std::vector<Witness> multiplicity(const Nat& t, Kind kind);

// --- the census proper -------------------------------------------------------

struct CensusConfig {
  Kind kind = Kind::binomial;
  std::uint64_t n_max = 0;        // >= 4
  std::uint64_t m_min = 2;
  double region_epsilon = 0.1;    // interior-region parameter, in (0, 1)
  std::string checkpoint_path;    // empty = run fully in memory
  unsigned workers = 1;
  // Test hook: stop after committing this column (requires checkpoint_path),
  // leaving a resumable checkpoint behind.  0 = run to completion.
  std::uint64_t stop_after_m = 0;
};

struct WitnessFlags {
  bool in_left_half = false;       // m <= n/2
  bool in_interior_region = false; // exp(log^(2/3+eps) n) <= m <= n/2
};

// A value attained at least twice within the scanned range.
struct Record {
  Nat t;
  std::vector<Witness> witnesses;     // sorted by m ascending; no duplicates
  std::vector<WitnessFlags> flags;    // parallel to witnesses
};

// Scan every C(n, m) with m_min <= m <= n/2 (binomial) or (n)_m with
// m_min <= m < n (falling), n <= n_max, and emit each value attained at
// least twice.  The scan buckets 128-bit modular fingerprints per column
// of constant m; candidate groups are re-verified with exact arithmetic
// before emission, so output never depends on the absence of fingerprint
// collisions.  Records arrive at `sink` sorted by t ascending.  Returns
// the number of records emitted.
//
// With a checkpoint_path, per-column results are persisted (ascending m)
// into checkpoint_path + ".shards/", and a rerun resumes after the last
// fully committed column, producing a byte-identical record stream.
std::size_t run_census(const CensusConfig& cfg,
                       const std::function<void(const Record&)>& sink);

// Region classification for a witness at scale n:
//   in_left_half:       m <= n/2
//   in_interior_region: exp(log^(2/3+eps) n) <= m <= n/2
// The interior lower boundary is evaluated in long double; m within one
// ulp of the boundary is classified outside (the conservative side).
WitnessFlags classify_region(const Nat& n, std::uint64_t m, double eps = 0.1);

// --- parametric families -----------------------------------------------------

// Infinite families with guaranteed extra representations.
//
//   fibonacci (j >= 1):   with n = F(2j+2) F(2j+3) - 1, m = F(2j) F(2j+3) - 1,
//                         C(n+1, m+1) = C(n, m+2).  The witness pair is
//                         (n+1, m+1), (n, m+2).  Exact certificate:
//                         (n+1)(m+2) = (n-m)(n-m-1), equivalent to the
//                         binomial equality via one-step Pascal ratios.
//   falling_simple (a > 2):       (a^2-a)_{a^2-2a} = (a^2-a-1)_{a^2-2a+1}.
//   falling_general (2 <= b < a): with n = (a)_b,
//                         (n)_{n-a} = (n-1)_{n-a+b-1}.  The sides equal
//                         n!/a! and (n-1)!/(a-b)!, so equality reduces to
//                         the exact certificate n * (a-b)! = a!.
//                         falling_simple is the b = 2 special case.
//
// Witness components can exceed 64 bits (n = (a)_b reaches 30! at a = 30),
// so family instances carry big-integer pairs.  `certified` reports the
// cross-multiplied integer certificate; `t_evaluated` additionally states
// that both sides were computed outright and compared (attempted only when
// the value has feasible size).
struct FamilyInstance {
  struct Pair {
    Nat n, m;
  };
  Pair a, b;                 // the two coinciding representations
  Nat t;                     // the common value; meaningful iff t_evaluated
  bool t_evaluated = false;  // both sides computed outright and equal
  bool certified = false;    // exact cross-multiplied identity held
  std::string note;
};

enum class Family { fibonacci, falling_simple, falling_general };

// index semantics: fibonacci -> j >= 1; falling_simple -> a > 2.
// falling_general takes (a, b) via the two-argument overload.
FamilyInstance family(Family which, std::uint64_t index);
FamilyInstance family_falling_general(std::uint64_t a, std::uint64_t b);

// --- local counting near a witness -------------------------------------------

// Representations C(n', m') = t for t = C(n, m), with m' restricted to the
// window [m - m^(eps/10), m].  Preconditions for the counting regime:
// m <= n/2 and m >= n^(1/2 + eps); pass force = true to count anyway.
struct LocalCount {
  Nat t;
  std::vector<Witness> witnesses;  // those within the window, sorted by (n, m)
  double window_lo = 0;            // m - m^(eps/10)
  bool gated = false;              // preconditions failed (and !force)
  std::string gate_reason;
};
LocalCount local_count(const Nat& n, std::uint64_t m, double eps = 0.01,
                       bool force = false);

bool selftest(std::ostream& log);

}  // namespace singmaster::census
