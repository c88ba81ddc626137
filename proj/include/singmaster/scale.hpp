#pragma once

// Scale selection: given two collision coordinate pairs (m, n) and (m', n'),
// find a scale parameter P (a power of two) at which every low-height integer
// combination of the coordinates is cleanly latched — either far below or far
// above each comparison threshold P^j — while the coordinates stay well
// separated and within a polynomial size cap.  The scan returns the smallest
// admissible P in a dyadic range, with a per-axiom report naming a concrete
// witness for every failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "singmaster/common.hpp"

namespace singmaster::scale {

struct ScaleParams {
  double latch_exponent = 1.0;   // B: band half-width factor log^B P around P^j
  double sep_exponent = 1.0;     // separation requirement: P log^B P
  std::uint64_t height_bound = 2;  // coefficient height H for the dichotomy
  unsigned j_max = 2;              // thresholds P^1 .. P^j_max
  std::uint64_t p_min = 16;        // scan range: powers of two, inclusive
  std::uint64_t p_max = 16384;
  double size_power = 6;           // all coordinates must be <= P^size_power
};

// Relative closeness at scale P: |x - y| <= P / log^B P.
bool approx_rel(std::int64_t x, std::int64_t y, std::uint64_t P,
                const ScaleParams& params);

// Per-axiom outcome for one candidate P.  A dichotomy failure records the
// offending coefficient tuple, its combination value and the violated band;
// size/separation failures record the offending magnitude.
struct AxiomReport {
  bool size_ok = false;
  bool dichotomy_ok = false;
  bool separation_ok = false;
  std::int64_t a = 0, a2 = 0, b = 0, b2 = 0;  // dichotomy witness
  unsigned j = 0;
  long double combo = 0;  // |a m + a' m' + b n + b' n'|
  long double band_lo = 0, band_hi = 0;
  long double offending = 0;  // size / separation witness
  bool pass() const { return size_ok && dichotomy_ok && separation_ok; }
};

struct ScaleResult {
  std::uint64_t P = 0;
  AxiomReport report;
};

// Scan powers of two P in [p_min, p_max] ascending; return the first P whose
// size, dichotomy and separation axioms all hold for m' < m <= n < n'.
// Throws domain_error on ordering violations or a malformed dyadic range.
std::optional<ScaleResult> select_scale(std::uint64_t m, std::uint64_t m2,
                                        std::uint64_t n, std::uint64_t n2,
                                        const ScaleParams& params);

// Same scan, also retaining the failure report for every rejected P.
struct ScanOutcome {
  std::optional<ScaleResult> selected;
  std::vector<ScaleResult> rejected;  // ascending P, reports for failures
};
ScanOutcome scan_scales(std::uint64_t m, std::uint64_t m2, std::uint64_t n,
                        std::uint64_t n2, const ScaleParams& params);

// The theoretically motivated window [exp(log^{2/3+eps/2} n'),
// exp(2 log^{2/3+eps/2} n')], reported as the dyadic sub-range it contains.
// Degenerates quickly for small n'; `nonempty` says whether any power of two
// >= 4 lies inside.
struct SearchRange {
  long double lo = 0;
  long double hi = 0;
  std::uint64_t first_pow2 = 0;
  std::uint64_t last_pow2 = 0;
  bool nonempty = false;
};
SearchRange suggested_range(std::uint64_t n2, double eps);

bool selftest(std::ostream& log);

}  // namespace singmaster::scale
