#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "singmaster/common.hpp"
#include "singmaster/exactcore.hpp"

// Prime-interval machinery: segmented sieve, exponential sums over primes
// and integers, an oscillatory-integral oracle, smooth-window sums, and
// empirical fractional-part covariances with their predicted values.
namespace singmaster::primes {

using Real = long double;
using Complex = std::complex<Real>;

// --- prime intervals ---------------------------------------------------------

struct PrimeInterval {
  std::uint64_t lo = 2, hi = 2;
  std::vector<std::uint64_t> primes;  // exactly the primes in [lo, hi], sorted
  std::uint64_t count() const { return primes.size(); }
};

// Segmented sieve.  Requires 2 <= lo <= hi <= 2^48; the window hi - lo is
// capped at 2^30 (the materialized list must fit comfortably in memory).
PrimeInterval enumerate_primes(std::uint64_t lo, std::uint64_t hi);

// --- phases ------------------------------------------------------------------

// The phase N/t + M/t^j evaluated at integers or reals t.
struct PhaseParams {
  Real N = 0;
  Real M = 0;
  unsigned j = 1;  // >= 1
  // F = |N|/X + |M|/X^j, the cancellation-regime indicator at scale X
  Real magnitude(Real X) const;
};

// {N / p^j} in [0, 1).  Integral N (the usual case) reduces exactly via
// 128-bit integer arithmetic; fractional N falls back to long-double fmod.
// Naive floating division would lose the fractional part entirely once
// N/p^j exceeds 2^63, so this path matters.
Real frac_part_ratio(Real N, std::uint64_t p, unsigned j);

// Sum over the materialized primes of e(N/p + M/p^j), where e(x) =
// exp(2 pi i x).  Summation is chunked (4096 terms) with compensated
// accumulation combined in fixed chunk order, so the result is
// bit-identical for any worker count.
Complex exp_sum_primes(const PrimeInterval& I, const PhaseParams& phase,
                       unsigned workers = 1);

// --- the integral oracle -----------------------------------------------------

struct IntegralResult {
  Complex value;
  Real error_estimate = 0;      // accumulated Richardson estimate
  std::uint64_t evaluations = 0;
};

// Adaptive Simpson quadrature of  integral over [lo, hi] of
// e(N/t + M/t^j) dt / log t.  Panel width starts at 1/(10 |phi'| + 1)
// where phi' = N/t^2 + j M/t^(j+1) is the phase derivative, then panels
// bisect until the per-panel Richardson estimate meets a total error
// budget of 1e-6 (hi - lo) / log lo.  Requires lo > 1.  Steps shrinking
// below the floating resolution raise numeric_error (phase too wild).
IntegralResult integral_oracle(Real lo, Real hi, const PhaseParams& phase);

// --- smooth windows ----------------------------------------------------------

// A Z^2-periodic trigonometric window W(x, y) = sum c_{n,m} e(nx + my)
// over |n|, |m| <= cutoff (cutoff <= 32).  The window IS its finite
// coefficient table; smooth-norm bookkeeping gives the bound used when
// comparing the direct and Fourier-route prime sums.
class FourierWindow {
 public:
  static constexpr int kMaxCutoff = 32;

  // W identically equal to `value`
  static FourierWindow constant(Complex value);
  // W(x, y) = e(ax + by), a single mode
  static FourierWindow mode(int a, int b);
  // Nonnegative bump in x alone with total mass `mass`: the order-K Fejer
  // kernel scaled by mass (coefficients mass * (1 - |n|/(K+1)))
  static FourierWindow fejer_bump(Real mass, int K);

  int cutoff() const { return cutoff_; }
  Complex coefficient(int n, int m) const;
  void set_coefficient(int n, int m, Complex c);

  // direct evaluation via e(nx), e(my) recurrences
  Complex eval(Real x, Real y) const;

  // Sum over modes of |c_{n,m}| (1 + |n| + |m|)^3 (2 pi)^3 — an upper
  // bound for the C^3 norm declared alongside the table.
  Real c3_norm_bound() const;

 private:
  explicit FourierWindow(int cutoff);
  int cutoff_;
  std::vector<Complex> c_;  // (2 cutoff + 1)^2 table
};

// Sum over the materialized primes of W(N/p, M/p^j).  Complex in general;
// the imaginary part vanishes (to rounding) for Hermitian tables.
Complex weighted_prime_sum(const PrimeInterval& I, const FourierWindow& W,
                           const PhaseParams& phase, unsigned workers = 1);

// The same quantity assembled the other way — sum over modes (n, m) of
// c_{n,m} * exp_sum_primes with phase (nN, mM) — used to cross-check the
// window plumbing in tests.
Complex weighted_prime_sum_fourier(const PrimeInterval& I,
                                   const FourierWindow& W,
                                   const PhaseParams& phase,
                                   unsigned workers = 1);

// --- integer sums ------------------------------------------------------------

struct IntegerSumResult {
  Complex value;
  Real F = 0;           // |N|/lo + |M|/lo^j
  Real normalized = 0;  // |value| / |I|
  std::uint64_t count = 0;
};

// Sum over integers n in [lo, hi] of e(N/n + M/n^j).  Requires the dyadic
// confinement hi <= 2 lo with lo >= 2.
IntegerSumResult exp_sum_integers(std::uint64_t lo, std::uint64_t hi,
                                  const PhaseParams& phase,
                                  unsigned workers = 1);

// Sum over n in [lo, hi] of e(N/n + M/n^j) Lambda(n), with the von
// Mangoldt weights computed exactly (primes contribute log p; higher prime
// powers p^k contribute log p as well).  Requires hi <= 10^9.
Complex von_mangoldt_sum(std::uint64_t lo, std::uint64_t hi,
                         const PhaseParams& phase, unsigned workers = 1);

// --- covariances -------------------------------------------------------------

struct CovarianceEstimate {
  unsigned j = 1;
  Real N = 0, M = 0;
  Real estimate = 0;        // E[XY] - E[X] E[Y] over the prime population
  std::uint64_t sample_size = 0;
  Real standard_error = 0;  // sd of the centered products / sqrt(n)
  Real mean_x = 0, mean_y = 0;  // E[1/2 - {N/p}], E[1/2 - {M/p^j}]
};

// Exact-mean covariance of (1/2 - {N/p}, 1/2 - {M/p^j}) over ALL primes of
// I (two passes; no sampling).  Requires pi(I) >= 1000 for a meaningful
// standard error.
CovarianceEstimate covariance_estimate(const PrimeInterval& I, unsigned j,
                                       Real N, Real M, unsigned workers = 1);

enum class CovarianceClass {
  near_zero_j_ge_2,   // j >= 2
  vanishing_argument, // N or M essentially zero
  commensurable,      // aN = bM for coprime a, b up to the height bound
  generic_small,      // no low-height relation
};
const char* covariance_class_name(CovarianceClass);

struct CovariancePrediction {
  CovarianceClass classification = CovarianceClass::generic_small;
  std::uint64_t a = 0, b = 0;  // meaningful for commensurable
  Real predicted = 0;          // 1/(12ab) for commensurable, else 0
  std::string tolerance_class; // which empirical tolerance applies
  Real suggested_tolerance = 0;
};

// Classify (N, M, j) against the four covariance regimes, testing
// commensurability aN = bM over coprime a, b <= height_bound with relative
// slack 1e-9.
CovariancePrediction covariance_prediction(Real N, Real M, unsigned j,
                                           std::uint64_t height_bound);

// --- the valuation-balance experiment ----------------------------------------

// For two solutions (n, m), (n', m') sharing t, the truncated sums
//   sum over 1 <= j <= sqrt(log lo) of  c_j(N, m) + c_j(N, n-m) - c_j(N, n)
// agree between the two sides.  Both sides are estimated over the prime
// population of I; the report carries the difference and a combined
// standard error, with `within` = (|difference| <= 3 combined SE).
struct JpBalance {
  unsigned j_max = 1;
  Real side1 = 0, side2 = 0;
  Real difference = 0;
  Real combined_se = 0;
  bool within = false;
};
JpBalance check_jp_balance(const exact::BinomialSolution& s1,
                           const exact::BinomialSolution& s2,
                           const PrimeInterval& I, Real N,
                           unsigned workers = 1);

bool selftest(std::ostream& log);

}  // namespace singmaster::primes
