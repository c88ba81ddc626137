#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "singmaster/common.hpp"

namespace singmaster::analytic {

// Carrier type for high-precision reals.  Values are computed either in IEEE
// double or in x87 80-bit extended precision (see Precision in common.hpp)
// and always returned widened to long double.
using Real = long double;

// psi (order 0), psi' (order 1), psi'' (order 2), via upward recurrence
// into x >= 12 plus a Bernoulli-series tail.  Good to ~17 significant digits
// in extended mode, ~15 in double mode.
Real eval_psi(int order, Real x, Precision prec = default_precision());

// log Gamma(x) by downward recurrence into the Stirling-series regime.
Real log_gamma(Real x, Precision prec = default_precision());

// --- implicit curves ---------------------------------------------------------
//
// For fixed t > 1 the map n -> C(n,m) (real arguments via Gamma) is strictly
// increasing on [m, inf), so there is a unique n = f_t(m) with C(f_t(m), m) = t;
// likewise g_t(m) for the falling factorial (g_t(m))_m = t.  Both are found by
// a safeguarded Newton iteration on the log-Gamma form of the equation,
// initialized at (t m!)^{1/m} + (m-1)/2 (resp. t^{1/m} + (m-1)/2) and bracketed
// in [m, hi], so bisection can always rescue a bad Newton step.
//
// Everything is solved in log space: callers pass log t, so t itself never
// has to be representable.  Convergence: |residual| <= 1e-12 * log t (floored
// at a few ulps of the log-Gamma magnitudes involved).  Computations promote
// to extended precision automatically when log t > 700, since the solved n
// can then exceed the double range.

Real solve_curve_logt(Real log_t, Real m, Kind kind,
                      Precision prec = default_precision());
Real solve_curve(Real t, Real m, Kind kind, Precision prec = default_precision());
Real solve_curve(const mpz_class& t, Real m, Kind kind,
                 Precision prec = default_precision());

// First and second derivative of the curve at m, from the digamma formulas:
//   binomial: f' = (psi(m+1) - psi(n-m+1)) / (psi(n+1) - psi(n-m+1))
//             f'' (psi(n+1)-psi(n-m+1))^3 =
//                   (psi(n+1)-psi(n-m+1))^2 psi'(m+1)
//                 + (psi(n+1)-psi(m+1))^2  psi'(n-m+1)
//                 - (psi(n-m+1)-psi(m+1))^2 psi'(n+1)
//   falling:  g' = -psi(n-m+1) / (psi(n+1) - psi(n-m+1))
//             g'' (psi(n+1)-psi(n-m+1))^3 =
//                   psi(n+1)^2 psi'(n-m+1) - psi(n-m+1)^2 psi'(n+1)
// where n is the solved curve value.
Real curve_derivative_logt(Real log_t, Real m, int order, Kind kind,
                           Precision prec = default_precision());
Real curve_derivative(const mpz_class& t, Real m, int order, Kind kind,
                      Precision prec = default_precision());

// --- derivative magnitude checks ----------------------------------------------
//
// Empirical check of the expected magnitudes in the regime m <= n/2:
//   binomial: n within a C-window of m t^{1/m}; f' < 0; f'' > 0;
//             |f'| / ((n-2m) log t / m^2)   in [1/C, C]
//             f'' / (n (log t / m^2)^2)     in [1/C, C]
//   falling:  n within a C-window of t^{1/m}; g' < 0; g'' > 0;
//             |g'| / (n log t / m^2)        in [1/C, C]
//             g'' <= C (n (log t/m^2)^2 + (1/C) log^-3 m)   (upper bound only,
//             in the range m <= n - C log^2 n)
// The window C hides the absolute constants of the asymptotic statements; it
// is configurable and recorded per item.  Regime violations are reported,
// never asserted.
struct BoundsCheck {
  struct Item {
    std::string name;
    bool applicable;  // regime / guard for this item held
    bool pass;        // only meaningful when applicable
    Real value;       // the measured ratio (or derivative, for sign checks)
    Real lo, hi;      // accepted window
  };
  Real n = 0;            // solved curve value
  bool regime_ok = false;  // m <= n/2
  std::vector<Item> items;

  bool all_pass() const {
    for (const auto& it : items)
      if (it.applicable && !it.pass) return false;
    return true;
  }
};

BoundsCheck check_derivi_bounds(Real log_t, Real m, Kind kind, Real C = 50,
                                Precision prec = default_precision());

// --- integer point counting -----------------------------------------------------
//
// If 0 < |f^(k)(x)/k!| < |I|^(-k(k+1)/2) throughout I, then at most k integers
// x in I have f(x) integer.  The hypothesis is checked by dense sampling of
// the supplied k-th derivative plus a successive-variation margin — evidence,
// not a proof, and the verdict says so via `applicable`.
struct IntegerPointVerdict {
  bool applicable = false;
  unsigned k = 0;
  Real scaled_min = 0, scaled_max = 0;  // observed |f^(k)|/k! range on I
  Real margin = 0;                      // max successive sample variation
  Real threshold = 0;                   // |I|^(-k(k+1)/2)
  std::int64_t brute_count = -1;  // integers x in I with f(x) integer (1e-9), -1 = skipped
};

IntegerPointVerdict integer_point_bound(
    const std::function<Real(Real)>& f, Real a, Real b, unsigned k,
    const std::function<Real(Real)>& kth_derivative, bool brute = true,
    unsigned sample_points = 2049);

// --- the inverse-Gamma curve h_t ------------------------------------------------
//
// h_t(x) = GammaInverse(t Gamma(x+1)) - 1 on the branch Gamma: [2,inf)->[1,inf),
// solved by Newton on log Gamma; requires t Gamma(ell+1) >= 2.
// Derivative identity: h'(x) psi(h(x)+1) = psi(x+1).
Real solve_h(Real t, Real ell, Precision prec = default_precision());
Real solve_h_logt(Real log_t, Real ell, Precision prec = default_precision());
Real h_derivative(Real t, Real ell, Precision prec = default_precision());

bool selftest(std::ostream& log);

}  // namespace singmaster::analytic
