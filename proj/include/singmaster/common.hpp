#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace singmaster {

inline constexpr const char* kVersion = "1.0.0";

// Which of the two count functions a search or curve refers to:
// binomial C(n,m), or the falling factorial (n)_m = n(n-1)...(n-m+1).
enum class Kind { binomial, falling };

inline const char* kind_name(Kind k) {
  return k == Kind::binomial ? "binomial" : "falling";
}

// Error taxonomy, mapped by the CLI onto exit codes:
//   domain_error   -> 1  (mathematically invalid input)
//   resource_error -> 2  (range too large, I/O failure, unusable checkpoint)
//   check_error    -> 3  (an internal assertion or tolerance was violated)
//   numeric_error  -> 3  (an iteration failed to converge / step underflow)
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct check_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Floating-point working precision for the analytic layer.  "extended" is
// x87 80-bit long double (64-bit mantissa); "dbl" rounds every special
// function through IEEE double.  The default comes from the environment
// variable SINGMASTER_PRECISION ("double" or "extended"), falling back to
// extended, which this code assumes is cheap (x86 long double hardware).
enum class Precision { dbl, ext };

Precision default_precision();             // cached env lookup
Precision parse_precision(const std::string& s);  // throws domain_error

}  // namespace singmaster
