#include "singmaster/exactcore.hpp"

#include <cmath>
#include <ostream>

#include "singmaster/rng.hpp"

namespace singmaster::exact {

long double log_nat(const Nat& x) {
  if (sgn(x) <= 0) throw domain_error("log_nat: argument must be positive");
  signed long e = 0;
  double d = mpz_get_d_2exp(&e, x.get_mpz_t());  // x = d * 2^e, d in [0.5, 1)
  return std::log(static_cast<long double>(d)) +
         static_cast<long double>(e) * 0.6931471805599453094172321215L;
}

std::string to_decimal(const Nat& x) { return x.get_str(10); }

Nat from_decimal(const std::string& s) {
  if (s.empty()) throw domain_error("from_decimal: empty string");
  // plain digit strings only: every quantity in this domain is nonnegative,
  // and mpz_set_str would otherwise accept signs and whitespace
  if (s.find_first_not_of("0123456789") != std::string::npos)
    throw domain_error("from_decimal: not an unsigned decimal integer: " + s);
  Nat x;
  if (mpz_set_str(x.get_mpz_t(), s.c_str(), 10) != 0)
    throw domain_error("from_decimal: not an unsigned decimal integer: " + s);
  return x;
}

// --- primality ---------------------------------------------------------------

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1;
  a %= n;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, n);
    a = mulmod_u64(a, a, n);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Miller-Rabin with the first twelve primes as bases is deterministic for
  // every n < 2^64 (the smallest pseudoprime to all of them exceeds 3.3e24).
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

// --- binomial / falling factorial --------------------------------------------

namespace detail {

// prod_{k=1..m} (base+k)/k with a running gcd reduction; every intermediate
// divides C(base+m, m), so sizes stay within the final result.
Nat binomial_multiplicative(const Nat& n, std::uint64_t m) {
  Nat acc = 1;
  Nat num;
  for (std::uint64_t k = 1; k <= m; ++k) {
    num = n - m + k;
    std::uint64_t g = mpz_gcd_ui(nullptr, num.get_mpz_t(), k);
    if (g > 1) mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), g);
    acc *= num;
    if (std::uint64_t d = k / g; d > 1)
      mpz_divexact_ui(acc.get_mpz_t(), acc.get_mpz_t(), d);
  }
  return acc;
}

Nat binomial_library(std::uint64_t n, std::uint64_t m) {
  Nat r;
  mpz_bin_uiui(r.get_mpz_t(), n, m);
  return r;
}

}  // namespace detail

// Above this m the library routine wins clearly; both paths are exact and
// property-tested equal across the switch point.
static constexpr std::uint64_t kBinomialLibraryThreshold = 4096;

Nat binomial(const Nat& n, std::uint64_t m) {
  if (sgn(n) < 0) throw domain_error("binomial: n must be a natural number");
  if (n < m) throw domain_error("binomial: m > n");
  // Use the smaller side of the symmetry C(n,m) = C(n,n-m).
  Nat other = n - m;
  if (other < m && other.fits_ulong_p()) m = other.get_ui();
  if (m == 0) return 1;
  if (m == 1) return n;
  if (m >= kBinomialLibraryThreshold && n.fits_ulong_p())
    return detail::binomial_library(n.get_ui(), m);
  return detail::binomial_multiplicative(n, m);
}

Nat binomial(std::uint64_t n, std::uint64_t m) { return binomial(Nat(n), m); }

namespace {

// lo * (lo+1) * ... * (lo+len-1), balanced so partial products stay similar
// in size (GMP multiplies balanced operands much faster than a long chain).
Nat ascending_product(const Nat& lo, std::uint64_t len) {
  if (len == 0) return 1;
  if (len <= 16) {
    Nat acc = lo;
    if (lo.fits_ulong_p() && Nat(lo + (len - 1)).fits_ulong_p()) {
      std::uint64_t v = lo.get_ui();
      for (std::uint64_t i = 1; i < len; ++i)
        mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), v + i);
    } else {
      for (std::uint64_t i = 1; i < len; ++i) acc *= lo + i;
    }
    return acc;
  }
  std::uint64_t half = len / 2;
  return ascending_product(lo, half) * ascending_product(lo + half, len - half);
}

}  // namespace

Nat falling_factorial(const Nat& n, std::uint64_t m) {
  if (sgn(n) < 0)
    throw domain_error("falling_factorial: n must be a natural number");
  if (m == 0) return 1;
  if (n < m) throw domain_error("falling_factorial: m > n");
  return ascending_product(n - m + 1, m);
}

Nat falling_factorial(std::uint64_t n, std::uint64_t m) {
  return falling_factorial(Nat(n), m);
}

Nat factorial(std::uint64_t m) {
  Nat r;
  mpz_fac_ui(r.get_mpz_t(), m);
  return r;
}

// --- valuations ----------------------------------------------------------------

namespace {

// v_p(x!) = sum_j floor(x/p^j), machine-word input.
std::uint64_t legendre_factorial_u64(std::uint64_t x, std::uint64_t p) {
  std::uint64_t v = 0;
  while (x) { x /= p; v += x; }
  return v;
}

Nat legendre_factorial(const Nat& x, std::uint64_t p) {
  Nat v = 0, q = x;
  while (sgn(q) > 0) {
    mpz_tdiv_q_ui(q.get_mpz_t(), q.get_mpz_t(), p);
    v += q;
  }
  return v;
}

std::uint64_t kummer_carries_u64(std::uint64_t a, std::uint64_t b,
                                 std::uint64_t p) {
  std::uint64_t carries = 0, carry = 0;
  while (a || b || carry) {
    std::uint64_t s = a % p + b % p + carry;
    carry = s >= p ? 1 : 0;
    carries += carry;
    a /= p;
    b /= p;
  }
  return carries;
}

}  // namespace

ValuationReport valuation_profile(const Nat& n, const Nat& m, std::uint64_t p) {
  if (!is_prime_u64(p)) throw domain_error("valuation_profile: p is not prime");
  if (sgn(n) < 0 || sgn(m) < 0 || m > n)
    throw domain_error("valuation_profile: need 0 <= m <= n");

  ValuationReport r;
  r.p = p;
  if (n < p) return r;  // p > n: all three routes vanish

  Nat nm = n - m;

  if (n.fits_ulong_p()) {
    std::uint64_t nu = n.get_ui(), mu = m.get_ui(), du = nm.get_ui();
    r.legendre_diff = legendre_factorial_u64(nu, p) -
                      legendre_factorial_u64(mu, p) -
                      legendre_factorial_u64(du, p);
    r.kummer_carries = kummer_carries_u64(mu, du, p);
  } else {
    Nat v = legendre_factorial(n, p) - legendre_factorial(m, p) -
            legendre_factorial(nm, p);
    if (!v.fits_ulong_p())
      throw resource_error("valuation_profile: valuation does not fit u64");
    r.legendre_diff = v.get_ui();
    // Base-p digit addition of m and n-m.
    Nat a = m, b = nm;
    std::uint64_t carries = 0, carry = 0;
    while (sgn(a) > 0 || sgn(b) > 0 || carry) {
      std::uint64_t da = mpz_tdiv_q_ui(a.get_mpz_t(), a.get_mpz_t(), p);
      std::uint64_t db = mpz_tdiv_q_ui(b.get_mpz_t(), b.get_mpz_t(), p);
      carry = (da + db + carry >= p) ? 1 : 0;
      carries += carry;
    }
    r.kummer_carries = carries;
  }

  // Exact rational route: sum_j ({m/p^j} + {(n-m)/p^j} - {n/p^j}) over p^j <= n.
  mpq_class sum = 0;
  Nat pj = p;
  while (pj <= n) {
    Nat tm = m % pj, td = nm % pj, tn = n % pj;
    sum += mpq_class(tm + td - tn, pj);
    pj *= p;
  }
  sum.canonicalize();
  if (sum.get_den() != 1 || sgn(sum) < 0)
    throw check_error("valuation_profile: fractional-part sum is not a natural number");
  Nat fs = sum.get_num();
  if (!fs.fits_ulong_p())
    throw resource_error("valuation_profile: valuation does not fit u64");
  r.fractional_sum = fs.get_ui();
  return r;
}

bool check_pair_identity(const BinomialSolution& s1, const BinomialSolution& s2,
                         std::uint64_t p) {
  if (s1.t != s2.t)
    throw domain_error("check_pair_identity: witnesses have different t");
  if (!is_prime_u64(p))
    throw domain_error("check_pair_identity: p is not prime");

  auto side = [p](const BinomialSolution& s) {
    mpq_class sum = 0;
    Nat m(s.m), nm = s.n - s.m;
    Nat pj = p;
    while (pj <= s.n) {
      sum += mpq_class(m % pj + nm % pj - s.n % pj, pj);
      pj *= p;
    }
    sum.canonicalize();
    return sum;
  };
  return side(s1) == side(s2);
}

// --- selftest ------------------------------------------------------------------

bool selftest(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) { log << "exactcore selftest FAILED: " << what << "\n"; ok = false; }
  };

  expect(binomial(14u, 6u) == 3003, "C(14,6) = 3003");
  expect(binomial(104u, 39u) == binomial(103u, 40u), "C(104,39) = C(103,40)");
  expect(falling_factorial(6u, 3u) == 120, "(6)_3 = 120");
  expect(falling_factorial(5u, 4u) == falling_factorial(6u, 3u),
         "(5)_4 = (6)_3");

  Rng rng(0x5eedc0de);
  for (int i = 0; i < 200 && ok; ++i) {
    std::uint64_t n = 2 + rng.below(500);
    std::uint64_t m = rng.below(n + 1);
    Nat c = binomial(n, m);
    expect(c == binomial(n, n - m), "symmetry C(n,m) = C(n,n-m)");
    expect(falling_factorial(n, m) == factorial(m) * c,
           "(n)_m = m! C(n,m)");
  }

  for (int i = 0; i < 200 && ok; ++i) {
    std::uint64_t n = 2 + rng.below(100000);
    std::uint64_t m = rng.below(n + 1);
    std::uint64_t p;
    do { p = 2 + rng.below(n); } while (!is_prime_u64(p));
    auto rep = valuation_profile(Nat(n), Nat(m), p);
    expect(rep.consistent(), "valuation routes agree");
  }

  for (int i = 0; i < 5 && ok; ++i) {
    std::uint64_t n = 100 + rng.below(700);
    std::uint64_t m = 1 + rng.below(n - 1);
    Nat c = binomial(n, m), rebuilt = 1;
    for (std::uint64_t p = 2; p <= n; ++p) {
      if (!is_prime_u64(p)) continue;
      auto rep = valuation_profile(Nat(n), Nat(m), p);
      if (rep.legendre_diff) {
        Nat pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, rep.legendre_diff);
        rebuilt *= pk;
      }
    }
    expect(rebuilt == c, "prime-power reconstruction of C(n,m)");
  }

  expect(is_prime_u64((1ull << 61) - 1), "2^61-1 prime");
  expect(is_prime_u64(9223372036854775783ull), "largest prime below 2^63");
  expect(!is_prime_u64(561), "Carmichael 561 composite");
  expect(!is_prime_u64(1), "1 not prime");

  if (ok) log << "exactcore selftest passed\n";
  return ok;
}

}  // namespace singmaster::exact
