#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "singmaster/common.hpp"
#include "singmaster/primes.hpp"
#include "singmaster/rng.hpp"

using namespace singmaster;
using primes::Complex;
using primes::FourierWindow;
using primes::PhaseParams;
using primes::PrimeInterval;
using Real = primes::Real;

namespace {
constexpr Real kTwoPi = 6.28318530717958647692528676655900577L;
Complex unit(Real x) { return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)}; }
}  // namespace

TEST_CASE("segmented sieve vs trial division") {
  auto I = primes::enumerate_primes(10, 60);
  std::vector<std::uint64_t> expect = {11, 13, 17, 19, 23, 29, 31,
                                       37, 41, 43, 47, 53, 59};
  CHECK(I.primes == expect);
  CHECK(I.count() == expect.size());

  // degenerate window containing a single prime / no prime
  CHECK(primes::enumerate_primes(2, 2).primes ==
        std::vector<std::uint64_t>{2});
  CHECK(primes::enumerate_primes(24, 28).primes.empty());

  // pi(1000) = 168, first and last entries
  auto J = primes::enumerate_primes(2, 1000);
  CHECK(J.count() == 168);
  CHECK(J.primes.front() == 2);
  CHECK(J.primes.back() == 997);

  // a window far from the origin, cross-checked against trial division
  auto K = primes::enumerate_primes(1000001, 1009999);
  CHECK(K.count() == oracle::count_primes_td(1000001, 1009999));
  CHECK(K.count() == 753);
  for (auto p : K.primes) CHECK(exact::is_prime_u64(p));

  CHECK_THROWS_AS(primes::enumerate_primes(1, 10), domain_error);
  CHECK_THROWS_AS(primes::enumerate_primes(10, 5), domain_error);
  CHECK_THROWS_AS(primes::enumerate_primes(2, (1ULL << 48) + 1),
                  resource_error);
  CHECK_THROWS_AS(primes::enumerate_primes(2, 2 + (1ULL << 31)),
                  resource_error);
}

TEST_CASE("fractional parts of N / p^j") {
  // small exact cases
  CHECK(primes::frac_part_ratio(10, 3, 1) == 1.0L / 3.0L);
  CHECK(primes::frac_part_ratio(7, 7, 1) == 0.0L);
  CHECK(primes::frac_part_ratio(9, 2, 2) == 0.25L);

  // an integral numerator far beyond double precision: 2^80 mod 3 = 1
  CHECK(primes::frac_part_ratio(std::ldexp(1.0L, 80), 3, 1) == 1.0L / 3.0L);

  // negative numerators wrap into [0, 1)
  CHECK(primes::frac_part_ratio(-1, 7, 1) == 6.0L / 7.0L);
  CHECK(primes::frac_part_ratio(-14, 7, 1) == 0.0L);

  // p^j overflowing 128-bit arithmetic: the ratio itself is far below 1
  Real tiny = primes::frac_part_ratio(3, 2, 200);
  CHECK(tiny == doctest::Approx(std::ldexp(3.0L, -200)).epsilon(1e-15));

  // fractional numerators take the fmod path
  CHECK(primes::frac_part_ratio(0.5L, 2, 1) == 0.25L);

  // random crosscheck against integer remainders
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t p = 2 + rng.below(1000);
    std::uint64_t N = rng.below(1'000'000'000'000ULL);
    Real want = Real(N % p) / Real(p);
    CHECK(primes::frac_part_ratio(Real(N), p, 1) == want);
  }

  CHECK_THROWS_AS(primes::frac_part_ratio(1, 1, 1), domain_error);
  CHECK_THROWS_AS(primes::frac_part_ratio(1, 5, 0), domain_error);
}

TEST_CASE("prime exponential sums") {
  auto I = primes::enumerate_primes(100000, 110000);

  // zero phase counts the primes exactly
  auto z = primes::exp_sum_primes(I, {0, 0, 1});
  CHECK(z.real() == Real(I.count()));
  CHECK(z.imag() == 0.0L);

  // workers must not change a single bit
  PhaseParams ph{1234567.0L, 987654.0L, 2};
  auto s1 = primes::exp_sum_primes(I, ph, 1);
  auto s4 = primes::exp_sum_primes(I, ph, 4);
  auto s7 = primes::exp_sum_primes(I, ph, 7);
  CHECK(s1.real() == s4.real());
  CHECK(s1.imag() == s4.imag());
  CHECK(s1.real() == s7.real());
  CHECK(s1.imag() == s7.imag());

  // against a plain unchunked loop
  Complex plain(0, 0);
  for (auto p : I.primes)
    plain += unit(primes::frac_part_ratio(ph.N, p, 1) +
                  primes::frac_part_ratio(ph.M, p, ph.j));
  CHECK(std::abs(s1 - plain) < 1e-12L * Real(I.count()));

  // |sum| <= count, with strict cancellation for a fast phase
  CHECK(std::abs(s1) <= Real(I.count()));

  // magnitude bookkeeping
  CHECK(ph.magnitude(100000.0L) ==
        doctest::Approx(1234567.0L / 100000.0L +
                        987654.0L / (100000.0L * 100000.0L))
            .epsilon(1e-15));
}

TEST_CASE("oscillatory integral vs fixed-step Simpson") {
  PhaseParams ph{50.0L, 10.0L, 2};
  auto res = primes::integral_oracle(100, 300, ph);
  auto truth = oracle::simpson_fixed(
      [&](long double t) {
        return unit(ph.N / t + ph.M / (t * t)) / std::log(t);
      },
      100.0L, 300.0L, 60000);
  CHECK(std::abs(res.value - truth) < 1e-4L);
  CHECK(res.evaluations > 100);
  CHECK(res.error_estimate >= 0.0L);
  CHECK(res.error_estimate <= 1e-6L * 200.0L / std::log(100.0L) * 1.001L);

  // zero phase: the logarithmic integral over [2, 10]
  auto li = primes::integral_oracle(2, 10, {0, 0, 1});
  auto li_truth = oracle::simpson_fixed(
      [](long double t) { return Complex(1.0L / std::log(t), 0); }, 2.0L,
      10.0L, 40000);
  CHECK(li.value.imag() == 0.0L);
  CHECK(std::abs(li.value.real() - li_truth.real()) < 1e-4L);

  CHECK_THROWS_AS(primes::integral_oracle(1, 10, ph), domain_error);
  CHECK_THROWS_AS(primes::integral_oracle(10, 5, ph), domain_error);
}

TEST_CASE("trigonometric windows") {
  // constants
  auto W0 = FourierWindow::constant({2.5L, 0});
  CHECK(W0.coefficient(0, 0) == Complex(2.5L, 0));
  CHECK(W0.coefficient(1, 0) == Complex(0, 0));
  CHECK(W0.eval(0.37L, 0.91L) == Complex(2.5L, 0));

  // a single mode evaluates as e(ax + by)
  auto W1 = FourierWindow::mode(2, -1);
  Real x = 0.313L, y = 0.717L;
  CHECK(std::abs(W1.eval(x, y) - unit(2 * x - y)) < 1e-15L);

  // Fejer bump: nonnegative, correct coefficients, mean equal to c_{0,0}
  auto F = FourierWindow::fejer_bump(2.5L, 4);
  CHECK(F.coefficient(0, 0) == Complex(2.5L, 0));
  CHECK(F.coefficient(3, 0).real() ==
        doctest::Approx(2.5L * (1.0L - 3.0L / 5.0L)).epsilon(1e-15));
  CHECK(F.coefficient(0, 1) == Complex(0, 0));
  CHECK(F.coefficient(5, 0) == Complex(0, 0));  // beyond the Fejer order
  Complex mean(0, 0);
  for (int k = 0; k < 64; ++k) {
    Complex v = F.eval(Real(k) / 64, 0.123L);
    CHECK(v.real() >= -1e-12L);
    CHECK(std::abs(v.imag()) < 1e-12L);
    mean += v / 64.0L;
  }
  CHECK(std::abs(mean - Complex(2.5L, 0)) < 1e-12L);

  // out-of-range coefficients read as zero but cannot be written
  CHECK(F.coefficient(20, 0) == Complex(0, 0));
  CHECK_THROWS_AS(F.set_coefficient(20, 0, {1, 0}), domain_error);
  CHECK_THROWS_AS(FourierWindow::mode(33, 0), domain_error);
  CHECK_THROWS_AS(FourierWindow::fejer_bump(1.0L, 0), domain_error);
  CHECK_THROWS_AS(FourierWindow::fejer_bump(1.0L, 33), domain_error);

  // smooth-norm bound: (2 pi)^3 for the constant, 8x that for mode (1,0)
  Real c3const = FourierWindow::constant({1, 0}).c3_norm_bound();
  CHECK(c3const == doctest::Approx(kTwoPi * kTwoPi * kTwoPi).epsilon(1e-15));
  CHECK(FourierWindow::mode(1, 0).c3_norm_bound() ==
        doctest::Approx(8 * kTwoPi * kTwoPi * kTwoPi).epsilon(1e-15));
}

TEST_CASE("windowed prime sums, direct vs mode-by-mode") {
  auto I = primes::enumerate_primes(50000, 60000);
  PhaseParams ph{777777.0L, 55555.0L, 2};

  // the (1, 0) mode reproduces the bare exponential sum
  auto direct = primes::weighted_prime_sum(I, FourierWindow::mode(1, 0), ph);
  auto bare = primes::exp_sum_primes(I, {ph.N, 0, 2});
  CHECK(std::abs(direct - bare) < 1e-13L * Real(I.count()));

  // a mixed window: Fejer bump plus two off-axis modes
  auto W = FourierWindow::fejer_bump(1.0L, 3);
  W.set_coefficient(1, 1, {0.3L, 0.1L});
  W.set_coefficient(-2, 1, {0.05L, -0.2L});
  auto a = primes::weighted_prime_sum(I, W, ph, 3);
  auto b = primes::weighted_prime_sum_fourier(I, W, ph, 3);
  CHECK(std::abs(a - b) < 1e-11L * Real(I.count()));

  // worker independence, again at the byte level
  auto a1 = primes::weighted_prime_sum(I, W, ph, 1);
  CHECK(a.real() == a1.real());
  CHECK(a.imag() == a1.imag());
}

TEST_CASE("integer exponential sums") {
  auto flat = primes::exp_sum_integers(1000, 2000, {0, 0, 1});
  CHECK(flat.count == 1001);
  CHECK(flat.value.real() == 1001.0L);
  CHECK(flat.value.imag() == 0.0L);
  CHECK(flat.normalized == 1.0L);
  CHECK(flat.F == 0.0L);

  // slow phase: negligible cancellation
  auto slow = primes::exp_sum_integers(1000000, 2000000, {100, 0, 1});
  CHECK(slow.normalized > 0.99L);
  CHECK(slow.F == doctest::Approx(1e-4L).epsilon(1e-15));

  // fast phase: strong cancellation
  Real N = std::pow(100000.0L, 1.3L);
  auto fast = primes::exp_sum_integers(100000, 200000, {N, 0, 1});
  CHECK(fast.normalized < 0.1L);

  CHECK_THROWS_AS(primes::exp_sum_integers(1, 2, {0, 0, 1}), domain_error);
  CHECK_THROWS_AS(primes::exp_sum_integers(1000, 2001, {0, 0, 1}),
                  domain_error);
  CHECK_THROWS_AS(primes::exp_sum_integers(1000, 999, {0, 0, 1}),
                  domain_error);
}

TEST_CASE("von Mangoldt sums") {
  // [2, 10]: Lambda sums to log(2520) with zero phase
  auto v = primes::von_mangoldt_sum(2, 10, {0, 0, 1});
  CHECK(std::abs(v.real() - std::log(2520.0L)) < 1e-15L);
  CHECK(v.imag() == 0.0L);

  // nonzero phase vs a by-n trial-division oracle
  PhaseParams ph{12345.0L, 678.0L, 2};
  Complex want(0, 0);
  for (std::uint64_t n = 100; n <= 3000; ++n) {
    std::uint64_t q = n, p = 0;
    for (std::uint64_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        while (q % d == 0) q /= d;
        break;
      }
    if (p == 0) { p = n; q = 1; }  // n itself prime
    if (q != 1) continue;          // not a prime power
    want += std::log(Real(p)) * unit(primes::frac_part_ratio(ph.N, n, 1) +
                                     primes::frac_part_ratio(ph.M, n, ph.j));
  }
  auto got = primes::von_mangoldt_sum(100, 3000, ph, 2);
  CHECK(std::abs(got - want) < 1e-11L * 2901.0L);

  // determinism across worker counts
  auto got1 = primes::von_mangoldt_sum(100, 3000, ph, 1);
  CHECK(got.real() == got1.real());
  CHECK(got.imag() == got1.imag());

  CHECK_THROWS_AS(primes::von_mangoldt_sum(2, 2'000'000'000ULL, ph),
                  resource_error);
}

TEST_CASE("covariance estimates over a prime population") {
  auto I = primes::enumerate_primes(100000, 120000);
  REQUIRE(I.count() >= 1000);

  // diagonal: N = M, j = 1 concentrates near 1/12
  Real N = 1234567.0L;
  auto diag = primes::covariance_estimate(I, 1, N, N);
  CHECK(diag.sample_size == I.count());
  CHECK(std::abs(diag.estimate - 1.0L / 12.0L) < 0.01L);
  CHECK(diag.standard_error > 0.0L);
  CHECK(diag.standard_error < 0.01L);
  CHECK(std::abs(diag.mean_x) < 0.03L);
  CHECK(std::abs(diag.mean_y) < 0.03L);
  CHECK(diag.mean_x == diag.mean_y);

  // ladder M = 2N concentrates near 1/24
  auto ladder = primes::covariance_estimate(I, 1, N, 2 * N);
  CHECK(std::abs(ladder.estimate - 1.0L / 24.0L) < 0.015L);

  // j = 2 decorrelates
  auto far = primes::covariance_estimate(I, 2, N, N);
  CHECK(std::abs(far.estimate) < 0.01L);

  // worker determinism
  auto d4 = primes::covariance_estimate(I, 1, N, N, 4);
  CHECK(d4.estimate == diag.estimate);
  CHECK(d4.standard_error == diag.standard_error);

  // too few primes for a standard error
  auto small = primes::enumerate_primes(100, 1000);
  CHECK_THROWS_AS(primes::covariance_estimate(small, 1, N, N), domain_error);
}

TEST_CASE("covariance predictions") {
  using primes::CovarianceClass;

  auto ladder = primes::covariance_prediction(10, 5, 1, 10);
  CHECK(ladder.classification == CovarianceClass::commensurable);
  CHECK(ladder.a == 1);
  CHECK(ladder.b == 2);
  CHECK(ladder.predicted == doctest::Approx(1.0L / 24.0L).epsilon(1e-15));

  auto swapped = primes::covariance_prediction(5, 10, 1, 10);
  CHECK(swapped.a == 2);
  CHECK(swapped.b == 1);
  CHECK(swapped.predicted == doctest::Approx(1.0L / 24.0L).epsilon(1e-15));

  auto equal = primes::covariance_prediction(7, 7, 1, 10);
  CHECK(equal.a == 1);
  CHECK(equal.b == 1);
  CHECK(equal.predicted == doctest::Approx(1.0L / 12.0L).epsilon(1e-15));

  auto three_two = primes::covariance_prediction(3, 2, 1, 10);
  CHECK(three_two.a == 2);
  CHECK(three_two.b == 3);
  CHECK(three_two.predicted == doctest::Approx(1.0L / 72.0L).epsilon(1e-15));

  auto generic = primes::covariance_prediction(3.14159265358979L * 1e6L, 1e6L,
                                               1, 10);
  CHECK(generic.classification == CovarianceClass::generic_small);
  CHECK(generic.predicted == 0.0L);

  auto deep = primes::covariance_prediction(10, 5, 2, 10);
  CHECK(deep.classification == CovarianceClass::near_zero_j_ge_2);
  CHECK(deep.predicted == 0.0L);

  auto vanish = primes::covariance_prediction(0, 5, 1, 10);
  CHECK(vanish.classification == CovarianceClass::vanishing_argument);

  // every class renders a name and a tolerance
  for (auto* p : {&ladder, &generic, &deep, &vanish}) {
    CHECK(primes::covariance_class_name(p->classification) != nullptr);
    CHECK(p->suggested_tolerance > 0.0L);
    CHECK(!p->tolerance_class.empty());
  }

  CHECK_THROWS_AS(primes::covariance_prediction(1, 1, 1, 0), domain_error);
}

TEST_CASE("valuation-balance experiment") {
  auto I = primes::enumerate_primes(1000000, 1100000);
  exact::BinomialSolution s1{exact::binomial(15, 5), exact::Nat(15), 5};
  exact::BinomialSolution s2{exact::binomial(14, 6), exact::Nat(14), 6};
  REQUIRE(s1.t == s2.t);

  // identical pair: both sides are the same computation, difference == 0
  auto same = primes::check_jp_balance(s1, s1, I, 987654321.0L);
  CHECK(same.difference == 0.0L);
  CHECK(same.within);
  CHECK(same.j_max == 3);  // floor(sqrt(log 10^6))

  // genuinely distinct pair sharing t
  auto diff = primes::check_jp_balance(s1, s2, I, 987654321.0L, 4);
  CHECK(diff.combined_se > 0.0L);
  CHECK(std::abs(diff.difference) == std::abs(diff.side1 - diff.side2));
  CHECK(diff.within);

  exact::BinomialSolution other{exact::binomial(10, 2), exact::Nat(10), 2};
  CHECK_THROWS_AS(primes::check_jp_balance(s1, other, I, 1.0L), domain_error);
}

TEST_CASE("module selftest") {
  std::ostringstream log;
  CHECK(primes::selftest(log));
}
