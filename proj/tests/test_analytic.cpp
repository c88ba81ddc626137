#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "singmaster/analytic.hpp"
#include "singmaster/exactcore.hpp"
#include "singmaster/rng.hpp"

using namespace singmaster;
using analytic::Real;

TEST_CASE("digamma and trigamma against Euler-Maclaurin constants") {
  CHECK(std::abs(analytic::eval_psi(0, 1) + oracle::euler_gamma()) < 1e-15L);
  CHECK(std::abs(analytic::eval_psi(1, 1) - oracle::pi_squared_over_six()) <
        1e-15L);
  // psi(2) = 1 - gamma, psi'(2) = pi^2/6 - 1
  CHECK(std::abs(analytic::eval_psi(0, 2) - (1 - oracle::euler_gamma())) <
        1e-15L);
  CHECK(std::abs(analytic::eval_psi(1, 2) -
                 (oracle::pi_squared_over_six() - 1)) < 1e-15L);
  // psi(1/2) = -gamma - 2 log 2
  CHECK(std::abs(analytic::eval_psi(0, 0.5L) +
                 (oracle::euler_gamma() + 2 * std::log(2.0L))) < 1e-15L);
  // large-argument asymptotics: psi(x) = log x - 1/(2x) - 1/(12x^2) + O(x^-4)
  Real x = 1000;
  CHECK(std::abs(analytic::eval_psi(0, x) -
                 (std::log(x) - 1 / (2 * x) - 1 / (12 * x * x))) < 1e-13L);
  CHECK_THROWS_AS(analytic::eval_psi(0, 0), domain_error);
  CHECK_THROWS_AS(analytic::eval_psi(3, 1), domain_error);
}

TEST_CASE("recurrence identities at random points") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Real x = 0.1L + 30 * (Real)rng.uniform();
    CHECK(std::abs(analytic::eval_psi(0, x + 1) -
                   (analytic::eval_psi(0, x) + 1 / x)) < 1e-16L * 40);
    CHECK(std::abs(analytic::eval_psi(1, x + 1) -
                   (analytic::eval_psi(1, x) - 1 / (x * x))) < 1e-16L * 40);
    CHECK(std::abs(analytic::eval_psi(2, x + 1) -
                   (analytic::eval_psi(2, x) + 2 / (x * x * x))) <
          1e-15L * 40);
    CHECK(std::abs(analytic::log_gamma(x + 1) -
                   (analytic::log_gamma(x) + std::log(x))) < 1e-15L * 40);
  }
}

TEST_CASE("log gamma at integers is the log factorial") {
  Real acc = 0;
  for (int k = 2; k <= 60; ++k) {
    acc += std::log((Real)k);
    CHECK(std::abs(analytic::log_gamma(k + 1) - acc) < 1e-16L * acc * 10);
  }
}

TEST_CASE("curve solving inverts exact counts") {
  CHECK(std::abs(analytic::solve_curve(exact::Nat(3003), 5, Kind::binomial) -
                 15) < 1e-9L);
  CHECK(std::abs(analytic::solve_curve(exact::Nat(3003), 6, Kind::binomial) -
                 14) < 1e-9L);
  CHECK(std::abs(analytic::solve_curve(exact::Nat(4950), 2, Kind::binomial) -
                 100) < 1e-9L);
  CHECK(std::abs(analytic::solve_curve(exact::Nat(9900), 2, Kind::falling) -
                 100) < 1e-9L);
  CHECK(std::abs(analytic::solve_curve(exact::Nat(720), 3, Kind::falling) -
                 10) < 1e-9L);
  CHECK(std::abs(analytic::solve_curve((Real)3003, 5, Kind::binomial) - 15) <
        1e-9L);

  // closed-form reference away from integers: C(n,2) = t at
  // n = (1 + sqrt(1 + 8t))/2
  for (Real t : {100.0L, 12345.0L, 1e12L}) {
    Real n = analytic::solve_curve(t, 2, Kind::binomial);
    CHECK(std::abs(n - (1 + std::sqrt(1 + 8 * t)) / 2) < 1e-12L * n);
  }

  // big witnesses round-trip through the log
  exact::Nat big = exact::binomial(100000, 317);
  CHECK(std::abs(analytic::solve_curve(big, 317, Kind::binomial) - 100000) <
        1e-6L * 100000);

  CHECK_THROWS_AS(analytic::solve_curve((Real)0.5L, 2, Kind::binomial),
                  domain_error);
  CHECK_THROWS_AS(analytic::solve_curve((Real)100, 0, Kind::binomial),
                  domain_error);
  // t below the falling floor (n)_m >= (m+1)! has no solution with n > m
  CHECK_THROWS_AS(analytic::solve_curve((Real)3, 3, Kind::falling),
                  domain_error);
}

TEST_CASE("precision promotion handles enormous log t") {
  // log t = 5000 with m = 10: n is astronomically large (~e^500).  Check the
  // root through the telescoping identity
  //   log Gamma(n+1) - log Gamma(n-9) = sum_{k=0}^{9} log(n-k),
  // which stays accurate where a direct lgamma difference would cancel.
  Real n = analytic::solve_curve_logt(5000, 10, Kind::binomial, Precision::dbl);
  CHECK(n > 1e100L);
  Real lhs = 0;
  for (int k = 0; k < 10; ++k) lhs += std::log(n - k);
  Real resid = lhs - analytic::log_gamma(11) - 5000;
  CHECK(std::abs(resid) < 1e-9L * 5000);
}

TEST_CASE("derivative formulas match finite differences") {
  Rng rng(1234);
  int tested = 0;
  while (tested < 300) {
    Real m = 3 + 200 * (Real)rng.uniform();
    Real n = m * (2.2L + 40 * (Real)rng.uniform());
    for (Kind kind : {Kind::binomial, Kind::falling}) {
      Real log_t =
          kind == Kind::binomial
              ? analytic::log_gamma(n + 1) - analytic::log_gamma(m + 1) -
                    analytic::log_gamma(n - m + 1)
              : analytic::log_gamma(n + 1) - analytic::log_gamma(n - m + 1);
      Real h = 1e-5L * m;
      Real np = analytic::solve_curve_logt(log_t, m + h, kind);
      Real nm = analytic::solve_curve_logt(log_t, m - h, kind);
      Real n0 = analytic::solve_curve_logt(log_t, m, kind);
      Real fd1 = (np - nm) / (2 * h);
      Real fd2 = (np - 2 * n0 + nm) / (h * h);
      Real d1 = analytic::curve_derivative_logt(log_t, m, 1, kind);
      Real d2 = analytic::curve_derivative_logt(log_t, m, 2, kind);
      CHECK(std::abs(d1 - fd1) < 1e-4L * std::abs(d1));
      CHECK(std::abs(d2 - fd2) < 2e-3L * std::abs(d2));
      // decreasing and convex in the half-regime
      CHECK(d1 < 0);
      CHECK(d2 > 0);
    }
    ++tested;
  }
}

TEST_CASE("derivative window report on a known collision") {
  Real log_t = std::log(3003.0L);
  auto r = analytic::check_derivi_bounds(log_t, 5, Kind::binomial);
  CHECK(std::abs(r.n - 15) < 1e-6L);
  CHECK(r.regime_ok);
  CHECK(r.all_pass());
  bool saw_applicable = false;
  for (const auto& it : r.items) saw_applicable |= it.applicable;
  CHECK(saw_applicable);

  auto f = analytic::check_derivi_bounds(std::log(720.0L), 3, Kind::falling);
  CHECK(std::abs(f.n - 10) < 1e-6L);
  CHECK(f.all_pass());

  CHECK_THROWS_AS(
      analytic::check_derivi_bounds(std::log(3003.0L), 5, Kind::binomial, 0.5),
      domain_error);
}

TEST_CASE("integer point bound on constructed functions") {
  // f(x) = 0.2 x^2: f''/2! = 0.2 < |I|^-3 = 0.578 on [0, 1.2]
  auto f = [](Real x) { return 0.2L * x * x; };
  auto d2 = [](Real) { return (Real)0.4L; };
  auto v = analytic::integer_point_bound(f, 0, 1.2L, 2, d2);
  CHECK(v.applicable);
  CHECK(v.brute_count == 1);  // only x = 0 maps to an integer
  CHECK(v.brute_count <= 2);

  // same function on a long interval: threshold collapses, not applicable
  auto w = analytic::integer_point_bound(f, 0, 50, 2, d2);
  CHECK(!w.applicable);
  CHECK(w.brute_count >= 0);  // brute count still reported

  // derivative with a sign change on the interval: margin should kill it
  auto g = [](Real x) { return 0.001L * x * x * x; };
  auto gd2 = [](Real x) { return 0.006L * x; };
  auto u = analytic::integer_point_bound(g, -1, 1, 2, gd2);
  CHECK(!u.applicable);

  CHECK_THROWS_AS(analytic::integer_point_bound(f, 1, 0, 2, d2),
                  domain_error);
  CHECK_THROWS_AS(analytic::integer_point_bound(f, 0, 1, 0, d2),
                  domain_error);
}

TEST_CASE("inverse-Gamma curve") {
  CHECK(std::abs(analytic::solve_h(360, 2) - 6) < 1e-9L);
  // Gamma(h+1) = 12  =>  h = 3.5223979...
  Real h = analytic::solve_h(12, 1);
  CHECK(std::abs(h - 3.52239790956L) < 1e-9L);
  CHECK(std::abs(analytic::log_gamma(h + 1) - std::log(12.0L)) < 1e-12L);
  // h'(x) psi(h+1) = psi(x+1)
  Real hd = analytic::h_derivative(360, 2);
  CHECK(std::abs(hd - analytic::eval_psi(0, 3) / analytic::eval_psi(0, 7)) <
        1e-12L);
  CHECK_THROWS_AS(analytic::solve_h(0.1L, 1), domain_error);
}

TEST_CASE("precision modes parse and dispatch") {
  CHECK(parse_precision("double") == Precision::dbl);
  CHECK(parse_precision("extended") == Precision::ext);
  CHECK_THROWS_AS(parse_precision("quad"), domain_error);
  // double mode rounds through IEEE double: result within double accuracy
  Real a = analytic::eval_psi(0, 17.25L, Precision::dbl);
  Real b = analytic::eval_psi(0, 17.25L, Precision::ext);
  CHECK(std::abs(a - b) < 1e-13L);
  CHECK(a == (Real)(double)a);  // dbl route carries no extended tail
}

TEST_CASE("module selftest") {
  std::ostringstream log;
  bool ok = analytic::selftest(log);
  INFO(log.str());
  CHECK(ok);
}
