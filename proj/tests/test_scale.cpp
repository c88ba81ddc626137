#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "singmaster/common.hpp"
#include "singmaster/rng.hpp"
#include "singmaster/scale.hpp"

using namespace singmaster;
using scale::ScaleParams;

TEST_CASE("relative closeness predicate") {
  ScaleParams p;  // B = 1
  // P / log P at P = 1024 is about 147.6
  CHECK(scale::approx_rel(1000, 1100, 1024, p));
  CHECK(scale::approx_rel(1100, 1000, 1024, p));
  CHECK(scale::approx_rel(-50, 50, 1024, p));
  CHECK_FALSE(scale::approx_rel(1000, 1200, 1024, p));
  // a larger latch exponent shrinks the allowance: 1024 / log^2 P ~ 21.3
  ScaleParams sharp;
  sharp.latch_exponent = 2.0;
  CHECK_FALSE(scale::approx_rel(1000, 1100, 1024, sharp));
  CHECK(scale::approx_rel(1000, 1020, 1024, sharp));
  CHECK_THROWS_AS(scale::approx_rel(0, 1, 2, p), domain_error);
}

TEST_CASE("worked quadruple selects P = 128") {
  ScaleParams p;
  auto out = scale::scan_scales(1000000, 10, 2000000, 3000000, p);
  REQUIRE(out.selected.has_value());
  CHECK(out.selected->P == 128);
  CHECK(out.selected->report.pass());
  REQUIRE(out.rejected.size() == 3);
  CHECK(out.rejected[0].P == 16);
  CHECK(out.rejected[1].P == 32);
  CHECK(out.rejected[2].P == 64);
  for (const auto& r : out.rejected) {
    CHECK_FALSE(r.report.pass());
    CHECK_FALSE(r.report.dichotomy_ok);
    // the recorded witness really sits strictly inside the forbidden band
    CHECK(r.report.combo > r.report.band_lo);
    CHECK(r.report.combo < r.report.band_hi);
    CHECK(r.report.j >= 1);
    bool nontrivial = r.report.a || r.report.a2 || r.report.b || r.report.b2;
    CHECK(nontrivial);
  }

  // the independent axiom checker agrees on every candidate
  for (const auto& r : out.rejected) {
    auto brute = oracle::brute_scale_axioms(
        1000000, 10, 2000000, 3000000, r.P, p.latch_exponent, p.sep_exponent,
        std::int64_t(p.height_bound), p.j_max, p.size_power);
    CHECK_FALSE(brute.pass());
    CHECK(brute.dichotomy_ok == r.report.dichotomy_ok);
  }
  auto ok = oracle::brute_scale_axioms(
      1000000, 10, 2000000, 3000000, 128, p.latch_exponent, p.sep_exponent,
      std::int64_t(p.height_bound), p.j_max, p.size_power);
  CHECK(ok.pass());

  // select_scale is the same scan without the failure ledger
  auto sel = scale::select_scale(1000000, 10, 2000000, 3000000, p);
  REQUIRE(sel.has_value());
  CHECK(sel->P == 128);
}

TEST_CASE("an inseparable pair admits no scale") {
  ScaleParams p;
  auto out = scale::scan_scales(2, 1, 1000000, 2000000, p);
  CHECK_FALSE(out.selected.has_value());
  // every power of two in [16, 16384] was tried and rejected
  CHECK(out.rejected.size() == 11);
  for (const auto& r : out.rejected) CHECK_FALSE(r.report.separation_ok);
}

TEST_CASE("random quadruples vs the standalone axiom checker") {
  Rng rng(2026);
  ScaleParams p;
  p.p_max = 1024;  // 16 .. 1024: seven candidates per instance
  int both_pass = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::uint64_t m2 = 1 + rng.below(2000);
    std::uint64_t m = m2 + 1 + rng.below(1000000);
    std::uint64_t n = m + rng.below(1000000);
    std::uint64_t n2 = n + 1 + rng.below(2000000);
    auto out = scale::scan_scales(m, m2, n, n2, p);
    // replay the scan with the oracle: it must reject exactly the same
    // prefix and accept at the same P (if any)
    std::uint64_t P = p.p_min;
    for (const auto& r : out.rejected) {
      CHECK(r.P == P);
      auto brute = oracle::brute_scale_axioms(
          m, m2, n, n2, P, p.latch_exponent, p.sep_exponent,
          std::int64_t(p.height_bound), p.j_max, p.size_power);
      CHECK_FALSE(brute.pass());
      CHECK(brute.size_ok == r.report.size_ok);
      CHECK(brute.dichotomy_ok == r.report.dichotomy_ok);
      CHECK(brute.separation_ok == r.report.separation_ok);
      P <<= 1;
    }
    if (out.selected) {
      CHECK(out.selected->P == P);
      auto brute = oracle::brute_scale_axioms(
          m, m2, n, n2, P, p.latch_exponent, p.sep_exponent,
          std::int64_t(p.height_bound), p.j_max, p.size_power);
      CHECK(brute.pass());
      ++both_pass;
    }
  }
  CHECK(both_pass > 0);  // the distribution does produce admissible scales
}

TEST_CASE("stricter parameters never select a smaller scale") {
  Rng rng(7);
  ScaleParams lax;
  ScaleParams strict;
  strict.height_bound = 4;
  strict.j_max = 3;
  for (int trial = 0; trial < 15; ++trial) {
    std::uint64_t m2 = 1 + rng.below(500);
    std::uint64_t m = m2 + 100000 + rng.below(900000);
    std::uint64_t n = m + rng.below(1000000);
    std::uint64_t n2 = n + 500000 + rng.below(1500000);
    auto a = scale::select_scale(m, m2, n, n2, lax);
    auto b = scale::select_scale(m, m2, n, n2, strict);
    if (b) {
      REQUIRE(a.has_value());
      CHECK(b->P >= a->P);
    }
  }
}

TEST_CASE("suggested dyadic window") {
  auto r = scale::suggested_range(3000000, 0.1);
  CHECK(r.nonempty);
  CHECK(r.lo > 1.0L);
  CHECK(r.lo < r.hi);
  // the top is the square of the bottom: exp(2u) = exp(u)^2
  CHECK(std::abs(r.hi - r.lo * r.lo) < 1e-9L * r.hi);
  // endpoints of the dyadic sub-range are powers of two straddling [lo, hi]
  CHECK(std::has_single_bit(r.first_pow2));
  CHECK(std::has_single_bit(r.last_pow2));
  CHECK((long double)r.first_pow2 >= r.lo);
  CHECK((long double)r.first_pow2 < 2.0L * r.lo);
  CHECK((long double)r.last_pow2 <= r.hi);
  CHECK(2.0L * (long double)r.last_pow2 > r.hi);
  CHECK(r.first_pow2 <= r.last_pow2);

  // the window grows with n'
  auto big = scale::suggested_range(100000000, 0.1);
  CHECK(big.lo > r.lo);
  CHECK(big.last_pow2 > r.last_pow2);

  CHECK_THROWS_AS(scale::suggested_range(2, 0.1), domain_error);
  CHECK_THROWS_AS(scale::suggested_range(3000000, 0.0), domain_error);
  CHECK_THROWS_AS(scale::suggested_range(3000000, 1.0), domain_error);
}

TEST_CASE("parameter and ordering guards") {
  ScaleParams p;
  CHECK_THROWS_AS(scale::select_scale(10, 20, 100, 200, p), domain_error);
  CHECK_THROWS_AS(scale::select_scale(50, 10, 40, 200, p), domain_error);
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 100, p), domain_error);

  ScaleParams bad = p;
  bad.p_min = 10;  // not a power of two
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 200, bad), domain_error);
  bad = p;
  bad.p_min = 2;  // below the minimum of 4
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 200, bad), domain_error);
  bad = p;
  bad.p_max = 8;  // empty range
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 200, bad), domain_error);
  bad = p;
  bad.j_max = 0;
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 200, bad), domain_error);
  bad = p;
  bad.latch_exponent = 0.0;
  CHECK_THROWS_AS(scale::select_scale(50, 10, 100, 200, bad), domain_error);
}

TEST_CASE("module selftest") {
  std::ostringstream log;
  CHECK(scale::selftest(log));
}
