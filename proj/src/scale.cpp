#include "singmaster/scale.hpp"

#include <cmath>
#include <ostream>

namespace singmaster::scale {

namespace {

bool is_pow2(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

long double log_pow(std::uint64_t P, double expo) {
  return std::pow(std::log((long double)P), (long double)expo);
}

void check_params(const ScaleParams& params) {
  if (!(params.latch_exponent > 0) || !(params.sep_exponent > 0) ||
      !(params.size_power > 0))
    throw domain_error("scale: exponents must be positive");
  if (params.p_min < 4) throw domain_error("scale: p_min must be >= 4");
  if (!is_pow2(params.p_min) || !is_pow2(params.p_max))
    throw domain_error("scale: p_min and p_max must be powers of two");
  if (params.p_max < params.p_min)
    throw domain_error("scale: empty search range");
  if (params.j_max < 1) throw domain_error("scale: j_max must be >= 1");
}

AxiomReport check_axioms(std::uint64_t m, std::uint64_t m2, std::uint64_t n,
                         std::uint64_t n2, std::uint64_t P,
                         const ScaleParams& params) {
  AxiomReport rep;
  const long double latch = log_pow(P, params.latch_exponent);

  // size: all four coordinates below P^size_power
  rep.size_ok = true;
  long double cap = std::pow((long double)P, (long double)params.size_power);
  for (std::uint64_t v : {m, m2, n, n2})
    if ((long double)v > cap) {
      rep.size_ok = false;
      rep.offending = (long double)v;
      break;
    }

  // dichotomy: every nonzero low-height combination avoids the open band
  // (P^j / log^B P, P^j log^B P) for every 1 <= j <= j_max
  rep.dichotomy_ok = true;
  const std::int64_t H = (std::int64_t)params.height_bound;
  for (std::int64_t a = -H; a <= H && rep.dichotomy_ok; ++a)
    for (std::int64_t a2 = -H; a2 <= H && rep.dichotomy_ok; ++a2)
      for (std::int64_t b = -H; b <= H && rep.dichotomy_ok; ++b)
        for (std::int64_t b2 = -H; b2 <= H && rep.dichotomy_ok; ++b2) {
          if (a == 0 && a2 == 0 && b == 0 && b2 == 0) continue;
          __int128 combo = (__int128)a * m + (__int128)a2 * m2 +
                           (__int128)b * n + (__int128)b2 * n2;
          if (combo < 0) combo = -combo;
          long double cv = (long double)combo;
          long double pj = 1;
          for (unsigned j = 1; j <= params.j_max; ++j) {
            pj *= (long double)P;
            long double lo = pj / latch, hi = pj * latch;
            if (cv > lo && cv < hi) {
              rep.dichotomy_ok = false;
              rep.a = a;
              rep.a2 = a2;
              rep.b = b;
              rep.b2 = b2;
              rep.j = j;
              rep.combo = cv;
              rep.band_lo = lo;
              rep.band_hi = hi;
              break;
            }
          }
        }

  // separation: one of the two gap measures clears P log^B P
  const long double sep = (long double)P * log_pow(P, params.sep_exponent);
  long double gap1 = (long double)(m - m2);
  long double gap2 = (long double)std::min(std::min(m, m2), n2 - n);
  rep.separation_ok = gap1 >= sep || gap2 >= sep;
  if (!rep.separation_ok) rep.offending = std::max(gap1, gap2);

  return rep;
}

}  // namespace

bool approx_rel(std::int64_t x, std::int64_t y, std::uint64_t P,
                const ScaleParams& params) {
  if (P < 4) throw domain_error("approx_rel: need P >= 4");
  long double diff = std::abs((long double)x - (long double)y);
  return diff <= (long double)P / log_pow(P, params.latch_exponent);
}

ScanOutcome scan_scales(std::uint64_t m, std::uint64_t m2, std::uint64_t n,
                        std::uint64_t n2, const ScaleParams& params) {
  if (!(m2 < m && m <= n && n < n2))
    throw domain_error("scale: coordinates must satisfy m' < m <= n < n'");
  check_params(params);

  ScanOutcome out;
  for (std::uint64_t P = params.p_min; P <= params.p_max; P <<= 1) {
    AxiomReport rep = check_axioms(m, m2, n, n2, P, params);
    if (rep.pass()) {
      out.selected = ScaleResult{P, rep};
      break;
    }
    out.rejected.push_back(ScaleResult{P, rep});
    if (P > params.p_max / 2) break;  // avoid shift overflow at the top
  }
  return out;
}

std::optional<ScaleResult> select_scale(std::uint64_t m, std::uint64_t m2,
                                        std::uint64_t n, std::uint64_t n2,
                                        const ScaleParams& params) {
  return scan_scales(m, m2, n, n2, params).selected;
}

SearchRange suggested_range(std::uint64_t n2, double eps) {
  if (n2 < 3) throw domain_error("suggested_range: need n' >= 3");
  if (!(eps > 0) || !(eps < 1))
    throw domain_error("suggested_range: eps must lie in (0, 1)");
  SearchRange r;
  long double expo =
      std::pow(std::log((long double)n2), 2.0L / 3 + (long double)eps / 2);
  r.lo = std::exp(expo);
  r.hi = std::exp(2 * expo);
  std::uint64_t p = 4;
  while ((long double)p < r.lo && p < (std::uint64_t(1) << 62)) p <<= 1;
  if ((long double)p >= r.lo && (long double)p <= r.hi) {
    r.first_pow2 = p;
    std::uint64_t q = p;
    while (q <= (std::uint64_t(1) << 61) && (long double)(q << 1) <= r.hi)
      q <<= 1;
    r.last_pow2 = q;
    r.nonempty = true;
  }
  return r;
}

bool selftest(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) { log << "scale selftest FAILED: " << what << "\n"; ok = false; }
  };

  ScaleParams sp;
  expect(approx_rel(7, 7, 1024, sp), "x ~ x at any scale");
  expect(!approx_rel(0, 1024, 1024, sp), "P apart is never ~ at scale P");
  expect(approx_rel(100, 103, std::uint64_t(1) << 20, sp),
         "3 apart at P = 2^20");

  // the worked quadruple: first admissible scale is P = 128
  ScaleParams wp;
  wp.height_bound = 2;
  wp.j_max = 2;
  wp.latch_exponent = 1;
  wp.sep_exponent = 1;
  wp.p_min = 16;
  wp.p_max = 16384;
  auto sel = select_scale(1000000, 10, 2000000, 3000000, wp);
  expect(sel.has_value() && sel->P == 128, "worked quadruple selects P = 128");
  auto outcome = scan_scales(1000000, 10, 2000000, 3000000, wp);
  expect(outcome.rejected.size() == 3, "P = 16, 32, 64 rejected first");
  if (outcome.rejected.size() == 3)
    expect(!outcome.rejected[0].report.dichotomy_ok,
           "small scales fail the dichotomy");

  // engineered separation failure: m - m' = 1 and m' = 1 defeat both
  // disjuncts for every P >= 16
  auto none = select_scale(2, 1, 1000000, 2000000, wp);
  expect(!none.has_value(), "separation-hostile quadruple yields no scale");

  // raising H only removes candidate scales
  ScaleParams big = wp;
  big.height_bound = 4;
  auto sel_big = select_scale(1000000, 10, 2000000, 3000000, big);
  expect(!sel_big.has_value() || sel_big->P >= sel->P,
         "larger height bound never selects a smaller scale");

  auto rng = suggested_range(3000000, 0.1);
  expect(rng.lo > 1 && rng.hi > rng.lo, "suggested range is ordered");

  if (ok) log << "scale selftest passed\n";
  return ok;
}

}  // namespace singmaster::scale
