#include "singmaster/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>

#include "singmaster/exactcore.hpp"
#include "singmaster/rng.hpp"

namespace singmaster {

Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::dbl;
  if (s == "extended") return Precision::ext;
  throw domain_error("precision must be 'double' or 'extended', got '" + s + "'");
}

Precision default_precision() {
  static Precision p = [] {
    const char* e = std::getenv("SINGMASTER_PRECISION");
    return e ? parse_precision(e) : Precision::ext;
  }();
  return p;
}

}  // namespace singmaster

namespace singmaster::analytic {

namespace {

// Series kernels.  Recurrence pushes the argument above 12, where the
// Bernoulli tails below are accurate to ~2e-18 absolute — comfortably past
// the 12 significant digits the contract asks for, in either precision.
template <class F>
struct Kern {
  static F psi0(F x) {
    F acc = 0;
    while (x < F(12)) { acc -= F(1) / x; x += F(1); }
    F u = F(1) / x, u2 = u * u;
    F tail = u2 * (F(1.0L / 12) -
             u2 * (F(1.0L / 120) -
             u2 * (F(1.0L / 252) -
             u2 * (F(1.0L / 240) -
             u2 * (F(1.0L / 132) -
             u2 * (F(691.0L / 32760) -
             u2 * F(1.0L / 12)))))));
    return acc + std::log(x) - u / F(2) - tail;
  }

  static F psi1(F x) {
    F acc = 0;
    while (x < F(12)) { acc += F(1) / (x * x); x += F(1); }
    F u = F(1) / x, u2 = u * u;
    F tail = F(1.0L / 6) -
             u2 * (F(1.0L / 30) -
             u2 * (F(1.0L / 42) -
             u2 * (F(1.0L / 30) -
             u2 * (F(5.0L / 66) -
             u2 * (F(691.0L / 2730) -
             u2 * F(7.0L / 6))))));
    return acc + u + u2 / F(2) + u * u2 * tail;
  }

  static F psi2(F x) {
    F acc = 0;
    while (x < F(12)) { acc -= F(2) / (x * x * x); x += F(1); }
    F u = F(1) / x, u2 = u * u;
    F tail = F(1.0L / 2) -
             u2 * (F(1.0L / 6) -
             u2 * (F(1.0L / 6) -
             u2 * (F(3.0L / 10) -
             u2 * (F(5.0L / 6) -
             u2 * (F(691.0L / 210) -
             u2 * F(35.0L / 2))))));
    return acc - u2 - u2 * u - u2 * u2 * tail;
  }

  static F lgamma_(F x) {
    F acc = 0;
    while (x < F(12)) { acc -= std::log(x); x += F(1); }
    F u = F(1) / x, u2 = u * u;
    F tail = u * (F(1.0L / 12) -
             u2 * (F(1.0L / 360) -
             u2 * (F(1.0L / 1260) -
             u2 * (F(1.0L / 1680) -
             u2 * (F(1.0L / 1188) -
             u2 * (F(691.0L / 360360) -
             u2 * (F(7.0L / 1092) -
             u2 * F(3617.0L / 122400))))))));
    constexpr F half_log_2pi = F(0.91893853320467274178032973640562L);
    return acc + (x - F(0.5)) * std::log(x) - x + half_log_2pi + tail;
  }
};

template <class F>
F psi_dispatch(int order, F x) {
  switch (order) {
    case 0: return Kern<F>::psi0(x);
    case 1: return Kern<F>::psi1(x);
    case 2: return Kern<F>::psi2(x);
  }
  throw domain_error("eval_psi: order must be 0, 1 or 2");
}

// --- Newton solve of the log-Gamma curve equation ---------------------------

template <class F>
struct CurveSolver {
  F log_t;
  F m;
  Kind kind;

  // Above this value of n-m+1 the two lgamma (or psi) terms agree in their
  // leading digits and a direct subtraction would lose the answer entirely
  // (each term grows like n log n while the difference stays near m log n),
  // so the difference is formed analytically from the Stirling series.
  static constexpr F kStable = F(1e6);

  static F stirling_tail(F z) {        // lgamma(z) - [(z-1/2)log z - z + c]
    return 1 / (12 * z) - 1 / (360 * z * z * z);
  }

  // log Gamma(n+1) - log Gamma(n-m+1), cancellation-free for large n
  F lgamma_ratio(F n) const {
    F a = n + 1, b = n - m + 1;
    if (b < kStable) return Kern<F>::lgamma_(a) - Kern<F>::lgamma_(b);
    return (n + F(0.5)) * std::log1p(m / b) + m * std::log(b) - m +
           stirling_tail(a) - stirling_tail(b);
  }

  // residual of  log Gamma(n+1) - log Gamma(n-m+1) [- log Gamma(m+1)] = log t
  F resid(F n) const {
    F r = lgamma_ratio(n) - log_t;
    if (kind == Kind::binomial) r -= Kern<F>::lgamma_(m + 1);
    return r;
  }

  F slope(F n) const {  // d/dn of the residual; > 0 on (m, inf)
    F a = n + 1, b = n - m + 1;
    if (b < kStable) return Kern<F>::psi0(a) - Kern<F>::psi0(b);
    return std::log1p(m / b) + m / (2 * a * b) +
           m * (a + b) / (12 * a * a * b * b);
  }

  F solve() const {
    const F max_exp = std::numeric_limits<F>::max_exponent * F(0.6931);
    F arg = kind == Kind::binomial
                ? (log_t + Kern<F>::lgamma_(m + 1)) / m
                : log_t / m;
    if (arg > max_exp - 2)
      throw numeric_error("solve_curve: solution exceeds the floating range "
                          "(log t too large for this m)");
    F n0 = std::exp(arg) + (m - 1) / 2;

    F lo = m;
    F hi = std::max(n0 * 2, m + 4);
    for (int i = 0; resid(hi) <= 0; ++i) {
      if (i > 200 || hi > std::exp(max_exp - 2))
        throw numeric_error("solve_curve: failed to bracket the solution");
      hi *= 2;
    }

    F x = (n0 > lo && n0 < hi) ? n0 : (lo + hi) / 2;
    const F eps = std::numeric_limits<F>::epsilon();
    for (int it = 0; it < 200; ++it) {
      F r = resid(x);
      // the achievable absolute accuracy of resid(): eps times the largest
      // term actually subtracted inside it (the cancellation-free large-n
      // path never forms terms bigger than ~m log(n-m+1))
      F b = x - m + 1;
      F scale = std::max({std::abs(log_t), F(1),
                          b < kStable ? std::abs(Kern<F>::lgamma_(x + 1))
                                      : m * std::log(b)});
      F tol = std::max(F(1e-12L) * std::abs(log_t), 64 * eps * scale);
      if (std::abs(r) <= tol) return x;
      (r < 0 ? lo : hi) = x;
      F xn = x - r / slope(x);
      if (!(xn > lo && xn < hi)) xn = (lo + hi) / 2;
      if (xn == x) return x;  // bracket collapsed to machine resolution
      x = xn;
    }
    std::ostringstream d;
    d << "solve_curve: no convergence after 200 iterations (log_t="
      << static_cast<double>(log_t) << ", m=" << static_cast<double>(m)
      << ", kind=" << kind_name(kind) << ")";
    throw numeric_error(d.str());
  }
};

Precision effective(Precision prec, Real log_t) {
  // In double precision the solved n overflows once log t is large; promote.
  return (prec == Precision::dbl && log_t > 700) ? Precision::ext : prec;
}

void check_curve_pre(Real log_t, Real m, Kind kind, Precision prec) {
  if (!(m > 0)) throw domain_error("solve_curve: need m > 0");
  if (kind == Kind::binomial) {
    if (!(log_t > 0)) throw domain_error("solve_curve: need t > 1");
  } else {
    if (log_t < log_gamma(m + 2, prec) - 1e-9L)
      throw domain_error("solve_curve: falling curve needs Gamma(m+2) <= t");
  }
}

}  // namespace

Real eval_psi(int order, Real x, Precision prec) {
  if (!(x > 0)) throw domain_error("eval_psi: need x > 0");
  if (prec == Precision::dbl)
    return psi_dispatch<double>(order, static_cast<double>(x));
  return psi_dispatch<long double>(order, x);
}

Real log_gamma(Real x, Precision prec) {
  if (!(x > 0)) throw domain_error("log_gamma: need x > 0");
  if (prec == Precision::dbl)
    return Kern<double>::lgamma_(static_cast<double>(x));
  return Kern<long double>::lgamma_(x);
}

Real solve_curve_logt(Real log_t, Real m, Kind kind, Precision prec) {
  prec = effective(prec, log_t);
  check_curve_pre(log_t, m, kind, prec);
  if (prec == Precision::dbl)
    return CurveSolver<double>{static_cast<double>(log_t),
                               static_cast<double>(m), kind}.solve();
  return CurveSolver<long double>{log_t, m, kind}.solve();
}

Real solve_curve(Real t, Real m, Kind kind, Precision prec) {
  if (!(t > 0)) throw domain_error("solve_curve: need t > 0");
  return solve_curve_logt(std::log(t), m, kind, prec);
}

Real solve_curve(const mpz_class& t, Real m, Kind kind, Precision prec) {
  return solve_curve_logt(exact::log_nat(t), m, kind, prec);
}

Real curve_derivative_logt(Real log_t, Real m, int order, Kind kind,
                           Precision prec) {
  if (order != 1 && order != 2)
    throw domain_error("curve_derivative: order must be 1 or 2");
  prec = effective(prec, log_t);
  Real n = solve_curve_logt(log_t, m, kind, prec);
  auto psi = [&](Real x) { return eval_psi(0, x, prec); };
  auto psi1 = [&](Real x) { return eval_psi(1, x, prec); };

  Real pn = psi(n + 1), pd = psi(n - m + 1);
  Real denom = pn - pd;  // > 0
  if (kind == Kind::binomial) {
    Real pm = psi(m + 1);
    if (order == 1) return (pm - pd) / denom;
    Real num = denom * denom * psi1(m + 1) +
               (pn - pm) * (pn - pm) * psi1(n - m + 1) -
               (pd - pm) * (pd - pm) * psi1(n + 1);
    return num / (denom * denom * denom);
  }
  if (order == 1) return -pd / denom;
  Real num = pn * pn * psi1(n - m + 1) - pd * pd * psi1(n + 1);
  return num / (denom * denom * denom);
}

Real curve_derivative(const mpz_class& t, Real m, int order, Kind kind,
                      Precision prec) {
  return curve_derivative_logt(exact::log_nat(t), m, order, kind, prec);
}

BoundsCheck check_derivi_bounds(Real log_t, Real m, Kind kind, Real C,
                                Precision prec) {
  if (!(C > 1)) throw domain_error("check_derivi_bounds: need C > 1");
  prec = effective(prec, log_t);
  BoundsCheck out;
  out.n = solve_curve_logt(log_t, m, kind, prec);
  const Real n = out.n;
  out.regime_ok = (m <= n / 2);

  Real d1 = curve_derivative_logt(log_t, m, 1, kind, prec);
  Real d2 = curve_derivative_logt(log_t, m, 2, kind, prec);
  Real curv_scale = log_t / (m * m);  // log t / m^2, the curvature unit

  auto window = [&](std::string name, bool applicable, Real value) {
    out.items.push_back({std::move(name), applicable,
                         value >= 1 / C && value <= C, value, 1 / C, C});
  };
  auto sign = [&](std::string name, bool applicable, Real value, bool negative) {
    bool pass = negative ? value < 0 : value > 0;
    out.items.push_back({std::move(name), applicable, pass, value,
                         negative ? -std::numeric_limits<Real>::infinity() : 0,
                         negative ? 0 : std::numeric_limits<Real>::infinity()});
  };

  if (kind == Kind::binomial) {
    // magnitude n ~ m t^(1/m); guard the exponential against overflow
    Real arg = log_t / m;
    bool mag_ok = arg < 11000;
    window("magnitude n / (m t^(1/m))", mag_ok,
           mag_ok ? n / (m * std::exp(arg)) : 0);
    sign("first derivative negative", out.regime_ok, d1, true);
    sign("second derivative positive", out.regime_ok, d2, false);
    // |f'| ~ (n - 2m) log t / m^2; degenerate at the symmetry axis
    Real gap = n - 2 * m;
    bool ratio_ok = out.regime_ok && gap > std::max<Real>(1, 1e-6L * n);
    window("first derivative ratio", ratio_ok,
           ratio_ok ? std::abs(d1) / (gap * curv_scale) : 0);
    window("second derivative ratio", out.regime_ok,
           d2 > 0 ? d2 / (n * curv_scale * curv_scale) : 0);
  } else {
    Real arg = log_t / m;
    bool mag_ok = arg < 11000;
    window("magnitude n / t^(1/m)", mag_ok, mag_ok ? n / std::exp(arg) : 0);
    sign("first derivative negative", out.regime_ok, d1, true);
    Real logn = std::log(std::max<Real>(n, 2));
    bool ten_range = (m <= n - C * logn * logn) && m >= 2;
    sign("second derivative positive", ten_range, d2, false);
    window("first derivative ratio", out.regime_ok,
           out.regime_ok ? std::abs(d1) / (n * curv_scale) : 0);
    // (ten-falling) is an upper bound only
    Real logm = std::log(std::max<Real>(m, 2));
    Real ten_cap = C * (n * curv_scale * curv_scale + (1 / C) / (logm * logm * logm));
    out.items.push_back({"second derivative upper bound", ten_range,
                         d2 <= ten_cap, d2, 0, ten_cap});
  }
  return out;
}

IntegerPointVerdict integer_point_bound(
    const std::function<Real(Real)>& f, Real a, Real b, unsigned k,
    const std::function<Real(Real)>& kth_derivative, bool brute,
    unsigned sample_points) {
  if (!(b > a)) throw domain_error("integer_point_bound: empty interval");
  if (k < 1) throw domain_error("integer_point_bound: need k >= 1");
  if (sample_points < 3) sample_points = 3;

  IntegerPointVerdict v;
  v.k = k;
  Real len = b - a;
  v.threshold = std::pow(len, -0.5L * k * (k + 1));

  Real kfac = 1;
  for (unsigned i = 2; i <= k; ++i) kfac *= i;

  Real prev = 0;
  for (unsigned i = 0; i < sample_points; ++i) {
    Real x = a + len * i / (sample_points - 1);
    Real s = std::abs(kth_derivative(x)) / kfac;
    if (i == 0) {
      v.scaled_min = v.scaled_max = s;
    } else {
      v.scaled_min = std::min(v.scaled_min, s);
      v.scaled_max = std::max(v.scaled_max, s);
      v.margin = std::max(v.margin, std::abs(s - prev));
    }
    prev = s;
  }
  v.applicable = v.scaled_min > v.margin && v.scaled_min > 0 &&
                 v.scaled_max + v.margin < v.threshold;

  if (brute) {
    Real first = std::ceil(a), last = std::floor(b);
    if (last - first > 2e6)
      throw resource_error("integer_point_bound: interval too long to enumerate");
    std::int64_t count = 0;
    for (Real x = first; x <= last; x += 1) {
      Real y = f(x);
      if (std::abs(y - std::nearbyint(y)) <= 1e-9L) ++count;
    }
    v.brute_count = count;
  }
  return v;
}

Real solve_h_logt(Real log_t, Real ell, Precision prec) {
  if (!(ell > 0)) throw domain_error("solve_h: need ell > 0");
  Real rhs = log_t + log_gamma(ell + 1, prec);
  constexpr Real log2 = 0.69314718055994530941723212145818L;
  if (rhs < log2 - 1e-9L)
    throw domain_error("solve_h: need t * Gamma(ell+1) >= 2");

  auto lg = [&](Real x) { return log_gamma(x, prec); };
  auto G = [&](Real h) { return lg(h + 1) - rhs; };

  Real lo = 1, hi = 4;
  for (int i = 0; G(hi) <= 0; ++i) {
    if (i > 200) throw numeric_error("solve_h: failed to bracket");
    hi *= 2;
  }
  Real x = std::min(hi / 2 + 1, std::max<Real>(2, rhs));
  if (!(x > lo && x < hi)) x = (lo + hi) / 2;
  const Real eps = prec == Precision::dbl ? 2.3e-16L : 1.1e-19L;
  for (int it = 0; it < 200; ++it) {
    Real r = G(x);
    Real tol = std::max(1e-13L * std::max<Real>(rhs, 1),
                        64 * eps * std::max<Real>(std::abs(rhs), 1));
    if (std::abs(r) <= tol) return x;
    (r < 0 ? lo : hi) = x;
    Real xn = x - r / eval_psi(0, x + 1, prec);
    if (!(xn > lo && xn < hi)) xn = (lo + hi) / 2;
    if (xn == x) return x;
    x = xn;
  }
  throw numeric_error("solve_h: no convergence after 200 iterations");
}

Real solve_h(Real t, Real ell, Precision prec) {
  if (!(t > 0)) throw domain_error("solve_h: need t > 0");
  return solve_h_logt(std::log(t), ell, prec);
}

Real h_derivative(Real t, Real ell, Precision prec) {
  Real h = solve_h(t, ell, prec);
  return eval_psi(0, ell + 1, prec) / eval_psi(0, h + 1, prec);
}

bool selftest(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) { log << "analytic selftest FAILED: " << what << "\n"; ok = false; }
  };

  constexpr Real gamma_e = 0.57721566490153286060651209008240L;
  constexpr Real pi2_6 = 1.64493406684822643647241516664603L;
  expect(std::abs(eval_psi(0, 1) + gamma_e) < 1e-15L, "psi(1) = -gamma");
  expect(std::abs(eval_psi(1, 1) - pi2_6) < 1e-15L, "psi'(1) = pi^2/6");
  expect(std::abs(log_gamma(1)) < 1e-17L, "log Gamma(1) = 0");
  expect(std::abs(log_gamma(11) - std::log(3628800.0L)) < 1e-12L,
         "log Gamma(11) = log 10!");

  Rng rng(0xa11a5eedULL);
  for (int i = 0; i < 300 && ok; ++i) {
    Real x = std::exp(rng.uniform(std::log(1e-3), std::log(1e6)));
    expect(std::abs(eval_psi(0, x + 1) - eval_psi(0, x) - 1 / x) < 1e-12L,
           "psi recurrence");
  }

  Real n = solve_curve(3003.0L, 5, Kind::binomial);
  expect(std::abs(n - 15) < 1e-6L, "solve_curve(3003, 5) = 15");
  Real d1 = curve_derivative_logt(std::log(3003.0L), 5, 1, Kind::binomial);
  expect(d1 < 0, "f'_3003(5) < 0");
  Real d2 = curve_derivative_logt(std::log(3003.0L), 5, 2, Kind::binomial);
  expect(d2 > 0, "f''_3003(5) > 0");
  expect(std::abs(solve_h(360, 2) - 6) < 1e-9L, "solve_h(360,2) = 6");

  if (ok) log << "analytic selftest passed\n";
  return ok;
}

}  // namespace singmaster::analytic
