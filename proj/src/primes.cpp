#include "singmaster/primes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <thread>

#include "singmaster/rng.hpp"

namespace singmaster::primes {

namespace {

constexpr Real kTwoPi = 6.2831853071795864769252867665590058L;

Complex e_of(Real x) {  // e(x) = exp(2 pi i x); callers keep x in [0, 2)
  return Complex(std::cos(kTwoPi * x), std::sin(kTwoPi * x));
}

// --- deterministic chunked reduction -----------------------------------------
//
// Terms are accumulated per 4096-element chunk with compensated (Kahan)
// summation, and the chunk totals are combined in fixed chunk order.
// Workers only race for whole chunks, so the result is bit-identical for
// any worker count.

struct KahanReal {
  Real s = 0, c = 0;
  void add(Real x) {
    Real y = x - c;
    Real t = s + y;
    c = (t - s) - y;
    s = t;
  }
  Real value() const { return s; }
};

struct KahanComplex {
  KahanReal re, im;
  void add(const Complex& z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return Complex(re.value(), im.value()); }
};

struct KahanPair {
  KahanReal a, b;
  void add(const std::pair<Real, Real>& v) {
    a.add(v.first);
    b.add(v.second);
  }
  std::pair<Real, Real> value() const { return {a.value(), b.value()}; }
};

template <class Acc, class Term>
auto chunked_reduce(std::uint64_t n, unsigned workers, Term term) {
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = n ? (n + kChunk - 1) / kChunk : 0;
  std::vector<decltype(Acc{}.value())> partial(chunks);
  auto work = [&](std::uint64_t ci) {
    Acc acc;
    const std::uint64_t b = ci * kChunk, e = std::min(n, b + kChunk);
    for (std::uint64_t i = b; i < e; ++i) acc.add(term(i));
    partial[ci] = acc.value();
  };
  if (workers <= 1 || chunks <= 1) {
    for (std::uint64_t ci = 0; ci < chunks; ++ci) work(ci);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    unsigned nw = unsigned(std::min<std::uint64_t>(workers, chunks));
    for (unsigned w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t ci; (ci = next.fetch_add(1)) < chunks;) work(ci);
      });
    for (auto& t : pool) t.join();
  }
  Acc total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

std::uint64_t isqrt_u64(std::uint64_t x) {
  std::uint64_t r = std::uint64_t(std::sqrt(double(x)));
  while (r > 0 && r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace

// --- prime intervals ---------------------------------------------------------

PrimeInterval enumerate_primes(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || hi < lo)
    throw domain_error("enumerate_primes: need 2 <= lo <= hi");
  if (hi > (std::uint64_t(1) << 48))
    throw resource_error("enumerate_primes: hi beyond 2^48");
  if (hi - lo >= (std::uint64_t(1) << 30))
    throw resource_error("enumerate_primes: window wider than 2^30");

  PrimeInterval I;
  I.lo = lo;
  I.hi = hi;
  const std::uint64_t root = isqrt_u64(hi);

  std::vector<bool> small_comp(root + 1, false);
  for (std::uint64_t i = 2; i * i <= root; ++i)
    if (!small_comp[i])
      for (std::uint64_t k = i * i; k <= root; k += i) small_comp[k] = true;

  std::vector<bool> comp(hi - lo + 1, false);
  for (std::uint64_t p = 2; p <= root; ++p) {
    if (small_comp[p]) continue;
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t q = start; q <= hi; q += p) comp[q - lo] = true;
  }
  for (std::uint64_t n = lo; n <= hi; ++n)
    if (!comp[n - lo]) I.primes.push_back(n);
  return I;
}

// --- phases ------------------------------------------------------------------

Real PhaseParams::magnitude(Real X) const {
  return std::abs(N) / X + std::abs(M) / std::pow(X, Real(j));
}

Real frac_part_ratio(Real N, std::uint64_t p, unsigned j) {
  if (p < 2) throw domain_error("frac_part_ratio: need p >= 2");
  if (j < 1) throw domain_error("frac_part_ratio: need j >= 1");
  using U = unsigned __int128;
  constexpr U kMaxU = ~U(0);
  U D = 1;
  bool over = false;
  for (unsigned i = 0; i < j; ++i) {
    if (D > kMaxU / p) { over = true; break; }
    D *= p;
  }
  if (over) {
    // p^j beyond 128 bits; the quotient is far below 1 in any desk regime
    Real r = N * std::pow(Real(p), -Real(j));
    r -= std::floor(r);
    return r < 1 ? r : 0;
  }
  if (std::nearbyint(N) == N && std::abs(N) < 0x1p112L) {
    // exact reduction: (|N| mod p^j) adjusted for sign
    bool neg = N < 0;
    U a = U(neg ? -N : N);
    U r = a % D;
    if (neg && r) r = D - r;
    return Real(r) / Real(D);
  }
  Real Dr = Real(D);
  Real r = std::fmod(N, Dr);
  if (r < 0) r += Dr;
  return r / Dr;
}

Complex exp_sum_primes(const PrimeInterval& I, const PhaseParams& phase,
                       unsigned workers) {
  if (phase.j < 1) throw domain_error("exp_sum_primes: need j >= 1");
  return chunked_reduce<KahanComplex>(
      I.primes.size(), workers, [&](std::uint64_t i) {
        std::uint64_t p = I.primes[i];
        return e_of(frac_part_ratio(phase.N, p, 1) +
                    frac_part_ratio(phase.M, p, phase.j));
      });
}

// --- the integral oracle -----------------------------------------------------

IntegralResult integral_oracle(Real lo, Real hi, const PhaseParams& phase) {
  if (!(lo > 1) || !(hi >= lo))
    throw domain_error("integral_oracle: need 1 < lo <= hi");
  IntegralResult res;
  if (hi == lo) return res;
  const Real tol_total = 1e-6L * (hi - lo) / std::log(lo);

  auto f = [&](Real t) {
    ++res.evaluations;
    Real ph = phase.N / t + phase.M / std::pow(t, Real(phase.j));
    return e_of(ph - std::floor(ph)) / std::log(t);
  };
  auto dphi = [&](Real t) {
    return std::abs(phase.N) / (t * t) +
           Real(phase.j) * std::abs(phase.M) / std::pow(t, Real(phase.j + 1));
  };
  auto simpson = [](Real a, Real b, const Complex& fa, const Complex& fm,
                    const Complex& fb) {
    return (b - a) / 6 * (fa + 4.0L * fm + fb);
  };

  std::function<Complex(Real, Real, Complex, Complex, Complex, Complex, Real,
                        int)>
      adapt = [&](Real a, Real b, Complex fa, Complex fm, Complex fb,
                  Complex S, Real tol, int depth) -> Complex {
    Real mid = (a + b) / 2;
    if (!(mid > a && mid < b))
      throw numeric_error("integral_oracle: step underflow — phase too wild "
                          "for the requested tolerance");
    Complex fl = f((a + mid) / 2), fr = f((mid + b) / 2);
    Complex SL = simpson(a, mid, fa, fl, fm);
    Complex SR = simpson(mid, b, fm, fr, fb);
    Complex S2 = SL + SR;
    Real err = std::abs(S2 - S) / 15;
    if (err <= tol || depth >= 48) {
      res.error_estimate += err;
      return S2 + (S2 - S) / 15.0L;  // Richardson tail
    }
    return adapt(a, mid, fa, fl, fm, SL, tol / 2, depth + 1) +
           adapt(mid, b, fm, fr, fb, SR, tol / 2, depth + 1);
  };

  KahanComplex total;
  Real t = lo;
  while (t < hi) {
    Real h = std::min(Real(1) / (10 * dphi(t) + 1), hi - t);
    Real b = t + h;
    if (!(b > t))
      throw numeric_error("integral_oracle: step underflow — phase too wild "
                          "for the requested tolerance");
    Complex fa = f(t), fm = f((t + b) / 2), fb = f(b);
    total.add(adapt(t, b, fa, fm, fb, simpson(t, b, fa, fm, fb),
                    tol_total * (h / (hi - lo)), 0));
    t = b;
  }
  res.value = total.value();
  return res;
}

// --- smooth windows ----------------------------------------------------------

FourierWindow::FourierWindow(int cutoff)
    : cutoff_(cutoff),
      c_(std::size_t(2 * cutoff + 1) * std::size_t(2 * cutoff + 1)) {}

FourierWindow FourierWindow::constant(Complex value) {
  FourierWindow w(0);
  w.c_[0] = value;
  return w;
}

FourierWindow FourierWindow::mode(int a, int b) {
  int cut = std::max(std::abs(a), std::abs(b));
  if (cut > kMaxCutoff) throw domain_error("FourierWindow: mode beyond cutoff 32");
  FourierWindow w(cut);
  w.set_coefficient(a, b, Complex(1, 0));
  return w;
}

FourierWindow FourierWindow::fejer_bump(Real mass, int K) {
  if (K < 1 || K > kMaxCutoff)
    throw domain_error("FourierWindow: Fejer order must be in [1, 32]");
  FourierWindow w(K);
  for (int n = -K; n <= K; ++n)
    w.set_coefficient(n, 0,
                      Complex(mass * (1 - Real(std::abs(n)) / (K + 1)), 0));
  return w;
}

Complex FourierWindow::coefficient(int n, int m) const {
  if (std::abs(n) > cutoff_ || std::abs(m) > cutoff_) return Complex(0, 0);
  return c_[std::size_t(n + cutoff_) * (2 * cutoff_ + 1) + (m + cutoff_)];
}

void FourierWindow::set_coefficient(int n, int m, Complex c) {
  if (std::abs(n) > cutoff_ || std::abs(m) > cutoff_)
    throw domain_error("FourierWindow: coefficient index beyond cutoff");
  c_[std::size_t(n + cutoff_) * (2 * cutoff_ + 1) + (m + cutoff_)] = c;
}

Complex FourierWindow::eval(Real x, Real y) const {
  const int W = 2 * cutoff_ + 1;
  std::vector<Complex> px(W), py(W);
  Complex ex = e_of(x), ey = e_of(y);
  px[cutoff_] = py[cutoff_] = Complex(1, 0);
  for (int k = 1; k <= cutoff_; ++k) {
    px[cutoff_ + k] = px[cutoff_ + k - 1] * ex;
    px[cutoff_ - k] = std::conj(px[cutoff_ + k]);
    py[cutoff_ + k] = py[cutoff_ + k - 1] * ey;
    py[cutoff_ - k] = std::conj(py[cutoff_ + k]);
  }
  Complex acc(0, 0);
  for (int n = 0; n < W; ++n)
    for (int m = 0; m < W; ++m) {
      const Complex& co = c_[std::size_t(n) * W + m];
      if (co != Complex(0, 0)) acc += co * px[n] * py[m];
    }
  return acc;
}

Real FourierWindow::c3_norm_bound() const {
  const int W = 2 * cutoff_ + 1;
  Real bound = 0;
  for (int n = -cutoff_; n <= cutoff_; ++n)
    for (int m = -cutoff_; m <= cutoff_; ++m) {
      Real mag = std::abs(c_[std::size_t(n + cutoff_) * W + (m + cutoff_)]);
      Real order = 1 + std::abs(n) + std::abs(m);
      bound += mag * order * order * order;
    }
  return bound * kTwoPi * kTwoPi * kTwoPi;  // times (2 pi)^3
}

Complex weighted_prime_sum(const PrimeInterval& I, const FourierWindow& W,
                           const PhaseParams& phase, unsigned workers) {
  if (phase.j < 1) throw domain_error("weighted_prime_sum: need j >= 1");
  return chunked_reduce<KahanComplex>(
      I.primes.size(), workers, [&](std::uint64_t i) {
        std::uint64_t p = I.primes[i];
        return W.eval(frac_part_ratio(phase.N, p, 1),
                      frac_part_ratio(phase.M, p, phase.j));
      });
}

Complex weighted_prime_sum_fourier(const PrimeInterval& I,
                                   const FourierWindow& W,
                                   const PhaseParams& phase, unsigned workers) {
  KahanComplex acc;
  for (int n = -W.cutoff(); n <= W.cutoff(); ++n)
    for (int m = -W.cutoff(); m <= W.cutoff(); ++m) {
      Complex co = W.coefficient(n, m);
      if (co == Complex(0, 0)) continue;
      PhaseParams ph{Real(n) * phase.N, Real(m) * phase.M, phase.j};
      acc.add(co * exp_sum_primes(I, ph, workers));
    }
  return acc.value();
}

// --- integer sums ------------------------------------------------------------

IntegerSumResult exp_sum_integers(std::uint64_t lo, std::uint64_t hi,
                                  const PhaseParams& phase, unsigned workers) {
  if (lo < 2 || hi < lo)
    throw domain_error("exp_sum_integers: need 2 <= lo <= hi");
  if (hi > 2 * lo)
    throw domain_error("exp_sum_integers: interval must satisfy hi <= 2 lo");
  if (phase.j < 1) throw domain_error("exp_sum_integers: need j >= 1");
  IntegerSumResult r;
  r.count = hi - lo + 1;
  r.value = chunked_reduce<KahanComplex>(r.count, workers, [&](std::uint64_t i) {
    std::uint64_t n = lo + i;
    return e_of(frac_part_ratio(phase.N, n, 1) +
                frac_part_ratio(phase.M, n, phase.j));
  });
  r.F = phase.magnitude(Real(lo));
  r.normalized = std::abs(r.value) / Real(r.count);
  return r;
}

Complex von_mangoldt_sum(std::uint64_t lo, std::uint64_t hi,
                         const PhaseParams& phase, unsigned workers) {
  if (hi > 1'000'000'000ull)
    throw resource_error("von_mangoldt_sum: hi beyond 10^9");
  auto I = enumerate_primes(lo, hi);
  Complex from_primes = chunked_reduce<KahanComplex>(
      I.primes.size(), workers, [&](std::uint64_t i) {
        std::uint64_t p = I.primes[i];
        return e_of(frac_part_ratio(phase.N, p, 1) +
                    frac_part_ratio(phase.M, p, phase.j)) *
               std::log(Real(p));
      });

  // higher prime powers p^k in [lo, hi] contribute log p
  KahanComplex extra;
  std::uint64_t root = isqrt_u64(hi);
  if (root >= 2) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pows;  // (p^k, p)
    for (std::uint64_t p : enumerate_primes(2, root).primes)
      for (std::uint64_t q = p * p; q <= hi; q *= p) {
        if (q >= lo) pows.emplace_back(q, p);
        if (q > hi / p) break;
      }
    std::sort(pows.begin(), pows.end());
    for (auto [q, p] : pows)
      extra.add(e_of(frac_part_ratio(phase.N, q, 1) +
                     frac_part_ratio(phase.M, q, phase.j)) *
                std::log(Real(p)));
  }
  return from_primes + extra.value();
}

// --- covariances -------------------------------------------------------------

CovarianceEstimate covariance_estimate(const PrimeInterval& I, unsigned j,
                                       Real N, Real M, unsigned workers) {
  if (j < 1) throw domain_error("covariance_estimate: need j >= 1");
  const std::uint64_t n = I.count();
  if (n < 1000)
    throw domain_error("covariance_estimate: statistical insufficiency — "
                       "need at least 1000 primes in the interval");
  auto x = [&](std::uint64_t i) {
    return Real(0.5) - frac_part_ratio(N, I.primes[i], 1);
  };
  auto y = [&](std::uint64_t i) {
    return Real(0.5) - frac_part_ratio(M, I.primes[i], j);
  };

  CovarianceEstimate est;
  est.j = j;
  est.N = N;
  est.M = M;
  est.sample_size = n;
  auto [sx, sy] = chunked_reduce<KahanPair>(
      n, workers,
      [&](std::uint64_t i) { return std::make_pair(x(i), y(i)); });
  est.mean_x = sx / Real(n);
  est.mean_y = sy / Real(n);
  auto [sz, sz2] = chunked_reduce<KahanPair>(n, workers, [&](std::uint64_t i) {
    Real z = (x(i) - est.mean_x) * (y(i) - est.mean_y);
    return std::make_pair(z, z * z);
  });
  est.estimate = sz / Real(n);
  Real var = std::max<Real>(0, sz2 / Real(n) - est.estimate * est.estimate);
  est.standard_error = std::sqrt(var / Real(n));
  return est;
}

const char* covariance_class_name(CovarianceClass c) {
  switch (c) {
    case CovarianceClass::near_zero_j_ge_2: return "near_zero_j_ge_2";
    case CovarianceClass::vanishing_argument: return "vanishing_argument";
    case CovarianceClass::commensurable: return "commensurable";
    case CovarianceClass::generic_small: return "generic_small";
  }
  return "?";
}

CovariancePrediction covariance_prediction(Real N, Real M, unsigned j,
                                           std::uint64_t height_bound) {
  if (height_bound < 1)
    throw domain_error("covariance_prediction: need height_bound >= 1");
  if (j < 1) throw domain_error("covariance_prediction: need j >= 1");
  CovariancePrediction pred;
  if (j >= 2) {
    pred.classification = CovarianceClass::near_zero_j_ge_2;
    pred.tolerance_class = "log_decay_j_ge_2";
    pred.suggested_tolerance = 0.01L;
    return pred;
  }
  if (std::abs(N) <= 1e-9L || std::abs(M) <= 1e-9L) {
    pred.classification = CovarianceClass::vanishing_argument;
    pred.tolerance_class = "constant_factor_mean";
    pred.suggested_tolerance = 1e-3L;
    return pred;
  }
  // smallest coprime (a, b) with aN = bM, if any within the height bound
  for (std::uint64_t s = 2; s <= 2 * height_bound; ++s)
    for (std::uint64_t a = s > height_bound ? s - height_bound : 1;
         a < s && a <= height_bound; ++a) {
      std::uint64_t b = s - a;
      if (std::gcd(a, b) != 1) continue;
      Real lhs = Real(a) * N, rhs = Real(b) * M;
      if (std::abs(lhs - rhs) <=
          1e-9L * std::max(std::abs(lhs), std::abs(rhs))) {
        pred.classification = CovarianceClass::commensurable;
        pred.a = a;
        pred.b = b;
        pred.predicted = Real(1) / (12.0L * Real(a) * Real(b));
        pred.tolerance_class = "ladder_pilot";
        pred.suggested_tolerance = 0.015L;
        return pred;
      }
    }
  pred.classification = CovarianceClass::generic_small;
  pred.tolerance_class = "no_low_height_relation";
  pred.suggested_tolerance = 0.01L;
  return pred;
}

// --- the valuation-balance experiment ----------------------------------------

JpBalance check_jp_balance(const exact::BinomialSolution& s1,
                           const exact::BinomialSolution& s2,
                           const PrimeInterval& I, Real N, unsigned workers) {
  if (s1.t != s2.t)
    throw domain_error("check_jp_balance: the two solutions must share t");
  JpBalance r;
  r.j_max = std::max(1, int(std::floor(std::sqrt(std::log(Real(I.lo))))));
  Real se2 = 0;
  auto side = [&](const exact::BinomialSolution& s) {
    Real m = Real(s.m);
    Real nm = mpz_get_d(exact::Nat(s.n - s.m).get_mpz_t());
    Real n = mpz_get_d(s.n.get_mpz_t());
    Real acc = 0;
    for (unsigned j = 1; j <= r.j_max; ++j) {
      const Real args[3] = {m, nm, n};
      const Real signs[3] = {1, 1, -1};
      for (int k = 0; k < 3; ++k) {
        auto c = covariance_estimate(I, j, N, args[k], workers);
        acc += signs[k] * c.estimate;
        se2 += c.standard_error * c.standard_error;
      }
    }
    return acc;
  };
  r.side1 = side(s1);
  r.side2 = side(s2);
  r.difference = r.side1 - r.side2;
  r.combined_se = std::sqrt(se2);
  r.within = std::abs(r.difference) <= 3 * r.combined_se + 1e-15L;
  return r;
}

// --- selftest ----------------------------------------------------------------

bool selftest(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) { log << "primes selftest FAILED: " << what << "\n"; ok = false; }
  };

  auto small = enumerate_primes(10, 30);
  expect(small.primes == std::vector<std::uint64_t>({11, 13, 17, 19, 23, 29}),
         "primes in [10, 30]");
  expect(enumerate_primes(2, 2).primes == std::vector<std::uint64_t>({2}),
         "primes in [2, 2]");
  auto upto1k = enumerate_primes(2, 1000);
  expect(upto1k.count() == 168, "168 primes below 1000");
  bool all_prime = true;
  for (auto p : upto1k.primes) all_prime &= exact::is_prime_u64(p);
  expect(all_prime, "sieve output is prime by deterministic testing");

  expect(std::abs(frac_part_ratio(10, 3, 1) - Real(1) / 3) < 1e-18L,
         "{10/3} = 1/3");
  expect(std::abs(frac_part_ratio(0x1p80L, 3, 1) - Real(1) / 3) < 1e-18L,
         "{2^80/3} = 1/3 (exact reduction)");
  expect(frac_part_ratio(-1, 7, 1) == Real(6) / 7, "{-1/7} = 6/7");

  auto I = enumerate_primes(100000, 120000);
  PhaseParams zero;
  auto s0 = exp_sum_primes(I, zero);
  expect(s0 == Complex(Real(I.count()), 0), "zero phase sums to pi(I)");
  PhaseParams ph{12345, 678, 2};
  PhaseParams phc{-12345, -678, 2};
  expect(std::abs(exp_sum_primes(I, ph) - std::conj(exp_sum_primes(I, phc))) <
             1e-12L * Real(I.count()),
         "conjugation symmetry");
  expect(std::abs(exp_sum_primes(I, ph)) <= Real(I.count()) + 1e-9L,
         "triangle inequality");
  expect(exp_sum_primes(I, ph, 4) == exp_sum_primes(I, ph, 1),
         "bit-stable across worker counts");

  // quadrature vs a brute fixed-step Simpson at modest oscillation
  PhaseParams p50{50, 0, 1};
  auto q = integral_oracle(100, 200, p50);
  Complex brute(0, 0);
  {
    const int steps = 200000;
    Real h = Real(100) / steps;
    auto f = [&](Real t) {
      Real w = p50.N / t;
      return e_of(w - std::floor(w)) / std::log(t);
    };
    for (int i = 0; i < steps; ++i) {
      Real a = 100 + i * h;
      brute += h / 6 * (f(a) + 4.0L * f(a + h / 2) + f(a + h));
    }
  }
  expect(std::abs(q.value - brute) < 1e-6L, "integral oracle matches brute Simpson");

  auto W1 = FourierWindow::constant(Complex(1, 0));
  expect(weighted_prime_sum(small, W1, ph) == Complex(Real(small.count()), 0),
         "constant window counts primes");
  auto Wx = FourierWindow::mode(1, 0);
  PhaseParams pn{777, 0, 1};
  expect(std::abs(weighted_prime_sum(upto1k, Wx, pn) -
                  exp_sum_primes(upto1k, pn)) < 1e-15L * Real(upto1k.count()),
         "single mode window = plain exponential sum");
  expect(std::abs(weighted_prime_sum(upto1k, Wx, pn) -
                  weighted_prime_sum_fourier(upto1k, Wx, pn)) <
             1e-12L * Real(upto1k.count()),
         "direct and Fourier routes agree");
  auto Wb = FourierWindow::fejer_bump(0.1L, 8);
  bool nonneg = true;
  for (int i = 0; i < 200; ++i) {
    Real v = Wb.eval(Real(i) / 200, 0).real();
    nonneg &= v > -1e-15L;
  }
  expect(nonneg, "Fejer bump is nonnegative");
  expect(Wb.c3_norm_bound() > 0, "declared norm positive");

  auto ei = exp_sum_integers(1000, 2000, PhaseParams{10, 0, 1});
  expect(ei.normalized > 0.9L, "slow phase barely cancels");
  auto ei2 = exp_sum_integers(1000, 2000, PhaseParams{10000000, 0, 1});
  expect(ei2.normalized < 0.1L, "fast phase cancels");
  expect(exp_sum_integers(1000, 2000, zero).value ==
             Complex(Real(1001), 0),
         "zero phase counts integers");

  auto vm = von_mangoldt_sum(2, 10, zero);
  expect(std::abs(vm.real() - std::log(Real(2520))) < 1e-15L &&
             vm.imag() == 0,
         "Chebyshev increment over [2, 10] is log 2520");

  auto cp = covariance_prediction(5, 10, 1, 10);
  expect(cp.classification == CovarianceClass::commensurable && cp.a == 2 &&
             cp.b == 1 && std::abs(cp.predicted - Real(1) / 24) < 1e-18L,
         "2N = M is the (2,1) rung");
  expect(covariance_prediction(5, 5, 2, 10).classification ==
             CovarianceClass::near_zero_j_ge_2,
         "j >= 2 class");
  expect(covariance_prediction(0, 5, 1, 10).classification ==
             CovarianceClass::vanishing_argument,
         "N = 0 class");
  expect(covariance_prediction(5, 5 * 3.14159265358979L, 1, 10).classification ==
             CovarianceClass::generic_small,
         "irrational ratio class");

  auto cov = covariance_estimate(I, 1, 1234567, 1234567);
  expect(std::abs(cov.estimate - Real(1) / 12) < 0.02L,
         "diagonal covariance near 1/12");
  expect(std::abs(cov.estimate) <= 0.25L + cov.standard_error,
         "covariance bounded by 1/4");

  if (ok) log << "primes selftest passed\n";
  return ok;
}

}  // namespace singmaster::primes
