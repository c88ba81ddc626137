#include "singmaster/census.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace fs = std::filesystem;

namespace singmaster::census {

namespace {

// --- inversion helpers -------------------------------------------------------

Nat eval(Kind kind, const Nat& n, std::uint64_t m) {
  return kind == Kind::binomial ? exact::binomial(n, m)
                                : exact::falling_factorial(n, m);
}

// --- fingerprint scan --------------------------------------------------------

constexpr std::uint64_t kP1 = 2305843009213693951ull;  // 2^61 - 1
constexpr std::uint64_t kP2 = 9223372036854775783ull;  // largest prime < 2^63
constexpr unsigned kShards = 256;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

// inverses of 1..n modulo a prime, by the classic division-free recurrence
std::vector<std::uint64_t> inverse_table(std::uint64_t n, std::uint64_t p) {
  std::vector<std::uint64_t> inv(n + 1, 0);
  if (n >= 1) inv[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i)
    inv[i] = mulmod(p - p / i, inv[p % i], p);
  return inv;
}

struct Entry {
  std::uint64_t fp1, fp2;
  std::uint32_t n, m;
};

unsigned shard_of(const Entry& e) { return e.fp1 % kShards; }

bool fp_order(const Entry& a, const Entry& b) {
  return std::tie(a.fp1, a.fp2, a.m, a.n) < std::tie(b.fp1, b.fp2, b.m, b.n);
}

// Fingerprints of one constant-m column, n in [n_lo, n_hi].  The seed is a
// length-m modular product; each step multiplies by (n+1)/(n+1-m), which is
// the exact ratio of consecutive entries for BOTH the binomial and the
// falling factorial column.
void fill_column(Kind kind, std::uint32_t m, std::uint32_t n_lo,
                 std::uint32_t n_hi, const std::vector<std::uint64_t>& inv1,
                 const std::vector<std::uint64_t>& inv2, Entry* out) {
  std::uint64_t c1 = 1, c2 = 1;
  if (kind == Kind::binomial) {
    for (std::uint32_t i = 1; i <= m; ++i) {
      std::uint64_t f = n_lo - m + i;
      c1 = mulmod(mulmod(c1, f, kP1), inv1[i], kP1);
      c2 = mulmod(mulmod(c2, f, kP2), inv2[i], kP2);
    }
  } else {
    for (std::uint32_t i = 0; i < m; ++i) {
      std::uint64_t f = n_lo - i;
      c1 = mulmod(c1, f, kP1);
      c2 = mulmod(c2, f, kP2);
    }
  }
  for (std::uint32_t n = n_lo;; ++n) {
    *out++ = Entry{c1, c2, n, m};
    if (n == n_hi) break;
    c1 = mulmod(mulmod(c1, n + 1, kP1), inv1[n + 1 - m], kP1);
    c2 = mulmod(mulmod(c2, n + 1, kP2), inv2[n + 1 - m], kP2);
  }
}

void fill_column_parallel(Kind kind, std::uint32_t m, std::uint32_t n_lo,
                          std::uint32_t n_hi,
                          const std::vector<std::uint64_t>& inv1,
                          const std::vector<std::uint64_t>& inv2, Entry* out,
                          unsigned workers) {
  std::uint64_t len = std::uint64_t(n_hi) - n_lo + 1;
  if (workers <= 1 || len < 8192) {
    fill_column(kind, m, n_lo, n_hi, inv1, inv2, out);
    return;
  }
  std::uint64_t chunk = (len + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t b = w * chunk, e = std::min(len, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      fill_column(kind, m, n_lo + std::uint32_t(b), n_lo + std::uint32_t(e - 1),
                  inv1, inv2, out + b);
    });
  }
  for (auto& t : pool) t.join();
}

// Exact verification of fingerprint-equal runs: group by true value and
// keep the genuinely repeated ones.  Fingerprints only nominate candidates;
// every emitted witness is re-evaluated here with exact arithmetic.
void harvest(std::vector<Entry>& es, const CensusConfig& cfg,
             std::vector<Record>& out) {
  std::sort(es.begin(), es.end(), fp_order);
  std::size_t i = 0;
  while (i < es.size()) {
    std::size_t j = i + 1;
    while (j < es.size() && es[j].fp1 == es[i].fp1 && es[j].fp2 == es[i].fp2)
      ++j;
    if (j - i >= 2) {
      std::map<Nat, std::vector<Witness>> groups;
      for (std::size_t k = i; k < j; ++k)
        groups[eval(cfg.kind, Nat(es[k].n), es[k].m)].push_back(
            Witness{Nat(es[k].n), Nat(es[k].m)});
      for (auto& [t, ws] : groups) {
        if (ws.size() < 2) continue;
        std::sort(ws.begin(), ws.end(),
                  [](const Witness& a, const Witness& b) { return a.m < b.m; });
        Record r;
        r.t = t;
        r.witnesses = ws;
        for (const auto& w : ws)
          r.flags.push_back(classify_region(w.n, mpz_get_ui(w.m.get_mpz_t()),
                                            cfg.region_epsilon));
        out.push_back(std::move(r));
      }
    }
    i = j;
  }
}

// --- checkpointed shard store ------------------------------------------------
//
// One file per shard; a frame per (column, shard) pair:
//   [u32 m][u32 count] count * { u64 fp1, u64 fp2, u32 n }
// Frames are appended in ascending m, so the valid prefix of a shard file
// is exactly the frames with m <= last committed column.

class ShardStore {
 public:
  explicit ShardStore(fs::path dir) : dir_(std::move(dir)) {}

  void create_fresh() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (!fs::create_directories(dir_))
      throw resource_error("census: cannot create shard directory " +
                           dir_.string());
  }

  void require_existing() const {
    if (!fs::is_directory(dir_))
      throw check_error("census resume: shard directory missing: " +
                        dir_.string());
  }

  fs::path shard_path(unsigned s) const {
    char name[16];
    std::snprintf(name, sizeof name, "shard-%03u", s);
    return dir_ / name;
  }

  // Drop any frame with m > last_m (a column that never fully committed)
  // and anything unparsable after the valid prefix.
  void trim(std::uint32_t last_m) {
    for (unsigned s = 0; s < kShards; ++s) {
      fs::path p = shard_path(s);
      std::error_code ec;
      std::uint64_t size = fs::exists(p, ec) ? fs::file_size(p, ec) : 0;
      if (size == 0) continue;
      std::ifstream in(p, std::ios::binary);
      std::uint64_t good = 0;
      while (true) {
        std::uint32_t hdr[2];
        if (!in.read(reinterpret_cast<char*>(hdr), sizeof hdr)) break;
        std::uint64_t body = std::uint64_t(hdr[1]) * 20;
        if (hdr[0] > last_m || good + sizeof hdr + body > size) break;
        in.seekg(std::streamoff(body), std::ios::cur);
        if (!in) break;
        good += sizeof hdr + body;
      }
      in.close();
      if (good < size) fs::resize_file(p, good);
    }
  }

  void open_appenders() {
    outs_.resize(kShards);
    for (unsigned s = 0; s < kShards; ++s) {
      outs_[s].open(shard_path(s), std::ios::binary | std::ios::app);
      if (!outs_[s])
        throw resource_error("census: cannot open shard file for append: " +
                             shard_path(s).string());
    }
  }

  void append_column(std::uint32_t m, const std::vector<Entry>& col) {
    // bucket preserving n order within each shard
    std::vector<std::vector<const Entry*>> buckets(kShards);
    for (const auto& e : col) buckets[shard_of(e)].push_back(&e);
    for (unsigned s = 0; s < kShards; ++s) {
      if (buckets[s].empty()) continue;
      std::uint32_t hdr[2] = {m, std::uint32_t(buckets[s].size())};
      outs_[s].write(reinterpret_cast<const char*>(hdr), sizeof hdr);
      for (const Entry* e : buckets[s]) {
        char rec[20];
        std::memcpy(rec, &e->fp1, 8);
        std::memcpy(rec + 8, &e->fp2, 8);
        std::memcpy(rec + 16, &e->n, 4);
        outs_[s].write(rec, sizeof rec);
      }
      if (!outs_[s])
        throw resource_error("census: shard write failed: " +
                             shard_path(s).string());
    }
  }

  void flush_all() {
    for (auto& o : outs_)
      if (o.is_open()) o.flush();
  }

  std::vector<Entry> load_shard(unsigned s, std::uint32_t last_m) const {
    std::vector<Entry> es;
    std::ifstream in(shard_path(s), std::ios::binary);
    if (!in) return es;
    while (true) {
      std::uint32_t hdr[2];
      if (!in.read(reinterpret_cast<char*>(hdr), sizeof hdr)) break;
      if (hdr[0] > last_m)
        throw check_error("census resume: shard frame beyond checkpoint");
      for (std::uint32_t i = 0; i < hdr[1]; ++i) {
        char rec[20];
        if (!in.read(rec, sizeof rec))
          throw check_error("census resume: truncated shard frame");
        Entry e;
        std::memcpy(&e.fp1, rec, 8);
        std::memcpy(&e.fp2, rec + 8, 8);
        std::memcpy(&e.n, rec + 16, 4);
        e.m = hdr[0];
        es.push_back(e);
      }
    }
    return es;
  }

 private:
  fs::path dir_;
  std::vector<std::ofstream> outs_;
};

struct Checkpoint {
  std::string kind;
  std::uint64_t n_max = 0, m_min = 0;
  std::uint64_t last_completed_m = 0;
};

std::optional<Checkpoint> read_checkpoint(const fs::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  Checkpoint c;
  std::string line;
  if (!std::getline(in, line) || line != "census-v1")
    throw check_error("census resume: unrecognized checkpoint header");
  auto want = [&](const std::string& key) {
    if (!std::getline(in, line) || line.rfind(key + "=", 0) != 0)
      throw check_error("census resume: malformed checkpoint field " + key);
    return line.substr(key.size() + 1);
  };
  c.kind = want("kind");
  c.n_max = std::stoull(want("n_max"));
  c.m_min = std::stoull(want("m_min"));
  c.last_completed_m = std::stoull(want("last_completed_m"));
  return c;
}

void write_checkpoint(const fs::path& p, const CensusConfig& cfg,
                      std::uint64_t last_m) {
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "census-v1\n"
        << "kind=" << kind_name(cfg.kind) << "\n"
        << "n_max=" << cfg.n_max << "\n"
        << "m_min=" << cfg.m_min << "\n"
        << "last_completed_m=" << last_m << "\n";
    if (!out) throw resource_error("census: cannot write checkpoint " + p.string());
  }
  fs::rename(tmp, p);
}

}  // namespace

// --- inversion ---------------------------------------------------------------

std::optional<Nat> invert(const Nat& t, std::uint64_t m, Kind kind) {
  if (t < 2) throw domain_error("invert: need t >= 2");
  if (m < 1) throw domain_error("invert: need m >= 1");
  if (m == 1) return t;  // C(t,1) = (t)_1 = t

  // (n-m+1)^m <= m! C(n,m) = (n)_m <= n^m brackets n within m of the m-th root
  Nat base = kind == Kind::binomial ? Nat(t * exact::factorial(m)) : t;
  Nat r;
  mpz_root(r.get_mpz_t(), base.get_mpz_t(), m);
  Nat lo = std::max(Nat(m), r);
  Nat hi = r + m;
  while (lo < hi) {
    Nat mid = (lo + hi) / 2;
    if (eval(kind, mid, m) < t)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (eval(kind, lo, m) == t) return lo;
  return std::nullopt;
}

std::vector<Witness> multiplicity(const Nat& t, Kind kind) {
  if (t < 2) throw domain_error("multiplicity: need t >= 2");
  std::vector<Witness> out;
  auto push = [&](const Nat& n, const Nat& m) {
    out.push_back(Witness{n, m});
  };

  for (std::uint64_t m = 1;; ++m) {
    // smallest value attainable at this m: C(2m, m) resp. (m+1)_m = (m+1)!/1
    if (kind == Kind::binomial) {
      if (exact::binomial(2 * m, m) > t) break;
    } else {
      if (exact::factorial(m) > t) break;
    }
    if (auto n = invert(t, m, kind)) {
      if (*n > m) {                      // representations need m < n
        push(*n, Nat(m));
        if (kind == Kind::binomial) {    // mirror C(n, m) = C(n, n - m)
          Nat mm = *n - m;
          if (mm != m) push(*n, mm);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- region classification ---------------------------------------------------

WitnessFlags classify_region(const Nat& n, std::uint64_t m, double eps) {
  if (!(eps > 0 && eps < 1))
    throw domain_error("classify_region: need epsilon in (0,1)");
  if (m < 1 || Nat(m) >= n)
    throw domain_error("classify_region: need 1 <= m < n");
  WitnessFlags f;
  f.in_left_half = Nat(2 * m) <= n;  // m <= n/2, decided in exact arithmetic
  long double boundary =
      std::exp(std::pow(exact::log_nat(n), 2.0L / 3 + (long double)eps));
  // a witness within one ulp of the boundary counts as outside (conservative)
  f.in_interior_region =
      f.in_left_half &&
      (long double)m >= std::nextafter(boundary,
                                       std::numeric_limits<long double>::max());
  return f;
}

// --- the census --------------------------------------------------------------

std::size_t run_census(const CensusConfig& cfg,
                       const std::function<void(const Record&)>& sink) {
  if (cfg.n_max < 4) throw domain_error("census: need n_max >= 4");
  if (cfg.n_max > 10'000'000)
    throw resource_error("census: n_max beyond the supported range (1e7)");
  if (!(cfg.region_epsilon > 0 && cfg.region_epsilon < 1))
    throw domain_error("census: need region_epsilon in (0,1)");
  if (cfg.m_min < 1) throw domain_error("census: need m_min >= 1");
  if (cfg.stop_after_m && cfg.checkpoint_path.empty())
    throw domain_error("census: stop_after_m requires a checkpoint path");

  const std::uint32_t n_max = std::uint32_t(cfg.n_max);
  const std::uint32_t m_end = cfg.kind == Kind::binomial ? n_max / 2 : n_max - 1;
  const std::uint32_t m_min = std::uint32_t(std::min<std::uint64_t>(
      cfg.m_min, std::uint64_t(m_end) + 1));

  const auto inv1 = inverse_table(n_max, kP1);
  const auto inv2 = inverse_table(n_max, kP2);

  const bool disk = !cfg.checkpoint_path.empty();
  ShardStore store(cfg.checkpoint_path + ".shards");
  std::uint32_t first_m = m_min;

  if (disk) {
    auto cp = read_checkpoint(cfg.checkpoint_path);
    if (cp) {
      if (cp->kind != kind_name(cfg.kind) || cp->n_max != cfg.n_max ||
          cp->m_min != cfg.m_min)
        throw check_error("census resume: checkpoint was written for a "
                          "different configuration");
      store.require_existing();
      store.trim(std::uint32_t(cp->last_completed_m));
      first_m = std::uint32_t(cp->last_completed_m) + 1;
    } else {
      store.create_fresh();
      write_checkpoint(cfg.checkpoint_path, cfg, m_min ? m_min - 1 : 0);
    }
    if (first_m <= m_end) store.open_appenders();
  }

  std::vector<Entry> bulk;  // in-memory mode accumulator
  std::vector<Entry> column;
  for (std::uint32_t m = first_m; m <= m_end; ++m) {
    std::uint32_t n_lo = cfg.kind == Kind::binomial ? 2 * m : m + 1;
    if (n_lo > n_max) break;
    column.resize(n_max - n_lo + 1);
    fill_column_parallel(cfg.kind, m, n_lo, n_max, inv1, inv2, column.data(),
                         cfg.workers);
    if (disk) {
      store.append_column(m, column);
      store.flush_all();
      write_checkpoint(cfg.checkpoint_path, cfg, m);
      if (cfg.stop_after_m && m == cfg.stop_after_m) return 0;
    } else {
      bulk.insert(bulk.end(), column.begin(), column.end());
    }
  }

  // collision detection + exact verification
  std::vector<Record> records;
  if (disk) {
    std::vector<std::vector<Record>> per_shard(kShards);
    std::atomic<unsigned> next{0};
    unsigned nw = std::max(1u, cfg.workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (unsigned s; (s = next.fetch_add(1)) < kShards;) {
          auto es = store.load_shard(s, m_end);
          harvest(es, cfg, per_shard[s]);
        }
      });
    for (auto& t : pool) t.join();
    for (auto& rs : per_shard)
      for (auto& r : rs) records.push_back(std::move(r));
  } else {
    harvest(bulk, cfg, records);
  }

  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.t < b.t; });
  for (const auto& r : records) sink(r);
  return records.size();
}

// --- parametric families -----------------------------------------------------

namespace {

Nat fib(std::uint64_t j) {
  Nat f;
  mpz_fib_ui(f.get_mpz_t(), static_cast<unsigned long>(j));
  return f;
}

// feasibility cutoff for computing a family value outright
bool small_enough(const Nat& n) { return n <= 300000; }

}  // namespace

FamilyInstance family(Family which, std::uint64_t index) {
  FamilyInstance inst;
  if (which == Family::fibonacci) {
    if (index < 1) throw domain_error("family fibonacci: need j >= 1");
    std::uint64_t j = index;
    Nat n = fib(2 * j + 2) * fib(2 * j + 3) - 1;
    Nat m = fib(2 * j) * fib(2 * j + 3) - 1;
    inst.a = {n + 1, m + 1};
    inst.b = {n, m + 2};
    inst.certified = (n + 1) * (m + 2) == (n - m) * (n - m - 1);
    inst.note = "C(n+1,m+1) = C(n,m+2) at n = F(2j+2)F(2j+3)-1, "
                "m = F(2j)F(2j+3)-1, j = " + std::to_string(j);
    if (small_enough(inst.a.n) && inst.a.m.fits_ulong_p()) {
      Nat lhs = exact::binomial(inst.a.n, mpz_get_ui(inst.a.m.get_mpz_t()));
      Nat rhs = exact::binomial(inst.b.n, mpz_get_ui(inst.b.m.get_mpz_t()));
      inst.t_evaluated = lhs == rhs;
      if (inst.t_evaluated) inst.t = lhs;
    }
    return inst;
  }
  if (which == Family::falling_simple) {
    if (index < 3) throw domain_error("family falling_simple: need a > 2");
    return family_falling_general(index, 2);
  }
  throw domain_error("family falling_general takes the (a, b) overload");
}

FamilyInstance family_falling_general(std::uint64_t a, std::uint64_t b) {
  if (!(2 <= b && b < a))
    throw domain_error("family falling_general: need 2 <= b < a");
  if (a > 100000)
    throw resource_error("family falling_general: a beyond supported range");
  FamilyInstance inst;
  Nat n = exact::falling_factorial(a, b);  // (a)_b
  inst.a = {n, n - a};
  inst.b = {n - 1, n - a + b - 1};
  // (n)_{n-a} = n!/a! and (n-1)_{n-a+b-1} = (n-1)!/(a-b)! agree iff
  // n (a-b)! = a!
  inst.certified = n * exact::factorial(a - b) == exact::factorial(a);
  inst.note = "(n)_{n-a} = (n-1)_{n-a+b-1} at n = (a)_b, a = " +
              std::to_string(a) + ", b = " + std::to_string(b);
  if (small_enough(n)) {
    std::uint64_t nu = mpz_get_ui(n.get_mpz_t());
    Nat lhs = exact::falling_factorial(Nat(nu), nu - a);
    Nat rhs = exact::falling_factorial(Nat(nu - 1), nu - a + b - 1);
    inst.t_evaluated = lhs == rhs;
    if (inst.t_evaluated) inst.t = lhs;
  }
  return inst;
}

// --- local counting ----------------------------------------------------------

LocalCount local_count(const Nat& n, std::uint64_t m, double eps, bool force) {
  if (!(eps > 0 && eps < 1))
    throw domain_error("local_count: need epsilon in (0,1)");
  if (m < 2 || Nat(m) > n / 2)
    throw domain_error("local_count: need 2 <= m <= n/2");
  LocalCount lc;
  lc.t = exact::binomial(n, m);
  long double lm = (long double)m;
  lc.window_lo = double(lm - std::pow(lm, (long double)eps / 10));

  long double log_n = exact::log_nat(n);
  if (std::log(lm) < (0.5L + (long double)eps) * log_n) {
    lc.gated = true;
    lc.gate_reason = "m below n^(1/2+eps); pass force to count anyway";
    if (!force) return lc;
  }

  std::uint64_t m_lo = lc.window_lo < 1 ? 1
        : std::uint64_t(std::ceil(lc.window_lo));
  for (std::uint64_t mm = m_lo; mm <= m; ++mm)
    if (auto nn = invert(lc.t, mm, Kind::binomial))
      if (*nn > mm) lc.witnesses.push_back(Witness{*nn, Nat(mm)});
  std::sort(lc.witnesses.begin(), lc.witnesses.end());
  return lc;
}

// --- selftest ----------------------------------------------------------------

bool selftest(std::ostream& log) {
  bool ok = true;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) { log << "census selftest FAILED: " << what << "\n"; ok = false; }
  };

  expect(invert(Nat(3003), 2, Kind::binomial) == Nat(78), "invert(3003,2)=78");
  expect(!invert(Nat(3003), 3, Kind::binomial), "invert(3003,3) empty");
  expect(invert(Nat(720), 5, Kind::falling) == Nat(6), "invert(720,5)=6");

  auto ws = multiplicity(Nat(3003), Kind::binomial);
  expect(ws.size() == 8, "multiplicity(3003) has 8 witnesses");
  auto w6 = multiplicity(Nat(6), Kind::binomial);
  expect(w6 == std::vector<Witness>(
                   {{Nat(4), Nat(2)}, {Nat(6), Nat(1)}, {Nat(6), Nat(5)}}),
         "multiplicity(6) = (4,2),(6,1),(6,5)");

  // census vs a direct quadratic oracle at toy scale
  for (Kind kind : {Kind::binomial, Kind::falling}) {
    std::uint32_t n_max = kind == Kind::binomial ? 60 : 30;
    std::map<Nat, std::vector<Witness>> oracle;
    for (std::uint32_t n = 2; n <= n_max; ++n) {
      std::uint32_t hi = kind == Kind::binomial ? n / 2 : n - 1;
      for (std::uint32_t m = 2; m <= hi; ++m)
        oracle[eval(kind, Nat(n), m)].push_back(Witness{Nat(n), Nat(m)});
    }
    std::erase_if(oracle, [](const auto& kv) { return kv.second.size() < 2; });
    std::vector<Record> got;
    CensusConfig cfg;
    cfg.kind = kind;
    cfg.n_max = n_max;
    run_census(cfg, [&](const Record& r) { got.push_back(r); });
    expect(got.size() == oracle.size(), "census record count matches oracle");
    for (const auto& r : got) {
      auto it = oracle.find(r.t);
      if (it == oracle.end()) { expect(false, "census value not in oracle"); break; }
      auto ws2 = it->second;
      std::sort(ws2.begin(), ws2.end(),
                [](const Witness& a, const Witness& b) { return a.m < b.m; });
      expect(r.witnesses == ws2, "census witnesses match oracle");
    }
  }

  auto f1 = family(Family::fibonacci, 1);
  expect(f1.certified && f1.t_evaluated && f1.t == 3003,
         "fibonacci j=1 gives 3003");
  auto fs3 = family(Family::falling_simple, 3);
  expect(fs3.certified && fs3.t_evaluated && fs3.t == 120,
         "falling_simple a=3 gives 120");
  auto fg = family_falling_general(30, 29);
  expect(fg.certified && !fg.t_evaluated, "falling_general(30,29) certified");

  auto flags = classify_region(Nat(1000), 500, 0.1);
  expect(flags.in_left_half && flags.in_interior_region,
         "(1000, 500) is left-half interior");
  auto flags2 = classify_region(Nat(1000), 3, 0.1);
  expect(flags2.in_left_half && !flags2.in_interior_region,
         "(1000, 3) is left-half edge");

  if (ok) log << "census selftest passed\n";
  return ok;
}

}  // namespace singmaster::census
