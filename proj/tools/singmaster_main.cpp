// singmaster: collision censuses, implicit curves, and prime-phase
// experiments for binomial and falling-factorial counts.
//
// One subcommand per library operation; all results go to the output stream
// as JSON lines, progress goes to stderr, and identical invocations produce
// byte-identical output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "singmaster/analytic.hpp"
#include "singmaster/census.hpp"
#include "singmaster/common.hpp"
#include "singmaster/exactcore.hpp"
#include "singmaster/primes.hpp"
#include "singmaster/rng.hpp"
#include "singmaster/scale.hpp"

using nlohmann::ordered_json;
using namespace singmaster;

namespace {

// JSON carries doubles; the analytic layer works in long double.  The cast
// is the published precision of the serialized numbers.
double jd(long double x) { return double(x); }

Kind parse_kind(const std::string& s) {
  if (s == "binomial") return Kind::binomial;
  if (s == "falling") return Kind::falling;
  throw domain_error("kind must be 'binomial' or 'falling'");
}

ordered_json witnesses_json(const std::vector<census::Witness>& ws) {
  ordered_json a = ordered_json::array();
  for (const auto& w : ws)
    a.push_back({exact::to_decimal(w.n), exact::to_decimal(w.m)});
  return a;
}

// --- global run state ---------------------------------------------------------

struct Globals {
  std::string output;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string precision = "";

  std::ofstream file;

  Precision prec() const {
    return precision.empty() ? default_precision() : parse_precision(precision);
  }
  std::ostream& out() {  // opened lazily: --output is only known after parsing
    if (output.empty()) return std::cout;
    if (!file.is_open()) {
      file.open(output, std::ios::binary | std::ios::trunc);
      if (!file) throw resource_error("cannot open output file: " + output);
    }
    return file;
  }
};

// Thrown by --selftest after a passing suite: unwinds past the subcommand
// callback so no operation parameters are needed.
struct SelftestPassed {};

void emit(Globals& g, const ordered_json& o) { g.out() << o.dump() << "\n"; }

// --- config file --------------------------------------------------------------
//
// Flat key=value lines with # comments.  Keys are option names without the
// leading dashes.  Command-line flags override the file: config tokens are
// spliced in *before* the user's post-subcommand flags, and every option
// takes its last occurrence.

const std::set<std::string>& subcommand_names() {
  static const std::set<std::string> names = {
      "census",     "multiplicity", "invert",     "valuation",
      "family",     "curve",        "derivative", "bounds-check",
      "integer-points", "local-count", "primes",  "expsum",
      "integral",   "covariance",   "predict-covariance", "jp-check",
      "scale",      "version"};
  return names;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (it + 1 == args.end())
        throw domain_error("--config expects a file path");
      path = *(it + 1);
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (path.empty()) return args;

  std::ifstream f(path);
  if (!f) throw resource_error("cannot open config file: " + path);
  std::vector<std::string> global_kv, sub_kv;
  static const std::set<std::string> global_keys = {"output", "seed", "workers",
                                                    "precision"};
  std::string line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw domain_error("config line missing '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw domain_error("config line with empty key");
    auto& bucket = global_keys.count(key) ? global_kv : sub_kv;
    bucket.push_back("--" + key);
    bucket.push_back(val);
  }
  // globals go first (user's own globals appear later and win via take-last);
  // subcommand keys go right after the subcommand token, before user flags
  auto sub_pos = std::find_if(args.begin(), args.end(), [](const auto& a) {
    return subcommand_names().count(a) != 0;
  });
  if (sub_pos != args.end())
    args.insert(sub_pos + 1, sub_kv.begin(), sub_kv.end());
  else if (!sub_kv.empty())
    throw domain_error("config file sets subcommand options but no subcommand given");
  args.insert(args.begin(), global_kv.begin(), global_kv.end());
  return args;
}

// --- seeded parameter draws -----------------------------------------------------
//
// Law grammar for grid sweeps and default phase arguments:
//   zero          -> 0
//   val:V         -> the constant V
//   pow:LO:HI     -> round(P^u), u uniform in [LO, HI]   (integral, so the
//                    fractional parts {N/p} reduce exactly)
long double draw_law(const std::string& law, std::uint64_t P, Rng& rng) {
  if (law == "zero") return 0;
  if (law.rfind("val:", 0) == 0) return std::stold(law.substr(4));
  if (law.rfind("pow:", 0) == 0) {
    auto rest = law.substr(4);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw domain_error("law pow:LO:HI needs two exponents");
    long double lo = std::stold(rest.substr(0, colon));
    long double hi = std::stold(rest.substr(colon + 1));
    long double u = lo + (hi - lo) * (long double)rng.uniform();
    return std::nearbyint(std::pow((long double)P, u));
  }
  throw domain_error("unknown law (want zero | val:V | pow:LO:HI): " + law);
}

// --- selftest plumbing ----------------------------------------------------------

void run_selftests(const std::string& which) {
  bool ok = true;
  if (which == "all" || which == "exact") ok &= exact::selftest(std::cerr);
  if (which == "all" || which == "analytic") ok &= analytic::selftest(std::cerr);
  if (which == "all" || which == "census") ok &= census::selftest(std::cerr);
  if (which == "all" || which == "primes") ok &= primes::selftest(std::cerr);
  if (which == "all" || which == "scale") ok &= scale::selftest(std::cerr);
  if (!ok) throw check_error("selftest failed: " + which);
}

ordered_json prediction_json(const primes::CovariancePrediction& p) {
  return ordered_json{{"class", primes::covariance_class_name(p.classification)},
                      {"a", p.a},
                      {"b", p.b},
                      {"predicted", jd(p.predicted)},
                      {"tolerance_class", p.tolerance_class},
                      {"suggested_tolerance", jd(p.suggested_tolerance)}};
}

primes::PrimeInterval interval_from(std::uint64_t P, double width,
                                    std::uint64_t lo, std::uint64_t hi) {
  if (lo || hi) return primes::enumerate_primes(lo, hi);
  if (!P) throw domain_error("give either --P/--width or --lo/--hi");
  auto w = std::uint64_t(std::llround(width * double(P)));
  return primes::enumerate_primes(P, P + w);
}

}  // namespace

int run(std::vector<std::string> args) {
  Globals g;

  CLI::App app{"collision censuses, implicit curves, and prime-phase "
               "experiments for binomial and falling-factorial counts",
               "singmaster"};
  app.option_defaults()->take_last();
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--output", g.output, "write results to this file (default stdout)");
  app.add_option("--seed", g.seed, "seed for every randomized draw");
  app.add_option("--workers", g.workers, "worker threads (results are schedule-independent)");
  app.add_option("--precision", g.precision, "double | extended (default: env SINGMASTER_PRECISION)");
  std::string config_unused;
  app.add_option("--config", config_unused,
                 "flat key=value defaults file; # comments; flags override");

  // every subcommand carries --selftest: run the owning module's invariant
  // suite instead of the operation, exit 3 on failure
  struct Sub {
    CLI::App* cmd = nullptr;
    bool selftest = false;
  };
  auto add_sub = [&](const char* name, const char* desc,
                     const std::string& module) {
    auto s = std::make_shared<Sub>();
    s->cmd = app.add_subcommand(name, desc);
    s->cmd->option_defaults()->take_last();
    s->cmd->add_flag("--selftest", s->selftest,
                     "run the module invariant suite and exit");
    s->cmd->parse_complete_callback([s, module] {
      if (s->selftest) {
        run_selftests(module);
        std::cerr << "selftest passed: " << module << "\n";
        throw SelftestPassed{};
      }
    });
    return s;
  };

  // ---- census ----
  auto census_s = add_sub("census", "exhaustive collision census up to n-max", "census");
  std::string census_kind = "binomial";
  std::string census_checkpoint;
  std::uint64_t census_nmax = 0, census_mmin = 2, census_stop = 0;
  double census_eps = 0.1;
  census_s->cmd->add_option("--kind", census_kind, "binomial | falling");
  census_s->cmd->add_option("--n-max", census_nmax, "largest n scanned");
  census_s->cmd->add_option("--m-min", census_mmin, "smallest m scanned (default 2)");
  census_s->cmd->add_option("--epsilon", census_eps, "interior-region epsilon");
  census_s->cmd->add_option("--checkpoint", census_checkpoint,
                            "checkpoint file (resume if present)");
  census_s->cmd->add_option("--stop-after-m", census_stop,
                            "stop after this column (checkpoint testing)");
  census_s->cmd->callback([&] {
    census::CensusConfig cfg;
    cfg.kind = parse_kind(census_kind);
    cfg.n_max = census_nmax;
    cfg.m_min = census_mmin;
    cfg.region_epsilon = census_eps;
    cfg.checkpoint_path = census_checkpoint;
    cfg.workers = g.workers;
    cfg.stop_after_m = census_stop;
    std::size_t count = census::run_census(cfg, [&](const census::Record& r) {
      ordered_json o{{"op", "census-record"}, {"t", exact::to_decimal(r.t)}};
      o["witnesses"] = witnesses_json(r.witnesses);
      ordered_json fl = ordered_json::array();
      for (const auto& f : r.flags)
        fl.push_back({{"left_half", f.in_left_half},
                      {"interior", f.in_interior_region}});
      o["flags"] = fl;
      emit(g, o);
    });
    emit(g, ordered_json{{"op", "census-summary"},
                         {"kind", census_kind},
                         {"n_max", census_nmax},
                         {"m_min", census_mmin},
                         {"epsilon", census_eps},
                         {"records", count}});
  });

  // ---- multiplicity ----
  auto mult_s = add_sub("multiplicity", "all representations of t", "census");
  std::string mult_t, mult_kind = "binomial";
  mult_s->cmd->add_option("--t", mult_t, "the value, as a decimal string");
  mult_s->cmd->add_option("--kind", mult_kind, "binomial | falling");
  mult_s->cmd->callback([&] {
    auto ws = census::multiplicity(exact::from_decimal(mult_t),
                                   parse_kind(mult_kind));
    emit(g, ordered_json{{"op", "multiplicity"},
                         {"t", mult_t},
                         {"kind", mult_kind},
                         {"count", ws.size()},
                         {"witnesses", witnesses_json(ws)}});
  });

  // ---- invert ----
  auto inv_s = add_sub("invert", "the n with C(n,m) = t (or (n)_m = t), if any", "census");
  std::string inv_t, inv_kind = "binomial";
  std::uint64_t inv_m = 0;
  inv_s->cmd->add_option("--t", inv_t, "the value, as a decimal string");
  inv_s->cmd->add_option("--m", inv_m, "lower index");
  inv_s->cmd->add_option("--kind", inv_kind, "binomial | falling");
  inv_s->cmd->callback([&] {
    auto n = census::invert(exact::from_decimal(inv_t), inv_m,
                            parse_kind(inv_kind));
    ordered_json o{{"op", "invert"}, {"t", inv_t}, {"m", inv_m}, {"kind", inv_kind}};
    o["n"] = n ? ordered_json(exact::to_decimal(*n)) : ordered_json(nullptr);
    emit(g, o);
  });

  // ---- valuation ----
  auto val_s = add_sub("valuation", "v_p(C(n,m)) three independent ways", "exact");
  std::string val_n, val_m;
  std::uint64_t val_p = 0;
  val_s->cmd->add_option("--n", val_n, "upper index, decimal string");
  val_s->cmd->add_option("--m", val_m, "lower index, decimal string");
  val_s->cmd->add_option("--p", val_p, "prime");
  val_s->cmd->callback([&] {
    auto r = exact::valuation_profile(exact::from_decimal(val_n),
                                      exact::from_decimal(val_m), val_p);
    emit(g, ordered_json{{"op", "valuation"},
                         {"n", val_n},
                         {"m", val_m},
                         {"p", val_p},
                         {"legendre", r.legendre_diff},
                         {"kummer", r.kummer_carries},
                         {"fractional", r.fractional_sum},
                         {"consistent", r.consistent()}});
  });

  // ---- family ----
  auto fam_s = add_sub("family", "parametric collision families with certificates", "census");
  std::string fam_name;
  std::uint64_t fam_index = 0, fam_a = 0, fam_b = 0;
  fam_s->cmd->add_option("--name", fam_name,
                         "fibonacci | falling_simple | falling_general");
  fam_s->cmd->add_option("--index", fam_index, "family index (fibonacci j, falling_simple a)");
  fam_s->cmd->add_option("--a", fam_a, "falling_general a");
  fam_s->cmd->add_option("--b", fam_b, "falling_general b");
  fam_s->cmd->callback([&] {
    census::FamilyInstance fi;
    if (fam_name == "fibonacci")
      fi = census::family(census::Family::fibonacci, fam_index);
    else if (fam_name == "falling_simple")
      fi = census::family(census::Family::falling_simple, fam_index);
    else if (fam_name == "falling_general")
      fi = census::family_falling_general(fam_a, fam_b);
    else
      throw domain_error("unknown family: " + fam_name);
    ordered_json o{{"op", "family"}, {"name", fam_name}};
    if (fam_name == "falling_general") {
      o["a"] = fam_a;
      o["b"] = fam_b;
    } else {
      o["index"] = fam_index;
    }
    o["pair1"] = {exact::to_decimal(fi.a.n), exact::to_decimal(fi.a.m)};
    o["pair2"] = {exact::to_decimal(fi.b.n), exact::to_decimal(fi.b.m)};
    o["t"] = fi.t_evaluated ? ordered_json(exact::to_decimal(fi.t))
                            : ordered_json(nullptr);
    o["t_evaluated"] = fi.t_evaluated;
    o["certified"] = fi.certified;
    o["note"] = fi.note;
    emit(g, o);
  });

  // ---- curve ----
  auto curve_s = add_sub("curve", "solve C(n,m) = t (or (n)_m = t) for real n", "analytic");
  std::string curve_t, curve_kind = "binomial";
  double curve_logt = 0, curve_m = 0;
  curve_s->cmd->add_option("--t", curve_t, "the value, decimal string");
  curve_s->cmd->add_option("--log-t", curve_logt, "alternatively, log t");
  curve_s->cmd->add_option("--m", curve_m, "lower index (real)");
  curve_s->cmd->add_option("--kind", curve_kind, "binomial | falling");
  curve_s->cmd->callback([&] {
    Kind k = parse_kind(curve_kind);
    long double n =
        curve_t.empty()
            ? analytic::solve_curve_logt(curve_logt, curve_m, k, g.prec())
            : analytic::solve_curve(exact::from_decimal(curve_t), curve_m, k,
                                    g.prec());
    ordered_json o{{"op", "curve"}, {"kind", curve_kind}, {"m", curve_m}};
    if (!curve_t.empty())
      o["t"] = curve_t;
    else
      o["log_t"] = curve_logt;
    o["n"] = jd(n);
    emit(g, o);
  });

  // ---- derivative ----
  auto der_s = add_sub("derivative", "first or second derivative of the solved curve", "analytic");
  std::string der_t, der_kind = "binomial";
  double der_logt = 0, der_m = 0;
  int der_order = 1;
  der_s->cmd->add_option("--t", der_t, "the value, decimal string");
  der_s->cmd->add_option("--log-t", der_logt, "alternatively, log t");
  der_s->cmd->add_option("--m", der_m, "lower index (real)");
  der_s->cmd->add_option("--order", der_order, "1 or 2");
  der_s->cmd->add_option("--kind", der_kind, "binomial | falling");
  der_s->cmd->callback([&] {
    Kind k = parse_kind(der_kind);
    long double v =
        der_t.empty()
            ? analytic::curve_derivative_logt(der_logt, der_m, der_order, k,
                                              g.prec())
            : analytic::curve_derivative(exact::from_decimal(der_t), der_m,
                                         der_order, k, g.prec());
    ordered_json o{{"op", "derivative"},
                   {"kind", der_kind},
                   {"m", der_m},
                   {"order", der_order}};
    if (!der_t.empty())
      o["t"] = der_t;
    else
      o["log_t"] = der_logt;
    o["value"] = jd(v);
    emit(g, o);
  });

  // ---- bounds-check ----
  auto bc_s = add_sub("bounds-check", "derivative magnitude/sign window report", "analytic");
  std::string bc_t, bc_kind = "binomial";
  double bc_logt = 0, bc_m = 0, bc_C = 50;
  bc_s->cmd->add_option("--t", bc_t, "the value, decimal string");
  bc_s->cmd->add_option("--log-t", bc_logt, "alternatively, log t");
  bc_s->cmd->add_option("--m", bc_m, "lower index (real)");
  bc_s->cmd->add_option("--C", bc_C, "window constant");
  bc_s->cmd->add_option("--kind", bc_kind, "binomial | falling");
  bc_s->cmd->callback([&] {
    long double lt = bc_t.empty() ? (long double)bc_logt
                                  : exact::log_nat(exact::from_decimal(bc_t));
    auto r = analytic::check_derivi_bounds(lt, bc_m, parse_kind(bc_kind), bc_C,
                                           g.prec());
    ordered_json items = ordered_json::array();
    for (const auto& it : r.items)
      items.push_back({{"name", it.name},
                       {"applicable", it.applicable},
                       {"pass", it.pass},
                       {"value", jd(it.value)},
                       {"lo", jd(it.lo)},
                       {"hi", jd(it.hi)}});
    emit(g, ordered_json{{"op", "bounds-check"},
                         {"kind", bc_kind},
                         {"log_t", jd(lt)},
                         {"m", bc_m},
                         {"C", bc_C},
                         {"n", jd(r.n)},
                         {"regime_ok", r.regime_ok},
                         {"all_pass", r.all_pass()},
                         {"items", items}});
  });

  // ---- integer-points ----
  auto ip_s = add_sub("integer-points", "integer points on the solved curve over [a,b]", "analytic");
  std::string ip_t, ip_kind = "binomial";
  double ip_a = 0, ip_b = 0;
  unsigned ip_k = 2, ip_samples = 2049;
  bool ip_nobrute = false;
  ip_s->cmd->add_option("--t", ip_t, "the value, decimal string");
  ip_s->cmd->add_option("--a", ip_a, "interval start (in m)");
  ip_s->cmd->add_option("--b", ip_b, "interval end");
  ip_s->cmd->add_option("--k", ip_k, "derivative order used for the bound (1 or 2)");
  ip_s->cmd->add_option("--samples", ip_samples, "hypothesis sampling density");
  ip_s->cmd->add_flag("--no-brute", ip_nobrute, "skip the exhaustive recount");
  ip_s->cmd->add_option("--kind", ip_kind, "binomial | falling");
  ip_s->cmd->callback([&] {
    Kind k = parse_kind(ip_kind);
    long double lt = exact::log_nat(exact::from_decimal(ip_t));
    Precision pr = g.prec();
    auto f = [&](long double x) {
      return analytic::solve_curve_logt(lt, x, k, pr);
    };
    auto dk = [&](long double x) {
      return analytic::curve_derivative_logt(lt, x, int(ip_k), k, pr);
    };
    auto v = analytic::integer_point_bound(f, ip_a, ip_b, ip_k, dk,
                                           !ip_nobrute, ip_samples);
    emit(g, ordered_json{{"op", "integer-points"},
                         {"kind", ip_kind},
                         {"t", ip_t},
                         {"a", ip_a},
                         {"b", ip_b},
                         {"k", v.k},
                         {"applicable", v.applicable},
                         {"scaled_min", jd(v.scaled_min)},
                         {"scaled_max", jd(v.scaled_max)},
                         {"margin", jd(v.margin)},
                         {"threshold", jd(v.threshold)},
                         {"brute_count", v.brute_count}});
  });

  // ---- local-count ----
  auto lc_s = add_sub("local-count", "windowed collision count near (n, m)", "census");
  std::string lc_n;
  std::uint64_t lc_m = 0;
  double lc_eps = 0.01;
  bool lc_force = false;
  lc_s->cmd->add_option("--n", lc_n, "upper index, decimal string");
  lc_s->cmd->add_option("--m", lc_m, "lower index");
  lc_s->cmd->add_option("--epsilon", lc_eps, "window exponent parameter");
  lc_s->cmd->add_flag("--force", lc_force, "search even outside the gated regime");
  lc_s->cmd->callback([&] {
    auto r = census::local_count(exact::from_decimal(lc_n), lc_m, lc_eps,
                                 lc_force);
    emit(g, ordered_json{{"op", "local-count"},
                         {"n", lc_n},
                         {"m", lc_m},
                         {"epsilon", lc_eps},
                         {"t", exact::to_decimal(r.t)},
                         {"count", r.witnesses.size()},
                         {"witnesses", witnesses_json(r.witnesses)},
                         {"window_lo", r.window_lo},
                         {"gated", r.gated},
                         {"gate_reason", r.gate_reason}});
  });

  // ---- primes ----
  auto pr_s = add_sub("primes", "count primes in [lo, hi]", "primes");
  std::uint64_t pr_lo = 0, pr_hi = 0;
  bool pr_list = false;
  pr_s->cmd->add_option("--lo", pr_lo, "interval start");
  pr_s->cmd->add_option("--hi", pr_hi, "interval end");
  pr_s->cmd->add_flag("--list", pr_list, "also emit the primes themselves");
  pr_s->cmd->callback([&] {
    auto I = primes::enumerate_primes(pr_lo, pr_hi);
    ordered_json o{{"op", "primes"}, {"lo", pr_lo}, {"hi", pr_hi},
                   {"count", I.count()}};
    o["first"] = I.primes.empty() ? ordered_json(nullptr)
                                  : ordered_json(I.primes.front());
    o["last"] = I.primes.empty() ? ordered_json(nullptr)
                                 : ordered_json(I.primes.back());
    if (pr_list) o["primes"] = I.primes;
    emit(g, o);
  });

  // ---- expsum ----
  auto es_s = add_sub("expsum", "exponential sum over primes (or integers) of an interval", "primes");
  std::uint64_t es_lo = 0, es_hi = 0;
  double es_N = 0, es_M = 0;
  unsigned es_j = 1;
  bool es_integers = false, es_mangoldt = false;
  std::string es_grid;
  es_s->cmd->add_option("--lo", es_lo, "interval start");
  es_s->cmd->add_option("--hi", es_hi, "interval end");
  es_s->cmd->add_option("--N", es_N, "first phase argument");
  es_s->cmd->add_option("--M", es_M, "second phase argument");
  es_s->cmd->add_option("--j", es_j, "power in the second phase term");
  es_s->cmd->add_flag("--integers", es_integers, "sum over all integers (dyadic interval)");
  es_s->cmd->add_flag("--von-mangoldt", es_mangoldt, "weight by the prime-power log measure");
  es_s->cmd->add_option("--grid", es_grid,
                        "sweep file: lines 'P width n_law m_law j draws'");
  es_s->cmd->callback([&] {
    if (!es_grid.empty()) {
      std::ifstream f(es_grid);
      if (!f) throw resource_error("cannot open grid file: " + es_grid);
      Rng rng(g.seed);
      std::string line;
      while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t P, draws;
        double width;
        std::string n_law, m_law;
        unsigned j;
        if (!(ls >> P >> width >> n_law >> m_law >> j >> draws))
          throw domain_error("grid line needs 'P width n_law m_law j draws': " + line);
        auto lo = P, hi = P + std::uint64_t(std::llround(width * double(P)));
        auto I = primes::enumerate_primes(lo, hi);
        for (std::uint64_t d = 0; d < draws; ++d) {
          primes::PhaseParams ph{draw_law(n_law, P, rng),
                                 draw_law(m_law, P, rng), j};
          auto S = primes::exp_sum_primes(I, ph, g.workers);
          auto Q = primes::integral_oracle((long double)lo, (long double)hi, ph);
          long double dev = std::abs(S - Q.value) / (long double)I.count();
          emit(g, ordered_json{{"op", "expsum-grid"},
                               {"P", P},
                               {"width", width},
                               {"j", j},
                               {"draw", d},
                               {"N", jd(ph.N)},
                               {"M", jd(ph.M)},
                               {"pi_I", I.count()},
                               {"value_re", jd(S.real())},
                               {"value_im", jd(S.imag())},
                               {"integral_re", jd(Q.value.real())},
                               {"integral_im", jd(Q.value.imag())},
                               {"deviation", jd(dev)},
                               {"meta", {{"F", jd(ph.magnitude((long double)P))},
                                         {"evaluations", Q.evaluations}}}});
        }
      }
      return;
    }
    if (!es_lo || !es_hi) throw domain_error("expsum needs --lo and --hi");
    primes::PhaseParams ph{(long double)es_N, (long double)es_M, es_j};
    ordered_json params{{"lo", es_lo}, {"hi", es_hi}, {"N", es_N},
                        {"M", es_M},   {"j", es_j}};
    if (es_integers) {
      auto r = primes::exp_sum_integers(es_lo, es_hi, ph, g.workers);
      emit(g, ordered_json{{"op", "expsum-integers"},
                           {"params", params},
                           {"value_re", jd(r.value.real())},
                           {"value_im", jd(r.value.imag())},
                           {"normalized", jd(r.normalized)},
                           {"pi_I", nullptr},
                           {"count", r.count},
                           {"meta", {{"F", jd(r.F)}}}});
    } else if (es_mangoldt) {
      auto v = primes::von_mangoldt_sum(es_lo, es_hi, ph, g.workers);
      emit(g, ordered_json{{"op", "expsum-von-mangoldt"},
                           {"params", params},
                           {"value_re", jd(v.real())},
                           {"value_im", jd(v.imag())},
                           {"pi_I", nullptr},
                           {"meta", ordered_json::object()}});
    } else {
      auto I = primes::enumerate_primes(es_lo, es_hi);
      auto v = primes::exp_sum_primes(I, ph, g.workers);
      emit(g, ordered_json{{"op", "expsum"},
                           {"params", params},
                           {"value_re", jd(v.real())},
                           {"value_im", jd(v.imag())},
                           {"normalized", jd(std::abs(v) / (long double)I.count())},
                           {"pi_I", I.count()},
                           {"meta", {{"F", jd(ph.magnitude((long double)es_lo))}}}});
    }
  });

  // ---- integral ----
  auto int_s = add_sub("integral", "oscillatory model integral over [lo, hi]", "primes");
  double int_lo = 0, int_hi = 0, int_N = 0, int_M = 0;
  unsigned int_j = 1;
  int_s->cmd->add_option("--lo", int_lo, "interval start");
  int_s->cmd->add_option("--hi", int_hi, "interval end");
  int_s->cmd->add_option("--N", int_N, "first phase argument");
  int_s->cmd->add_option("--M", int_M, "second phase argument");
  int_s->cmd->add_option("--j", int_j, "power in the second phase term");
  int_s->cmd->callback([&] {
    primes::PhaseParams ph{(long double)int_N, (long double)int_M, int_j};
    auto r = primes::integral_oracle(int_lo, int_hi, ph);
    emit(g, ordered_json{{"op", "integral"},
                         {"params", {{"lo", int_lo}, {"hi", int_hi},
                                     {"N", int_N}, {"M", int_M}, {"j", int_j}}},
                         {"value_re", jd(r.value.real())},
                         {"value_im", jd(r.value.imag())},
                         {"error_estimate", jd(r.error_estimate)},
                         {"evaluations", r.evaluations}});
  });

  // ---- covariance ----
  auto cov_s = add_sub("covariance", "covariance of fractional-part deviations over primes", "primes");
  std::uint64_t cov_P = 0, cov_lo = 0, cov_hi = 0, cov_height = 10;
  double cov_width = 0.05, cov_N = 0, cov_M = 0;
  unsigned cov_j = 1;
  std::string cov_ratio;
  cov_s->cmd->add_option("--P", cov_P, "interval start (with --width)");
  cov_s->cmd->add_option("--width", cov_width, "interval width as a fraction of P");
  cov_s->cmd->add_option("--lo", cov_lo, "explicit interval start");
  cov_s->cmd->add_option("--hi", cov_hi, "explicit interval end");
  cov_s->cmd->add_option("--N", cov_N, "first argument (0 = seeded draw)");
  cov_s->cmd->add_option("--M", cov_M, "second argument");
  cov_s->cmd->add_option("--ratio", cov_ratio,
                         "a/b: set M = (a/b) N with N a seeded multiple of b");
  cov_s->cmd->add_option("--j", cov_j, "power in the second argument");
  cov_s->cmd->add_option("--height", cov_height, "height bound for the prediction");
  cov_s->cmd->callback([&] {
    auto I = interval_from(cov_P, cov_width, cov_lo, cov_hi);
    long double N = cov_N, M = cov_M;
    Rng rng(g.seed);
    if (!cov_ratio.empty()) {
      auto slash = cov_ratio.find('/');
      if (slash == std::string::npos)
        throw domain_error("--ratio expects a/b");
      std::uint64_t a = std::stoull(cov_ratio.substr(0, slash));
      std::uint64_t b = std::stoull(cov_ratio.substr(slash + 1));
      if (!a || !b) throw domain_error("--ratio parts must be positive");
      std::uint64_t base = cov_P ? cov_P : cov_lo;
      if (N == 0) {
        long double u = 1.2L + 0.2L * (long double)rng.uniform();
        N = std::nearbyint(std::pow((long double)base, u));
      }
      std::uint64_t K = std::uint64_t(N / (long double)b);
      if (K < 1) K = 1;
      N = (long double)(K * b);
      M = (long double)(K * a);
    } else if (N == 0 && M == 0 && cov_j == 1) {
      std::uint64_t base = cov_P ? cov_P : cov_lo;
      long double u = 1.2L + 0.2L * (long double)rng.uniform();
      N = std::nearbyint(std::pow((long double)base, u));
      M = N;
    }
    auto est = primes::covariance_estimate(I, cov_j, N, M, g.workers);
    auto pred = primes::covariance_prediction(N, M, cov_j, cov_height);
    emit(g, ordered_json{{"op", "covariance"},
                         {"params", {{"lo", I.lo}, {"hi", I.hi},
                                     {"N", jd(N)}, {"M", jd(M)}, {"j", cov_j}}},
                         {"estimate", jd(est.estimate)},
                         {"stderr", jd(est.standard_error)},
                         {"pi_I", est.sample_size},
                         {"mean_x", jd(est.mean_x)},
                         {"mean_y", jd(est.mean_y)},
                         {"prediction", prediction_json(pred)}});
  });

  // ---- predict-covariance ----
  auto pc_s = add_sub("predict-covariance", "classify (N, M, j) against the covariance regimes", "primes");
  double pc_N = 0, pc_M = 0;
  unsigned pc_j = 1;
  std::uint64_t pc_height = 10;
  pc_s->cmd->add_option("--N", pc_N, "first argument");
  pc_s->cmd->add_option("--M", pc_M, "second argument");
  pc_s->cmd->add_option("--j", pc_j, "power in the second argument");
  pc_s->cmd->add_option("--height", pc_height, "height bound");
  pc_s->cmd->callback([&] {
    auto pred = primes::covariance_prediction(pc_N, pc_M, pc_j, pc_height);
    ordered_json o{{"op", "predict-covariance"},
                   {"N", pc_N}, {"M", pc_M}, {"j", pc_j}, {"height", pc_height}};
    o["prediction"] = prediction_json(pred);
    emit(g, o);
  });

  // ---- jp-check ----
  auto jp_s = add_sub("jp-check", "valuation-balance experiment for two representations of one t", "primes");
  std::string jp_n1, jp_n2;
  std::uint64_t jp_m1 = 0, jp_m2 = 0, jp_P = 0, jp_lo = 0, jp_hi = 0;
  double jp_width = 0.05, jp_N = 0;
  jp_s->cmd->add_option("--n1", jp_n1, "first upper index, decimal string");
  jp_s->cmd->add_option("--m1", jp_m1, "first lower index");
  jp_s->cmd->add_option("--n2", jp_n2, "second upper index, decimal string");
  jp_s->cmd->add_option("--m2", jp_m2, "second lower index");
  jp_s->cmd->add_option("--P", jp_P, "interval start (with --width)");
  jp_s->cmd->add_option("--width", jp_width, "interval width as a fraction of P");
  jp_s->cmd->add_option("--lo", jp_lo, "explicit interval start");
  jp_s->cmd->add_option("--hi", jp_hi, "explicit interval end");
  jp_s->cmd->add_option("--N", jp_N, "phase argument (0 = seeded draw)");
  jp_s->cmd->callback([&] {
    if (jp_n1.empty() || jp_n2.empty() || !jp_m1 || !jp_m2)
      throw domain_error("jp-check requires --n1 --m1 --n2 --m2");
    exact::BinomialSolution s1, s2;
    s1.n = exact::from_decimal(jp_n1);
    s1.m = jp_m1;
    s1.t = exact::binomial(s1.n, s1.m);
    s2.n = exact::from_decimal(jp_n2);
    s2.m = jp_m2;
    s2.t = exact::binomial(s2.n, s2.m);
    auto I = interval_from(jp_P, jp_width, jp_lo, jp_hi);
    long double N = jp_N;
    if (N == 0) {
      Rng rng(g.seed);
      std::uint64_t base = jp_P ? jp_P : jp_lo;
      long double u = 1.2L + 0.2L * (long double)rng.uniform();
      N = std::nearbyint(std::pow((long double)base, u));
    }
    auto r = primes::check_jp_balance(s1, s2, I, N, g.workers);
    emit(g, ordered_json{{"op", "jp-check"},
                         {"t", exact::to_decimal(s1.t)},
                         {"params", {{"n1", jp_n1}, {"m1", jp_m1},
                                     {"n2", jp_n2}, {"m2", jp_m2},
                                     {"lo", I.lo}, {"hi", I.hi}, {"N", jd(N)}}},
                         {"j_max", r.j_max},
                         {"side1", jd(r.side1)},
                         {"side2", jd(r.side2)},
                         {"difference", jd(r.difference)},
                         {"combined_se", jd(r.combined_se)},
                         {"within", r.within}});
  });

  // ---- scale ----
  auto sc_s = add_sub("scale", "smallest power-of-two scale with latched low-height combinations", "scale");
  std::uint64_t sc_m = 0, sc_m2 = 0, sc_n = 0, sc_n2 = 0;
  scale::ScaleParams sp;
  bool sc_suggest = false;
  double sc_eps = 0.1;
  sc_s->cmd->add_option("--m", sc_m, "m");
  sc_s->cmd->add_option("--m-prime", sc_m2, "m' < m");
  sc_s->cmd->add_option("--n", sc_n, "n >= m");
  sc_s->cmd->add_option("--n-prime", sc_n2, "n' > n");
  sc_s->cmd->add_option("--height", sp.height_bound, "coefficient height H");
  sc_s->cmd->add_option("--j-max", sp.j_max, "largest threshold power");
  sc_s->cmd->add_option("--b-latch", sp.latch_exponent, "band exponent");
  sc_s->cmd->add_option("--b-sep", sp.sep_exponent, "separation exponent");
  sc_s->cmd->add_option("--p-min", sp.p_min, "scan start (power of two)");
  sc_s->cmd->add_option("--p-max", sp.p_max, "scan end (power of two)");
  sc_s->cmd->add_option("--size-power", sp.size_power, "size cap exponent");
  sc_s->cmd->add_flag("--suggest-range", sc_suggest,
                      "also report the theoretically motivated dyadic range");
  sc_s->cmd->add_option("--eps", sc_eps, "epsilon for --suggest-range");
  sc_s->cmd->callback([&] {
    auto outcome = scale::scan_scales(sc_m, sc_m2, sc_n, sc_n2, sp);
    auto report_json = [](const scale::AxiomReport& r) {
      ordered_json o{{"size_ok", r.size_ok},
                     {"dichotomy_ok", r.dichotomy_ok},
                     {"separation_ok", r.separation_ok}};
      if (!r.dichotomy_ok)
        o["dichotomy_witness"] = {{"a", r.a},   {"a_prime", r.a2},
                                  {"b", r.b},   {"b_prime", r.b2},
                                  {"j", r.j},   {"combo", jd(r.combo)},
                                  {"band_lo", jd(r.band_lo)},
                                  {"band_hi", jd(r.band_hi)}};
      if (!r.size_ok || !r.separation_ok)
        o["offending"] = jd(r.offending);
      return o;
    };
    ordered_json o{{"op", "scale"},
                   {"m", sc_m}, {"m_prime", sc_m2}, {"n", sc_n}, {"n_prime", sc_n2}};
    if (outcome.selected) {
      o["selected"] = outcome.selected->P;
      o["report"] = report_json(outcome.selected->report);
    } else {
      o["selected"] = nullptr;
    }
    ordered_json rej = ordered_json::array();
    for (const auto& r : outcome.rejected) {
      ordered_json e{{"P", r.P}};
      e["report"] = report_json(r.report);
      rej.push_back(e);
    }
    o["rejected"] = rej;
    if (sc_suggest) {
      auto rng = scale::suggested_range(sc_n2, sc_eps);
      o["suggested_range"] = {{"lo", jd(rng.lo)},
                              {"hi", jd(rng.hi)},
                              {"first_pow2", rng.first_pow2},
                              {"last_pow2", rng.last_pow2},
                              {"nonempty", rng.nonempty}};
    }
    emit(g, o);
  });

  // ---- version ----
  auto ver_s = add_sub("version", "print the tool version", "all");
  ver_s->cmd->callback([&] { g.out() << "singmaster " << kVersion << "\n"; });

  std::reverse(args.begin(), args.end());  // CLI11 takes reversed argv
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 64;
  }
  return 0;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(apply_config_file(std::move(args)));
  } catch (const SelftestPassed&) {
    return 0;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const check_error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
