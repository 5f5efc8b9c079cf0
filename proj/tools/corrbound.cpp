// corrbound: certified upper bounds c_{n,m} and the resulting fractions.
//
//   corrbound bound   --n 3 --m 1 --param poly --d 10
//   corrbound table   --n 3 --m 2 --param shift --d-min 0 --d-max 2 --C 400
//   corrbound kernel2 --m 1 [--x 1/3 --y 0]
//   corrbound cache   list | verify | clear
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure (singular
// system, tail tolerance, limit expansion), 3 cache corruption or stale
// cache entries.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrbound/bound_solver.hpp"
#include "corrbound/correlation_functionals.hpp"
#include "corrbound/kernel_n2.hpp"
#include "corrbound/polytope_fourier.hpp"

using namespace corrbound;
using nlohmann::json;

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised after the cache verification has reported its findings.
class StaleCacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 3, m = 1;
  std::string param = "poly";
  int d = 0;
  long C = 0;  // 0: default for n
  std::vector<long> shift;
  double tail_tolerance = 1e-3;
  int probe_rings = 0;
  int prec = 256;
  std::string output = "text";
  std::string cache_dir;
  bool no_cache = false;
  int workers = 0;
};

long default_C(int n) { return n == 4 ? 25 : 200; }

std::string resolve_cache_dir(const RunConfig& cfg) {
  if (!cfg.cache_dir.empty()) return cfg.cache_dir;
  if (const char* env = std::getenv("CORRBOUND_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/corrbound";
  return ".corrbound-cache";
}

GramMeta meta_for(const RunConfig& cfg, int d) {
  GramMeta meta;
  meta.n = cfg.n;
  meta.m = cfg.m;
  meta.d = d;
  meta.prec = cfg.prec;
  if (cfg.prec < 64) throw ConfigError("precision must be at least 64 bits");
  if (cfg.param == "poly") {
    if (cfg.n != 3 || cfg.m != 1) throw ConfigError("the polynomial parametrization needs --n 3 --m 1");
    meta.param = Parametrization::poly;
  } else if (cfg.param == "shift") {
    if (cfg.n < 2 || cfg.n > 4) throw ConfigError("the shift parametrization needs n in {2, 3, 4}");
    if (cfg.m < 1) throw ConfigError("m must be positive");
    meta.param = Parametrization::shift;
    try {
      meta.trunc = TruncationParams::make(cfg.n, cfg.m, cfg.C > 0 ? cfg.C : default_C(cfg.n), cfg.shift,
                                          cfg.tail_tolerance);
    } catch (const InvalidShiftError& e) {
      throw ConfigError(e.what());
    }
    meta.trunc->probe_rings = cfg.probe_rings;
  } else {
    throw ConfigError("--param must be poly or shift");
  }
  if (d < 0) throw ConfigError("d must be nonnegative");
  return meta;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--n", cfg.n, "Number of coincident zeros n")->check(CLI::Range(2, 4));
  cmd->add_option("--m", cfg.m, "Multiplicity parameter m")->check(CLI::PositiveNumber);
  cmd->add_option("--param", cfg.param, "poly or shift")->check(CLI::IsMember({"poly", "shift"}));
  cmd->add_option("--C", cfg.C, "Truncation box half-width (shift path; default 200, or 25 for n = 4)");
  cmd->add_option("--shift", cfg.shift, "Shift numerators k_i of s_i = k_i/(m(m+1)n)")->delimiter(',');
  cmd->add_option("--tail-tolerance", cfg.tail_tolerance, "Relative tolerance on the tail uncertainty");
  cmd->add_option("--probe-rings", cfg.probe_rings, "Rings sampled at 2C, 4C (8C) for the tail fit (0: one period)");
  cmd->add_option("--precision", cfg.prec, "Working precision in bits");
  cmd->add_option("--output", cfg.output, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--cache-dir", cfg.cache_dir, "Gram cache directory (default $CORRBOUND_CACHE_DIR)");
  cmd->add_flag("--no-cache", cfg.no_cache, "Neither read nor write the Gram cache");
  cmd->add_option("--workers", cfg.workers, "Worker threads for lattice sums (0: all cores)");
}

struct Row {
  int d = 0;
  size_t basis = 0;
  std::optional<BoundCertificate> cert;
  std::string error;
  double seconds = 0;
};

Row run_bound(const RunConfig& cfg, int d) {
  Row row;
  row.d = d;
  const GramMeta meta = meta_for(cfg, d);
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<GramCache> cache;
  if (!cfg.no_cache) cache.emplace(resolve_cache_dir(cfg));
  const GramSystem sys = assemble_gram(meta, cache ? &*cache : nullptr, cfg.workers);
  row.basis = sys.b.size();
  row.cert = optimal_bound(sys);
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s;
  return o.str();
}

std::string rad_of(const Scalar& x, mpfr_prec_t prec) {
  if (x.is_exact()) return "0";
  std::ostringstream o;
  o.precision(3);
  o << x.to_interval(prec).rad();
  return o.str();
}

std::string dropped_list(const std::vector<size_t>& dropped) {
  std::string s;
  for (size_t i : dropped) s += (s.empty() ? "" : " ") + std::to_string(i);
  return s.empty() ? "none" : s;
}

const char* kCsvHeader = "n,m,param,d,basis,bound_upper,bound_mid,bound_rad,fraction_lower,dropped,seconds,error";

std::string csv_row(const RunConfig& cfg, const Row& r) {
  std::ostringstream o;
  o << cfg.n << "," << cfg.m << "," << cfg.param << "," << r.d << "," << r.basis << ",";
  if (r.cert) {
    const auto& c = *r.cert;
    o << decimal_up(c.bound, 9) << "," << c.bound.to_interval(cfg.prec).mid_string() << ","
      << rad_of(c.bound, cfg.prec) << "," << decimal_down(c.fraction, 4) << "," << dropped_list(c.dropped) << ","
      << fmt_seconds(r.seconds) << ",";
  } else {
    o << ",,,,," << fmt_seconds(r.seconds) << ",\"" << r.error << "\"";
  }
  return o.str();
}

json row_json(const Row& r) {
  json j;
  if (r.cert) {
    j = json::parse(certificate_json(*r.cert));
  } else {
    j = {{"d", r.d}, {"error", r.error}};
  }
  j["timing"] = {{"seconds", r.seconds}};
  return j;
}

int cmd_bound(const RunConfig& cfg, int d) {
  const Row r = run_bound(cfg, d);
  const auto& c = *r.cert;
  if (cfg.output == "json") {
    std::cout << row_json(r).dump(2) << "\n";
  } else if (cfg.output == "csv") {
    std::cout << kCsvHeader << "\n" << csv_row(cfg, r) << "\n";
  } else {
    std::cout << "c_{" << cfg.n << "," << cfg.m << "} <= " << decimal_up(c.bound, 9) << "\n"
              << "  parametrization " << cfg.param << ", d = " << d << ", basis size " << r.basis;
    if (c.meta.trunc) std::cout << ", C = " << c.meta.trunc->C;
    std::cout << "\n  enclosure " << c.bound.to_string(20);
    if (c.bound.is_exact()) std::cout << " (exact rational)";
    std::cout << "\n  fraction >= " << decimal_down(c.fraction, 4) << "  (1 - c/" << (cfg.n - 1) << "!)\n"
              << "  dropped basis elements: " << dropped_list(c.dropped) << "\n"
              << "  time " << fmt_seconds(r.seconds) << " s\n";
  }
  return 0;
}

int cmd_table(const RunConfig& cfg, int d_min, int d_max, int d_step) {
  if (d_step <= 0) throw ConfigError("--d-step must be positive");
  meta_for(cfg, std::max(d_min, 0));  // configuration errors abort the whole table
  std::vector<Row> rows;
  if (cfg.output == "text")
    std::cout << "n=" << cfg.n << " m=" << cfg.m << " " << cfg.param << "\n"
              << "   d  basis  bound (upper)   radius      fraction >=  seconds\n";
  if (cfg.output == "csv") std::cout << kCsvHeader << "\n";
  for (int d = d_min; d <= d_max; d += d_step) {
    Row r;
    try {
      r = run_bound(cfg, d);
    } catch (const CacheCorruptionError&) {
      throw;
    } catch (const std::exception& e) {
      r.d = d;
      r.error = e.what();
    }
    if (cfg.output == "text") {
      char line[256];
      if (r.cert) {
        std::snprintf(line, sizeof line, "%4d  %5zu  %s  %-10s  %-11s  %s", d, r.basis,
                      decimal_up(r.cert->bound, 9).c_str(), rad_of(r.cert->bound, cfg.prec).c_str(),
                      decimal_down(r.cert->fraction, 4).c_str(), fmt_seconds(r.seconds).c_str());
      } else {
        std::snprintf(line, sizeof line, "%4d  failed: %s", d, r.error.c_str());
      }
      std::cout << line << std::endl;
    } else if (cfg.output == "csv") {
      std::cout << csv_row(cfg, r) << std::endl;
    }
    rows.push_back(std::move(r));
  }
  if (cfg.output == "json") {
    json out = json::array();
    for (const auto& r : rows) out.push_back(row_json(r));
    std::cout << out.dump(2) << "\n";
  }
  for (const auto& r : rows)
    if (!r.cert) return 2;
  return 0;
}

int cmd_kernel2(int m, const std::string& xs, const std::string& ys, int prec, int digits, const std::string& output) {
  if (m < 1) throw ConfigError("m must be positive");
  if (xs.empty() != ys.empty()) throw ConfigError("--x and --y go together");
  const Interval k = k00(m, prec);
  const Interval c = c2(m, prec);
  const Scalar frac = fraction_bound(2, Scalar(c), prec);
  std::optional<Interval> kxy;
  if (!xs.empty()) {
    Rational x, y;
    try {
      x = parse_rational(xs);
      y = parse_rational(ys);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    kxy = kernel2_eval(m, x, y, prec);
  }
  const char* caveat = "better n = 2 bounds are known from other methods";
  if (output == "json") {
    json j = {{"m", m},
              {"precision", prec},
              {"K00", {{"mid", k.mid_string()}, {"rad", k.rad_string()}}},
              {"c2", {{"mid", c.mid_string()}, {"rad", c.rad_string()}}},
              {"fraction_lower", decimal_down(frac, 4)},
              {"note", caveat}};
    if (kxy) j["K"] = {{"x", xs}, {"y", ys}, {"mid", kxy->mid_string()}, {"rad", kxy->rad_string()}};
    std::cout << j.dump(2) << "\n";
  } else if (output == "csv") {
    std::cout << "m,K00,c2,fraction_lower,x,y,K\n"
              << m << "," << k.to_string(digits).substr(0, k.to_string(digits).find(' ')) << ","
              << c.to_string(digits).substr(0, c.to_string(digits).find(' ')) << "," << decimal_down(frac, 4) << ","
              << xs << "," << ys << ","
              << (kxy ? kxy->to_string(digits).substr(0, kxy->to_string(digits).find(' ')) : "") << "\n";
  } else {
    std::cout << "K(0,0)   = " << k.to_string(digits) << "\n"
              << "c_{2," << m << "}   = " << c.to_string(digits) << "\n"
              << "fraction >= " << decimal_down(frac, 4) << "  (1 - c_{2," << m << "}; " << caveat << ")\n";
    if (kxy) std::cout << "K(" << xs << "," << ys << ") = " << kxy->to_string(digits) << "\n";
  }
  return 0;
}

int cmd_cache(const std::string& action, const RunConfig& cfg, double fraction, unsigned seed) {
  GramCache cache(resolve_cache_dir(cfg));
  if (action == "clear") {
    const size_t n = cache.clear();
    std::cout << "removed " << n << " cache file" << (n == 1 ? "" : "s") << " from " << cache.dir().string() << "\n";
    return 0;
  }
  if (!std::filesystem::exists(cache.dir())) throw ConfigError("cache directory " + cache.dir().string() + " does not exist");
  const auto listing = cache.list();
  if (action == "list") {
    size_t total = 0;
    for (const auto& l : listing) {
      std::cout << l.records << "\t" << l.meta << "\n";
      total += l.records;
    }
    std::cout << total << " records in " << listing.size() << " file" << (listing.size() == 1 ? "" : "s") << "\n";
    return 0;
  }
  // verify: recompute a random sample of entries at the stored precision.
  std::mt19937 rng(seed);
  size_t checked = 0, stale = 0;
  for (const auto& l : listing) {
    const GramMeta meta = GramMeta::from_key(l.meta);
    const auto sys = cache.load(meta);
    if (!sys) {
      std::cout << "incomplete\t" << l.meta << "\n";
      ++stale;
      continue;
    }
    std::vector<std::pair<int, int>> entries;
    const int nb = static_cast<int>(sys->b.size());
    for (int i = 0; i < nb; ++i) {
      entries.emplace_back(i, -1);
      for (int j = i; j < nb; ++j) entries.emplace_back(i, j);
    }
    std::shuffle(entries.begin(), entries.end(), rng);
    const size_t take = std::max<size_t>(1, static_cast<size_t>(fraction * static_cast<double>(entries.size()) + 0.999));
    for (size_t e = 0; e < std::min(take, entries.size()); ++e) {
      const auto [i, j] = entries[e];
      const Scalar stored = j < 0 ? sys->b[static_cast<size_t>(i)] : sys->A[static_cast<size_t>(i)][static_cast<size_t>(j)];
      const Scalar fresh = recompute_entry(meta, i, j, cfg.workers);
      bool ok;
      if (stored.is_exact() && fresh.is_exact()) {
        ok = stored.rational() == fresh.rational();
      } else {
        ok = stored.to_interval(meta.prec).overlaps(fresh.to_interval(meta.prec));
      }
      ++checked;
      if (!ok) {
        ++stale;
        std::cout << "stale\t" << l.meta << "\t" << (j < 0 ? "b" : "A") << "[" << i << (j < 0 ? "" : "," + std::to_string(j))
                  << "]\n";
      }
    }
  }
  std::cout << "verified " << checked << " entries, " << stale << " stale\n";
  if (stale) throw StaleCacheError(std::to_string(stale) + " stale cache entries");
  return 0;
}

int report_error(const std::string& kind, const std::string& message, int code, bool as_json) {
  if (as_json) {
    std::cout << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump(2) << "\n";
  }
  std::cerr << "error (" << kind << "): " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified upper bounds on c_{n,m} for coincident-zero statistics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* bound = app.add_subcommand("bound", "Certified bound for one configuration");
  add_common(bound, cfg);
  int d = 0;
  bound->add_option("--d", d, "Degree of the products (poly) or shift radius |mu|_1 <= d (shift)");

  auto* table = app.add_subcommand("table", "Bounds over a range of d");
  add_common(table, cfg);
  int d_min = 0, d_max = -1, d_step = 1;
  table->add_option("--d-min", d_min, "First d");
  table->add_option("--d-max", d_max, "Last d (empty range prints only the header)");
  table->add_option("--d-step", d_step, "Step in d");

  auto* kernel = app.add_subcommand("kernel2", "Closed-form n = 2 kernel");
  int km = 1, kdigits = 30, kprec = 256;
  std::string kx, ky, kout = "text";
  kernel->add_option("--m", km, "m")->check(CLI::PositiveNumber);
  kernel->add_option("--x", kx, "x (rational, e.g. 1/3 or 0.25)");
  kernel->add_option("--y", ky, "y");
  kernel->add_option("--digits", kdigits, "Significant digits printed");
  kernel->add_option("--precision", kprec, "Working precision in bits");
  kernel->add_option("--output", kout, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

  auto* cache = app.add_subcommand("cache", "Inspect or maintain the Gram cache");
  std::string action;
  double sample = 0.05;
  unsigned seed = 1;
  cache->add_option("action", action, "list, verify or clear")->required()->check(CLI::IsMember({"list", "verify", "clear"}));
  cache->add_option("--cache-dir", cfg.cache_dir, "Gram cache directory (default $CORRBOUND_CACHE_DIR)");
  cache->add_option("--sample", sample, "Fraction of entries verify recomputes")->check(CLI::Range(0.0, 1.0));
  cache->add_option("--seed", seed, "Sampling seed for verify");
  cache->add_option("--workers", cfg.workers, "Worker threads for recomputation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const bool as_json = (cfg.output == "json" && !kernel->parsed()) || (kernel->parsed() && kout == "json");
  try {
    if (bound->parsed()) return cmd_bound(cfg, d);
    if (table->parsed()) return cmd_table(cfg, d_min, d_max, d_step);
    if (kernel->parsed()) return cmd_kernel2(km, kx, ky, kprec, kdigits, kout);
    if (cache->parsed()) return cmd_cache(action, cfg, sample, seed);
  } catch (const ConfigError& e) {
    return report_error("config", e.what(), 1, as_json);
  } catch (const std::invalid_argument& e) {
    return report_error("config", e.what(), 1, as_json);
  } catch (const CacheCorruptionError& e) {
    return report_error("cache", e.what(), 3, as_json);
  } catch (const StaleCacheError& e) {
    return report_error("stale-cache", e.what(), 3, as_json);
  } catch (const TailToleranceError& e) {
    return report_error("tail-tolerance", e.what(), 2, as_json);
  } catch (const SingularSystemError& e) {
    return report_error("singular-system", e.what(), 2, as_json);
  } catch (const NormalizationError& e) {
    return report_error("normalization", e.what(), 2, as_json);
  } catch (const NonCancellationError& e) {
    return report_error("limit", e.what(), 2, as_json);
  } catch (const ExpansionCapError& e) {
    return report_error("limit", e.what(), 2, as_json);
  } catch (const std::exception& e) {
    return report_error("numeric", e.what(), 2, as_json);
  }
  return 1;
}
