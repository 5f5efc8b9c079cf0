// Gram assembly with an on-disk cache of finished systems.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "corrbound/correlation_functionals.hpp"

namespace corrbound {

namespace {

using nlohmann::json;

std::string shift_label(const std::vector<long>& mu) {
  std::string s = "(";
  for (size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
  return s + ")";
}

void check_supported(const GramMeta& meta) {
  if (meta.param == Parametrization::poly) {
    if (meta.n != 3 || meta.m != 1) throw std::invalid_argument("polynomial parametrization needs (n, m) = (3, 1)");
  } else {
    if (meta.n < 2 || meta.n > 4) throw std::invalid_argument("shift parametrization needs n in {2, 3, 4}");
    if (!meta.trunc) throw std::invalid_argument("shift parametrization needs truncation parameters");
    meta.trunc->validate(meta.n, meta.m);
  }
  if (meta.d < 0) throw std::invalid_argument("d must be nonnegative");
}

json record(const std::string& key, const char* entry, size_t i, long j, const Scalar& v, mpfr_prec_t prec) {
  const Interval x = v.to_interval(prec);
  json r = {{"meta", key}, {"entry", entry}, {"i", i}, {"i'", j}, {"mid", x.mid_string()},
            {"rad", x.rad_string()}, {"prec", prec}};
  if (v.is_exact()) r["exact"] = to_string(v.rational());
  return r;
}

Scalar parse_value(const json& r, mpfr_prec_t prec) {
  const Interval x = Interval::from_strings(r.at("mid").get<std::string>(), r.at("rad").get<std::string>(), prec);
  if (!r.contains("exact")) return x;
  const Rational q = parse_rational(r.at("exact").get<std::string>());
  if (!x.contains(q)) throw CacheCorruptionError("exact value outside its stored enclosure");
  return q;
}

}  // namespace

std::string GramMeta::key() const {
  std::ostringstream k;
  k << "n" << n << "-m" << m << "-" << (param == Parametrization::poly ? "poly" : "shift") << "-d" << d;
  if (param == Parametrization::shift && trunc) {
    k << "-C" << trunc->C << "-s";
    for (size_t i = 0; i < trunc->shift.size(); ++i) k << (i ? "_" : "") << trunc->shift[i];
    char tol[32];
    std::snprintf(tol, sizeof tol, "%g", trunc->tail_tolerance);
    k << "-tol" << tol << "-probe" << trunc->probe_rings;
  }
  k << "-p" << prec;
  return k.str();
}

GramMeta GramMeta::from_key(const std::string& key) {
  // Fields are separated by '-' followed by a letter; a '-' before a digit
  // belongs to a value (negative shift, exponent of the tolerance).
  std::vector<std::string> fields;
  size_t start = 0;
  for (size_t i = 1; i <= key.size(); ++i)
    if (i == key.size() || (key[i] == '-' && i + 1 < key.size() && std::isalpha(static_cast<unsigned char>(key[i + 1])))) {
      fields.push_back(key.substr(start, i - start));
      start = i + 1;
    }
  auto fail = [&]() -> CacheCorruptionError { return CacheCorruptionError("malformed meta key: " + key); };
  auto number = [&](const std::string& f, size_t skip) {
    if (f.size() <= skip) throw fail();
    size_t used = 0;
    long v = 0;
    try {
      v = std::stol(f.substr(skip), &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != f.size() - skip) throw fail();
    return v;
  };
  GramMeta m;
  if (fields.size() < 5 || fields[0][0] != 'n' || fields[1][0] != 'm' || fields[3][0] != 'd') throw fail();
  m.n = static_cast<int>(number(fields[0], 1));
  m.m = static_cast<int>(number(fields[1], 1));
  if (fields[2] == "poly") {
    m.param = Parametrization::poly;
  } else if (fields[2] == "shift") {
    m.param = Parametrization::shift;
  } else {
    throw fail();
  }
  m.d = static_cast<int>(number(fields[3], 1));
  size_t next = 4;
  if (m.param == Parametrization::shift) {
    if (fields.size() != 9) throw fail();
    TruncationParams t;
    if (fields[4][0] != 'C' || fields[5][0] != 's' || fields[6].rfind("tol", 0) != 0 || fields[7].rfind("probe", 0) != 0)
      throw fail();
    t.C = number(fields[4], 1);
    std::stringstream ss(fields[5].substr(1));
    std::string item;
    while (std::getline(ss, item, '_')) t.shift.push_back(number(item, 0));
    try {
      t.tail_tolerance = std::stod(fields[6].substr(3));
    } catch (const std::exception&) {
      throw fail();
    }
    t.probe_rings = static_cast<int>(number(fields[7], 5));
    m.trunc = t;
    next = 8;
  }
  if (fields.size() != next + 1 || fields[next][0] != 'p') throw fail();
  m.prec = static_cast<mpfr_prec_t>(number(fields[next], 1));
  if (m.key() != key) throw fail();
  return m;
}

std::filesystem::path GramCache::file_for(const GramMeta& meta) const { return dir_ / (meta.key() + ".ndjson"); }

std::vector<std::string> GramCache::read_records(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw CacheCorruptionError("cannot read " + file.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json r;
    try {
      r = json::parse(line);
    } catch (const json::exception& e) {
      throw CacheCorruptionError(file.string() + ": malformed record: " + e.what());
    }
    for (const char* f : {"meta", "entry", "i", "i'", "mid", "rad", "prec"})
      if (!r.contains(f)) throw CacheCorruptionError(file.string() + ": record lacks field " + f);
    out.push_back(line);
  }
  return out;
}

std::optional<GramSystem> GramCache::load(const GramMeta& meta) const {
  const auto file = file_for(meta);
  if (!std::filesystem::exists(file)) return std::nullopt;
  const std::string key = meta.key();
  GramSystem sys;
  sys.meta = meta;
  std::map<std::pair<long, long>, Scalar> a;
  std::map<long, Scalar> b;
  try {
    for (const auto& line : read_records(file)) {
      const json r = json::parse(line);
      if (r.at("meta").get<std::string>() != key) throw CacheCorruptionError(file.string() + ": foreign meta key");
      if (r.at("prec").get<long>() != meta.prec) throw CacheCorruptionError(file.string() + ": precision mismatch");
      const long i = r.at("i").get<long>(), j = r.at("i'").get<long>();
      const std::string entry = r.at("entry").get<std::string>();
      if (entry == "A") {
        a.emplace(std::make_pair(i, j), parse_value(r, meta.prec));
      } else if (entry == "b") {
        b.emplace(i, parse_value(r, meta.prec));
      } else if (entry != "label") {
        throw CacheCorruptionError(file.string() + ": unknown entry kind " + entry);
      }
      if (entry == "label") {
        if (static_cast<long>(sys.basis_labels.size()) != i) throw CacheCorruptionError(file.string() + ": label order");
        sys.basis_labels.push_back(r.at("mid").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw CacheCorruptionError(file.string() + ": " + e.what());
  }
  const size_t nb = sys.basis_labels.size();
  if (nb == 0 || b.size() != nb) return std::nullopt;
  sys.A.assign(nb, std::vector<Scalar>(nb));
  sys.b.assign(nb, Scalar());
  for (size_t i = 0; i < nb; ++i) {
    auto it = b.find(static_cast<long>(i));
    if (it == b.end()) throw CacheCorruptionError(file.string() + ": b index out of range");
    sys.b[i] = it->second;
    for (size_t j = i; j < nb; ++j) {
      auto e = a.find({static_cast<long>(i), static_cast<long>(j)});
      if (e == a.end()) return std::nullopt;
      sys.A[i][j] = e->second;
      sys.A[j][i] = e->second;
    }
  }
  if (a.size() != nb * (nb + 1) / 2) throw CacheCorruptionError(file.string() + ": A index out of range");
  return sys;
}

void GramCache::store(const GramSystem& sys) const {
  std::filesystem::create_directories(dir_);
  const auto file = file_for(sys.meta);
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  const std::string key = sys.meta.key();
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    for (size_t i = 0; i < sys.basis_labels.size(); ++i) {
      json r = {{"meta", key}, {"entry", "label"}, {"i", i}, {"i'", -1}, {"mid", sys.basis_labels[i]},
                {"rad", "0"}, {"prec", sys.meta.prec}};
      out << r.dump() << "\n";
    }
    for (size_t i = 0; i < sys.b.size(); ++i) out << record(key, "b", i, -1, sys.b[i], sys.meta.prec).dump() << "\n";
    for (size_t i = 0; i < sys.A.size(); ++i)
      for (size_t j = i; j < sys.A.size(); ++j)
        out << record(key, "A", i, static_cast<long>(j), sys.A[i][j], sys.meta.prec).dump() << "\n";
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::vector<GramCache::Listing> GramCache::list() const {
  std::vector<Listing> out;
  if (!std::filesystem::exists(dir_)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (e.path().extension() != ".ndjson") continue;
    const auto records = read_records(e.path());
    Listing l;
    l.file = e.path();
    l.records = records.size();
    if (!records.empty()) l.meta = json::parse(records.front()).at("meta").get<std::string>();
    out.push_back(std::move(l));
  }
  std::sort(out.begin(), out.end(), [](const Listing& a, const Listing& b) { return a.file < b.file; });
  return out;
}

size_t GramCache::clear() const {
  size_t removed = 0;
  if (!std::filesystem::exists(dir_)) return removed;
  std::vector<std::filesystem::path> victims;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    const auto ext = e.path().extension();
    if (ext == ".ndjson" || ext == ".tmp") victims.push_back(e.path());
  }
  for (const auto& p : victims) removed += std::filesystem::remove(p) ? 1 : 0;
  return removed;
}

std::vector<MultiPoly> poly_basis_for(const GramMeta& meta) {
  check_supported(meta);
  if (meta.param != Parametrization::poly) throw std::invalid_argument("not a polynomial meta");
  // d bounds the degree of the products p_i p_i', so the basis itself has
  // degree d / 2.
  return invariant_poly_basis(3, meta.d / 2);
}

std::vector<ShiftOrbit> shift_basis_for(const GramMeta& meta) {
  check_supported(meta);
  if (meta.param != Parametrization::shift) throw std::invalid_argument("not a shift meta");
  return invariant_shift_basis(meta.n, meta.m, meta.d);
}

GramSystem assemble_gram(const GramMeta& meta, const GramCache* cache, int workers) {
  check_supported(meta);
  if (cache)
    if (auto hit = cache->load(meta)) return *hit;
  GramSystem sys;
  sys.meta = meta;
  if (meta.param == Parametrization::poly) {
    const auto basis = poly_basis_for(meta);
    ExactGram g = poly_gram(basis);
    for (const auto& p : basis) sys.basis_labels.push_back(p.to_string());
    for (auto& q : g.b) sys.b.emplace_back(q);
    for (auto& row : g.A) {
      std::vector<Scalar> r;
      for (auto& q : row) r.emplace_back(q);
      sys.A.push_back(std::move(r));
    }
  } else {
    const auto basis = shift_basis_for(meta);
    ShiftGram g = shift_gram(meta.n, meta.m, basis, *meta.trunc, meta.prec, workers);
    for (const auto& o : basis) sys.basis_labels.push_back(shift_label(o.representative));
    for (auto& x : g.b) sys.b.emplace_back(x);
    for (auto& row : g.A) {
      std::vector<Scalar> r;
      for (auto& x : row) r.emplace_back(x);
      sys.A.push_back(std::move(r));
    }
  }
  if (cache) cache->store(sys);
  return sys;
}

Scalar recompute_entry(const GramMeta& meta, int i, int j, int workers) {
  check_supported(meta);
  if (meta.param == Parametrization::poly) {
    const auto basis = poly_basis_for(meta);
    if (i < 0 || i >= static_cast<int>(basis.size()) || j >= static_cast<int>(basis.size()))
      throw std::out_of_range("entry index");
    if (j < 0) return b_poly({basis[static_cast<size_t>(i)]})[0];
    return nu3_poly(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
  }
  const auto basis = shift_basis_for(meta);
  if (i < 0 || i >= static_cast<int>(basis.size()) || j >= static_cast<int>(basis.size()))
    throw std::out_of_range("entry index");
  if (j < 0) return b_shift(meta.n, meta.m, {basis[static_cast<size_t>(i)]}, meta.prec)[0];
  return nu_shift(meta.n, meta.m, basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)], *meta.trunc,
                  meta.prec, workers);
}

}  // namespace corrbound
