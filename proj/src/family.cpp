#include "slalomlab/family.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "slalomlab/constructions.hpp"
#include "slalomlab/omega.hpp"

namespace slalomlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InputError(what + ": expected a non-negative integer, got '" + text + "'");
  try {
    return std::stoull(t);
  } catch (const std::out_of_range&) {
    throw InputError(what + ": integer out of range");
  }
}

unsigned parse_small(const std::string& text, const std::string& what, unsigned cap) {
  const auto v = parse_uint(text, what);
  if (v > cap) throw InputError(what + " exceeds the cap " + std::to_string(cap));
  return static_cast<unsigned>(v);
}

std::string param(const Section& s, const std::string& key, const std::string& fallback = "") {
  const auto it = s.find(key);
  return it == s.end() ? fallback : it->second;
}

std::string require(const Section& s, const std::string& key, const std::string& where) {
  const auto it = s.find(key);
  if (it == s.end()) throw InputError(where + ": missing key '" + key + "'");
  return it->second;
}

void allow_keys(const Section& s, const std::set<std::string>& keys, bool members, const std::string& where) {
  for (const auto& [k, v] : s) {
    if (keys.count(k) || (members && k.rfind("member.", 0) == 0 && k.size() > 7)) continue;
    throw InputError(where + ": unknown key '" + k + "'");
  }
}

LevelSet small_level(Rng& rng, unsigned j, std::uint64_t max_size) {
  const std::uint64_t cap = std::uint64_t{1} << j;
  return LevelSet(j, rng.distinct(rng.below(std::min(max_size, cap - 1) + 1), cap));
}

}  // namespace

// ---------------------------------------------------------------------------

const Member& FamilySpec::get(const std::string& id) const {
  for (const auto& m : members)
    if (m.id == id) return m;
  throw InputError("family " + name + " has no member '" + id + "'");
}

std::vector<Slalom> FamilySpec::slaloms() const {
  std::vector<Slalom> out;
  for (const auto& m : members) out.push_back(m.slalom);
  return out;
}

bool operator==(const FamilySpec& a, const FamilySpec& b) {
  if (a.name != b.name || a.kind != b.kind || a.horizon != b.horizon || a.params != b.params) return false;
  if (a.members.size() != b.members.size()) return false;
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    const auto &x = a.members[i], &y = b.members[i];
    if (x.id != y.id || !(x.slalom == y.slalom) || x.path != y.path || x.provenance != y.provenance) return false;
  }
  return true;
}

const FamilySpec& Config::family(const std::string& name) const {
  for (const auto& f : families)
    if (f.name == name) return f;
  throw InputError("no family named '" + name + "'");
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ',')) out.push_back(parse_uint(part, "list entry"));
  return out;
}

Slalom parse_levels(const std::string& text, unsigned horizon, std::optional<GeometricRule> rule) {
  Slalom s(horizon, rule);
  if (trim(text).empty()) return s;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw InputError("level entry '" + part + "' lacks ':'");
    const unsigned j = parse_small(part.substr(0, colon), "level", kMaxHorizon);
    if (j >= horizon) throw InputError("level " + std::to_string(j) + " is at or beyond the horizon");
    auto cols = parse_list(part.substr(colon + 1));
    std::sort(cols.begin(), cols.end());
    if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
      throw InputError("repeated column at level " + std::to_string(j));
    try {
      s.set_level(LevelSet(j, std::move(cols)));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("level ") + std::to_string(j) + ": " + e.what());
    }
  }
  return s;
}

std::string format_levels(const Slalom& s) {
  std::string out;
  for (unsigned j = 0; j < s.horizon(); ++j) {
    if (s[j].empty()) continue;
    if (!out.empty()) out += "; ";
    out += std::to_string(j) + ":";
    for (std::size_t i = 0; i < s[j].size(); ++i) out += (i ? "," : " ") + std::to_string(s[j].columns()[i]);
  }
  return out;
}

std::optional<GeometricRule> parse_tail(const std::string& text) {
  const auto parts = split(trim(text), ' ');
  if (parts.empty() || parts[0].empty() || parts[0] == "empty") {
    if (parts.size() > 1) throw InputError("tail 'empty' takes no arguments");
    return std::nullopt;
  }
  if (parts[0] != "geometric" || parts.size() != 3) throw InputError("tail must be 'empty' or 'geometric <first> <ratio>'");
  GeometricRule r{parse_small(parts[1], "tail first level", kMaxHorizon), 0};
  try {
    r.ratio = parse_rational(parts[2]);
  } catch (const std::exception&) {
    throw InputError("tail ratio '" + parts[2] + "' is not a rational");
  }
  if (r.ratio < 0 || r.ratio >= 1) throw InputError("tail ratio must lie in [0, 1)");
  return r;
}

std::vector<Slalom> random_bucket(Rng& rng, std::size_t size, unsigned k, unsigned horizon) {
  std::vector<LevelSet> prefix;
  for (unsigned j = 0; j < k && j < horizon; ++j) prefix.push_back(j == 0 ? LevelSet(0) : small_level(rng, j, 2));
  std::vector<Slalom> out;
  for (std::size_t i = 0; i < size; ++i) {
    std::vector<LevelSet> levels = prefix;
    for (unsigned j = k; j < horizon; ++j) {
      const std::uint64_t cap = std::min<std::uint64_t>(((std::uint64_t{1} << j) - 1) / 9, 12);
      const std::uint64_t range = std::min<std::uint64_t>(std::uint64_t{1} << j, 64);
      levels.emplace_back(j, rng.distinct(rng.below(cap + 1), range));
    }
    out.emplace_back(std::move(levels));
  }
  return out;
}

std::vector<Slalom> random_z_family(Rng& rng, std::size_t size, unsigned horizon) {
  std::map<unsigned, std::vector<std::vector<LevelSet>>> pool;
  for (unsigned k = 2; k <= 6; ++k)
    for (int i = 0; i < 3; ++i) {
      std::vector<LevelSet> prefix{LevelSet(0)};
      for (unsigned j = 1; j < k; ++j) prefix.push_back(small_level(rng, j, 3));
      pool[k].push_back(std::move(prefix));
    }
  std::vector<Slalom> out;
  for (std::size_t i = 0; i < size; ++i) {
    const unsigned k = static_cast<unsigned>(rng.between(2, 6));
    std::vector<LevelSet> levels = pool[k][rng.below(3)];
    levels.resize(std::min<std::size_t>(levels.size(), horizon));
    for (unsigned j = k; j < horizon; ++j) {
      const std::uint64_t cap =
          std::min<std::uint64_t>(((std::uint64_t{1} << j) - 1) / (2 * (j - k + 2)), 10);
      const std::uint64_t range = std::min<std::uint64_t>(std::uint64_t{1} << j, 64);
      levels.emplace_back(j, rng.distinct(rng.below(cap + 1), range));
    }
    while (levels.size() < horizon) levels.emplace_back(static_cast<unsigned>(levels.size()));
    out.emplace_back(std::move(levels));
  }
  return out;
}

namespace {

unsigned read_horizon(const Section& params, const std::string& where) {
  const unsigned h = parse_small(require(params, "horizon", where), where + " horizon", kMaxHorizon);
  if (h == 0) throw InputError(where + ": horizon must be positive");
  return h;
}

PathReal parse_path(const std::string& text, const std::string& where) {
  try {
    return PathReal(parse_list(text));
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> member_entries(const Section& params) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : params)
    if (k.rfind("member.", 0) == 0) out.emplace_back(k.substr(7), v);
  return out;
}

void add_random(FamilySpec& f, const std::vector<Slalom>& members) {
  for (std::size_t i = 0; i < members.size(); ++i) f.members.push_back({std::to_string(i), members[i], std::nullopt, "random"});
}

}  // namespace

FamilySpec build_family(const std::string& name, const Section& params, const std::vector<FamilySpec>& earlier) {
  const std::string where = "family " + name;
  FamilySpec f;
  f.name = name;
  f.params = params;
  f.kind = require(params, "kind", where);
  const auto count = [&] { return parse_small(require(params, "count", where), where + " count", 100000); };
  const auto seed = [&] { return parse_uint(require(params, "seed", where), where + " seed"); };

  if (f.kind == "table") {
    allow_keys(params, {"kind", "horizon", "levels", "tail"}, true, where);
    f.horizon = read_horizon(params, where);
    const auto rule = parse_tail(param(params, "tail"));
    const std::string prov = rule ? "rule" : "table";
    if (params.count("levels")) f.members.push_back({"0", parse_levels(params.at("levels"), f.horizon, rule), std::nullopt, prov});
    for (const auto& [id, text] : member_entries(params))
      f.members.push_back({id, parse_levels(text, f.horizon, rule), std::nullopt, prov});
    if (f.members.empty()) throw InputError(where + ": a table needs 'levels' or 'member.<id>'");
  } else if (f.kind == "graph") {
    allow_keys(params, {"kind", "horizon", "path"}, true, where);
    std::vector<std::pair<std::string, PathReal>> paths;
    if (params.count("path")) paths.emplace_back("f", parse_path(params.at("path"), where));
    for (const auto& [id, text] : member_entries(params)) paths.emplace_back(id, parse_path(text, where));
    if (paths.empty()) throw InputError(where + ": a graph needs 'path' or 'member.<id>'");
    unsigned longest = 0;
    for (const auto& [id, p] : paths) longest = std::max(longest, p.horizon());
    f.horizon = params.count("horizon") ? read_horizon(params, where) : longest;
    if (longest > f.horizon) throw InputError(where + ": a path runs past the horizon");
    if (f.horizon == 0) throw InputError(where + ": empty path");
    for (const auto& [id, p] : paths) f.members.push_back({id, graph_of(p).resized(f.horizon), p, "graph-of-path"});
  } else if (f.kind == "random-w" || f.kind == "random-z") {
    allow_keys(params, {"kind", "horizon", "count", "seed"}, false, where);
    f.horizon = read_horizon(params, where);
    Rng rng(seed());
    const auto n = count();
    if (f.kind == "random-z") {
      add_random(f, random_z_family(rng, n, f.horizon));
    } else {
      std::vector<Slalom> ms;
      for (unsigned i = 0; i < n; ++i) ms.push_back(random_sparse_slalom(rng, f.horizon, false));
      add_random(f, ms);
    }
  } else if (f.kind == "random-v") {
    allow_keys(params, {"kind", "horizon", "count", "seed", "cutoff"}, false, where);
    f.horizon = read_horizon(params, where);
    const unsigned k = parse_small(param(params, "cutoff", "4"), where + " cutoff", f.horizon);
    Rng rng(seed());
    add_random(f, random_bucket(rng, count(), k, f.horizon));
  } else if (f.kind == "block-pair") {
    allow_keys(params, {"kind", "horizon", "r", "universe"}, false, where);
    f.horizon = read_horizon(params, where);
    const unsigned r = parse_small(require(params, "r", where), where + " r", 20);
    const std::uint64_t m = params.count("universe") ? parse_uint(params.at("universe"), where + " universe")
                                                     : (std::uint64_t{1} << r);
    const BlockPair bp = BlockPair::standard(f.horizon);
    f.members.push_back({"base", bp.base, std::nullopt, "block construction"});
    f.members.push_back({"z0", bp.z0, std::nullopt, "block construction"});
    f.members.push_back({"z1", bp.z1, std::nullopt, "block construction"});
    try {
      const auto xs = independent_subsets(r, m);
      for (unsigned a = 0; a < r; ++a)
        f.members.push_back({"s" + std::to_string(a), build_S_alpha(bp, schedule_levels(xs[a], m, f.horizon)),
                             std::nullopt, "block construction"});
    } catch (const std::invalid_argument& e) {
      throw InputError(where + ": " + e.what());
    }
  } else if (f.kind == "chain") {
    allow_keys(params, {"kind", "horizon", "from", "path"}, false, where);
    f.horizon = read_horizon(params, where);
    const std::string from = require(params, "from", where);
    const FamilySpec* src = nullptr;
    for (const auto& e : earlier)
      if (e.name == from) src = &e;
    if (!src) throw InputError(where + ": 'from' names no earlier family '" + from + "'");
    const PathReal path = parse_path(require(params, "path", where), where);
    ChainStepReport r;
    try {
      r = chain_step(src->slaloms(), path, f.horizon);
    } catch (const std::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!r.ok()) throw InputError(where + ": chain step failed: " + r.failures.front());
    f.members.push_back({"a_beta", r.a_beta, std::nullopt, "chain-step output"});
  } else {
    throw InputError(where + ": unknown kind '" + f.kind + "'");
  }
  return f;
}

Config parse_config(const std::string& text) {
  std::vector<std::pair<std::string, Section>> sections;
  Section run;
  Section* current = nullptr;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  for (unsigned lineno = 1; std::getline(in, line); ++lineno) {
    const std::string at = "line " + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(at + ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!seen.insert(name).second) throw InputError(at + ": duplicate section [" + name + "]");
      if (name == "run") {
        current = &run;
      } else if (name.rfind("family.", 0) == 0 && name.size() > 7) {
        const std::string fam = name.substr(7);
        if (!std::all_of(fam.begin(), fam.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; }))
          throw InputError(at + ": bad family name '" + fam + "'");
        sections.emplace_back(fam, Section{});
        current = &sections.back().second;
      } else {
        throw InputError(at + ": unknown section [" + name + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(at + ": expected 'key = value'");
    if (!current) throw InputError(at + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError(at + ": empty key");
    if (!current->emplace(key, trim(line.substr(eq + 1))).second) throw InputError(at + ": duplicate key '" + key + "'");
  }
  Config c;
  c.run = std::move(run);
  for (const auto& [name, params] : sections) c.families.push_back(build_family(name, params, c.families));
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize(const FamilySpec& spec) {
  std::string out = "[family." + spec.name + "]\n";
  for (const auto& [k, v] : spec.params) out += k + " = " + v + "\n";
  return out;
}

FamilySpec deserialize(const std::string& text) {
  Config c = parse_config(text);
  if (c.families.size() != 1 || !c.run.empty()) throw InputError("expected exactly one family section");
  return std::move(c.families.front());
}

std::string digest(const FamilySpec& spec) {
  std::string text = serialize(spec);
  for (const auto& m : spec.members) {
    text += m.id + "=" + format_levels(m.slalom);
    if (const auto& r = m.slalom.rule()) text += " | geometric " + std::to_string(r->first_level) + " " + r->ratio.get_str();
    text += " @" + std::to_string(m.slalom.horizon()) + "\n";
  }
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

}  // namespace slalomlab
