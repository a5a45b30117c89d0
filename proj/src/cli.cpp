#include "slalomlab/cli.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "cli_context.hpp"

namespace slalomlab {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

const Member& resolve_member(const Config& config, const std::string& ref) {
  const std::string r = trim(ref);
  const auto dot = r.find('.');
  if (dot == std::string::npos) {
    const auto& f = config.family(r);
    if (f.members.size() != 1) throw InputError("reference '" + r + "' needs a member id (family has " +
                                                std::to_string(f.members.size()) + " members)");
    return f.members.front();
  }
  return config.family(r.substr(0, dot)).get(r.substr(dot + 1));
}

WindowGen parse_window(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("window", 0) != 0) throw InputError("expected 'window <levels> @ n', got '" + t + "'");
  const auto at = t.rfind('@');
  if (at == std::string::npos) throw InputError("window '" + t + "' lacks '@ n'");
  const std::string level_text = trim(t.substr(at + 1));
  if (level_text.empty() || level_text.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("window level '" + level_text + "' is not a number");
  const unsigned n = static_cast<unsigned>(std::stoul(level_text));
  if (n > kMaxHorizon) throw InputError("window level exceeds the cap");
  try {
    return WindowGen(parse_levels(t.substr(6, at - 6), n), n);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("window: ") + e.what());
  }
}

Generator parse_generator(const Config& config, const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("window", 0) == 0) return parse_window(t);
  return SetGen{resolve_member(config, t).slalom};
}

SlalomName parse_name(const std::string& text) {
  const std::string t = trim(text);
  if (t == "generic") return SlalomName::generic();
  const WindowGen w = parse_window(t);
  return SlalomName{w.trace, w.level};
}

std::string report_text(const json& report) { return report.dump(2) + "\n"; }

namespace cli {

std::string Context::raw(const std::string& key) {
  used_.insert(key);
  const auto it = config.run.find(key);
  return it == config.run.end() ? std::string() : it->second;
}

bool Context::has(const std::string& key) const { return config.run.count(key) > 0; }

std::string Context::text(const std::string& key, const std::string& fallback) {
  std::string v = raw(key);
  if (v.empty()) v = fallback;
  params[key] = v;
  return v;
}

std::string Context::need(const std::string& key) {
  const std::string v = raw(key);
  if (v.empty()) throw InputError("[run] needs '" + key + "' for this subcommand");
  params[key] = v;
  return v;
}

std::uint64_t Context::number(const std::string& key, std::uint64_t fallback, std::uint64_t lo, std::uint64_t hi) {
  std::optional<std::uint64_t> v;
  if (key == "depth" && options.depth) v = *options.depth;
  if (key == "horizon" && options.horizon) v = *options.horizon;
  if (key == "seed" && options.seed) v = *options.seed;
  const std::string r = raw(key);
  if (!v && !r.empty()) {
    if (r.find_first_not_of("0123456789") != std::string::npos || r.size() > 19)
      throw InputError("'" + key + "' must be a non-negative integer, got '" + r + "'");
    v = std::stoull(r);
  }
  if (!v) v = fallback;
  if (*v < lo || *v > hi)
    throw InputError("'" + key + "' = " + std::to_string(*v) + " is outside [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  params[key] = *v;
  return *v;
}

Rational Context::rational(const std::string& key, const std::string& fallback) {
  const std::string t = text(key, fallback);
  try {
    return parse_rational(t);
  } catch (const std::exception&) {
    throw InputError("'" + key + "' is not a rational: '" + t + "'");
  }
}

std::vector<std::string> Context::indexed(const std::string& prefix) {
  std::map<unsigned, std::string> by_index;
  for (const auto& [k, v] : config.run) {
    if (k.rfind(prefix + ".", 0) != 0) continue;
    const std::string idx = k.substr(prefix.size() + 1);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos || idx.size() > 6)
      throw InputError("key '" + k + "' needs a numeric index");
    used_.insert(k);
    params[k] = v;
    by_index[static_cast<unsigned>(std::stoul(idx))] = v;
  }
  std::vector<std::string> out;
  for (auto& [i, v] : by_index) out.push_back(v);
  return out;
}

const FamilySpec& Context::family(const std::string& key) { return config.family(need(key)); }

const Slalom& Context::set(const std::string& key) { return resolve_member(config, need(key)).slalom; }

Conjunct Context::conjunct() {
  Conjunct c;
  for (const auto& g : indexed("positive")) c.positives.push_back(parse_generator(config, g));
  for (const auto& g : indexed("negative")) c.negatives.push_back(parse_generator(config, g));
  return c;
}

void Context::finding(const std::string& what) { findings.push_back(what); }

void Context::check_unused() const {
  for (const auto& [k, v] : config.run)
    if (!used_.count(k)) throw InputError("[run] key '" + k + "' is not used by this subcommand");
}

std::string rat(const Rational& q) { return to_fraction_string(q); }

json measure_json(const MeasureValue& m) {
  return {{"value", rat(m.value)}, {"lo", rat(m.lo)}, {"hi", rat(m.hi)}, {"exact", m.is_exact()}};
}

json point_json(const OmegaPoint& p) { return {{"level", p.level}, {"trace", to_string(p.trace)}}; }

std::string window_text(const WindowGen& w) {
  const std::string levels = format_levels(w.trace);
  return "window " + (levels.empty() ? "" : levels + " ") + "@ " + std::to_string(w.level);
}

json slalom_json(const Slalom& s) { return to_string(s); }

}  // namespace cli

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : cli::command_table()) out.push_back(name);
    return out;
  }();
  return names;
}

RunResult run_command(const std::string& command, const Config& config, const RunOptions& options) {
  RunResult out;
  const auto& table = cli::command_table();
  const auto it = table.find(command);
  if (it == table.end()) {
    out.exit_code = kExitInputError;
    out.error = "unknown subcommand '" + command + "'";
    return out;
  }
  const auto start = std::chrono::steady_clock::now();
  cli::Context ctx{config, options};
  try {
    it->second(ctx);
    ctx.check_unused();
  } catch (const InputError& e) {
    out.exit_code = kExitInputError;
    out.error = e.what();
    return out;
  } catch (const std::invalid_argument& e) {
    out.exit_code = kExitInputError;
    out.error = e.what();
    return out;
  } catch (const std::domain_error& e) {
    out.exit_code = kExitInputError;
    out.error = e.what();
    return out;
  } catch (const std::out_of_range& e) {
    out.exit_code = kExitInputError;
    out.error = e.what();
    return out;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

  json inputs = json::object();
  for (const auto& f : config.families) inputs[f.name] = digest(f);
  out.report = {{"version", kReportVersion}, {"command", command},       {"inputs", inputs},
                {"params", ctx.params},      {"result", ctx.result},     {"findings", ctx.findings},
                {"runtime_ms", elapsed.count()}};
  out.exit_code = ctx.findings.empty() ? kExitOk : kExitFinding;
  return out;
}

}  // namespace slalomlab
