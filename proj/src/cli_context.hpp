#pragma once

// Internal to the CLI: per-run parameter access and the dispatch table.

#include <functional>
#include <map>
#include <set>
#include <string>

#include "slalomlab/cli.hpp"

namespace slalomlab::cli {

struct Context {
  Context(const Config& c, const RunOptions& o) : config(c), options(o) {}

  const Config& config;
  const RunOptions& options;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  nlohmann::json findings = nlohmann::json::array();

  bool has(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback = "");
  std::string need(const std::string& key);
  /// --depth, --horizon and --seed take precedence over the [run] keys.
  std::uint64_t number(const std::string& key, std::uint64_t fallback, std::uint64_t lo = 0,
                       std::uint64_t hi = UINT64_MAX);
  Rational rational(const std::string& key, const std::string& fallback);
  /// Values of prefix.0, prefix.1, ... in index order.
  std::vector<std::string> indexed(const std::string& prefix);
  const FamilySpec& family(const std::string& key = "family");
  const Slalom& set(const std::string& key = "set");
  /// positive.N and negative.N generators.
  Conjunct conjunct();
  void finding(const std::string& what);
  void check_unused() const;

 private:
  std::string raw(const std::string& key);
  std::set<std::string> used_;
};

using Command = std::function<void(Context&)>;
const std::map<std::string, Command>& command_table();

std::string rat(const Rational& q);
nlohmann::json measure_json(const MeasureValue& m);
nlohmann::json point_json(const OmegaPoint& p);
std::string window_text(const WindowGen& w);
nlohmann::json slalom_json(const Slalom& s);

}  // namespace slalomlab::cli
