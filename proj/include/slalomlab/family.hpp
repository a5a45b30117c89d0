#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slalomlab/random.hpp"
#include "slalomlab/slalom.hpp"

namespace slalomlab {

struct Member {
  std::string id;
  Slalom slalom;
  std::optional<PathReal> path;  // set for graph members
  std::string provenance;        // table | rule | graph-of-path | random | block construction | chain-step output
};

struct FamilySpec {
  std::string name;
  std::string kind;
  unsigned horizon = 0;
  std::map<std::string, std::string> params;  // declaration, as written
  std::vector<Member> members;

  const Member& get(const std::string& id) const;
  std::vector<Slalom> slaloms() const;
  friend bool operator==(const FamilySpec& a, const FamilySpec& b);
};

using Section = std::map<std::string, std::string>;

struct Config {
  std::vector<FamilySpec> families;  // in file order
  Section run;

  const FamilySpec& family(const std::string& name) const;
};

/// Thrown for malformed input; the CLI maps it to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "2: 0,1; 3: 0" → levels of a slalom of the given horizon.
Slalom parse_levels(const std::string& text, unsigned horizon, std::optional<GeometricRule> rule = std::nullopt);
std::string format_levels(const Slalom& s);
std::optional<GeometricRule> parse_tail(const std::string& text);
std::vector<std::uint64_t> parse_list(const std::string& text);

/// Sections `[family.<name>]` and `[run]`; `#` starts a comment.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Materializes members from a declaration. `earlier` resolves `from` references.
FamilySpec build_family(const std::string& name, const Section& params, const std::vector<FamilySpec>& earlier = {});

std::string serialize(const FamilySpec& spec);
FamilySpec deserialize(const std::string& text);

/// FNV-1a 64 over the declaration and the materialized members, as 16 hex digits.
std::string digest(const FamilySpec& spec);

// Seeded generators (mt19937_64 through Rng).

/// Members sharing one prefix below k, with density < 1/9 from k on.
std::vector<Slalom> random_bucket(Rng& rng, std::size_t size, unsigned k, unsigned horizon);

/// Members of Z ∩ S. Prefixes come from a pool of three per cutoff k ∈ [2, 6]
/// and the density at level j ≥ k stays below 1/(2(j − k + 2)).
std::vector<Slalom> random_z_family(Rng& rng, std::size_t size, unsigned horizon);

}  // namespace slalomlab
