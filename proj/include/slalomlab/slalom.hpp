#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slalomlab/rational.hpp"

namespace slalomlab {

/// Largest supported horizon. Level sets are sparse sorted column lists, so
/// memory is proportional to the number of members, not to 2^n; the cap only
/// keeps column indices (< 2^n) inside 64 bits with room for the enumeration
/// bijection (2^n + i).
inline constexpr unsigned kMaxHorizon = 62;

/// The horizontal section S(n): a set of columns, each < 2^n.
class LevelSet {
 public:
  LevelSet() = default;
  explicit LevelSet(unsigned level) : level_(level) {}
  LevelSet(unsigned level, std::vector<std::uint64_t> columns);

  /// All columns [0, 2^level).
  static LevelSet full(unsigned level);
  /// Columns [lo, hi).
  static LevelSet interval(unsigned level, std::uint64_t lo, std::uint64_t hi);

  unsigned level() const { return level_; }
  std::uint64_t capacity() const { return std::uint64_t{1} << level_; }
  std::size_t size() const { return columns_.size(); }
  bool empty() const { return columns_.empty(); }
  bool saturated() const { return columns_.size() == capacity(); }
  bool contains(std::uint64_t column) const;
  std::span<const std::uint64_t> columns() const { return columns_; }

  bool subset_of(const LevelSet& other) const;
  /// Least column not in the set, if any.
  std::optional<std::uint64_t> least_missing() const;
  /// |S(n)| / 2^n.
  Rational density() const;

  LevelSet united(const LevelSet& other) const;
  LevelSet intersected(const LevelSet& other) const;
  LevelSet minus(const LevelSet& other) const;
  LevelSet with(std::uint64_t column) const;

  friend bool operator==(const LevelSet&, const LevelSet&) = default;
  friend auto operator<=>(const LevelSet&, const LevelSet&) = default;

 private:
  unsigned level_ = 0;
  std::vector<std::uint64_t> columns_;
};

/// Tail beyond the horizon: for every level n >= max(H, first_level) the
/// density |s(n)|/2^n is at most ratio^(n - first_level + 1). Levels in
/// [H, first_level) are unconstrained. Absent rule = nothing beyond H.
struct GeometricRule {
  unsigned first_level = 0;
  Rational ratio;

  friend bool operator==(const GeometricRule&, const GeometricRule&) = default;
};

/// A subset of ω×ω known exactly below its horizon.
class Slalom {
 public:
  Slalom() = default;
  explicit Slalom(unsigned horizon, std::optional<GeometricRule> rule = std::nullopt);
  Slalom(std::vector<LevelSet> levels, std::optional<GeometricRule> rule = std::nullopt);

  /// {level: columns} table; levels not listed are empty.
  static Slalom from_table(unsigned horizon, const std::map<unsigned, std::vector<std::uint64_t>>& table,
                           std::optional<GeometricRule> rule = std::nullopt);

  unsigned horizon() const { return static_cast<unsigned>(levels_.size()); }
  const std::optional<GeometricRule>& rule() const { return rule_; }
  /// Nothing beyond the horizon (no rule, or a rule that forces emptiness).
  bool exact_tail() const;

  /// Section at n. Beyond the horizon an exact tail gives the empty set;
  /// a rule tail throws.
  LevelSet at(unsigned n) const;
  const LevelSet& operator[](unsigned n) const { return levels_.at(n); }
  void set_level(LevelSet level);
  void insert(unsigned n, std::uint64_t column);

  /// Same data, horizon changed. Growing requires an exact tail.
  Slalom resized(unsigned horizon) const;
  /// Levels below `n` only (drops any rule).
  Slalom prefix(unsigned n) const;
  /// Levels >= n only.
  Slalom from_level(unsigned n) const;

  bool empty() const;
  /// Smallest horizon that still holds every member.
  unsigned support() const;

  /// Σ_{lo<=n<min(hi,H)} |s(n)|/2^n.
  Rational partial_sum(unsigned lo = 0, unsigned hi = kMaxHorizon + 1) const;
  /// Upper bound on Σ_{n>=H} |s(n)|/2^n implied by the tail (0 when exact).
  /// nullopt when the rule gives no finite bound.
  std::optional<Rational> tail_sum_bound() const;

  /// Levelwise a(n) ⊆ b(n) for every n below the larger horizon.
  bool subset_of(const Slalom& other) const;

  friend bool operator==(const Slalom& a, const Slalom& b);

 private:
  std::vector<LevelSet> levels_;
  std::optional<GeometricRule> rule_;
};

/// A real f ∈ ∏ 2^n known below its horizon.
class PathReal {
 public:
  PathReal() = default;
  explicit PathReal(std::vector<std::uint64_t> values);

  unsigned horizon() const { return static_cast<unsigned>(values_.size()); }
  std::uint64_t operator()(unsigned n) const { return values_.at(n); }
  std::span<const std::uint64_t> values() const { return values_; }

  friend bool operator==(const PathReal&, const PathReal&) = default;

 private:
  std::vector<std::uint64_t> values_;
};

enum class Ideal { S, I, W, J, V, Z };
enum class Status { Yes, No, Undetermined };

std::string to_string(Ideal ideal);
std::string to_string(Status status);

struct IdealVerdict {
  Ideal ideal;
  Status status;
  std::string certificate;
  Rational partial_sum;
  /// Saturated level for an S-failure; first unconstrained level when undetermined.
  std::optional<unsigned> level;
};

/// Verdicts for S, I, W, J, V, Z in that order.
std::vector<IdealVerdict> classify(const Slalom& s);
IdealVerdict classify(const Slalom& s, Ideal ideal);
bool in_slaloms(const Slalom& s);  // exact S-membership; throws when undetermined

struct AlmostSubset {
  Status status;
  unsigned witness = 0;  // least m with a(n) ⊆ b(n) on [m, H)
  std::vector<unsigned> violations;
};

/// a ⊆* b judged on the common horizon. Yes(m) needs the inclusion to hold
/// on a non-empty stretch [m, H); a violation at the last visible level is a No.
AlmostSubset almost_subset(const Slalom& a, const Slalom& b);

/// {(n, f(n)) : 0 < n < H}.
Slalom graph_of(const PathReal& f);

/// Levelwise union. Horizons may differ when the shorter side has an exact tail.
Slalom unite(const Slalom& a, const Slalom& b);

/// (n, i) ↦ 2^n + i, a bijection onto ω∖{0}.
std::uint64_t enum_bijection(unsigned n, std::uint64_t column);
std::pair<unsigned, std::uint64_t> enum_bijection_inverse(std::uint64_t value);

/// f(n) = least column outside s(n) for n < H.
PathReal diagonal_real(const Slalom& s);

std::vector<AlmostSubset> localizes(const Slalom& s, std::span<const PathReal> family);

/// "H=<h>; 1: 0; 3: 2,5", plus "; tail=geometric <first> <ratio>" for a rule tail.
std::string to_string(const Slalom& s);

}  // namespace slalomlab
