#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slalomlab/random.hpp"
#include "slalomlab/slalom.hpp"

namespace slalomlab {

/// Default cap for explicit enumeration. Level 5 alone holds
/// 1·3·15·255·65535 ≈ 7.5e8 points, so deeper questions go through the
/// exact counting oracle instead.
inline constexpr unsigned kEnumCap = 4;
inline constexpr unsigned kCountCap = 12;

/// (T, n): T ⊆ n×2^n with every level non-saturated. The trace horizon is n.
struct OmegaPoint {
  Slalom trace;
  unsigned level = 0;

  OmegaPoint() = default;
  OmegaPoint(Slalom trace, unsigned level);
  friend bool operator==(const OmegaPoint&, const OmegaPoint&) = default;
};

/// Bit (2^j − 1 + c) is set when c ∈ T(j). Needs level ≤ 6.
std::uint64_t trace_code(const OmegaPoint& p);
OmegaPoint point_from_code(unsigned level, std::uint64_t code);

struct SetGen {
  Slalom a;
  friend bool operator==(const SetGen&, const SetGen&) = default;
};

struct WindowGen {
  Slalom trace;  // horizon == level
  unsigned level = 0;

  WindowGen() = default;
  WindowGen(Slalom trace, unsigned level);
  friend bool operator==(const WindowGen&, const WindowGen&) = default;
};

using Generator = std::variant<SetGen, WindowGen>;

struct Conjunct {
  std::vector<Generator> positives;
  std::vector<Generator> negatives;
};

/// DNF. No disjuncts is the zero element; an empty conjunct is Ω.
struct AlgebraTerm {
  std::vector<Conjunct> disjuncts;

  static AlgebraTerm zero() { return {}; }
  static AlgebraTerm one() { return {{Conjunct{}}}; }
  static AlgebraTerm atom(Generator g) { return {{Conjunct{{std::move(g)}, {}}}}; }
  static AlgebraTerm negated(Generator g) { return {{Conjunct{{}, {std::move(g)}}}}; }
};

/// Conjunction of two conjuncts (concatenation).
Conjunct conjoin(const Conjunct& a, const Conjunct& b);
/// Conjunction of DNFs, distributed out.
AlgebraTerm conjoin(const AlgebraTerm& a, const AlgebraTerm& b);
/// Complement of a DNF, distributed out (exponential; for small terms).
AlgebraTerm complement(const AlgebraTerm& t);

bool member(const Generator& g, const OmegaPoint& p);
bool eval(const Conjunct& c, const OmegaPoint& p);
bool eval_term(const AlgebraTerm& t, const OmegaPoint& p);

/// Calls `visit` on every point of level ≤ depth in level-lex code order.
/// Stops early when `visit` returns false.
void for_each_point(unsigned depth, const std::function<bool(const OmegaPoint&)>& visit);
/// Points of exactly `level`, lazily.
void for_each_point_at(unsigned level, const std::function<bool(const OmegaPoint&)>& visit);
std::vector<OmegaPoint> enum_omega(unsigned depth, unsigned cap = kEnumCap);
/// Σ_{n≤N} ∏_{j<n}(2^{2^j}−1).
BigInt omega_count(unsigned depth);

/// Walks Ω in the fixed enumeration order, one point at a time.
class OmegaCursor {
 public:
  OmegaPoint next();
  std::uint64_t index() const { return index_; }

 private:
  unsigned level_ = 0;
  std::uint64_t code_ = 0;
  std::uint64_t index_ = 0;
};

enum class MeetKind { Infinite, Finite, Empty };
std::string to_string(MeetKind k);

struct MeetVerdict {
  MeetKind kind = MeetKind::Empty;
  /// Finite: no satisfying point lies above this level.
  std::optional<unsigned> bound;
  /// Infinite: witness(m) satisfies the conjunct for every m ≥ from.
  unsigned from = 0;
  std::function<OmegaPoint(unsigned)> witness;
  std::string reason;
};

/// Decides whether the literal set of points satisfying `c` is infinite.
/// All set generators must have exact tails.
MeetVerdict meet_infinitude(const Conjunct& c);
/// Infinite iff some disjunct is.
MeetVerdict meet_infinitude(const AlgebraTerm& t);

/// Exact number of points of exactly `level` satisfying `c`, by
/// inclusion–exclusion over the negatives and a per-level product.
BigInt point_count(const Conjunct& c, unsigned level);
/// Same for a DNF, by inclusion–exclusion over disjuncts (≤ 16).
BigInt point_count(const AlgebraTerm& t, unsigned level);
/// Σ_{m ≤ depth} point_count(c, m).
BigInt point_count_upto(const Conjunct& c, unsigned depth);

struct PiBaseElement {
  Slalom a;
  WindowGen window;

  Conjunct conjunct() const;
  friend bool operator==(const PiBaseElement&, const PiBaseElement&) = default;
};

PiBaseElement canonicalize(const Slalom& a, const WindowGen& window);
bool is_canonical(const PiBaseElement& e);

/// Canonical infinite meets T_B ∩ T_{(T,n)} for B a union of family members
/// that stays in S and (T,n) ranging over windows of level ≤ depth.
std::vector<PiBaseElement> pibase_enum(const std::vector<Slalom>& family, unsigned depth);

struct FactReport {
  unsigned pairs = 0;
  std::uint64_t points_checked = 0;
  bool union_clause = true;
  bool antitone_clause = true;
  bool infinitude_clause = true;
  std::vector<std::string> failures;

  bool ok() const { return union_clause && antitone_clause && infinitude_clause; }
};

/// Random slalom with members only below `horizon`; each level < horizon
/// keeps at most half its columns unless `allow_saturation`.
Slalom random_sparse_slalom(Rng& rng, unsigned horizon, bool allow_saturation = false);

/// Checks the three generator identities on random pairs: pointwise up to
/// kEnumCap, by exact symmetric-difference counts up to `depth`, and on
/// sampled deeper points.
FactReport fact_check(unsigned depth, unsigned trials, std::uint64_t seed);

}  // namespace slalomlab
