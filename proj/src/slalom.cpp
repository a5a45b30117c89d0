#include "slalomlab/slalom.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <stdexcept>

namespace slalomlab {

namespace {

void check_level(unsigned level) {
  if (level > kMaxHorizon) throw std::invalid_argument("level " + std::to_string(level) + " exceeds cap");
}

void check_rule(const std::optional<GeometricRule>& rule) {
  if (rule && (rule->ratio < 0 || rule->ratio >= 1))
    throw std::invalid_argument("geometric tail ratio must lie in [0,1)");
}

// Least c with ratio^c <= 1/2.
unsigned halving_steps(const Rational& ratio) {
  if (ratio == 0) return 0;
  Rational p = 1;
  unsigned c = 0;
  while (p * 2 > 1) {
    p *= ratio;
    ++c;
  }
  return c;
}

}  // namespace

LevelSet::LevelSet(unsigned level, std::vector<std::uint64_t> columns) : level_(level), columns_(std::move(columns)) {
  check_level(level);
  std::sort(columns_.begin(), columns_.end());
  columns_.erase(std::unique(columns_.begin(), columns_.end()), columns_.end());
  if (!columns_.empty() && columns_.back() >= capacity())
    throw std::invalid_argument("column " + std::to_string(columns_.back()) + " out of range at level " +
                                std::to_string(level));
}

LevelSet LevelSet::full(unsigned level) { return interval(level, 0, std::uint64_t{1} << level); }

LevelSet LevelSet::interval(unsigned level, std::uint64_t lo, std::uint64_t hi) {
  check_level(level);
  if (level > 26) throw std::invalid_argument("dense interval too large at level " + std::to_string(level));
  std::vector<std::uint64_t> cols;
  for (std::uint64_t c = lo; c < hi; ++c) cols.push_back(c);
  return LevelSet(level, std::move(cols));
}

bool LevelSet::contains(std::uint64_t column) const {
  return std::binary_search(columns_.begin(), columns_.end(), column);
}

bool LevelSet::subset_of(const LevelSet& other) const {
  return std::includes(other.columns_.begin(), other.columns_.end(), columns_.begin(), columns_.end());
}

std::optional<std::uint64_t> LevelSet::least_missing() const {
  for (std::uint64_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] != i) return i;
  if (columns_.size() < capacity()) return columns_.size();
  return std::nullopt;
}

Rational LevelSet::density() const {
  Rational q(BigInt(std::to_string(columns_.size())), power_of_two(level_));
  q.canonicalize();
  return q;
}

LevelSet LevelSet::united(const LevelSet& other) const {
  if (other.level_ != level_) throw std::invalid_argument("level mismatch in union");
  LevelSet out(level_);
  std::set_union(columns_.begin(), columns_.end(), other.columns_.begin(), other.columns_.end(),
                 std::back_inserter(out.columns_));
  return out;
}

LevelSet LevelSet::intersected(const LevelSet& other) const {
  if (other.level_ != level_) throw std::invalid_argument("level mismatch in intersection");
  LevelSet out(level_);
  std::set_intersection(columns_.begin(), columns_.end(), other.columns_.begin(), other.columns_.end(),
                        std::back_inserter(out.columns_));
  return out;
}

LevelSet LevelSet::minus(const LevelSet& other) const {
  if (other.level_ != level_) throw std::invalid_argument("level mismatch in difference");
  LevelSet out(level_);
  std::set_difference(columns_.begin(), columns_.end(), other.columns_.begin(), other.columns_.end(),
                      std::back_inserter(out.columns_));
  return out;
}

LevelSet LevelSet::with(std::uint64_t column) const { return united(LevelSet(level_, {column})); }

// ---------------------------------------------------------------------------

Slalom::Slalom(unsigned horizon, std::optional<GeometricRule> rule) : rule_(std::move(rule)) {
  check_level(horizon);
  check_rule(rule_);
  for (unsigned n = 0; n < horizon; ++n) levels_.emplace_back(n);
}

Slalom::Slalom(std::vector<LevelSet> levels, std::optional<GeometricRule> rule)
    : levels_(std::move(levels)), rule_(std::move(rule)) {
  check_level(horizon());
  check_rule(rule_);
  for (unsigned n = 0; n < levels_.size(); ++n)
    if (levels_[n].level() != n) throw std::invalid_argument("level table out of order");
}

Slalom Slalom::from_table(unsigned horizon, const std::map<unsigned, std::vector<std::uint64_t>>& table,
                          std::optional<GeometricRule> rule) {
  Slalom s(horizon, std::move(rule));
  for (const auto& [n, cols] : table) {
    if (n >= horizon) throw std::invalid_argument("table entry at level " + std::to_string(n) + " >= horizon");
    s.levels_[n] = LevelSet(n, cols);
  }
  return s;
}

bool Slalom::exact_tail() const { return !rule_ || (rule_->ratio == 0 && rule_->first_level <= horizon()); }

LevelSet Slalom::at(unsigned n) const {
  if (n < horizon()) return levels_[n];
  if (!exact_tail()) throw std::out_of_range("level " + std::to_string(n) + " lies in a rule tail");
  return LevelSet(n);
}

void Slalom::set_level(LevelSet level) {
  if (level.level() >= horizon()) throw std::invalid_argument("level beyond horizon");
  levels_[level.level()] = std::move(level);
}

void Slalom::insert(unsigned n, std::uint64_t column) { set_level(at(n).with(column)); }

Slalom Slalom::resized(unsigned h) const {
  if (h > horizon() && !exact_tail()) throw std::invalid_argument("cannot extend a slalom with a rule tail");
  Slalom out = *this;
  if (h < horizon()) {
    out.levels_.resize(h);
  } else {
    for (unsigned n = horizon(); n < h; ++n) out.levels_.emplace_back(n);
  }
  check_level(h);
  return out;
}

Slalom Slalom::prefix(unsigned n) const {
  Slalom out(std::vector<LevelSet>(levels_.begin(), levels_.begin() + std::min<unsigned>(n, horizon())));
  return out.resized(std::max(n, out.horizon()));
}

Slalom Slalom::from_level(unsigned n) const {
  Slalom out = *this;
  for (unsigned k = 0; k < std::min(n, horizon()); ++k) out.levels_[k] = LevelSet(k);
  return out;
}

bool Slalom::empty() const {
  return exact_tail() && std::all_of(levels_.begin(), levels_.end(), [](const LevelSet& l) { return l.empty(); });
}

unsigned Slalom::support() const {
  unsigned h = 0;
  for (unsigned n = 0; n < horizon(); ++n)
    if (!levels_[n].empty()) h = n + 1;
  return h;
}

Rational Slalom::partial_sum(unsigned lo, unsigned hi) const {
  Rational sum = 0;
  for (unsigned n = lo; n < std::min(hi, horizon()); ++n) sum += levels_[n].density();
  return sum;
}

std::optional<Rational> Slalom::tail_sum_bound() const {
  if (exact_tail()) return Rational(0);
  const unsigned first = rule_->first_level;
  const unsigned start = std::max(first, horizon());
  Rational bound = first > horizon() ? Rational(first - horizon()) : Rational(0);
  Rational lead = 1;
  for (unsigned k = 0; k < start - first + 1; ++k) lead *= rule_->ratio;
  bound += lead / (1 - rule_->ratio);
  return bound;
}

bool Slalom::subset_of(const Slalom& other) const {
  const unsigned h = std::max(horizon(), other.horizon());
  for (unsigned n = 0; n < h; ++n) {
    if (n >= horizon() && !exact_tail()) return false;
    if (n >= other.horizon() && !other.exact_tail()) return false;
    if (!at(n).subset_of(other.at(n))) return false;
  }
  return true;
}

bool operator==(const Slalom& a, const Slalom& b) { return a.levels_ == b.levels_ && a.rule_ == b.rule_; }

PathReal::PathReal(std::vector<std::uint64_t> values) : values_(std::move(values)) {
  check_level(horizon());
  for (unsigned n = 0; n < values_.size(); ++n)
    if (values_[n] >= (std::uint64_t{1} << n))
      throw std::invalid_argument("path value f(" + std::to_string(n) + ") out of range");
}

// ---------------------------------------------------------------------------

std::string to_string(Ideal ideal) {
  switch (ideal) {
    case Ideal::S: return "S";
    case Ideal::I: return "I";
    case Ideal::W: return "W";
    case Ideal::J: return "J";
    case Ideal::V: return "V";
    case Ideal::Z: return "Z";
  }
  return "?";
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Yes: return "yes";
    case Status::No: return "no";
    case Status::Undetermined: return "undetermined";
  }
  return "?";
}

IdealVerdict classify(const Slalom& s, Ideal ideal) {
  IdealVerdict v{ideal, Status::Yes, "", s.partial_sum(), std::nullopt};
  const std::string sum = "partial sum " + to_fraction_string(v.partial_sum);

  // Summability and vanishing density hold for every representable tail:
  // finitely many unconstrained levels followed by geometric decay.
  if (ideal == Ideal::I || ideal == Ideal::J) {
    const Rational tail = *s.tail_sum_bound();
    v.certificate = sum + "; tail sum <= " + to_fraction_string(tail);
    if (ideal == Ideal::J) v.certificate += s.exact_tail() ? "; empty beyond horizon" : "; geometric decay";
    return v;
  }

  for (unsigned n = 0; n < s.horizon(); ++n) {
    if (s[n].saturated()) {
      v.status = Status::No;
      v.level = n;
      v.certificate = "level " + std::to_string(n) + " saturated";
      return v;
    }
  }
  if (!s.exact_tail() && s.rule()->first_level > s.horizon()) {
    v.status = Status::Undetermined;
    v.level = s.horizon();
    v.certificate = "levels " + std::to_string(s.horizon()) + ".." + std::to_string(s.rule()->first_level - 1) +
                    " unconstrained by tail";
    return v;
  }
  v.certificate = "no saturated level; " + sum;
  if (!s.exact_tail()) v.certificate += "; tail density < 1";
  return v;
}

std::vector<IdealVerdict> classify(const Slalom& s) {
  std::vector<IdealVerdict> out;
  for (Ideal i : {Ideal::S, Ideal::I, Ideal::W, Ideal::J, Ideal::V, Ideal::Z}) out.push_back(classify(s, i));
  return out;
}

bool in_slaloms(const Slalom& s) {
  const auto v = classify(s, Ideal::S);
  if (v.status == Status::Undetermined) throw std::domain_error("S-membership undetermined: " + v.certificate);
  return v.status == Status::Yes;
}

AlmostSubset almost_subset(const Slalom& a_in, const Slalom& b_in) {
  Slalom a = a_in, b = b_in;
  if (a.horizon() < b.horizon() && a.exact_tail()) a = a.resized(b.horizon());
  if (b.horizon() < a.horizon() && b.exact_tail()) b = b.resized(a.horizon());
  const unsigned h = std::min(a.horizon(), b.horizon());

  AlmostSubset out{Status::Yes, 0, {}};
  for (unsigned n = 0; n < h; ++n)
    if (!a[n].subset_of(b[n])) out.violations.push_back(n);
  if (!out.violations.empty()) out.witness = out.violations.back() + 1;
  if (!a.exact_tail())
    out.status = Status::Undetermined;
  else if (out.witness > 0 && out.witness >= h)
    out.status = Status::No;
  return out;
}

Slalom graph_of(const PathReal& f) {
  Slalom s(f.horizon());
  for (unsigned n = 1; n < f.horizon(); ++n) s.set_level(LevelSet(n, {f(n)}));
  return s;
}

Slalom unite(const Slalom& a_in, const Slalom& b_in) {
  Slalom a = a_in, b = b_in;
  if (a.horizon() < b.horizon() && a.exact_tail()) a = a.resized(b.horizon());
  if (b.horizon() < a.horizon() && b.exact_tail()) b = b.resized(a.horizon());
  if (a.horizon() != b.horizon()) throw std::invalid_argument("union: horizons differ and cannot be aligned");

  std::optional<GeometricRule> rule;
  if (!a.exact_tail() || !b.exact_tail()) {
    if (a.exact_tail()) {
      rule = b.rule();
    } else if (b.exact_tail()) {
      rule = a.rule();
    } else {
      // Two densities each below r^k sum to at most r^(k-c) when r^c <= 1/2.
      const Rational r = std::max(a.rule()->ratio, b.rule()->ratio);
      rule = GeometricRule{std::max(a.rule()->first_level, b.rule()->first_level) + halving_steps(r), r};
    }
  }
  std::vector<LevelSet> levels;
  for (unsigned n = 0; n < a.horizon(); ++n) levels.push_back(a[n].united(b[n]));
  return Slalom(std::move(levels), rule);
}

std::uint64_t enum_bijection(unsigned n, std::uint64_t column) {
  if (n > kMaxHorizon) throw std::invalid_argument("level exceeds cap");
  if (column >= (std::uint64_t{1} << n)) throw std::invalid_argument("column out of range");
  return (std::uint64_t{1} << n) + column;
}

std::pair<unsigned, std::uint64_t> enum_bijection_inverse(std::uint64_t value) {
  if (value == 0) throw std::invalid_argument("0 has no preimage");
  const unsigned n = static_cast<unsigned>(std::bit_width(value)) - 1;
  return {n, value - (std::uint64_t{1} << n)};
}

PathReal diagonal_real(const Slalom& s) {
  std::vector<std::uint64_t> values;
  for (unsigned n = 0; n < s.horizon(); ++n) {
    const auto m = s[n].least_missing();
    if (!m) throw std::domain_error("level " + std::to_string(n) + " saturated; no diagonal value");
    values.push_back(*m);
  }
  return PathReal(std::move(values));
}

std::vector<AlmostSubset> localizes(const Slalom& s, std::span<const PathReal> family) {
  std::vector<AlmostSubset> out;
  for (const auto& f : family) out.push_back(almost_subset(graph_of(f), s));
  return out;
}

std::string to_string(const Slalom& s) {
  std::string out = "H=" + std::to_string(s.horizon());
  for (unsigned n = 0; n < s.horizon(); ++n) {
    if (s[n].empty()) continue;
    out += "; " + std::to_string(n) + ":";
    for (std::size_t i = 0; i < s[n].size(); ++i) out += (i ? "," : " ") + std::to_string(s[n].columns()[i]);
  }
  if (s.rule())
    out += "; tail=geometric " + std::to_string(s.rule()->first_level) + " " + to_fraction_string(s.rule()->ratio);
  return out;
}

}  // namespace slalomlab
