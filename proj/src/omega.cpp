#include "slalomlab/omega.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace slalomlab {

namespace {

void check_trace(const Slalom& trace, unsigned level) {
  if (trace.horizon() != level || !trace.exact_tail())
    throw std::invalid_argument("trace must be a finite table of horizon " + std::to_string(level));
  for (unsigned j = 0; j < level; ++j)
    if (trace[j].saturated()) throw std::invalid_argument("trace saturated at level " + std::to_string(j));
}

bool valid_code(unsigned level, std::uint64_t code) {
  for (unsigned j = 0; j < level; ++j) {
    const std::uint64_t width = std::uint64_t{1} << j;
    const std::uint64_t block = (code >> (width - 1)) & ((width == 64) ? ~0ULL : ((std::uint64_t{1} << width) - 1));
    if (block == (std::uint64_t{1} << width) - 1) return false;
  }
  return true;
}

std::uint64_t code_limit(unsigned level) {
  if (level > 6) throw std::invalid_argument("point codes need level <= 6");
  return std::uint64_t{1} << ((std::uint64_t{1} << level) - 1);
}

}  // namespace

OmegaPoint::OmegaPoint(Slalom t, unsigned n) : trace(std::move(t)), level(n) { check_trace(trace, level); }

WindowGen::WindowGen(Slalom t, unsigned n) : trace(std::move(t)), level(n) { check_trace(trace, level); }

std::uint64_t trace_code(const OmegaPoint& p) {
  code_limit(p.level);
  std::uint64_t code = 0;
  for (unsigned j = 0; j < p.level; ++j)
    for (std::uint64_t c : p.trace[j].columns()) code |= std::uint64_t{1} << ((std::uint64_t{1} << j) - 1 + c);
  return code;
}

OmegaPoint point_from_code(unsigned level, std::uint64_t code) {
  if (code >= code_limit(level)) throw std::invalid_argument("code out of range");
  std::vector<LevelSet> levels;
  for (unsigned j = 0; j < level; ++j) {
    std::vector<std::uint64_t> cols;
    const std::uint64_t width = std::uint64_t{1} << j;
    for (std::uint64_t c = 0; c < width; ++c)
      if (code >> (width - 1 + c) & 1) cols.push_back(c);
    levels.emplace_back(j, std::move(cols));
  }
  return OmegaPoint(Slalom(std::move(levels)), level);
}

// ---------------------------------------------------------------------------

Conjunct conjoin(const Conjunct& a, const Conjunct& b) {
  Conjunct out = a;
  out.positives.insert(out.positives.end(), b.positives.begin(), b.positives.end());
  out.negatives.insert(out.negatives.end(), b.negatives.begin(), b.negatives.end());
  return out;
}

AlgebraTerm conjoin(const AlgebraTerm& a, const AlgebraTerm& b) {
  AlgebraTerm out;
  for (const auto& x : a.disjuncts)
    for (const auto& y : b.disjuncts) out.disjuncts.push_back(conjoin(x, y));
  return out;
}

AlgebraTerm complement(const AlgebraTerm& t) {
  AlgebraTerm out = AlgebraTerm::one();
  for (const auto& c : t.disjuncts) {
    AlgebraTerm neg;
    for (const auto& g : c.positives) neg.disjuncts.push_back(Conjunct{{}, {g}});
    for (const auto& g : c.negatives) neg.disjuncts.push_back(Conjunct{{g}, {}});
    out = conjoin(out, neg);
  }
  return out;
}

bool member(const Generator& g, const OmegaPoint& p) {
  if (const auto* s = std::get_if<SetGen>(&g)) {
    for (unsigned j = 0; j < p.level; ++j)
      if (!s->a.at(j).subset_of(p.trace[j])) return false;
    return true;
  }
  const auto& w = std::get<WindowGen>(g);
  if (p.level < w.level) return false;
  for (unsigned j = 0; j < w.level; ++j)
    if (!(p.trace[j] == w.trace[j])) return false;
  return true;
}

bool eval(const Conjunct& c, const OmegaPoint& p) {
  for (const auto& g : c.positives)
    if (!member(g, p)) return false;
  for (const auto& g : c.negatives)
    if (member(g, p)) return false;
  return true;
}

bool eval_term(const AlgebraTerm& t, const OmegaPoint& p) {
  return std::any_of(t.disjuncts.begin(), t.disjuncts.end(), [&](const Conjunct& c) { return eval(c, p); });
}

// ---------------------------------------------------------------------------

void for_each_point_at(unsigned level, const std::function<bool(const OmegaPoint&)>& visit) {
  const std::uint64_t limit = code_limit(level);
  for (std::uint64_t code = 0; code < limit; ++code)
    if (valid_code(level, code) && !visit(point_from_code(level, code))) return;
}

void for_each_point(unsigned depth, const std::function<bool(const OmegaPoint&)>& visit) {
  bool go = true;
  for (unsigned n = 0; n <= depth && go; ++n)
    for_each_point_at(n, [&](const OmegaPoint& p) { return go = visit(p); });
}

std::vector<OmegaPoint> enum_omega(unsigned depth, unsigned cap) {
  if (depth > cap) throw std::invalid_argument("enumeration depth " + std::to_string(depth) + " exceeds cap " +
                                               std::to_string(cap));
  std::vector<OmegaPoint> out;
  for_each_point(depth, [&](const OmegaPoint& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

BigInt omega_count(unsigned depth) {
  BigInt total = 0, prod = 1;
  for (unsigned n = 0; n <= depth; ++n) {
    total += prod;
    prod *= power_of_two(1u << n) - 1;
  }
  return total;
}

OmegaPoint OmegaCursor::next() {
  while (true) {
    if (code_ >= code_limit(level_)) {
      ++level_;
      code_ = 0;
      continue;
    }
    const std::uint64_t code = code_++;
    if (valid_code(level_, code)) {
      ++index_;
      return point_from_code(level_, code);
    }
  }
}

std::string to_string(MeetKind k) {
  switch (k) {
    case MeetKind::Infinite: return "infinite";
    case MeetKind::Finite: return "finite";
    case MeetKind::Empty: return "empty";
  }
  return "?";
}

}  // namespace slalomlab
