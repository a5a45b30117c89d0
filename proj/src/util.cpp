#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "slalomlab/random.hpp"
#include "slalomlab/rational.hpp"

namespace slalomlab {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("malformed rational: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::vector<std::uint64_t> Rng::distinct(std::uint64_t count, std::uint64_t bound) {
  if (count > bound) throw std::invalid_argument("Rng::distinct: count exceeds range");
  std::vector<std::uint64_t> out;
  if (count * 2 > bound) {
    // Dense: partial Fisher-Yates over the whole range.
    std::vector<std::uint64_t> all(bound);
    for (std::uint64_t i = 0; i < bound; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < count; ++i) std::swap(all[i], all[i + below(bound - i)]);
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (out.size() < count) {
      const std::uint64_t x = below(bound);
      if (seen.insert(x).second) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace slalomlab
