#pragma once

#include <functional>
#include <map>
#include <vector>

#include "slalomlab/omega.hpp"

namespace slalomlab {

/// The random slalom Ṡ(n) = 2^n ∖ {f(n)}, with levels below `level` replaced
/// by the fixed trace. level = 0 is the generic name.
struct SlalomName {
  Slalom trace{0};
  unsigned level = 0;

  static SlalomName generic() { return {}; }
  static SlalomName windowed(const OmegaPoint& p) { return {p.trace, p.level}; }
};

struct MeasureValue {
  Rational value;
  Rational lo;
  Rational hi;

  static MeasureValue exact(Rational v) { return {v, v, v}; }
  bool is_exact() const { return lo == hi; }
};

/// 1 − |w(n)|/2^n for n ≥ 1.
Rational level_factor(const Slalom& w, unsigned n);

/// λ of [w ⊆ name]. Rule tails give a certified interval.
MeasureValue containment_measure(const Slalom& w, const SlalomName& name);

/// λ of [⋃pos ⊆ name ∧ no neg ⊆ name] by inclusion–exclusion (≤ 20 negatives).
MeasureValue term_measure(const std::vector<Slalom>& positives, const std::vector<Slalom>& negatives,
                          const SlalomName& name);

/// ν_name on a conjunct or DNF. Windows T_{(S,n)} are read as [name ∩ (n×2^n) = S].
Rational nu(const SlalomName& name, const Conjunct& c);
Rational nu(const SlalomName& name, const AlgebraTerm& t);

struct DeltaRow {
  OmegaPoint point;
  bool in_tw = false;
  Rational nu;
  Rational tail_bound;  // Σ_{i≥m} |w(i)|/2^i
  bool ok = false;
};

std::vector<DeltaRow> delta_compare(const Slalom& w, const std::vector<OmegaPoint>& points);

struct ConvergeLevel {
  unsigned level = 0;
  BigInt in_count, out_count;
  Rational nu_in, nu_out, tail_bound;
  bool ok = false;
};

struct ConvergeReport {
  std::vector<ConvergeLevel> levels;
  std::uint64_t explicit_points = 0;
  std::uint64_t sampled_points = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Sweeps every point of level ≤ depth: explicitly up to kEnumCap, beyond
/// that by exact class counts (ν_{(T,m)}(T_w) depends only on m and on
/// whether (T,m) ∈ T_w) plus `samples` random points per level.
ConvergeReport converge_sweep(const Slalom& w, unsigned depth, unsigned samples = 16, std::uint64_t seed = 1);

struct MuValue {
  MeasureValue value;
  bool strictly_positive = false;
  unsigned summands = 0;
};

/// Σ_{i<K} 2^{−(i+1)} ν_{φ(i)}(t) with the tail interval [0, 2^{−K}].
MuValue mu(const AlgebraTerm& t, unsigned K);

struct DestructCert {
  unsigned n = 0;
  Rational bound;
};

/// Least n with Σ_{i>n} |w(i)|/2^i < ε.
DestructCert destructibility_certificate(const Slalom& w, const Rational& eps);

/// Σ_{n≥m} |w(n)|/2^n including the tail bound.
Rational borel_cantelli_bound(const Slalom& w, unsigned m);

struct MajorityResult {
  Slalom a;
  bool budget_ok = true;
  bool size_ok = true;
  std::vector<std::string> violations;
};

/// A(n) = {k : value(n,k) > 2^n/g(n)} for 1 ≤ n < horizon.
MajorityResult majority_extract(const std::map<std::pair<unsigned, std::uint64_t>, Rational>& values,
                                unsigned horizon, const std::function<BigInt(unsigned)>& g);

}  // namespace slalomlab
