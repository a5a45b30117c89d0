#pragma once

#include <map>
#include <optional>
#include <vector>

#include "slalomlab/omega.hpp"

namespace slalomlab {

/// The conjunction of `terms` is an infinite set.
bool is_centered(const std::vector<AlgebraTerm>& terms);

struct SaturationWitness {
  unsigned level = 0;
  std::vector<std::size_t> indices;  // least covering member for each column, deduplicated
};

std::optional<SaturationWitness> saturation_witness(const std::vector<Slalom>& family);

/// min over multisets of size ≤ L of (largest centered sub-multiset)/(size).
Rational kelley_number(const std::vector<AlgebraTerm>& terms, unsigned max_len);

struct BucketKey {
  unsigned cutoff = 0;
  Slalom prefix;
  Rational threshold;

  std::string str() const;
  friend bool operator==(const BucketKey&, const BucketKey&) = default;
};

/// Least k ≥ 1 with |s(m)|/2^m < threshold for every m ≥ k (exact tails only).
unsigned density_cutoff(const Slalom& s, const Rational& threshold);
BucketKey bucket_key(const Slalom& s, const Rational& threshold);

struct LinkedPartition {
  unsigned arity = 0;
  std::vector<BucketKey> keys;                          // per member
  std::map<std::string, std::vector<std::size_t>> buckets;  // key text → members
  std::uint64_t subsets_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Buckets Z-members by (cutoff, prefix, 1/n) and checks that every ≤ n
/// members of a bucket have their union in S.
LinkedPartition linked_partition(const std::vector<Slalom>& family, unsigned n);

struct StarStep {
  std::size_t n;            // n_i
  unsigned k;               // k_i
  unsigned k_next;          // k_{i+1}
  Slalom block;             // T_i, supported on [k_i, k_{i+1})
  std::vector<std::size_t> q_next;  // Q_{i+1}
};

struct StarResult {
  std::vector<std::size_t> chosen;  // N
  Slalom v;                         // ⋃ S_n, n ∈ N
  std::vector<StarStep> steps;
  unsigned k = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Finite run of the property (*) refinement on one bucket (threshold 1/9).
StarResult star_refine(const std::vector<Slalom>& bucket, unsigned horizon);

struct DiagonalWitness {
  PathReal f;
  std::vector<unsigned> escape_levels;  // graph of f leaves C_n at level n
};

DiagonalWitness diagonal_witness(const std::vector<Slalom>& class_unions);

struct CenteredClass {
  WindowGen window;
  std::vector<std::size_t> members;
  bool centered = false;
};

struct CenteredDecomposition {
  std::vector<CenteredClass> classes;
  bool ok() const;
};

/// One class per window, holding every member B ⊆ bound.
CenteredDecomposition centered_decomposition(const Slalom& bound, const std::vector<Slalom>& family,
                                             const std::vector<WindowGen>& windows);

}  // namespace slalomlab
