#pragma once

#include <array>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

/// A set of ordered element pairs over one universe, stored as a dense n x n
/// bit matrix.
class BinaryRelation {
 public:
  explicit BinaryRelation(Universe universe)
      : universe_(std::move(universe)),
        bits_(static_cast<std::size_t>(universe_.size()) * universe_.size(), false) {}

  const Universe& universe() const { return universe_; }
  int size() const { return universe_.size(); }

  bool contains(int a, int b) const {
    return bits_[static_cast<std::size_t>(a * size() + b)];
  }

  /// Returns true if the pair was new.
  bool add(int a, int b) {
    check(a);
    check(b);
    const std::size_t i = static_cast<std::size_t>(a * size() + b);
    if (bits_[i]) return false;
    bits_[i] = true;
    return true;
  }

  std::size_t pair_count() const {
    std::size_t c = 0;
    for (bool b : bits_) c += b ? 1 : 0;
    return c;
  }

  /// All pairs in lexicographic order.
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b)
        if (contains(a, b)) out.emplace_back(a, b);
    return out;
  }

  bool operator==(const BinaryRelation& other) const {
    return universe_ == other.universe_ && bits_ == other.bits_;
  }

 private:
  void check(int e) const {
    if (e < 0 || e >= size()) throw Error("relation pair element out of range");
  }

  Universe universe_;
  std::vector<bool> bits_;
};

inline BinaryRelation relation_from_pairs(const Universe& universe,
                                          std::span<const std::pair<int, int>> pairs) {
  BinaryRelation rel(universe);
  for (const auto& [a, b] : pairs) rel.add(a, b);
  return rel;
}

/// Least superset of the seeds closed under componentwise application of f:
/// the subalgebra generated by the seeds in the direct square of (A; f).
/// Fixed-point worklist over pair triples with a new-pair frontier.
inline BinaryRelation generate_invariant_pairs(const TernaryOp& f,
                                               std::span<const std::pair<int, int>> seeds) {
  if (seeds.empty()) throw Error("generate_invariant_pairs: seeds must be nonempty");
  BinaryRelation rel(f.universe());
  std::vector<std::pair<int, int>> members;
  for (const auto& [a, b] : seeds)
    if (rel.add(a, b)) members.emplace_back(a, b);

  std::size_t frontier = 0;
  while (frontier < members.size()) {
    const std::size_t old_size = members.size();
    for (std::size_t i = 0; i < old_size; ++i)
      for (std::size_t j = 0; j < old_size; ++j)
        for (std::size_t k = 0; k < old_size; ++k) {
          if (i < frontier && j < frontier && k < frontier) continue;
          const int a = f(members[i].first, members[j].first, members[k].first);
          const int b = f(members[i].second, members[j].second, members[k].second);
          if (rel.add(a, b)) members.emplace_back(a, b);
        }
    frontier = old_size;
  }
  return rel;
}

/// True iff componentwise images of rel-pair triples stay inside rel.
inline bool preserves_relation(const TernaryOp& op, const BinaryRelation& rel) {
  if (op.universe() != rel.universe())
    throw UniverseMismatchError("preserves_relation: universe mismatch");
  const auto members = rel.pairs();
  for (const auto& p1 : members)
    for (const auto& p2 : members)
      for (const auto& p3 : members) {
        const int a = op(p1.first, p2.first, p3.first);
        const int b = op(p1.second, p2.second, p3.second);
        if (!rel.contains(a, b)) return false;
      }
  return true;
}

/// Which component of the constraining pair is already known.
enum class KnownSide { Left, Right };

/// Values v with (known, v) in rel (KnownSide::Left) or (v, known) in rel
/// (KnownSide::Right), ascending. An empty result signals a contradiction in
/// the caller's partial assignment, not a failure.
inline std::vector<int> admissible_values(const BinaryRelation& rel, int known, KnownSide side) {
  std::vector<int> out;
  for (int v = 0; v < rel.size(); ++v) {
    const bool ok = side == KnownSide::Left ? rel.contains(known, v) : rel.contains(v, known);
    if (ok) out.push_back(v);
  }
  return out;
}

/// A handful of known values of an otherwise undetermined ternary operation.
struct PartialTernaryOp {
  Universe universe;
  std::map<std::array<int, 3>, int> values;
};

/// Admissible values for `query` given that the operation's value on `linked`
/// is known and the two values must be rel-related (orientation per side:
/// KnownSide::Left means (value(linked), value(query)) must lie in rel).
inline std::vector<int> constrain_values(const PartialTernaryOp& partial,
                                         const BinaryRelation& rel,
                                         const std::array<int, 3>& query,
                                         const std::array<int, 3>& linked, KnownSide side) {
  (void)query;
  if (partial.universe != rel.universe())
    throw UniverseMismatchError("constrain_values: universe mismatch");
  auto it = partial.values.find(linked);
  if (it == partial.values.end())
    throw Error("constrain_values: value on the linked triple is not known");
  return admissible_values(rel, it->second, side);
}

}  // namespace clonesmith
