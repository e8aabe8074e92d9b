#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clonesmith/error.hpp"
#include "clonesmith/universe.hpp"

namespace clonesmith {

/// Permutation of the three argument positions (0-based internally).
/// Applying p to an operation g yields x -> g(x[p[0]], x[p[1]], x[p[2]]).
using VarPerm = std::array<int, 3>;

inline constexpr VarPerm kIdentityVarPerm{0, 1, 2};

/// All six argument permutations in lexicographic order.
inline const std::array<VarPerm, 6>& all_var_perms() {
  static const std::array<VarPerm, 6> perms = {
      VarPerm{0, 1, 2}, VarPerm{0, 2, 1}, VarPerm{1, 0, 2},
      VarPerm{1, 2, 0}, VarPerm{2, 0, 1}, VarPerm{2, 1, 0}};
  return perms;
}

/// Bijection of the base set: sigma[e] is the image of element e.
using Relabeling = std::vector<int>;

inline Relabeling identity_relabeling(int n) {
  Relabeling sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = i;
  return sigma;
}

inline Relabeling inverse_relabeling(const Relabeling& sigma) {
  Relabeling inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    inv[static_cast<std::size_t>(sigma[i])] = static_cast<int>(i);
  return inv;
}

/// A ternary operation on a finite universe, stored as a dense value table of
/// n^3 entries. Entry (a*n + b)*n + c holds f(a,b,c). Immutable by convention:
/// all operations below return fresh objects.
class TernaryOp {
 public:
  TernaryOp(Universe universe, std::vector<std::uint8_t> table)
      : universe_(std::move(universe)), table_(std::move(table)) {
    const int n = universe_.size();
    const std::size_t expected =
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    if (table_.size() != expected)
      throw Error("ternary op table has " + std::to_string(table_.size()) + " entries, expected " +
                  std::to_string(expected));
    for (std::uint8_t v : table_) {
      if (v >= n) throw Error("ternary op table entry " + std::to_string(v) + " out of range");
    }
  }

  const Universe& universe() const { return universe_; }
  int size() const { return universe_.size(); }
  const std::vector<std::uint8_t>& table() const { return table_; }

  int operator()(int a, int b, int c) const {
    const int n = universe_.size();
    return table_[static_cast<std::size_t>((a * n + b) * n + c)];
  }

  bool operator==(const TernaryOp& other) const {
    return universe_ == other.universe_ && table_ == other.table_;
  }
  bool operator!=(const TernaryOp& other) const { return !(*this == other); }

 private:
  Universe universe_;
  std::vector<std::uint8_t> table_;
};

/// The i-th ternary projection (i in 1..3).
inline TernaryOp projection(const Universe& universe, int i) {
  if (i < 1 || i > 3) throw Error("projection index must be 1, 2 or 3");
  const int n = universe.size();
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int args[3] = {a, b, c};
        table[pos++] = static_cast<std::uint8_t>(args[i - 1]);
      }
  return TernaryOp(universe, std::move(table));
}

/// f(a,a,b) = f(a,b,a) = f(b,a,a) = a for all a, b.
inline bool is_majority(const TernaryOp& op) {
  const int n = op.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (op(a, a, b) != a || op(a, b, a) != a || op(b, a, a) != a) return false;
    }
  return true;
}

/// Menger composition: result(x) = outer(g1(x), g2(x), g3(x)).
inline TernaryOp compose(const TernaryOp& outer, const TernaryOp& g1, const TernaryOp& g2,
                         const TernaryOp& g3) {
  if (outer.universe() != g1.universe() || outer.universe() != g2.universe() ||
      outer.universe() != g3.universe())
    throw UniverseMismatchError("compose: operands live on different universes");
  const int n = outer.size();
  const auto& fo = outer.table();
  const auto& t1 = g1.table();
  const auto& t2 = g2.table();
  const auto& t3 = g3.table();
  std::vector<std::uint8_t> table(t1.size());
  for (std::size_t x = 0; x < table.size(); ++x)
    table[x] = fo[static_cast<std::size_t>((t1[x] * n + t2[x]) * n + t3[x])];
  return TernaryOp(outer.universe(), std::move(table));
}

/// result(x1,x2,x3) = op(x[perm[0]], x[perm[1]], x[perm[2]]).
inline TernaryOp permute_vars(const TernaryOp& op, const VarPerm& perm) {
  const int n = op.size();
  std::vector<std::uint8_t> table(op.table().size());
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int args[3] = {a, b, c};
        table[pos++] = static_cast<std::uint8_t>(
            op(args[perm[0]], args[perm[1]], args[perm[2]]));
      }
  return TernaryOp(op.universe(), std::move(table));
}

/// Conjugation by a base-set bijection:
/// result(a,b,c) = sigma(op(sigma^-1(a), sigma^-1(b), sigma^-1(c))).
/// The result keeps the original universe (same labels).
inline TernaryOp relabel(const TernaryOp& op, const Relabeling& sigma) {
  const int n = op.size();
  if (static_cast<int>(sigma.size()) != n)
    throw Error("relabeling acts on a universe of different size");
  const Relabeling inv = inverse_relabeling(sigma);
  std::vector<std::uint8_t> table(op.table().size());
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        table[pos++] = static_cast<std::uint8_t>(sigma[static_cast<std::size_t>(
            op(inv[static_cast<std::size_t>(a)], inv[static_cast<std::size_t>(b)],
               inv[static_cast<std::size_t>(c)]))]);
  return TernaryOp(op.universe(), std::move(table));
}

/// op(a,b,c) = op(b,c,a) everywhere.
inline bool is_cyclically_symmetric(const TernaryOp& op) {
  const int n = op.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (op(a, b, c) != op(b, c, a)) return false;
  return true;
}

/// op(a,b,c) lies in {a,b,c} everywhere (op preserves every subset).
inline bool is_conservative(const TernaryOp& op) {
  const int n = op.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int v = op(a, b, c);
        if (v != a && v != b && v != c) return false;
      }
  return true;
}

/// True iff op maps subset^3 into subset.
inline bool preserves_subset(const TernaryOp& op, std::span<const int> subset) {
  if (subset.empty()) throw Error("preserves_subset: subset must be nonempty");
  const int n = op.size();
  std::vector<bool> in_subset(static_cast<std::size_t>(n), false);
  for (int e : subset) {
    if (e < 0 || e >= n) throw Error("preserves_subset: element out of range");
    in_subset[static_cast<std::size_t>(e)] = true;
  }
  for (int a : subset)
    for (int b : subset)
      for (int c : subset)
        if (!in_subset[static_cast<std::size_t>(op(a, b, c))]) return false;
  return true;
}

/// Restriction to a preserved subset, re-indexed in the given order. The new
/// universe inherits the parent labels of the chosen elements.
inline TernaryOp restrict_op(const TernaryOp& op, std::span<const int> subset) {
  const int n = op.size();
  const int m = static_cast<int>(subset.size());
  if (m < 1) throw Error("restrict: subset must be nonempty");
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int e = subset[static_cast<std::size_t>(i)];
    if (e < 0 || e >= n) throw Error("restrict: element out of range");
    if (position[static_cast<std::size_t>(e)] != -1) throw Error("restrict: repeated element");
    position[static_cast<std::size_t>(e)] = i;
    labels.push_back(op.universe().label(e));
  }
  std::vector<std::uint8_t> table(static_cast<std::size_t>(m) * m * m);
  std::size_t pos = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const int v = op(subset[static_cast<std::size_t>(i)], subset[static_cast<std::size_t>(j)],
                         subset[static_cast<std::size_t>(k)]);
        if (position[static_cast<std::size_t>(v)] == -1)
          throw Error("restrict: subset not preserved at triple (" +
                      op.universe().label(subset[static_cast<std::size_t>(i)]) + "," +
                      op.universe().label(subset[static_cast<std::size_t>(j)]) + "," +
                      op.universe().label(subset[static_cast<std::size_t>(k)]) + ")");
        table[pos++] = static_cast<std::uint8_t>(position[static_cast<std::size_t>(v)]);
      }
  return TernaryOp(Universe(std::move(labels)), std::move(table));
}

}  // namespace clonesmith
