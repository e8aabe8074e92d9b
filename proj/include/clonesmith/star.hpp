#pragma once

#include <string>
#include <utility>
#include <vector>

#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

/// The majority operation returning its i-th argument on pairwise distinct
/// triples (i in 1..3); repeated-argument triples follow the majority rule.
/// On a two-element set all three coincide with the unique majority
/// operation; d_3 is the dual discriminator.
inline TernaryOp d_op(const Universe& universe, int i) {
  if (i < 1 || i > 3) throw Error("d_op index must be 1, 2 or 3");
  const int n = universe.size();
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int args[3] = {a, b, c};
        int v;
        if (a != b && b != c && a != c)
          v = args[i - 1];
        else if (a == b || a == c)
          v = a;
        else
          v = b;
        table[pos++] = static_cast<std::uint8_t>(v);
      }
  return TernaryOp(universe, std::move(table));
}

/// Base universe extended by one fresh element labeled "*", appended as the
/// last index.
inline Universe star_universe(const Universe& base) {
  std::vector<std::string> labels = base.labels();
  if (base.index_of("*"))
    throw Error("star_universe: base universe already contains the label \"*\"");
  labels.push_back("*");
  return Universe(std::move(labels));
}

/// One-point extension h * d_i: agrees with h on triples from the base set,
/// returns the i-th argument on pairwise distinct triples touching the new
/// element, and follows the majority rule elsewhere. Requires a majority h.
inline TernaryOp star_extend(const TernaryOp& h, int i) {
  if (i < 1 || i > 3) throw Error("star_extend index must be 1, 2 or 3");
  if (!is_majority(h))
    throw Error("star_extend requires a majority operation");
  const Universe extended = star_universe(h.universe());
  const int n = extended.size();
  const int star = n - 1;
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  std::size_t pos = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int args[3] = {a, b, c};
        int v;
        if (a == b || a == c)
          v = a;
        else if (b == c)
          v = b;
        else if (a == star || b == star || c == star)
          v = args[i - 1];
        else
          v = h(a, b, c);
        table[pos++] = static_cast<std::uint8_t>(v);
      }
  return TernaryOp(extended, std::move(table));
}

struct StarDecomposition {
  TernaryOp base_op;
  int i;  // 1..3
};

/// Inverse of star_extend: splits a majority operation on base+{*} into its
/// base restriction and the unique i with restriction to each 3-set through *
/// equal to d_i. The index is read off the lexicographically first such 3-set
/// and then verified against all others.
inline StarDecomposition star_decompose(const TernaryOp& h_star, const Universe& base) {
  const int n = h_star.size();
  const int star = n - 1;
  if (base.size() + 1 != n)
    throw Error("star_decompose: base universe size must be one less than the operation's");
  for (int e = 0; e < base.size(); ++e)
    if (base.label(e) != h_star.universe().label(e))
      throw Error("star_decompose: base labels do not prefix the extended universe");
  if (!is_majority(h_star)) throw Error("star_decompose: operation is not majority");

  std::vector<int> base_elems;
  for (int e = 0; e < star; ++e) base_elems.push_back(e);
  if (!preserves_subset(h_star, base_elems))
    throw Error("star_decompose: base set is not preserved");
  TernaryOp restricted = restrict_op(h_star, base_elems);
  TernaryOp base_op(base, restricted.table());

  const Universe three(3);
  int index = 0;
  for (int x = 0; x < star; ++x)
    for (int y = x + 1; y < star; ++y) {
      const int b[3] = {x, y, star};
      if (!preserves_subset(h_star, b))
        throw Error("star_decompose: 3-set {" + h_star.universe().label(x) + "," +
                    h_star.universe().label(y) + ",*} is not preserved");
      TernaryOp r = restrict_op(h_star, b);
      int found = 0;
      for (int i = 1; i <= 3; ++i)
        if (r.table() == d_op(three, i).table()) found = i;
      if (found == 0)
        throw Error("star_decompose: restriction to {" + h_star.universe().label(x) + "," +
                    h_star.universe().label(y) + ",*} matches no d_i");
      if (index == 0)
        index = found;
      else if (index != found)
        throw Error("star_decompose: inconsistent projection index across 3-sets through *");
    }
  if (index == 0) throw Error("star_decompose: extended universe has no 3-set through *");
  return StarDecomposition{std::move(base_op), index};
}

}  // namespace clonesmith
