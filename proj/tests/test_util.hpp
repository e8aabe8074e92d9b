#pragma once

#include <random>
#include <vector>

#include "clonesmith/ternary_op.hpp"

namespace clonesmith::testing {

inline TernaryOp random_op(std::mt19937& rng, const Universe& u) {
  const int n = u.size();
  std::uniform_int_distribution<int> val(0, n - 1);
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  for (auto& v : table) v = static_cast<std::uint8_t>(val(rng));
  return TernaryOp(u, std::move(table));
}

/// Random majority operation: majority rule on repeated triples, arbitrary
/// values elsewhere.
inline TernaryOp random_majority_op(std::mt19937& rng, const Universe& u) {
  const int n = u.size();
  std::uniform_int_distribution<int> val(0, n - 1);
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::uint8_t v;
        if (a == b || a == c)
          v = static_cast<std::uint8_t>(a);
        else if (b == c)
          v = static_cast<std::uint8_t>(b);
        else
          v = static_cast<std::uint8_t>(val(rng));
        table[static_cast<std::size_t>((a * n + b) * n + c)] = v;
      }
  return TernaryOp(u, std::move(table));
}

inline Relabeling random_relabeling(std::mt19937& rng, int n) {
  Relabeling sigma = identity_relabeling(n);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  return sigma;
}

}  // namespace clonesmith::testing
