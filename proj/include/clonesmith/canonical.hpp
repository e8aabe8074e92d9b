#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

enum class CanonMode {
  RelabelOnly,
  RelabelAndVars,
};

struct CanonicalForm {
  TernaryOp op;       // lexicographically least table over the orbit
  Relabeling sigma;   // witness: op == relabel(permute_vars(input, pi), sigma)
  VarPerm pi;
};

/// Lexicographically smallest table reachable by all relabelings (and, in
/// RelabelAndVars mode, all six argument permutations). The witness is the
/// first (sigma, pi) pair attaining the minimum, scanning relabelings in
/// lexicographic order and argument permutations in all_var_perms() order.
inline CanonicalForm canonical_form(const TernaryOp& op, CanonMode mode) {
  const int n = op.size();
  std::vector<TernaryOp> variants;
  if (mode == CanonMode::RelabelAndVars) {
    for (const VarPerm& p : all_var_perms()) variants.push_back(permute_vars(op, p));
  } else {
    variants.push_back(op);
  }

  std::optional<CanonicalForm> best;
  Relabeling sigma = identity_relabeling(n);
  do {
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      TernaryOp candidate = relabel(variants[vi], sigma);
      if (!best || candidate.table() < best->op.table()) {
        const VarPerm pi = mode == CanonMode::RelabelAndVars ? all_var_perms()[vi]
                                                             : kIdentityVarPerm;
        best = CanonicalForm{std::move(candidate), sigma, pi};
      }
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return *best;
}

/// True iff the table is the lexicographic minimum of its orbit. Cheaper than
/// canonical_form: transformed tables are compared entry by entry with early
/// exit, and the scan aborts as soon as anything smaller shows up.
inline bool is_canonical_representative(const TernaryOp& op, CanonMode mode) {
  const int n = op.size();
  const auto& ref = op.table();
  std::vector<TernaryOp> variants;
  if (mode == CanonMode::RelabelAndVars) {
    variants.reserve(6);
    for (const VarPerm& p : all_var_perms()) variants.push_back(permute_vars(op, p));
  } else {
    variants.push_back(op);
  }

  Relabeling sigma = identity_relabeling(n);
  std::vector<int> inv(static_cast<std::size_t>(n));
  do {
    for (std::size_t i = 0; i < sigma.size(); ++i)
      inv[static_cast<std::size_t>(sigma[i])] = static_cast<int>(i);
    for (const TernaryOp& v : variants) {
      // Compare relabel(v, sigma) against ref lazily in table order.
      std::size_t pos = 0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c, ++pos) {
            const int val = sigma[static_cast<std::size_t>(
                v(inv[static_cast<std::size_t>(a)], inv[static_cast<std::size_t>(b)],
                  inv[static_cast<std::size_t>(c)]))];
            const int r = ref[pos];
            if (val != r) {
              if (val < r) return false;
              goto next_variant;
            }
          }
        }
      }
    next_variant:;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return true;
}

/// Witness that two operations lie in one orbit: b == relabel(permute_vars(a,
/// pi), sigma). Implemented via canonical-form equality; the returned witness
/// is verified before being handed back.
inline std::optional<std::pair<Relabeling, VarPerm>> are_isomorphic(const TernaryOp& a,
                                                                    const TernaryOp& b,
                                                                    CanonMode mode) {
  if (a.size() != b.size()) throw Error("are_isomorphic: universes differ in size");
  CanonicalForm ca = canonical_form(a, mode);
  CanonicalForm cb = canonical_form(b, mode);
  if (ca.op.table() != cb.op.table()) return std::nullopt;

  // canon = relabel(pv(a, pi_a), sigma_a) = relabel(pv(b, pi_b), sigma_b), so
  // b = relabel(pv(a, pi_a ∘ pi_b^-1), sigma_b^-1 ∘ sigma_a).
  VarPerm pib_inv;
  for (int k = 0; k < 3; ++k) pib_inv[cb.pi[k]] = k;
  VarPerm pi;
  for (int k = 0; k < 3; ++k) pi[k] = pib_inv[ca.pi[k]];
  Relabeling sigma_b_inv = inverse_relabeling(cb.sigma);
  Relabeling sigma(static_cast<std::size_t>(a.size()));
  for (std::size_t e = 0; e < sigma.size(); ++e)
    sigma[e] = sigma_b_inv[static_cast<std::size_t>(ca.sigma[e])];

  if (relabel(permute_vars(a, pi), sigma).table() != b.table())
    throw InternalError("are_isomorphic: witness composition failed to verify");
  return std::make_pair(std::move(sigma), pi);
}

}  // namespace clonesmith
