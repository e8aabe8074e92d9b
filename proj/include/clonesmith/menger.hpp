#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "clonesmith/op_set.hpp"
#include "clonesmith/util.hpp"

namespace clonesmith {

/// The full quaternary composition table of a closed ternary part, over
/// member indices, plus the three projection constants. Entry
/// ((o*m + a)*m + b)*m + c holds the member index of compose(o, a, b, c).
struct MengerTable {
  std::size_t members = 0;
  std::array<std::uint16_t, 3> projections{};
  std::vector<std::uint16_t> table;

  std::uint16_t at(std::size_t o, std::size_t a, std::size_t b, std::size_t c) const {
    return table[((o * members + a) * members + b) * members + c];
  }
};

inline constexpr std::size_t kMengerEntryCap = 120'000'000;

/// Materializes the composition table of a closed OpSet. Work is grouped by
/// inner triple so the combined argument index array is built once per
/// triple; triples are distributed over `jobs` threads.
inline MengerTable menger_table(const OpSet& s, int jobs = 1) {
  if (!s.closed()) throw Error("menger_table: operation set is not closed");
  const std::size_t m = s.size();
  const std::size_t entries = m * m * m * m;
  if (m > 0 && entries / m / m / m != m)
    throw Error("menger_table: member count overflows the table");
  if (entries > kMengerEntryCap)
    throw Error("menger_table: " + std::to_string(entries) + " entries exceed the cap");

  MengerTable mt;
  mt.members = m;
  for (int i = 1; i <= 3; ++i) {
    auto idx = s.find(projection(s.universe(), i).table());
    if (!idx) throw Error("menger_table: set lacks projection " + std::to_string(i));
    mt.projections[static_cast<std::size_t>(i - 1)] = static_cast<std::uint16_t>(*idx);
  }
  mt.table.assign(entries, 0);

  const int n = s.universe().size();
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  std::atomic<bool> escaped{false};
  parallel_for_ranges(m, jobs, [&](std::size_t a_begin, std::size_t a_end) {
    std::vector<std::uint16_t> idx(n3);
    std::vector<std::uint8_t> result(n3);
    for (std::size_t a = a_begin; a < a_end; ++a) {
      const auto& t1 = s[a].table();
      for (std::size_t b = 0; b < m; ++b) {
        const auto& t2 = s[b].table();
        for (std::size_t c = 0; c < m; ++c) {
          const auto& t3 = s[c].table();
          for (std::size_t x = 0; x < n3; ++x)
            idx[x] = static_cast<std::uint16_t>((t1[x] * n + t2[x]) * n + t3[x]);
          for (std::size_t o = 0; o < m; ++o) {
            const auto& ot = s[o].table();
            for (std::size_t x = 0; x < n3; ++x) result[x] = ot[idx[x]];
            auto found = s.find(result);
            if (!found) {
              escaped.store(true);
              return;
            }
            mt.table[((o * m + a) * m + b) * m + c] = static_cast<std::uint16_t>(*found);
          }
        }
      }
    }
  });
  if (escaped.load())
    throw InternalError("menger_table: composition escaped a closed set");
  return mt;
}

/// Canonical key for abstract Menger-algebra comparison: the lexicographically
/// least rewrite of the composition table over all member permutations that
/// pin the three projections to slots 0, 1, 2. Two closed ternary parts are
/// isomorphic as unitary Menger algebras iff their keys coincide. Only
/// supported for up to 12 members.
inline std::vector<std::uint16_t> menger_canonical_key(const MengerTable& mt) {
  const std::size_t m = mt.members;
  if (m > 12) throw Error("menger_canonical_key: supported for at most 12 members");
  std::vector<std::size_t> free_slots;
  std::vector<bool> is_proj(m, false);
  for (std::uint16_t p : mt.projections) is_proj[p] = true;
  for (std::size_t i = 0; i < m; ++i)
    if (!is_proj[i]) free_slots.push_back(i);

  // perm[source index] = canonical slot; projections occupy slots 0..2.
  std::vector<std::size_t> target(free_slots.size());
  for (std::size_t i = 0; i < target.size(); ++i) target[i] = i;

  std::vector<std::uint16_t> best;
  std::vector<std::uint16_t> perm(m), rewritten(mt.table.size());
  do {
    for (int i = 0; i < 3; ++i)
      perm[mt.projections[static_cast<std::size_t>(i)]] = static_cast<std::uint16_t>(i);
    for (std::size_t i = 0; i < free_slots.size(); ++i)
      perm[free_slots[i]] = static_cast<std::uint16_t>(3 + target[i]);
    for (std::size_t o = 0; o < m; ++o)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t c = 0; c < m; ++c)
            rewritten[((perm[o] * m + perm[a]) * m + perm[b]) * m + perm[c]] =
                perm[mt.at(o, a, b, c)];
    if (best.empty() || rewritten < best) best = rewritten;
  } while (std::next_permutation(target.begin(), target.end()));
  return best;
}

/// The restriction map from a closed set to its image on a preserved subset.
struct RestrictionHom {
  OpSet image;
  std::vector<std::uint32_t> index_map;  // source member -> image member
};

/// Restricts every member to `subset` (re-indexed in subset order) and checks
/// that the induced index map respects composition on every quadruple. A
/// precomputed source Menger table avoids recomputing all |S|^4 compositions.
inline RestrictionHom restriction_homomorphism(const OpSet& s, std::span<const int> subset,
                                               const MengerTable* source_mt = nullptr,
                                               int jobs = 1) {
  if (!s.closed()) throw Error("restriction_homomorphism: operation set is not closed");
  OpSet image([&] {
    std::vector<std::string> labels;
    for (int e : subset) labels.push_back(s.universe().label(e));
    return Universe(std::move(labels));
  }());
  std::vector<std::uint32_t> index_map;
  index_map.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!preserves_subset(s[i], subset))
      throw Error("restriction_homomorphism: member " + std::to_string(i) +
                  " does not preserve the subset");
    index_map.push_back(static_cast<std::uint32_t>(image.insert(restrict_op(s[i], subset))));
  }
  image.mark_closed(s.closed());
  const MengerTable image_mt = menger_table(image, jobs);

  const std::size_t m = s.size();
  const int n = s.universe().size();
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  std::atomic<bool> escaped{false};
  std::atomic<bool> mismatch{false};
  parallel_for_ranges(m, jobs, [&](std::size_t a_begin, std::size_t a_end) {
    std::vector<std::uint16_t> idx(n3);
    std::vector<std::uint8_t> result(n3);
    for (std::size_t a = a_begin; a < a_end; ++a) {
      const auto& t1 = s[a].table();
      for (std::size_t b = 0; b < m; ++b) {
        const auto& t2 = s[b].table();
        for (std::size_t c = 0; c < m; ++c) {
          const auto& t3 = s[c].table();
          if (!source_mt)
            for (std::size_t x = 0; x < n3; ++x)
              idx[x] = static_cast<std::uint16_t>((t1[x] * n + t2[x]) * n + t3[x]);
          for (std::size_t o = 0; o < m; ++o) {
            std::size_t composed;
            if (source_mt) {
              composed = source_mt->at(o, a, b, c);
            } else {
              const auto& ot = s[o].table();
              for (std::size_t x = 0; x < n3; ++x) result[x] = ot[idx[x]];
              auto found = s.find(result);
              if (!found) {
                escaped.store(true);
                return;
              }
              composed = *found;
            }
            if (image_mt.at(index_map[o], index_map[a], index_map[b], index_map[c]) !=
                index_map[composed]) {
              mismatch.store(true);
              return;
            }
          }
        }
      }
    }
  });
  if (escaped.load())
    throw InternalError("restriction_homomorphism: source set is not closed under composition");
  if (mismatch.load())
    throw InternalError("restriction_homomorphism: index map does not respect composition");
  return RestrictionHom{std::move(image), std::move(index_map)};
}

}  // namespace clonesmith
