#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clonesmith/ternary_op.hpp"
#include "clonesmith/util.hpp"

namespace clonesmith {

inline constexpr std::size_t kDefaultClosureBound = 10'000;

/// A deduplicated, ordered collection of ternary operations over one
/// universe. closed() reports whether the set was produced as a fixed point
/// of the composition worklist.
class OpSet {
 public:
  explicit OpSet(Universe universe) : universe_(std::move(universe)) {}

  const Universe& universe() const { return universe_; }
  std::size_t size() const { return members_.size(); }
  bool closed() const { return closed_; }
  void mark_closed(bool closed) { closed_ = closed; }

  const TernaryOp& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<TernaryOp>& members() const { return members_; }

  /// Inserts unless an equal table is present. Returns the member index.
  std::size_t insert(TernaryOp op) {
    if (op.universe() != universe_) throw UniverseMismatchError("OpSet: universe mismatch");
    if (auto i = find(op.table())) return *i;
    const std::size_t idx = members_.size();
    index_[fnv1a(op.table())].push_back(static_cast<std::uint32_t>(idx));
    members_.push_back(std::move(op));
    return idx;
  }

  std::optional<std::size_t> find(const std::vector<std::uint8_t>& table) const {
    auto it = index_.find(fnv1a(table));
    if (it == index_.end()) return std::nullopt;
    for (std::uint32_t i : it->second)
      if (members_[i].table() == table) return i;
    return std::nullopt;
  }

  bool contains(const TernaryOp& op) const {
    return op.universe() == universe_ && find(op.table()).has_value();
  }

  /// Set equality irrespective of member order.
  bool same_members(const OpSet& other) const {
    if (universe_ != other.universe_ || size() != other.size()) return false;
    for (const auto& m : members_)
      if (!other.find(m.table())) return false;
    return true;
  }

 private:
  Universe universe_;
  std::vector<TernaryOp> members_;
  bool closed_ = false;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
};

inline bool is_majority_table(int n, const std::vector<std::uint8_t>& table) {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (table[static_cast<std::size_t>((a * n + a) * n + b)] != a) return false;
      if (table[static_cast<std::size_t>((a * n + b) * n + a)] != a) return false;
      if (table[static_cast<std::size_t>((b * n + a) * n + a)] != a) return false;
    }
  return true;
}

inline bool is_projection_table(int n, const std::vector<std::uint8_t>& table) {
  for (int i = 0; i < 3; ++i) {
    bool match = true;
    std::size_t pos = 0;
    for (int a = 0; a < n && match; ++a)
      for (int b = 0; b < n && match; ++b)
        for (int c = 0; c < n; ++c, ++pos) {
          const int args[3] = {a, b, c};
          if (table[pos] != args[i]) {
            match = false;
            break;
          }
        }
    if (match) return true;
  }
  return false;
}

/// How a closure member came to be: a projection, a generator, or a
/// composition members[outer](members[i1], members[i2], members[i3]) where
/// members[outer] is always one of the generators.
struct Provenance {
  enum class Kind : std::uint8_t { Projection, Generator, Composite };
  Kind kind;
  std::uint32_t outer = 0;  // projection index 0..2 / generator list index / outer member
  std::uint32_t i1 = 0;
  std::uint32_t i2 = 0;
  std::uint32_t i3 = 0;
};

enum class MemberAction {
  Continue,
  Pause,  // run_until returns with a valid cursor; the caller may resume
  Abort,  // permanently stops the engine
};

struct ClosureOptions {
  std::size_t bound = kDefaultClosureBound;
  // Work budget in composed tuples; 0 means unlimited. When exhausted the
  // run stops with neither completed() nor exceeded() set.
  std::size_t max_tuples = 0;
  // Optional membership query, answered as soon as the table appears.
  const std::vector<std::uint8_t>* target = nullptr;
  bool stop_at_target = false;
  bool reverse_scan = false;  // alternate deterministic scan order
  bool track_provenance = false;
  // Called for every member (including seeds) in insertion order (used by
  // the minimality engine's screens).
  std::function<MemberAction(std::size_t)> on_member;
};

/// Worklist closure of the ternary part. The three projections are seeded
/// first, then the generators. Each pass composes the generators (as outer
/// function) over all inner triples touching at least one member discovered
/// since the previous pass; superassociativity makes outer-generator
/// composition reach the same fixed point as composing with arbitrary outer
/// members (the test suite cross-checks this against the naive all-outers
/// worklist).
///
/// When every generator is a majority operation, all members are majority
/// operations or projections, so each member is stored compressed: its values
/// on the pairwise distinct triples (lexicographic order) plus three sentinel
/// coordinates (1,0,0), (0,1,0), (0,0,1) that separate the projections from
/// the majority operations. Composition, deduplication and the fixed point
/// all run on these short vectors; full tables are expanded on demand.
class ClosureEngine {
 public:
  ClosureEngine(const Universe& universe, const std::vector<const TernaryOp*>& generators,
                ClosureOptions options)
      : universe_(universe), n_(universe.size()), options_(std::move(options)) {
    if (generators.empty()) throw Error("ternary_closure: empty generator set");
    for (const TernaryOp* g : generators)
      if (g->universe() != universe_)
        throw UniverseMismatchError("ternary_closure: generators on different universes");

    compressed_ = true;
    for (const TernaryOp* g : generators)
      compressed_ = compressed_ && (is_majority(*g) || is_projection_table(n_, g->table()));
    build_coords();

    if (options_.target) {
      if (compressed_ && !is_majority_table(n_, *options_.target) &&
          !is_projection_table(n_, *options_.target)) {
        // A majority-generated ternary part contains only majority
        // operations and projections; any other target can never appear.
        target_repr_.clear();
        target_possible_ = false;
      } else {
        target_repr_ = to_repr(*options_.target);
        target_possible_ = true;
      }
    }

    for (int i = 1; i <= 3; ++i) {
      add_member(to_repr(projection(universe_, i).table()),
                 Provenance{Provenance::Kind::Projection, static_cast<std::uint32_t>(i - 1)});
    }
    for (std::size_t k = 0; k < generators.size() && !done_; ++k) {
      const std::vector<std::uint8_t> repr = to_repr(generators[k]->table());
      std::uint32_t member;
      if (auto existing = find_repr(repr)) {
        // Generator coincides with a projection or earlier generator; it
        // still acts as an outer function.
        member = static_cast<std::uint32_t>(*existing);
      } else {
        member = static_cast<std::uint32_t>(members_.size());
        add_member(repr, Provenance{Provenance::Kind::Generator, static_cast<std::uint32_t>(k)});
      }
      bool seen = false;
      for (std::size_t gi = 0; gi < gen_members_.size(); ++gi)
        seen = seen || gen_members_[gi] == member;
      if (!seen) {
        gen_members_.push_back(member);
        gen_full_.push_back(generators[k]->table());
      }
    }
    // A single cyclically symmetric generator satisfies f(g1,g2,g3) =
    // f(g2,g3,g1) pointwise, so only one rotation of each inner triple needs
    // composing.
    if (gen_members_.size() == 1) {
      const auto& g = gen_full_[0];
      bool cyclic = true;
      for (int a = 0; a < n_ && cyclic; ++a)
        for (int b = 0; b < n_ && cyclic; ++b)
          for (int c = 0; c < n_; ++c)
            if (g[static_cast<std::size_t>((a * n_ + b) * n_ + c)] !=
                g[static_cast<std::size_t>((b * n_ + c) * n_ + a)]) {
              cyclic = false;
              break;
            }
      rotation_reduced_ = cyclic;
    }
  }

  static constexpr std::size_t kNoSizeLimit = static_cast<std::size_t>(-1);

  /// Processes composition tuples until a fixed point, the hard bound, the
  /// work budget, or the soft size limit. Pausing at a size limit keeps the
  /// scan cursor valid, so a later call with a larger limit resumes where
  /// this one stopped.
  void run_until(std::size_t size_limit) {
    if (done_) return;
    const std::size_t width = coords_or_full_size();
    std::vector<std::uint16_t> idx(width);
    std::vector<std::uint16_t> pair12(width);
    std::vector<std::uint8_t> result(width);
    if (members_.size() > size_limit) return;
    while (!done_) {
      if (!in_pass_) {
        pass_size_ = members_.size();
        s1_ = s2_ = s3_ = 0;
        in_pass_ = true;
      }
      for (; s1_ < pass_size_ && !done_; ++s1_, s2_ = 0, s3_ = 0) {
        const std::size_t i1 = options_.reverse_scan ? pass_size_ - 1 - s1_ : s1_;
        for (; s2_ < pass_size_ && !done_; ++s2_, s3_ = 0) {
          const std::size_t i2 = options_.reverse_scan ? pass_size_ - 1 - s2_ : s2_;
          // Insertions reallocate members_, so references are refetched each
          // time around.
          const auto& t1 = members_[i1];
          const auto& t2 = members_[i2];
          for (std::size_t x = 0; x < width; ++x)
            pair12[x] = static_cast<std::uint16_t>((t1[x] * n_ + t2[x]) * n_);
          for (; s3_ < pass_size_ && !done_; ++s3_) {
            const std::size_t i3 = options_.reverse_scan ? pass_size_ - 1 - s3_ : s3_;
            if (i1 < frontier_ && i2 < frontier_ && i3 < frontier_) continue;
            if (rotation_reduced_ && !rotation_canonical(i1, i2, i3)) continue;
            {
              const auto& t3 = members_[i3];
              for (std::size_t x = 0; x < width; ++x)
                idx[x] = static_cast<std::uint16_t>(pair12[x] + t3[x]);
            }
            for (std::size_t gi = 0; gi < gen_members_.size(); ++gi) {
              const auto& gt = gen_full_[gi];
              for (std::size_t x = 0; x < width; ++x) result[x] = gt[idx[x]];
              ++tuples_processed_;
              add_composite(result, gen_members_[gi], static_cast<std::uint32_t>(i1),
                            static_cast<std::uint32_t>(i2), static_cast<std::uint32_t>(i3));
              if (done_) break;
            }
            if (options_.max_tuples && tuples_processed_ >= options_.max_tuples) {
              ++s3_;  // keep the cursor past the finished tuple
              return;
            }
            if (pause_requested_) {
              pause_requested_ = false;
              ++s3_;
              return;
            }
            if (members_.size() > size_limit) {
              ++s3_;
              return;
            }
          }
        }
      }
      if (done_) break;
      in_pass_ = false;
      frontier_ = pass_size_;
      if (members_.size() == pass_size_) {
        completed_ = true;
        break;
      }
    }
  }

  void run() { run_until(kNoSizeLimit); }

  bool completed() const { return completed_; }
  bool exceeded() const { return exceeded_; }
  bool aborted() const { return aborted_; }
  bool target_found() const { return target_found_; }
  bool out_of_budget() const {
    return options_.max_tuples && tuples_processed_ >= options_.max_tuples;
  }
  std::size_t tuples_processed() const { return tuples_processed_; }
  std::size_t size() const { return members_.size(); }
  const Universe& universe() const { return universe_; }
  bool compressed() const { return compressed_; }
  const std::vector<Provenance>& provenance() const { return provenance_; }

  /// Full value table of a member (expanded from the compressed form when
  /// necessary).
  std::vector<std::uint8_t> member_table(std::size_t i) const {
    if (!compressed_) return members_[i];
    for (int p = 0; p < 3; ++p)
      if (members_[i] == projection_reprs_[static_cast<std::size_t>(p)])
        return projection(universe_, p + 1).table();
    std::vector<std::uint8_t> table(static_cast<std::size_t>(n_) * n_ * n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) {
          std::uint8_t v;
          if (a == b || a == c)
            v = static_cast<std::uint8_t>(a);
          else if (b == c)
            v = static_cast<std::uint8_t>(b);
          else
            v = 0;
          table[static_cast<std::size_t>((a * n_ + b) * n_ + c)] = v;
        }
    for (std::size_t k = 0; k < distinct_count_; ++k) table[coords_[k]] = members_[i][k];
    return table;
  }

  bool member_is_projection(std::size_t i) const {
    if (compressed_) {
      for (int p = 0; p < 3; ++p)
        if (members_[i] == projection_reprs_[static_cast<std::size_t>(p)]) return true;
      return false;
    }
    return is_projection_table(n_, members_[i]);
  }

  /// The member's values on the pairwise distinct triples, in lexicographic
  /// triple order.
  void distinct_values(std::size_t i, std::vector<std::uint8_t>& out) const {
    out.resize(distinct_count_);
    if (compressed_) {
      std::copy(members_[i].begin(), members_[i].begin() + static_cast<std::ptrdiff_t>(distinct_count_),
                out.begin());
    } else {
      for (std::size_t k = 0; k < distinct_count_; ++k) out[k] = members_[i][coords_[k]];
    }
  }

  std::optional<std::size_t> find(const std::vector<std::uint8_t>& full_table) const {
    if (compressed_ && !is_majority_table(n_, full_table) &&
        !is_projection_table(n_, full_table))
      return std::nullopt;
    return find_repr(to_repr(full_table));
  }

  /// Materializes the member list as an OpSet (marked closed on completion).
  OpSet to_op_set() const {
    OpSet out(universe_);
    for (std::size_t i = 0; i < members_.size(); ++i)
      out.insert(TernaryOp(universe_, member_table(i)));
    out.mark_closed(completed_);
    return out;
  }

 private:
  void build_coords() {
    // Lexicographic distinct triples, then the three projection sentinels
    // (1,0,0), (0,1,0), (0,0,1). In full-table mode coords_ still identifies
    // the distinct-triple positions for distinct_values().
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (a != b && b != c && a != c)
            coords_.push_back(static_cast<std::size_t>((a * n_ + b) * n_ + c));
    distinct_count_ = coords_.size();
    if (n_ >= 2) {
      coords_.push_back(static_cast<std::size_t>(n_) * n_);  // (1,0,0)
      coords_.push_back(static_cast<std::size_t>(n_));       // (0,1,0)
      coords_.push_back(1);                                  // (0,0,1)
    }
    if (compressed_) {
      for (int p = 1; p <= 3; ++p)
        projection_reprs_[static_cast<std::size_t>(p - 1)] =
            to_repr(projection(universe_, p).table());
    }
  }

  std::size_t coords_or_full_size() const {
    return compressed_ ? coords_.size()
                       : static_cast<std::size_t>(n_) * n_ * n_;
  }

  std::vector<std::uint8_t> to_repr(const std::vector<std::uint8_t>& full_table) const {
    if (!compressed_) return full_table;
    std::vector<std::uint8_t> repr(coords_.size());
    for (std::size_t k = 0; k < coords_.size(); ++k) repr[k] = full_table[coords_[k]];
    return repr;
  }

  std::optional<std::size_t> find_repr(const std::vector<std::uint8_t>& repr) const {
    auto it = index_.find(fnv1a(repr));
    if (it == index_.end()) return std::nullopt;
    for (std::uint32_t i : it->second)
      if (members_[i] == repr) return i;
    return std::nullopt;
  }

  static bool rotation_canonical(std::size_t i1, std::size_t i2, std::size_t i3) {
    // True iff (i1,i2,i3) is lexicographically minimal among its rotations
    // (i2,i3,i1) and (i3,i1,i2); holds for exactly one rotation per orbit.
    const bool le_rot1 = i1 < i2 || (i1 == i2 && i2 <= i3);
    const bool le_rot2 = i1 < i3 || (i1 == i3 && i2 <= i1);
    return le_rot1 && le_rot2;
  }

  void add_member(const std::vector<std::uint8_t>& repr, Provenance prov) {
    if (find_repr(repr)) return;
    const std::size_t idx = members_.size();
    index_[fnv1a(repr)].push_back(static_cast<std::uint32_t>(idx));
    members_.push_back(repr);
    if (options_.track_provenance) provenance_.push_back(prov);
    after_insert(idx);
  }

  void add_composite(const std::vector<std::uint8_t>& repr, std::uint32_t outer_member,
                     std::uint32_t i1, std::uint32_t i2, std::uint32_t i3) {
    const std::uint64_t h = fnv1a(repr);
    auto it = index_.find(h);
    if (it != index_.end()) {
      for (std::uint32_t i : it->second)
        if (members_[i] == repr) return;
    }
    const std::size_t idx = members_.size();
    index_[h].push_back(static_cast<std::uint32_t>(idx));
    members_.push_back(repr);
    if (options_.track_provenance)
      provenance_.push_back(Provenance{Provenance::Kind::Composite, outer_member, i1, i2, i3});
    after_insert(idx);
  }

  void after_insert(std::size_t idx) {
    if (options_.target && target_possible_ && members_[idx] == target_repr_) {
      target_found_ = true;
      if (options_.stop_at_target) done_ = true;
    }
    if (options_.on_member) {
      switch (options_.on_member(idx)) {
        case MemberAction::Continue:
          break;
        case MemberAction::Pause:
          pause_requested_ = true;
          break;
        case MemberAction::Abort:
          aborted_ = true;
          done_ = true;
          break;
      }
    }
    if (members_.size() > options_.bound) {
      exceeded_ = true;
      done_ = true;
    }
  }

  Universe universe_;
  int n_;
  ClosureOptions options_;
  bool compressed_ = false;
  std::vector<std::size_t> coords_;
  std::size_t distinct_count_ = 0;
  std::array<std::vector<std::uint8_t>, 3> projection_reprs_;
  std::vector<std::vector<std::uint8_t>> members_;  // compressed or full
  std::vector<Provenance> provenance_;
  std::vector<std::uint32_t> gen_members_;
  std::vector<std::vector<std::uint8_t>> gen_full_;  // full tables, for outer lookups
  std::vector<std::uint8_t> target_repr_;
  bool target_possible_ = false;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
  bool completed_ = false;
  bool exceeded_ = false;
  bool aborted_ = false;
  bool target_found_ = false;
  bool done_ = false;
  bool pause_requested_ = false;
  bool rotation_reduced_ = false;
  // Scan cursor; valid across run_until calls.
  bool in_pass_ = false;
  std::size_t pass_size_ = 0;
  std::size_t frontier_ = 0;
  std::size_t s1_ = 0, s2_ = 0, s3_ = 0;
  std::size_t tuples_processed_ = 0;
};

/// Least superset of the generators containing the three projections and
/// closed under composition. Throws ClosureBoundError when the member count
/// would pass `bound`.
inline OpSet ternary_closure(const OpSet& generators, std::size_t bound = kDefaultClosureBound) {
  if (generators.size() == 0) throw Error("ternary_closure: empty generator set");
  std::vector<const TernaryOp*> gens;
  gens.reserve(generators.size());
  for (const auto& g : generators.members()) gens.push_back(&g);
  ClosureOptions options;
  options.bound = bound;
  ClosureEngine engine(generators.universe(), gens, options);
  engine.run();
  if (engine.exceeded())
    throw ClosureBoundError("ternary closure exceeded bound of " + std::to_string(bound) +
                                " members (partial size " + std::to_string(engine.size()) + ")",
                            engine.size());
  return engine.to_op_set();
}

inline OpSet ternary_closure(const TernaryOp& generator,
                             std::size_t bound = kDefaultClosureBound) {
  OpSet gens(generator.universe());
  gens.insert(generator);
  return ternary_closure(gens, bound);
}

/// Members satisfying is_majority, in set order.
inline OpSet majority_members(const OpSet& s) {
  OpSet out(s.universe());
  for (const auto& m : s.members())
    if (is_majority(m)) out.insert(m);
  return out;
}

/// target ∈ [h] on the ternary level. Propagates ClosureBoundError when the
/// closure of {h} passes the bound before the question is settled.
inline bool generates(const TernaryOp& h, const TernaryOp& target,
                      std::size_t bound = kDefaultClosureBound) {
  if (h.universe() != target.universe())
    throw UniverseMismatchError("generates: universe mismatch");
  // A majority-generated ternary part holds only majority operations and
  // projections, so any other target is settled without growing the closure.
  if (is_majority(h) && !is_majority(target) &&
      !is_projection_table(h.size(), target.table()))
    return false;
  ClosureOptions options;
  options.bound = bound;
  options.target = &target.table();
  options.stop_at_target = true;
  std::vector<const TernaryOp*> gens = {&h};
  ClosureEngine engine(h.universe(), gens, options);
  engine.run();
  if (engine.target_found()) return true;
  if (engine.exceeded())
    throw ClosureBoundError("generates: closure exceeded bound of " + std::to_string(bound) +
                                " members before target was found",
                            engine.size());
  return false;
}

}  // namespace clonesmith
