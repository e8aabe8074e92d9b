#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "clonesmith/op_set.hpp"
#include "clonesmith/relations.hpp"
#include "clonesmith/term.hpp"
#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

struct MinimalityReport {
  TernaryOp generator;
  bool minimal = false;
  // For a completed closure these are exact; when non-minimality was proven
  // before the closure converged they describe the computed portion.
  std::size_t closure_size = 0;
  std::size_t majority_count = 0;
  // A majority h in [generator] with generator ∉ [h]; absent iff minimal.
  std::optional<TernaryOp> counterexample;
  // One witness term per variable-permutation class of majority members,
  // evaluating to the generator over (A; class representative).
  std::optional<std::vector<std::pair<TernaryOp, Term>>> regeneration_witnesses;
};

enum class MinimalityVerdict { Minimal, NonMinimal, Undecided };

struct MinimalityDecision {
  MinimalityVerdict verdict = MinimalityVerdict::Undecided;
  bool closure_completed = false;
  std::size_t closure_size = 0;
  std::size_t majority_count = 0;
  std::optional<std::vector<std::uint8_t>> counterexample;
};

namespace detail {

/// Lexicographic positions of the pairwise distinct triples.
struct DistinctTriples {
  int n;
  std::vector<std::array<int, 3>> triples;

  explicit DistinctTriples(int n_) : n(n_) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (a != b && b != c && a != c) triples.push_back({a, b, c});
  }
};

/// Bitmask over all nonempty subsets of the universe: bit s is set iff the
/// operation maps s^3 into s. Repeated-argument triples are majority-forced
/// and never leave the subset, so only the distinct-triple values matter.
/// Used as a cheap necessary-condition screen: if f ∈ [h] then every subset
/// preserved by h is preserved by f. Only usable for n <= 6 (one bit per
/// subset); larger universes skip the screen.
inline std::uint64_t preserved_subset_mask(const DistinctTriples& dt,
                                           const std::vector<std::uint8_t>& distinct_values) {
  if (dt.n > 6) return 0;
  std::uint64_t mask = 0;
  const std::uint32_t limit = 1u << dt.n;
  for (std::uint32_t s = 1; s < limit; ++s) {
    bool ok = true;
    for (std::size_t k = 0; k < dt.triples.size(); ++k) {
      const auto& t = dt.triples[k];
      const std::uint32_t bits =
          (1u << t[0]) | (1u << t[1]) | (1u << t[2]);
      if ((bits & ~s) != 0) continue;  // triple not inside s
      if (!(s & (1u << distinct_values[k]))) {
        ok = false;
        break;
      }
    }
    if (ok) mask |= std::uint64_t{1} << s;
  }
  return mask;
}

/// Operations that agree with a projection, or are constant, on all pairwise
/// distinct triples have tiny closures, which makes them the cheapest
/// candidates for refuting minimality.
inline bool is_structured(const DistinctTriples& dt,
                          const std::vector<std::uint8_t>& distinct_values) {
  bool proj[3] = {true, true, true};
  bool constant = true;
  for (std::size_t k = 0; k < dt.triples.size(); ++k) {
    const auto& t = dt.triples[k];
    const int v = distinct_values[k];
    proj[0] = proj[0] && v == t[0];
    proj[1] = proj[1] && v == t[1];
    proj[2] = proj[2] && v == t[2];
    constant = constant && v == distinct_values[0];
  }
  return proj[0] || proj[1] || proj[2] || constant;
}

/// Key identifying h up to permutation of its variables: the smallest of the
/// six permuted tables.
inline std::vector<std::uint8_t> varperm_class_key(const TernaryOp& h) {
  std::vector<std::uint8_t> best = h.table();
  for (const VarPerm& p : all_var_perms()) {
    auto t = permute_vars(h, p).table();
    if (t < best) best = std::move(t);
  }
  return best;
}

/// Tries to refute f ∈ [h] via binary invariant relations: every relation
/// invariant under h must be preserved by f. Sound but not complete. Seeds
/// need two pairs: any single pair only regenerates itself under a majority
/// operation.
inline bool relation_screen_refutes(const TernaryOp& f, const TernaryOp& h) {
  const int n = f.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          if (z == w || (z == x && w == y)) continue;
          const std::pair<int, int> seeds[] = {{x, y}, {z, w}};
          BinaryRelation rel = generate_invariant_pairs(h, seeds);
          if (!preserves_relation(f, rel)) return true;
        }
    }
  return false;
}

/// One refutation attempt: grows [h] with target f under a work budget.
/// Returns Refuted only when [h] provably converged without reaching f;
/// target hits and budget exhaustion are both "no verdict".
enum class AttemptOutcome { Refuted, Regenerates, Unknown };

inline AttemptOutcome attempt_refutation(const TernaryOp& f,
                                         const std::vector<std::uint8_t>& h_table,
                                         std::size_t bound, std::size_t tuple_budget) {
  TernaryOp h(f.universe(), h_table);
  ClosureOptions sub;
  sub.bound = bound;
  sub.max_tuples = tuple_budget;
  sub.target = &f.table();
  sub.stop_at_target = true;
  std::vector<const TernaryOp*> gens = {&h};
  ClosureEngine engine(f.universe(), gens, sub);
  engine.run();
  if (engine.target_found()) return AttemptOutcome::Regenerates;
  if (engine.completed()) return AttemptOutcome::Refuted;
  return AttemptOutcome::Unknown;
}

}  // namespace detail

/// Decides the majority minimality criterion for f: every nontrivial ternary
/// member of [f] must generate f back. Non-minimality is usually proven long
/// before the closure of f converges, by testing cheap candidate refuters
/// (structured members the moment they appear, plus ranked batches whenever
/// the closure crosses a size threshold); a minimal verdict always rests on
/// the converged closure with one generates() test per variable-permutation
/// class. `Undecided` means the member bound was exceeded and no refutation
/// was found.
inline MinimalityDecision decide_minimality(const TernaryOp& f,
                                            std::size_t bound = kDefaultClosureBound) {
  if (!is_majority(f)) throw Error("minimality check requires a majority operation");
  if (f.size() < 2) throw Error("minimality is undefined over a one-element universe");
  const int n = f.size();
  constexpr std::size_t kTier1Budget = 2'000;   // catches refuter closures up to ~12 members
  constexpr std::size_t kTier2Budget = 40'000;  // up to ~34 members

  const detail::DistinctTriples dt(n);
  std::vector<std::uint8_t> f_distinct(dt.triples.size());
  for (std::size_t k = 0; k < dt.triples.size(); ++k)
    f_distinct[k] = static_cast<std::uint8_t>(
        f(dt.triples[k][0], dt.triples[k][1], dt.triples[k][2]));
  const std::uint64_t f_mask = detail::preserved_subset_mask(dt, f_distinct);

  MinimalityDecision decision;
  std::size_t screen_hit = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pending_structured;
  std::vector<std::uint8_t> dv;

  ClosureOptions options;
  options.bound = bound;
  ClosureEngine* engine_ptr = nullptr;
  options.on_member = [&](std::size_t idx) {
    // Seed members (projections and f itself) are inserted during engine
    // construction, before engine_ptr is set; none of them can refute f.
    if (idx < 4 || !engine_ptr) return MemberAction::Continue;
    engine_ptr->distinct_values(idx, dv);
    if ((detail::preserved_subset_mask(dt, dv) & ~f_mask) != 0) {
      screen_hit = idx;
      return MemberAction::Abort;
    }
    if (detail::is_structured(dt, dv)) {
      pending_structured.push_back(idx);
      return MemberAction::Pause;
    }
    return MemberAction::Continue;
  };

  std::vector<const TernaryOp*> gens = {&f};
  ClosureEngine engine(f.universe(), gens, options);
  engine_ptr = &engine;

  auto conclude = [&](MinimalityVerdict verdict,
                      std::optional<std::size_t> counterexample) -> MinimalityDecision {
    decision.verdict = verdict;
    decision.closure_completed = engine.completed();
    decision.closure_size = engine.size();
    decision.majority_count = engine.size() - 3;
    if (counterexample) decision.counterexample = engine.member_table(*counterexample);
    return decision;
  };

  std::set<std::size_t> attempted;
  auto try_refute = [&](std::size_t idx, std::size_t budget) -> bool {
    if (idx < 3) return false;
    const std::vector<std::uint8_t> table = engine.member_table(idx);
    if (table == f.table()) return false;
    if (!attempted.insert(idx).second) return false;
    return detail::attempt_refutation(f, table, bound, budget) ==
           detail::AttemptOutcome::Refuted;
  };

  auto ranked_untried = [&]() {
    std::vector<std::pair<int, std::size_t>> ranked;
    for (std::size_t i = 3; i < engine.size(); ++i) {
      if (attempted.count(i)) continue;
      int pop = 0;
      if (n <= 6) {
        engine.distinct_values(i, dv);
        pop = std::popcount(detail::preserved_subset_mask(dt, dv));
      }
      ranked.emplace_back(-pop, i);
    }
    std::stable_sort(ranked.begin(), ranked.end());
    return ranked;
  };

  std::size_t threshold = 96;
  while (true) {
    // Structured members are attempted the moment the engine reports them.
    while (!pending_structured.empty()) {
      const std::size_t idx = pending_structured.back();
      pending_structured.pop_back();
      if (try_refute(idx, kTier1Budget)) return conclude(MinimalityVerdict::NonMinimal, idx);
    }
    if (engine.aborted()) return conclude(MinimalityVerdict::NonMinimal, screen_hit);
    if (engine.completed() || engine.exceeded()) break;
    if (engine.size() > threshold && threshold < bound) {
      // Stage boundary: attempt a ranked batch of the members seen so far.
      auto ranked = ranked_untried();
      std::size_t tried = 0;
      for (const auto& [rank, idx] : ranked) {
        if (tried >= 16) break;
        ++tried;
        if (try_refute(idx, tried <= 4 ? kTier2Budget : kTier1Budget))
          return conclude(MinimalityVerdict::NonMinimal, idx);
      }
      threshold = std::min(bound, threshold * 4);
    }
    engine.run_until(threshold);
  }

  if (engine.exceeded()) {
    // Last refutation effort over the partial member list.
    auto ranked = ranked_untried();
    std::size_t tried = 0;
    for (const auto& [rank, idx] : ranked) {
      if (tried >= 48) break;
      ++tried;
      if (try_refute(idx, kTier2Budget)) return conclude(MinimalityVerdict::NonMinimal, idx);
      if (tried <= 8 &&
          detail::relation_screen_refutes(f, TernaryOp(f.universe(), engine.member_table(idx))))
        return conclude(MinimalityVerdict::NonMinimal, idx);
    }
    return conclude(MinimalityVerdict::Undecided, std::nullopt);
  }

  // Converged closure. Internal consistency: every nontrivial member of a
  // majority-generated ternary part must be a majority operation.
  std::vector<TernaryOp> members;
  members.reserve(engine.size());
  for (std::size_t i = 0; i < engine.size(); ++i)
    members.emplace_back(f.universe(), engine.member_table(i));
  for (std::size_t i = 0; i < members.size(); ++i)
    if (!is_majority(members[i]) && !is_projection_table(n, members[i].table()))
      throw InternalError(
          "closure of a majority operation produced a non-majority nontrivial member");

  // Verify one representative per variable-permutation class. Structured
  // members go first (their sub-closures settle fastest); the order is
  // deterministic.
  std::vector<std::size_t> reps;
  {
    OpSet seen_keys(f.universe());
    for (std::size_t i = 3; i < members.size(); ++i) {
      TernaryOp key(f.universe(), detail::varperm_class_key(members[i]));
      const std::size_t before = seen_keys.size();
      seen_keys.insert(std::move(key));
      if (seen_keys.size() > before) reps.push_back(i);
    }
  }
  std::stable_sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
    engine.distinct_values(a, dv);
    const bool sa = detail::is_structured(dt, dv);
    engine.distinct_values(b, dv);
    const bool sb = detail::is_structured(dt, dv);
    if (sa != sb) return sa;
    return false;
  });
  for (std::size_t idx : reps) {
    if (members[idx].table() == f.table()) continue;  // generates(f, f) is void
    if (!generates(members[idx], f, bound))
      return conclude(MinimalityVerdict::NonMinimal, idx);
  }
  return conclude(MinimalityVerdict::Minimal, std::nullopt);
}

/// Rebuilds a term over the (single) generator from closure provenance.
inline Term provenance_term(const ClosureEngine& engine, std::size_t member) {
  const auto& prov = engine.provenance();
  if (prov.size() != engine.size())
    throw Error("provenance_term: engine was run without provenance tracking");
  const Provenance& p = prov[member];
  switch (p.kind) {
    case Provenance::Kind::Projection:
      return Term::var(static_cast<int>(p.outer));
    case Provenance::Kind::Generator:
      return Term::node(Term::var(0), Term::var(1), Term::var(2));
    case Provenance::Kind::Composite:
      return Term::node(provenance_term(engine, p.i1), provenance_term(engine, p.i2),
                        provenance_term(engine, p.i3));
  }
  throw InternalError("provenance_term: unreachable");
}

/// Full minimality report. Throws ClosureBoundError if the verdict cannot be
/// reached within `bound` closure members.
inline MinimalityReport minimality_check(const TernaryOp& f,
                                         std::size_t bound = kDefaultClosureBound,
                                         bool want_witnesses = false) {
  MinimalityDecision decision = decide_minimality(f, bound);
  if (decision.verdict == MinimalityVerdict::Undecided)
    throw ClosureBoundError(
        "minimality check undecided: closure exceeded bound of " + std::to_string(bound) +
            " members and no refuting member was found",
        decision.closure_size);

  MinimalityReport report{f};
  report.minimal = decision.verdict == MinimalityVerdict::Minimal;
  report.closure_size = decision.closure_size;
  report.majority_count = decision.majority_count;
  if (decision.counterexample)
    report.counterexample = TernaryOp(f.universe(), *decision.counterexample);

  if (want_witnesses && report.minimal) {
    // Re-run the closure per class representative with provenance to extract
    // a term producing f from that representative.
    OpSet closure_set = ternary_closure(f, bound);
    OpSet majority = majority_members(closure_set);
    std::vector<std::pair<TernaryOp, Term>> witnesses;
    OpSet seen_keys(f.universe());
    for (const auto& h : majority.members()) {
      TernaryOp key(f.universe(), detail::varperm_class_key(h));
      const std::size_t before = seen_keys.size();
      seen_keys.insert(std::move(key));
      if (seen_keys.size() == before) continue;
      ClosureOptions options;
      options.bound = bound;
      options.target = &f.table();
      options.stop_at_target = true;
      options.track_provenance = true;
      std::vector<const TernaryOp*> gens = {&h};
      ClosureEngine engine(f.universe(), gens, options);
      engine.run();
      if (!engine.target_found())
        throw InternalError("minimality witnesses: representative failed to regenerate f");
      const std::size_t f_idx = *engine.find(f.table());
      Term witness = provenance_term(engine, f_idx);
      if (eval_term(witness, h) != f)
        throw InternalError("minimality witnesses: extracted term failed verification");
      witnesses.emplace_back(h, std::move(witness));
    }
    report.regeneration_witnesses = std::move(witnesses);
  }
  return report;
}

}  // namespace clonesmith
