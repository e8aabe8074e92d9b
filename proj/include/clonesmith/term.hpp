#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clonesmith/op_set.hpp"
#include "clonesmith/star.hpp"
#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

/// A term over one ternary symbol d and the variables x1, x2, x3. Immutable
/// tree with shared subterms.
class Term {
 public:
  /// Variable x_{i+1} for i in 0..2.
  static Term var(int i) {
    if (i < 0 || i > 2) throw Error("term variable index out of range");
    return Term(std::make_shared<const Node>(Node{i, {}}));
  }

  static Term node(Term t1, Term t2, Term t3) {
    return Term(std::make_shared<const Node>(
        Node{-1, {std::move(t1.node_), std::move(t2.node_), std::move(t3.node_)}}));
  }

  bool is_var() const { return node_->var >= 0; }
  int var_index() const { return node_->var; }
  Term child(int k) const { return Term(node_->kids[static_cast<std::size_t>(k)]); }

  int d_node_count() const {
    if (is_var()) return 0;
    return 1 + child(0).d_node_count() + child(1).d_node_count() + child(2).d_node_count();
  }

  bool operator==(const Term& other) const {
    if (node_ == other.node_) return true;
    if (is_var() || other.is_var()) return is_var() && other.is_var() && var_index() == other.var_index();
    return child(0) == other.child(0) && child(1) == other.child(1) && child(2) == other.child(2);
  }
  bool operator!=(const Term& other) const { return !(*this == other); }

  const void* id() const { return node_.get(); }

 private:
  struct Node {
    int var;  // -1 for a d-node
    std::array<std::shared_ptr<const Node>, 3> kids;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Prefix text form, e.g. "d(x1,d(x2,x1,x3),x3)".
inline std::string format_term(const Term& t) {
  if (t.is_var()) return "x" + std::to_string(t.var_index() + 1);
  return "d(" + format_term(t.child(0)) + "," + format_term(t.child(1)) + "," +
         format_term(t.child(2)) + ")";
}

namespace detail {

inline void skip_spaces(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

inline Term parse_term_at(std::string_view s, std::size_t& pos) {
  skip_spaces(s, pos);
  if (pos >= s.size()) throw ParseError("term: unexpected end of input");
  if (s[pos] == 'x') {
    ++pos;
    if (pos >= s.size() || s[pos] < '1' || s[pos] > '3')
      throw ParseError("term: variable must be x1, x2 or x3");
    const int idx = s[pos] - '1';
    ++pos;
    return Term::var(idx);
  }
  if (s[pos] == 'd') {
    ++pos;
    skip_spaces(s, pos);
    if (pos >= s.size() || s[pos] != '(') throw ParseError("term: expected '(' after d");
    ++pos;
    std::array<Term, 3> kids = {Term::var(0), Term::var(0), Term::var(0)};
    for (int k = 0; k < 3; ++k) {
      kids[static_cast<std::size_t>(k)] = parse_term_at(s, pos);
      skip_spaces(s, pos);
      const char want = k < 2 ? ',' : ')';
      if (pos >= s.size() || s[pos] != want)
        throw ParseError(std::string("term: expected '") + want + "' (d takes exactly 3 arguments)");
      ++pos;
    }
    return Term::node(kids[0], kids[1], kids[2]);
  }
  throw ParseError("term: unknown symbol at position " + std::to_string(pos));
}

}  // namespace detail

inline Term parse_term(std::string_view s) {
  std::size_t pos = 0;
  Term t = detail::parse_term_at(s, pos);
  detail::skip_spaces(s, pos);
  if (pos != s.size()) throw ParseError("term: trailing input after position " + std::to_string(pos));
  return t;
}

/// Term function over (universe; f): variables evaluate to projections and
/// d-nodes to composition with outer f.
inline TernaryOp eval_term(const Term& t, const TernaryOp& f) {
  if (t.is_var()) return projection(f.universe(), t.var_index() + 1);
  return compose(f, eval_term(t.child(0), f), eval_term(t.child(1), f),
                 eval_term(t.child(2), f));
}

inline constexpr std::size_t kDefaultCsBudget = 6561;  // 3^8 terms

/// The set CS(t) of all cyclic-shift descendants of t, deduplicated, in a
/// deterministic order. CS grows as 3^(#d-nodes); the run errors out once the
/// set would exceed `budget` terms.
inline std::vector<Term> cyclic_shift_set(const Term& t, std::size_t budget = kDefaultCsBudget) {
  if (t.is_var()) return {t};
  std::array<std::vector<Term>, 3> kid_sets;
  // |CS(t)| is at least the product of the child set sizes (the identity
  // rotation contributes every combination), so the product alone can prove a
  // budget overrun before the expensive enumeration.
  std::size_t product = 1;
  for (int k = 0; k < 3; ++k) {
    kid_sets[static_cast<std::size_t>(k)] = cyclic_shift_set(t.child(k), budget);
    product *= kid_sets[static_cast<std::size_t>(k)].size();
    if (product > budget)
      throw BudgetError("cyclic shift set would exceed budget of " + std::to_string(budget) +
                            " terms",
                        product);
  }
  std::vector<Term> out;
  std::set<std::string> seen;
  for (const Term& s1 : kid_sets[0])
    for (const Term& s2 : kid_sets[1])
      for (const Term& s3 : kid_sets[2]) {
        const std::array<Term, 3> rot[3] = {{s1, s2, s3}, {s2, s3, s1}, {s3, s1, s2}};
        for (const auto& r : rot) {
          Term candidate = Term::node(r[0], r[1], r[2]);
          if (seen.insert(format_term(candidate)).second) {
            out.push_back(std::move(candidate));
            if (out.size() > budget)
              throw BudgetError("cyclic shift set exceeded budget of " + std::to_string(budget) +
                                    " terms",
                                out.size());
          }
        }
      }
  return out;
}

/// Structural membership test s ∈ CS(t), without enumerating CS(t).
inline bool in_cyclic_shift_set(const Term& s, const Term& t) {
  if (t.is_var()) return s == t;
  if (s.is_var()) return false;
  static thread_local std::map<std::pair<const void*, const void*>, bool> memo;
  struct Impl {
    static bool check(const Term& s, const Term& t,
                      std::map<std::pair<const void*, const void*>, bool>& memo) {
      if (t.is_var()) return s == t;
      if (s.is_var()) return false;
      const auto key = std::make_pair(s.id(), t.id());
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      bool ok = false;
      for (int r = 0; r < 3 && !ok; ++r) {
        bool all = true;
        for (int k = 0; k < 3 && all; ++k)
          all = check(s.child(k), t.child((k + r) % 3), memo);
        ok = all;
      }
      memo.emplace(key, ok);
      return ok;
    }
  };
  memo.clear();
  return Impl::check(s, t, memo);
}

/// t evaluated over (universe; d_1) is either a projection or one of the
/// majority operations d_1, d_2, d_3 returning its index-th argument on
/// pairwise distinct triples.
struct D1Class {
  bool is_projection;
  int index;  // 1..3
};

inline D1Class classify_over_d1(const Term& t, const Universe& universe) {
  if (universe.size() < 3) throw Error("classify_over_d1: universe size must be >= 3");
  const TernaryOp d1 = d_op(universe, 1);
  const TernaryOp value = eval_term(t, d1);
  for (int i = 1; i <= 3; ++i) {
    if (value == projection(universe, i)) return D1Class{true, i};
  }
  for (int i = 1; i <= 3; ++i) {
    if (value == d_op(universe, i)) return D1Class{false, i};
  }
  throw InternalError("classify_over_d1: term function is neither a projection nor any d_i");
}

namespace detail {

inline const Universe& classify_universe() {
  static const Universe u(3);
  return u;
}

std::array<Term, 3> constructive_shift_triple_impl(const Term& t);

/// Some member of CS(t) evaluating to d_target; t must not evaluate to a
/// projection.
inline Term shift_to(const Term& t, int target) {
  return constructive_shift_triple_impl(t)[static_cast<std::size_t>(target - 1)];
}

inline std::array<Term, 3> constructive_shift_triple_impl(const Term& t) {
  const Universe& u = classify_universe();
  const D1Class cls = classify_over_d1(t, u);
  if (cls.is_projection)
    throw Error("constructive_shift_triple: term evaluates to a projection");

  // t = d(t1,t2,t3); each child evaluates to x_{i_k} or d_{i_k}.
  std::array<D1Class, 3> kid_class;
  for (int k = 0; k < 3; ++k) kid_class[static_cast<std::size_t>(k)] = classify_over_d1(t.child(k), u);

  std::array<Term, 3> rewritten = {t.child(0), t.child(1), t.child(2)};
  std::array<int, 3> j = {kid_class[0].index, kid_class[1].index, kid_class[2].index};

  const bool all_equal = j[0] == j[1] && j[1] == j[2];
  const bool all_distinct = j[0] != j[1] && j[1] != j[2] && j[0] != j[2];

  if (all_equal) {
    // At most one child can evaluate to a projection; keep the projection
    // child (or the first child if none) and rewrite the other two, in child
    // order, to the two missing indices in ascending order.
    int keep = 0;
    for (int k = 0; k < 3; ++k)
      if (kid_class[static_cast<std::size_t>(k)].is_projection) keep = k;
    std::vector<int> missing;
    for (int idx = 1; idx <= 3; ++idx)
      if (idx != j[static_cast<std::size_t>(keep)]) missing.push_back(idx);
    std::size_t next = 0;
    for (int k = 0; k < 3; ++k) {
      if (k == keep) continue;
      if (kid_class[static_cast<std::size_t>(k)].is_projection)
        throw InternalError("constructive_shift_triple: two projection children in a non-projection term");
      j[static_cast<std::size_t>(k)] = missing[next++];
      rewritten[static_cast<std::size_t>(k)] = shift_to(t.child(k), j[static_cast<std::size_t>(k)]);
    }
  } else if (!all_distinct) {
    // Exactly two classifications coincide. Rewrite the first coinciding
    // child that is not a projection, targeting the unique index different
    // from both remaining classifications.
    int p = -1, q = -1, r = -1;
    if (j[0] == j[1]) {
      p = 0; q = 1; r = 2;
    } else if (j[0] == j[2]) {
      p = 0; q = 2; r = 1;
    } else {
      p = 1; q = 2; r = 0;
    }
    int rewrite = -1;
    for (int k : {p, q}) {
      if (!kid_class[static_cast<std::size_t>(k)].is_projection) {
        rewrite = k;
        break;
      }
    }
    if (rewrite < 0)
      throw InternalError("constructive_shift_triple: repeated projection children in a non-projection term");
    int fresh = -1;
    for (int idx = 1; idx <= 3; ++idx)
      if (idx != j[static_cast<std::size_t>(p)] && idx != j[static_cast<std::size_t>(r)]) fresh = idx;
    j[static_cast<std::size_t>(rewrite)] = fresh;
    rewritten[static_cast<std::size_t>(rewrite)] = shift_to(t.child(rewrite), fresh);
  }

  // {j1,j2,j3} = {1,2,3}; emit the three rotations.
  std::array<Term, 3> out = {t, t, t};
  out[static_cast<std::size_t>(j[0] - 1)] = Term::node(rewritten[0], rewritten[1], rewritten[2]);
  out[static_cast<std::size_t>(j[1] - 1)] = Term::node(rewritten[1], rewritten[2], rewritten[0]);
  out[static_cast<std::size_t>(j[2] - 1)] = Term::node(rewritten[2], rewritten[0], rewritten[1]);
  return out;
}

}  // namespace detail

/// Terms s1, s2, s3 in CS(t) with s_i evaluating to d_i over ({1,2,3}; d_1),
/// constructed without enumerating CS(t). Rejects terms whose term function
/// is a projection. The returned triple is verified before being handed back.
inline std::array<Term, 3> constructive_shift_triple(const Term& t) {
  std::array<Term, 3> out = detail::constructive_shift_triple_impl(t);
  const Universe& u = detail::classify_universe();
  for (int i = 1; i <= 3; ++i) {
    const D1Class c = classify_over_d1(out[static_cast<std::size_t>(i - 1)], u);
    if (c.is_projection || c.index != i)
      throw InternalError("constructive_shift_triple: rotation " + std::to_string(i) +
                          " failed classification");
    if (!in_cyclic_shift_set(out[static_cast<std::size_t>(i - 1)], t))
      throw InternalError("constructive_shift_triple: result is not a cyclic shift of the input");
  }
  return out;
}

}  // namespace clonesmith
