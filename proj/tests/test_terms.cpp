#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "clonesmith/fixtures.hpp"
#include "clonesmith/term.hpp"
#include "test_util.hpp"

using namespace clonesmith;

namespace {

Term random_term(std::mt19937& rng, int d_nodes) {
  if (d_nodes == 0) {
    std::uniform_int_distribution<int> var(0, 2);
    return Term::var(var(rng));
  }
  int remaining = d_nodes - 1;
  std::array<int, 3> share{0, 0, 0};
  std::uniform_int_distribution<int> pick(0, 2);
  for (int i = 0; i < remaining; ++i) ++share[static_cast<std::size_t>(pick(rng))];
  return Term::node(random_term(rng, share[0]), random_term(rng, share[1]),
                    random_term(rng, share[2]));
}

}  // namespace

TEST_CASE("term parse and format round-trip") {
  const std::string text = "d(x1,d(x2,x1,x3),x3)";
  Term t = parse_term(text);
  CHECK(format_term(t) == text);
  CHECK(t.d_node_count() == 2);

  std::mt19937 rng(81);
  for (int rep = 0; rep < 30; ++rep) {
    Term r = random_term(rng, 1 + rep % 5);
    CHECK(parse_term(format_term(r)) == r);
  }
}

TEST_CASE("term parser rejects malformed input") {
  CHECK_THROWS_AS(parse_term("d(x1,x2)"), ParseError);        // arity 2
  CHECK_THROWS_AS(parse_term("d(x1,x2,x3,x1)"), ParseError);  // arity 4
  CHECK_THROWS_AS(parse_term("e(x1,x2,x3)"), ParseError);     // unknown symbol
  CHECK_THROWS_AS(parse_term("x4"), ParseError);              // unknown variable
  CHECK_THROWS_AS(parse_term("d(x1,x2,x3) junk"), ParseError);
  CHECK_THROWS_AS(parse_term(""), ParseError);
}

TEST_CASE("eval_term basics") {
  TernaryOp f1 = fixtures::fixture("f1");
  CHECK(eval_term(parse_term("x2"), f1) == projection(f1.universe(), 2));

  const Universe u3(3);
  TernaryOp d1 = d_op(u3, 1);
  CHECK(eval_term(parse_term("d(x1,x2,x3)"), d1) == d1);
}

TEST_CASE("eval_term reproduces the g1 composition") {
  TernaryOp f1 = fixtures::fixture("f1");
  Term t = parse_term("d(x2,d(x2,x1,x3),d(x1,x2,x3))");
  CHECK(eval_term(t, f1) == fixtures::fixture("g1_1_1"));
}

TEST_CASE("cyclic shift sets") {
  CHECK(cyclic_shift_set(Term::var(0)) == std::vector<Term>{Term::var(0)});
  CHECK(cyclic_shift_set(parse_term("d(x1,x2,x3)")).size() == 3);
  CHECK(cyclic_shift_set(parse_term("d(d(x1,x2,x3),x2,x3)")).size() == 9);
  // Rotation collapse: a node with equal children has a one-element set.
  CHECK(cyclic_shift_set(parse_term("d(x1,x1,x1)")).size() == 1);
}

TEST_CASE("cyclic shift set respects its budget") {
  Term t = parse_term("d(x1,x2,x3)");
  for (int i = 0; i < 7; ++i) t = Term::node(t, t, t);  // 3^7-ish d-nodes
  CHECK_THROWS_AS(cyclic_shift_set(t, 100), BudgetError);
}

TEST_CASE("cyclic shifts preserve the term function of a cyclically symmetric operation") {
  TernaryOp f1 = fixtures::fixture("f1");
  std::mt19937 rng(82);
  for (int rep = 0; rep < 8; ++rep) {
    Term t = random_term(rng, 1 + rep % 4);
    TernaryOp value = eval_term(t, f1);
    for (const Term& s : cyclic_shift_set(t)) CHECK(eval_term(s, f1) == value);
  }
}

TEST_CASE("in_cyclic_shift_set") {
  Term t = parse_term("d(d(x1,x2,x3),x2,x3)");
  for (const Term& s : cyclic_shift_set(t)) CHECK(in_cyclic_shift_set(s, t));
  CHECK(!in_cyclic_shift_set(parse_term("d(x2,x1,x3)"), parse_term("d(x1,x2,x3)")));
  CHECK(in_cyclic_shift_set(parse_term("d(x2,x3,x1)"), parse_term("d(x1,x2,x3)")));
  CHECK(!in_cyclic_shift_set(Term::var(0), t));
}

TEST_CASE("classification over the first-projection majority operation") {
  const Universe u3(3);
  D1Class c1 = classify_over_d1(parse_term("d(x1,x2,x3)"), u3);
  CHECK((!c1.is_projection && c1.index == 1));
  D1Class c2 = classify_over_d1(parse_term("d(x1,x1,x2)"), u3);
  CHECK((c2.is_projection && c2.index == 1));
  D1Class c3 = classify_over_d1(parse_term("d(x2,x3,x1)"), u3);
  CHECK((!c3.is_projection && c3.index == 2));
  CHECK_THROWS_AS(classify_over_d1(parse_term("x1"), Universe(2)), Error);
}

TEST_CASE("classification is independent of the universe size") {
  std::mt19937 rng(83);
  for (int rep = 0; rep < 10; ++rep) {
    Term t = random_term(rng, 1 + rep % 4);
    D1Class base = classify_over_d1(t, Universe(3));
    for (int n : {4, 5, 6}) {
      D1Class other = classify_over_d1(t, Universe(n));
      CHECK(other.is_projection == base.is_projection);
      CHECK(other.index == base.index);
    }
  }
}

TEST_CASE("constructive shift triple on single-node terms") {
  auto triple = constructive_shift_triple(parse_term("d(x2,x3,x1)"));
  const Universe u3(3);
  for (int i = 1; i <= 3; ++i) {
    D1Class c = classify_over_d1(triple[static_cast<std::size_t>(i - 1)], u3);
    CHECK(!c.is_projection);
    CHECK(c.index == i);
  }
}

TEST_CASE("constructive shift triple rejects projections") {
  CHECK_THROWS_AS(constructive_shift_triple(parse_term("d(x1,x1,x2)")), Error);
  CHECK_THROWS_AS(constructive_shift_triple(parse_term("x1")), Error);
}

TEST_CASE("constructive shift triple stays inside the enumerated shift set") {
  Term t = parse_term("d(d(x2,x1,x3),x2,x3)");
  auto triple = constructive_shift_triple(t);
  std::vector<Term> cs = cyclic_shift_set(t);
  const Universe u3(3);
  std::set<int> classified;
  for (int i = 1; i <= 3; ++i) {
    const Term& s = triple[static_cast<std::size_t>(i - 1)];
    bool member = false;
    for (const Term& c : cs) member = member || c == s;
    CHECK(member);
    D1Class cls = classify_over_d1(s, u3);
    CHECK(!cls.is_projection);
    classified.insert(cls.index);
  }
  CHECK(classified == std::set<int>({1, 2, 3}));
}

TEST_CASE("shift sets cover all three majority classifications") {
  // Exhaustive over all terms with exactly two d-nodes, one in each position.
  const Universe u3(3);
  std::mt19937 rng(84);
  int covered = 0;
  for (int rep = 0; rep < 60; ++rep) {
    Term t = random_term(rng, 2 + rep % 3);
    D1Class cls = classify_over_d1(t, u3);
    std::set<int> indices;
    for (const Term& s : cyclic_shift_set(t)) {
      D1Class scls = classify_over_d1(s, u3);
      CHECK(scls.is_projection == cls.is_projection);
      if (!scls.is_projection) indices.insert(scls.index);
    }
    if (!cls.is_projection) {
      ++covered;
      CHECK(indices == std::set<int>({1, 2, 3}));
    }
  }
  CHECK(covered > 0);
}
