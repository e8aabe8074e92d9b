#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "clonesmith/fixtures.hpp"
#include "clonesmith/menger.hpp"
#include "clonesmith/minimality.hpp"
#include "clonesmith/op_set.hpp"
#include "test_util.hpp"

using namespace clonesmith;

namespace {

// Independent oracle: the naive worklist that composes every quadruple of
// current members (arbitrary outer) on full tables until nothing new appears.
std::set<std::vector<std::uint8_t>> naive_closure(const std::vector<TernaryOp>& gens) {
  const Universe& u = gens.front().universe();
  std::set<std::vector<std::uint8_t>> members;
  std::vector<TernaryOp> list;
  auto add = [&](const TernaryOp& op) {
    if (members.insert(op.table()).second) list.push_back(op);
  };
  for (int i = 1; i <= 3; ++i) add(projection(u, i));
  for (const auto& g : gens) add(g);
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t size = list.size();
    for (std::size_t o = 0; o < size; ++o)
      for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b)
          for (std::size_t c = 0; c < size; ++c) {
            TernaryOp composed = compose(list[o], list[a], list[b], list[c]);
            if (members.insert(composed.table()).second) {
              list.push_back(composed);
              changed = true;
            }
          }
  }
  return members;
}

std::set<std::vector<std::uint8_t>> tables_of(const OpSet& s) {
  std::set<std::vector<std::uint8_t>> out;
  for (const auto& m : s.members()) out.insert(m.table());
  return out;
}

}  // namespace

TEST_CASE("closure of a projection is the trivial part") {
  OpSet gens(Universe(3));
  gens.insert(projection(Universe(3), 1));
  OpSet closure = ternary_closure(gens);
  CHECK(closure.size() == 3);
  CHECK(majority_members(closure).size() == 0);
}

TEST_CASE("closure sizes of the bundled generators") {
  CHECK(ternary_closure(fixtures::fixture("m1")).size() == 4);
  CHECK(ternary_closure(fixtures::fixture("m2")).size() == 6);
  CHECK(ternary_closure(fixtures::fixture("m3")).size() == 11);
  OpSet c = ternary_closure(fixtures::fixture("f1"));
  CHECK(c.size() == 29);
  CHECK(majority_members(c).size() == 26);
}

TEST_CASE("majority members of the d-family closure") {
  OpSet majority = majority_members(ternary_closure(fixtures::fixture("m2")));
  OpSet expected(fixtures::u3());
  for (const char* n : {"m2", "d2", "d3"}) expected.insert(fixtures::fixture(n));
  CHECK(majority.same_members(expected));
}

TEST_CASE("closure agrees with the naive all-outers oracle") {
  for (const char* name : {"m1", "m2", "m3"}) {
    TernaryOp g = fixtures::fixture(name);
    CHECK(tables_of(ternary_closure(g)) == naive_closure({g}));
  }
  // Random majority generators and a random unrestricted generator exercise
  // the compressed and full-table engine paths respectively.
  std::mt19937 rng(61);
  Universe u(3);
  for (int rep = 0; rep < 3; ++rep) {
    TernaryOp g = testing::random_majority_op(rng, u);
    CHECK(tables_of(ternary_closure(g, 100'000)) == naive_closure({g}));
  }
  TernaryOp arbitrary = testing::random_op(rng, Universe(2));
  CHECK(tables_of(ternary_closure(arbitrary, 100'000)) == naive_closure({arbitrary}));
  // Two generators at once.
  OpSet pair(u);
  pair.insert(fixtures::fixture("m2"));
  pair.insert(fixtures::fixture("m3"));
  std::vector<TernaryOp> gens = {fixtures::fixture("m2"), fixtures::fixture("m3")};
  CHECK(tables_of(ternary_closure(pair, 100'000)) == naive_closure(gens));
}

TEST_CASE("closure is idempotent and monotone") {
  OpSet c2 = ternary_closure(fixtures::fixture("m2"));
  OpSet again = ternary_closure(c2);
  CHECK(again.same_members(c2));

  OpSet pair(fixtures::u3());
  pair.insert(fixtures::fixture("m2"));
  pair.insert(fixtures::fixture("m3"));
  OpSet joint = ternary_closure(pair);
  for (const auto& m : c2.members()) CHECK(joint.contains(m));
}

TEST_CASE("closure is independent of the scan order") {
  for (const char* name : {"m3", "f1"}) {
    TernaryOp g = fixtures::fixture(name);
    std::vector<const TernaryOp*> gens = {&g};
    ClosureOptions forward;
    ClosureEngine fwd(g.universe(), gens, forward);
    fwd.run();
    ClosureOptions backward;
    backward.reverse_scan = true;
    ClosureEngine bwd(g.universe(), gens, backward);
    bwd.run();
    REQUIRE(fwd.completed());
    REQUIRE(bwd.completed());
    CHECK(tables_of(fwd.to_op_set()) == tables_of(bwd.to_op_set()));
  }
}

TEST_CASE("closure respects the member bound") {
  std::mt19937 rng(62);
  TernaryOp g = testing::random_majority_op(rng, Universe(4));
  try {
    ternary_closure(g, 5);
    // A tiny closure is possible; nothing to check in that case.
  } catch (const ClosureBoundError& e) {
    CHECK(e.partial_size() >= 5);
  }
}

TEST_CASE("random composition probes stay inside a closed set") {
  std::mt19937 rng(63);
  OpSet c = ternary_closure(fixtures::fixture("f1"));
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  for (int rep = 0; rep < 50; ++rep) {
    TernaryOp composed =
        compose(c[pick(rng)], c[pick(rng)], c[pick(rng)], c[pick(rng)]);
    CHECK(c.contains(composed));
  }
}

TEST_CASE("generates") {
  TernaryOp f1 = fixtures::fixture("f1");
  CHECK(generates(f1, fixtures::fixture("g1_1_1")));
  CHECK(generates(fixtures::fixture("g1_1_1"), f1));
  CHECK(!generates(projection(f1.universe(), 1), f1));
  CHECK(generates(f1, projection(f1.universe(), 2)));
  // Non-majority, non-projection targets can never appear in a
  // majority-generated ternary part.
  std::mt19937 rng(64);
  TernaryOp arbitrary = testing::random_op(rng, f1.universe());
  while (is_majority(arbitrary) || is_projection_table(5, arbitrary.table()))
    arbitrary = testing::random_op(rng, f1.universe());
  CHECK(!generates(f1, arbitrary));
}

TEST_CASE("mutual generation inside the 8-member family") {
  OpSet majority = majority_members(ternary_closure(fixtures::fixture("m3")));
  REQUIRE(majority.size() == 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(generates(majority[i], majority[j]));
}

TEST_CASE("minimality check on bundled generators") {
  MinimalityReport f1_report = minimality_check(fixtures::fixture("f1"));
  CHECK(f1_report.minimal);
  CHECK(f1_report.majority_count == 26);
  CHECK(f1_report.closure_size == 29);
  CHECK(!f1_report.counterexample.has_value());

  MinimalityReport m1_report = minimality_check(fixtures::fixture("m1"));
  CHECK(m1_report.minimal);
  CHECK(m1_report.majority_count == 1);
}

TEST_CASE("majority count equals closure size minus the projections") {
  for (const char* name : {"m1", "m2", "m3", "f1", "M2", "M3"}) {
    OpSet c = ternary_closure(fixtures::fixture(name));
    CHECK(majority_members(c).size() == c.size() - 3);
  }
}

TEST_CASE("the unique two-element majority operation is minimal") {
  Universe u(2);
  std::vector<std::uint8_t> table(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        table[static_cast<std::size_t>((a * 2 + b) * 2 + c)] =
            static_cast<std::uint8_t>((a + b + c) >= 2 ? 1 : 0);
  MinimalityReport report = minimality_check(TernaryOp(u, std::move(table)));
  CHECK(report.minimal);
  CHECK(report.majority_count == 1);
}

TEST_CASE("minimality check rejects bad inputs") {
  CHECK_THROWS_AS(minimality_check(projection(Universe(3), 1)), Error);
  CHECK_THROWS_AS(minimality_check(projection(Universe(1), 1)), Error);
}

TEST_CASE("a non-minimal operation yields a valid counterexample") {
  // Find the first non-minimal candidate in the three-element space.
  bool found = false;
  for (long idx = 0; idx < 729 && !found; ++idx) {
    // Decode by hand: base-3 digits over the six distinct triples.
    std::mt19937 unused;
    Universe u(3);
    std::vector<std::uint8_t> table(27);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          std::uint8_t v = 0;
          if (a == b || a == c)
            v = static_cast<std::uint8_t>(a);
          else if (b == c)
            v = static_cast<std::uint8_t>(b);
          table[static_cast<std::size_t>((a * 3 + b) * 3 + c)] = v;
        }
    long rest = idx;
    for (int a = 2; a >= 0; --a)
      for (int b = 2; b >= 0; --b)
        for (int c = 2; c >= 0; --c) {
          if (a == b || b == c || a == c) continue;
          table[static_cast<std::size_t>((a * 3 + b) * 3 + c)] =
              static_cast<std::uint8_t>(rest % 3);
          rest /= 3;
        }
    TernaryOp f(u, table);
    MinimalityReport report = minimality_check(f);
    if (report.minimal) continue;
    found = true;
    REQUIRE(report.counterexample.has_value());
    const TernaryOp& h = *report.counterexample;
    CHECK(is_majority(h));
    CHECK(generates(f, h));   // h lies in [f]
    CHECK(!generates(h, f));  // but does not regenerate f
  }
  CHECK(found);
}

TEST_CASE("regeneration witnesses evaluate back to the generator") {
  MinimalityReport report = minimality_check(fixtures::fixture("m3"), kDefaultClosureBound, true);
  REQUIRE(report.regeneration_witnesses.has_value());
  CHECK(report.regeneration_witnesses->size() == 2);  // m3's family has two classes
  for (const auto& [rep, term] : *report.regeneration_witnesses)
    CHECK(eval_term(term, rep) == fixtures::fixture("m3"));
}

TEST_CASE("menger table of the d-family") {
  OpSet c = ternary_closure(fixtures::fixture("m2"));
  MengerTable mt = menger_table(c);
  CHECK(mt.members == 6);
  // Composition with a projection outer returns the matching inner.
  const std::size_t p1 = mt.projections[0];
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t cc = 0; cc < 6; ++cc) CHECK(mt.at(p1, a, b, cc) == a);
}

TEST_CASE("menger table rejects open sets") {
  OpSet open(fixtures::u3());
  open.insert(fixtures::fixture("m3"));
  CHECK_THROWS_AS(menger_table(open), Error);
}

TEST_CASE("restriction of the four-element family is menger-isomorphic") {
  OpSet c4 = ternary_closure(fixtures::fixture("M3"));
  const std::vector<int> subset = {1, 2, 3};
  RestrictionHom rh = restriction_homomorphism(c4, subset);
  CHECK(rh.image.size() == c4.size());
  MengerTable mt_image = menger_table(rh.image);
  MengerTable mt_m3 = menger_table(ternary_closure(fixtures::fixture("m3")));
  CHECK(menger_canonical_key(mt_image) == menger_canonical_key(mt_m3));
}

TEST_CASE("restriction homomorphism rejects unpreserved subsets") {
  OpSet c = ternary_closure(fixtures::fixture("f1"));
  CHECK_THROWS_WITH(restriction_homomorphism(c, std::vector<int>{0, 3, 4}),
                    Catch::Matchers::ContainsSubstring("member"));
}

TEST_CASE("menger canonical keys separate the three-element families") {
  MengerTable a = menger_table(ternary_closure(fixtures::fixture("m2")));
  // Conjugated generator: same abstract algebra.
  TernaryOp moved = relabel(fixtures::fixture("m2"), Relabeling{2, 0, 1});
  MengerTable b = menger_table(ternary_closure(moved));
  CHECK(menger_canonical_key(a) == menger_canonical_key(b));

  MengerTable c = menger_table(ternary_closure(fixtures::fixture("m1")));
  CHECK(menger_canonical_key(a) != menger_canonical_key(c));
}

TEST_CASE("opset basics") {
  OpSet s(fixtures::u3());
  CHECK(s.insert(fixtures::fixture("m2")) == 0);
  CHECK(s.insert(fixtures::fixture("m2")) == 0);
  CHECK(s.insert(fixtures::fixture("m3")) == 1);
  CHECK(s.size() == 2);
  CHECK(s.contains(fixtures::fixture("m3")));
  CHECK(!s.contains(fixtures::fixture("m1")));
  CHECK_THROWS_AS(s.insert(fixtures::fixture("M1")), UniverseMismatchError);
}
