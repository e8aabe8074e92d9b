#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "clonesmith/canonical.hpp"
#include "clonesmith/fixtures.hpp"
#include "test_util.hpp"

using namespace clonesmith;

TEST_CASE("canonical form is orbit-invariant") {
  std::mt19937 rng(51);
  Universe u(4);
  for (int rep = 0; rep < 3; ++rep) {
    TernaryOp op = testing::random_majority_op(rng, u);
    CanonicalForm canon = canonical_form(op, CanonMode::RelabelAndVars);
    for (int k = 0; k < 4; ++k) {
      Relabeling sigma = testing::random_relabeling(rng, 4);
      TernaryOp moved = relabel(op, sigma);
      CHECK(canonical_form(moved, CanonMode::RelabelAndVars).op.table() == canon.op.table());
      for (const VarPerm& p : all_var_perms())
        CHECK(canonical_form(permute_vars(moved, p), CanonMode::RelabelAndVars).op.table() ==
              canon.op.table());
    }
  }
}

TEST_CASE("canonical form witness reproduces the canonical table") {
  std::mt19937 rng(52);
  for (int n : {3, 4, 5}) {
    Universe u(n);
    TernaryOp op = testing::random_majority_op(rng, u);
    for (CanonMode mode : {CanonMode::RelabelOnly, CanonMode::RelabelAndVars}) {
      CanonicalForm canon = canonical_form(op, mode);
      CHECK(relabel(permute_vars(op, canon.pi), canon.sigma) == canon.op);
    }
  }
}

TEST_CASE("f1 and f2 share a canonical form") {
  CHECK(canonical_form(fixtures::fixture("f1"), CanonMode::RelabelAndVars).op.table() ==
        canonical_form(fixtures::fixture("f2"), CanonMode::RelabelAndVars).op.table());
}

TEST_CASE("d1 is its own relabel-only canonical form") {
  TernaryOp d1 = fixtures::fixture("d1");
  CHECK(canonical_form(d1, CanonMode::RelabelOnly).op.table() == d1.table());
}

TEST_CASE("canonical form is idempotent") {
  std::mt19937 rng(53);
  TernaryOp op = testing::random_majority_op(rng, Universe(4));
  for (CanonMode mode : {CanonMode::RelabelOnly, CanonMode::RelabelAndVars}) {
    TernaryOp canon = canonical_form(op, mode).op;
    CHECK(canonical_form(canon, mode).op.table() == canon.table());
  }
}

TEST_CASE("is_canonical_representative agrees with canonical_form") {
  std::mt19937 rng(54);
  Universe u(3);
  for (int rep = 0; rep < 40; ++rep) {
    TernaryOp op = testing::random_majority_op(rng, u);
    for (CanonMode mode : {CanonMode::RelabelOnly, CanonMode::RelabelAndVars}) {
      const bool canonical = canonical_form(op, mode).op.table() == op.table();
      CHECK(is_canonical_representative(op, mode) == canonical);
    }
  }
}

TEST_CASE("are_isomorphic basics") {
  TernaryOp f1 = fixtures::fixture("f1");
  auto self = are_isomorphic(f1, f1, CanonMode::RelabelAndVars);
  REQUIRE(self.has_value());
  CHECK(self->first == identity_relabeling(5));
  CHECK(self->second == kIdentityVarPerm);

  CHECK(!are_isomorphic(fixtures::fixture("m1"), fixtures::fixture("m2"),
                        CanonMode::RelabelAndVars)
             .has_value());
  CHECK_THROWS_AS(
      are_isomorphic(fixtures::fixture("m1"), fixtures::fixture("M1"), CanonMode::RelabelOnly),
      Error);
}

TEST_CASE("are_isomorphic finds the restriction of f1 inside the three-element family") {
  // Oracle: direct search over the six relabelings.
  TernaryOp restricted = restrict_op(fixtures::fixture("f1"), std::vector<int>{0, 1, 2});
  TernaryOp m3 = fixtures::fixture("m3");
  bool oracle = false;
  Relabeling sigma = identity_relabeling(3);
  do {
    oracle = oracle || relabel(restricted, sigma) == TernaryOp(restricted.universe(), m3.table());
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  CHECK(oracle);

  auto witness = are_isomorphic(restricted, m3, CanonMode::RelabelOnly);
  REQUIRE(witness.has_value());
  CHECK(relabel(restricted, witness->first).table() == m3.table());
}
