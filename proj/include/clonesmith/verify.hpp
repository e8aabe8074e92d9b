#pragma once

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clonesmith/canonical.hpp"
#include "clonesmith/fixtures.hpp"
#include "clonesmith/io.hpp"
#include "clonesmith/menger.hpp"
#include "clonesmith/minimality.hpp"
#include "clonesmith/relations.hpp"
#include "clonesmith/search.hpp"
#include "clonesmith/star.hpp"
#include "clonesmith/term.hpp"

namespace clonesmith {
namespace verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

struct CheckFail : std::runtime_error {
  explicit CheckFail(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& detail) {
  if (!condition) throw CheckFail(detail);
}

template <typename Fn>
CheckResult run_check(const std::string& name, Fn&& body) {
  CheckResult result;
  result.name = name;
  const auto started = std::chrono::steady_clock::now();
  try {
    std::string detail;
    body(detail);
    result.passed = true;
    result.detail = detail;
  } catch (const CheckFail& e) {
    result.detail = e.what();
  } catch (const Error& e) {
    result.detail = e.what();
  } catch (const InternalError& e) {
    result.detail = std::string("internal consistency violation: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace detail

/// Fixture access used by the verification suite. The default reads the
/// embedded catalog; a file-backed lookup turns missing or corrupted fixture
/// files into named check failures.
using FixtureLookup = std::function<TernaryOp(const std::string&)>;

inline FixtureLookup embedded_fixtures() {
  return [](const std::string& name) { return fixtures::fixture(name); };
}

inline FixtureLookup directory_fixtures(const std::string& dir) {
  return [dir](const std::string& name) {
    const std::string path = dir + "/" + name + ".json";
    if (!std::filesystem::exists(path)) throw Error("fixture missing: " + path);
    return read_op_file(path);
  };
}

// ---------------------------------------------------------------------------
// Fixture re-derivations
// ---------------------------------------------------------------------------

inline std::vector<CheckResult> verify_fixture_suite(const FixtureLookup& fixture =
                                                         embedded_fixtures()) {
  using detail::require;
  using detail::run_check;
  std::vector<CheckResult> results;

  results.push_back(run_check("fixture catalog loads and is majority", [&](std::string& detail) {
    std::size_t count = 0;
    for (const auto& name : fixtures::fixture_names()) {
      TernaryOp op = fixture(name);
      require(is_majority(op), "fixture " + name + " is not a majority operation");
      ++count;
    }
    detail = std::to_string(count) + " fixtures";
  }));

  results.push_back(run_check("five-element family spot values", [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    require(f1(0, 1, 2) == 1, "f1(0,1,2) != 1");
    require(f1(2, 1, 0) == 2, "f1(2,1,0) != 2");
    require(f1(3, 1, 4) == 3, "f1(1b,1,2b) != 1b");
    require(is_cyclically_symmetric(f1), "f1 is not cyclically symmetric");
    require(is_cyclically_symmetric(fixture("f2")), "f2 is not cyclically symmetric");
    require(!is_cyclically_symmetric(fixture("g1_1_1")), "g1 should not be cyclically symmetric");
    detail = "f1 rows and cyclic symmetry check out";
  }));

  results.push_back(run_check("closure of f1 equals the bundled 26-member family",
                              [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    OpSet closure = ternary_closure(f1);
    OpSet majority = majority_members(closure);
    require(closure.size() == 29,
            "closure of f1 has " + std::to_string(closure.size()) + " members, expected 29");
    require(majority.size() == 26,
            "closure of f1 has " + std::to_string(majority.size()) +
                " majority members, expected 26");
    for (const auto& name : fixtures::five_elt_names()) {
      TernaryOp op = fixture(name);
      require(majority.contains(op),
              "five-element fixture " + name + " is missing from the closure of f1");
    }
    detail = "26 majority members, all bundled";
  }));

  results.push_back(run_check("invariant relations theta and rho", [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    const std::vector<std::pair<int, int>> theta_seeds = {{0, 0}, {1, 3}, {2, 4}};
    const std::vector<std::pair<int, int>> rho_seeds = {{2, 0}, {1, 3}, {0, 4}};
    BinaryRelation theta = generate_invariant_pairs(f1, theta_seeds);
    BinaryRelation rho = generate_invariant_pairs(f1, rho_seeds);
    const std::vector<std::pair<int, int>> theta_expected = {
        {0, 0}, {1, 1}, {1, 3}, {2, 2}, {2, 4}};
    const std::vector<std::pair<int, int>> rho_expected = {
        {0, 4}, {1, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {2, 2}};
    require(theta.pairs() == theta_expected, "theta does not match its displayed five pairs");
    require(rho.pairs() == rho_expected, "rho does not match its displayed seven pairs");
    detail = "theta: 5 pairs, rho: 7 pairs";
  }));

  results.push_back(run_check("g1 composition identities over f1", [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    const std::vector<std::pair<std::string, std::string>> identities = {
        {"g1_1_1", "d(x2,d(x2,x1,x3),d(x1,x2,x3))"},
        {"g1_1_1b", "d(x1,x2,d(x2,x1,x3))"},
        {"g1_1b_1", "d(x3,x2,d(x2,d(x2,x1,x3),d(x1,x2,x3)))"},
        {"g1_1b_1b", "d(x3,x2,d(x1,x2,d(x2,x1,x3)))"},
    };
    for (const auto& [name, text] : identities) {
      TernaryOp value = eval_term(parse_term(text), f1);
      require(value == fixture(name), "composition for " + name + " does not match its fixture");
    }
    detail = "all four g1 variants";
  }));

  results.push_back(run_check("variable permutations span the 26-member family",
                              [&](std::string& detail) {
    OpSet span(fixtures::u5());
    for (const char* base : {"f1", "g1_1_1", "g1_1_1b", "g1_1b_1", "g1_1b_1b"}) {
      TernaryOp op = fixture(base);
      for (const VarPerm& p : all_var_perms()) span.insert(permute_vars(op, p));
    }
    require(span.size() == 26, "variable permutations of f1 and the g1 variants span " +
                                   std::to_string(span.size()) + " operations, expected 26");
    for (const auto& name : fixtures::five_elt_names())
      require(span.contains(fixture(name)), "fixture " + name + " not reached by permutation");
    detail = "f1 + g1 variants cover all 26 up to variable permutation";
  }));

  results.push_back(run_check("f1 recovery composition from each g1 variant",
                              [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    for (const char* name : {"g1_1_1", "g1_1_1b", "g1_1b_1", "g1_1b_1b"}) {
      TernaryOp g = fixture(name);
      TernaryOp recovered = compose(g, permute_vars(g, VarPerm{1, 0, 2}),
                                    permute_vars(g, VarPerm{0, 2, 1}),
                                    permute_vars(g, VarPerm{2, 1, 0}));
      require(recovered == f1, std::string("recovery composition from ") + name + " missed f1");
    }
    detail = "g(g(x2,x1,x3),g(x1,x3,x2),g(x3,x2,x1)) = f1 for all four variants";
  }));

  results.push_back(run_check("four-case table for the free values", [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    BinaryRelation theta =
        generate_invariant_pairs(f1, std::vector<std::pair<int, int>>{{0, 0}, {1, 3}, {2, 4}});
    BinaryRelation rho =
        generate_invariant_pairs(f1, std::vector<std::pair<int, int>>{{2, 0}, {1, 3}, {0, 4}});
    // h(0,1,2) theta h(0,1b,2b) and h(2,1,0) rho h(0,1b,2b).
    const std::array<int, 3> query = {0, 3, 4};
    const std::array<int, 3> via_theta = {0, 1, 2};
    const std::array<int, 3> via_rho = {2, 1, 0};
    struct Case {
      int v012, v210;
      std::vector<int> expected;
    };
    const std::vector<Case> cases = {
        {2, 2, {2}}, {2, 1, {2}}, {1, 2, {1}}, {1, 1, {1, 3}}};
    for (const auto& c : cases) {
      PartialTernaryOp partial{fixtures::u5(), {{via_theta, c.v012}, {via_rho, c.v210}}};
      std::vector<int> from_theta = constrain_values(partial, theta, query, via_theta,
                                                     KnownSide::Left);
      std::vector<int> from_rho = constrain_values(partial, rho, query, via_rho, KnownSide::Left);
      std::vector<int> joint;
      std::set_intersection(from_theta.begin(), from_theta.end(), from_rho.begin(),
                            from_rho.end(), std::back_inserter(joint));
      require(joint == c.expected,
              "case h(0,1,2)=" + std::to_string(c.v012) + ", h(2,1,0)=" + std::to_string(c.v210) +
                  " admits the wrong value set");
    }
    detail = "all four cases reproduced";
  }));

  results.push_back(run_check("every family member preserves theta and rho",
                              [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    BinaryRelation theta =
        generate_invariant_pairs(f1, std::vector<std::pair<int, int>>{{0, 0}, {1, 3}, {2, 4}});
    BinaryRelation rho =
        generate_invariant_pairs(f1, std::vector<std::pair<int, int>>{{2, 0}, {1, 3}, {0, 4}});
    OpSet majority = majority_members(ternary_closure(f1));
    for (std::size_t i = 0; i < majority.size(); ++i) {
      require(preserves_relation(majority[i], theta),
              "closure member " + std::to_string(i) + " breaks theta");
      require(preserves_relation(majority[i], rho),
              "closure member " + std::to_string(i) + " breaks rho");
    }
    detail = "26 members preserve both relations";
  }));

  results.push_back(run_check("f1 restrictions land on bundled generators",
                              [&](std::string& detail) {
    TernaryOp f1 = fixture("f1");
    const std::vector<int> three = {0, 1, 3};
    const std::vector<int> four = {3, 0, 2, 1};
    require(preserves_subset(f1, three), "f1 does not preserve {0,1,1b}");
    require(preserves_subset(f1, four), "f1 does not preserve {1b,0,2,1}");
    require(are_isomorphic(restrict_op(f1, three), fixture("m1"), CanonMode::RelabelOnly)
                .has_value(),
            "f1 restricted to {0,1,1b} is not isomorphic to m1");
    require(are_isomorphic(restrict_op(f1, four), fixture("M3"), CanonMode::RelabelOnly)
                .has_value(),
            "f1 restricted to {1b,0,2,1} is not isomorphic to M3");
    require(are_isomorphic(restrict_op(f1, std::vector<int>{0, 1, 2}), fixture("m3"),
                           CanonMode::RelabelOnly)
                .has_value(),
            "f1 restricted to {0,1,2} is not isomorphic to m3");
    detail = "restrictions isomorphic to m1, M3 and m3";
  }));

  results.push_back(run_check("four-element generators restrict to three-element ones",
                              [&](std::string& detail) {
    const std::vector<int> subset = {1, 2, 3};  // labels 2,3,4
    auto ops4 = fixtures::four_elt_ops();
    auto names4 = fixtures::four_elt_names();
    for (std::size_t j = 0; j < ops4.size(); ++j) {
      TernaryOp op = fixture(names4[j]);
      require(preserves_subset(op, subset), names4[j] + " does not preserve {2,3,4}");
      TernaryOp restricted = restrict_op(op, subset);
      bool matched = false;
      for (const auto& name3 : fixtures::three_elt_names())
        matched = matched ||
                  are_isomorphic(restricted, fixture(name3), CanonMode::RelabelOnly).has_value();
      require(matched, names4[j] + " restricted to {2,3,4} matches no three-element generator");
    }
    detail = "all 12 restrictions isomorphic to bundled three-element generators";
  }));

  return results;
}

}  // namespace verify
}  // namespace clonesmith
