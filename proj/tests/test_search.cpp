#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "clonesmith/fixtures.hpp"
#include "clonesmith/minimality.hpp"
#include "clonesmith/search.hpp"

using namespace clonesmith;

namespace {

std::string temp_path(const std::string& leaf) {
  auto dir = std::filesystem::temp_directory_path() / "clonesmith-tests";
  std::filesystem::create_directories(dir);
  return (dir / leaf).string();
}

bool same_records(const std::vector<SearchRecord>& a, const std::vector<SearchRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].index != b[i].index || a[i].canonical_table != b[i].canonical_table ||
        a[i].majority_count != b[i].majority_count)
      return false;
  return true;
}

}  // namespace

TEST_CASE("orbit indexing") {
  const OrbitIndexing& o3 = OrbitIndexing::of(3);
  CHECK(o3.distinct_triples.size() == 6);
  CHECK(o3.orbit_reps.size() == 2);
  const OrbitIndexing& o4 = OrbitIndexing::of(4);
  CHECK(o4.distinct_triples.size() == 24);
  CHECK(o4.orbit_reps.size() == 8);
  const OrbitIndexing& o5 = OrbitIndexing::of(5);
  CHECK(o5.distinct_triples.size() == 60);
  CHECK(o5.orbit_reps.size() == 20);
  CHECK(std::is_sorted(o5.orbit_reps.begin(), o5.orbit_reps.end()));
  // Every orbit representative is minimal among its rotations.
  for (const auto& t : o5.orbit_reps) {
    std::array<std::uint8_t, 3> r1 = {t[1], t[2], t[0]};
    std::array<std::uint8_t, 3> r2 = {t[2], t[0], t[1]};
    CHECK(t <= r1);
    CHECK(t <= r2);
  }
}

TEST_CASE("candidate counts") {
  CHECK(candidate_count(3, SymmetryMode::Cyclic) == 9);
  CHECK(candidate_count(3, SymmetryMode::All) == 729);
  CHECK(candidate_count(4, SymmetryMode::Cyclic) == 65536);
  CHECK(index_to_string(candidate_count(5, SymmetryMode::Cyclic)) == "95367431640625");
}

TEST_CASE("index zero decodes to the all-zero candidate") {
  TernaryOp op = candidate_from_index(3, SymmetryMode::Cyclic, 0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        if (a != b && b != c && a != c) CHECK(op(a, b, c) == 0);
  // The constant fixture encodes to index zero in both modes.
  CHECK(candidate_index_of(fixtures::fixture("m1"), SymmetryMode::Cyclic) == 0);
  CHECK(candidate_index_of(fixtures::fixture("m1"), SymmetryMode::All) == 0);
}

TEST_CASE("candidate encode/decode round-trips") {
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<unsigned long long> draw(0, 0xffffffffffffffull);
  for (SymmetryMode mode : {SymmetryMode::Cyclic, SymmetryMode::All}) {
    const BigIndex total = candidate_count(4, mode);
    for (int rep = 0; rep < 1000; ++rep) {
      BigIndex idx = BigIndex(draw(rng)) % total;
      TernaryOp op = candidate_from_index(4, mode, idx);
      CHECK(is_majority(op));
      if (mode == SymmetryMode::Cyclic) CHECK(is_cyclically_symmetric(op));
      CHECK(candidate_index_of(op, mode) == idx);
    }
  }
}

TEST_CASE("candidate index range errors") {
  CHECK_THROWS_AS(candidate_from_index(3, SymmetryMode::Cyclic, 9), Error);
  CHECK_THROWS_AS(candidate_from_index(3, SymmetryMode::Cyclic, BigIndex(-1)), Error);
  CHECK_THROWS_AS(candidate_index_of(projection(Universe(3), 1), SymmetryMode::All), Error);
  CHECK_THROWS_AS(candidate_index_of(fixtures::fixture("d1"), SymmetryMode::Cyclic), Error);
}

TEST_CASE("f1 sits at its encoded index") {
  const BigIndex idx = candidate_index_of(fixtures::f1(), SymmetryMode::Cyclic);
  TernaryOp decoded = candidate_from_index(5, SymmetryMode::Cyclic, idx);
  CHECK(decoded.table() == fixtures::f1().table());
}

TEST_CASE("three-element search catalogs the bundled generators") {
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  SearchResult res = run_search(cfg);
  CHECK(res.scanned == 729);
  CHECK(res.undecided.empty());

  std::multiset<std::size_t> counts;
  for (const auto& r : res.records) counts.insert(r.majority_count);
  CHECK(counts == std::multiset<std::size_t>({1, 3, 8, 8}));

  std::set<std::vector<std::uint8_t>> hit_tables;
  for (const auto& r : res.records) hit_tables.insert(r.canonical_table);
  for (const auto& name : fixtures::three_elt_names()) {
    auto canon = canonical_form(fixtures::fixture(name), CanonMode::RelabelAndVars).op.table();
    CHECK(hit_tables.count(canon) == 1);
  }

  // Soundness: every hit re-verifies from scratch.
  for (const auto& r : res.records) {
    TernaryOp generator = candidate_from_index(3, SymmetryMode::All, r.index);
    MinimalityReport report = minimality_check(generator);
    CHECK(report.minimal);
    CHECK(report.majority_count == r.majority_count);
    CHECK(report.closure_size == r.closure_size);
  }
}

TEST_CASE("canonical-first pruning agrees with the ground-truth run") {
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  SearchResult full = run_search(cfg);
  cfg.canonical_first = true;
  SearchResult pruned = run_search(cfg);
  std::set<std::vector<std::uint8_t>> full_tables, pruned_tables;
  for (const auto& r : full.records) full_tables.insert(r.canonical_table);
  for (const auto& r : pruned.records) pruned_tables.insert(r.canonical_table);
  CHECK(full_tables == pruned_tables);
}

TEST_CASE("skipping conservative candidates removes all three-element hits") {
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  cfg.skip_conservative = true;
  SearchResult res = run_search(cfg);
  CHECK(res.records.empty());
}

TEST_CASE("search is deterministic across worker counts") {
  SearchConfig cfg;
  cfg.n = 4;
  cfg.mode = SymmetryMode::Cyclic;
  cfg.lo = 0;
  cfg.hi = BigIndex(2048);
  cfg.canonical_first = true;
  cfg.jobs = 1;
  SearchResult one = run_search(cfg);
  cfg.jobs = 3;
  SearchResult three = run_search(cfg);
  CHECK(same_records(one.records, three.records));
}

TEST_CASE("checkpoint resume reproduces the straight run") {
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  SearchResult straight = run_search(cfg);

  const std::string cp = temp_path("resume.checkpoint.json");
  std::filesystem::remove(cp);
  SearchConfig half = cfg;
  half.checkpoint_path = cp;
  half.hi = BigIndex(300);
  run_search(half);
  SearchConfig rest = cfg;
  rest.checkpoint_path = cp;
  SearchResult resumed = run_search(rest);
  CHECK(resumed.resumed);
  CHECK(same_records(straight.records, resumed.records));
  CHECK(resumed.next_index == 729);
}

TEST_CASE("corrupt checkpoints are refused") {
  const std::string cp = temp_path("corrupt.checkpoint.json");
  write_file(cp, "{ not json");
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  cfg.checkpoint_path = cp;
  CHECK_THROWS_AS(run_search(cfg), CheckpointError);

  // A checkpoint for a different search is also refused.
  write_checkpoint(cp, Checkpoint{4, SymmetryMode::Cyclic, BigIndex(10), {}});
  CHECK_THROWS_AS(run_search(cfg), CheckpointError);

  // As is one pointing outside the requested range.
  write_checkpoint(cp, Checkpoint{3, SymmetryMode::All, BigIndex(10), {}});
  SearchConfig narrow = cfg;
  narrow.lo = 400;
  CHECK_THROWS_AS(run_search(narrow), CheckpointError);
}

TEST_CASE("search records round-trip through JSON") {
  SearchRecord r;
  r.index = BigIndex("95367431640624");
  r.canonical_table = {0, 1, 2, 1, 0};
  r.majority_count = 26;
  r.closure_size = 29;
  r.conservative = false;
  r.cyclic = true;
  SearchRecord back = search_record_from_json(search_record_to_json(r));
  CHECK(back.index == r.index);
  CHECK(back.canonical_table == r.canonical_table);
  CHECK(back.majority_count == r.majority_count);
  CHECK(back.closure_size == r.closure_size);
  CHECK(back.conservative == r.conservative);
  CHECK(back.cyclic == r.cyclic);
}

TEST_CASE("index strings reject garbage") {
  CHECK_THROWS_AS(index_from_string("12a3"), ParseError);
  CHECK_THROWS_AS(index_from_string(""), ParseError);
  CHECK(index_from_string("95367431640625") == candidate_count(5, SymmetryMode::Cyclic));
}

TEST_CASE("search range validation") {
  SearchConfig cfg;
  cfg.n = 3;
  cfg.mode = SymmetryMode::All;
  cfg.lo = 5;
  cfg.hi = BigIndex(3);
  CHECK_THROWS_AS(run_search(cfg), Error);
  cfg.lo = 0;
  cfg.hi = BigIndex(10000);
  CHECK_THROWS_AS(run_search(cfg), Error);
}
