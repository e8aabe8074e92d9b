#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "clonesmith/canonical.hpp"
#include "clonesmith/io.hpp"
#include "clonesmith/minimality.hpp"
#include "clonesmith/op_set.hpp"
#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

/// Candidate indices; 5^20 already overflows 32-bit tooling and larger bases
/// overflow 64-bit, so indices are arbitrary precision and serialize as
/// decimal strings.
using BigIndex = boost::multiprecision::cpp_int;

inline std::string index_to_string(const BigIndex& i) { return i.str(); }

inline BigIndex index_from_string(const std::string& s) {
  try {
    if (s.empty()) throw std::runtime_error("empty");
    for (char c : s)
      if (c < '0' || c > '9') throw std::runtime_error("digit");
    return BigIndex(s);
  } catch (const std::runtime_error&) {
    throw ParseError("not a decimal candidate index: \"" + s + "\"");
  }
}

enum class SymmetryMode { Cyclic, All };

inline std::string to_string(SymmetryMode mode) {
  return mode == SymmetryMode::Cyclic ? "cyclic" : "all";
}

inline SymmetryMode symmetry_mode_from_string(const std::string& s) {
  if (s == "cyclic") return SymmetryMode::Cyclic;
  if (s == "all") return SymmetryMode::All;
  throw ParseError("unknown symmetry mode: " + s);
}

/// The pairwise distinct triples over n elements and their cyclic orbits.
/// Each orbit holds the three rotations of its representative, where the
/// representative is the lexicographically smallest rotation; orbits are
/// sorted by representative. A majority operation is determined by its
/// values on distinct triples, and a cyclically symmetric one by one value
/// per orbit.
struct OrbitIndexing {
  int n = 0;
  std::vector<std::array<std::uint8_t, 3>> distinct_triples;  // lex order
  std::vector<std::array<std::uint8_t, 3>> orbit_reps;        // lex order

  static const OrbitIndexing& of(int n) {
    static std::map<int, OrbitIndexing> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 2) throw Error("orbit indexing needs a universe of size >= 2");
    OrbitIndexing oi;
    oi.n = n;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          if (a == b || b == c || a == c) continue;
          const std::array<std::uint8_t, 3> t = {static_cast<std::uint8_t>(a),
                                                 static_cast<std::uint8_t>(b),
                                                 static_cast<std::uint8_t>(c)};
          oi.distinct_triples.push_back(t);
          const std::array<std::uint8_t, 3> r1 = {t[1], t[2], t[0]};
          const std::array<std::uint8_t, 3> r2 = {t[2], t[0], t[1]};
          if (t <= r1 && t <= r2) oi.orbit_reps.push_back(t);
        }
    return cache.emplace(n, std::move(oi)).first->second;
  }

  std::size_t position_count(SymmetryMode mode) const {
    return mode == SymmetryMode::Cyclic ? orbit_reps.size() : distinct_triples.size();
  }
};

/// Number of candidate operations: one base-n digit per orbit (cyclic mode)
/// or per distinct triple (all mode).
inline BigIndex candidate_count(int n, SymmetryMode mode) {
  const auto& oi = OrbitIndexing::of(n);
  return boost::multiprecision::pow(BigIndex(n),
                                    static_cast<unsigned>(oi.position_count(mode)));
}

namespace detail {

/// Base-n digits of index, most significant digit first (digit 0 belongs to
/// the first orbit / triple).
inline std::vector<int> index_digits(int n, std::size_t positions, BigIndex index) {
  std::vector<int> digits(positions, 0);
  for (std::size_t k = positions; k > 0; --k) {
    digits[k - 1] = static_cast<int>(index % n);
    index /= n;
  }
  if (index != 0) throw Error("candidate index out of range");
  return digits;
}

inline void fill_candidate_table(std::vector<std::uint8_t>& table, const OrbitIndexing& oi,
                                 SymmetryMode mode, const std::vector<int>& digits) {
  const int n = oi.n;
  if (mode == SymmetryMode::Cyclic) {
    for (std::size_t k = 0; k < oi.orbit_reps.size(); ++k) {
      const auto& t = oi.orbit_reps[k];
      const std::uint8_t v = static_cast<std::uint8_t>(digits[k]);
      table[static_cast<std::size_t>((t[0] * n + t[1]) * n + t[2])] = v;
      table[static_cast<std::size_t>((t[1] * n + t[2]) * n + t[0])] = v;
      table[static_cast<std::size_t>((t[2] * n + t[0]) * n + t[1])] = v;
    }
  } else {
    for (std::size_t k = 0; k < oi.distinct_triples.size(); ++k) {
      const auto& t = oi.distinct_triples[k];
      table[static_cast<std::size_t>((t[0] * n + t[1]) * n + t[2])] =
          static_cast<std::uint8_t>(digits[k]);
    }
  }
}

inline std::vector<std::uint8_t> majority_base_table(int n) {
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::uint8_t v;
        if (a == b || a == c)
          v = static_cast<std::uint8_t>(a);
        else if (b == c)
          v = static_cast<std::uint8_t>(b);
        else
          v = 0;
        table[static_cast<std::size_t>((a * n + b) * n + c)] = v;
      }
  return table;
}

}  // namespace detail

/// Decodes a candidate index into the majority operation with the encoded
/// values on distinct triples (one value per orbit in cyclic mode, applied
/// to all three rotations). Inverse of candidate_index_of.
inline TernaryOp candidate_from_index(int n, SymmetryMode mode, const BigIndex& index) {
  if (index < 0) throw Error("candidate index out of range");
  const auto& oi = OrbitIndexing::of(n);
  const auto digits = detail::index_digits(n, oi.position_count(mode), index);
  std::vector<std::uint8_t> table = detail::majority_base_table(n);
  detail::fill_candidate_table(table, oi, mode, digits);
  return TernaryOp(Universe(n), std::move(table));
}

/// Encodes a majority operation (cyclically symmetric in cyclic mode) back
/// into its candidate index.
inline BigIndex candidate_index_of(const TernaryOp& op, SymmetryMode mode) {
  if (!is_majority(op)) throw Error("candidate_index_of: operation is not majority");
  if (mode == SymmetryMode::Cyclic && !is_cyclically_symmetric(op))
    throw Error("candidate_index_of: operation is not cyclically symmetric");
  const int n = op.size();
  const auto& oi = OrbitIndexing::of(n);
  BigIndex index = 0;
  if (mode == SymmetryMode::Cyclic) {
    for (const auto& t : oi.orbit_reps) index = index * n + op(t[0], t[1], t[2]);
  } else {
    for (const auto& t : oi.distinct_triples) index = index * n + op(t[0], t[1], t[2]);
  }
  return index;
}

struct SearchConfig {
  int n = 3;
  SymmetryMode mode = SymmetryMode::All;
  // Half-open index range; an absent hi means the full candidate count.
  BigIndex lo = 0;
  std::optional<BigIndex> hi;
  int jobs = 1;
  std::string checkpoint_path;  // empty disables checkpointing
  std::size_t closure_bound = kDefaultClosureBound;
  bool skip_conservative = false;
  bool canonical_first = false;
  // Called after each merged batch with (next_index, hi).
  std::function<void(const BigIndex&, const BigIndex&)> progress;
};

struct SearchRecord {
  BigIndex index;  // first candidate index hitting this canonical class
  std::vector<std::uint8_t> canonical_table;
  std::size_t majority_count = 0;
  std::size_t closure_size = 0;
  bool conservative = false;
  bool cyclic = false;
};

struct SearchResult {
  int n = 3;
  SymmetryMode mode = SymmetryMode::All;
  std::vector<SearchRecord> records;    // canonical classes, first-hit order
  std::vector<BigIndex> undecided;      // indices whose verdict hit the bound
  BigIndex next_index = 0;              // == hi once complete
  BigIndex scanned = 0;                 // candidates examined in this run
  bool resumed = false;
};

inline OrderedJson search_record_to_json(const SearchRecord& r) {
  OrderedJson j;
  j["index"] = index_to_string(r.index);
  j["canonical_table"] = r.canonical_table;
  j["majority_count"] = r.majority_count;
  j["closure_size"] = r.closure_size;
  j["conservative"] = r.conservative;
  j["cyclic"] = r.cyclic;
  return j;
}

inline SearchRecord search_record_from_json(const OrderedJson& j) {
  SearchRecord r;
  r.index = index_from_string(j.at("index").get<std::string>());
  for (int v : j.at("canonical_table").get<std::vector<int>>())
    r.canonical_table.push_back(static_cast<std::uint8_t>(v));
  r.majority_count = j.at("majority_count").get<std::size_t>();
  r.closure_size = j.at("closure_size").get<std::size_t>();
  r.conservative = j.at("conservative").get<bool>();
  r.cyclic = j.at("cyclic").get<bool>();
  return r;
}

struct Checkpoint {
  int n = 0;
  SymmetryMode mode = SymmetryMode::All;
  BigIndex next_index = 0;
  std::vector<SearchRecord> hits;
};

inline void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  OrderedJson j;
  j["n"] = cp.n;
  j["mode"] = to_string(cp.mode);
  j["next_index"] = index_to_string(cp.next_index);
  OrderedJson hits = OrderedJson::array();
  for (const auto& r : cp.hits) hits.push_back(search_record_to_json(r));
  j["hits"] = std::move(hits);
  atomic_write_file(path, j.dump(2) + "\n");
}

inline Checkpoint read_checkpoint(const std::string& path) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(read_file(path));
    Checkpoint cp;
    cp.n = j.at("n").get<int>();
    cp.mode = symmetry_mode_from_string(j.at("mode").get<std::string>());
    cp.next_index = index_from_string(j.at("next_index").get<std::string>());
    for (const auto& h : j.at("hits")) cp.hits.push_back(search_record_from_json(h));
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("refusing to resume from corrupt checkpoint " + path + ": " + e.what());
  } catch (const ParseError& e) {
    throw CheckpointError("refusing to resume from corrupt checkpoint " + path + ": " + e.what());
  }
}

namespace detail {

struct WorkerOutput {
  std::vector<SearchRecord> hits;       // in index order, not yet deduplicated
  std::vector<BigIndex> undecided;
};

/// Scans [begin, end) and classifies every candidate. Hits carry their own
/// candidate index; deduplication happens at merge time.
inline void scan_range(const SearchConfig& config, const OrbitIndexing& oi,
                       const Universe& universe, const std::vector<std::uint8_t>& base_table,
                       BigIndex begin, BigIndex end, WorkerOutput& out) {
  if (begin >= end) return;
  const int n = config.n;
  const std::size_t positions = oi.position_count(config.mode);
  std::vector<int> digits = index_digits(n, positions, begin);
  for (BigIndex i = begin; i < end; ++i) {
    std::vector<std::uint8_t> table = base_table;
    fill_candidate_table(table, oi, config.mode, digits);
    TernaryOp op(universe, std::move(table));

    bool process = true;
    if (config.skip_conservative && is_conservative(op)) process = false;
    if (process && config.canonical_first &&
        !is_canonical_representative(op, CanonMode::RelabelAndVars))
      process = false;

    if (process) {
      MinimalityDecision decision = decide_minimality(op, config.closure_bound);
      if (decision.verdict == MinimalityVerdict::Minimal) {
        SearchRecord r;
        r.index = i;
        r.canonical_table = canonical_form(op, CanonMode::RelabelAndVars).op.table();
        r.majority_count = decision.majority_count;
        r.closure_size = decision.closure_size;
        r.conservative = is_conservative(op);
        r.cyclic = config.mode == SymmetryMode::Cyclic || is_cyclically_symmetric(op);
        out.hits.push_back(std::move(r));
      } else if (decision.verdict == MinimalityVerdict::Undecided) {
        out.undecided.push_back(i);
      }
    }

    // Increment the digit vector (least significant digit last).
    for (std::size_t k = positions; k > 0; --k) {
      if (++digits[k - 1] < n) break;
      digits[k - 1] = 0;
    }
  }
}

}  // namespace detail

/// Exhaustive minimality search over an index range. Work is split into
/// batches; within a batch each worker owns one contiguous sub-range, and the
/// merged hit stream (in index order) is deduplicated by canonical form, so
/// the catalog is identical for every worker count and across checkpoint
/// resumes. Checkpoints are written atomically about every 10 000 candidates
/// or 30 seconds, whichever comes first.
inline SearchResult run_search(const SearchConfig& config) {
  const BigIndex total = candidate_count(config.n, config.mode);
  BigIndex lo = config.lo;
  BigIndex hi = config.hi ? *config.hi : total;
  if (lo < 0 || lo > hi || hi > total)
    throw Error("search range [" + index_to_string(lo) + ", " + index_to_string(hi) +
                ") is not within the candidate space of size " + index_to_string(total));

  SearchResult result;
  result.n = config.n;
  result.mode = config.mode;
  result.next_index = lo;

  // Dedup set over canonical tables.
  std::unordered_set<std::uint64_t> seen_hashes;
  std::vector<std::vector<std::uint8_t>> seen_tables;
  auto canonical_is_new = [&](const std::vector<std::uint8_t>& t) {
    if (seen_hashes.count(fnv1a(t))) {
      for (const auto& s : seen_tables)
        if (s == t) return false;
    }
    seen_hashes.insert(fnv1a(t));
    seen_tables.push_back(t);
    return true;
  };

  if (!config.checkpoint_path.empty() && std::filesystem::exists(config.checkpoint_path)) {
    Checkpoint cp = read_checkpoint(config.checkpoint_path);
    if (cp.n != config.n || cp.mode != config.mode)
      throw CheckpointError("checkpoint " + config.checkpoint_path +
                            " belongs to a different search (n=" + std::to_string(cp.n) +
                            ", mode=" + to_string(cp.mode) + ")");
    if (cp.next_index < lo || cp.next_index > hi)
      throw CheckpointError("checkpoint next_index " + index_to_string(cp.next_index) +
                            " lies outside the requested range");
    for (auto& r : cp.hits) {
      canonical_is_new(r.canonical_table);
      result.records.push_back(std::move(r));
    }
    result.next_index = cp.next_index;
    result.resumed = true;
  }

  const auto& oi = OrbitIndexing::of(config.n);
  const Universe universe(config.n);
  const std::vector<std::uint8_t> base_table = detail::majority_base_table(config.n);

  auto now = [] { return std::chrono::steady_clock::now(); };
  auto last_write = now();
  BigIndex since_write = 0;
  std::size_t batch_size = 2048;

  while (result.next_index < hi) {
    BigIndex batch_end = result.next_index + batch_size;
    if (batch_end > hi) batch_end = hi;
    const BigIndex batch_count = batch_end - result.next_index;

    const int jobs = std::max(1, config.jobs);
    std::vector<detail::WorkerOutput> outputs(static_cast<std::size_t>(jobs));
    const auto batch_started = now();
    if (jobs == 1) {
      detail::scan_range(config, oi, universe, base_table, result.next_index, batch_end,
                         outputs[0]);
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < jobs; ++w) {
        const BigIndex ws = result.next_index + batch_count * w / jobs;
        const BigIndex we = result.next_index + batch_count * (w + 1) / jobs;
        threads.emplace_back([&, ws, we, w] {
          detail::scan_range(config, oi, universe, base_table, ws, we,
                             outputs[static_cast<std::size_t>(w)]);
        });
      }
      for (auto& t : threads) t.join();
    }

    for (auto& out : outputs) {
      for (auto& hit : out.hits)
        if (canonical_is_new(hit.canonical_table)) result.records.push_back(std::move(hit));
      for (auto& u : out.undecided) result.undecided.push_back(std::move(u));
    }
    result.scanned += batch_count;
    since_write += batch_count;
    result.next_index = batch_end;

    const double batch_seconds =
        std::chrono::duration<double>(now() - batch_started).count();
    if (batch_seconds > 15.0 && batch_size > 128)
      batch_size /= 2;
    else if (batch_seconds < 5.0 && batch_size < 10'000)
      batch_size = std::min<std::size_t>(batch_size * 2, 10'000);

    const bool due = since_write >= 10'000 ||
                     std::chrono::duration<double>(now() - last_write).count() >= 30.0 ||
                     result.next_index == hi;
    if (!config.checkpoint_path.empty() && due) {
      write_checkpoint(config.checkpoint_path,
                       Checkpoint{config.n, config.mode, result.next_index, result.records});
      last_write = now();
      since_write = 0;
    }
    if (config.progress) config.progress(result.next_index, hi);
  }
  return result;
}

}  // namespace clonesmith
