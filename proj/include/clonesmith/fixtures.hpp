#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clonesmith/star.hpp"
#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

/// Bundled reference operations: the 12 three-element minimal-clone
/// generators, the 12 four-element nonconservative ones, the 26-member
/// five-element family (f1, f2, g1..g6 with parameters u, v in {1, 1b}), and
/// the derived one-point extension f1_star. Every fixture is a majority
/// operation and its table is embedded in the binary.
namespace fixtures {

inline const Universe& u3() {
  static const Universe u({"1", "2", "3"});
  return u;
}
inline const Universe& u4() {
  static const Universe u({"1", "2", "3", "4"});
  return u;
}
inline const Universe& u5() {
  static const Universe u({"0", "1", "2", "1b", "2b"});
  return u;
}

namespace detail {

// The six pairwise distinct triples over three elements, in the fixed row
// order used by the three- and four-element tables below.
inline constexpr std::array<std::array<int, 3>, 6> kRowTriples3 = {{
    {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};

// Column values for the twelve three-element operations (0-based elements).
// Columns: m1, m2(=d1), d2, d3, m3, then the remaining seven members of the
// m3 family.
inline constexpr std::array<std::array<int, 6>, 12> kTable3Elt = {{
    {0, 0, 0, 0, 0, 0},  // m1
    {0, 1, 2, 1, 0, 2},  // m2 = d1
    {1, 2, 0, 0, 2, 1},  // d2
    {2, 0, 1, 2, 1, 0},  // d3
    {2, 2, 2, 0, 0, 0},  // m3
    {2, 0, 2, 2, 0, 0},
    {0, 2, 2, 0, 0, 2},
    {2, 2, 0, 0, 2, 0},
    {0, 0, 0, 2, 2, 2},
    {0, 2, 0, 0, 2, 2},
    {2, 0, 0, 2, 2, 0},
    {0, 0, 2, 2, 0, 2},
}};

// Column values for the twelve four-element operations on the distinct
// triples over {1,2,3} (block A) and, with element 1 replaced by 4, over
// {2,3,4} (block B, same values). Triples with underlying set {1,2,4} or
// {1,3,4} all map to 4. 0-based elements.
inline constexpr std::array<std::array<int, 6>, 12> kTable4Elt = {{
    {3, 3, 3, 3, 3, 3},  // M1
    {3, 1, 2, 1, 3, 2},  // M2
    {1, 2, 3, 3, 2, 1},  // D2
    {2, 3, 1, 2, 1, 3},  // D3
    {2, 2, 2, 3, 3, 3},  // M3
    {2, 3, 2, 2, 3, 3},
    {3, 2, 2, 3, 3, 2},
    {2, 2, 3, 3, 2, 3},
    {3, 3, 3, 2, 2, 2},
    {3, 2, 3, 3, 2, 2},
    {2, 3, 3, 2, 2, 3},
    {3, 3, 2, 2, 3, 2},
}};

// Five-element encoding: '0','1','2' are elements 0..2, 'B' is 1b (index 3),
// 'C' is 2b (index 4). Values may also be 'u' or 'v'.
inline int element_of(char c) {
  switch (c) {
    case '0': return 0;
    case '1': return 1;
    case '2': return 2;
    case 'B': return 3;
    case 'C': return 4;
  }
  throw InternalError("fixtures: bad element symbol");
}

struct SetRow5 {
  const char* set;     // three element symbols; covers all six permutations
  char value;
};
inline constexpr std::array<SetRow5, 5> kSetRows5 = {{
    {"01B", '1'},
    {"21B", '1'},
    {"02C", '2'},
    {"12C", '2'},
    {"B2C", '2'},
}};

// Each carries three triples sharing one value per column. Columns are
// f1, f2, g1..g6.
struct TripleGroupRow5 {
  const char* t1;
  const char* t2;
  const char* t3;
  const char* values;  // 8 symbols
};
inline constexpr std::array<TripleGroupRow5, 6> kTripleGroupRows5 = {{
    {"0B2", "01C", "012", "12122211"},
    {"B20", "1C0", "120", "12212121"},
    {"20B", "C01", "201", "12221112"},
    {"2B0", "C10", "210", "21121212"},
    {"B02", "10C", "102", "21112221"},
    {"02B", "0C1", "021", "21211122"},
}};

struct SingleRow5 {
  const char* triple;
  const char* values;  // 8 symbols, may contain 'u'/'v'
};
// Values on the {0,1b,2b} triples; the u/v slots are the two free choices of
// each g column.
inline constexpr std::array<SingleRow5, 6> kFreeRows5 = {{
    {"0BC", "12u222v1"},
    {"BC0", "122u212v"},
    {"C0B", "1222uv12"},
    {"CB0", "21v212u2"},
    {"B0C", "211v222u"},
    {"0CB", "2121vu22"},
}};
// Values on the {1,1b,2b} triples.
inline constexpr std::array<SingleRow5, 6> kMixedRows5 = {{
    {"C1B", "1B1BBB11"},
    {"1BC", "1BB1B1B1"},
    {"BC1", "1BBB111B"},
    {"B1C", "B11B1B1B"},
    {"1CB", "B111BBBB"},
    {"CB1", "B1B111BB"},
}};

inline std::vector<std::uint8_t> majority_forced_table(int n) {
  std::vector<std::uint8_t> table(static_cast<std::size_t>(n) * n * n, 255);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || a == c)
          table[static_cast<std::size_t>((a * n + b) * n + c)] = static_cast<std::uint8_t>(a);
        else if (b == c)
          table[static_cast<std::size_t>((a * n + b) * n + c)] = static_cast<std::uint8_t>(b);
      }
  return table;
}

inline void set_entry(std::vector<std::uint8_t>& table, int n, int a, int b, int c, int v) {
  table[static_cast<std::size_t>((a * n + b) * n + c)] = static_cast<std::uint8_t>(v);
}

inline TernaryOp finish(const Universe& u, std::vector<std::uint8_t> table) {
  for (std::uint8_t v : table)
    if (v == 255) throw InternalError("fixtures: incomplete table");
  return TernaryOp(u, std::move(table));
}

inline TernaryOp three_elt_op(int col) {
  auto table = majority_forced_table(3);
  for (int r = 0; r < 6; ++r) {
    const auto& t = kRowTriples3[static_cast<std::size_t>(r)];
    set_entry(table, 3, t[0], t[1], t[2],
              kTable3Elt[static_cast<std::size_t>(col)][static_cast<std::size_t>(r)]);
  }
  return finish(u3(), std::move(table));
}

inline TernaryOp four_elt_op(int col) {
  auto table = majority_forced_table(4);
  const auto& values = kTable4Elt[static_cast<std::size_t>(col)];
  for (int r = 0; r < 6; ++r) {
    const auto& t = kRowTriples3[static_cast<std::size_t>(r)];
    set_entry(table, 4, t[0], t[1], t[2], values[static_cast<std::size_t>(r)]);
    // Block B: the same values on the triples with element 1 traded for 4.
    std::array<int, 3> s;
    for (int k = 0; k < 3; ++k) s[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k)] == 0 ? 3 : t[static_cast<std::size_t>(k)];
    set_entry(table, 4, s[0], s[1], s[2], values[static_cast<std::size_t>(r)]);
  }
  // Triples meeting {1,2,4} or {1,3,4} (0-based {0,1,3} / {0,2,3}) map to 4.
  const std::array<std::array<int, 3>, 2> mixed_sets = {{{0, 1, 3}, {0, 2, 3}}};
  for (const auto& s : mixed_sets) {
    const std::array<std::array<int, 3>, 6> perms = {{
        {s[0], s[1], s[2]}, {s[0], s[2], s[1]}, {s[1], s[0], s[2]},
        {s[1], s[2], s[0]}, {s[2], s[0], s[1]}, {s[2], s[1], s[0]}}};
    for (const auto& p : perms) set_entry(table, 4, p[0], p[1], p[2], 3);
  }
  return finish(u4(), std::move(table));
}

inline int value_of(char symbol, int u, int v) {
  if (symbol == 'u') return u;
  if (symbol == 'v') return v;
  return element_of(symbol);
}

/// col: 0 = f1, 1 = f2, 2..7 = g1..g6. u, v are element indices (1 or 3),
/// ignored for f1 and f2.
inline TernaryOp five_elt_op(int col, int u = 1, int v = 1) {
  auto table = majority_forced_table(5);
  for (const auto& row : kSetRows5) {
    const int e0 = element_of(row.set[0]);
    const int e1 = element_of(row.set[1]);
    const int e2 = element_of(row.set[2]);
    const int val = element_of(row.value);
    const std::array<std::array<int, 3>, 6> perms = {{
        {e0, e1, e2}, {e0, e2, e1}, {e1, e0, e2}, {e1, e2, e0}, {e2, e0, e1}, {e2, e1, e0}}};
    for (const auto& p : perms) set_entry(table, 5, p[0], p[1], p[2], val);
  }
  for (const auto& row : kTripleGroupRows5) {
    const int val = value_of(row.values[col], u, v);
    for (const char* t : {row.t1, row.t2, row.t3})
      set_entry(table, 5, element_of(t[0]), element_of(t[1]), element_of(t[2]), val);
  }
  for (const auto& row : kFreeRows5)
    set_entry(table, 5, element_of(row.triple[0]), element_of(row.triple[1]),
              element_of(row.triple[2]), value_of(row.values[col], u, v));
  for (const auto& row : kMixedRows5)
    set_entry(table, 5, element_of(row.triple[0]), element_of(row.triple[1]),
              element_of(row.triple[2]), value_of(row.values[col], u, v));
  return finish(u5(), std::move(table));
}

}  // namespace detail

inline const std::array<std::string, 12>& three_elt_names() {
  static const std::array<std::string, 12> names = {
      "m1", "m2", "d2", "d3", "m3", "m3_2", "m3_3", "m3_4", "m3_5", "m3_6", "m3_7", "m3_8"};
  return names;
}

inline const std::array<std::string, 12>& four_elt_names() {
  static const std::array<std::string, 12> names = {
      "M1", "M2", "D2", "D3", "M3", "M3_2", "M3_3", "M3_4", "M3_5", "M3_6", "M3_7", "M3_8"};
  return names;
}

/// The twelve majority operations generating minimal clones on three
/// elements, in table column order.
inline std::vector<TernaryOp> three_elt_ops() {
  std::vector<TernaryOp> out;
  for (int col = 0; col < 12; ++col) out.push_back(detail::three_elt_op(col));
  return out;
}

/// The twelve nonconservative four-element generators, in table column order.
inline std::vector<TernaryOp> four_elt_ops() {
  std::vector<TernaryOp> out;
  for (int col = 0; col < 12; ++col) out.push_back(detail::four_elt_op(col));
  return out;
}

/// The 26-member five-element family: f1, f2, then g1..g6 each with
/// (u,v) in {1,1b} x {1,1b} (order (1,1), (1,1b), (1b,1), (1b,1b)).
inline std::vector<TernaryOp> five_elt_ops() {
  std::vector<TernaryOp> out;
  out.push_back(detail::five_elt_op(0));
  out.push_back(detail::five_elt_op(1));
  for (int g = 2; g < 8; ++g)
    for (int u : {1, 3})
      for (int v : {1, 3}) out.push_back(detail::five_elt_op(g, u, v));
  return out;
}

inline std::vector<std::string> five_elt_names() {
  std::vector<std::string> out = {"f1", "f2"};
  for (int g = 1; g <= 6; ++g)
    for (const char* u : {"1", "1b"})
      for (const char* v : {"1", "1b"})
        out.push_back("g" + std::to_string(g) + "_" + u + "_" + v);
  return out;
}

inline TernaryOp f1() { return detail::five_elt_op(0); }
inline TernaryOp f1_star() { return star_extend(f1(), 1); }

inline const std::map<std::string, TernaryOp>& catalog() {
  static const std::map<std::string, TernaryOp> all = [] {
    std::map<std::string, TernaryOp> out;
    auto ops3 = three_elt_ops();
    for (int i = 0; i < 12; ++i) out.emplace(three_elt_names()[static_cast<std::size_t>(i)], ops3[static_cast<std::size_t>(i)]);
    out.emplace("d1", ops3[1]);  // alias: m2 renamed
    auto ops4 = four_elt_ops();
    for (int i = 0; i < 12; ++i) out.emplace(four_elt_names()[static_cast<std::size_t>(i)], ops4[static_cast<std::size_t>(i)]);
    auto ops5 = five_elt_ops();
    auto names5 = five_elt_names();
    for (std::size_t i = 0; i < ops5.size(); ++i) out.emplace(names5[i], ops5[i]);
    out.emplace("f1_star", f1_star());
    for (const auto& [name, op] : out)
      if (!is_majority(op)) throw InternalError("fixture " + name + " is not a majority operation");
    return out;
  }();
  return all;
}

inline TernaryOp fixture(std::string_view name) {
  const auto& all = catalog();
  auto it = all.find(std::string(name));
  if (it == all.end()) throw Error("unknown fixture: " + std::string(name));
  return it->second;
}

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, op] : catalog()) out.push_back(name);
  return out;
}

}  // namespace fixtures
}  // namespace clonesmith
