#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "clonesmith/minimality.hpp"
#include "clonesmith/op_set.hpp"
#include "clonesmith/relations.hpp"
#include "clonesmith/term.hpp"
#include "clonesmith/ternary_op.hpp"

namespace clonesmith {

using OrderedJson = nlohmann::ordered_json;

inline OrderedJson op_to_json(const TernaryOp& op) {
  OrderedJson j;
  j["size"] = op.size();
  j["labels"] = op.universe().labels();
  j["table"] = op.table();
  return j;
}

inline TernaryOp op_from_json(const OrderedJson& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("labels") || !j.contains("table"))
    throw ParseError("operation file must be an object with size, labels and table");
  const int size = j.at("size").get<int>();
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  if (static_cast<int>(labels.size()) != size)
    throw ParseError("operation file: label count differs from size");
  std::vector<int> raw = j.at("table").get<std::vector<int>>();
  std::vector<std::uint8_t> table;
  table.reserve(raw.size());
  for (int v : raw) {
    if (v < 0 || v >= size) throw ParseError("operation file: table entry out of range");
    table.push_back(static_cast<std::uint8_t>(v));
  }
  return TernaryOp(Universe(std::move(labels)), std::move(table));
}

/// Canonical single-line-per-field serialization; identical inputs always
/// produce identical bytes, so files round-trip bit-exactly.
inline std::string op_to_string(const TernaryOp& op) { return op_to_json(op).dump(2) + "\n"; }

inline TernaryOp op_from_string(const std::string& text) {
  OrderedJson j;
  try {
    j = OrderedJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("operation file: ") + e.what());
  }
  return op_from_json(j);
}

inline OrderedJson opset_to_json(const OpSet& s) {
  OrderedJson j;
  j["universe"] = {{"size", s.universe().size()}, {"labels", s.universe().labels()}};
  OrderedJson members = OrderedJson::array();
  for (const auto& m : s.members()) members.push_back(m.table());
  j["members"] = std::move(members);
  j["closed"] = s.closed();
  return j;
}

inline OrderedJson relation_to_json(const BinaryRelation& rel) {
  OrderedJson pairs = OrderedJson::array();
  for (const auto& [a, b] : rel.pairs()) pairs.push_back(OrderedJson::array({a, b}));
  OrderedJson j;
  j["pairs"] = std::move(pairs);
  return j;
}

inline OrderedJson minimality_report_to_json(const MinimalityReport& report) {
  OrderedJson j;
  j["generator"] = op_to_json(report.generator);
  j["minimal"] = report.minimal;
  j["closure_size"] = report.closure_size;
  j["majority_count"] = report.majority_count;
  j["counterexample"] = report.counterexample ? op_to_json(*report.counterexample)
                                              : OrderedJson(nullptr);
  if (report.regeneration_witnesses) {
    OrderedJson witnesses = OrderedJson::array();
    for (const auto& [rep, term] : *report.regeneration_witnesses) {
      OrderedJson w;
      w["representative"] = rep.table();
      w["term"] = format_term(term);
      witnesses.push_back(std::move(w));
    }
    j["regeneration_witnesses"] = std::move(witnesses);
  } else {
    j["regeneration_witnesses"] = nullptr;
  }
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("short write: " + path);
}

/// Temp-file-plus-rename write; readers never observe a partial file.
inline void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  write_file(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("atomic rename failed for " + path + ": " + ec.message());
}

inline TernaryOp read_op_file(const std::string& path) {
  try {
    return op_from_string(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_op_file(const std::string& path, const TernaryOp& op) {
  write_file(path, op_to_string(op));
}

}  // namespace clonesmith
