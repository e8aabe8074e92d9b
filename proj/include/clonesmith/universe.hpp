#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clonesmith/error.hpp"

namespace clonesmith {

// Tables are n^3 entries and canonicalization enumerates n! relabelings, so
// universes are capped well above anything the bundled constructions need
// (they stop at n = 6).
inline constexpr int kMaxUniverseSize = 12;

/// A finite base set. Elements are the indices 0..n-1; each carries a display
/// label. Immutable and cheap to copy (shared representation).
class Universe {
 public:
  explicit Universe(std::vector<std::string> labels)
      : data_(std::make_shared<const Data>(Data{std::move(labels)})) {
    validate();
  }

  /// Universe with default labels "0", "1", ..., "n-1".
  explicit Universe(int size) : Universe(default_labels(size)) {}

  int size() const { return static_cast<int>(data_->labels.size()); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::string& label(int e) const { return data_->labels.at(static_cast<std::size_t>(e)); }

  std::optional<int> index_of(std::string_view label) const {
    for (int i = 0; i < size(); ++i) {
      if (data_->labels[static_cast<std::size_t>(i)] == label) return i;
    }
    return std::nullopt;
  }

  bool operator==(const Universe& other) const {
    return data_ == other.data_ || data_->labels == other.data_->labels;
  }
  bool operator!=(const Universe& other) const { return !(*this == other); }

 private:
  struct Data {
    std::vector<std::string> labels;
  };

  static std::vector<std::string> default_labels(int size) {
    if (size < 1) throw Error("universe size must be >= 1");
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) labels.push_back(std::to_string(i));
    return labels;
  }

  void validate() const {
    const auto& labels = data_->labels;
    if (labels.empty()) throw Error("universe size must be >= 1");
    if (static_cast<int>(labels.size()) > kMaxUniverseSize)
      throw Error("universe size " + std::to_string(labels.size()) + " exceeds cap " +
                  std::to_string(kMaxUniverseSize));
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw Error("duplicate universe label: " + l);
    }
  }

  std::shared_ptr<const Data> data_;
};

}  // namespace clonesmith
