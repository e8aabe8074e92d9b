#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace clonesmith {

inline std::uint64_t fnv1a(const std::uint8_t* data, std::size_t len) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& v) {
  return fnv1a(v.data(), v.size());
}

// Runs fn(begin, end) on `jobs` threads over contiguous slices of [0, total).
// With jobs <= 1 everything runs on the calling thread.
inline void parallel_for_ranges(std::size_t total, int jobs,
                                const std::function<void(std::size_t, std::size_t)>& fn) {
  if (jobs <= 1 || total <= 1) {
    fn(0, total);
    return;
  }
  std::size_t k = static_cast<std::size_t>(jobs);
  if (k > total) k = total;
  std::vector<std::thread> threads;
  threads.reserve(k);
  for (std::size_t w = 0; w < k; ++w) {
    std::size_t begin = total * w / k;
    std::size_t end = total * (w + 1) / k;
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace clonesmith
