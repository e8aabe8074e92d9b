#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clonesmith {

// Recoverable user-facing error (bad input, IO, usage). CLI maps these to exit 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class UniverseMismatchError : public Error {
 public:
  explicit UniverseMismatchError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Closure worklist hit its configured member bound.
class ClosureBoundError : public Error {
 public:
  ClosureBoundError(const std::string& what, std::size_t partial_size)
      : Error(what), partial_size_(partial_size) {}
  std::size_t partial_size() const { return partial_size_; }

 private:
  std::size_t partial_size_;
};

// Cyclic-shift enumeration exceeded its term budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t partial_count)
      : Error(what), partial_count_(partial_count) {}
  std::size_t partial_count() const { return partial_count_; }

 private:
  std::size_t partial_count_;
};

class CheckpointError : public Error {
 public:
  explicit CheckpointError(const std::string& what) : Error(what) {}
};

// A violated internal consistency assertion (e.g. a non-majority nontrivial
// member inside a majority-generated closure). CLI maps these to exit 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace clonesmith
