#ifndef SLICING_READERS_HPP
#define SLICING_READERS_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "slicing/error.hpp"

namespace slicing {

/// Contiguous element buffer shared between slices and views. Capacity is
/// fixed at construction; elements are value-initialized.
template <typename T>
class Storage {
 public:
  explicit Storage(std::int64_t capacity)
      : capacity_(capacity), data_(std::make_unique<T[]>(static_cast<std::size_t>(capacity))) {}

  Storage(const Storage&) = delete;
  Storage& operator=(const Storage&) = delete;

  std::int64_t capacity() const noexcept { return capacity_; }
  T* data() noexcept { return data_.get(); }
  const T* data() const noexcept { return data_.get(); }

 private:
  std::int64_t capacity_;
  std::unique_ptr<T[]> data_;
};

/// Count of live views on a slice. A melt that brings the count to zero
/// releases, so the next successful write observes every prior view read
/// as complete.
class ReadersCounter {
 public:
  void freeze() noexcept { count_.fetch_add(1, std::memory_order_acq_rel); }

  void melt() {
    auto current = count_.load(std::memory_order_relaxed);
    do {
      if (current <= 0) {
        throw Error(ErrorKind::ReaderUnderflow, "melt with readers = 0");
      }
    } while (!count_.compare_exchange_weak(current, current - 1, std::memory_order_acq_rel,
                                           std::memory_order_relaxed));
  }

  std::int64_t count() const noexcept { return count_.load(std::memory_order_acquire); }
  bool is_zero() const noexcept { return count() == 0; }

 private:
  std::atomic<std::int64_t> count_{0};
};

namespace detail {

inline std::string range_text(std::int64_t lower, std::int64_t upper) {
  return "[" + std::to_string(lower) + ".." + std::to_string(upper) + "]";
}

// Out-of-line throw helpers keep the element accessors small enough to inline.

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_index(std::int64_t index, std::int64_t lower,
                                                               std::int64_t upper) {
  throw Error(ErrorKind::BoundsViolation,
              "index " + std::to_string(index) + " outside " + range_text(lower, upper));
}

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_index2(std::int64_t row, std::int64_t column,
                                                                std::int64_t first_row, std::int64_t last_row,
                                                                std::int64_t columns) {
  throw Error(ErrorKind::BoundsViolation, "(" + std::to_string(row) + ", " + std::to_string(column) +
                                              ") outside rows " + range_text(first_row, last_row) + " columns " +
                                              range_text(1, columns));
}

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_frozen(std::int64_t readers) {
  throw Error(ErrorKind::NotModifiable, "write while readers = " + std::to_string(readers));
}

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_freed(const char* what) {
  throw Error(ErrorKind::UseAfterFree, what);
}

}  // namespace detail

}  // namespace slicing

#endif  // SLICING_READERS_HPP
