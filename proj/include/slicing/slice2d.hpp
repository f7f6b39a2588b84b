#ifndef SLICING_SLICE2D_HPP
#define SLICING_SLICE2D_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>

#include "slicing/error.hpp"
#include "slicing/readers.hpp"

namespace slicing {

template <typename T>
class View2D;

/// Row-range slice of a row-major matrix. Columns are fixed for the whole
/// matrix; only rows are sliced. Element (i, j) lives at storage position
/// (i - row_base) * columns + (j - first_column).
template <typename T>
class Slice2D {
 public:
  using value_type = T;
  using index_type = std::int64_t;

  Slice2D() = default;
  Slice2D(Slice2D&&) noexcept = default;
  Slice2D& operator=(Slice2D&&) noexcept = default;
  Slice2D(const Slice2D&) = delete;
  Slice2D& operator=(const Slice2D&) = delete;

  static Slice2D make(index_type rows, index_type columns) {
    if (rows < 1 || columns < 1) {
      throw Error(ErrorKind::BoundsViolation,
                  "make2 requires positive dimensions, got " + std::to_string(rows) + "x" + std::to_string(columns));
    }
    auto storage = std::make_shared<Storage<T>>(rows * columns);
    return Slice2D(std::make_shared<Core>(std::move(storage), columns, 1, 1, rows));
  }

  Slice2D slice_top(index_type n) {
    check_split(n, "slice_top");
    auto& c = *core_;
    Slice2D top(std::make_shared<Core>(c.storage, c.columns, c.row_base, c.first_row, c.first_row + n - 1));
    c.first_row += n;
    return top;
  }

  Slice2D slice_bottom(index_type n) {
    check_split(n, "slice_bottom");
    auto& c = *core_;
    Slice2D bottom(std::make_shared<Core>(c.storage, c.columns, c.row_base, c.last_row - n + 1, c.last_row));
    c.last_row -= n;
    return bottom;
  }

  bool is_adjacent(const Slice2D& other) const noexcept {
    if (empty() || other.empty()) {
      return false;
    }
    return last_row() + 1 == other.first_row() || other.last_row() + 1 == first_row();
  }

  static Slice2D merge(Slice2D& a, Slice2D& b) {
    if (!a.is_modifiable() || !b.is_modifiable()) {
      throw Error(ErrorKind::NotModifiable, "merge2 of a slice with live views");
    }
    if (!a.is_adjacent(b)) {
      throw Error(ErrorKind::NotAdjacent, "merge2 of rows " + detail::range_text(a.first_row(), a.last_row()) +
                                              " and " + detail::range_text(b.first_row(), b.last_row()));
    }
    const auto& ca = *a.core_;
    const auto& cb = *b.core_;
    if (ca.columns != cb.columns) {
      throw Error(ErrorKind::DimensionMismatch, "merge2 of slices with " + std::to_string(ca.columns) + " and " +
                                                    std::to_string(cb.columns) + " columns");
    }
    const index_type first = std::min(ca.first_row, cb.first_row);
    const index_type last = std::max(ca.last_row, cb.last_row);

    Slice2D result;
    if (ca.storage == cb.storage && ca.row_base == cb.row_base) {
      result = Slice2D(std::make_shared<Core>(ca.storage, ca.columns, ca.row_base, first, last));
    } else {
      auto storage = std::make_shared<Storage<T>>((last - first + 1) * ca.columns);
      T* out = storage->data();
      for (const Core* src : {&ca, &cb}) {
        const T* begin = src->area + (src->first_row - src->row_base) * src->columns;
        const T* end = src->area + (src->last_row - src->row_base + 1) * src->columns;
        std::copy(begin, end, out + (src->first_row - first) * ca.columns);
      }
      result = Slice2D(std::make_shared<Core>(std::move(storage), ca.columns, first, first, last));
    }
    a.core_->empty();
    b.core_->empty();
    return result;
  }

  const T& item(index_type row, index_type column) const {
    const Core* c = core_.get();
    if (c == nullptr || row < c->first_row || row > c->last_row || column < 1 || column > c->columns) [[unlikely]] {
      detail::throw_index2(row, column, first_row(), last_row(), last_column());
    }
    return c->area[(row - c->row_base) * c->columns + (column - 1)];
  }

  void put(const T& value, index_type row, index_type column) {
    Core* c = core_.get();
    if (c == nullptr || row < c->first_row || row > c->last_row || column < 1 || column > c->columns) [[unlikely]] {
      detail::throw_index2(row, column, first_row(), last_row(), last_column());
    }
    if (const auto readers = c->readers.count(); readers != 0) [[unlikely]] {
      detail::throw_frozen(readers);
    }
    c->area[(row - c->row_base) * c->columns + (column - 1)] = value;
  }

  void freeze() { live_core("freeze2").readers.freeze(); }
  void melt() { live_core("melt2").readers.melt(); }

  index_type first_row() const noexcept { return core_ ? core_->first_row : 1; }
  index_type last_row() const noexcept { return core_ ? core_->last_row : 0; }
  index_type first_column() const noexcept { return 1; }
  index_type last_column() const noexcept { return core_ ? core_->columns : 0; }
  index_type row_count() const noexcept { return last_row() - first_row() + 1; }
  index_type column_count() const noexcept { return last_column(); }
  index_type row_base() const noexcept { return core_ ? core_->row_base : 1; }
  bool empty() const noexcept { return row_count() <= 0; }
  std::int64_t readers() const noexcept { return core_ ? core_->readers.count() : 0; }
  bool is_modifiable() const noexcept { return readers() == 0; }
  const void* storage_id() const noexcept { return core_ ? core_->storage.get() : nullptr; }

 private:
  friend class View2D<T>;

  struct Core {
    Core(std::shared_ptr<Storage<T>> s, index_type cols, index_type base, index_type first, index_type last)
        : storage(std::move(s)), area(storage->data()), columns(cols), row_base(base), first_row(first),
          last_row(last) {}

    void empty() noexcept {
      first_row = 1;
      last_row = 0;
    }

    std::shared_ptr<Storage<T>> storage;
    T* area;
    index_type columns;
    index_type row_base;
    index_type first_row;
    index_type last_row;
    ReadersCounter readers;
  };

  explicit Slice2D(std::shared_ptr<Core> core) : core_(std::move(core)) {}

  Core& live_core(const char* op) const {
    if (!core_) {
      throw Error(ErrorKind::UseAfterFree, std::string(op) + " on a moved-from slice");
    }
    return *core_;
  }

  void check_split(index_type n, const char* op) const {
    if (n <= 0 || n > row_count()) {
      throw Error(ErrorKind::BoundsViolation, std::string(op) + "(" + std::to_string(n) + ") on rows " +
                                                  detail::range_text(first_row(), last_row()));
    }
    if (!is_modifiable()) {
      throw Error(ErrorKind::NotModifiable, std::string(op) + " on a slice with live views");
    }
  }

  std::shared_ptr<Core> core_;
};

/// Read-only proxy onto a Slice2D; same protocol as View.
template <typename T>
class View2D {
 public:
  using index_type = std::int64_t;

  View2D() = default;

  explicit View2D(Slice2D<T>& original) {
    auto& core = original.live_core("view2 creation");
    core.readers.freeze();
    original_ = original.core_;
    storage_ = core.storage;
    area_ = core.area;
    columns_ = core.columns;
    row_base_ = core.row_base;
    first_row_ = core.first_row;
    last_row_ = core.last_row;
  }

  View2D(View2D&& other) noexcept { take(other); }

  View2D& operator=(View2D&& other) noexcept {
    if (this != &other) {
      release();
      take(other);
    }
    return *this;
  }

  View2D(const View2D&) = delete;
  View2D& operator=(const View2D&) = delete;

  ~View2D() { release(); }

  const T& item(index_type row, index_type column) const {
    if (area_ == nullptr) [[unlikely]] {
      detail::throw_freed("item on a freed view2");
    }
    if (row < first_row_ || row > last_row_ || column < 1 || column > columns_) [[unlikely]] {
      detail::throw_index2(row, column, first_row_, last_row_, columns_);
    }
    return area_[(row - row_base_) * columns_ + (column - 1)];
  }

  /// Whole row as a contiguous span; checked once, so inner loops can index it freely.
  std::span<const T> row(index_type row) const {
    if (area_ == nullptr) [[unlikely]] {
      detail::throw_freed("row on a freed view2");
    }
    if (row < first_row_ || row > last_row_) [[unlikely]] {
      detail::throw_index2(row, 1, first_row_, last_row_, columns_);
    }
    return {area_ + (row - row_base_) * columns_, static_cast<std::size_t>(columns_)};
  }

  /// All rows of the view, row-major: element (i, j) is at
  /// (i - first_row()) * column count + (j - 1).
  std::span<const T> elements() const {
    if (area_ == nullptr) [[unlikely]] {
      detail::throw_freed("elements on a freed view2");
    }
    return {area_ + (first_row_ - row_base_) * columns_, static_cast<std::size_t>(row_count() * columns_)};
  }

  void free() {
    if (area_ == nullptr) {
      throw Error(ErrorKind::UseAfterFree, "view2 freed twice");
    }
    detach()->readers.melt();
  }

  bool is_freed() const noexcept { return area_ == nullptr; }
  index_type first_row() const noexcept { return first_row_; }
  index_type last_row() const noexcept { return last_row_; }
  index_type first_column() const noexcept { return 1; }
  index_type last_column() const noexcept { return area_ ? columns_ : 0; }
  index_type row_count() const noexcept { return last_row_ - first_row_ + 1; }

  bool is_view_of(const Slice2D<T>& slice) const noexcept {
    return original_ != nullptr && original_ == slice.core_;
  }

 private:
  std::shared_ptr<typename Slice2D<T>::Core> detach() noexcept {
    area_ = nullptr;
    first_row_ = 1;
    last_row_ = 0;
    storage_.reset();
    return std::exchange(original_, nullptr);
  }

  void release() noexcept {
    if (area_ != nullptr) {
      try {
        detach()->readers.melt();
      } catch (const Error&) {
        // readers was driven to zero behind this view's back through melt()
      }
    }
  }

  void take(View2D& other) noexcept {
    original_ = std::move(other.original_);
    storage_ = std::move(other.storage_);
    area_ = std::exchange(other.area_, nullptr);
    columns_ = other.columns_;
    row_base_ = other.row_base_;
    first_row_ = std::exchange(other.first_row_, 1);
    last_row_ = std::exchange(other.last_row_, 0);
  }

  std::shared_ptr<typename Slice2D<T>::Core> original_;
  std::shared_ptr<Storage<T>> storage_;
  const T* area_ = nullptr;
  index_type columns_ = 0;
  index_type row_base_ = 1;
  index_type first_row_ = 1;
  index_type last_row_ = 0;
};

}  // namespace slicing

#endif  // SLICING_SLICE2D_HPP
