#ifndef SLICING_SLICE_HPP
#define SLICING_SLICE_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ranges>
#include <utility>

#include "slicing/error.hpp"
#include "slicing/readers.hpp"

namespace slicing {

template <typename T>
class View;

/// An exclusively held handle to the contiguous index range [lower, upper]
/// of a shared Storage. Indexes map to storage positions as `index - base`.
///
/// A Slice is move-only: it may be handed to another thread but never
/// aliased for mutation. Writes are refused while any View on the slice is
/// live (readers > 0). An empty slice has count() == 0; slices emptied by
/// merge are normalized to lower = 1, upper = 0.
///
/// A default-constructed or moved-from Slice is an inert empty handle.
template <typename T>
class Slice {
 public:
  using value_type = T;
  using index_type = std::int64_t;

  Slice() = default;
  Slice(Slice&&) noexcept = default;
  Slice& operator=(Slice&&) noexcept = default;
  Slice(const Slice&) = delete;
  Slice& operator=(const Slice&) = delete;

  /// Fresh slice over n default-initialized elements, indexed 1..n.
  static Slice make(index_type n) {
    if (n < 1) {
      throw Error(ErrorKind::BoundsViolation, "make requires n >= 1, got " + std::to_string(n));
    }
    auto storage = std::make_shared<Storage<T>>(n);
    return Slice(std::make_shared<Core>(std::move(storage), 1, 1, n));
  }

  /// Moves the first n indexes of this slice into a new slice. Both keep
  /// referencing the same storage.
  Slice slice_head(index_type n) {
    check_split(n, "slice_head");
    auto& c = *core_;
    Slice head(std::make_shared<Core>(c.storage, c.base, c.lower, c.lower + n - 1));
    c.lower += n;
    return head;
  }

  /// Moves the last n indexes of this slice into a new slice.
  Slice slice_tail(index_type n) {
    check_split(n, "slice_tail");
    auto& c = *core_;
    Slice tail(std::make_shared<Core>(c.storage, c.base, c.upper - n + 1, c.upper));
    c.upper -= n;
    return tail;
  }

  /// Index adjacency only; storage identity is not considered. Empty slices
  /// are adjacent to nothing.
  bool is_adjacent(const Slice& other) const noexcept {
    if (empty() || other.empty()) {
      return false;
    }
    return upper() + 1 == other.lower() || other.upper() + 1 == lower();
  }

  /// Combines two adjacent, modifiable slices. Aliases the storage when both
  /// share it with the same base, otherwise copies into fresh storage based
  /// at the merged lower bound. Both inputs end up empty.
  static Slice merge(Slice& a, Slice& b) {
    if (!a.is_modifiable() || !b.is_modifiable()) {
      throw Error(ErrorKind::NotModifiable, "merge of a slice with live views");
    }
    if (!a.is_adjacent(b)) {
      throw Error(ErrorKind::NotAdjacent, "merge of " + detail::range_text(a.lower(), a.upper()) +
                                              " and " + detail::range_text(b.lower(), b.upper()));
    }
    const auto& ca = *a.core_;
    const auto& cb = *b.core_;
    const index_type lower = std::min(ca.lower, cb.lower);
    const index_type upper = std::max(ca.upper, cb.upper);

    Slice result;
    if (ca.storage == cb.storage && ca.base == cb.base) {
      result = Slice(std::make_shared<Core>(ca.storage, ca.base, lower, upper));
    } else {
      auto storage = std::make_shared<Storage<T>>(upper - lower + 1);
      T* out = storage->data();
      for (const Core* src : {&ca, &cb}) {
        std::copy(src->area + (src->lower - src->base), src->area + (src->upper - src->base) + 1,
                  out + (src->lower - lower));
      }
      result = Slice(std::make_shared<Core>(std::move(storage), lower, lower, upper));
    }
    a.core_->empty();
    b.core_->empty();
    return result;
  }

  const T& item(index_type index) const {
    const Core* c = core_.get();
    if (c == nullptr || index < c->lower || index > c->upper) [[unlikely]] {
      detail::throw_index(index, lower(), upper());
    }
    return c->area[index - c->base];
  }

  void put(const T& value, index_type index) {
    Core* c = core_.get();
    if (c == nullptr || index < c->lower || index > c->upper) [[unlikely]] {
      detail::throw_index(index, lower(), upper());
    }
    if (const auto readers = c->readers.count(); readers != 0) [[unlikely]] {
      detail::throw_frozen(readers);
    }
    c->area[index - c->base] = value;
  }

  /// Exchanges the elements at i and j. Same checks as two puts: both
  /// indexes in bounds, then no live views.
  void swap(index_type i, index_type j) {
    Core* c = core_.get();
    if (c == nullptr || i < c->lower || i > c->upper) [[unlikely]] {
      detail::throw_index(i, lower(), upper());
    }
    if (j < c->lower || j > c->upper) [[unlikely]] {
      detail::throw_index(j, lower(), upper());
    }
    if (const auto readers = c->readers.count(); readers != 0) [[unlikely]] {
      detail::throw_frozen(readers);
    }
    std::swap(c->area[i - c->base], c->area[j - c->base]);
  }

  /// View-side commands. Public so the readers protocol can be exercised
  /// directly; ordinary clients go through View.
  void freeze() { live_core("freeze").readers.freeze(); }
  void melt() { live_core("melt").readers.melt(); }

  index_type lower() const noexcept { return core_ ? core_->lower : 1; }
  index_type upper() const noexcept { return core_ ? core_->upper : 0; }
  index_type count() const noexcept { return upper() - lower() + 1; }
  index_type base() const noexcept { return core_ ? core_->base : 1; }
  bool empty() const noexcept { return count() <= 0; }
  std::int64_t readers() const noexcept { return core_ ? core_->readers.count() : 0; }
  bool is_modifiable() const noexcept { return readers() == 0; }

  auto indexes() const { return std::views::iota(lower(), upper() + 1); }

  /// Identity of the underlying storage; equal for slices that alias.
  const void* storage_id() const noexcept { return core_ && core_->storage ? core_->storage.get() : nullptr; }

 private:
  friend class View<T>;

  struct Core {
    Core(std::shared_ptr<Storage<T>> s, index_type b, index_type lo, index_type hi)
        : storage(std::move(s)), area(storage->data()), base(b), lower(lo), upper(hi) {}

    void empty() noexcept {
      lower = 1;
      upper = 0;
    }

    std::shared_ptr<Storage<T>> storage;
    T* area;
    index_type base;
    index_type lower;
    index_type upper;
    ReadersCounter readers;
  };

  explicit Slice(std::shared_ptr<Core> core) : core_(std::move(core)) {}

  Core& live_core(const char* op) const {
    if (!core_) {
      throw Error(ErrorKind::UseAfterFree, std::string(op) + " on a moved-from slice");
    }
    return *core_;
  }

  void check_split(index_type n, const char* op) const {
    if (n <= 0 || n > count()) {
      throw Error(ErrorKind::BoundsViolation, std::string(op) + "(" + std::to_string(n) + ") on " +
                                                  detail::range_text(lower(), upper()));
    }
    if (!is_modifiable()) {
      throw Error(ErrorKind::NotModifiable, std::string(op) + " on a slice with live views");
    }
  }

  std::shared_ptr<Core> core_;
};

/// Read-only proxy onto a slice. While a view is live its original slice
/// is frozen. Bounds are copied at creation. After free() the view has
/// lower = 1, upper = 0 and refuses every access.
///
/// item() may be called from many threads at once; free() exactly once by
/// one thread. A view still live at destruction is released then.
template <typename T>
class View {
 public:
  using index_type = std::int64_t;

  View() = default;

  explicit View(Slice<T>& original) {
    auto& core = original.live_core("view creation");
    core.readers.freeze();
    original_ = original.core_;
    storage_ = core.storage;
    area_ = core.area;
    base_ = core.base;
    lower_ = core.lower;
    upper_ = core.upper;
  }

  View(View&& other) noexcept { take(other); }

  View& operator=(View&& other) noexcept {
    if (this != &other) {
      release();
      take(other);
    }
    return *this;
  }

  View(const View&) = delete;
  View& operator=(const View&) = delete;

  ~View() { release(); }

  const T& item(index_type index) const {
    if (area_ == nullptr) [[unlikely]] {
      detail::throw_freed("item on a freed view");
    }
    if (index < lower_ || index > upper_) [[unlikely]] {
      detail::throw_index(index, lower_, upper_);
    }
    return area_[index - base_];
  }

  void free() {
    if (area_ == nullptr) {
      throw Error(ErrorKind::UseAfterFree, "view freed twice");
    }
    detach()->readers.melt();
  }

  bool is_freed() const noexcept { return area_ == nullptr; }
  index_type lower() const noexcept { return lower_; }
  index_type upper() const noexcept { return upper_; }
  index_type count() const noexcept { return upper_ - lower_ + 1; }
  index_type base() const noexcept { return base_; }
  auto indexes() const { return std::views::iota(lower_, upper_ + 1); }

  /// True if this live view was created from `slice`.
  bool is_view_of(const Slice<T>& slice) const noexcept {
    return original_ != nullptr && original_ == slice.core_;
  }

  /// Readers count of the original slice; 0 once freed.
  std::int64_t original_readers() const noexcept { return original_ ? original_->readers.count() : 0; }

 private:
  std::shared_ptr<typename Slice<T>::Core> detach() noexcept {
    area_ = nullptr;
    lower_ = 1;
    upper_ = 0;
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

  void take(View& other) noexcept {
    original_ = std::move(other.original_);
    storage_ = std::move(other.storage_);
    area_ = std::exchange(other.area_, nullptr);
    base_ = other.base_;
    lower_ = std::exchange(other.lower_, 1);
    upper_ = std::exchange(other.upper_, 0);
  }

  std::shared_ptr<typename Slice<T>::Core> original_;
  std::shared_ptr<Storage<T>> storage_;
  const T* area_ = nullptr;
  index_type base_ = 1;
  index_type lower_ = 1;
  index_type upper_ = 0;
};

}  // namespace slicing

#endif  // SLICING_SLICE_HPP
