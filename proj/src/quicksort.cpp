#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <memory>
#include <thread>
#include <vector>

#include "slicing/array_server.hpp"
#include "slicing/prng.hpp"
#include "slicing/workers.hpp"

namespace slicing {

namespace {

/// Caps the number of live sorting threads, the calling thread included.
class SpawnBudget {
 public:
  explicit SpawnBudget(int limit) : limit_(std::max(limit, 1)) {}

  bool try_acquire() noexcept {
    int live = live_.load(std::memory_order_relaxed);
    while (live < limit_) {
      if (live_.compare_exchange_weak(live, live + 1, std::memory_order_acq_rel)) {
        return true;
      }
    }
    return false;
  }

  void release() noexcept { live_.fetch_sub(1, std::memory_order_acq_rel); }

 private:
  const int limit_;
  std::atomic<int> live_{1};
};

template <typename Policy>
std::int64_t lomuto_partition(Policy& policy, std::int64_t lower, std::int64_t upper) {
  const Element pivot = policy.get(upper);
  std::int64_t j = lower;
  // Same swaps as the textbook scan; the inner loop only reads, so checked
  // accessors keep their bounds in registers between writes.
  for (std::int64_t i = lower; i != upper; ++i) {
    Element value = policy.get(i);
    while (!(value < pivot)) {
      if (++i == upper) {
        break;
      }
      value = policy.get(i);
    }
    if (i == upper) {
      break;
    }
    if (i != j) {
      policy.exchange(i, j, value);
    }
    ++j;
  }
  if (j != upper) {
    policy.exchange(upper, j, pivot);
  }
  return j;
}

/// Shared recursion for every mode. Sequential recursion happens on index
/// sub-ranges of whatever the current thread owns; only a partition handed
/// to another thread is split off. Each call joins its own children before
/// returning, so the policy owns the same range on exit as on entry.
template <typename Policy>
void sort_range(Policy& policy, std::int64_t lower, std::int64_t upper) {
  typename Policy::Frame frame(policy);
  while (upper > lower) {
    if (policy.cutoff > 0 && upper - lower + 1 <= policy.cutoff) {
      policy.sort_small(lower, upper);
      break;
    }
    const std::int64_t j = lomuto_partition(policy, lower, upper);
    bool left_pending = j - 1 > lower;
    bool right_pending = upper > j + 1;
    if (right_pending && frame.try_spawn(j + 1, upper)) {
      right_pending = false;
    }
    if (left_pending && right_pending) {
      if (j - lower <= upper - j) {
        sort_range(policy, lower, j - 1);
        lower = j + 1;
      } else {
        sort_range(policy, j + 1, upper);
        upper = j - 1;
      }
    } else if (left_pending) {
      upper = j - 1;
    } else if (right_pending) {
      lower = j + 1;
    } else {
      break;
    }
  }
  frame.finish();
}

/// Runs `body` on a new thread, capturing any exception for the joiner.
class Child {
 public:
  template <typename Body>
  explicit Child(Body body)
      : thread_([this, body = std::move(body)]() mutable {
          try {
            body();
          } catch (...) {
            error_ = std::current_exception();
          }
        }) {}

  void join() {
    if (thread_.joinable()) {
      thread_.join();
    }
    if (error_) {
      std::rethrow_exception(std::exchange(error_, nullptr));
    }
  }

 private:
  std::exception_ptr error_;
  std::jthread thread_;
};

void join_all(std::vector<std::unique_ptr<Child>>& children) {
  std::exception_ptr first;
  for (auto& child : children) {
    try {
      child->join();
    } catch (...) {
      if (!first) {
        first = std::current_exception();
      }
    }
  }
  children.clear();
  if (first) {
    std::rethrow_exception(first);
  }
}

// ---- slicing mode ----

struct SlicePolicy {
  Slice<Element>& slice;
  SpawnBudget& budget;
  std::int64_t cutoff;

  Element get(std::int64_t i) const { return slice.item(i); }

  void exchange(std::int64_t i, std::int64_t j, Element) { slice.swap(i, j); }

  void sort_small(std::int64_t lower, std::int64_t upper) {
    std::vector<Element> buffer;
    buffer.reserve(static_cast<std::size_t>(upper - lower + 1));
    for (auto i = lower; i <= upper; ++i) {
      buffer.push_back(slice.item(i));
    }
    std::sort(buffer.begin(), buffer.end());
    for (auto i = lower; i <= upper; ++i) {
      slice.put(buffer[static_cast<std::size_t>(i - lower)], i);
    }
  }

  class Frame {
   public:
    explicit Frame(SlicePolicy& policy) : policy_(policy) {}

    bool try_spawn(std::int64_t lower, std::int64_t upper) {
      if (!policy_.budget.try_acquire()) {
        return false;
      }
      Slice<Element>& slice = policy_.slice;
      if (slice.upper() > upper) {
        pieces_.push_back(slice.slice_tail(slice.upper() - upper));
      }
      auto worker = std::make_unique<SortWorker>(slice, -(upper - lower + 1));
      SortWorker* raw = worker.get();
      workers_.push_back(std::move(worker));
      SpawnBudget& budget = policy_.budget;
      const std::int64_t cutoff = policy_.cutoff;
      children_.push_back(std::make_unique<Child>([raw, &budget, cutoff, lower, upper] {
        SlicePolicy child{raw->data(), budget, cutoff};
        sort_range(child, lower, upper);
        budget.release();
      }));
      return true;
    }

    void finish() {
      join_all(children_);
      for (auto& worker : workers_) {
        pieces_.push_back(worker->release());
      }
      workers_.clear();
      if (pieces_.empty()) {
        return;
      }
      std::sort(pieces_.begin(), pieces_.end(),
                [](const Slice<Element>& a, const Slice<Element>& b) { return a.lower() < b.lower(); });
      Slice<Element>& slice = policy_.slice;
      for (auto& piece : pieces_) {
        slice = Slice<Element>::merge(slice, piece);
      }
      pieces_.clear();
    }

   private:
    SlicePolicy& policy_;
    std::vector<Slice<Element>> pieces_;
    std::vector<std::unique_ptr<SortWorker>> workers_;
    std::vector<std::unique_ptr<Child>> children_;
  };
};

// ---- raw threads mode ----

struct RawPolicy {
  Element* data;
  SpawnBudget& budget;
  std::int64_t cutoff;

  Element get(std::int64_t i) const { return data[i]; }
  void exchange(std::int64_t i, std::int64_t j, Element at_i) {
    data[i] = data[j];
    data[j] = at_i;
  }
  void sort_small(std::int64_t lower, std::int64_t upper) { std::sort(data + lower, data + upper + 1); }

  class Frame {
   public:
    explicit Frame(RawPolicy& policy) : policy_(policy) {}

    bool try_spawn(std::int64_t lower, std::int64_t upper) {
      if (!policy_.budget.try_acquire()) {
        return false;
      }
      RawPolicy child = policy_;
      children_.push_back(std::make_unique<Child>([child, lower, upper]() mutable {
        sort_range(child, lower, upper);
        child.budget.release();
      }));
      return true;
    }

    void finish() { join_all(children_); }

   private:
    RawPolicy& policy_;
    std::vector<std::unique_ptr<Child>> children_;
  };
};

// ---- serialized mode ----

struct ServerPolicy {
  ArrayServer& server;
  SpawnBudget& budget;
  std::int64_t cutoff = 0;

  Element get(std::int64_t i) const { return server.get(i); }
  void exchange(std::int64_t i, std::int64_t j, Element) { server.swap(i, j); }
  void sort_small(std::int64_t, std::int64_t) {}

  class Frame {
   public:
    explicit Frame(ServerPolicy& policy) : policy_(policy) {}

    bool try_spawn(std::int64_t lower, std::int64_t upper) {
      if (!policy_.budget.try_acquire()) {
        return false;
      }
      ServerPolicy child = policy_;
      children_.push_back(std::make_unique<Child>([child, lower, upper]() mutable {
        sort_range(child, lower, upper);
        child.budget.release();
      }));
      return true;
    }

    void finish() { join_all(children_); }

   private:
    ServerPolicy& policy_;
    std::vector<std::unique_ptr<Child>> children_;
  };
};

}  // namespace

SortWorker::SortWorker(Slice<Element>& data, std::int64_t n)
    : data_(n > 0 ? data.slice_head(n) : data.slice_tail(-n)) {}

void parallel_quicksort(Slice<Element>& data, const QuicksortOptions& options) {
  if (data.count() < 2) {
    return;
  }
  SpawnBudget budget(options.max_workers);
  SlicePolicy policy{data, budget, options.cutoff};
  sort_range(policy, data.lower(), data.upper());
}

void threaded_quicksort(std::span<Element> data, const QuicksortOptions& options) {
  if (data.size() < 2) {
    return;
  }
  SpawnBudget budget(options.max_workers);
  RawPolicy policy{data.data(), budget, options.cutoff};
  sort_range(policy, 0, static_cast<std::int64_t>(data.size()) - 1);
}

void serialized_quicksort(std::vector<Element>& data, int max_workers) {
  if (data.size() < 2) {
    return;
  }
  ArrayServer server(std::move(data));
  SpawnBudget budget(max_workers);
  ServerPolicy policy{server, budget};
  sort_range(policy, 0, server.size() - 1);
  data = server.take();
}

double serialized_quicksort(std::int64_t n, std::uint64_t seed, int max_workers) {
  if (n < 2) {
    throw Error(ErrorKind::BoundsViolation, "serialized quicksort requires n >= 2");
  }
  Prng prng(seed);
  std::vector<Element> data(static_cast<std::size_t>(n));
  for (auto& value : data) {
    value = static_cast<Element>(prng.next());
  }
  const auto start = std::chrono::steady_clock::now();
  serialized_quicksort(data, max_workers);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (!std::is_sorted(data.begin(), data.end())) {
    throw Error(ErrorKind::VerificationFailure, "serialized quicksort produced unsorted output");
  }
  return elapsed.count();
}

std::vector<Element> seq_sort_oracle(std::vector<Element> values) {
  std::sort(values.begin(), values.end());
  return values;
}

Slice<Element> to_slice(std::span<const Element> values) {
  if (values.empty()) {
    return {};
  }
  auto slice = Slice<Element>::make(static_cast<std::int64_t>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    slice.put(values[i], slice.lower() + static_cast<std::int64_t>(i));
  }
  return slice;
}

std::vector<Element> to_vector(const Slice<Element>& slice) {
  std::vector<Element> values;
  values.reserve(static_cast<std::size_t>(std::max<std::int64_t>(slice.count(), 0)));
  for (const auto i : slice.indexes()) {
    values.push_back(slice.item(i));
  }
  return values;
}

}  // namespace slicing
