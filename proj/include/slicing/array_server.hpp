#ifndef SLICING_ARRAY_SERVER_HPP
#define SLICING_ARRAY_SERVER_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <semaphore>
#include <thread>
#include <vector>

namespace slicing {

/// Serialized-access baseline: one thread owns the array and serves get and
/// swap requests FIFO, one at a time. Every client call is a synchronous
/// round-trip through the request queue.
class ArrayServer {
 public:
  using Element = std::int64_t;

  explicit ArrayServer(std::vector<Element> data);
  ~ArrayServer();

  ArrayServer(const ArrayServer&) = delete;
  ArrayServer& operator=(const ArrayServer&) = delete;

  Element get(std::int64_t index);
  void swap(std::int64_t i, std::int64_t j);

  /// Stops the server thread and hands the array back.
  std::vector<Element> take();

  std::int64_t size() const noexcept { return size_; }
  std::uint64_t served() const noexcept { return served_; }

 private:
  enum class Op { Get, Swap, Stop };

  struct Reply {
    Element value = 0;
    std::binary_semaphore done{0};
  };

  struct Request {
    Op op;
    std::int64_t i;
    std::int64_t j;
    Reply* reply;
  };

  void call(Op op, std::int64_t i, std::int64_t j, Reply& reply);
  void serve();
  void stop();

  std::vector<Element> data_;
  std::int64_t size_;
  std::uint64_t served_ = 0;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<Request> queue_;
  std::thread thread_;
};

}  // namespace slicing

#endif  // SLICING_ARRAY_SERVER_HPP
