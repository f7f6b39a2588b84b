#include "slicing/array_server.hpp"

#include <utility>

#include "slicing/error.hpp"

namespace slicing {

ArrayServer::ArrayServer(std::vector<Element> data)
    : data_(std::move(data)), size_(static_cast<std::int64_t>(data_.size())), thread_([this] { serve(); }) {}

ArrayServer::~ArrayServer() { stop(); }

ArrayServer::Element ArrayServer::get(std::int64_t index) {
  if (index < 0 || index >= size_) {
    throw Error(ErrorKind::BoundsViolation, "get at " + std::to_string(index));
  }
  Reply reply;
  call(Op::Get, index, 0, reply);
  return reply.value;
}

void ArrayServer::swap(std::int64_t i, std::int64_t j) {
  if (i < 0 || i >= size_ || j < 0 || j >= size_) {
    throw Error(ErrorKind::BoundsViolation, "swap of " + std::to_string(i) + " and " + std::to_string(j));
  }
  Reply reply;
  call(Op::Swap, i, j, reply);
}

std::vector<ArrayServer::Element> ArrayServer::take() {
  stop();
  return std::move(data_);
}

void ArrayServer::call(Op op, std::int64_t i, std::int64_t j, Reply& reply) {
  {
    std::lock_guard lock(mutex_);
    queue_.push_back(Request{op, i, j, &reply});
  }
  ready_.notify_one();
  reply.done.acquire();
}

void ArrayServer::serve() {
  for (;;) {
    Request request;
    {
      std::unique_lock lock(mutex_);
      ready_.wait(lock, [this] { return !queue_.empty(); });
      request = queue_.front();
      queue_.pop_front();
    }
    switch (request.op) {
      case Op::Get:
        request.reply->value = data_[static_cast<std::size_t>(request.i)];
        break;
      case Op::Swap:
        std::swap(data_[static_cast<std::size_t>(request.i)], data_[static_cast<std::size_t>(request.j)]);
        break;
      case Op::Stop:
        request.reply->done.release();
        return;
    }
    ++served_;
    request.reply->done.release();
  }
}

void ArrayServer::stop() {
  if (thread_.joinable()) {
    Reply reply;
    call(Op::Stop, 0, 0, reply);
    thread_.join();
  }
}

}  // namespace slicing
