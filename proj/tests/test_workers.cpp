#include <doctest.h>

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

#include "slicing/array_server.hpp"
#include "slicing/harness.hpp"
#include "slicing/prng.hpp"
#include "slicing/workers.hpp"

using namespace slicing;

#define CHECK_KIND(expr, expected)            \
  do {                                        \
    try {                                     \
      (void)(expr);                           \
      FAIL_CHECK("no error from " #expr);     \
    } catch (const Error& e) {                \
      CHECK(e.kind() == (expected));          \
    }                                         \
  } while (false)

namespace {

std::vector<Element> random_values(std::size_t n, std::uint64_t seed, std::uint64_t range = 0) {
  Prng prng(seed);
  std::vector<Element> values(n);
  for (auto& v : values) {
    v = range == 0 ? static_cast<Element>(prng.next()) : static_cast<Element>(prng.below(range));
  }
  return values;
}

std::vector<Element> slice_sort(const std::vector<Element>& input, int workers, std::int64_t cutoff = 0) {
  auto slice = to_slice(input);
  const auto lower = slice.lower();
  const auto upper = slice.upper();
  parallel_quicksort(slice, {workers, cutoff});
  // the root owns its full range again
  CHECK(slice.lower() == lower);
  CHECK(slice.upper() == upper);
  CHECK(slice.is_modifiable());
  return to_vector(slice);
}

Matrix random_matrix(std::int64_t rows, std::int64_t columns, Prng& prng) {
  Matrix m(rows, columns);
  for (auto& v : m.values) {
    v = static_cast<Element>(prng.below(21)) - 10;
  }
  return m;
}

}  // namespace

TEST_CASE("sequential oracles") {
  CHECK(seq_sort_oracle({3, 1, 2}) == std::vector<Element>{1, 2, 3});

  Matrix a(2, 2);
  a.values = {1, 2, 3, 4};
  Matrix b(2, 2);
  b.values = {5, 6, 7, 8};
  Matrix expected(2, 2);
  expected.values = {19, 22, 43, 50};
  CHECK(seq_matmul_oracle(a, b) == expected);

  Prng prng(1);
  const auto m = random_matrix(5, 5, prng);
  CHECK(seq_matmul_oracle(Matrix::identity(5), m) == m);
  CHECK_KIND(seq_matmul_oracle(Matrix(2, 3), Matrix(2, 3)), ErrorKind::DimensionMismatch);
}

TEST_CASE("sort_worker_make") {
  auto data = Slice<Element>::make(10);
  SortWorker head(data, 4);
  CHECK(head.data().lower() == 1);
  CHECK(head.data().upper() == 4);
  CHECK(data.lower() == 5);

  SortWorker tail(data, -6);
  CHECK(tail.data().lower() == 5);
  CHECK(tail.data().upper() == 10);
  CHECK(data.count() == 0);

  CHECK_KIND(SortWorker(data, 0), ErrorKind::BoundsViolation);
  auto frozen = Slice<Element>::make(3);
  View<Element> v(frozen);
  CHECK_KIND(SortWorker(frozen, 1), ErrorKind::NotModifiable);
}

TEST_CASE("recursive worker splits leave every index with exactly one leaf") {
  constexpr std::int64_t n = 300;
  auto root = Slice<Element>::make(n);
  Prng prng(11);
  std::vector<Slice<Element>> leaves;

  std::function<void(Slice<Element>&)> split = [&](Slice<Element>& s) {
    if (s.count() <= 1) {
      leaves.push_back(std::move(s));
      return;
    }
    // pivot position as quicksort would produce it
    const auto pivot = s.lower() + static_cast<std::int64_t>(prng.below(static_cast<std::uint64_t>(s.count())));
    const auto left_n = pivot - s.lower();
    const auto right_n = s.upper() - pivot;
    if (left_n > 0) {
      SortWorker left(s, left_n);
      split(left.data());
    }
    if (right_n > 0) {
      SortWorker right(s, -right_n);
      split(right.data());
    }
    leaves.push_back(std::move(s));
  };
  split(root);

  std::vector<int> owners(n + 1);
  for (const auto& leaf : leaves) {
    for (auto i : leaf.indexes()) {
      ++owners[static_cast<std::size_t>(i)];
    }
  }
  for (std::int64_t i = 1; i <= n; ++i) {
    REQUIRE(owners[static_cast<std::size_t>(i)] == 1);
  }
}

TEST_CASE("parallel_quicksort") {
  SUBCASE("sorted input is a fixed point") {
    std::vector<Element> sorted(100);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      sorted[i] = static_cast<Element>(i) * 3 - 50;
    }
    for (int workers : {1, 4}) {
      CHECK(slice_sort(sorted, workers) == sorted);
    }
  }

  SUBCASE("random input matches the oracle") {
    const auto input = random_values(10'000, 42);
    const auto expected = seq_sort_oracle(input);
    for (int workers : {1, 2, 3, 4, 8}) {
      CHECK(slice_sort(input, workers) == expected);
    }
  }

  SUBCASE("all-equal input terminates unchanged") {
    const std::vector<Element> same(1000, 7);
    CHECK(slice_sort(same, 4) == same);
  }

  SUBCASE("few distinct values and the sequential cutoff") {
    const auto input = random_values(5000, 9, 4);
    const auto expected = seq_sort_oracle(input);
    CHECK(slice_sort(input, 4) == expected);
    CHECK(slice_sort(input, 4, 64) == expected);
    CHECK(slice_sort(input, 1, 10'000) == expected);
  }

  SUBCASE("tiny inputs") {
    CHECK(slice_sort({5}, 4) == std::vector<Element>{5});
    CHECK(slice_sort({2, 1}, 4) == std::vector<Element>{1, 2});
  }

  SUBCASE("frozen data is rejected") {
    auto slice = to_slice(random_values(10, 1));
    View<Element> v(slice);
    CHECK_KIND(parallel_quicksort(slice, {2, 0}), ErrorKind::NotModifiable);
  }
}

TEST_CASE("threaded and serialized quicksort match the oracle") {
  const auto input = random_values(3000, 77);
  const auto expected = seq_sort_oracle(input);
  for (int workers : {1, 2, 4}) {
    auto raw = input;
    threaded_quicksort(raw, {workers, 0});
    CHECK(raw == expected);

    auto serialized = input;
    serialized_quicksort(serialized, workers);
    CHECK(serialized == expected);
  }
  auto cut = input;
  threaded_quicksort(cut, {3, 100});
  CHECK(cut == expected);

  const double seconds = serialized_quicksort(2000, 42, 1);
  CHECK(seconds > 0.0);
  CHECK_KIND(serialized_quicksort(1, 42, 1), ErrorKind::BoundsViolation);
}

TEST_CASE("results do not depend on the worker count") {
  const auto input = generate_sort_input(20'000, 123);
  const auto reference = slice_sort(input, 1);
  for (int workers : {2, 5, 8}) {
    CHECK(slice_sort(input, workers) == reference);
  }
  CHECK(slice_sort(input, 3) == slice_sort(input, 3));
}

TEST_CASE("array server") {
  ArrayServer server({10, 20, 30});
  CHECK(server.get(0) == 10);
  server.swap(0, 2);
  CHECK(server.get(0) == 30);
  CHECK(server.get(2) == 10);
  CHECK_KIND(server.get(3), ErrorKind::BoundsViolation);
  CHECK_KIND(server.swap(-1, 0), ErrorKind::BoundsViolation);

  {
    std::vector<std::jthread> clients;
    for (int c = 0; c < 4; ++c) {
      clients.emplace_back([&server] {
        for (int k = 0; k < 250; ++k) {
          server.swap(0, 1);
        }
      });
    }
  }
  // 1000 swaps of the same pair leave it in place
  const auto data = server.take();
  CHECK(data == std::vector<Element>{30, 20, 10});
  CHECK(server.served() == 1000 + 4);
}

TEST_CASE("band sizes") {
  CHECK(band_sizes(10, 4) == std::vector<std::int64_t>{3, 3, 2, 2});
  CHECK(band_sizes(8, 1) == std::vector<std::int64_t>{8});
  CHECK(band_sizes(3, 5) == std::vector<std::int64_t>{1, 1, 1});
  CHECK(band_sizes(12, 3) == std::vector<std::int64_t>{4, 4, 4});
  CHECK_KIND(band_sizes(4, 0), ErrorKind::InvalidConfig);
}

TEST_CASE("matmul worker") {
  Prng prng(2);
  const auto m = random_matrix(3, 3, prng);

  SUBCASE("identity") {
    auto left = to_slice2d(Matrix::identity(3));
    auto right = to_slice2d(m);
    auto product = Slice2D<Element>::make(3, 3);
    MatMulWorker worker(left, right, product, 3);
    CHECK_FALSE(left.is_modifiable());
    CHECK_FALSE(right.is_modifiable());
    CHECK(product.row_count() == 0);
    worker.multiply();
    CHECK(left.is_modifiable());
    CHECK(right.is_modifiable());
    CHECK(to_matrix(worker.product()) == m);
  }

  SUBCASE("zero") {
    auto left = to_slice2d(Matrix(3, 3));
    auto right = to_slice2d(m);
    auto product = Slice2D<Element>::make(3, 3);
    MatMulWorker worker(left, right, product, 3);
    worker.multiply();
    CHECK(to_matrix(worker.product()) == Matrix(3, 3));
  }

  SUBCASE("two bands") {
    Prng p(7);
    const auto a = random_matrix(6, 4, p);
    const auto b = random_matrix(4, 5, p);
    auto left = to_slice2d(a);
    auto right = to_slice2d(b);
    auto product = Slice2D<Element>::make(6, 5);
    MatMulWorker first(left, right, product, 4);
    MatMulWorker second(left, right, product, 2);
    CHECK(left.readers() == 2);
    first.multiply();
    second.multiply();
    auto top = first.release();
    auto bottom = second.release();
    CHECK(to_matrix(Slice2D<Element>::merge(top, bottom)) == seq_matmul_oracle(a, b));
  }

  SUBCASE("dimension mismatch") {
    auto left = Slice2D<Element>::make(3, 4);
    auto right = Slice2D<Element>::make(3, 3);
    auto product = Slice2D<Element>::make(3, 3);
    CHECK_KIND(MatMulWorker(left, right, product, 3), ErrorKind::DimensionMismatch);
    CHECK(left.is_modifiable());
    CHECK(right.is_modifiable());
  }
}

TEST_CASE("parallel_matmul") {
  SUBCASE("16x8 by 8x16, seed 7") {
    Prng prng(7);
    const auto a = random_matrix(16, 8, prng);
    const auto b = random_matrix(8, 16, prng);
    const auto expected = seq_matmul_oracle(a, b);
    for (int workers : {1, 2, 3, 16, 20}) {
      auto left = to_slice2d(a);
      auto right = to_slice2d(b);
      auto product = parallel_matmul(left, right, workers);
      CHECK(product.first_row() == 1);
      CHECK(product.last_row() == 16);
      CHECK(to_matrix(product) == expected);
      CHECK(left.is_modifiable());
      CHECK(right.is_modifiable());
      CHECK(threaded_matmul(a, b, workers) == expected);
    }
  }

  SUBCASE("40x20 by 20x40 with 8 workers") {
    const auto [a, b] = generate_matmul_input({40, 20, 40}, 8);
    auto left = to_slice2d(a);
    auto right = to_slice2d(b);
    CHECK(to_matrix(parallel_matmul(left, right, 8)) == seq_matmul_oracle(a, b));
  }

  SUBCASE("mismatch") {
    auto left = Slice2D<Element>::make(4, 3);
    auto right = Slice2D<Element>::make(4, 3);
    CHECK_KIND(parallel_matmul(left, right, 2), ErrorKind::DimensionMismatch);
    CHECK_KIND(threaded_matmul(Matrix(4, 3), Matrix(4, 3), 2), ErrorKind::DimensionMismatch);
  }
}
