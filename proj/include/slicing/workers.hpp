#ifndef SLICING_WORKERS_HPP
#define SLICING_WORKERS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "slicing/slice.hpp"
#include "slicing/slice2d.hpp"

namespace slicing {

using Element = std::int64_t;

/// Dense row-major matrix used for inputs, oracles and the raw-threads
/// baseline.
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t columns = 0;
  std::vector<Element> values;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c) : rows(r), columns(c), values(static_cast<std::size_t>(r * c)) {}

  Element& at(std::int64_t row, std::int64_t column) {
    return values[static_cast<std::size_t>(row * columns + column)];
  }
  const Element& at(std::int64_t row, std::int64_t column) const {
    return values[static_cast<std::size_t>(row * columns + column)];
  }

  static Matrix identity(std::int64_t n);

  bool operator==(const Matrix&) const = default;
};

// ---- sequential oracles ----

std::vector<Element> seq_sort_oracle(std::vector<Element> values);
Matrix seq_matmul_oracle(const Matrix& left, const Matrix& right);

// ---- quicksort ----

/// Owns one side of a partition: a positive n takes the first n indexes of
/// `data`, a negative n the last -n.
class SortWorker {
 public:
  SortWorker(Slice<Element>& data, std::int64_t n);

  Slice<Element>& data() noexcept { return data_; }
  Slice<Element> release() noexcept { return std::move(data_); }

 private:
  Slice<Element> data_;
};

struct QuicksortOptions {
  int max_workers = 1;
  /// Sub-ranges of at most this many elements are sorted sequentially.
  /// 0 disables the cutoff.
  std::int64_t cutoff = 0;
};

/// In-place Lomuto quicksort (last element as pivot) over a slice. Right
/// partitions are handed to new threads while fewer than max_workers are
/// live. On return `data` again owns its full original index range.
void parallel_quicksort(Slice<Element>& data, const QuicksortOptions& options);

/// Same algorithm and spawn policy on a raw span, with no synchronization
/// beyond the final joins.
void threaded_quicksort(std::span<Element> data, const QuicksortOptions& options);

/// Same algorithm again, but every element access is a get or swap message
/// to a single ArrayServer thread. The cutoff is ignored.
void serialized_quicksort(std::vector<Element>& data, int max_workers);

/// Generates n elements from `seed`, sorts them through the serialized
/// baseline and returns the wall-clock seconds spent sorting. Throws
/// VerificationFailure if the result is not sorted.
double serialized_quicksort(std::int64_t n, std::uint64_t seed, int max_workers);

// ---- matrix multiplication ----

/// Row band sizes for splitting `rows` among `workers`, remainder to the
/// first bands. Bands beyond the row count are omitted.
std::vector<std::int64_t> band_sizes(std::int64_t rows, int workers);

/// Holds read-only views of both operands and the top `rows` rows of the
/// product.
class MatMulWorker {
 public:
  MatMulWorker(Slice2D<Element>& left, Slice2D<Element>& right, Slice2D<Element>& product, std::int64_t rows);

  /// Accumulates left * right into the owned product rows, then frees both
  /// views.
  void multiply();

  Slice2D<Element>& product() noexcept { return product_; }
  Slice2D<Element> release() noexcept { return std::move(product_); }

 private:
  View2D<Element> left_;
  View2D<Element> right_;
  Slice2D<Element> product_;
};

Slice2D<Element> parallel_matmul(Slice2D<Element>& left, Slice2D<Element>& right, int workers);

Matrix threaded_matmul(const Matrix& left, const Matrix& right, int workers);

// ---- conversions ----

Slice<Element> to_slice(std::span<const Element> values);
std::vector<Element> to_vector(const Slice<Element>& slice);
Slice2D<Element> to_slice2d(const Matrix& matrix);
Matrix to_matrix(const Slice2D<Element>& slice);

}  // namespace slicing

#endif  // SLICING_WORKERS_HPP
