#include <memory>
#include <span>
#include <thread>
#include <vector>

#include "slicing/workers.hpp"

namespace slicing {

namespace {

void check_operands(std::int64_t left_columns, std::int64_t right_rows) {
  if (left_columns != right_rows) {
    throw Error(ErrorKind::DimensionMismatch, "inner dimensions " + std::to_string(left_columns) + " and " +
                                                  std::to_string(right_rows) + " differ");
  }
}

}  // namespace

Matrix Matrix::identity(std::int64_t n) {
  Matrix m(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    m.at(i, i) = 1;
  }
  return m;
}

Matrix seq_matmul_oracle(const Matrix& left, const Matrix& right) {
  check_operands(left.columns, right.rows);
  Matrix product(left.rows, right.columns);
  for (std::int64_t i = 0; i < left.rows; ++i) {
    for (std::int64_t j = 0; j < right.columns; ++j) {
      Element sum = 0;
      for (std::int64_t k = 0; k < left.columns; ++k) {
        sum += left.at(i, k) * right.at(k, j);
      }
      product.at(i, j) = sum;
    }
  }
  return product;
}

std::vector<std::int64_t> band_sizes(std::int64_t rows, int workers) {
  if (workers < 1) {
    throw Error(ErrorKind::InvalidConfig, "at least one worker is required");
  }
  std::vector<std::int64_t> sizes;
  const std::int64_t bands = std::min<std::int64_t>(rows, workers);
  for (std::int64_t b = 0; b < bands; ++b) {
    sizes.push_back(rows / bands + (b < rows % bands ? 1 : 0));
  }
  return sizes;
}

MatMulWorker::MatMulWorker(Slice2D<Element>& left, Slice2D<Element>& right, Slice2D<Element>& product,
                           std::int64_t rows)
    : left_(left), right_(right), product_(product.slice_top(rows)) {
  check_operands(left_.last_column(), right_.row_count());
  if (right_.first_row() != 1 || product_.last_column() != right_.last_column() ||
      left_.first_row() > product_.first_row() || left_.last_row() < product_.last_row()) {
    throw Error(ErrorKind::DimensionMismatch, "product rows or columns do not match the operands");
  }
}

void MatMulWorker::multiply() {
  const auto rhs = right_.elements();
  const auto inner = static_cast<std::size_t>(left_.last_column());
  const auto columns = static_cast<std::size_t>(right_.last_column());
  for (auto i = product_.first_row(); i <= product_.last_row(); ++i) {
    const auto lhs = left_.row(i);
    for (auto j = product_.first_column(); j <= product_.last_column(); ++j) {
      const auto column = static_cast<std::size_t>(j - 1);
      Element sum = 0;
      for (std::size_t k = 0; k < inner; ++k) {
        sum += lhs[k] * rhs[k * columns + column];
      }
      product_.put(product_.item(i, j) + sum, i, j);
    }
  }
  left_.free();
  right_.free();
}

Slice2D<Element> parallel_matmul(Slice2D<Element>& left, Slice2D<Element>& right, int workers) {
  check_operands(left.column_count(), right.row_count());
  auto product = Slice2D<Element>::make(left.row_count(), right.column_count());

  std::vector<std::unique_ptr<MatMulWorker>> team;
  for (const auto rows : band_sizes(left.row_count(), workers)) {
    team.push_back(std::make_unique<MatMulWorker>(left, right, product, rows));
  }
  {
    std::vector<std::jthread> threads;
    for (std::size_t w = 1; w < team.size(); ++w) {
      threads.emplace_back([worker = team[w].get()] { worker->multiply(); });
    }
    team.front()->multiply();
  }

  Slice2D<Element> result = team.front()->release();
  for (std::size_t w = 1; w < team.size(); ++w) {
    Slice2D<Element> band = team[w]->release();
    result = Slice2D<Element>::merge(result, band);
  }
  return result;
}

Matrix threaded_matmul(const Matrix& left, const Matrix& right, int workers) {
  check_operands(left.columns, right.rows);
  Matrix product(left.rows, right.columns);
  const Element* a = left.values.data();
  const Element* b = right.values.data();
  Element* c = product.values.data();
  const std::int64_t inner = left.columns;
  const std::int64_t columns = right.columns;

  auto band = [=](std::int64_t first, std::int64_t last) {
    for (auto i = first; i < last; ++i) {
      for (std::int64_t j = 0; j < columns; ++j) {
        Element sum = 0;
        for (std::int64_t k = 0; k < inner; ++k) {
          sum += a[i * inner + k] * b[k * columns + j];
        }
        c[i * columns + j] += sum;
      }
    }
  };

  const auto sizes = band_sizes(left.rows, workers);
  std::vector<std::jthread> threads;
  std::int64_t first = sizes.empty() ? 0 : sizes.front();
  for (std::size_t w = 1; w < sizes.size(); ++w) {
    threads.emplace_back(band, first, first + sizes[w]);
    first += sizes[w];
  }
  if (!sizes.empty()) {
    band(0, sizes.front());
  }
  return product;
}

Slice2D<Element> to_slice2d(const Matrix& matrix) {
  auto slice = Slice2D<Element>::make(matrix.rows, matrix.columns);
  for (std::int64_t i = 0; i < matrix.rows; ++i) {
    for (std::int64_t j = 0; j < matrix.columns; ++j) {
      slice.put(matrix.at(i, j), slice.first_row() + i, j + 1);
    }
  }
  return slice;
}

Matrix to_matrix(const Slice2D<Element>& slice) {
  Matrix matrix(slice.row_count(), slice.column_count());
  for (std::int64_t i = 0; i < matrix.rows; ++i) {
    for (std::int64_t j = 0; j < matrix.columns; ++j) {
      matrix.at(i, j) = slice.item(slice.first_row() + i, j + 1);
    }
  }
  return matrix;
}

}  // namespace slicing
