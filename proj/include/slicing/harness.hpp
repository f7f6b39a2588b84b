#ifndef SLICING_HARNESS_HPP
#define SLICING_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "slicing/config.hpp"
#include "slicing/workers.hpp"

namespace slicing {

struct RunRecord {
  Benchmark benchmark = Benchmark::Quicksort;
  Mode mode = Mode::Slicing;
  int workers = 1;
  int run = 0;
  double seconds = 0.0;

  bool operator==(const RunRecord&) const = default;
};

struct MeanRecord {
  Benchmark benchmark = Benchmark::Quicksort;
  Mode mode = Mode::Slicing;
  int workers = 1;
  double seconds = 0.0;

  bool operator==(const MeanRecord&) const = default;
};

struct CsvContents {
  std::vector<RunRecord> runs;
  std::vector<MeanRecord> means;
};

/// Deterministic inputs: pure functions of (size, seed).
std::vector<Element> generate_sort_input(std::int64_t size, std::uint64_t seed);
std::pair<Matrix, Matrix> generate_matmul_input(const MatmulDims& dims, std::uint64_t seed);

/// Times `config.runs` executions per worker count. Only the algorithm is
/// inside the timed region (thread creation through join); input
/// generation, conversion and verification are outside. Every run is
/// checked against the sequential oracle and a mismatch throws
/// VerificationFailure. Progress lines go to `log` when given.
std::vector<RunRecord> run_benchmark(const BenchConfig& config, std::ostream* log = nullptr);

/// Arithmetic mean per (benchmark, mode, workers), in first-seen order.
std::vector<MeanRecord> summarize(const std::vector<RunRecord>& records);

double mean_seconds(const std::vector<RunRecord>& records, int workers);

/// Header `benchmark,mode,workers,run,seconds`, one row per record, then
/// one `benchmark,mode,workers,mean,<seconds>` row per cell.
void write_csv(const std::vector<RunRecord>& records, std::ostream& out);
void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);

CsvContents read_csv(std::istream& in);
CsvContents read_csv(const std::filesystem::path& path);

}  // namespace slicing

#endif  // SLICING_HARNESS_HPP
