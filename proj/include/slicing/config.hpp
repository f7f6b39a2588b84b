#ifndef SLICING_CONFIG_HPP
#define SLICING_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace slicing {

enum class Benchmark { Quicksort, Matmul };
enum class Mode { Slicing, Threads, Serialized };

std::string_view to_string(Benchmark benchmark) noexcept;
std::string_view to_string(Mode mode) noexcept;
Benchmark parse_benchmark(std::string_view text);
Mode parse_mode(std::string_view text);

/// left is m x k, right is k x n.
struct MatmulDims {
  std::int64_t m = 400;
  std::int64_t k = 160;
  std::int64_t n = 400;

  bool operator==(const MatmulDims&) const = default;
};

inline const std::vector<int> kDefaultWorkerCounts{1, 2, 4, 8, 16, 32};

struct BenchConfig {
  Benchmark benchmark = Benchmark::Quicksort;
  Mode mode = Mode::Slicing;
  std::int64_t size = 1'000'000;
  MatmulDims dims;
  std::uint64_t seed = 42;
  std::vector<int> worker_counts{1};
  int runs = 20;
  int warmup = 0;
  std::int64_t cutoff = 0;
  std::string out = "results.csv";

  bool operator==(const BenchConfig&) const = default;
};

/// Parses the `bench` command line (argv[0] is the program name). Throws
/// Error(InvalidConfig) naming the offending flag. When --workers is absent
/// the default sweep is truncated to the hardware parallelism and a note is
/// appended to `warnings`, if given.
BenchConfig parse_config(int argc, const char* const* argv, std::vector<std::string>* warnings = nullptr);
BenchConfig parse_config(const std::vector<std::string>& args, std::vector<std::string>* warnings = nullptr);

/// Flags that reproduce `config` through parse_config.
std::vector<std::string> to_args(const BenchConfig& config);

/// One-line debug rendering, the flags joined by spaces.
std::string to_string(const BenchConfig& config);

/// Help text for the `bench` command line.
std::string usage();

MatmulDims parse_dims(std::string_view text);
std::vector<int> parse_worker_list(std::string_view text);

}  // namespace slicing

#endif  // SLICING_CONFIG_HPP
