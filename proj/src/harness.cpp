#include "slicing/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "slicing/prng.hpp"

namespace slicing {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

[[noreturn]] void verification_failure(const BenchConfig& config, int workers) {
  throw Error(ErrorKind::VerificationFailure, std::string(to_string(config.benchmark)) + "/" +
                                                  std::string(to_string(config.mode)) + " with " +
                                                  std::to_string(workers) + " workers disagrees with the oracle");
}

double time_quicksort(const BenchConfig& config, int workers, const std::vector<Element>& input,
                      const std::vector<Element>& expected) {
  const QuicksortOptions options{workers, config.cutoff};
  double seconds = 0.0;
  std::vector<Element> output;
  switch (config.mode) {
    case Mode::Slicing: {
      auto slice = to_slice(input);
      const auto start = Clock::now();
      parallel_quicksort(slice, options);
      seconds = seconds_since(start);
      output = to_vector(slice);
      break;
    }
    case Mode::Threads: {
      output = input;
      const auto start = Clock::now();
      threaded_quicksort(output, options);
      seconds = seconds_since(start);
      break;
    }
    case Mode::Serialized: {
      output = input;
      const auto start = Clock::now();
      serialized_quicksort(output, workers);
      seconds = seconds_since(start);
      break;
    }
  }
  if (output != expected) {
    verification_failure(config, workers);
  }
  return seconds;
}

double time_matmul(const BenchConfig& config, int workers, const Matrix& left, const Matrix& right,
                   const Matrix& expected) {
  double seconds = 0.0;
  Matrix output;
  switch (config.mode) {
    case Mode::Slicing: {
      auto l = to_slice2d(left);
      auto r = to_slice2d(right);
      const auto start = Clock::now();
      auto product = parallel_matmul(l, r, workers);
      seconds = seconds_since(start);
      output = to_matrix(product);
      break;
    }
    case Mode::Threads: {
      const auto start = Clock::now();
      output = threaded_matmul(left, right, workers);
      seconds = seconds_since(start);
      break;
    }
    case Mode::Serialized:
      throw Error(ErrorKind::InvalidConfig, "serialized mode exists only for quicksort");
  }
  if (output != expected) {
    verification_failure(config, workers);
  }
  return seconds;
}

std::string format_seconds(double seconds) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), seconds);
  return std::string(buffer, end);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

template <typename Number>
Number parse_field(const std::string& text, std::size_t line_number) {
  Number value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw Error(ErrorKind::IoFailure, "line " + std::to_string(line_number) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<Element> generate_sort_input(std::int64_t size, std::uint64_t seed) {
  Prng prng(seed);
  std::vector<Element> values(static_cast<std::size_t>(size));
  for (auto& value : values) {
    value = static_cast<Element>(prng.next());
  }
  return values;
}

std::pair<Matrix, Matrix> generate_matmul_input(const MatmulDims& dims, std::uint64_t seed) {
  Prng prng(seed);
  Matrix left(dims.m, dims.k);
  Matrix right(dims.k, dims.n);
  for (auto* matrix : {&left, &right}) {
    for (auto& value : matrix->values) {
      value = static_cast<Element>(prng.below(19)) - 9;
    }
  }
  return {std::move(left), std::move(right)};
}

std::vector<RunRecord> run_benchmark(const BenchConfig& config, std::ostream* log) {
  if (config.runs < 1 || config.worker_counts.empty()) {
    throw Error(ErrorKind::InvalidConfig, "runs >= 1 and a nonempty worker list are required");
  }
  std::vector<RunRecord> records;

  std::vector<Element> sort_input;
  std::vector<Element> sort_expected;
  Matrix left;
  Matrix right;
  Matrix product_expected;
  if (config.benchmark == Benchmark::Quicksort) {
    sort_input = generate_sort_input(config.size, config.seed);
    sort_expected = seq_sort_oracle(sort_input);
  } else {
    std::tie(left, right) = generate_matmul_input(config.dims, config.seed);
    product_expected = seq_matmul_oracle(left, right);
  }

  for (const int workers : config.worker_counts) {
    if (workers < 1) {
      throw Error(ErrorKind::InvalidConfig, "worker counts must be >= 1");
    }
    for (int run = -config.warmup; run < config.runs; ++run) {
      const double seconds = config.benchmark == Benchmark::Quicksort
                                 ? time_quicksort(config, workers, sort_input, sort_expected)
                                 : time_matmul(config, workers, left, right, product_expected);
      if (run < 0) {
        continue;
      }
      records.push_back(RunRecord{config.benchmark, config.mode, workers, run, seconds});
      if (log != nullptr) {
        *log << to_string(config.benchmark) << ' ' << to_string(config.mode) << " workers=" << workers
             << " run=" << run << " seconds=" << format_seconds(seconds) << '\n';
      }
    }
  }
  return records;
}

std::vector<MeanRecord> summarize(const std::vector<RunRecord>& records) {
  std::vector<MeanRecord> means;
  std::vector<int> counts;
  for (const auto& record : records) {
    auto it = std::find_if(means.begin(), means.end(), [&](const MeanRecord& m) {
      return m.benchmark == record.benchmark && m.mode == record.mode && m.workers == record.workers;
    });
    if (it == means.end()) {
      means.push_back(MeanRecord{record.benchmark, record.mode, record.workers, 0.0});
      counts.push_back(0);
      it = std::prev(means.end());
    }
    it->seconds += record.seconds;
    ++counts[static_cast<std::size_t>(it - means.begin())];
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    means[i].seconds /= counts[i];
  }
  return means;
}

double mean_seconds(const std::vector<RunRecord>& records, int workers) {
  double total = 0.0;
  int count = 0;
  for (const auto& record : records) {
    if (record.workers == workers) {
      total += record.seconds;
      ++count;
    }
  }
  if (count == 0) {
    throw Error(ErrorKind::InvalidConfig, "no records for " + std::to_string(workers) + " workers");
  }
  return total / count;
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  if (records.empty()) {
    throw Error(ErrorKind::IoFailure, "no records to write");
  }
  out << "benchmark,mode,workers,run,seconds\n";
  for (const auto& r : records) {
    out << to_string(r.benchmark) << ',' << to_string(r.mode) << ',' << r.workers << ',' << r.run << ','
        << format_seconds(r.seconds) << '\n';
  }
  for (const auto& m : summarize(records)) {
    out << to_string(m.benchmark) << ',' << to_string(m.mode) << ',' << m.workers << ",mean,"
        << format_seconds(m.seconds) << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::IoFailure, "write failed");
  }
}

void write_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  }
  write_csv(records, out);
}

CsvContents read_csv(std::istream& in) {
  CsvContents contents;
  std::string line;
  if (!std::getline(in, line) || line != "benchmark,mode,workers,run,seconds") {
    throw Error(ErrorKind::IoFailure, "missing CSV header");
  }
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw Error(ErrorKind::IoFailure, "line " + std::to_string(line_number) + ": expected 5 fields");
    }
    try {
      const auto benchmark = parse_benchmark(fields[0]);
      const auto mode = parse_mode(fields[1]);
      const int workers = parse_field<int>(fields[2], line_number);
      const double seconds = parse_field<double>(fields[4], line_number);
      if (fields[3] == "mean") {
        contents.means.push_back(MeanRecord{benchmark, mode, workers, seconds});
      } else {
        contents.runs.push_back(RunRecord{benchmark, mode, workers, parse_field<int>(fields[3], line_number), seconds});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::IoFailure) {
        throw;
      }
      throw Error(ErrorKind::IoFailure, "line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return contents;
}

CsvContents read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  }
  return read_csv(in);
}

}  // namespace slicing
