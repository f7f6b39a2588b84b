#include "slicing/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <thread>

#include "slicing/error.hpp"

namespace slicing {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorKind::InvalidConfig, message); }

template <typename Int>
Int parse_integer(std::string_view text, std::string_view what) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    invalid(std::string(what) + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

struct RawFlags {
  std::string benchmark = "quicksort";
  std::string mode = "slicing";
  std::int64_t size = 0;
  std::string dims;
  std::uint64_t seed = 42;
  std::string workers;
  int runs = 20;
  int warmup = 0;
  std::int64_t cutoff = 0;
  std::string out = "results.csv";
};

struct Cli {
  CLI::App app{"Array slicing scalability benchmarks", "bench"};
  RawFlags flags;
  CLI::Option* size = nullptr;
  CLI::Option* dims = nullptr;
  CLI::Option* workers = nullptr;

  Cli() {
    app.add_option("--benchmark", flags.benchmark, "quicksort | matmul");
    app.add_option("--mode", flags.mode, "slicing | threads | serialized");
    size = app.add_option("--size", flags.size, "quicksort element count (default 1000000)");
    dims = app.add_option("--dims", flags.dims, "matmul dimensions MxKxN (default 400x160x400)");
    app.add_option("--seed", flags.seed, "input generator seed (default 42)");
    workers = app.add_option("--workers", flags.workers, "comma-separated worker counts (default 1,2,4,...,32)");
    app.add_option("--runs", flags.runs, "timed runs per worker count (default 20)");
    app.add_option("--warmup", flags.warmup, "untimed runs before timing (default 0)");
    app.add_option("--cutoff", flags.cutoff, "sequential cutoff for quicksort sub-ranges, 0 = off");
    app.add_option("--out", flags.out, "CSV output path (default results.csv)");
  }
};

}  // namespace

std::string_view to_string(Benchmark benchmark) noexcept {
  return benchmark == Benchmark::Quicksort ? "quicksort" : "matmul";
}

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Slicing: return "slicing";
    case Mode::Threads: return "threads";
    case Mode::Serialized: return "serialized";
  }
  return "unknown";
}

Benchmark parse_benchmark(std::string_view text) {
  if (text == "quicksort") return Benchmark::Quicksort;
  if (text == "matmul") return Benchmark::Matmul;
  invalid("--benchmark: unknown benchmark '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
  if (text == "slicing") return Mode::Slicing;
  if (text == "threads") return Mode::Threads;
  if (text == "serialized") return Mode::Serialized;
  invalid("--mode: unknown mode '" + std::string(text) + "'");
}

MatmulDims parse_dims(std::string_view text) {
  std::vector<std::int64_t> parts;
  std::size_t start = 0;
  for (;;) {
    const auto x = text.find('x', start);
    parts.push_back(parse_integer<std::int64_t>(text.substr(start, x - start), "--dims"));
    if (x == std::string_view::npos) {
      break;
    }
    start = x + 1;
  }
  if (parts.size() != 3) {
    invalid("--dims: expected MxKxN, got '" + std::string(text) + "'");
  }
  if (std::any_of(parts.begin(), parts.end(), [](auto d) { return d < 1; })) {
    invalid("--dims: dimensions must be positive, got '" + std::string(text) + "'");
  }
  return MatmulDims{parts[0], parts[1], parts[2]};
}

std::vector<int> parse_worker_list(std::string_view text) {
  std::vector<int> counts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const int count = parse_integer<int>(item, "--workers");
    if (count < 1) {
      invalid("--workers: worker counts must be >= 1, got " + std::to_string(count));
    }
    counts.push_back(count);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  if (counts.empty()) {
    invalid("--workers: empty worker list");
  }
  return counts;
}

BenchConfig parse_config(const std::vector<std::string>& args, std::vector<std::string>* warnings) {
  Cli cli;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    cli.app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    invalid(e.what());
  }
  const RawFlags& f = cli.flags;

  BenchConfig config;
  config.benchmark = parse_benchmark(f.benchmark);
  config.mode = parse_mode(f.mode);
  config.seed = f.seed;
  config.out = f.out;

  if (config.benchmark == Benchmark::Quicksort) {
    if (cli.dims->count() > 0) {
      invalid("--dims: only valid for --benchmark matmul");
    }
    if (cli.size->count() > 0) {
      config.size = f.size;
    }
    const std::int64_t minimum = config.mode == Mode::Serialized ? 2 : 1;
    if (config.size < minimum) {
      invalid("--size: must be >= " + std::to_string(minimum) + ", got " + std::to_string(config.size));
    }
  } else {
    if (cli.size->count() > 0) {
      invalid("--size: only valid for --benchmark quicksort");
    }
    if (config.mode == Mode::Serialized) {
      invalid("--mode: serialized mode exists only for quicksort");
    }
    if (cli.dims->count() > 0) {
      config.dims = parse_dims(f.dims);
    }
  }

  if (cli.workers->count() > 0) {
    config.worker_counts = parse_worker_list(f.workers);
  } else {
    const int hardware = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    config.worker_counts.clear();
    for (int count : kDefaultWorkerCounts) {
      if (count <= hardware) {
        config.worker_counts.push_back(count);
      }
    }
    if (warnings != nullptr && config.worker_counts.size() < kDefaultWorkerCounts.size()) {
      warnings->push_back("worker sweep truncated to the " + std::to_string(hardware) +
                          " hardware thread(s) available");
    }
  }

  if (f.runs < 1) {
    invalid("--runs: must be >= 1, got " + std::to_string(f.runs));
  }
  if (f.warmup < 0) {
    invalid("--warmup: must be >= 0, got " + std::to_string(f.warmup));
  }
  if (f.cutoff < 0) {
    invalid("--cutoff: must be >= 0, got " + std::to_string(f.cutoff));
  }
  if (f.out.empty()) {
    invalid("--out: empty path");
  }
  config.runs = f.runs;
  config.warmup = f.warmup;
  config.cutoff = f.cutoff;
  return config;
}

BenchConfig parse_config(int argc, const char* const* argv, std::vector<std::string>* warnings) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    args.emplace_back(argv[i]);
  }
  return parse_config(args, warnings);
}

std::vector<std::string> to_args(const BenchConfig& config) {
  std::vector<std::string> args{"--benchmark", std::string(to_string(config.benchmark)), "--mode",
                                std::string(to_string(config.mode))};
  if (config.benchmark == Benchmark::Quicksort) {
    args.insert(args.end(), {"--size", std::to_string(config.size)});
  } else {
    const auto& d = config.dims;
    args.insert(args.end(), {"--dims", std::to_string(d.m) + "x" + std::to_string(d.k) + "x" + std::to_string(d.n)});
  }
  std::string workers;
  for (const int count : config.worker_counts) {
    workers += (workers.empty() ? "" : ",") + std::to_string(count);
  }
  args.insert(args.end(), {"--seed", std::to_string(config.seed), "--workers", workers, "--runs",
                           std::to_string(config.runs), "--warmup", std::to_string(config.warmup), "--cutoff",
                           std::to_string(config.cutoff), "--out", config.out});
  return args;
}

std::string to_string(const BenchConfig& config) {
  std::string text;
  for (const auto& arg : to_args(config)) {
    text += (text.empty() ? "" : " ") + arg;
  }
  return text;
}

std::string usage() {
  Cli cli;
  return cli.app.help();
}

}  // namespace slicing
