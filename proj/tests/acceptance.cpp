// Acceptance suite: one PASS/FAIL/N/A line per criterion, exit status 1 if
// any criterion fails. Criteria can be selected by number on the command
// line (e.g. `acceptance 1 3 8`); by default all eight run.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <latch>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <thread>
#include <vector>

#include "slicing/error.hpp"
#include "slicing/harness.hpp"
#include "slicing/prng.hpp"
#include "slicing/slice.hpp"
#include "slicing/workers.hpp"
#include "support/trace_model.hpp"

using namespace slicing;

namespace {

enum class Status { Pass, Fail, NotApplicable };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double value, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

// ---- 1: oracle equivalence ----

constexpr double kCorrectnessLimit = 120.0;

Outcome correctness() {
  const auto start = std::chrono::steady_clock::now();
  int sort_cases = 0;
  int matmul_cases = 0;
  std::string first_failure;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (const std::int64_t n : {10, 1'000, 100'000}) {
      const auto input = generate_sort_input(n, seed);
      const auto expected = seq_sort_oracle(input);
      for (const int workers : {1, 2, 4, 8}) {
        auto slice = to_slice(input);
        parallel_quicksort(slice, {workers, 0});
        ++sort_cases;
        if (to_vector(slice) != expected || slice.lower() != 1 || slice.upper() != n) {
          if (first_failure.empty()) {
            first_failure = "quicksort seed " + std::to_string(seed) + " n " + std::to_string(n) + " w " +
                            std::to_string(workers);
          }
        }
      }
    }

    Prng dims_prng(seed);
    const MatmulDims dims{1 + static_cast<std::int64_t>(dims_prng.below(64)),
                          1 + static_cast<std::int64_t>(dims_prng.below(64)),
                          1 + static_cast<std::int64_t>(dims_prng.below(64))};
    const auto [left, right] = generate_matmul_input(dims, seed);
    const auto expected = seq_matmul_oracle(left, right);
    for (const int workers : {1, 3, 8}) {
      auto l = to_slice2d(left);
      auto r = to_slice2d(right);
      const auto product = parallel_matmul(l, r, workers);
      ++matmul_cases;
      if (to_matrix(product) != expected || l.readers() != 0 || r.readers() != 0) {
        if (first_failure.empty()) {
          first_failure = "matmul seed " + std::to_string(seed) + " w " + std::to_string(workers);
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  std::string detail = std::to_string(sort_cases) + " sorts, " + std::to_string(matmul_cases) +
                       " products vs oracle in " + fixed(elapsed, 1) + " s (limit " + fixed(kCorrectnessLimit, 0) +
                       " s)";
  if (!first_failure.empty()) {
    detail += "; first mismatch: " + first_failure;
  }
  return verdict(first_failure.empty() && elapsed < kCorrectnessLimit, detail);
}

// ---- 2: randomized slice traces ----

constexpr int kTraces = 10'000;
constexpr double kTraceLimit = 60.0;

Outcome slice_invariants() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = testing::run_traces(7'000'000, kTraces, 60);
  const double elapsed = seconds_since(start);

  std::vector<std::string> missing;
  for (const auto kind : {ErrorKind::BoundsViolation, ErrorKind::NotModifiable, ErrorKind::NotAdjacent,
                          ErrorKind::ReaderUnderflow, ErrorKind::UseAfterFree}) {
    if (report.errors.count(kind) == 0) {
      missing.emplace_back(to_string(kind));
    }
  }
  std::string detail = std::to_string(kTraces) + " traces, " + std::to_string(report.operations) + " ops, " +
                       std::to_string(report.failures.size()) + " violations in " + fixed(elapsed, 1) + " s (limit " +
                       fixed(kTraceLimit, 0) + " s)";
  for (const auto& [kind, count] : report.errors) {
    detail += "; " + std::string(to_string(kind)) + "=" + std::to_string(count);
  }
  if (!report.failures.empty()) {
    detail += "; first: " + report.failures.front();
  }
  for (const auto& kind : missing) {
    detail += "; never raised: " + kind;
  }
  return verdict(report.ok() && missing.empty() && elapsed < kTraceLimit, detail);
}

// ---- 3: race gate ----

constexpr int kRaceRepetitions = 100;
constexpr int kViewThreads = 8;

Outcome race_gate() {
  constexpr std::int64_t n = 256;
  std::int64_t torn = 0;
  std::int64_t rejected = 0;
  std::int64_t wrong_errors = 0;
  std::int64_t accepted_puts = 0;
  int failed_reopen = 0;

  for (int rep = 0; rep < kRaceRepetitions; ++rep) {
    auto slice = Slice<std::int64_t>::make(n);
    for (auto i = slice.lower(); i <= slice.upper(); ++i) {
      slice.put(i * 7 + rep, i);
    }
    std::vector<View<std::int64_t>> views;
    for (int t = 0; t < kViewThreads; ++t) {
      views.emplace_back(slice);
    }

    std::latch put_done(1);
    std::atomic<std::int64_t> torn_reads{0};
    {
      std::vector<std::jthread> readers;
      for (auto& view : views) {
        readers.emplace_back([&view, &put_done, &torn_reads, rep] {
          for (int pass = 0; pass < 50; ++pass) {
            for (auto i = view.lower(); i <= view.upper(); ++i) {
              if (view.item(i) != i * 7 + rep) {
                torn_reads.fetch_add(1, std::memory_order_relaxed);
              }
            }
          }
          put_done.wait();
          view.free();
        });
      }
      std::jthread writer([&] {
        for (int attempt = 0; attempt < 2'000; ++attempt) {
          const std::int64_t index = 1 + attempt % n;
          try {
            slice.put(-1, index);
            ++accepted_puts;
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::NotModifiable) {
              ++rejected;
            } else {
              ++wrong_errors;
            }
          }
        }
        put_done.count_down();
      });
    }
    torn += torn_reads.load();

    try {
      slice.put(-1, 1);
      if (slice.item(1) != -1 || slice.readers() != 0) {
        ++failed_reopen;
      }
    } catch (const Error&) {
      ++failed_reopen;
    }
  }
  return verdict(torn == 0 && wrong_errors == 0 && accepted_puts == 0 && failed_reopen == 0,
                 std::to_string(kRaceRepetitions) + " reps x " + std::to_string(kViewThreads) +
                     " view threads: torn reads " + std::to_string(torn) + ", NotModifiable " +
                     std::to_string(rejected) + ", other errors " + std::to_string(wrong_errors) +
                     ", puts accepted while frozen " + std::to_string(accepted_puts) + ", failed puts after free " +
                     std::to_string(failed_reopen));
}

// ---- 4 and 5: timing sweep ----

constexpr int kTimedRuns = 20;
constexpr double kQuicksortSpeedup = 1.4;
constexpr double kMatmulSpeedup = 2.5;
constexpr double kParityTolerance = 0.15;
const std::vector<int> kSweepWorkers{1, 4};

struct Sweep {
  std::map<std::pair<Mode, int>, double> quicksort;
  std::map<std::pair<Mode, int>, double> matmul;
  double seconds = 0.0;
};

// Modes and worker counts are interleaved run by run so that drift in
// machine load affects every cell alike.
std::map<std::pair<Mode, int>, double> measure(Benchmark benchmark) {
  std::map<std::pair<Mode, int>, std::vector<RunRecord>> records;
  for (int run = 0; run < kTimedRuns; ++run) {
    for (const int workers : kSweepWorkers) {
      for (const Mode mode : {Mode::Slicing, Mode::Threads}) {
        BenchConfig config;
        config.benchmark = benchmark;
        config.mode = mode;
        config.size = 1'000'000;
        config.dims = MatmulDims{400, 160, 400};
        config.worker_counts = {workers};
        config.runs = 1;
        const auto one = run_benchmark(config);
        records[{mode, workers}].insert(records[{mode, workers}].end(), one.begin(), one.end());
      }
    }
  }
  std::map<std::pair<Mode, int>, double> means;
  for (const auto& [cell, runs] : records) {
    means[cell] = mean_seconds(runs, cell.second);
  }
  return means;
}

const Sweep& sweep() {
  static const Sweep result = [] {
    const auto start = std::chrono::steady_clock::now();
    Sweep s;
    s.quicksort = measure(Benchmark::Quicksort);
    s.matmul = measure(Benchmark::Matmul);
    s.seconds = seconds_since(start);
    return s;
  }();
  return result;
}

unsigned hardware_cores() { return std::max(1U, std::thread::hardware_concurrency()); }

Outcome scalability() {
  const auto& s = sweep();
  const double qs_ratio = s.quicksort.at({Mode::Slicing, 1}) / s.quicksort.at({Mode::Slicing, 4});
  const double mm_ratio = s.matmul.at({Mode::Slicing, 1}) / s.matmul.at({Mode::Slicing, 4});
  const std::string detail = "speedup w1/w4: quicksort 1e6 " + fixed(qs_ratio, 2) + " (need >= " +
                             fixed(kQuicksortSpeedup, 1) + "), matmul 400x160x400 " + fixed(mm_ratio, 2) +
                             " (need >= " + fixed(kMatmulSpeedup, 1) + "); " + std::to_string(kTimedRuns) +
                             " runs each, sweep " + fixed(s.seconds, 1) + " s";
  if (hardware_cores() < 4) {
    return {Status::NotApplicable,
            "requires >= 4 cores, machine has " + std::to_string(hardware_cores()) + "; measured " + detail};
  }
  return verdict(qs_ratio >= kQuicksortSpeedup && mm_ratio >= kMatmulSpeedup, detail);
}

Outcome parity() {
  const auto& s = sweep();
  bool ok = true;
  std::string detail;
  for (const auto& [name, means] : {std::pair{"quicksort", &s.quicksort}, std::pair{"matmul", &s.matmul}}) {
    for (const int workers : kSweepWorkers) {
      const double slicing = means->at({Mode::Slicing, workers});
      const double threads = means->at({Mode::Threads, workers});
      const double gap = std::abs(slicing - threads) / threads;
      ok = ok && gap <= kParityTolerance;
      detail += std::string(detail.empty() ? "" : "; ") + name + " w" + std::to_string(workers) + " slicing " +
                fixed(slicing, 4) + " s vs threads " + fixed(threads, 4) + " s, gap " + fixed(gap * 100, 1) + "%";
    }
  }
  return verdict(ok, detail + " (limit " + fixed(kParityTolerance * 100, 0) + "%)");
}

// ---- 6: serialized slowdown ----

constexpr double kSerializedSlowdown = 2.0;
constexpr double kSequentialFloor = 0.9;

Outcome serialized_slowdown() {
  constexpr std::int64_t n = 100'000;
  constexpr std::uint64_t seed = 42;
  const auto input = generate_sort_input(n, seed);

  double slicing_total = 0.0;
  double sequential_total = 0.0;
  constexpr int repeats = 5;
  for (int r = 0; r < repeats; ++r) {
    auto slice = to_slice(input);
    auto start = std::chrono::steady_clock::now();
    parallel_quicksort(slice, {4, 0});
    slicing_total += seconds_since(start);

    auto copy = input;
    start = std::chrono::steady_clock::now();
    std::sort(copy.begin(), copy.end());
    sequential_total += seconds_since(start);
  }
  const double slicing = slicing_total / repeats;
  const double sequential = sequential_total / repeats;
  const double serialized = serialized_quicksort(n, seed, 4);

  const double ratio = serialized / slicing;
  const double versus_sequential = serialized / sequential;
  return verdict(ratio >= kSerializedSlowdown && versus_sequential >= kSequentialFloor,
                 "n 1e5 w4: serialized " + fixed(serialized, 3) + " s, slicing " + fixed(slicing, 4) +
                     " s, ratio " + fixed(ratio, 1) + "x (need >= " + fixed(kSerializedSlowdown, 1) +
                     "x); vs sequential sort " + fixed(sequential, 4) + " s: " + fixed(versus_sequential, 1) +
                     "x (need >= " + fixed(kSequentialFloor, 1) + "x)");
}

// ---- 7: readers counter ----

constexpr int kCounterThreads = 64;
constexpr int kCounterPairs = 1'000;

Outcome counter_linearizability() {
  auto slice = Slice<std::int64_t>::make(1);
  std::atomic<int> errors{0};
  std::atomic<std::int64_t> max_seen{0};
  {
    std::latch go(kCounterThreads);
    std::vector<std::jthread> threads;
    for (int t = 0; t < kCounterThreads; ++t) {
      threads.emplace_back([&] {
        go.arrive_and_wait();
        for (int i = 0; i < kCounterPairs; ++i) {
          try {
            slice.freeze();
            const auto seen = slice.readers();
            auto prev = max_seen.load(std::memory_order_relaxed);
            while (seen > prev && !max_seen.compare_exchange_weak(prev, seen)) {
            }
            slice.melt();
          } catch (const Error&) {
            errors.fetch_add(1);
          }
        }
      });
    }
  }
  const auto balanced = slice.readers();

  bool underflow = false;
  try {
    slice.melt();
  } catch (const Error& e) {
    underflow = e.kind() == ErrorKind::ReaderUnderflow;
  }
  const auto after = slice.readers();

  return verdict(balanced == 0 && errors.load() == 0 && underflow && after == 0,
                 std::to_string(kCounterThreads) + " threads x " + std::to_string(kCounterPairs) +
                     " pairs: readers " + std::to_string(balanced) + ", errors " + std::to_string(errors.load()) +
                     ", peak " + std::to_string(max_seen.load()) + "; extra melt " +
                     (underflow ? "raised ReaderUnderflow" : "did not raise ReaderUnderflow") +
                     ", readers after " + std::to_string(after));
}

// ---- 8: CSV contract ----

constexpr double kMeanTolerance = 1e-9;

Outcome csv_contract() {
  BenchConfig config;
  config.benchmark = Benchmark::Quicksort;
  config.size = 5'000;
  config.worker_counts = {1, 2, 3};
  config.runs = 5;
  auto records = run_benchmark(config);

  // Awkward doubles exercise shortest round-trip formatting.
  Prng prng(99);
  for (int i = 0; i < 200; ++i) {
    const double value = std::ldexp(static_cast<double>(prng.next() >> 11) + 1.0, -60 + static_cast<int>(i % 90));
    records.push_back({Benchmark::Matmul, Mode::Threads, 1 + i % 4, i / 4, value});
  }

  const auto path = std::filesystem::temp_directory_path() / "slicing_acceptance.csv";
  write_csv(records, path);
  const auto parsed = read_csv(path);
  std::filesystem::remove(path);

  const bool lossless = parsed.runs == records;

  std::map<std::tuple<Benchmark, Mode, int>, std::pair<double, int>> sums;
  for (const auto& r : records) {
    auto& [sum, count] = sums[{r.benchmark, r.mode, r.workers}];
    sum += r.seconds;
    ++count;
  }
  double worst = 0.0;
  bool complete = parsed.means.size() == sums.size();
  for (const auto& m : parsed.means) {
    const auto it = sums.find({m.benchmark, m.mode, m.workers});
    if (it == sums.end()) {
      complete = false;
      continue;
    }
    const double expected = it->second.first / it->second.second;
    worst = std::max(worst, std::abs(m.seconds - expected) / expected);
  }
  std::ostringstream worst_text;
  worst_text << worst;
  return verdict(lossless && complete && worst <= kMeanTolerance,
                 std::to_string(records.size()) + " runs " + (lossless ? "round-trip exactly" : "DIFFER after round-trip") +
                     ", " + std::to_string(parsed.means.size()) + " mean rows" +
                     (complete ? "" : " (incomplete)") + ", worst relative mean error " + worst_text.str() +
                     " (limit 1e-9)");
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "correctness", correctness},
      {2, "slice invariants", slice_invariants},
      {3, "race gate", race_gate},
      {4, "scalability", scalability},
      {5, "slicing/threads parity", parity},
      {6, "serialized slowdown", serialized_slowdown},
      {7, "counter linearizability", counter_linearizability},
      {8, "csv contract", csv_contract},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::atoi(argv[i]));
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && selected.count(c.number) == 0) {
      continue;
    }
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* label = outcome.status == Status::Pass ? "PASS" : outcome.status == Status::Fail ? "FAIL" : "N/A ";
    std::printf("%s  %d %-24s %s\n", label, c.number, c.name, outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.status == Status::Fail ? 1 : 0;
  }
  return failures == 0 ? 0 : 1;
}
