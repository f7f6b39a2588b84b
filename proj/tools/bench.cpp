// bench: runs the quicksort / matrix multiplication scalability sweeps and
// writes per-run and mean timings as CSV.

#include <cstdio>
#include <iostream>
#include <string_view>

#include "slicing/config.hpp"
#include "slicing/error.hpp"
#include "slicing/harness.hpp"

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--help" || arg == "-h") {
      std::cout << slicing::usage();
      return 0;
    }
  }

  slicing::BenchConfig config;
  try {
    std::vector<std::string> warnings;
    config = slicing::parse_config(argc, argv, &warnings);
    for (const auto& warning : warnings) {
      std::cerr << "warning: " << warning << '\n';
    }
  } catch (const slicing::Error& e) {
    std::cerr << "bench: " << e.what() << "\n\n" << slicing::usage();
    return 2;
  }

  std::cerr << "config: " << slicing::to_string(config) << '\n';
  try {
    const auto records = slicing::run_benchmark(config, &std::cerr);
    slicing::write_csv(records, config.out);
    std::printf("%-10s %-11s %8s %12s\n", "benchmark", "mode", "workers", "mean [s]");
    for (const auto& mean : slicing::summarize(records)) {
      std::printf("%-10s %-11s %8d %12.6f\n", std::string(slicing::to_string(mean.benchmark)).c_str(),
                  std::string(slicing::to_string(mean.mode)).c_str(), mean.workers, mean.seconds);
    }
  } catch (const slicing::Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return e.kind() == slicing::ErrorKind::VerificationFailure ? 1 : 3;
  }
  return 0;
}
