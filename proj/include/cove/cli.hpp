#pragma once

// Command-line front end: run pipelines over datasets, evaluate results,
// replay recorded runs, validate inputs, and compare runs.
//
// Exit codes (stable, documented in the README):
//   0 success
//   1 configuration error
//   2 dataset error (including results/gold id mismatches)
//   3 unrecoverable backend error
//   4 replay divergence

#include <string>
#include <vector>

namespace cove::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDataset = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitDivergence = 4;

// argv-style entry point (without the program name).
int run_cli(const std::vector<std::string>& args);

}  // namespace cove::cli
