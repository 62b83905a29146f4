#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prismint/coefficients.hpp"
#include "prismint/kernels.hpp"
#include "prismint/planner.hpp"

namespace prismint {

struct RunConfig {
  int nx = 4, ny = 4, nz = 4;
  double distortion = 0.1;
  std::uint64_t seed = 42;
  std::vector<int> orders = {2, 3, 4, 5, 6, 7};
  std::vector<KernelVariant> variants = {kRegJac, kRegNojac, kShmJac, kShmNojac};
  MaterialData material{200.0e9, 0.3};
  Precision precision = Precision::f32;
  std::optional<int> occupancy;
  std::optional<int> wg_override;
  int repetitions = 5;
  int warmup = 1;
  int n_workers = 0;
  std::string dump_dir;  // when set, input/output buffers are written there
};

/// Host-side wall-clock phase times for one (variant, p) run, in seconds.
struct PhaseTimes {
  double input_prep = 0.0;
  double buffer_init = 0.0;
  double kernel = 0.0;
  double output_convert = 0.0;

  double total() const { return input_prep + buffer_init + kernel + output_convert; }
};

struct BenchRow {
  std::string variant;
  int order_p = 0;
  std::string device;
  std::int64_t elements = 0;
  PhaseTimes phases;
  std::uint64_t flops = 0;
  double throughput_gflops = 0.0;  // flops / kernel seconds
  std::uint64_t input_jac_bytes = 0;
  std::uint64_t input_nojac_bytes = 0;
  std::uint64_t output_bytes = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

BenchReport run_bench(const RunConfig& config, const DeviceProfile& profile);

/// One row per (variant, p); schema documented in the README.
std::string bench_to_csv(const BenchReport& report);

/// Plot-ready long format: variant, p, phase, seconds.
std::string bench_to_long_csv(const BenchReport& report);

std::string bench_to_json(const BenchReport& report);

}  // namespace prismint
