#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prismint/coefficients.hpp"
#include "prismint/planner.hpp"

namespace prismint {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyConfig {
  int nx = 4, ny = 4, nz = 4;
  double distortion = 0.1;
  std::uint64_t seed = 42;
  std::vector<int> orders = {2, 3, 4, 5};
  MaterialData material{200.0e9, 0.3};
  int n_workers = 0;
  /// Cap on the number of mesh elements compared against the wide-precision
  /// reference per order (the acceptance suite sweeps whole meshes).
  int oracle_sample_elements = 16;
  std::optional<DeviceProfile> profile;  // used by kernel suites; built-in default otherwise
  bool check_tables = false;             // profile-vs-recorded-characteristics suite
  bool inject_inverted_element = false;  // error-path demonstration
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  int passed = 0;
  int failed = 0;

  bool all_passed() const { return failed == 0; }
};

VerifyReport run_verification(const VerifyConfig& config);

std::string verify_report_to_json(const VerifyReport& report);
std::string verify_report_to_text(const VerifyReport& report);

/// Recorded execution characteristics of the two reference GPUs, used by the
/// planner-table suite. Values are per order p = 2..7.
struct RecordedDeviceTable {
  std::string profile_name;
  int reg_parts[6];
  int shm_parts[6];
  int shm_blocks_per_thread[6];
  std::int64_t elems_per_kernel[6];
  std::int64_t elems_per_work_group[6];
  double output_mb[6];  // binary megabytes
};

const RecordedDeviceTable* recorded_table_for(const std::string& profile_name);

/// Recorded per-element flop totals (scaled by 1e6) for the reference CPU and
/// the four kernel organizations on the NVIDIA reference device, p = 2..7.
struct RecordedFlopTable {
  double cpu_mflops[6];
  double reg_jac_mflops[6];
  double reg_nojac_mflops[6];
  double shm_jac_mflops[6];
  double shm_nojac_mflops[6];
};

const RecordedFlopTable& recorded_flop_table();

/// Profiles of the two reference GPUs; the shipped JSON files mirror these.
DeviceProfile reference_gtx580();
DeviceProfile reference_hd5870();

}  // namespace prismint
