#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace prismint {

/// Queryable device properties the execution planner works against.
struct DeviceSpec {
  std::string name;
  std::uint64_t global_mem_bytes = 0;
  std::uint64_t max_alloc_bytes = 0;
  std::uint64_t shared_mem_bytes = 0;
  std::uint64_t constant_mem_bytes = 0;
  int max_work_group = 0;
  int compute_units = 0;
  int simd_width = 64;
  std::uint64_t max_total_threads = 0;
};

/// Per-profile planner knobs: work-group size overrides and the scheduling
/// occupancy (work-groups per compute unit), both optionally per order.
struct PlannerDefaults {
  std::map<int, int> wg_override;       // key -1 acts as "default"
  std::map<int, int> occupancy_groups;  // key -1 acts as "default"
  int shared_groups_per_cu = 1;

  std::optional<int> wg_override_for(int p) const;
  int occupancy_for(int p) const;
};

struct DeviceProfile {
  DeviceSpec spec;
  PlannerDefaults defaults;
};

DeviceProfile load_device_profile(const std::string& path);
DeviceProfile parse_device_profile(const std::string& json_text);
std::string device_profile_to_json(const DeviceProfile& profile);

enum class BlockStorage { registers, shared_memory };
enum class JacobianSource { device_computed, precomputed };

struct KernelVariant {
  BlockStorage storage = BlockStorage::registers;
  JacobianSource jacobian = JacobianSource::device_computed;

  bool operator==(const KernelVariant&) const = default;
};

inline constexpr KernelVariant kRegJac{BlockStorage::registers, JacobianSource::device_computed};
inline constexpr KernelVariant kRegNojac{BlockStorage::registers, JacobianSource::precomputed};
inline constexpr KernelVariant kShmJac{BlockStorage::shared_memory, JacobianSource::device_computed};
inline constexpr KernelVariant kShmNojac{BlockStorage::shared_memory, JacobianSource::precomputed};

/// CLI spelling: "reg-jac", "reg-nojac", "shm-jac", "shm-nojac".
std::string variant_name(KernelVariant variant);
KernelVariant parse_variant(const std::string& name);

/// Bytes reserved per work-group in shared memory besides the stiffness
/// scratch: geometry staging (6 vertices), one material pair, one Jacobian
/// record.
inline constexpr std::uint64_t kSharedStagingBytes = 72 + 8 + 40;

/// All host-side execution parameters for one kernel configuration.
struct ExecutionPlan {
  KernelVariant variant;
  int order_p = 0;
  int work_group_size = 0;
  int n_blocks = 0;  // N_sh^2
  int blocks_per_thread = 1;
  int n_parts = 0;
  std::int64_t elems_per_kernel = 0;
  std::int64_t elems_per_work_group = 0;
  int n_work_groups = 0;
  std::uint64_t shared_budget_bytes = 0;  // per work-group, as planned
  std::uint64_t output_bytes = 0;
  std::uint64_t input_bytes_jac = 0;
  std::uint64_t input_bytes_nojac = 0;
};

/// Threads per work-group: the override when given (validated), otherwise the
/// largest multiple of simd_width not exceeding max_work_group or the number
/// of blocks in the stiffness matrix (and no smaller than simd_width).
int work_group_size(const DeviceSpec& dev, int p, std::optional<int> override_wg = {});

/// Blocks each thread accumulates per part. 1 for register variants; for
/// shared-memory variants the scratch fills the per-group shared budget
/// (shared_mem_bytes / groups_per_cu minus the shape workspace and staging
/// reserve), capped at ceil(n_blocks / wg) since further slots are padding.
/// Throws SharedMemoryError when not even one block per thread fits.
int blocks_per_thread(const DeviceSpec& dev, int wg, KernelVariant variant, int p,
                      int groups_per_cu = 1);

/// ceil(n_blocks / (wg * bpt)).
int n_parts(std::int64_t n_blocks, int wg, int bpt);

/// Full planning pass. The number of elements per kernel is maximized within
/// the output-array allocation cap (min of max_alloc_bytes and output_budget
/// when given), spread over compute_units * occupancy_groups work-groups,
/// then clipped to n_elements_available. When the cap cannot feed one element
/// per work-group, the group count is reduced (whole multiples of
/// compute_units while possible).
ExecutionPlan plan_execution(const DeviceSpec& dev, int p, KernelVariant variant,
                             std::int64_t n_elements_available, int occupancy_groups,
                             std::optional<int> wg_override = {},
                             std::optional<std::uint64_t> output_budget = {},
                             int shared_groups_per_cu = 1);

/// Convenience overload pulling knobs from the profile defaults.
ExecutionPlan plan_execution(const DeviceProfile& profile, int p, KernelVariant variant,
                             std::int64_t n_elements_available);

/// One itemized input/output byte account for a plan.
struct MemoryItemization {
  std::uint64_t shape_table_bytes = 0;
  std::uint64_t quadrature_bytes = 0;       // device-computed-Jacobian family
  std::uint64_t weight_bytes = 0;           // precomputed family (parameter payload)
  std::uint64_t geometry_bytes = 0;         // device-computed-Jacobian family
  std::uint64_t jacobian_terms_bytes = 0;   // precomputed family
  std::uint64_t material_bytes = 0;

  std::uint64_t jac_total() const {
    return shape_table_bytes + quadrature_bytes + geometry_bytes + material_bytes;
  }
  std::uint64_t nojac_total() const {
    return shape_table_bytes + weight_bytes + jacobian_terms_bytes + material_bytes;
  }
};

struct MemoryAccounting {
  MemoryItemization items;
  std::uint64_t input_jac_bytes = 0;
  std::uint64_t input_nojac_bytes = 0;
  std::uint64_t output_bytes = 0;
};

MemoryAccounting memory_accounting(const ExecutionPlan& plan, int p);

std::string plan_to_json(const ExecutionPlan& plan);
std::string plan_to_table(const ExecutionPlan& plan);

}  // namespace prismint
