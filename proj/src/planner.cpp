#include "prismint/planner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prismint/errors.hpp"
#include "prismint/reference_element.hpp"

namespace prismint {

namespace {

int lookup_per_p(const std::map<int, int>& table, int p, int fallback) {
  if (auto it = table.find(p); it != table.end()) return it->second;
  if (auto it = table.find(-1); it != table.end()) return it->second;
  return fallback;
}

std::uint64_t stiffness_bytes_per_element(int p) {
  const std::uint64_t dim = static_cast<std::uint64_t>(kNumEquations) * shape_count(p);
  return dim * dim * 4u;
}

}  // namespace

std::optional<int> PlannerDefaults::wg_override_for(int p) const {
  const int v = lookup_per_p(wg_override, p, 0);
  return v > 0 ? std::optional<int>(v) : std::nullopt;
}

int PlannerDefaults::occupancy_for(int p) const { return lookup_per_p(occupancy_groups, p, 1); }

std::string variant_name(KernelVariant variant) {
  const bool reg = variant.storage == BlockStorage::registers;
  const bool jac = variant.jacobian == JacobianSource::device_computed;
  if (reg) return jac ? "reg-jac" : "reg-nojac";
  return jac ? "shm-jac" : "shm-nojac";
}

KernelVariant parse_variant(const std::string& name) {
  if (name == "reg-jac") return kRegJac;
  if (name == "reg-nojac") return kRegNojac;
  if (name == "shm-jac") return kShmJac;
  if (name == "shm-nojac") return kShmNojac;
  throw ConfigError("unknown kernel variant '" + name +
                    "' (expected reg-jac, reg-nojac, shm-jac or shm-nojac)");
}

namespace {

std::map<int, int> parse_per_p_map(const nlohmann::json& node, const char* what) {
  std::map<int, int> out;
  for (auto it = node.begin(); it != node.end(); ++it) {
    const int value = it.value().get<int>();
    if (it.key() == "default") {
      out[-1] = value;
    } else {
      try {
        out[std::stoi(it.key())] = value;
      } catch (const std::exception&) {
        throw ConfigError(std::string("device profile: bad key '") + it.key() + "' in " + what);
      }
    }
  }
  return out;
}

}  // namespace

DeviceProfile parse_device_profile(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("device profile: invalid JSON: ") + e.what());
  }
  DeviceProfile profile;
  try {
    profile.spec.name = j.at("name").get<std::string>();
    profile.spec.global_mem_bytes = j.at("global_mem_bytes").get<std::uint64_t>();
    profile.spec.max_alloc_bytes = j.at("max_alloc_bytes").get<std::uint64_t>();
    profile.spec.shared_mem_bytes = j.at("shared_mem_bytes").get<std::uint64_t>();
    profile.spec.constant_mem_bytes = j.at("constant_mem_bytes").get<std::uint64_t>();
    profile.spec.max_work_group = j.at("max_work_group").get<int>();
    profile.spec.compute_units = j.at("compute_units").get<int>();
    profile.spec.simd_width = j.value("simd_width", 64);
    profile.spec.max_total_threads = j.at("max_total_threads").get<std::uint64_t>();
    if (j.contains("planner")) {
      const auto& pl = j.at("planner");
      if (pl.contains("work_group_override")) {
        profile.defaults.wg_override = parse_per_p_map(pl.at("work_group_override"), "work_group_override");
      }
      if (pl.contains("occupancy_groups")) {
        profile.defaults.occupancy_groups = parse_per_p_map(pl.at("occupancy_groups"), "occupancy_groups");
      }
      profile.defaults.shared_groups_per_cu = pl.value("shared_groups_per_cu", 1);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("device profile: ") + e.what());
  }
  if (profile.spec.max_alloc_bytes > profile.spec.global_mem_bytes) {
    throw ConfigError("device profile: max_alloc_bytes exceeds global_mem_bytes");
  }
  if (profile.spec.simd_width <= 0 || profile.spec.max_work_group % profile.spec.simd_width != 0) {
    throw ConfigError("device profile: simd_width must divide max_work_group");
  }
  if (profile.spec.compute_units < 1) {
    throw ConfigError("device profile: compute_units must be >= 1");
  }
  return profile;
}

DeviceProfile load_device_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open device profile '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_device_profile(text.str());
}

std::string device_profile_to_json(const DeviceProfile& profile) {
  nlohmann::json j;
  j["name"] = profile.spec.name;
  j["global_mem_bytes"] = profile.spec.global_mem_bytes;
  j["max_alloc_bytes"] = profile.spec.max_alloc_bytes;
  j["shared_mem_bytes"] = profile.spec.shared_mem_bytes;
  j["constant_mem_bytes"] = profile.spec.constant_mem_bytes;
  j["max_work_group"] = profile.spec.max_work_group;
  j["compute_units"] = profile.spec.compute_units;
  j["simd_width"] = profile.spec.simd_width;
  j["max_total_threads"] = profile.spec.max_total_threads;
  nlohmann::json pl;
  auto emit = [](const std::map<int, int>& m) {
    nlohmann::json node;
    for (const auto& [k, v] : m) {
      node[k < 0 ? std::string("default") : std::to_string(k)] = v;
    }
    return node;
  };
  if (!profile.defaults.wg_override.empty()) pl["work_group_override"] = emit(profile.defaults.wg_override);
  if (!profile.defaults.occupancy_groups.empty()) pl["occupancy_groups"] = emit(profile.defaults.occupancy_groups);
  pl["shared_groups_per_cu"] = profile.defaults.shared_groups_per_cu;
  j["planner"] = pl;
  return j.dump(2);
}

int work_group_size(const DeviceSpec& dev, int p, std::optional<int> override_wg) {
  const std::int64_t n_blocks = static_cast<std::int64_t>(shape_count(p)) * shape_count(p);
  if (override_wg) {
    const int wg = *override_wg;
    if (wg <= 0 || wg % dev.simd_width != 0 || wg > dev.max_work_group) {
      throw ConfigError("work-group override " + std::to_string(wg) +
                        " is not a positive multiple of " + std::to_string(dev.simd_width) +
                        " within the device limit " + std::to_string(dev.max_work_group));
    }
    return wg;
  }
  std::int64_t cap = std::min<std::int64_t>(dev.max_work_group, n_blocks);
  std::int64_t wg = (cap / dev.simd_width) * dev.simd_width;
  if (wg < dev.simd_width) wg = dev.simd_width;
  return static_cast<int>(wg);
}

int blocks_per_thread(const DeviceSpec& dev, int wg, KernelVariant variant, int p,
                      int groups_per_cu) {
  if (variant.storage == BlockStorage::registers) {
    return 1;
  }
  if (groups_per_cu < 1) {
    throw ConfigError("blocks_per_thread: groups_per_cu must be >= 1");
  }
  const std::uint64_t per_group = dev.shared_mem_bytes / static_cast<std::uint64_t>(groups_per_cu);
  const std::uint64_t workspace = 4ull * shape_count(p) * 4ull;  // shape values + derivatives
  const std::uint64_t reserve = workspace + kSharedStagingBytes;
  const std::uint64_t block_row = static_cast<std::uint64_t>(wg) * kNumEquations * kNumEquations * 4ull;
  if (per_group <= reserve || (per_group - reserve) < block_row) {
    throw SharedMemoryError("shared memory exhausted: " + std::to_string(per_group) +
                            " B per group cannot hold one block per thread (needs " +
                            std::to_string(block_row + reserve) + " B)");
  }
  std::int64_t bpt = static_cast<std::int64_t>((per_group - reserve) / block_row);
  const std::int64_t n_blocks = static_cast<std::int64_t>(shape_count(p)) * shape_count(p);
  const std::int64_t cap = (n_blocks + wg - 1) / wg;  // more would be pure padding
  return static_cast<int>(std::min(bpt, cap));
}

int n_parts(std::int64_t n_blocks, int wg, int bpt) {
  if (n_blocks <= 0 || wg <= 0 || bpt <= 0) {
    throw DomainError("n_parts: all arguments must be positive");
  }
  const std::int64_t span = static_cast<std::int64_t>(wg) * bpt;
  return static_cast<int>((n_blocks + span - 1) / span);
}

ExecutionPlan plan_execution(const DeviceSpec& dev, int p, KernelVariant variant,
                             std::int64_t n_elements_available, int occupancy_groups,
                             std::optional<int> wg_override,
                             std::optional<std::uint64_t> output_budget,
                             int shared_groups_per_cu) {
  if (n_elements_available < 1) {
    throw ConfigError("plan_execution: need at least one element");
  }
  if (occupancy_groups < 1) {
    throw ConfigError("plan_execution: occupancy_groups must be >= 1");
  }
  ExecutionPlan plan;
  plan.variant = variant;
  plan.order_p = p;
  plan.work_group_size = work_group_size(dev, p, wg_override);
  const std::int64_t n_sh = shape_count(p);
  plan.n_blocks = static_cast<int>(n_sh * n_sh);
  plan.blocks_per_thread = blocks_per_thread(dev, plan.work_group_size, variant, p, shared_groups_per_cu);
  plan.n_parts = n_parts(plan.n_blocks, plan.work_group_size, plan.blocks_per_thread);
  plan.shared_budget_bytes = dev.shared_mem_bytes / static_cast<std::uint64_t>(shared_groups_per_cu);

  const std::uint64_t per_elem = stiffness_bytes_per_element(p);
  const std::uint64_t budget = std::min(dev.max_alloc_bytes, output_budget.value_or(dev.max_alloc_bytes));
  if (per_elem > budget) {
    throw CapacityError("a single order-" + std::to_string(p) + " stiffness matrix (" +
                        std::to_string(per_elem) + " B) exceeds the output allocation cap (" +
                        std::to_string(budget) + " B)");
  }
  const std::int64_t element_capacity = static_cast<std::int64_t>(budget / per_elem);

  // Total thread count must stay within the device launch limit.
  int occ = occupancy_groups;
  const std::uint64_t threads_per_wave =
      static_cast<std::uint64_t>(dev.compute_units) * plan.work_group_size;
  if (threads_per_wave > dev.max_total_threads) {
    throw CapacityError("device cannot launch one work-group per compute unit within its thread limit");
  }
  occ = static_cast<int>(std::min<std::uint64_t>(occ, dev.max_total_threads / threads_per_wave));
  occ = std::max(occ, 1);

  std::int64_t n_groups = static_cast<std::int64_t>(dev.compute_units) * occ;
  if (element_capacity < n_groups) {
    // Cannot feed one element per work-group: shrink the group count, keeping
    // whole multiples of the compute-unit count while possible.
    const std::int64_t per_cu = element_capacity / dev.compute_units;
    n_groups = per_cu >= 1 ? per_cu * dev.compute_units : element_capacity;
  }
  std::int64_t elems_per_group = std::max<std::int64_t>(1, element_capacity / n_groups);

  if (elems_per_group * n_groups > n_elements_available) {
    if (n_elements_available >= n_groups) {
      elems_per_group = n_elements_available / n_groups;
    } else {
      n_groups = n_elements_available;
      elems_per_group = 1;
    }
  }

  plan.n_work_groups = static_cast<int>(n_groups);
  plan.elems_per_work_group = elems_per_group;
  plan.elems_per_kernel = elems_per_group * n_groups;
  plan.output_bytes = static_cast<std::uint64_t>(plan.elems_per_kernel) * per_elem;

  const MemoryAccounting acc = memory_accounting(plan, p);
  plan.input_bytes_jac = acc.input_jac_bytes;
  plan.input_bytes_nojac = acc.input_nojac_bytes;
  return plan;
}

ExecutionPlan plan_execution(const DeviceProfile& profile, int p, KernelVariant variant,
                             std::int64_t n_elements_available) {
  return plan_execution(profile.spec, p, variant, n_elements_available,
                        profile.defaults.occupancy_for(p), profile.defaults.wg_override_for(p),
                        std::nullopt, profile.defaults.shared_groups_per_cu);
}

MemoryAccounting memory_accounting(const ExecutionPlan& plan, int p) {
  const std::uint64_t n_sh = static_cast<std::uint64_t>(shape_count(p));
  const std::uint64_t n_q = static_cast<std::uint64_t>(quadrature_point_count(p));
  const std::uint64_t elems = static_cast<std::uint64_t>(plan.elems_per_kernel);

  MemoryAccounting acc;
  acc.items.shape_table_bytes = 4u * n_sh * n_q * 4u;
  acc.items.quadrature_bytes = 4u * n_q * 4u;
  acc.items.weight_bytes = n_q * 4u;
  acc.items.geometry_bytes = elems * 6u * 3u * 4u;
  acc.items.jacobian_terms_bytes = elems * n_q * 10u * 4u;
  acc.items.material_bytes = elems * 2u * 4u;
  acc.input_jac_bytes = acc.items.jac_total();
  acc.input_nojac_bytes = acc.items.nojac_total();
  acc.output_bytes = elems * stiffness_bytes_per_element(p);
  return acc;
}

std::string plan_to_json(const ExecutionPlan& plan) {
  nlohmann::json j;
  j["variant"] = variant_name(plan.variant);
  j["p"] = plan.order_p;
  j["work_group_size"] = plan.work_group_size;
  j["n_blocks"] = plan.n_blocks;
  j["blocks_per_thread"] = plan.blocks_per_thread;
  j["n_parts"] = plan.n_parts;
  j["elems_per_kernel"] = plan.elems_per_kernel;
  j["elems_per_work_group"] = plan.elems_per_work_group;
  j["n_work_groups"] = plan.n_work_groups;
  j["shared_budget_bytes"] = plan.shared_budget_bytes;
  j["output_bytes"] = plan.output_bytes;
  j["input_bytes_jac"] = plan.input_bytes_jac;
  j["input_bytes_nojac"] = plan.input_bytes_nojac;
  return j.dump(2);
}

std::string plan_to_table(const ExecutionPlan& plan) {
  std::ostringstream out;
  const double mb = 1024.0 * 1024.0;
  out << "variant                 " << variant_name(plan.variant) << "\n"
      << "order p                 " << plan.order_p << "\n"
      << "work-group size         " << plan.work_group_size << "\n"
      << "blocks (N_sh^2)         " << plan.n_blocks << "\n"
      << "blocks per thread       " << plan.blocks_per_thread << "\n"
      << "parts of A^e            " << plan.n_parts << "\n"
      << "elements per kernel     " << plan.elems_per_kernel << "\n"
      << "elements per work-group " << plan.elems_per_work_group << "\n"
      << "work-groups             " << plan.n_work_groups << "\n"
      << "output size             " << plan.output_bytes / mb << " MB\n"
      << "input size (jac)        " << plan.input_bytes_jac / mb << " MB\n"
      << "input size (nojac)      " << plan.input_bytes_nojac / mb << " MB\n";
  return out.str();
}

}  // namespace prismint
