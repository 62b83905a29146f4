#include <doctest.h>

#include <cmath>

#include "prismint/errors.hpp"
#include "prismint/planner.hpp"
#include "prismint/reference_element.hpp"
#include "prismint/verify.hpp"

using namespace prismint;

namespace {

constexpr double kMb = 1024.0 * 1024.0;

}  // namespace

TEST_SUITE_BEGIN("planner");

TEST_CASE("work-group size rule and overrides") {
  const DeviceProfile nvidia = reference_gtx580();
  const DeviceProfile amd = reference_hd5870();

  CHECK(work_group_size(nvidia.spec, 5, nvidia.defaults.wg_override_for(5)) == 512);
  CHECK(work_group_size(nvidia.spec, 2, nvidia.defaults.wg_override_for(2)) == 192);
  for (int p = 2; p <= 7; ++p) {
    CHECK(work_group_size(amd.spec, p, amd.defaults.wg_override_for(p)) == 256);
  }
  // No override: the largest multiple of 64 below both caps; N_sh^2 = 324 at
  // p=2 gives 320 on a 1024-thread device.
  CHECK(work_group_size(nvidia.spec, 2, std::nullopt) == 320);
  CHECK(work_group_size(nvidia.spec, 1, std::nullopt) == 64);  // floor is the simd width

  CHECK_THROWS_AS(work_group_size(nvidia.spec, 3, 100), ConfigError);   // not a simd multiple
  CHECK_THROWS_AS(work_group_size(nvidia.spec, 3, 2048), ConfigError);  // above the device cap
  CHECK_THROWS_AS(work_group_size(nvidia.spec, 3, -64), ConfigError);
}

TEST_CASE("blocks per thread from the shared-memory budget") {
  const DeviceSpec nvidia = reference_gtx580().spec;
  const DeviceSpec amd = reference_hd5870().spec;

  for (int p = 3; p <= 7; ++p) {
    CHECK(blocks_per_thread(nvidia, 512, kShmJac, p) == 2);
    CHECK(blocks_per_thread(amd, 256, kShmJac, p) == 3);
  }
  // p=2 is capped by ceil(n_blocks / wg): more slots would be pure padding.
  CHECK(blocks_per_thread(nvidia, 192, kShmJac, 2) == 2);
  CHECK(blocks_per_thread(amd, 256, kShmJac, 2) == 2);
  // Register variants always accumulate one block per thread.
  CHECK(blocks_per_thread(nvidia, 512, kRegJac, 6) == 1);

  DeviceSpec tiny = nvidia;
  tiny.shared_mem_bytes = 4 * 1024;
  CHECK_THROWS_AS(blocks_per_thread(tiny, 512, kShmJac, 7), SharedMemoryError);
}

TEST_CASE("part counts match the recorded characteristics") {
  // ceil(n_blocks / (wg * bpt)) spot values.
  CHECK(n_parts(15876, 512, 1) == 32);
  CHECK(n_parts(82944, 256, 1) == 324);
  CHECK(n_parts(38416, 256, 3) == 51);
  CHECK_THROWS_AS(n_parts(0, 512, 1), DomainError);

  const DeviceProfile nvidia = reference_gtx580();
  const DeviceProfile amd = reference_hd5870();
  const int nv_reg[6] = {2, 4, 11, 32, 76, 162};
  const int nv_shm[6] = {1, 2, 6, 16, 38, 81};
  const int amd_reg[6] = {2, 7, 22, 63, 151, 324};
  const int amd_shm[6] = {1, 3, 8, 21, 51, 108};
  for (int p = 2; p <= 7; ++p) {
    const ExecutionPlan nr = plan_execution(nvidia, p, kRegJac, 1 << 20);
    const ExecutionPlan ns = plan_execution(nvidia, p, kShmJac, 1 << 20);
    const ExecutionPlan ar = plan_execution(amd, p, kRegNojac, 1 << 20);
    const ExecutionPlan as = plan_execution(amd, p, kShmNojac, 1 << 20);
    CHECK(nr.n_parts == nv_reg[p - 2]);
    CHECK(ns.n_parts == nv_shm[p - 2]);
    CHECK(ar.n_parts == amd_reg[p - 2]);
    CHECK(as.n_parts == amd_shm[p - 2]);
  }
}

TEST_CASE("element capacity, work-group counts and output sizes") {
  const DeviceProfile nvidia = reference_gtx580();
  const DeviceProfile amd = reference_hd5870();

  // Derivable without availability clipping: NVIDIA p=4..7.
  {
    const std::int64_t epk[4] = {1904, 672, 224, 112};
    const std::int64_t epwg[4] = {17, 6, 2, 1};
    for (int p = 4; p <= 7; ++p) {
      const ExecutionPlan plan = plan_execution(nvidia, p, kRegJac, 1 << 20);
      CHECK(plan.n_work_groups == 112);
      CHECK(plan.elems_per_kernel == epk[p - 4]);
      CHECK(plan.elems_per_work_group == epwg[p - 4]);
    }
    const ExecutionPlan p7 = plan_execution(nvidia, 7, kRegJac, 1 << 20);
    CHECK(p7.output_bytes == 334430208);
    CHECK(static_cast<double>(p7.output_bytes) / kMb == doctest::Approx(318.94).epsilon(5e-3));
  }
  // The whole AMD column is derivable; the group count self-reduces at p=6,7
  // where the allocation cap cannot feed 160 groups.
  {
    const std::int64_t epk[6] = {11360, 2240, 640, 160, 80, 40};
    const std::int64_t epwg[6] = {71, 14, 4, 1, 1, 1};
    const int groups[6] = {160, 160, 160, 160, 80, 40};
    const double mb[6] = {126.36, 123.05, 123.60, 87.21, 105.51, 113.91};
    for (int p = 2; p <= 7; ++p) {
      const ExecutionPlan plan = plan_execution(amd, p, kRegJac, 1 << 20);
      CHECK(plan.n_work_groups == groups[p - 2]);
      CHECK(plan.elems_per_kernel == epk[p - 2]);
      CHECK(plan.elems_per_work_group == epwg[p - 2]);
      CHECK(static_cast<double>(plan.output_bytes) / kMb ==
            doctest::Approx(mb[p - 2]).epsilon(5e-3));
    }
  }
  // NVIDIA p=2 at the recorded run size: availability clipping keeps the
  // multiple-of-group-count shape.
  {
    const ExecutionPlan plan = plan_execution(nvidia, 2, kRegJac, 29056);
    CHECK(plan.n_work_groups == 128);
    CHECK(plan.elems_per_work_group == 227);
    CHECK(plan.elems_per_kernel == 29056);
    CHECK(static_cast<double>(plan.output_bytes) / kMb == doctest::Approx(323.21).epsilon(5e-3));
  }
  // Single-element clipping degenerates to one work-group.
  {
    const ExecutionPlan plan = plan_execution(nvidia, 5, kRegJac, 1);
    CHECK(plan.n_work_groups == 1);
    CHECK(plan.elems_per_kernel == 1);
    CHECK(plan.elems_per_work_group == 1);
  }
  // A stiffness matrix larger than the allocation cap is a capacity error.
  {
    DeviceSpec cramped = nvidia.spec;
    cramped.max_alloc_bytes = 1 << 20;
    CHECK_THROWS_AS(plan_execution(cramped, 7, kRegJac, 100, 7, 512), CapacityError);
  }
}

TEST_CASE("memory accounting itemization") {
  const DeviceProfile nvidia = reference_gtx580();
  const ExecutionPlan plan = plan_execution(nvidia, 7, kRegNojac, 112);
  const MemoryAccounting acc = memory_accounting(plan, 7);
  CHECK(acc.items.jacobian_terms_bytes == 1505280);  // 112 * 336 * 10 * 4
  CHECK(acc.items.shape_table_bytes == 4u * 288 * 336 * 4);
  CHECK(acc.items.geometry_bytes == 112u * 72);
  CHECK(acc.items.material_bytes == 112u * 8);
  CHECK(acc.output_bytes == plan.output_bytes);
  CHECK(acc.input_jac_bytes == plan.input_bytes_jac);
  CHECK(acc.input_nojac_bytes == plan.input_bytes_nojac);

  ExecutionPlan empty = plan;
  empty.elems_per_kernel = 0;
  const MemoryAccounting zero = memory_accounting(empty, 7);
  CHECK(zero.items.jacobian_terms_bytes == 0);
  CHECK(zero.items.geometry_bytes == 0);
  CHECK(zero.items.material_bytes == 0);
  CHECK(zero.output_bytes == 0);
  CHECK(zero.items.shape_table_bytes > 0);  // per-order payload survives
}

TEST_CASE("coverage and monotonicity properties") {
  const DeviceProfile nvidia = reference_gtx580();
  const DeviceProfile amd = reference_hd5870();
  for (const DeviceProfile& profile : {nvidia, amd}) {
    for (int p = 2; p <= 7; ++p) {
      for (const KernelVariant v : {kRegJac, kShmJac}) {
        const ExecutionPlan plan = plan_execution(profile, p, v, 1 << 20);
        const std::int64_t span = static_cast<std::int64_t>(plan.work_group_size) *
                                  plan.blocks_per_thread;
        CHECK(static_cast<std::int64_t>(plan.n_parts) * span >= plan.n_blocks);
        // No fully idle part.
        CHECK(static_cast<std::int64_t>(plan.n_parts) * span - plan.n_blocks < span);
        CHECK(plan.elems_per_kernel == plan.elems_per_work_group * plan.n_work_groups);
        CHECK(plan.output_bytes ==
              static_cast<std::uint64_t>(plan.elems_per_kernel) *
                  (3ull * shape_count(p)) * (3ull * shape_count(p)) * 4ull);
      }
    }
  }
  // Larger work-groups never need more parts; more blocks never fit in fewer.
  for (int p = 2; p <= 7; ++p) {
    const std::int64_t blocks = static_cast<std::int64_t>(shape_count(p)) * shape_count(p);
    int prev = n_parts(blocks, 64, 1);
    for (int wg = 128; wg <= 1024; wg += 64) {
      const int cur = n_parts(blocks, wg, 1);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
  for (int p = 2; p < 7; ++p) {
    CHECK(shape_count(p + 1) * shape_count(p + 1) > shape_count(p) * shape_count(p));
  }
}

TEST_CASE("profile JSON round trip and validation") {
  const DeviceProfile nvidia = reference_gtx580();
  const std::string text = device_profile_to_json(nvidia);
  const DeviceProfile back = parse_device_profile(text);
  CHECK(back.spec.name == nvidia.spec.name);
  CHECK(back.spec.max_alloc_bytes == nvidia.spec.max_alloc_bytes);
  CHECK(back.spec.compute_units == nvidia.spec.compute_units);
  CHECK(back.defaults.wg_override_for(2) == 192);
  CHECK(back.defaults.wg_override_for(5) == 512);
  CHECK(back.defaults.occupancy_for(2) == 8);
  CHECK(back.defaults.occupancy_for(6) == 7);

  CHECK_THROWS_AS(parse_device_profile("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_device_profile("{}"), ConfigError);
  CHECK_THROWS_AS(load_device_profile("/nonexistent/profile.json"), IoError);

  // max_alloc above global memory is rejected.
  DeviceProfile mutated = nvidia;
  mutated.spec.max_alloc_bytes = mutated.spec.global_mem_bytes * 2;
  CHECK_THROWS_AS(parse_device_profile(device_profile_to_json(mutated)), ConfigError);
}

TEST_CASE("variant names round trip") {
  for (const KernelVariant v : {kRegJac, kRegNojac, kShmJac, kShmNojac}) {
    CHECK(parse_variant(variant_name(v)) == v);
  }
  CHECK_THROWS_AS(parse_variant("fast"), ConfigError);
}

TEST_SUITE_END();
