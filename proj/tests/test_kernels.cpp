#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "prismint/errors.hpp"
#include "prismint/kernels.hpp"
#include "prismint/verify.hpp"

using namespace prismint;

namespace {

struct Setup {
  int p;
  QuadratureRule rule;
  ShapeTable shapes;
  std::vector<PrismGeometry> mesh;
  MaterialData material{90.0, 0.27};

  explicit Setup(int order, int nx = 2, int ny = 2, int nz = 2, double distortion = 0.12)
      : p(order), rule(prism_quadrature(order)), shapes(tabulate_shapes(order, rule)),
        mesh(generate_box_mesh(nx, ny, nz, distortion, 31)) {}
};

KernelOutput run_variant(const Setup& s, const DeviceProfile& profile, KernelVariant v,
                         Precision precision, int workers = 0, bool coverage = false) {
  const ExecutionPlan plan =
      plan_execution(profile, s.p, v, static_cast<std::int64_t>(s.mesh.size()));
  const MaterialData mats[1] = {s.material};
  KernelInputs inputs = build_kernel_inputs(plan, s.shapes, s.rule, s.mesh,
                                            std::span<const MaterialData>(mats, 1), precision);
  inputs.record_coverage = coverage;
  return run_kernel(v, inputs, workers);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("all variants agree with the wide-precision reference") {
  const DeviceProfile profile = reference_gtx580();
  for (int p : {2, 3}) {
    const Setup s(p);
    const QuadCoefficients coeffs = expand_coefficients(elasticity_tensor(s.material), s.rule);
    std::vector<ElementStiffness> reference;
    for (const PrismGeometry& g : s.mesh) {
      reference.push_back(integrate_generic(g, coeffs, s.shapes, s.rule));
    }
    for (const KernelVariant v : {kRegJac, kRegNojac, kShmJac, kShmNojac}) {
      const KernelOutput out = run_variant(s, profile, v, Precision::f32);
      double worst = 0.0;
      for (std::size_t e = 0; e < s.mesh.size(); ++e) {
        worst = std::max(worst, testutil::rel_frobenius_diff(
                                    reference[e].data,
                                    out.element(static_cast<std::int64_t>(e), p).data));
      }
      CHECK(worst <= 5e-5);
    }
  }
}

TEST_CASE("wide-precision kernels track the reference closely") {
  const DeviceProfile profile = reference_hd5870();
  const Setup s(2);
  const QuadCoefficients coeffs = expand_coefficients(elasticity_tensor(s.material), s.rule);
  const KernelOutput out = run_variant(s, profile, kRegNojac, Precision::f64);
  double worst = 0.0;
  for (std::size_t e = 0; e < s.mesh.size(); ++e) {
    const ElementStiffness ref = integrate_generic(s.mesh[e], coeffs, s.shapes, s.rule);
    worst = std::max(worst, testutil::rel_frobenius_diff(
                                ref.data, out.element(static_cast<std::int64_t>(e), 2).data));
  }
  // Inputs are rounded to float32 on the way in, so agreement is capped by
  // that rounding, not by the arithmetic.
  CHECK(worst <= 1e-5);
}

TEST_CASE("variant agreement: same-family bitwise, cross-family 1e-6") {
  const DeviceProfile profile = reference_gtx580();
  const Setup s(3);
  const KernelOutput reg_jac = run_variant(s, profile, kRegJac, Precision::f32);
  const KernelOutput shm_jac = run_variant(s, profile, kShmJac, Precision::f32);
  const KernelOutput reg_nojac = run_variant(s, profile, kRegNojac, Precision::f32);
  const KernelOutput shm_nojac = run_variant(s, profile, kShmNojac, Precision::f32);

  // Identical arithmetic per block: the storage strategy cannot change bits.
  CHECK(reg_jac.data_f32 == shm_jac.data_f32);
  CHECK(reg_nojac.data_f32 == shm_nojac.data_f32);

  for (std::size_t e = 0; e < s.mesh.size(); ++e) {
    const auto a = reg_jac.element(static_cast<std::int64_t>(e), s.p);
    const auto b = reg_nojac.element(static_cast<std::int64_t>(e), s.p);
    CHECK(testutil::rel_frobenius_diff(a.data, b.data) <= 1e-6);
  }
}

TEST_CASE("bitwise determinism across worker-pool widths") {
  const DeviceProfile profile = reference_gtx580();
  const Setup s(2);
  for (const KernelVariant v : {kRegJac, kShmNojac}) {
    const KernelOutput w1 = run_variant(s, profile, v, Precision::f32, 1);
    const KernelOutput w4 = run_variant(s, profile, v, Precision::f32, 4);
    const KernelOutput wmax = run_variant(s, profile, v, Precision::f32, 0);
    CHECK(w1.data_f32 == w4.data_f32);
    CHECK(w1.data_f32 == wmax.data_f32);
    CHECK(w1.flop_counter == w4.flop_counter);
    CHECK(w1.flop_counter == wmax.flop_counter);
  }
}

TEST_CASE("write-once coverage of every block, padding never written") {
  const DeviceProfile profile = reference_hd5870();
  for (int p : {1, 2}) {
    const Setup s(p);
    for (const KernelVariant v : {kRegJac, kShmJac}) {
      const KernelOutput out = run_variant(s, profile, v, Precision::f32, 0, true);
      const std::size_t blocks = static_cast<std::size_t>(shape_count(p)) * shape_count(p);
      REQUIRE(out.coverage.size() == s.mesh.size() * blocks);
      for (const std::uint16_t c : out.coverage) {
        CHECK(c == 1);
      }
    }
  }
}

TEST_CASE("instrumented flop counter equals the closed-form model") {
  for (const DeviceProfile& profile : {reference_gtx580(), reference_hd5870()}) {
    for (int p : {1, 2, 3}) {
      const Setup s(p, 2, 1, 1, 0.05);
      for (const KernelVariant v : {kRegJac, kRegNojac, kShmJac, kShmNojac}) {
        const ExecutionPlan plan =
            plan_execution(profile, s.p, v, static_cast<std::int64_t>(s.mesh.size()));
        const MaterialData mats[1] = {s.material};
        const KernelInputs inputs = build_kernel_inputs(
            plan, s.shapes, s.rule, s.mesh, std::span<const MaterialData>(mats, 1), Precision::f32);
        const KernelOutput out = run_kernel(v, inputs, 0);
        CHECK(out.flop_counter == flop_model(v, plan, p) * s.mesh.size());
      }
    }
  }
}

TEST_CASE("block-update share of the model matches the slot arithmetic") {
  const DeviceProfile nvidia = reference_gtx580();
  const ExecutionPlan reg7 = plan_execution(nvidia, 7, kRegJac, 112);
  CHECK(flop_model_block_updates(reg7, 7) == 1755758592ull);  // 162*512*336*63
  const ExecutionPlan shm7 = plan_execution(nvidia, 7, kShmJac, 112);
  CHECK(flop_model_block_updates(shm7, 7) == 1755758592ull);  // 81*512*2*336*63
}

TEST_CASE("batch integration preserves mesh order and determinism") {
  const DeviceProfile profile = reference_gtx580();
  const Setup s(2, 2, 2, 2, 0.1);

  const std::vector<ElementStiffness> batch =
      run_batch(kRegNojac, profile, s.p, s.mesh, s.material, Precision::f32);
  REQUIRE(batch.size() == s.mesh.size());

  // Element-by-element equality with a single-invocation run in mesh order.
  const KernelOutput direct = run_variant(s, profile, kRegNojac, Precision::f32);
  for (std::size_t e = 0; e < s.mesh.size(); ++e) {
    CHECK(batch[e].data == direct.element(static_cast<std::int64_t>(e), s.p).data);
  }

  // Identical geometry and material give bitwise-identical matrices.
  std::vector<PrismGeometry> twins(2, s.mesh[3]);
  const std::vector<ElementStiffness> twin_out =
      run_batch(kShmJac, profile, s.p, twins, s.material, Precision::f32);
  CHECK(twin_out[0].data == twin_out[1].data);

  // Clipped final invocation: force tiny kernels through a cramped device.
  DeviceProfile cramped = profile;
  cramped.spec.max_alloc_bytes = 3ull * 54 * 54 * 4;  // three p=1 matrices
  cramped.defaults.occupancy_groups = {{-1, 1}};
  const Setup s1(1, 3, 1, 1, 0.0);  // 6 elements
  const ExecutionPlan cplan = plan_execution(cramped, 1, kRegJac, 6);
  CHECK(cplan.elems_per_kernel < 6);
  const std::vector<ElementStiffness> clipped =
      run_batch(kRegJac, cramped, 1, s1.mesh, s1.material, Precision::f32);
  REQUIRE(clipped.size() == 6);
  const std::vector<ElementStiffness> whole =
      run_batch(kRegJac, profile, 1, s1.mesh, s1.material, Precision::f32);
  for (std::size_t e = 0; e < clipped.size(); ++e) {
    CHECK(clipped[e].data == whole[e].data);
  }
}

TEST_CASE("contract violations and error propagation") {
  const DeviceProfile profile = reference_gtx580();
  const Setup s(1, 1, 1, 1, 0.0);
  const ExecutionPlan plan = plan_execution(profile, 1, kRegJac, 2);
  const MaterialData mats[1] = {s.material};
  KernelInputs inputs = build_kernel_inputs(plan, s.shapes, s.rule, s.mesh,
                                            std::span<const MaterialData>(mats, 1), Precision::f32);

  CHECK_THROWS_AS(run_kernel(kShmJac, inputs, 0), ContractViolation);  // plan/variant mismatch

  KernelInputs broken = inputs;
  broken.shape_table.pop_back();
  CHECK_THROWS_AS(run_kernel(kRegJac, broken, 0), ContractViolation);

  KernelInputs bad_geom = inputs;
  bad_geom.geometry.resize(bad_geom.geometry.size() - 3);
  CHECK_THROWS_AS(run_kernel(kRegJac, bad_geom, 0), ContractViolation);

  // Shared scratch exceeding the planned budget is a hard error.
  KernelInputs oversubscribed = inputs;
  oversubscribed.plan.variant = kShmJac;
  oversubscribed.plan.blocks_per_thread = 1 << 16;
  CHECK_THROWS_AS(run_kernel(kShmJac, oversubscribed, 0), SharedMemoryError);

  // Inverted element inside the device-Jacobian path names the element,
  // including the batch offset.
  auto mesh = generate_box_mesh(2, 2, 1, 0.0);
  std::swap(mesh[6].vertices[0], mesh[6].vertices[1]);
  const ExecutionPlan plan2 =
      plan_execution(profile, 1, kRegJac, static_cast<std::int64_t>(mesh.size()));
  const KernelInputs in2 = build_kernel_inputs(plan2, s.shapes, s.rule, mesh,
                                               std::span<const MaterialData>(mats, 1),
                                               Precision::f32, 100);
  try {
    (void)run_kernel(kRegJac, in2, 0);
    FAIL("expected InvertedElementError");
  } catch (const InvertedElementError& e) {
    CHECK(e.element() == 106);
  }
}

TEST_CASE("barrier trace records the phase structure") {
  const DeviceProfile profile = reference_gtx580();
  const Setup s(1, 1, 1, 1, 0.0);
  const ExecutionPlan plan = plan_execution(profile, 1, kShmNojac, 2);
  const MaterialData mats[1] = {s.material};
  KernelInputs inputs = build_kernel_inputs(plan, s.shapes, s.rule, s.mesh,
                                            std::span<const MaterialData>(mats, 1), Precision::f32);
  inputs.trace_barriers = true;
  const KernelOutput out = run_kernel(kShmNojac, inputs, 1);
  REQUIRE(out.barrier_trace.size() == static_cast<std::size_t>(plan.n_work_groups));
  bool some = false;
  for (const auto& trace : out.barrier_trace) {
    if (trace.empty()) continue;
    some = true;
    CHECK(trace.front() == "read_element");
    CHECK(trace.back() == "write_part");
    // One init and one write per part, per element.
    std::size_t inits = 0, writes = 0, updates = 0;
    for (const std::string& label : trace) {
      inits += label == "init_part";
      writes += label == "write_part";
      updates += label == "block_update";
    }
    CHECK(inits == writes);
    CHECK(updates == inits * static_cast<std::size_t>(quadrature_point_count(1)));
  }
  CHECK(some);
}

TEST_SUITE_END();
