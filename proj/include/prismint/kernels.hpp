#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prismint/coefficients.hpp"
#include "prismint/geometry.hpp"
#include "prismint/integrate_ref.hpp"
#include "prismint/planner.hpp"
#include "prismint/reference_element.hpp"

namespace prismint {

enum class Precision { f32, f64 };

Precision parse_precision(const std::string& name);
std::string precision_name(Precision precision);

/// Flat device-side buffers for one kernel invocation. All payloads are
/// 32-bit floats in the documented layouts:
///   shape_table    [i_Q][i_D][i_DOF], i_DOF fastest
///   quadrature     [i_Q][4] as (xi1, xi2, xi3, w)     (device-Jacobian only)
///   weights        [i_Q], part of the execution-parameter payload
///                                                     (precomputed-Jacobian only)
///   geometry       [elem][vertex 0..5][x,y,z]         (device-Jacobian only)
///   jacobian_terms [elem][i_Q][det, inverse row-major] (precomputed only)
///   material       [elem][E, nu]
struct KernelInputs {
  ExecutionPlan plan;
  Precision precision = Precision::f32;
  std::int64_t n_elements = 0;  // elements in this invocation
  std::int64_t element_id_base = 0;
  std::vector<float> shape_table;
  std::vector<float> quadrature;
  std::vector<float> weights;
  std::vector<float> geometry;
  std::vector<float> jacobian_terms;
  std::vector<float> material;
  bool record_coverage = false;
  bool trace_barriers = false;
};

/// Builds the input buffers for `geoms.size()` elements under a plan.
/// Precomputed Jacobian terms are evaluated in double and rounded on store.
KernelInputs build_kernel_inputs(const ExecutionPlan& plan, const ShapeTable& shapes,
                                 const QuadratureRule& rule, std::span<const PrismGeometry> geoms,
                                 std::span<const MaterialData> materials, Precision precision,
                                 std::int64_t element_id_base = 0);

struct KernelOutput {
  Precision precision = Precision::f32;
  std::vector<float> data_f32;   // populated in f32 mode
  std::vector<double> data_f64;  // populated in f64 mode
  std::uint64_t flop_counter = 0;
  std::vector<std::uint16_t> coverage;                  // [elem][block] write counts, if recorded
  std::vector<std::vector<std::string>> barrier_trace;  // per work-group, if recorded

  /// Canonical dense matrix of one element, promoted to double.
  ElementStiffness element(std::int64_t index, int p) const;
};

/// Runs one emulated kernel invocation. Work-groups are independent tasks
/// scheduled on n_workers threads (hardware concurrency when 0); each group
/// executes its threads as an ordered loop between barrier phases, so the
/// output is bitwise independent of the worker count.
KernelOutput run_kernel(KernelVariant variant, const KernelInputs& inputs, int n_workers = 0);

/// Integrates a whole mesh: plans against the profile, partitions the mesh
/// into invocations of elems_per_kernel (last one clipped), and converts the
/// outputs to canonical per-element matrices in mesh order.
std::vector<ElementStiffness> run_batch(KernelVariant variant, const DeviceProfile& profile, int p,
                                        std::span<const PrismGeometry> mesh, const MaterialData& mat,
                                        Precision precision, int n_workers = 0);

/// Closed-form per-element flop count of the emulated kernel; equals the
/// instrumented counter divided by the element count, exactly.
std::uint64_t flop_model(KernelVariant variant, const ExecutionPlan& plan, int p);

/// The block-update share of flop_model (63 flops per thread-slot, point and
/// part), without per-point Jacobian/psi/coefficient overhead.
std::uint64_t flop_model_block_updates(const ExecutionPlan& plan, int p);

}  // namespace prismint
