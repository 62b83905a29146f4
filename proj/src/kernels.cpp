#include "prismint/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "prismint/errors.hpp"
#include "prismint/flop_costs.hpp"

namespace prismint {

Precision parse_precision(const std::string& name) {
  if (name == "f32") return Precision::f32;
  if (name == "f64") return Precision::f64;
  throw ConfigError("unknown precision '" + name + "' (expected f32 or f64)");
}

std::string precision_name(Precision precision) {
  return precision == Precision::f32 ? "f32" : "f64";
}

namespace {

void parallel_for_groups(int n_groups, int n_workers, const std::function<void(int)>& body) {
  if (n_workers <= 0) {
    n_workers = static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers <= 0) n_workers = 1;
  }
  n_workers = std::min(n_workers, n_groups);
  if (n_workers <= 1) {
    for (int g = 0; g < n_groups; ++g) body(g);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int g = next.fetch_add(1);
        if (g >= n_groups) break;
        try {
          body(g);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// One work-group of the emulated device, templated on the arithmetic type so
// the single-precision mode rounds every operation like a 32-bit device.
// Threads are executed as ordered loops between the barrier phases; outputs
// of different groups are disjoint.
template <typename Real>
class GroupRunner {
 public:
  GroupRunner(KernelVariant variant, const KernelInputs& in, int n_sh, int n_q,
              std::vector<float>* out_f32, std::vector<double>* out_f64,
              std::vector<std::uint16_t>* coverage)
      : variant_(variant),
        in_(in),
        plan_(in.plan),
        n_sh_(n_sh),
        n_q_(n_q),
        out_f32_(out_f32),
        out_f64_(out_f64),
        coverage_(coverage) {
    // Compute-unit shared memory model: shape workspace, element staging and
    // (SHM variants) the stiffness scratch must fit the planned budget.
    std::uint64_t shared_needed = 4ull * n_sh_ * 4ull + kSharedStagingBytes;
    if (variant_.storage == BlockStorage::shared_memory) {
      shared_needed += static_cast<std::uint64_t>(plan_.work_group_size) * plan_.blocks_per_thread *
                       kNumEquations * kNumEquations * 4ull;
    }
    if (shared_needed > plan_.shared_budget_bytes) {
      throw SharedMemoryError("kernel shared-memory demand " + std::to_string(shared_needed) +
                              " B exceeds the planned budget " +
                              std::to_string(plan_.shared_budget_bytes) + " B");
    }
    psi_.resize(4u * static_cast<std::size_t>(n_sh_));
    accum_.resize(static_cast<std::size_t>(plan_.work_group_size) * plan_.blocks_per_thread * 9u);
  }

  std::uint64_t flops() const { return flops_; }
  std::vector<std::string> take_trace() { return std::move(trace_); }

  void run(int group_id) {
    const std::int64_t first = group_id * plan_.elems_per_work_group;
    const std::int64_t last =
        std::min<std::int64_t>(first + plan_.elems_per_work_group, in_.n_elements);
    for (std::int64_t elem = first; elem < last; ++elem) {
      run_element(elem);
    }
  }

 private:
  void phase(const char* label) {
    if (in_.trace_barriers) trace_.emplace_back(label);
  }

  void run_element(std::int64_t elem) {
    phase("read_element");
    const float* mat = in_.material.data() + 2 * elem;
    const Real young = Real(mat[0]);
    const Real nu = Real(mat[1]);
    const Real one_plus = Real(1) + nu;
    const Real mu = young / (Real(2) * one_plus);
    const Real lambda = (young * nu) / (one_plus * (Real(1) - Real(2) * nu));
    const Real lambda_two_mu = (lambda + mu) + mu;
    flops_ += flops::kMaterialSetup;

    const bool device_jac = variant_.jacobian == JacobianSource::device_computed;
    const float* geom = device_jac ? in_.geometry.data() + 18 * elem : nullptr;
    const float* jac_records =
        device_jac ? nullptr : in_.jacobian_terms.data() + static_cast<std::size_t>(elem) * n_q_ * 10;

    const int wg = plan_.work_group_size;
    const int bpt = plan_.blocks_per_thread;
    const std::int64_t slots = static_cast<std::int64_t>(wg) * bpt;

    for (int part = 0; part < plan_.n_parts; ++part) {
      phase("init_part");
      std::fill(accum_.begin(), accum_.end(), Real(0));
      std::fill(std::begin(scratch_), std::end(scratch_), Real(0));

      for (int iq = 0; iq < n_q_; ++iq) {
        phase("read_point_data");
        const float* phi = in_.shape_table.data() + static_cast<std::size_t>(iq) * 4 * n_sh_;

        phase("jacobian");
        Real det;
        Real inv[3][3];
        Real weight;
        if (device_jac) {
          const float* q = in_.quadrature.data() + 4 * iq;
          weight = Real(q[3]);
          device_jacobian(geom, Real(q[0]), Real(q[1]), Real(q[2]), elem, det, inv);
        } else {
          const float* rec = jac_records + static_cast<std::size_t>(iq) * 10;
          weight = Real(in_.weights[iq]);
          det = Real(rec[0]);
          for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
              inv[r][c] = Real(rec[1 + 3 * r + c]);
            }
          }
          if (!(det > Real(0))) {
            throw InvertedElementError(in_.element_id_base + elem, 0, 0, 0,
                                       static_cast<double>(det));
          }
        }

        phase("psi");
        for (int dof = 0; dof < n_sh_; ++dof) {
          psi_[dof] = Real(phi[dof]);
        }
        const float* d1 = phi + n_sh_;
        const float* d2 = phi + 2 * n_sh_;
        const float* d3 = phi + 3 * n_sh_;
        for (int i = 0; i < 3; ++i) {
          Real* row = psi_.data() + static_cast<std::size_t>(i + 1) * n_sh_;
          for (int dof = 0; dof < n_sh_; ++dof) {
            row[dof] =
                Real(d1[dof]) * inv[0][i] + Real(d2[dof]) * inv[1][i] + Real(d3[dof]) * inv[2][i];
          }
        }
        flops_ += flops::kPsiPerShape * static_cast<std::uint64_t>(n_sh_);

        phase("coefficients");
        const Real dw = det * weight;
        const Real scaled[3] = {dw * lambda, dw * mu, dw * lambda_two_mu};
        flops_ += flops::kDetWeight + flops::kCoefficientScale;

        phase("block_update");
        const Real* psi1 = psi_.data() + n_sh_;
        const Real* psi2 = psi_.data() + 2 * static_cast<std::size_t>(n_sh_);
        const Real* psi3 = psi_.data() + 3 * static_cast<std::size_t>(n_sh_);
        for (std::int64_t slot = 0; slot < slots; ++slot) {
          const std::int64_t linear = static_cast<std::int64_t>(part) * slots + slot;
          // Padding slots run the same arithmetic on the last real block pair;
          // their scratch accumulator is never written back.
          const bool padding = linear >= plan_.n_blocks;
          const std::int64_t clamped = padding ? plan_.n_blocks - 1 : linear;
          const int i_dof = static_cast<int>(clamped / n_sh_);
          const int j_dof = static_cast<int>(clamped % n_sh_);
          const Real u[3] = {psi1[i_dof], psi2[i_dof], psi3[i_dof]};
          const Real v[3] = {psi1[j_dof], psi2[j_dof], psi3[j_dof]};
          Real* acc = padding ? scratch_ : accum_.data() + slot * 9;
          for (const flops::BlockTerm& t : flops::kElasticityBlockTerms) {
            acc[t.row * 3 + t.col] += scaled[t.coeff] * u[t.du] * v[t.dv];
          }
        }
        flops_ += static_cast<std::uint64_t>(slots) * flops::kBlockUpdate;
      }

      phase("write_part");
      write_part(elem, part, slots);
    }
  }

  void device_jacobian(const float* geom, Real xi1, Real xi2, Real xi3, std::int64_t elem,
                       Real& det, Real inv[3][3]) {
    const Real half = Real(0.5);
    const Real zm = (Real(1) - xi3) * half;
    const Real zp = (Real(1) + xi3) * half;
    const Real l0 = Real(1) - xi1 - xi2;
    const Real h0 = l0 * half;
    const Real h1 = xi1 * half;
    const Real h2 = xi2 * half;
    flops_ += flops::kGeomShapeDerivs;
    const Real dn[3][6] = {
        {-zm, zm, Real(0), -zp, zp, Real(0)},
        {-zm, Real(0), zm, -zp, Real(0), zp},
        {-h0, -h1, -h2, h0, h1, h2},
    };
    Real j[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 3; ++c) {
        Real sum = dn[c][0] * Real(geom[0 + i]);
        for (int v = 1; v < 6; ++v) {
          sum += dn[c][v] * Real(geom[v * 3 + i]);
        }
        j[i][c] = sum;
      }
    }
    flops_ += flops::kJacobianAssembly;
    const Real c00 = j[1][1] * j[2][2] - j[1][2] * j[2][1];
    const Real c01 = j[1][2] * j[2][0] - j[1][0] * j[2][2];
    const Real c02 = j[1][0] * j[2][1] - j[1][1] * j[2][0];
    const Real c10 = j[0][2] * j[2][1] - j[0][1] * j[2][2];
    const Real c11 = j[0][0] * j[2][2] - j[0][2] * j[2][0];
    const Real c12 = j[0][1] * j[2][0] - j[0][0] * j[2][1];
    const Real c20 = j[0][1] * j[1][2] - j[0][2] * j[1][1];
    const Real c21 = j[0][2] * j[1][0] - j[0][0] * j[1][2];
    const Real c22 = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    det = j[0][0] * c00 + j[0][1] * c01 + j[0][2] * c02;
    flops_ += flops::kJacobianDet;
    if (!(det > Real(0))) {
      throw InvertedElementError(in_.element_id_base + elem, static_cast<double>(xi1),
                                 static_cast<double>(xi2), static_cast<double>(xi3),
                                 static_cast<double>(det));
    }
    const Real inv_det = Real(1) / det;
    inv[0][0] = c00 * inv_det;
    inv[0][1] = c10 * inv_det;
    inv[0][2] = c20 * inv_det;
    inv[1][0] = c01 * inv_det;
    inv[1][1] = c11 * inv_det;
    inv[1][2] = c21 * inv_det;
    inv[2][0] = c02 * inv_det;
    inv[2][1] = c12 * inv_det;
    inv[2][2] = c22 * inv_det;
    flops_ += flops::kJacobianInverse;
  }

  void write_part(std::int64_t elem, int part, std::int64_t slots) {
    const std::int64_t dim = static_cast<std::int64_t>(kNumEquations) * n_sh_;
    const std::int64_t elem_offset = elem * dim * dim;
    for (std::int64_t slot = 0; slot < slots; ++slot) {
      const std::int64_t linear = static_cast<std::int64_t>(part) * slots + slot;
      if (linear >= plan_.n_blocks) continue;
      const int i_dof = static_cast<int>(linear / n_sh_);
      const int j_dof = static_cast<int>(linear % n_sh_);
      const Real* acc = accum_.data() + slot * 9;
      for (int i_e = 0; i_e < 3; ++i_e) {
        const std::int64_t row = static_cast<std::int64_t>(i_dof) * 3 + i_e;
        for (int j_e = 0; j_e < 3; ++j_e) {
          const std::int64_t col = static_cast<std::int64_t>(j_dof) * 3 + j_e;
          const std::int64_t at = elem_offset + row * dim + col;
          if (out_f32_) {
            (*out_f32_)[at] = static_cast<float>(acc[i_e * 3 + j_e]);
          } else {
            (*out_f64_)[at] = static_cast<double>(acc[i_e * 3 + j_e]);
          }
        }
      }
      if (coverage_) {
        ++(*coverage_)[static_cast<std::size_t>(elem) * plan_.n_blocks + linear];
      }
    }
  }

  KernelVariant variant_;
  const KernelInputs& in_;
  const ExecutionPlan& plan_;
  int n_sh_;
  int n_q_;
  std::vector<float>* out_f32_;
  std::vector<double>* out_f64_;
  std::vector<std::uint16_t>* coverage_;
  std::vector<Real> psi_;
  std::vector<Real> accum_;
  Real scratch_[9] = {};
  std::uint64_t flops_ = 0;
  std::vector<std::string> trace_;
};

template <typename Real>
void run_all_groups(KernelVariant variant, const KernelInputs& in, int n_sh, int n_q, int n_workers,
                    KernelOutput& out) {
  std::vector<std::uint64_t> group_flops(in.plan.n_work_groups, 0);
  if (in.trace_barriers) {
    out.barrier_trace.resize(in.plan.n_work_groups);
  }
  std::vector<float>* f32 = out.precision == Precision::f32 ? &out.data_f32 : nullptr;
  std::vector<double>* f64 = out.precision == Precision::f64 ? &out.data_f64 : nullptr;
  std::vector<std::uint16_t>* coverage = in.record_coverage ? &out.coverage : nullptr;

  parallel_for_groups(in.plan.n_work_groups, n_workers, [&](int g) {
    GroupRunner<Real> runner(variant, in, n_sh, n_q, f32, f64, coverage);
    runner.run(g);
    group_flops[g] = runner.flops();
    if (in.trace_barriers) {
      out.barrier_trace[g] = runner.take_trace();
    }
  });
  for (const std::uint64_t f : group_flops) {
    out.flop_counter += f;
  }
}

}  // namespace

KernelInputs build_kernel_inputs(const ExecutionPlan& plan, const ShapeTable& shapes,
                                 const QuadratureRule& rule, std::span<const PrismGeometry> geoms,
                                 std::span<const MaterialData> materials, Precision precision,
                                 std::int64_t element_id_base) {
  if (shapes.order_p != plan.order_p || rule.order_p != plan.order_p) {
    throw ConfigError("build_kernel_inputs: shape table / rule order does not match the plan");
  }
  if (geoms.empty() || static_cast<std::int64_t>(geoms.size()) > plan.elems_per_kernel) {
    throw ContractViolation("build_kernel_inputs: element count must be in [1, elems_per_kernel]");
  }
  if (materials.size() != geoms.size() && materials.size() != 1) {
    throw ConfigError("build_kernel_inputs: need one material or one per element");
  }
  const int n_sh = shapes.n_shape;
  const int n_q = rule.size();

  KernelInputs in;
  in.plan = plan;
  in.precision = precision;
  in.n_elements = static_cast<std::int64_t>(geoms.size());
  in.element_id_base = element_id_base;

  in.shape_table.resize(static_cast<std::size_t>(n_q) * 4 * n_sh);
  for (int iq = 0; iq < n_q; ++iq) {
    const ShapePointValues& pv = shapes.per_point[iq];
    float* dst = in.shape_table.data() + static_cast<std::size_t>(iq) * 4 * n_sh;
    for (std::size_t k = 0; k < pv.data.size(); ++k) {
      dst[k] = static_cast<float>(pv.data[k]);
    }
  }

  if (plan.variant.jacobian == JacobianSource::device_computed) {
    in.quadrature.resize(static_cast<std::size_t>(n_q) * 4);
    for (int iq = 0; iq < n_q; ++iq) {
      in.quadrature[4 * iq + 0] = static_cast<float>(rule.points[iq].xi1);
      in.quadrature[4 * iq + 1] = static_cast<float>(rule.points[iq].xi2);
      in.quadrature[4 * iq + 2] = static_cast<float>(rule.points[iq].xi3);
      in.quadrature[4 * iq + 3] = static_cast<float>(rule.weights[iq]);
    }
    in.geometry.resize(geoms.size() * 18);
    for (std::size_t e = 0; e < geoms.size(); ++e) {
      for (int v = 0; v < 6; ++v) {
        for (int c = 0; c < 3; ++c) {
          in.geometry[e * 18 + v * 3 + c] = static_cast<float>(geoms[e].vertices[v][c]);
        }
      }
    }
  } else {
    in.weights.resize(n_q);
    for (int iq = 0; iq < n_q; ++iq) {
      in.weights[iq] = static_cast<float>(rule.weights[iq]);
    }
    const std::vector<double> wide = precompute_all_jacobian_terms(geoms, rule);
    in.jacobian_terms.resize(wide.size());
    for (std::size_t k = 0; k < wide.size(); ++k) {
      in.jacobian_terms[k] = static_cast<float>(wide[k]);
    }
  }

  in.material.resize(geoms.size() * 2);
  for (std::size_t e = 0; e < geoms.size(); ++e) {
    const MaterialData& m = materials.size() == 1 ? materials[0] : materials[e];
    in.material[2 * e + 0] = static_cast<float>(m.young_E);
    in.material[2 * e + 1] = static_cast<float>(m.poisson_nu);
  }
  return in;
}

ElementStiffness KernelOutput::element(std::int64_t index, int p) const {
  ElementStiffness a;
  a.order_p = p;
  a.n_eq = kNumEquations;
  a.n_shape = shape_count(p);
  const std::size_t dim = static_cast<std::size_t>(a.dim());
  const std::size_t n = dim * dim;
  a.data.resize(n);
  const std::size_t offset = static_cast<std::size_t>(index) * n;
  if (precision == Precision::f32) {
    for (std::size_t k = 0; k < n; ++k) {
      a.data[k] = static_cast<double>(data_f32[offset + k]);
    }
  } else {
    std::copy(data_f64.begin() + offset, data_f64.begin() + offset + n, a.data.begin());
  }
  return a;
}

KernelOutput run_kernel(KernelVariant variant, const KernelInputs& inputs, int n_workers) {
  const ExecutionPlan& plan = inputs.plan;
  if (!(plan.variant == variant)) {
    throw ContractViolation("run_kernel: plan was produced for variant " +
                            variant_name(plan.variant) + ", asked to run " + variant_name(variant));
  }
  const int p = plan.order_p;
  const int n_sh = shape_count(p);
  const int n_q = quadrature_point_count(p);
  if (inputs.n_elements < 1 || inputs.n_elements > plan.elems_per_kernel) {
    throw ContractViolation("run_kernel: element count out of range");
  }
  const std::size_t expect_shape = static_cast<std::size_t>(n_q) * 4 * n_sh;
  if (inputs.shape_table.size() != expect_shape) {
    throw ContractViolation("run_kernel: shape table buffer has " +
                            std::to_string(inputs.shape_table.size()) + " entries, expected " +
                            std::to_string(expect_shape));
  }
  if (variant.jacobian == JacobianSource::device_computed) {
    if (inputs.quadrature.size() != static_cast<std::size_t>(n_q) * 4) {
      throw ContractViolation("run_kernel: quadrature buffer size mismatch");
    }
    if (inputs.geometry.size() != static_cast<std::size_t>(inputs.n_elements) * 18) {
      throw ContractViolation("run_kernel: geometry buffer size mismatch");
    }
    if (!inputs.jacobian_terms.empty()) {
      throw ContractViolation("run_kernel: jacobian-terms buffer must be empty for device-Jacobian variants");
    }
  } else {
    if (inputs.jacobian_terms.size() != static_cast<std::size_t>(inputs.n_elements) * n_q * 10) {
      throw ContractViolation("run_kernel: jacobian-terms buffer size mismatch");
    }
    if (inputs.weights.size() != static_cast<std::size_t>(n_q)) {
      throw ContractViolation("run_kernel: weight buffer size mismatch");
    }
    if (!inputs.geometry.empty()) {
      throw ContractViolation("run_kernel: geometry buffer must be empty for precomputed-Jacobian variants");
    }
  }
  if (inputs.material.size() != static_cast<std::size_t>(inputs.n_elements) * 2) {
    throw ContractViolation("run_kernel: material buffer size mismatch");
  }

  KernelOutput out;
  out.precision = inputs.precision;
  const std::size_t dim = static_cast<std::size_t>(kNumEquations) * n_sh;
  const std::size_t total = static_cast<std::size_t>(inputs.n_elements) * dim * dim;
  if (inputs.precision == Precision::f32) {
    out.data_f32.assign(total, 0.0f);
  } else {
    out.data_f64.assign(total, 0.0);
  }
  if (inputs.record_coverage) {
    out.coverage.assign(static_cast<std::size_t>(inputs.n_elements) * plan.n_blocks, 0);
  }

  if (inputs.precision == Precision::f32) {
    run_all_groups<float>(variant, inputs, n_sh, n_q, n_workers, out);
  } else {
    run_all_groups<double>(variant, inputs, n_sh, n_q, n_workers, out);
  }
  return out;
}

std::vector<ElementStiffness> run_batch(KernelVariant variant, const DeviceProfile& profile, int p,
                                        std::span<const PrismGeometry> mesh, const MaterialData& mat,
                                        Precision precision, int n_workers) {
  if (mesh.empty()) {
    throw ConfigError("run_batch: empty mesh");
  }
  const ExecutionPlan plan =
      plan_execution(profile, p, variant, static_cast<std::int64_t>(mesh.size()));
  const QuadratureRule rule = prism_quadrature(p);
  const ShapeTable shapes = tabulate_shapes(p, rule);
  const MaterialData mats[1] = {mat};

  std::vector<ElementStiffness> results;
  results.reserve(mesh.size());
  std::int64_t done = 0;
  while (done < static_cast<std::int64_t>(mesh.size())) {
    const std::int64_t count = std::min<std::int64_t>(
        plan.elems_per_kernel, static_cast<std::int64_t>(mesh.size()) - done);
    const KernelInputs inputs = build_kernel_inputs(
        plan, shapes, rule,
        mesh.subspan(static_cast<std::size_t>(done), static_cast<std::size_t>(count)),
        std::span<const MaterialData>(mats, 1), precision, done);
    const KernelOutput out = run_kernel(variant, inputs, n_workers);
    for (std::int64_t e = 0; e < count; ++e) {
      results.push_back(out.element(e, p));
    }
    done += count;
  }
  return results;
}

std::uint64_t flop_model_block_updates(const ExecutionPlan& plan, int p) {
  const std::uint64_t slots =
      static_cast<std::uint64_t>(plan.work_group_size) * plan.blocks_per_thread;
  return static_cast<std::uint64_t>(plan.n_parts) * slots * quadrature_point_count(p) *
         flops::kBlockUpdate;
}

std::uint64_t flop_model(KernelVariant variant, const ExecutionPlan& plan, int p) {
  const std::uint64_t n_sh = static_cast<std::uint64_t>(shape_count(p));
  const std::uint64_t part_points =
      static_cast<std::uint64_t>(plan.n_parts) * quadrature_point_count(p);
  std::uint64_t per_point = flops::kDetWeight + flops::kCoefficientScale + flops::kPsiPerShape * n_sh;
  if (variant.jacobian == JacobianSource::device_computed) {
    per_point += flops::kGeomShapeDerivs + flops::kJacobianAssembly + flops::kJacobianDet +
                 flops::kJacobianInverse;
  }
  return flop_model_block_updates(plan, p) + part_points * per_point + flops::kMaterialSetup;
}

}  // namespace prismint
