#include "prismint/verify.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "prismint/errors.hpp"
#include "prismint/integrate_ref.hpp"
#include "prismint/kernels.hpp"

namespace prismint {

namespace {

// Recorded execution characteristics of the two reference GPUs (p = 2..7).
const RecordedDeviceTable kGtx580Table = {
    "GeForce GTX580",
    {2, 4, 11, 32, 76, 162},
    {1, 2, 6, 16, 38, 81},
    {2, 2, 2, 2, 2, 2},
    {29056, 5376, 1904, 672, 224, 112},
    {227, 48, 17, 6, 2, 1},
    {323.21, 295.31, 367.70, 366.28, 295.44, 318.94},
};

const RecordedDeviceTable kHd5870Table = {
    "Radeon HD5870",
    {2, 7, 22, 63, 151, 324},
    {1, 3, 8, 21, 51, 108},
    {2, 3, 3, 3, 3, 3},
    {11360, 2240, 640, 160, 80, 40},
    {71, 14, 4, 1, 1, 1},
    {126.36, 123.05, 123.60, 87.21, 105.51, 113.91},
};

// Recorded per-element flop totals in units of 1e6 (reference CPU and the
// four kernel organizations on the NVIDIA reference device), p = 2..7.
const RecordedFlopTable kFlopTable = {
    {0.38, 4.89, 28.49, 150.45, 560.03, 1757.75},
    {0.44, 6.27, 29.22, 163.0, 614.8, 1981.0},
    {0.44, 6.30, 29.37, 163.9, 617.9, 1990.0},
    {0.43, 6.23, 31.42, 158.9, 590.5, 1868.0},
    {0.44, 6.25, 33.47, 159.3, 592.0, 1873.0},
};

constexpr double kMb = 1024.0 * 1024.0;

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t want) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  want = std::min(want, n);
  out.reserve(want);
  for (std::size_t i = 0; i < want; ++i) {
    out.push_back(want == 1 ? 0 : i * (n - 1) / (want - 1));
  }
  return out;
}

class Session {
 public:
  explicit Session(const VerifyConfig& config) : cfg_(config) {
    profile_ = cfg_.profile.value_or(reference_gtx580());
  }

  VerifyReport run() {
    sizing_suite();
    quadrature_suite();
    structural_suite();
    oracle_suite();
    determinism_suite();
    flop_suite();
    if (cfg_.check_tables) {
      table_suite();
    }
    if (cfg_.inject_inverted_element) {
      inverted_element_suite();
    }
    return std::move(report_);
  }

 private:
  void add(const std::string& suite, const std::string& name, bool pass, double measured,
           double tolerance, std::string detail = {}) {
    report_.checks.push_back({suite, name, pass, measured, tolerance, std::move(detail)});
    (pass ? report_.passed : report_.failed) += 1;
  }

  void sizing_suite() {
    static constexpr int n_sh[8] = {0, 6, 18, 40, 75, 126, 196, 288};
    static constexpr int n_q[8] = {0, 6, 18, 48, 80, 150, 231, 336};
    static constexpr std::int64_t phi_total[8] = {0, 144, 1296, 7680, 24000, 75600, 181104, 387072};
    bool ok = true;
    for (int p = 1; p <= 7; ++p) {
      ok = ok && shape_count(p) == n_sh[p];
      ok = ok && quadrature_point_count(p) == n_q[p];
      ok = ok && 4 * n_q[p] == 4 * quadrature_point_count(p);
      const QuadratureRule rule = prism_quadrature(p);
      const ShapeTable table = tabulate_shapes(p, rule);
      ok = ok && static_cast<std::int64_t>(table.entry_count()) == phi_total[p];
      ok = ok && table.per_point.front().data.size() == 4u * static_cast<std::size_t>(n_sh[p]);
      ok = ok && static_cast<std::int64_t>(n_sh[p]) * n_sh[p] ==
                     static_cast<std::int64_t>(shape_count(p)) * shape_count(p);
    }
    add("sizing", "shape/point/entry tables p=1..7", ok, ok ? 0.0 : 1.0, 0.0);
  }

  void quadrature_suite() {
    double worst = 0.0;
    for (int p = 1; p <= 7; ++p) {
      const QuadratureRule rule = prism_quadrature(p);
      double wsum = 0.0;
      for (double w : rule.weights) wsum += w;
      worst = std::max(worst, std::abs(wsum - 1.0));
      for (int a = 0; a <= 2 * p; ++a) {
        for (int b = 0; a + b <= 2 * p; ++b) {
          for (int c = 0; c <= 2 * p + 1; ++c) {
            double sum = 0.0;
            for (int q = 0; q < rule.size(); ++q) {
              sum += rule.weights[q] * std::pow(rule.points[q].xi1, a) *
                     std::pow(rule.points[q].xi2, b) * std::pow(rule.points[q].xi3, c);
            }
            double fac = 1.0;
            for (int k = 1; k <= a; ++k) fac *= k;
            for (int k = 1; k <= b; ++k) fac *= k;
            double denom = 1.0;
            for (int k = 1; k <= a + b + 2; ++k) denom *= k;
            const double tri = fac / denom;
            const double vert = c % 2 == 1 ? 0.0 : 2.0 / (c + 1);
            const double exact = tri * vert;
            const double err =
                exact == 0.0 ? std::abs(sum) : std::abs(sum - exact) / std::abs(exact);
            worst = std::max(worst, err);
          }
        }
      }
    }
    add("quadrature", "monomial exactness p=1..7", worst <= 1e-12, worst, 1e-12);
  }

  // Symmetry, rigid-body annihilation and positive semi-definiteness on a
  // distorted element and an affine element.
  void structural_suite() {
    const auto mesh = generate_box_mesh(cfg_.nx, cfg_.ny, cfg_.nz, cfg_.distortion, cfg_.seed);
    const PrismGeometry affine = generate_box_mesh(1, 1, 1, 0.0)[0];
    const PrismGeometry distorted = mesh[mesh.size() / 2];

    double worst_sym_wide = 0.0;
    double worst_sym_single = 0.0;
    double worst_rigid = 0.0;
    for (int p : cfg_.orders) {
      const QuadratureRule rule = prism_quadrature(p);
      const ShapeTable shapes = tabulate_shapes(p, rule);
      const ElementStiffness a = integrate_optimized(distorted, cfg_.material, shapes, rule);
      worst_sym_wide = std::max(worst_sym_wide, symmetry_error(a));

      const ExecutionPlan plan = plan_execution(profile_, p, kRegJac, 1);
      const MaterialData mats[1] = {cfg_.material};
      const KernelInputs inputs =
          build_kernel_inputs(plan, shapes, rule, std::span(&distorted, 1),
                              std::span<const MaterialData>(mats, 1), Precision::f32);
      const KernelOutput out = run_kernel(kRegJac, inputs, cfg_.n_workers);
      worst_sym_single = std::max(worst_sym_single, symmetry_error(out.element(0, p)));

      const ElementStiffness aff = integrate_optimized(affine, cfg_.material, shapes, rule);
      worst_rigid = std::max(worst_rigid, rigid_mode_error(aff, affine, p));
    }
    add("structure", "elasticity symmetry (wide)", worst_sym_wide <= 1e-12, worst_sym_wide, 1e-12);
    add("structure", "elasticity symmetry (single)", worst_sym_single <= 1e-5, worst_sym_single,
        1e-5);
    add("structure", "rigid-body modes annihilated", worst_rigid <= 1e-10, worst_rigid, 1e-10);

    double psd_worst = 0.0;
    for (int p : cfg_.orders) {
      if (p > 3) continue;
      const QuadratureRule rule = prism_quadrature(p);
      const ShapeTable shapes = tabulate_shapes(p, rule);
      const ElementStiffness a = integrate_optimized(distorted, cfg_.material, shapes, rule);
      psd_worst = std::max(psd_worst, psd_violation(a));
    }
    add("structure", "positive semi-definite (p<=3)", psd_worst <= 1e-10, psd_worst, 1e-10);
  }

  void oracle_suite() {
    const auto mesh = generate_box_mesh(cfg_.nx, cfg_.ny, cfg_.nz, cfg_.distortion, cfg_.seed);
    const auto picks = sample_indices(mesh.size(), static_cast<std::size_t>(cfg_.oracle_sample_elements));
    std::vector<PrismGeometry> sample;
    sample.reserve(picks.size());
    for (std::size_t i : picks) sample.push_back(mesh[i]);
    const MaterialData mats[1] = {cfg_.material};

    for (int p : cfg_.orders) {
      const QuadratureRule rule = prism_quadrature(p);
      const ShapeTable shapes = tabulate_shapes(p, rule);
      const QuadCoefficients coeffs = expand_coefficients(elasticity_tensor(cfg_.material), rule);

      std::vector<ElementStiffness> reference;
      reference.reserve(sample.size());
      double worst_opt = 0.0;
      for (const PrismGeometry& g : sample) {
        reference.push_back(integrate_generic(g, coeffs, shapes, rule));
        const ElementStiffness opt = integrate_optimized(g, cfg_.material, shapes, rule);
        worst_opt = std::max(worst_opt, rel_frob(reference.back(), opt));
      }
      add("oracle", "optimized vs generic, p=" + std::to_string(p), worst_opt <= 1e-12, worst_opt,
          1e-12);

      for (const KernelVariant variant : {kRegJac, kRegNojac, kShmJac, kShmNojac}) {
        const ExecutionPlan plan =
            plan_execution(profile_.spec, p, variant, static_cast<std::int64_t>(sample.size()),
                           profile_.defaults.occupancy_for(p), profile_.defaults.wg_override_for(p),
                           std::nullopt, profile_.defaults.shared_groups_per_cu);
        const KernelInputs inputs = build_kernel_inputs(
            plan, shapes, rule, sample, std::span<const MaterialData>(mats, 1), Precision::f32);
        const KernelOutput out = run_kernel(variant, inputs, cfg_.n_workers);
        double worst = 0.0;
        for (std::size_t e = 0; e < sample.size(); ++e) {
          worst = std::max(worst, rel_frob(reference[e], out.element(static_cast<std::int64_t>(e), p)));
        }
        add("oracle", variant_name(variant) + " vs reference, p=" + std::to_string(p),
            worst <= 5e-5, worst, 5e-5);
      }
    }
  }

  void determinism_suite() {
    const int p = cfg_.orders.front();
    const auto mesh = generate_box_mesh(2, 2, 2, cfg_.distortion, cfg_.seed);
    const QuadratureRule rule = prism_quadrature(p);
    const ShapeTable shapes = tabulate_shapes(p, rule);
    const MaterialData mats[1] = {cfg_.material};

    for (const KernelVariant variant : {kRegJac, kShmNojac}) {
      const ExecutionPlan plan =
          plan_execution(profile_, p, variant, static_cast<std::int64_t>(mesh.size()));
      KernelInputs inputs = build_kernel_inputs(plan, shapes, rule, mesh,
                                                std::span<const MaterialData>(mats, 1),
                                                Precision::f32);
      inputs.record_coverage = true;
      const KernelOutput one = run_kernel(variant, inputs, 1);
      const KernelOutput four = run_kernel(variant, inputs, 4);
      const KernelOutput many = run_kernel(variant, inputs, 0);
      const bool bitwise = one.data_f32 == four.data_f32 && one.data_f32 == many.data_f32 &&
                           one.flop_counter == four.flop_counter &&
                           one.flop_counter == many.flop_counter;
      add("determinism", variant_name(variant) + " bitwise across pool widths", bitwise,
          bitwise ? 0.0 : 1.0, 0.0);

      bool covered = one.coverage.size() ==
                     static_cast<std::size_t>(inputs.n_elements) * plan.n_blocks;
      for (const std::uint16_t c : one.coverage) {
        covered = covered && c == 1;
      }
      add("determinism", variant_name(variant) + " write-once coverage", covered,
          covered ? 0.0 : 1.0, 0.0);
    }
  }

  void flop_suite() {
    const auto mesh = generate_box_mesh(1, 1, 2, cfg_.distortion, cfg_.seed);
    const MaterialData mats[1] = {cfg_.material};
    bool exact = true;
    for (int p : cfg_.orders) {
      const QuadratureRule rule = prism_quadrature(p);
      const ShapeTable shapes = tabulate_shapes(p, rule);
      for (const KernelVariant variant : {kRegJac, kRegNojac, kShmJac, kShmNojac}) {
        const ExecutionPlan plan =
            plan_execution(profile_, p, variant, static_cast<std::int64_t>(mesh.size()));
        const KernelInputs inputs = build_kernel_inputs(
            plan, shapes, rule, mesh, std::span<const MaterialData>(mats, 1), Precision::f32);
        const KernelOutput out = run_kernel(variant, inputs, cfg_.n_workers);
        const std::uint64_t expected = flop_model(variant, plan, p) * mesh.size();
        exact = exact && out.flop_counter == expected;
      }
    }
    add("flops", "instrumented counter equals the model", exact, exact ? 0.0 : 1.0, 0.0);
  }

  void table_suite() {
    const RecordedDeviceTable* table = recorded_table_for(profile_.spec.name);
    if (!table) {
      add("planner_tables", "recorded characteristics available for '" + profile_.spec.name + "'",
          false, 1.0, 0.0, "no recorded table for this device name");
      return;
    }
    for (int p = 2; p <= 7; ++p) {
      const int i = p - 2;
      const ExecutionPlan reg =
          plan_execution(profile_, p, kRegJac, table->elems_per_kernel[i]);
      const ExecutionPlan shm =
          plan_execution(profile_, p, kShmJac, table->elems_per_kernel[i]);
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " parts (reg)",
          reg.n_parts == table->reg_parts[i], reg.n_parts, table->reg_parts[i]);
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " parts (shm)",
          shm.n_parts == table->shm_parts[i], shm.n_parts, table->shm_parts[i]);
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " blocks/thread",
          shm.blocks_per_thread == table->shm_blocks_per_thread[i], shm.blocks_per_thread,
          table->shm_blocks_per_thread[i]);
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " elems/kernel",
          reg.elems_per_kernel == table->elems_per_kernel[i],
          static_cast<double>(reg.elems_per_kernel),
          static_cast<double>(table->elems_per_kernel[i]));
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " elems/work-group",
          reg.elems_per_work_group == table->elems_per_work_group[i],
          static_cast<double>(reg.elems_per_work_group),
          static_cast<double>(table->elems_per_work_group[i]));
      const double mb = static_cast<double>(reg.output_bytes) / kMb;
      const double rel = std::abs(mb - table->output_mb[i]) / table->output_mb[i];
      add("planner_tables", profile_.spec.name + " p=" + std::to_string(p) + " output MB", rel <= 5e-3,
          mb, table->output_mb[i]);
    }
  }

  void inverted_element_suite() {
    auto mesh = generate_box_mesh(2, 2, 1, 0.0);
    std::swap(mesh[5].vertices[0], mesh[5].vertices[1]);
    const int p = 2;
    const QuadratureRule rule = prism_quadrature(p);
    const ShapeTable shapes = tabulate_shapes(p, rule);
    const MaterialData mats[1] = {cfg_.material};
    const ExecutionPlan plan =
        plan_execution(profile_, p, kRegJac, static_cast<std::int64_t>(mesh.size()));
    bool caught = false;
    std::int64_t reported = -1;
    try {
      const KernelInputs inputs = build_kernel_inputs(
          plan, shapes, rule, mesh, std::span<const MaterialData>(mats, 1), Precision::f32);
      (void)run_kernel(kRegJac, inputs, cfg_.n_workers);
    } catch (const InvertedElementError& e) {
      caught = true;
      reported = e.element();
    }
    add("error_paths", "inverted element rejected with its identity", caught && reported == 5,
        static_cast<double>(reported), 5.0);
  }

  static double symmetry_error(const ElementStiffness& a) {
    const int dim = a.dim();
    double num = 0.0, den = 0.0;
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const double x = a.data[static_cast<std::size_t>(r) * dim + c];
        const double d = x - a.data[static_cast<std::size_t>(c) * dim + r];
        num += d * d;
        den += x * x;
      }
    }
    return den > 0 ? std::sqrt(num / den) : 0.0;
  }

  double rigid_mode_error(const ElementStiffness& a, const PrismGeometry& geom, int p) const {
    double scale = 0.0;
    const int dim = a.dim();
    for (int r = 0; r < dim; ++r) {
      double sum = 0.0;
      for (int c = 0; c < dim; ++c) sum += std::abs(a.data[static_cast<std::size_t>(r) * dim + c]);
      scale = std::max(scale, sum);
    }

    // b = x(0): the affine shift of the mapping; J the constant Jacobian.
    const auto j = jacobian_matrix(geom, {0.25, 0.25, 0.0});
    std::array<double, 3> b{};
    for (int i = 0; i < 3; ++i) b[i] = 0.5 * (geom.vertices[0][i] + geom.vertices[3][i]);

    double worst = 0.0;
    const int n_vert = p + 1;
    auto test_mode = [&](const std::array<std::array<double, 3>, 3>& grads,
                         const std::array<double, 3>& consts) {
      std::vector<double> u(static_cast<std::size_t>(dim), 0.0);
      for (int eq = 0; eq < 3; ++eq) {
        std::array<double, 3> jt_g{};
        for (int k = 0; k < 3; ++k) {
          jt_g[k] = j[0][k] * grads[eq][0] + j[1][k] * grads[eq][1] + j[2][k] * grads[eq][2];
        }
        const double c0 =
            grads[eq][0] * b[0] + grads[eq][1] * b[1] + grads[eq][2] * b[2] + consts[eq];
        u[0 * 3 + eq] = c0;
        u[static_cast<std::size_t>(1) * 3 + eq] = jt_g[2];
        u[static_cast<std::size_t>(n_vert) * 3 + eq] = jt_g[1];
        u[static_cast<std::size_t>(2 * n_vert) * 3 + eq] = jt_g[0];
      }
      double residual = 0.0;
      for (int r = 0; r < dim; ++r) {
        double sum = 0.0;
        for (int c = 0; c < dim; ++c) {
          sum += a.data[static_cast<std::size_t>(r) * dim + c] * u[c];
        }
        residual = std::max(residual, std::abs(sum));
      }
      worst = std::max(worst, residual / scale);
    };

    for (int e = 0; e < 3; ++e) {
      std::array<std::array<double, 3>, 3> grads{};
      std::array<double, 3> consts{};
      consts[e] = 1.0;
      test_mode(grads, consts);  // translation
    }
    for (int axis = 0; axis < 3; ++axis) {
      std::array<double, 3> omega{};
      omega[axis] = 1.0;
      std::array<std::array<double, 3>, 3> grads{};
      for (int i = 0; i < 3; ++i) {
        const int j1 = (i + 1) % 3, k1 = (i + 2) % 3;
        grads[i][k1] += omega[j1];
        grads[i][j1] -= omega[k1];
      }
      test_mode(grads, {0.0, 0.0, 0.0});  // infinitesimal rotation
    }
    return worst;
  }

  static double psd_violation(const ElementStiffness& a) {
    const int dim = a.dim();
    std::vector<double> sym(a.data.size());
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        sym[static_cast<std::size_t>(r) * dim + c] =
            0.5 * (a.data[static_cast<std::size_t>(r) * dim + c] +
                   a.data[static_cast<std::size_t>(c) * dim + r]);
      }
    }
    // Cyclic Jacobi; adequate for the small low-order matrices checked here.
    auto at = [&](int i, int jj) -> double& { return sym[static_cast<std::size_t>(i) * dim + jj]; };
    for (int sweep = 0; sweep < 60; ++sweep) {
      double off = 0.0;
      for (int i = 0; i < dim; ++i) {
        for (int jj = i + 1; jj < dim; ++jj) off += at(i, jj) * at(i, jj);
      }
      if (off < 1e-24) break;
      for (int i = 0; i < dim - 1; ++i) {
        for (int jj = i + 1; jj < dim; ++jj) {
          const double apq = at(i, jj);
          if (std::abs(apq) < 1e-300) continue;
          const double tau = (at(jj, jj) - at(i, i)) / (2.0 * apq);
          const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          for (int k = 0; k < dim; ++k) {
            const double aik = at(i, k), ajk = at(jj, k);
            at(i, k) = c * aik - s * ajk;
            at(jj, k) = s * aik + c * ajk;
          }
          for (int k = 0; k < dim; ++k) {
            const double aki = at(k, i), akj = at(k, jj);
            at(k, i) = c * aki - s * akj;
            at(k, jj) = s * aki + c * akj;
          }
        }
      }
    }
    double min_e = at(0, 0), max_e = at(0, 0);
    for (int i = 0; i < dim; ++i) {
      min_e = std::min(min_e, at(i, i));
      max_e = std::max(max_e, at(i, i));
    }
    return min_e < 0.0 ? -min_e / max_e : 0.0;
  }

  static double rel_frob(const ElementStiffness& ref, const ElementStiffness& other) {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ref.data.size(); ++k) {
      const double d = ref.data[k] - other.data[k];
      num += d * d;
      den += ref.data[k] * ref.data[k];
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
  }

  VerifyConfig cfg_;
  DeviceProfile profile_;
  VerifyReport report_;
};

}  // namespace

const RecordedDeviceTable* recorded_table_for(const std::string& profile_name) {
  if (profile_name == kGtx580Table.profile_name) return &kGtx580Table;
  if (profile_name == kHd5870Table.profile_name) return &kHd5870Table;
  return nullptr;
}

const RecordedFlopTable& recorded_flop_table() { return kFlopTable; }

DeviceProfile reference_gtx580() {
  DeviceProfile profile;
  profile.spec.name = "GeForce GTX580";
  profile.spec.global_mem_bytes = 1536ull * 1024 * 1024;
  profile.spec.max_alloc_bytes = 384ull * 1024 * 1024;
  profile.spec.shared_mem_bytes = 48ull * 1024;
  profile.spec.constant_mem_bytes = 64ull * 1024;
  profile.spec.max_work_group = 1024;
  profile.spec.compute_units = 16;
  profile.spec.simd_width = 64;
  profile.spec.max_total_threads = 1ull << 24;
  profile.defaults.wg_override = {{2, 192}, {-1, 512}};
  profile.defaults.occupancy_groups = {{2, 8}, {-1, 7}};
  profile.defaults.shared_groups_per_cu = 1;
  return profile;
}

DeviceProfile reference_hd5870() {
  DeviceProfile profile;
  profile.spec.name = "Radeon HD5870";
  profile.spec.global_mem_bytes = 1024ull * 1024 * 1024;
  profile.spec.max_alloc_bytes = 128ull * 1024 * 1024;
  profile.spec.shared_mem_bytes = 32ull * 1024;
  profile.spec.constant_mem_bytes = 64ull * 1024;
  profile.spec.max_work_group = 256;
  profile.spec.compute_units = 20;
  profile.spec.simd_width = 64;
  profile.spec.max_total_threads = 1ull << 24;
  profile.defaults.occupancy_groups = {{-1, 8}};
  profile.defaults.shared_groups_per_cu = 1;
  return profile;
}

VerifyReport run_verification(const VerifyConfig& config) { return Session(config).run(); }

std::string verify_report_to_json(const VerifyReport& report) {
  nlohmann::json j;
  j["passed"] = report.passed;
  j["failed"] = report.failed;
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::json node;
    node["suite"] = c.suite;
    node["name"] = c.name;
    node["pass"] = c.pass;
    node["measured"] = c.measured;
    node["tolerance"] = c.tolerance;
    if (!c.detail.empty()) node["detail"] = c.detail;
    checks.push_back(node);
  }
  j["checks"] = checks;
  return j.dump(2);
}

std::string verify_report_to_text(const VerifyReport& report) {
  std::ostringstream out;
  for (const CheckResult& c : report.checks) {
    out << (c.pass ? "PASS" : "FAIL") << "  [" << c.suite << "] " << c.name << "  (measured "
        << c.measured << ", tolerance " << c.tolerance << ")";
    if (!c.detail.empty()) out << "  -- " << c.detail;
    out << "\n";
  }
  out << report.passed << " passed, " << report.failed << " failed\n";
  return out.str();
}

}  // namespace prismint
