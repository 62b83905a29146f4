#include "prismint/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "prismint/errors.hpp"
#include "prismint/geometry.hpp"
#include "prismint/io.hpp"

namespace prismint {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

BenchReport run_bench(const RunConfig& config, const DeviceProfile& profile) {
  if (config.repetitions < 1) {
    throw ConfigError("bench: repetitions must be >= 1");
  }
  const auto mesh =
      generate_box_mesh(config.nx, config.ny, config.nz, config.distortion, config.seed);
  const MaterialData mats[1] = {config.material};

  BenchReport report;
  for (const int p : config.orders) {
    const QuadratureRule rule = prism_quadrature(p);
    const ShapeTable shapes = tabulate_shapes(p, rule);
    for (const KernelVariant variant : config.variants) {
      const int occupancy = config.occupancy.value_or(profile.defaults.occupancy_for(p));
      const std::optional<int> wg =
          config.wg_override ? config.wg_override : profile.defaults.wg_override_for(p);
      const ExecutionPlan plan =
          plan_execution(profile.spec, p, variant, static_cast<std::int64_t>(mesh.size()),
                         occupancy, wg, std::nullopt, profile.defaults.shared_groups_per_cu);

      BenchRow row;
      row.variant = variant_name(variant);
      row.order_p = p;
      row.device = profile.spec.name;

      // One kernel invocation is timed; with the plan clipped to the mesh
      // size this covers the whole mesh.
      auto t0 = std::chrono::steady_clock::now();
      const KernelInputs inputs = build_kernel_inputs(
          plan, shapes, rule,
          std::span<const PrismGeometry>(mesh.data(),
                                         std::min<std::size_t>(mesh.size(),
                                                               static_cast<std::size_t>(plan.elems_per_kernel))),
          std::span<const MaterialData>(mats, 1), config.precision);
      row.phases.input_prep = seconds_since(t0);
      row.elements = inputs.n_elements;

      // Output-array initialization, the analogue of device-memory setup.
      t0 = std::chrono::steady_clock::now();
      {
        std::vector<float> warm(static_cast<std::size_t>(plan.output_bytes / 4), 0.0f);
        (void)warm.data();
      }
      row.phases.buffer_init = seconds_since(t0);

      for (int w = 0; w < config.warmup; ++w) {
        (void)run_kernel(variant, inputs, config.n_workers);
      }
      std::vector<double> times;
      times.reserve(config.repetitions);
      KernelOutput out;
      for (int r = 0; r < config.repetitions; ++r) {
        t0 = std::chrono::steady_clock::now();
        out = run_kernel(variant, inputs, config.n_workers);
        times.push_back(seconds_since(t0));
      }
      row.phases.kernel = median(times);
      row.flops = out.flop_counter;
      row.throughput_gflops = row.phases.kernel > 0
                                  ? static_cast<double>(row.flops) / row.phases.kernel / 1e9
                                  : 0.0;

      t0 = std::chrono::steady_clock::now();
      double checksum = 0.0;
      for (std::int64_t e = 0; e < inputs.n_elements; ++e) {
        const ElementStiffness a = out.element(e, p);
        checksum += a.data[0];
      }
      row.phases.output_convert = seconds_since(t0);
      (void)checksum;

      const MemoryAccounting acc = memory_accounting(plan, p);
      row.input_jac_bytes = acc.input_jac_bytes;
      row.input_nojac_bytes = acc.input_nojac_bytes;
      row.output_bytes = acc.output_bytes;

      if (!config.dump_dir.empty()) {
        const std::filesystem::path dir(config.dump_dir);
        std::filesystem::create_directories(dir);
        const std::string stem = row.variant + "_p" + std::to_string(p);
        write_f32_file((dir / (stem + "_shape_table.f32")).string(), inputs.shape_table);
        if (!inputs.quadrature.empty()) {
          write_f32_file((dir / (stem + "_quadrature.f32")).string(), inputs.quadrature);
        }
        if (!inputs.weights.empty()) {
          write_f32_file((dir / (stem + "_weights.f32")).string(), inputs.weights);
        }
        if (!inputs.geometry.empty()) {
          write_f32_file((dir / (stem + "_geometry.f32")).string(), inputs.geometry);
        }
        if (!inputs.jacobian_terms.empty()) {
          write_f32_file((dir / (stem + "_jacobian_terms.f32")).string(), inputs.jacobian_terms);
        }
        write_f32_file((dir / (stem + "_material.f32")).string(), inputs.material);
        if (out.precision == Precision::f32) {
          write_f32_file((dir / (stem + "_output.f32")).string(), out.data_f32);
        } else {
          std::vector<float> demoted(out.data_f64.begin(), out.data_f64.end());
          write_f32_file((dir / (stem + "_output.f32")).string(), demoted);
        }
      }

      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string bench_to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "variant,p,device,elements,input_prep_s,buffer_init_s,kernel_s,output_convert_s,"
         "total_s,flops,throughput_gflops,input_jac_bytes,input_nojac_bytes,output_bytes\n";
  for (const BenchRow& r : report.rows) {
    out << r.variant << ',' << r.order_p << ',' << '"' << r.device << '"' << ',' << r.elements
        << ',' << r.phases.input_prep << ',' << r.phases.buffer_init << ',' << r.phases.kernel
        << ',' << r.phases.output_convert << ',' << r.phases.total() << ',' << r.flops << ','
        << r.throughput_gflops << ',' << r.input_jac_bytes << ',' << r.input_nojac_bytes << ','
        << r.output_bytes << '\n';
  }
  return out.str();
}

std::string bench_to_long_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "variant,p,phase,seconds\n";
  for (const BenchRow& r : report.rows) {
    out << r.variant << ',' << r.order_p << ",input_prep," << r.phases.input_prep << '\n';
    out << r.variant << ',' << r.order_p << ",buffer_init," << r.phases.buffer_init << '\n';
    out << r.variant << ',' << r.order_p << ",kernel," << r.phases.kernel << '\n';
    out << r.variant << ',' << r.order_p << ",output_convert," << r.phases.output_convert << '\n';
  }
  return out.str();
}

std::string bench_to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BenchRow& r : report.rows) {
    nlohmann::json node;
    node["variant"] = r.variant;
    node["p"] = r.order_p;
    node["device"] = r.device;
    node["elements"] = r.elements;
    node["phases"] = {{"input_prep_s", r.phases.input_prep},
                      {"buffer_init_s", r.phases.buffer_init},
                      {"kernel_s", r.phases.kernel},
                      {"output_convert_s", r.phases.output_convert},
                      {"total_s", r.phases.total()}};
    node["flops"] = r.flops;
    node["throughput_gflops"] = r.throughput_gflops;
    node["memory"] = {{"input_jac_bytes", r.input_jac_bytes},
                      {"input_nojac_bytes", r.input_nojac_bytes},
                      {"output_bytes", r.output_bytes}};
    rows.push_back(node);
  }
  nlohmann::json j;
  j["rows"] = rows;
  return j.dump(2);
}

}  // namespace prismint
