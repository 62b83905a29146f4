// Command-line front end: `verify` runs the correctness suites, `plan` prints
// host-side execution parameters for a device profile, `bench` times the
// emulated kernels and emits CSV/JSON reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "prismint/bench.hpp"
#include "prismint/errors.hpp"
#include "prismint/kernels.hpp"
#include "prismint/planner.hpp"
#include "prismint/verify.hpp"

namespace {

using prismint::DeviceProfile;
using prismint::KernelVariant;

int exit_code_for(prismint::errc code) {
  switch (code) {
    case prismint::errc::config: return 2;
    case prismint::errc::domain: return 2;
    case prismint::errc::unsupported_degree: return 2;
    case prismint::errc::inverted_element: return 4;
    case prismint::errc::capacity: return 3;
    case prismint::errc::shared_memory_exhausted: return 3;
    case prismint::errc::contract_violation: return 5;
    case prismint::errc::io: return 6;
  }
  return 1;
}

void print_error(prismint::errc code, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"code", prismint::errc_name(code)}, {"message", message}};
  std::cerr << j.dump() << "\n";
}

DeviceProfile resolve_profile(const std::string& path) {
  if (path.empty()) {
    return prismint::reference_gtx580();
  }
  return prismint::load_device_profile(path);
}

std::vector<KernelVariant> resolve_variants(const std::string& name) {
  if (name == "all") {
    return {prismint::kRegJac, prismint::kRegNojac, prismint::kShmJac, prismint::kShmNojac};
  }
  return {prismint::parse_variant(name)};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw prismint::IoError("cannot write '" + path + "'");
  }
  out << text;
}

struct MeshSpec {
  int nx = 4, ny = 4, nz = 4;
};

MeshSpec parse_mesh(const std::string& text) {
  MeshSpec m;
  if (std::sscanf(text.c_str(), "%d,%d,%d", &m.nx, &m.ny, &m.nz) != 3) {
    throw prismint::ConfigError("--mesh expects nx,ny,nz");
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order prism stiffness integration workbench"};
  app.require_subcommand(1);

  std::string profile_path;
  std::string variant_name = "all";
  std::string mesh_text = "4,4,4";
  std::string precision_text = "f32";
  std::string csv_path, json_path, dump_dir;
  std::vector<int> orders;
  double distortion = 0.1;
  std::uint64_t seed = 42;
  std::optional<int> occupancy;
  std::optional<int> wg_override;
  std::int64_t n_elements = 1ll << 30;
  int threads = 0;
  bool check_tables = false;
  bool inject_inverted = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--profile", profile_path, "Device profile JSON (built-in GTX580 when omitted)");
    cmd->add_option("--p", orders, "Approximation order(s) in 2..7")->delimiter(',');
    cmd->add_option("--variant", variant_name, "reg-jac | reg-nojac | shm-jac | shm-nojac | all");
    cmd->add_option("--mesh", mesh_text, "Box mesh split nx,ny,nz");
    cmd->add_option("--distortion", distortion, "Mesh distortion in [0, 0.3)");
    cmd->add_option("--seed", seed, "Mesh distortion seed");
    cmd->add_option("--precision", precision_text, "Kernel precision: f32 | f64");
    cmd->add_option("--occupancy", occupancy, "Work-groups per compute unit");
    cmd->add_option("--wg", wg_override, "Work-group size override");
    cmd->add_option("--csv", csv_path, "CSV output path");
    cmd->add_option("--json", json_path, "JSON output path");
    cmd->add_option("--dump-buffers", dump_dir, "Directory for raw kernel buffers");
    cmd->add_option("--threads", threads, "Worker-pool width (default: hardware parallelism)");
  };

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the correctness suites");
  add_common(verify_cmd);
  verify_cmd->add_flag("--check-tables", check_tables,
                       "Also compare the planner against the recorded device characteristics");
  verify_cmd->add_flag("--inject-inverted-element", inject_inverted,
                       "Demonstrate the inverted-element error path");

  CLI::App* plan_cmd = app.add_subcommand("plan", "Print execution parameters for one order");
  add_common(plan_cmd);
  plan_cmd->add_option("--elements", n_elements, "Available element count");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the emulated kernels");
  add_common(bench_cmd);
  int repetitions = 5;
  bench_cmd->add_option("--repetitions", repetitions, "Timed repetitions (median reported)");

  CLI11_PARSE(app, argc, argv);

  try {
    const DeviceProfile profile = resolve_profile(profile_path);
    const MeshSpec mesh = parse_mesh(mesh_text);

    if (app.got_subcommand(verify_cmd)) {
      prismint::VerifyConfig cfg;
      cfg.nx = mesh.nx;
      cfg.ny = mesh.ny;
      cfg.nz = mesh.nz;
      cfg.distortion = distortion;
      cfg.seed = seed;
      if (!orders.empty()) cfg.orders = orders;
      cfg.n_workers = threads;
      cfg.profile = profile;
      cfg.check_tables = check_tables;
      cfg.inject_inverted_element = inject_inverted;
      const prismint::VerifyReport report = prismint::run_verification(cfg);
      std::cout << prismint::verify_report_to_text(report);
      if (!json_path.empty()) {
        write_text_file(json_path, prismint::verify_report_to_json(report));
      }
      return report.all_passed() ? 0 : 1;
    }

    if (app.got_subcommand(plan_cmd)) {
      if (orders.size() != 1) {
        throw prismint::ConfigError("plan: exactly one --p value is required");
      }
      const int p = orders.front();
      std::string json_out = "[";
      bool first = true;
      for (const KernelVariant variant : resolve_variants(variant_name)) {
        const int occ = occupancy.value_or(profile.defaults.occupancy_for(p));
        const std::optional<int> wg =
            wg_override ? wg_override : profile.defaults.wg_override_for(p);
        const prismint::ExecutionPlan plan =
            prismint::plan_execution(profile.spec, p, variant, n_elements, occ, wg, std::nullopt,
                                     profile.defaults.shared_groups_per_cu);
        std::cout << prismint::plan_to_table(plan) << "\n";
        if (!first) json_out += ",";
        json_out += prismint::plan_to_json(plan);
        first = false;
      }
      json_out += "]";
      if (!json_path.empty()) {
        write_text_file(json_path, json_out);
      }
      return 0;
    }

    if (app.got_subcommand(bench_cmd)) {
      prismint::RunConfig cfg;
      cfg.nx = mesh.nx;
      cfg.ny = mesh.ny;
      cfg.nz = mesh.nz;
      cfg.distortion = distortion;
      cfg.seed = seed;
      if (!orders.empty()) cfg.orders = orders;
      cfg.variants = resolve_variants(variant_name);
      cfg.precision = prismint::parse_precision(precision_text);
      cfg.occupancy = occupancy;
      cfg.wg_override = wg_override;
      cfg.repetitions = repetitions;
      cfg.n_workers = threads;
      cfg.dump_dir = dump_dir;
      const prismint::BenchReport report = prismint::run_bench(cfg, profile);
      const std::string csv = prismint::bench_to_csv(report);
      std::cout << csv;
      if (!csv_path.empty()) {
        write_text_file(csv_path, csv);
        write_text_file(csv_path + ".long.csv", prismint::bench_to_long_csv(report));
      }
      if (!json_path.empty()) {
        write_text_file(json_path, prismint::bench_to_json(report));
      }
      return 0;
    }
  } catch (const prismint::Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error(prismint::errc::config, e.what());
    return 1;
  }
  return 0;
}
