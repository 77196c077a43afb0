// wgmaxwell: convergence studies and single runs for the weak Galerkin
// Maxwell viscoelastic solver.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wgmax/mesh.hpp"
#include "wgmax/study.hpp"
#include "wgmax/vtk.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

int run_study_command(const std::string& config_path, const std::vector<std::pair<std::string, std::string>>& overrides,
                      bool fast, bool full) {
  wgmax::StudyConfig config;
  if (!config_path.empty()) wgmax::load_config_file(config, config_path);
  for (const auto& [key, value] : overrides) wgmax::apply_setting(config, key, value);
  if (fast) config.fast = true;
  if (full) config.full = true;
  wgmax::finalize_config(config);

  const auto format = wgmax::parse_format(config.format);
  std::filesystem::create_directories(config.out_dir);
  const std::string stem = config.example + "_k" + std::to_string(config.k) + "_" + wgmax::mode_name(config.mode);
  const auto report_path =
      std::filesystem::path(config.out_dir) / (stem + (format == wgmax::ReportFormat::Csv ? ".csv" : ".md"));

  std::cerr << "running " << stem << " (" << wgmax::pattern_name(config.pattern) << ")\n";
  const auto table = wgmax::run_study(config);
  wgmax::emit_report(table, format, report_path.string());

  std::ofstream meta(std::filesystem::path(config.out_dir) / (stem + ".meta.txt"));
  meta << "# configuration\n" << table.config_echo << "# runs\n";
  for (const auto& r : table.runs) {
    char line[256];
    std::snprintf(line, sizeof line, "M=%d dt=%g steps=%d unknowns=%d energy_residual=%.3e seconds=%.2f\n", r.M,
                  r.dt, r.steps, r.unknowns, r.energy_residual, r.seconds);
    meta << line;
    std::cerr << line;
  }
  meta << "wall_seconds=" << table.wall_seconds << '\n';

  std::cout << wgmax::format_report(table, wgmax::ReportFormat::Markdown);
  std::cerr << "report written to " << report_path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin solver for the quasistatic Maxwell viscoelastic model"};
  app.require_subcommand(1);

  auto* study = app.add_subcommand("study", "Run a convergence study or a single simulation");
  std::string config_path;
  std::string example, mode, pattern, out, format, meshes, dts;
  int k = 0, vtk_stride = -1, M = 0;
  double dt = 0.0, T = 0.0;
  bool fast = false, full = false;
  study->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  study->add_option("--example", example, "polynomial | trig");
  study->add_option("--k", k, "stress polynomial degree (1 or 2)");
  study->add_option("--mode", mode, "spatial | temporal | single");
  study->add_option("--pattern", pattern, "diagonal-NE | diagonal-NW | crisscross");
  study->add_option("--meshes", meshes, "comma-separated mesh sizes (spatial mode)");
  study->add_option("--dts", dts, "comma-separated time steps (temporal mode)");
  study->add_option("--dt", dt, "fixed time step (spatial/single mode)");
  study->add_option("--M", M, "fixed mesh size (temporal/single mode)");
  study->add_option("--T", T, "final time");
  study->add_flag("--fast", fast, "reduced-cost k=2 spatial study (dt=2e-4, M<=16)");
  study->add_flag("--full", full, "full-scale runs (M=64 temporal)");
  study->add_option("--out", out, "output directory");
  study->add_option("--format", format, "csv | markdown");
  study->add_option("--vtk-stride", vtk_stride, "write VTK snapshots every n steps (0 = off)");

  auto* mesh_cmd = app.add_subcommand("mesh", "Write a uniform mesh as legacy VTK");
  int mesh_M = 4;
  std::string mesh_pattern = "diagonal-NE", mesh_out = "mesh.vtk";
  mesh_cmd->add_option("--M", mesh_M, "squares per side");
  mesh_cmd->add_option("--pattern", mesh_pattern, "diagonal-NE | diagonal-NW | crisscross");
  mesh_cmd->add_option("--out", mesh_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*mesh_cmd) {
      const auto mesh = wgmax::build_uniform_mesh(mesh_M, wgmax::parse_pattern(mesh_pattern));
      wgmax::write_vtk(mesh_out, mesh);
      const auto stats = wgmax::mesh_stats(mesh);
      std::cout << "cells=" << mesh.num_cells() << " edges=" << mesh.num_edges() << " vertices=" << mesh.num_vertices()
                << " h=" << stats.h << " min_angle=" << stats.min_angle << '\n';
      return 0;
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    auto add = [&](const char* key, const std::string& v) {
      if (!v.empty()) overrides.emplace_back(key, v);
    };
    add("example", example);
    add("mode", mode);
    add("pattern", pattern);
    add("out", out);
    add("format", format);
    add("meshes", meshes);
    add("dts", dts);
    if (k != 0) overrides.emplace_back("k", std::to_string(k));
    if (M != 0) overrides.emplace_back("M", std::to_string(M));
    auto num = [](double x) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      return std::string(buf);
    };
    if (dt != 0.0) overrides.emplace_back("dt", num(dt));
    if (T != 0.0) overrides.emplace_back("T", num(T));
    if (vtk_stride >= 0) overrides.emplace_back("vtk_stride", std::to_string(vtk_stride));
    return run_study_command(config_path, overrides, fast, full);
  } catch (const wgmax::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}
