#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgmax/mesh.hpp"
#include "wgmax/mms.hpp"

namespace wgmax {

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StudyMode { Spatial, Temporal, Single };

struct StudyConfig {
  std::string example = "polynomial";
  int k = 1;
  StudyMode mode = StudyMode::Spatial;
  std::vector<int> meshes;   // spatial mode resolutions
  std::vector<double> dts;   // temporal mode resolutions
  double dt = 0.0;           // spatial/single fixed time step (0 = default)
  int M = 0;                 // temporal/single fixed mesh (0 = default)
  Pattern pattern = Pattern::DiagonalNE;
  double T = 1.0;
  std::string out_dir = ".";
  std::string format = "csv";
  int vtk_stride = 0;
  bool fast = false;
  bool full = false;         // full-scale resolutions (M = 64 temporal, dt = 5e-5 for k = 2)
};

/// Apply one key=value setting; throws ConfigError on unknown keys or bad values.
void apply_setting(StudyConfig& config, const std::string& key, const std::string& value);
/// Read a flat key=value file ('#' starts a comment).
void load_config_file(StudyConfig& config, const std::string& path);
/// Fill mode-dependent defaults and check invariants; throws ConfigError.
void finalize_config(StudyConfig& config);
/// key=value echo sufficient to reproduce the run.
std::string echo_config(const StudyConfig& config);

std::string mode_name(StudyMode mode);

/// Outcome of one simulation to time T.
struct RunResult {
  int M = 0;
  double dt = 0.0;
  int steps = 0;
  int unknowns = 0;
  ErrorReport errors;
  double energy_residual = 0.0;
  double seconds = 0.0;
};

RunResult run_single(const StudyConfig& config, int M, double dt);

struct ConvergenceRow {
  std::string resolution;
  double err_stress, err_strain_scaled, err_velocity;
  // NaN in the first row
  double order_stress, order_strain, order_velocity;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<RunResult> runs;
  std::string config_echo;
  double wall_seconds = 0.0;
};

/// Append a row, deriving orders from the previous row with the given refinement ratio.
void append_row(ConvergenceTable& table, std::string resolution, const ErrorReport& errors, double ratio);

ConvergenceTable run_study(const StudyConfig& config);

enum class ReportFormat { Csv, Markdown };
ReportFormat parse_format(const std::string& name);
std::string format_report(const ConvergenceTable& table, ReportFormat format);
/// Write the report to `path`; throws std::runtime_error if the file cannot be written.
void emit_report(const ConvergenceTable& table, ReportFormat format, const std::string& path);

}  // namespace wgmax
