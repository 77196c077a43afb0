#include "wgmax/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "wgmax/evolve.hpp"
#include "wgmax/system.hpp"
#include "wgmax/wgops.hpp"

namespace wgmax {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Number of uniform steps of size dt covering [0, T]; -1 if dt does not divide T.
int step_count(double T, double dt) {
  const double n = T / dt;
  const double r = std::round(n);
  if (r < 1.0 || std::abs(n - r) > 1e-9 * std::max(1.0, r)) return -1;
  return static_cast<int>(r);
}

int thread_count() {
  if (const char* env = std::getenv("WGMAX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

std::string mode_name(StudyMode mode) {
  switch (mode) {
    case StudyMode::Spatial: return "spatial";
    case StudyMode::Temporal: return "temporal";
    case StudyMode::Single: return "single";
  }
  return "?";
}

void apply_setting(StudyConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "example") {
    if (value != "polynomial" && value != "trig") throw ConfigError("example must be polynomial or trig");
    c.example = value;
  } else if (key == "k") {
    c.k = to_int(key, value);
  } else if (key == "mode") {
    if (value == "spatial") c.mode = StudyMode::Spatial;
    else if (value == "temporal") c.mode = StudyMode::Temporal;
    else if (value == "single") c.mode = StudyMode::Single;
    else throw ConfigError("mode must be spatial, temporal or single");
  } else if (key == "meshes") {
    c.meshes.clear();
    for (const auto& s : split_list(value)) c.meshes.push_back(to_int(key, s));
  } else if (key == "dts") {
    c.dts.clear();
    for (const auto& s : split_list(value)) c.dts.push_back(to_double(key, s));
  } else if (key == "dt") {
    c.dt = to_double(key, value);
  } else if (key == "M") {
    c.M = to_int(key, value);
  } else if (key == "pattern") {
    try {
      c.pattern = parse_pattern(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "T") {
    c.T = to_double(key, value);
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "format") {
    if (value != "csv" && value != "markdown") throw ConfigError("format must be csv or markdown");
    c.format = value;
  } else if (key == "vtk_stride") {
    c.vtk_stride = to_int(key, value);
  } else if (key == "fast") {
    c.fast = to_bool(key, value);
  } else if (key == "full") {
    c.full = to_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void load_config_file(StudyConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void finalize_config(StudyConfig& c) {
  if (c.k < 1 || c.k > 2) throw ConfigError("k must be 1 or 2");
  if (!(c.T > 0.0)) throw ConfigError("T must be positive");
  if (c.vtk_stride < 0) throw ConfigError("vtk_stride must be nonnegative");

  const double spatial_dt = c.k == 1 ? 5e-4 : (c.full ? 5e-5 : (c.fast ? 2e-4 : 5e-5));
  switch (c.mode) {
    case StudyMode::Spatial:
      if (c.meshes.empty()) c.meshes = c.fast && c.k == 2 ? std::vector<int>{2, 4, 8, 16} : std::vector<int>{2, 4, 8, 16, 32};
      if (c.dt == 0.0) c.dt = spatial_dt;
      break;
    case StudyMode::Temporal:
      if (c.dts.empty()) c.dts = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
      if (c.M == 0) c.M = c.full ? 64 : 32;
      break;
    case StudyMode::Single:
      if (c.M == 0) c.M = 4;
      if (c.dt == 0.0) c.dt = 0.25;
      break;
  }

  if (c.mode == StudyMode::Spatial) {
    for (size_t i = 0; i < c.meshes.size(); ++i) {
      if (c.meshes[i] < 1) throw ConfigError("mesh sizes must be >= 1");
      if (i > 0 && c.meshes[i] <= c.meshes[i - 1]) throw ConfigError("meshes must be strictly increasing");
    }
  }
  if (c.mode == StudyMode::Temporal) {
    for (size_t i = 0; i < c.dts.size(); ++i) {
      if (!(c.dts[i] > 0.0)) throw ConfigError("time steps must be positive");
      if (i > 0 && c.dts[i] >= c.dts[i - 1]) throw ConfigError("dts must be strictly decreasing");
      if (step_count(c.T, c.dts[i]) < 0) throw ConfigError("dt=" + fmt("%g", c.dts[i]) + " does not divide T");
    }
  } else {
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
    if (step_count(c.T, c.dt) < 0) throw ConfigError("dt=" + fmt("%g", c.dt) + " does not divide T");
  }
  if (c.mode != StudyMode::Spatial && c.M < 1) throw ConfigError("M must be >= 1");
}

std::string echo_config(const StudyConfig& c) {
  std::ostringstream o;
  o << "example=" << c.example << '\n' << "k=" << c.k << '\n' << "mode=" << mode_name(c.mode) << '\n';
  if (c.mode == StudyMode::Spatial) {
    o << "meshes=";
    for (size_t i = 0; i < c.meshes.size(); ++i) o << (i ? "," : "") << c.meshes[i];
    o << '\n' << "dt=" << fmt("%.17g", c.dt) << '\n';
  } else if (c.mode == StudyMode::Temporal) {
    o << "dts=";
    for (size_t i = 0; i < c.dts.size(); ++i) o << (i ? "," : "") << fmt("%.17g", c.dts[i]);
    o << '\n' << "M=" << c.M << '\n';
  } else {
    o << "M=" << c.M << '\n' << "dt=" << fmt("%.17g", c.dt) << '\n';
  }
  o << "pattern=" << pattern_name(c.pattern) << '\n' << "T=" << fmt("%.17g", c.T) << '\n';
  o << "fast=" << (c.fast ? "true" : "false") << '\n' << "full=" << (c.full ? "true" : "false") << '\n';
  return o.str();
}

RunResult run_single(const StudyConfig& config, int M, double dt) {
  const auto start = std::chrono::steady_clock::now();
  const ManufacturedCase mcase = case_by_name(config.example);
  const Mesh mesh = build_uniform_mesh(M, config.pattern);
  const DofLayout layout(mesh, config.k);
  const IsotropicLaw law(1.0, 1.0);
  const SystemBlocks blocks = assemble_blocks(mesh, layout, law);
  const StepMatrix step_matrix = assemble_step_matrix(blocks, layout, dt);
  const int steps = step_count(config.T, dt);
  if (steps < 0) throw ConfigError("dt does not divide T");

  Evolver evolver(mesh, layout, blocks, step_matrix, mcase.force);
  StateVector state = initial_state(mesh, layout, mcase.initial_stress);
  evolver.reset_ledger(state);

  Evolver::Observer observer;
  if (config.vtk_stride > 0) {
    observer = [&](const StateVector& s) {
      if (s.step % config.vtk_stride != 0 && s.step != steps) return;
      const auto path = std::filesystem::path(config.out_dir) /
                        (config.example + "_k" + std::to_string(config.k) + "_M" + std::to_string(M) + "_dt" +
                         fmt("%g", dt) + "_step" + std::to_string(s.step) + ".vtk");
      write_state_vtk(path.string(), mesh, layout, s);
    };
  }
  state = evolver.run(std::move(state), steps, observer);
  // t_N is accumulated as N * dt; pin it to T for the exact-field evaluation
  state.time = config.T;

  RunResult r;
  r.M = M;
  r.dt = dt;
  r.steps = steps;
  r.unknowns = layout.total();
  r.errors = error_norms(state, mcase, mesh, layout, dt);
  r.energy_residual = check_energy_identity(evolver.ledger(), dt);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void append_row(ConvergenceTable& table, std::string resolution, const ErrorReport& e, double ratio) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ConvergenceRow row{std::move(resolution), e.stress_rel, e.strain_scaled_rel, e.velocity_rel, nan, nan, nan};
  if (!table.rows.empty()) {
    const auto& prev = table.rows.back();
    auto order = [ratio](double a, double b) { return (a > 0.0 && b > 0.0) ? observed_order(a, b, ratio) : nan; };
    row.order_stress = order(prev.err_stress, row.err_stress);
    row.order_strain = order(prev.err_strain_scaled, row.err_strain_scaled);
    row.order_velocity = order(prev.err_velocity, row.err_velocity);
  }
  table.rows.push_back(std::move(row));
}

ConvergenceTable run_study(const StudyConfig& input) {
  StudyConfig config = input;
  finalize_config(config);
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::pair<int, double>> jobs;
  switch (config.mode) {
    case StudyMode::Spatial:
      for (int M : config.meshes) jobs.emplace_back(M, config.dt);
      break;
    case StudyMode::Temporal:
      for (double dt : config.dts) jobs.emplace_back(config.M, dt);
      break;
    case StudyMode::Single:
      jobs.emplace_back(config.M, config.dt);
      break;
  }

  std::vector<RunResult> results(jobs.size());
  const int nthreads = std::min<int>(thread_count(), static_cast<int>(jobs.size()));
  if (nthreads <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) results[i] = run_single(config, jobs[i].first, jobs[i].second);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next++; i < jobs.size(); i = next++) {
          try {
            results[i] = run_single(config, jobs[i].first, jobs[i].second);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  ConvergenceTable table;
  table.config_echo = echo_config(config);
  for (size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (config.mode == StudyMode::Temporal) {
      const double ratio = i > 0 ? results[i - 1].dt / r.dt : 2.0;
      append_row(table, fmt("%g", r.dt), r.errors, ratio);
    } else {
      const double ratio = i > 0 ? static_cast<double>(r.M) / results[i - 1].M : 2.0;
      append_row(table, std::to_string(r.M), r.errors, ratio);
    }
  }
  table.runs = std::move(results);
  table.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown report format '" + name + "'");
}

std::string format_report(const ConvergenceTable& table, ReportFormat format) {
  static const char* columns[] = {"resolution",       "err_stress_rel",        "order_stress", "err_strain_scaled_rel",
                                  "order_strain",     "err_velocity_rel",      "order_velocity"};
  auto order = [](double x) { return std::isnan(x) ? std::string("--") : fmt("%.2f", x); };
  auto err = [](double x) { return fmt("%.4e", x); };

  std::ostringstream o;
  if (format == ReportFormat::Csv) {
    for (int i = 0; i < 7; ++i) o << (i ? "," : "") << columns[i];
    o << '\n';
    for (const auto& r : table.rows)
      o << r.resolution << ',' << err(r.err_stress) << ',' << order(r.order_stress) << ','
        << err(r.err_strain_scaled) << ',' << order(r.order_strain) << ',' << err(r.err_velocity) << ','
        << order(r.order_velocity) << '\n';
  } else {
    o << '|';
    for (const auto* c : columns) o << ' ' << c << " |";
    o << "\n|";
    for (int i = 0; i < 7; ++i) o << "---|";
    o << '\n';
    for (const auto& r : table.rows)
      o << "| " << r.resolution << " | " << err(r.err_stress) << " | " << order(r.order_stress) << " | "
        << err(r.err_strain_scaled) << " | " << order(r.order_strain) << " | " << err(r.err_velocity) << " | "
        << order(r.order_velocity) << " |\n";
  }
  return o.str();
}

void emit_report(const ConvergenceTable& table, ReportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << format_report(table, format);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wgmax
