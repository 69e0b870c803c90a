#pragma once

#include <map>
#include <string>
#include <vector>

#include "ebk/wr_driver.hpp"

namespace ebk {

/// Flat key=value experiment description; see parse_config / validate for
/// the accepted keys and ranges.
struct ExperimentConfig {
  std::string problem = "burgers";  // burgers | bratu | heat
  int n = 500;                      // burgers interior nodes / bratu nodes per axis
  double nu = 3e-4;                 // burgers viscosity
  int nx = 20, ny = 20, nz = 20;    // heat grid
  double horizon = 0.5;
  int windows = 1;

  std::string method = "wr-ebk";  // wr-ebk | ros2 | reference
  double tol = 1e-3;
  std::string stop_mode = "absolute";   // absolute | relative
  std::string inner_stop = "absolute";  // absolute | scaled
  int m = 7;
  int n_s = 100;
  int krylov_dim = 10;
  double gamma = 0.0;  // <= 0: window/10
  long steps = 320;    // ros2 steps per window
  double ref_target = 1e-8;
  bool compute_error = true;
  unsigned seed = 0;  // reserved for randomized diagnostics; recorded only

  std::string dump_matrix;  // Matrix Market dump of A(initial anchor)
  std::string snapshot;     // plain-text grid dump of the final state

  std::string label() const;
  void set(const std::string& key, const std::string& value);
  void validate() const;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct ReportRow {
  std::string label;
  long iterations = 0;  // outer iterations or time steps
  long lus = 0;
  long lu_applications = 0;
  long matvecs = 0;  // matvecs (wr-ebk) or fevals (ros2)
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  bool failed = false;
  std::string note;
};

/// Runs one experiment.  When out_dir is nonempty, per-iteration trace files
/// (and any configured dumps) are written there.  Solver failures are
/// captured in the row, not thrown.
ReportRow run_experiment(const ExperimentConfig& config, const std::string& out_dir = "");

/// csv: full columns, one row per line.  markdown: the five-column table
/// layout of the benchmark reports.
std::string emit(const std::vector<ReportRow>& rows, const std::string& format);

/// Canonical run lists per problem.
std::vector<ExperimentConfig> bench_suite(const std::string& name);

}  // namespace ebk
