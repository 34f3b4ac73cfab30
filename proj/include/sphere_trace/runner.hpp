#pragma once

#include <iosfwd>
#include <string>

#include "sphere_trace/config.hpp"
#include "sphere_trace/montecarlo.hpp"

namespace sphere_trace {

// series.csv schema: t,estimate,stderr,oracle_trace,oracle_moment with 17
// significant digits; oracle_trace cells are empty when no affine law exists.
void write_series_csv(std::ostream& os, const QuantitySeries& series);

struct CheckReport {
  int points = 0;
  int within = 0;       // |estimate - oracle_moment| <= 3 stderr
  double fraction = 0.0;
  bool pass = false;    // fraction >= 0.95
  double terminal_slope = 0.0;  // finite-difference slope of the moment oracle
};

// Declared statistical criterion: at least 95% of recorded points must lie
// within three standard errors of the exact moment oracle.
CheckReport check_series(const QuantitySeries& series);

struct RunOutcome {
  QuantitySeries series;
  std::string series_path;
  std::string manifest_path;
  CheckReport check;  // populated when requested
  bool checked = false;
};

// Runs the experiment, writes series.csv and manifest.txt under out_dir, and
// optionally snapshots of a single path's final-time field.
RunOutcome run_to_files(const RunConfig& config, bool check);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphere_trace
