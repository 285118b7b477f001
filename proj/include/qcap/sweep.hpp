#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qcap/bounds.hpp"

namespace qcap::cli {

using optimize::ExecMode;
using optimize::OptimizerConfig;

// One sweep grid point. c_bound is the certified ensemble (n=1) bound value
// and c_arrow_min the entropy-deficit-penalized minimal correlation term, so
// c_bound = s_max - c_arrow_min holds exactly.
struct SweepRow {
  double p = 0.0;
  double s_max = 0.0;
  double c_arrow_min = 0.0;
  double c_bound = 0.0;
  double chi_lower = 0.0;
  double q1_lower = 0.0;
  double cea = 0.0;
  bool certified = false;
};

struct SweepSettings {
  std::string family = "amplitude-damping";  // zoo family name (no parameter)
  std::string meas = "fig2-x3";
  double p_from = 0.0;
  double p_to = 0.5;
  int steps = 11;
  OptimizerConfig cfg;
};

// Rows at steps equally spaced parameters in [p_from, p_to], ascending.
// Deterministic for a fixed seed regardless of parallelism.
std::vector<SweepRow> run_sweep(const SweepSettings& settings,
                                ExecMode mode = ExecMode::Parallel);

// Fixed header `p,s_max,c_arrow_min,c_bound,chi_lower,q1_lower,cea,certified`;
// numbers carry 9 significant digits, the certified flag is 0/1.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);

// JSON mirror: a `config` echo block plus a `rows` array with the same
// 9-significant-digit values as the CSV.
void write_json(const std::vector<SweepRow>& rows, const SweepSettings& settings,
                std::ostream& out);

// %.9g formatting used by both writers.
std::string format_sig9(double x);

// Channel source: zoo mini-syntax "name:param" (e.g. amplitude-damping:0.25,
// identity:3) or a path to a channel document.
channels::QuantumChannel resolve_channel(const std::string& spec);

// Measurement source: built-ins "fig2-x3", "fig2-x4", "trivial",
// "computational", or a path to a measurement document. d_env fixes the
// dimension of the dimensionless built-ins and is checked against the rest.
measures::MeasurementKrausSet resolve_measurement(const std::string& spec, int d_env);

}  // namespace qcap::cli
