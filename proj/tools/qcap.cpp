#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qcap/bounds.hpp"
#include "qcap/channel_io.hpp"
#include "qcap/entropy.hpp"
#include "qcap/params.hpp"
#include "qcap/sweep.hpp"

namespace {

using qcap::cli::format_sig9;
using qcap::optimize::OptimizerConfig;

struct CommonFlags {
  std::uint64_t seed = 42;
  int restarts = 32;
  std::string grid;  // "RxPxA", empty = default
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--seed", flags->seed, "optimizer stream seed")->capture_default_str();
  cmd->add_option("--restarts", flags->restarts, "multistart restart count")
      ->capture_default_str();
  cmd->add_option("--grid", flags->grid,
                  "Bloch certification grid as RADIALxPOLARxAZIMUTHAL (default 60x120x120)");
}

OptimizerConfig make_config(const CommonFlags& flags) {
  OptimizerConfig cfg;
  cfg.seed = flags.seed;
  cfg.restarts = flags.restarts;
  if (!flags.grid.empty()) {
    qcap::optimize::GridSpec spec;
    char x1 = 0, x2 = 0;
    std::istringstream in(flags.grid);
    if (!(in >> spec.radial >> x1 >> spec.polar >> x2 >> spec.azimuthal) || x1 != 'x' ||
        x2 != 'x' || !(in >> std::ws).eof())
      throw qcap::ParseError("--grid expects RADIALxPOLARxAZIMUTHAL, e.g. 60x120x120");
    cfg.grid = spec;
  }
  return cfg;
}

std::string kind_name(qcap::bounds::BoundKind kind) {
  return kind == qcap::bounds::BoundKind::CertifiedUpperBound ? "certified-upper-bound"
                                                              : "heuristic-lower-estimate";
}

std::string matrix_text(const qcap::core::Matrix& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "    [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ", ";
      out << format_sig9(m(r, c).real()) << (m(r, c).imag() < 0 ? "-" : "+")
          << format_sig9(std::abs(m(r, c).imag())) << "i";
    }
    out << "]\n";
  }
  return out.str();
}

int run_bound(const std::string& channel_spec, const std::string& meas_spec,
              const std::string& kind, int terms, const std::string& format,
              const CommonFlags& flags) {
  const qcap::channels::QuantumChannel t = qcap::cli::resolve_channel(channel_spec);
  const qcap::measures::MeasurementKrausSet m =
      qcap::cli::resolve_measurement(meas_spec, static_cast<int>(t.kraus.size()));
  const OptimizerConfig cfg = make_config(flags);

  qcap::bounds::BoundReport report;
  if (kind == "simple") {
    report = qcap::bounds::classical_bound_simple(t, m, cfg);
  } else {
    report = qcap::bounds::classical_bound_ensemble(t, m, terms, cfg);
  }
  const bool certified = report.kind == qcap::bounds::BoundKind::CertifiedUpperBound;

  if (format == "json") {
    nlohmann::json doc;
    doc["channel"] = t.name;
    doc["d_in"] = t.d_in;
    doc["d_out"] = t.d_out;
    doc["d_env"] = static_cast<int>(t.kraus.size());
    doc["measurement"] = m.name;
    doc["bound_kind"] = kind == "simple" ? "simple" : "ensemble";
    doc["terms"] = kind == "simple" ? 1 : terms;
    doc["value"] = report.value;
    doc["kind"] = kind_name(report.kind);
    doc["certified"] = certified;
    doc["s_max_term"] = report.s_max_term;
    doc["correlation_term"] = report.correlation_term;
    doc["grid_resolution"] = report.diagnostics.grid_resolution;
    doc["restart_spread"] = report.diagnostics.restart_spread;
    doc["negative_correlation"] = report.diagnostics.negative_correlation;
    doc["notes"] = report.diagnostics.notes;
    std::cout << doc.dump(1) << '\n';
    return 0;
  }

  std::cout << "channel:     " << t.name << "  (d_in=" << t.d_in << ", d_out=" << t.d_out
            << ", d_env=" << t.kraus.size() << ")\n"
            << "measurement: " << m.name << "  (" << m.kraus.size() << " outcomes on dim "
            << m.dim << ")\n"
            << "bound:       " << (kind == "simple" ? "simple" : "ensemble") << " (terms="
            << (kind == "simple" ? 1 : terms) << ")\n"
            << "value:       " << format_sig9(report.value) << " bits\n"
            << "kind:        " << kind_name(report.kind) << (certified ? " [certified]" : "")
            << "\n"
            << "  s_max term:        " << format_sig9(report.s_max_term) << "\n"
            << "  correlation term:  " << format_sig9(report.correlation_term) << "\n";
  if (!report.diagnostics.grid_resolution.empty())
    std::cout << "  grid:              " << report.diagnostics.grid_resolution << "\n";
  if (report.diagnostics.restart_spread > 0)
    std::cout << "  restart spread:    " << format_sig9(report.diagnostics.restart_spread)
              << "\n";
  if (report.diagnostics.negative_correlation)
    std::cout << "  negative correlation term flagged\n";
  std::cout << "  best input state:\n" << matrix_text(report.diagnostics.best_state.matrix);
  for (const std::string& note : report.diagnostics.notes)
    std::cout << "  note: " << note << "\n";
  return 0;
}

int run_sweep_cmd(const std::string& family, const std::string& meas_spec, double p_from,
                  double p_to, int steps, const std::string& out_path,
                  const std::string& format, const CommonFlags& flags) {
  qcap::cli::SweepSettings settings;
  settings.family = family;
  settings.meas = meas_spec;
  settings.p_from = p_from;
  settings.p_to = p_to;
  settings.steps = steps;
  settings.cfg = make_config(flags);

  const std::vector<qcap::cli::SweepRow> rows = qcap::cli::run_sweep(settings);

  std::ofstream out(out_path);
  if (!out) throw qcap::IoError("cannot open output file: " + out_path);
  if (format == "json") {
    qcap::cli::write_json(rows, settings, out);
  } else {
    qcap::cli::write_csv(rows, out);
  }
  out.flush();
  if (!out.good()) throw qcap::IoError("write failed: " + out_path);
  std::cout << "wrote " << rows.size() << " rows to " << out_path << " (" << format
            << ")\n";
  return 0;
}

int run_certify(const std::string& channel_spec, const std::string& which,
                const CommonFlags& flags) {
  const qcap::channels::QuantumChannel t = qcap::cli::resolve_channel(channel_spec);
  const OptimizerConfig cfg = make_config(flags);
  qcap::bounds::CapacityCertificate cert;
  if (which == "classical") {
    cert = qcap::bounds::max_capacity_certificate_classical(t, cfg);
  } else if (which == "quantum") {
    cert = qcap::bounds::max_quantum_capacity_certificate(t, cfg);
  } else {
    throw qcap::ParseError("certify expects 'classical' or 'quantum', got '" + which + "'");
  }
  const char* verdict =
      cert.verdict == qcap::bounds::CertVerdict::MaximumCapacityPossible
          ? "MaximumCapacityPossible"
          : (cert.verdict == qcap::bounds::CertVerdict::GapCertified ? "GapCertified"
                                                                     : "Indeterminate");
  std::cout << "channel: " << t.name << "\n"
            << "certificate (" << which << "): " << verdict << "\n"
            << "detail: " << cert.detail << "\n"
            << "ppt witness (min partial-transpose eigenvalue): "
            << format_sig9(cert.separability.witness) << "\n"
            << "examined input state:\n"
            << matrix_text(cert.optimal_state.matrix);
  switch (cert.verdict) {
    case qcap::bounds::CertVerdict::MaximumCapacityPossible:
      return 0;
    case qcap::bounds::CertVerdict::GapCertified:
      return 3;
    default:
      return 4;
  }
}

struct Battery {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest residual observed

  void record(double residual, double threshold) {
    ++checks;
    worst = std::max(worst, residual);
    if (!(residual <= threshold)) ++failures;
  }
  void report() const {
    std::cout << (failures == 0 ? "[PASS] " : "[FAIL] ") << name << ": "
              << (checks - failures) << "/" << checks
              << " checks ok, worst residual " << format_sig9(worst) << "\n";
  }
};

int run_selftest(int trials, const CommonFlags& flags, double tolerance, bool tol_set) {
  using namespace qcap;
  const OptimizerConfig cfg = make_config(flags);
  auto threshold = [&](double def) { return tol_set ? tolerance : def; };

  // Koashi–Winter duality battery: the duality itself is the oracle, so any
  // residual is optimizer shortfall.
  Battery kw{"koashi-winter duality"};
  {
    const core::DimensionSplit abc{{2, 2, 2}, {"A", "B", "C"}};
    core::Vector ghz = core::Vector::Zero(8);
    ghz(0) = 1.0 / std::sqrt(2.0);
    ghz(7) = 1.0 / std::sqrt(2.0);
    kw.record(measures::koashi_winter_residual(core::make_pure(ghz), abc, cfg),
              threshold(1e-4));

    core::Rng rng_special(cfg.seed, 101);
    const core::PureState a = core::random_pure(2, rng_special);
    const core::PureState bc = core::random_pure(4, rng_special);
    core::Vector prod(8);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) prod(i * 4 + j) = a.amplitudes(i) * bc.amplitudes(j);
    kw.record(measures::koashi_winter_residual(core::make_pure(prod), abc, cfg),
              threshold(1e-4));

    for (int t = 0; t < trials; ++t) {
      core::Rng rng(cfg.seed, 200 + static_cast<std::uint64_t>(t));
      kw.record(measures::koashi_winter_residual(core::random_pure(8, rng), abc, cfg),
                threshold(1e-2));
    }
  }
  kw.report();

  // Channel invariants: isometry completeness and the Stinespring identity.
  Battery chan{"channel/isometry invariants"};
  for (int t = 0; t < trials; ++t) {
    core::Rng rng(cfg.seed, 400 + static_cast<std::uint64_t>(t));
    const int d_in = 2 + static_cast<int>(rng.next_u64() % 2);
    const int d_out = 2 + static_cast<int>(rng.next_u64() % 2);
    int n_kraus = 1 + static_cast<int>(rng.next_u64() % 4);
    while (d_out * n_kraus < d_in) ++n_kraus;
    const channels::QuantumChannel ch = channels::random_channel(d_in, d_out, n_kraus, rng);
    const channels::StinespringIsometry u = channels::dilate(ch);
    chan.record(core::max_abs(u.matrix.adjoint() * u.matrix -
                              core::Matrix::Identity(d_in, d_in)),
                threshold(1e-9));
    const core::DensityOperator rho = core::random_density(d_in, rng);
    const channels::JointOutput joint = channels::joint_output(ch, rho);
    chan.record(core::max_abs(core::partial_trace(joint.state.matrix, joint.split, {0}) -
                              channels::apply_raw(ch, rho.matrix)),
                threshold(1e-9));
    chan.record(channels::validate(channels::complementary(ch)).completeness_residual,
                threshold(1e-9));
  }
  chan.report();

  // Measure invariants: product states carry no one-way correlations; the
  // E_F estimator stays within its bracket around the two-qubit closed form.
  Battery meas{"measure invariants"};
  {
    const core::DimensionSplit be = core::DimensionSplit::bipartite(2, 2, "B", "E");
    for (int t = 0; t < trials; ++t) {
      core::Rng rng(cfg.seed, 600 + static_cast<std::uint64_t>(t));
      const core::DensityOperator rho_b = core::random_density(2, rng);
      const core::DensityOperator rho_e = core::random_density(2, rng);
      const core::Matrix product = core::tensor(rho_b.matrix, rho_e.matrix);
      const int k = 2 + static_cast<int>(rng.next_u64() % 3);
      core::RealVector params(2 * k * 4);
      for (int i = 0; i < params.size(); ++i) params(i) = rng.gaussian();
      const measures::MeasurementKrausSet m = core::param_to_measurement(params, 2, k);
      meas.record(std::abs(measures::c_arrow_fixed(product, be, m)), threshold(1e-9));

      const core::DensityOperator rho = core::random_density(4, rng);
      const double est = measures::eof_estimate(rho, be, 6, cfg);
      const double closed = measures::eof_two_qubit(rho.matrix);
      meas.record(est - closed, threshold(1e-2));   // estimator gap (from above)
      meas.record(closed - est, threshold(1e-9));   // never below the closed form
    }
  }
  meas.report();

  // Entropy invariants on random bipartite states.
  Battery ent{"entropy invariants"};
  for (int t = 0; t < trials; ++t) {
    core::Rng rng(cfg.seed, 800 + static_cast<std::uint64_t>(t));
    const int d_a = 2 + static_cast<int>(rng.next_u64() % 2);
    const int d_b = 2 + static_cast<int>(rng.next_u64() % 2);
    const core::DimensionSplit split = core::DimensionSplit::bipartite(d_a, d_b);
    const core::DensityOperator rho = core::random_density(d_a * d_b, rng);
    const double s_ab = core::von_neumann_entropy(rho.matrix);
    const double s_a =
        core::von_neumann_entropy(core::partial_trace(rho.matrix, split, {0}));
    const double s_b =
        core::von_neumann_entropy(core::partial_trace(rho.matrix, split, {1}));
    ent.record(s_ab - (s_a + s_b), threshold(1e-9));          // subadditivity
    ent.record(std::abs(s_a - s_b) - s_ab, threshold(1e-9));  // triangle inequality
    ent.record(-s_ab, threshold(1e-9));                       // nonnegativity
    ent.record(s_ab - std::log2(d_a * d_b), threshold(1e-9)); // dimension ceiling
  }
  ent.report();

  const int failures = kw.failures + chan.failures + meas.failures + ent.failures;
  std::cout << (failures == 0 ? "selftest: all batteries passed\n"
                              : "selftest: FAILURES detected\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified single-shot capacity bounds for finite-dimensional quantum channels"};
  app.require_subcommand(1);

  // bound
  CLI::App* bound = app.add_subcommand("bound", "one-channel capacity bound report");
  std::string bound_channel, bound_meas = "fig2-x3", bound_kind = "ensemble";
  std::string bound_format = "text";
  int bound_terms = 1;
  CommonFlags bound_flags;
  bound->add_option("--channel", bound_channel, "zoo spec name:param or channel document path")
      ->required();
  bound->add_option("--meas", bound_meas,
                    "measurement: fig2-x3 | fig2-x4 | trivial | computational | document path")
      ->capture_default_str();
  bound->add_option("--kind", bound_kind, "bound family: ensemble (certified for qubit inputs) | simple")
      ->check(CLI::IsMember({"ensemble", "simple"}))
      ->capture_default_str();
  bound->add_option("--terms", bound_terms, "ensemble size for --kind ensemble")
      ->capture_default_str();
  bound->add_option("--format", bound_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  add_common(bound, &bound_flags);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over a channel family");
  std::string sweep_channel = "amplitude-damping", sweep_meas = "fig2-x3";
  std::string sweep_out, sweep_format = "csv";
  double sweep_from = 0.0, sweep_to = 0.5;
  int sweep_steps = 11;
  CommonFlags sweep_flags;
  sweep->add_option("--channel", sweep_channel, "zoo family name (parameter swept)")
      ->capture_default_str();
  sweep->add_option("--meas", sweep_meas, "measurement spec")->capture_default_str();
  sweep->add_option("--p-from", sweep_from, "sweep start")->capture_default_str();
  sweep->add_option("--p-to", sweep_to, "sweep end")->capture_default_str();
  sweep->add_option("--steps", sweep_steps, "number of grid points")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output file path")->required();
  sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_common(sweep, &sweep_flags);

  // certify
  CLI::App* certify = app.add_subcommand("certify", "maximum-capacity certificates");
  std::string certify_channel, certify_which;
  CommonFlags certify_flags;
  certify->add_option("which", certify_which, "classical | quantum")->required();
  certify->add_option("--channel", certify_channel, "zoo spec or channel document path")
      ->required();
  add_common(certify, &certify_flags);

  // selftest
  CLI::App* selftest = app.add_subcommand("selftest", "property-test batteries");
  int selftest_trials = 20;
  double selftest_tolerance = 0.0;
  CommonFlags selftest_flags;
  CLI::Option* tol_opt = selftest->add_option(
      "--tolerance", selftest_tolerance,
      "override every battery pass threshold (for negative-control runs)");
  selftest->add_option("--trials", selftest_trials, "cases per battery")
      ->capture_default_str();
  add_common(selftest, &selftest_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (bound->parsed())
      return run_bound(bound_channel, bound_meas, bound_kind, bound_terms, bound_format,
                       bound_flags);
    if (sweep->parsed())
      return run_sweep_cmd(sweep_channel, sweep_meas, sweep_from, sweep_to, sweep_steps,
                           sweep_out, sweep_format, sweep_flags);
    if (certify->parsed()) return run_certify(certify_channel, certify_which, certify_flags);
    if (selftest->parsed())
      return run_selftest(selftest_trials, selftest_flags, selftest_tolerance,
                          tol_opt->count() > 0);
  } catch (const qcap::ParseError& e) {
    std::cerr << "error (parse): " << e.what() << "\n";
    return 1;
  } catch (const qcap::IoError& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return 1;
  } catch (const qcap::ValidationError& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 2;
  } catch (const qcap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
