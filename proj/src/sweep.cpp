#include "qcap/sweep.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "qcap/channel_io.hpp"

namespace qcap::cli {

std::string format_sig9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::vector<SweepRow> run_sweep(const SweepSettings& settings, ExecMode mode) {
  if (settings.p_from < 0.0 || settings.p_from > settings.p_to || settings.p_to > 1.0)
    throw PreconditionError("sweep: need 0 <= p_from <= p_to <= 1");
  if (settings.steps < 2) throw PreconditionError("sweep: need at least 2 steps");

  // Channels built serially up front so zoo errors surface before any
  // parallel work; the measurement is shared across the family.
  std::vector<channels::QuantumChannel> family(settings.steps);
  std::vector<double> ps(settings.steps);
  for (int i = 0; i < settings.steps; ++i) {
    ps[i] = settings.p_from +
            (settings.p_to - settings.p_from) * i / (settings.steps - 1);
    family[i] = channels::channel_zoo(settings.family, ps[i]);
  }
  const int d_env = static_cast<int>(family[0].kraus.size());
  const measures::MeasurementKrausSet m = resolve_measurement(settings.meas, d_env);

  std::vector<SweepRow> rows(settings.steps);
  const int n = settings.steps;
  auto compute_row = [&](int i) {
    const bounds::BoundReport report =
        bounds::classical_bound_ensemble(family[i], m, 1, settings.cfg, mode);
    SweepRow row;
    row.p = ps[i];
    row.s_max = report.s_max_term;
    row.c_arrow_min = report.correlation_term;
    row.c_bound = report.value;
    row.chi_lower = bounds::holevo_chi_msw(family[i], settings.cfg, mode);
    row.q1_lower = bounds::coherent_information_q1(family[i], settings.cfg, mode);
    row.cea = bounds::entanglement_assisted_capacity(family[i], settings.cfg, mode);
    row.certified = (report.kind == bounds::BoundKind::CertifiedUpperBound);
    return row;
  };
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) rows[i] = compute_row(i);
  } else {
    for (int i = 0; i < n; ++i) rows[i] = compute_row(i);
  }
  return rows;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "p,s_max,c_arrow_min,c_bound,chi_lower,q1_lower,cea,certified\n";
  for (const SweepRow& r : rows) {
    out << format_sig9(r.p) << ',' << format_sig9(r.s_max) << ','
        << format_sig9(r.c_arrow_min) << ',' << format_sig9(r.c_bound) << ','
        << format_sig9(r.chi_lower) << ',' << format_sig9(r.q1_lower) << ','
        << format_sig9(r.cea) << ',' << (r.certified ? '1' : '0') << '\n';
  }
}

void write_json(const std::vector<SweepRow>& rows, const SweepSettings& settings,
                std::ostream& out) {
  nlohmann::json doc;
  doc["config"] = {
      {"channel_family", settings.family},
      {"measurement", settings.meas},
      {"p_from", settings.p_from},
      {"p_to", settings.p_to},
      {"steps", settings.steps},
      {"seed", settings.cfg.seed},
      {"restarts", settings.cfg.restarts},
      {"refinement_rounds", settings.cfg.refinement_rounds},
  };
  const optimize::GridSpec grid = settings.cfg.grid.value_or(optimize::GridSpec{});
  doc["config"]["grid"] = {grid.radial, grid.polar, grid.azimuthal};
  // Values pass through the CSV's 9-significant-digit formatting so both
  // outputs carry numerically identical rows.
  auto sig9 = [](double x) { return std::stod(format_sig9(x)); };
  doc["rows"] = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    doc["rows"].push_back({
        {"p", sig9(r.p)},
        {"s_max", sig9(r.s_max)},
        {"c_arrow_min", sig9(r.c_arrow_min)},
        {"c_bound", sig9(r.c_bound)},
        {"chi_lower", sig9(r.chi_lower)},
        {"q1_lower", sig9(r.q1_lower)},
        {"cea", sig9(r.cea)},
        {"certified", r.certified},
    });
  }
  out << doc.dump(1) << '\n';
}

channels::QuantumChannel resolve_channel(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon != std::string::npos) {
    const std::string name = spec.substr(0, colon);
    const std::string param_text = spec.substr(colon + 1);
    std::size_t consumed = 0;
    double param = 0.0;
    bool numeric = false;
    try {
      param = std::stod(param_text, &consumed);
      numeric = (consumed == param_text.size() && !param_text.empty());
    } catch (const std::exception&) {
      numeric = false;
    }
    if (numeric) return channels::channel_zoo(name, param);
  }
  return channels::read_channel(spec);
}

measures::MeasurementKrausSet resolve_measurement(const std::string& spec, int d_env) {
  measures::MeasurementKrausSet m;
  if (spec == "fig2-x3") {
    m = measures::fig2_measurement(3);
  } else if (spec == "fig2-x4") {
    m = measures::fig2_measurement(4);
  } else if (spec == "trivial") {
    m = measures::trivial_measurement(d_env);
  } else if (spec == "computational") {
    m = measures::computational_measurement(d_env);
  } else {
    m = channels::read_measurement(spec);
  }
  if (m.dim != d_env) {
    std::string msg = "measurement '" + spec + "' has dimension " +
                      std::to_string(m.dim) + " but the channel environment is " +
                      std::to_string(d_env);
    throw DimensionError(msg);
  }
  return m;
}

}  // namespace qcap::cli
