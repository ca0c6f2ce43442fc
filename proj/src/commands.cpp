#include "spdc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdc/csv.hpp"
#include "spdc/error.hpp"
#include "spdc/oracle.hpp"
#include "spdc/units.hpp"
#include "spdc/version.hpp"

namespace spdc {
namespace {

constexpr const char* kBegin = "--- config ---";
constexpr const char* kEnd = "--- end config ---";

const ScanAxis& axis(const RunConfig& c, ScanVariable v, const std::string& command) {
  for (const auto& a : c.scan)
    if (a.variable == v) return a;
  throw ConfigError(command + " needs a scan axis for " + to_string(v));
}

void allow_only(const RunConfig& c, std::initializer_list<ScanVariable> allowed,
                const std::string& command) {
  for (const auto& a : c.scan) {
    if (std::find(allowed.begin(), allowed.end(), a.variable) == allowed.end()) {
      throw ConfigError(std::string("scan axis ") + to_string(a.variable) + " is not used by " +
                        command);
    }
  }
}

CsvTable start_table(const std::string& command, const RunConfig& c, const SpdcSetup& setup) {
  CsvTable t;
  t.comment(std::string("spdc-focal ") + kVersion + " " + command);
  t.comment("resolved poling_period: " + format_quantity(setup.poling_period(), Dimension::length));
  t.comment(kBegin);
  std::string echo = echo_config(c);
  if (!echo.empty() && echo.back() == '\n') echo.pop_back();
  t.comment(echo);
  t.comment(kEnd);
  return t;
}

bool normalized(const RunConfig& c) { return c.normalize == Normalize::max; }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string optimum_text(const OptimumPoint& o) {
  std::ostringstream os;
  os << "optimum at";
  for (double x : o.location) os << " " << format_number(x);
  os << " value " << format_number(o.value) << (o.refined ? " (refined)" : " (grid point)");
  return os.str();
}

std::string map_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::z_s, ScanVariable::z_i}, "map");
  const EfficiencyMap m = efficiency_map(s, axis(c, ScanVariable::z_s, "map"),
                                         axis(c, ScanVariable::z_i, "map"), c.modes,
                                         c.resolved_detuning(s), p);
  CsvTable t = start_table("map", c, s);
  t.comment(optimum_text(m.optimum));
  if (normalized(c)) {
    t.header({"z_s_m", "z_i_m", "probability", "normalized"});
  } else {
    t.header({"z_s_m", "z_i_m", "probability"});
  }
  const std::size_t ni = m.z_i.size();
  for (std::size_t k = 0; k < m.probability.size(); ++k) {
    std::vector<double> row{m.z_s[k / ni], m.z_i[k % ni], m.probability[k]};
    if (normalized(c)) row.push_back(m.normalized[k]);
    t.row(row);
  }
  return t.str();
}

std::string focus_scan_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::z_p}, "focus-scan");
  const FocusScan f = pump_focus_scan(s, axis(c, ScanVariable::z_p, "focus-scan"), c.modes,
                                      c.resolved_detuning(s), p);
  CsvTable t = start_table("focus-scan", c, s);
  t.comment(f.fwhm ? "fwhm_m " + format_number(*f.fwhm) : "fwhm_m undefined");
  if (normalized(c)) {
    t.header({"z_p_m", "probability", "normalized"});
  } else {
    t.header({"z_p_m", "probability"});
  }
  for (std::size_t k = 0; k < f.z_p.size(); ++k) {
    std::vector<double> row{f.z_p[k], f.probability[k]};
    if (normalized(c)) row.push_back(f.normalized[k]);
    t.row(row);
  }
  return t.str();
}

std::string spectrum_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::lambda_s}, "spectrum");
  const SpectralResponse r =
      spectral_response(s, c.modes, axis(c, ScanVariable::lambda_s, "spectrum"), p);
  CsvTable t = start_table("spectrum", c, s);
  t.comment("peak_wavelength_m " + format_number(r.peak_wavelength) + " peak_value " +
            format_number(r.peak_value));
  if (normalized(c)) {
    t.header({"lambda_s_m", "probability", "normalized"});
  } else {
    t.header({"lambda_s_m", "probability"});
  }
  for (std::size_t k = 0; k < r.wavelength.size(); ++k) {
    std::vector<double> row{r.wavelength[k], r.probability[k]};
    if (normalized(c)) row.push_back(r.normalized[k]);
    t.row(row);
  }
  return t.str();
}

std::string brightness_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::z_p, ScanVariable::z_s, ScanVariable::z_i, ScanVariable::z_si},
             "brightness");
  if (c.scan.size() > 1) throw ConfigError("brightness takes at most one scan axis");
  std::vector<double> shifts{0.0};
  if (!c.scan.empty()) shifts = c.scan.front().values();
  std::vector<Brightness> out(shifts.size());
  parallel_for(shifts.size(), p, [&](std::size_t k) {
    const SpdcSetup point = c.scan.empty() ? s : apply_shift(s, c.scan.front().variable, shifts[k]);
    out[k] = spectral_brightness(point, c.modes, c.band);
  });
  double peak = 0.0;
  for (const auto& b : out) peak = std::max(peak, b.peak_value);
  CsvTable t = start_table("brightness", c, s);
  std::vector<std::string> cols;
  if (!c.scan.empty()) cols.push_back(std::string(to_string(c.scan.front().variable)) + "_m");
  cols.insert(cols.end(), {"peak_wavelength_m", "peak_value"});
  if (normalized(c)) cols.push_back("normalized");
  cols.push_back("edge");
  t.header(cols);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::vector<std::string> row;
    if (!c.scan.empty()) row.push_back(format_number(shifts[k]));
    row.push_back(format_number(out[k].peak_wavelength));
    row.push_back(format_number(out[k].peak_value));
    if (normalized(c)) row.push_back(format_number(peak > 0.0 ? out[k].peak_value / peak : 0.0));
    row.push_back(flag(out[k].edge));
    t.row(row);
  }
  return t.str();
}

std::string optimize_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::z_p}, "optimize");
  FocusObjective objective = c.objective;
  objective.brightness = c.band;
  const std::vector<FocusPoint> pts = optimal_signal_focus(
      s, axis(c, ScanVariable::z_p, "optimize").values(), c.modes, objective, c.search, p);
  CsvTable t = start_table("optimize", c, s);
  std::vector<std::string> cols{"z_p_m", "z_s_max_m", "value"};
  if (normalized(c)) cols.push_back("normalized");
  cols.insert(cols.end(), {"ok", "status"});
  t.header(cols);
  for (const auto& pt : pts) {
    std::vector<std::string> row{format_number(pt.z_p), format_number(pt.z_s_max),
                                 format_number(pt.value)};
    if (normalized(c)) row.push_back(format_number(pt.normalized));
    std::string status = pt.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    row.push_back(flag(pt.ok));
    row.push_back(status);
    t.row(row);
  }
  return t.str();
}

std::string modes_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {}, "modes");
  const ModeTable m = mode_distribution(s, c.max_p, c.max_l, c.resolved_detuning(s), p);
  const std::vector<double> norm = normalize_by_max(m.probability);
  CsvTable t = start_table("modes", c, s);
  std::vector<std::string> cols{"signal_p", "signal_l", "idler_p", "idler_l", "probability"};
  if (normalized(c)) cols.push_back("normalized");
  t.header(cols);
  const std::size_t n = m.modes.size();
  for (std::size_t k = 0; k < m.probability.size(); ++k) {
    const LGIndex& a = m.modes[k / n];
    const LGIndex& b = m.modes[k % n];
    std::vector<std::string> row{std::to_string(a.p), std::to_string(a.l), std::to_string(b.p),
                                 std::to_string(b.l), format_number(m.probability[k])};
    if (normalized(c)) row.push_back(format_number(norm[k]));
    t.row(row);
  }
  return t.str();
}

std::string purity_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {ScanVariable::z_p, ScanVariable::z_si}, "purity");
  const PurityMap m = purity_map(s, axis(c, ScanVariable::z_p, "purity"),
                                 axis(c, ScanVariable::z_si, "purity"), c.resolved_jsa(), p);
  CsvTable t = start_table("purity", c, s);
  t.comment(optimum_text(m.optimum));
  t.header({"z_p_m", "z_si_m", "purity"});
  const std::size_t nc = m.z_si.size();
  for (std::size_t k = 0; k < m.purity.size(); ++k) {
    t.row(std::vector<double>{m.z_p[k / nc], m.z_si[k % nc], m.purity[k]});
  }
  return t.str();
}

std::string oracle_cmd(const RunConfig& c, const SpdcSetup& s, const ExecutionPolicy& p) {
  allow_only(c, {}, "oracle-check");
  const std::vector<LGIndex> modes = mode_block(c.max_p, c.max_l);
  const DetuningPair d = c.resolved_detuning(s);
  const OracleBlock oracle = brute_force_block(s, modes, modes, d, c.oracle, p);
  const std::size_t n = modes.size();
  std::vector<double> closed(n * n, 0.0);
  parallel_for(n * n, p, [&](std::size_t k) {
    closed[k] = coupling_probability(s, modes[k / n], modes[k % n], d);
  });
  std::vector<double> brute(n * n);
  for (std::size_t k = 0; k < n * n; ++k) brute[k] = std::norm(oracle.values[k]);
  const std::vector<double> cn = normalize_by_max(closed);
  const std::vector<double> bn = normalize_by_max(brute);
  CsvTable t = start_table("oracle-check", c, s);
  t.comment("oracle grid radial " + std::to_string(oracle.grid.radial_nodes) + " azimuthal " +
            std::to_string(oracle.grid.azimuthal_nodes) + " z " +
            std::to_string(oracle.grid.z_nodes) + " relative_change " +
            format_number(oracle.relative_change));
  t.comment("deviation is relative where the closed form exceeds 1e-3 of its maximum, else absolute");
  t.header({"signal_p", "signal_l", "idler_p", "idler_l", "closed_form", "oracle", "deviation"});
  for (std::size_t k = 0; k < n * n; ++k) {
    const double dev = cn[k] > 1e-3 ? std::abs(bn[k] - cn[k]) / cn[k] : std::abs(bn[k] - cn[k]);
    const LGIndex& a = modes[k / n];
    const LGIndex& b = modes[k % n];
    t.row({std::to_string(a.p), std::to_string(a.l), std::to_string(b.p), std::to_string(b.l),
           format_number(cn[k]), format_number(bn[k]), format_number(dev)});
  }
  return t.str();
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"map",   "focus-scan", "spectrum", "brightness",
                                              "optimize", "modes",   "purity",   "oracle-check"};
  return names;
}

std::string run_subcommand(const std::string& name, const RunConfig& config,
                           const ExecutionPolicy& policy) {
  const SpdcSetup setup = config.build_setup();
  if (name == "map") return map_cmd(config, setup, policy);
  if (name == "focus-scan") return focus_scan_cmd(config, setup, policy);
  if (name == "spectrum") return spectrum_cmd(config, setup, policy);
  if (name == "brightness") return brightness_cmd(config, setup, policy);
  if (name == "optimize") return optimize_cmd(config, setup, policy);
  if (name == "modes") return modes_cmd(config, setup, policy);
  if (name == "purity") return purity_cmd(config, setup, policy);
  if (name == "oracle-check") return oracle_cmd(config, setup, policy);
  throw ConfigError("unknown subcommand '" + name + "'");
}

std::string extract_config(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line == std::string("# ") + kBegin) {
      inside = true;
    } else if (line == std::string("# ") + kEnd) {
      return out;
    } else if (inside) {
      out += line.size() >= 2 ? line.substr(2) : std::string();
      out += '\n';
    }
  }
  throw ConfigError("no embedded configuration found");
}

}  // namespace spdc
