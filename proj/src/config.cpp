#include "spdc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "spdc/error.hpp"
#include "spdc/units.hpp"

namespace spdc {
namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ConfigError(message);
  throw ConfigError(message, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) fail(node, "'" + where + "' must be a mapping");
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                const std::string& where) {
  require_map(map, where);
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string key = it->first.as<std::string>();
    if (!allowed.count(key)) {
      fail(it->first, "unknown key '" + key + "' in " + (where.empty() ? "top level" : where));
    }
  }
}

YAML::Node required(const YAML::Node& parent, const std::string& key, const std::string& where) {
  const YAML::Node n = parent[key];
  if (!n) fail(parent, "missing required key '" + key + "' in " + where);
  return n;
}

std::string scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, "'" + key + "' must be a scalar");
  return n.Scalar();
}

double quantity(const YAML::Node& n, Dimension d, const std::string& key,
                bool allow_infinite = false) {
  try {
    return parse_quantity(scalar(n, key), d, allow_infinite);
  } catch (const DomainError& e) {
    fail(n, key + ": " + e.what());
  }
}

int integer(const YAML::Node& n, const std::string& key) {
  const std::string s = scalar(n, key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    fail(n, key + ": '" + s + "' is not an integer");
  }
  if (used != s.size()) fail(n, key + ": '" + s + "' is not an integer");
  return static_cast<int>(v);
}

double number(const YAML::Node& n, const std::string& key) {
  const std::string s = scalar(n, key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(n, key + ": '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(v)) fail(n, key + ": '" + s + "' is not a number");
  return v;
}

ModelSpec parse_model(const YAML::Node& n, const std::string& key) {
  ModelSpec spec;
  if (n.IsScalar()) {
    spec.name = n.Scalar();
    try {
      spec.model = builtin_model(spec.name);
    } catch (const DomainError& e) {
      fail(n, key + ": " + e.what());
    }
    return spec;
  }
  check_keys(n, {"name", "coefficients", "valid_range"}, key);
  spec.is_inline = true;
  spec.name = scalar(required(n, "name", key), key + ".name");
  spec.model.name = spec.name;
  const YAML::Node coeffs = required(n, "coefficients", key);
  if (!coeffs.IsSequence()) fail(coeffs, key + ".coefficients must be a list");
  for (const auto& c : coeffs) spec.model.coefficients.push_back(number(c, key + ".coefficients"));
  const YAML::Node range = required(n, "valid_range", key);
  if (!range.IsSequence() || range.size() != 2) {
    fail(range, key + ".valid_range must be a two-element list");
  }
  // Kept in micrometres so the echo reproduces the bits.
  auto micrometres = [&](const YAML::Node& r) {
    const std::string s = scalar(r, key + ".valid_range");
    const double metres = quantity(r, Dimension::length, key + ".valid_range");
    const std::size_t pos = s.find_first_not_of("+-0123456789.eE");
    const std::string unit = pos == std::string::npos ? "" : s.substr(pos);
    if (unit.find("um") != std::string::npos || unit.find("\xC2\xB5m") != std::string::npos) {
      return std::stod(s.substr(0, pos));
    }
    return metres * 1e6;
  };
  spec.model.min_wavelength_um = micrometres(range[0]);
  spec.model.max_wavelength_um = micrometres(range[1]);
  try {
    spec.model.validate();
  } catch (const DomainError& e) {
    fail(n, key + ": " + e.what());
  }
  return spec;
}

BeamGeometry parse_beam(const YAML::Node& n, const std::string& key, bool pump) {
  if (pump) {
    check_keys(n, {"waist", "focal_shift", "spectrum", "pulse_duration"}, key);
  } else {
    check_keys(n, {"waist", "focal_shift"}, key);
  }
  BeamGeometry b;
  b.waist = quantity(required(n, "waist", key), Dimension::length, key + ".waist");
  if (n["focal_shift"]) {
    b.focal_shift = quantity(n["focal_shift"], Dimension::length, key + ".focal_shift");
  }
  if (!(b.waist > 0.0)) fail(n["waist"], key + ".waist must be positive");
  return b;
}

ScanAxis parse_axis(const YAML::Node& n) {
  check_keys(n, {"variable", "start", "stop", "count"}, "scan entry");
  ScanAxis a;
  const YAML::Node var = required(n, "variable", "scan entry");
  try {
    a.variable = parse_scan_variable(scalar(var, "variable"));
  } catch (const DomainError& e) {
    fail(var, e.what());
  }
  a.start = quantity(required(n, "start", "scan entry"), Dimension::length, "scan.start");
  a.stop = quantity(required(n, "stop", "scan entry"), Dimension::length, "scan.stop");
  a.count = integer(required(n, "count", "scan entry"), "scan.count");
  try {
    a.validate();
  } catch (const DomainError& e) {
    fail(n, e.what());
  }
  return a;
}

void parse_jsa_axis(const YAML::Node& n, const std::string& key, double& start, double& stop,
                    int& count) {
  check_keys(n, {"start", "stop", "count"}, key);
  start = quantity(required(n, "start", key), Dimension::angular_frequency, key + ".start");
  stop = quantity(required(n, "stop", key), Dimension::angular_frequency, key + ".stop");
  count = integer(required(n, "count", key), key + ".count");
}

LGIndex parse_mode(const YAML::Node& n, const std::string& key) {
  try {
    return parse_lg_index(scalar(n, key));
  } catch (const DomainError& e) {
    fail(n, key + ": " + e.what());
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string q(double v, Dimension d) { return format_quantity(v, d); }

void echo_model(std::ostringstream& os, const char* key, const ModelSpec& m) {
  if (!m.is_inline) {
    os << "  " << key << ": " << m.name << "\n";
    return;
  }
  os << "  " << key << ":\n    name: " << m.name << "\n    coefficients: [";
  for (std::size_t k = 0; k < m.model.coefficients.size(); ++k) {
    os << (k ? ", " : "") << g17(m.model.coefficients[k]);
  }
  os << "]\n    valid_range: [" << g17(m.model.min_wavelength_um) << " um, "
     << g17(m.model.max_wavelength_um) << " um]\n";
}

}  // namespace

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("YAML syntax error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("configuration is empty");
  check_keys(root,
             {"crystal", "dispersion", "pump", "signal", "idler", "modes", "detuning", "scan",
              "band", "objective", "search", "mode_block", "jsa", "oracle", "normalize"},
             "");
  RunConfig c;

  const YAML::Node crystal = required(root, "crystal", "top level");
  check_keys(crystal, {"length", "pump_wavelength", "signal_wavelength", "poling_period"},
             "crystal");
  c.length = quantity(required(crystal, "length", "crystal"), Dimension::length, "crystal.length");
  c.pump_wavelength = quantity(required(crystal, "pump_wavelength", "crystal"), Dimension::length,
                               "crystal.pump_wavelength");
  c.signal_wavelength = quantity(required(crystal, "signal_wavelength", "crystal"),
                                 Dimension::length, "crystal.signal_wavelength");
  if (const YAML::Node p = crystal["poling_period"]) {
    if (scalar(p, "crystal.poling_period") != "auto") {
      c.poling_period = quantity(p, Dimension::length, "crystal.poling_period", true);
    }
  }

  if (const YAML::Node d = root["dispersion"]) {
    check_keys(d, {"pump", "signal", "idler"}, "dispersion");
    if (d["pump"]) c.pump_model = parse_model(d["pump"], "dispersion.pump");
    if (d["signal"]) c.signal_model = parse_model(d["signal"], "dispersion.signal");
    if (d["idler"]) c.idler_model = parse_model(d["idler"], "dispersion.idler");
  }
  for (ModelSpec* m : {&c.pump_model, &c.signal_model, &c.idler_model}) {
    if (!m->is_inline && m->model.coefficients.empty()) m->model = builtin_model(m->name);
  }

  const YAML::Node pump = required(root, "pump", "top level");
  c.pump = parse_beam(pump, "pump", true);
  c.signal = parse_beam(required(root, "signal", "top level"), "signal", false);
  c.idler = parse_beam(required(root, "idler", "top level"), "idler", false);
  if (const YAML::Node s = pump["spectrum"]) {
    const std::string kind = scalar(s, "pump.spectrum");
    if (kind == "cw") {
      c.spectrum = PumpSpectrum::continuous();
      if (pump["pulse_duration"]) fail(pump["pulse_duration"], "cw pump takes no pulse_duration");
    } else if (kind == "pulsed") {
      const YAML::Node t = required(pump, "pulse_duration", "pump");
      c.spectrum = PumpSpectrum::pulsed(quantity(t, Dimension::time, "pump.pulse_duration"));
      if (!(c.spectrum.pulse_duration > 0.0)) fail(t, "pump.pulse_duration must be positive");
    } else {
      fail(s, "pump.spectrum must be 'cw' or 'pulsed'");
    }
  } else if (pump["pulse_duration"]) {
    fail(pump["pulse_duration"], "pulse_duration requires 'spectrum: pulsed'");
  }

  if (const YAML::Node m = root["modes"]) {
    check_keys(m, {"signal", "idler"}, "modes");
    if (m["signal"]) c.modes.signal = parse_mode(m["signal"], "modes.signal");
    if (m["idler"]) c.modes.idler = parse_mode(m["idler"], "modes.idler");
  }

  if (const YAML::Node d = root["detuning"]) {
    check_keys(d, {"signal_wavelength", "signal", "idler"}, "detuning");
    if (d["signal_wavelength"]) {
      if (d["signal"] || d["idler"]) {
        fail(d, "detuning takes either signal_wavelength or signal/idler offsets");
      }
      c.detuning_wavelength =
          quantity(d["signal_wavelength"], Dimension::length, "detuning.signal_wavelength");
    } else {
      DetuningPair p;
      p.signal = quantity(required(d, "signal", "detuning"), Dimension::angular_frequency,
                          "detuning.signal");
      p.idler = quantity(required(d, "idler", "detuning"), Dimension::angular_frequency,
                         "detuning.idler");
      c.detuning = p;
    }
  }

  if (const YAML::Node s = root["scan"]) {
    if (!s.IsSequence()) fail(s, "'scan' must be a list of axes");
    for (const auto& axis : s) c.scan.push_back(parse_axis(axis));
  }

  if (const YAML::Node b = root["band"]) {
    check_keys(b, {"start", "stop", "points", "tolerance"}, "band");
    if (b["start"]) c.band.band_start = quantity(b["start"], Dimension::length, "band.start");
    if (b["stop"]) c.band.band_stop = quantity(b["stop"], Dimension::length, "band.stop");
    if (b["points"]) c.band.points = integer(b["points"], "band.points");
    if (b["tolerance"]) c.band.tolerance = quantity(b["tolerance"], Dimension::length, "band.tolerance");
    if (!(c.band.band_start < c.band.band_stop)) fail(b, "band needs start < stop");
    if (c.band.points < 201) fail(b, "band needs at least 201 points");
    if (!(c.band.tolerance > 0.0)) fail(b, "band.tolerance must be positive");
  }
  c.objective.brightness = c.band;

  if (const YAML::Node o = root["objective"]) {
    check_keys(o, {"kind", "wavelength"}, "objective");
    const YAML::Node kind = required(o, "kind", "objective");
    const std::string k = scalar(kind, "objective.kind");
    if (k == "brightness") {
      c.objective.kind = FocusObjective::Kind::brightness;
      if (o["wavelength"]) fail(o["wavelength"], "brightness objective takes no wavelength");
    } else if (k == "fixed_wavelength") {
      c.objective.kind = FocusObjective::Kind::fixed_wavelength;
      c.objective.wavelength =
          quantity(required(o, "wavelength", "objective"), Dimension::length, "objective.wavelength");
    } else {
      fail(kind, "objective.kind must be 'brightness' or 'fixed_wavelength'");
    }
  }

  if (const YAML::Node s = root["search"]) {
    check_keys(s, {"start", "stop", "points", "tolerance"}, "search");
    if (s["start"]) c.search.start = quantity(s["start"], Dimension::length, "search.start");
    if (s["stop"]) c.search.stop = quantity(s["stop"], Dimension::length, "search.stop");
    if (s["points"]) c.search.points = integer(s["points"], "search.points");
    if (s["tolerance"]) c.search.tolerance = quantity(s["tolerance"], Dimension::length, "search.tolerance");
    if (!(c.search.start < c.search.stop) || c.search.points < 3 || !(c.search.tolerance > 0.0)) {
      fail(s, "search needs start < stop, points >= 3 and a positive tolerance");
    }
  }

  if (const YAML::Node m = root["mode_block"]) {
    check_keys(m, {"max_p", "max_l"}, "mode_block");
    if (m["max_p"]) c.max_p = integer(m["max_p"], "mode_block.max_p");
    if (m["max_l"]) c.max_l = integer(m["max_l"], "mode_block.max_l");
    if (c.max_p < 0 || c.max_l < 0) fail(m, "mode_block bounds must be non-negative");
  }

  if (const YAML::Node j = root["jsa"]) {
    check_keys(j, {"signal", "idler"}, "jsa");
    JsaGridSpec spec;
    parse_jsa_axis(required(j, "signal", "jsa"), "jsa.signal", spec.signal_start, spec.signal_stop,
                   spec.signal_count);
    parse_jsa_axis(required(j, "idler", "jsa"), "jsa.idler", spec.idler_start, spec.idler_stop,
                   spec.idler_count);
    try {
      spec.validate();
    } catch (const DomainError& e) {
      fail(j, e.what());
    }
    c.jsa = spec;
  }

  if (const YAML::Node o = root["oracle"]) {
    check_keys(o, {"radial_nodes", "azimuthal_nodes", "z_nodes", "radial_cutoff"}, "oracle");
    if (o["radial_nodes"]) c.oracle.radial_nodes = integer(o["radial_nodes"], "oracle.radial_nodes");
    if (o["azimuthal_nodes"]) {
      c.oracle.azimuthal_nodes = integer(o["azimuthal_nodes"], "oracle.azimuthal_nodes");
    }
    if (o["z_nodes"]) c.oracle.z_nodes = integer(o["z_nodes"], "oracle.z_nodes");
    if (const YAML::Node r = o["radial_cutoff"]) {
      if (scalar(r, "oracle.radial_cutoff") != "auto") {
        c.oracle.radial_cutoff = quantity(r, Dimension::wavenumber, "oracle.radial_cutoff");
      }
    }
    if (c.oracle.radial_nodes < 8 || c.oracle.azimuthal_nodes < 8 || c.oracle.z_nodes < 8) {
      fail(o, "oracle node counts must be >= 8");
    }
  }

  if (const YAML::Node n = root["normalize"]) {
    const std::string v = scalar(n, "normalize");
    if (v == "max") {
      c.normalize = Normalize::max;
    } else if (v == "none") {
      c.normalize = Normalize::none;
    } else {
      fail(n, "normalize must be 'max' or 'none'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

SpdcSetup RunConfig::build_setup() const {
  try {
    CrystalConfig crystal = CrystalConfig::from_pump_signal(length, pump_wavelength, signal_wavelength);
    if (poling_period) crystal.poling_period = *poling_period;
    return SpdcSetup(crystal, {pump_model.model, signal_model.model, idler_model.model}, pump,
                     signal, idler, spectrum);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid setup: ") + e.what());
  }
}

DetuningPair RunConfig::resolved_detuning(const SpdcSetup& setup) const {
  if (detuning) return *detuning;
  if (detuning_wavelength) return setup.detuning_at_signal_wavelength(*detuning_wavelength);
  return {};
}

JsaGridSpec RunConfig::resolved_jsa() const {
  if (jsa) return *jsa;
  if (spectrum.is_cw()) throw ConfigError("JSA grid requires 'spectrum: pulsed'");
  return JsaGridSpec::symmetric(11.0 / spectrum.pulse_duration, 201);
}

std::string echo_config(const RunConfig& c) {
  using D = Dimension;
  std::ostringstream os;
  os << "crystal:\n"
     << "  length: " << q(c.length, D::length) << "\n"
     << "  pump_wavelength: " << q(c.pump_wavelength, D::length) << "\n"
     << "  signal_wavelength: " << q(c.signal_wavelength, D::length) << "\n"
     << "  poling_period: " << (c.poling_period ? q(*c.poling_period, D::length) : "auto")
     << "\n";
  os << "dispersion:\n";
  echo_model(os, "pump", c.pump_model);
  echo_model(os, "signal", c.signal_model);
  echo_model(os, "idler", c.idler_model);
  os << "pump:\n  waist: " << q(c.pump.waist, D::length)
     << "\n  focal_shift: " << q(c.pump.focal_shift, D::length) << "\n";
  if (c.spectrum.is_cw()) {
    os << "  spectrum: cw\n";
  } else {
    os << "  spectrum: pulsed\n  pulse_duration: " << q(c.spectrum.pulse_duration, D::time)
       << "\n";
  }
  for (const auto& [name, beam] : {std::pair{"signal", c.signal}, std::pair{"idler", c.idler}}) {
    os << name << ":\n  waist: " << q(beam.waist, D::length)
       << "\n  focal_shift: " << q(beam.focal_shift, D::length) << "\n";
  }
  os << "modes:\n  signal: \"" << to_string(c.modes.signal) << "\"\n  idler: \""
     << to_string(c.modes.idler) << "\"\n";
  if (c.detuning) {
    os << "detuning:\n  signal: " << q(c.detuning->signal, D::angular_frequency)
       << "\n  idler: " << q(c.detuning->idler, D::angular_frequency) << "\n";
  } else if (c.detuning_wavelength) {
    os << "detuning:\n  signal_wavelength: " << q(*c.detuning_wavelength, D::length) << "\n";
  }
  if (!c.scan.empty()) {
    os << "scan:\n";
    for (const auto& a : c.scan) {
      os << "  - variable: " << to_string(a.variable) << "\n    start: " << q(a.start, D::length)
         << "\n    stop: " << q(a.stop, D::length) << "\n    count: " << a.count << "\n";
    }
  }
  os << "band:\n  start: " << q(c.band.band_start, D::length)
     << "\n  stop: " << q(c.band.band_stop, D::length) << "\n  points: " << c.band.points
     << "\n  tolerance: " << q(c.band.tolerance, D::length) << "\n";
  if (c.objective.kind == FocusObjective::Kind::brightness) {
    os << "objective:\n  kind: brightness\n";
  } else {
    os << "objective:\n  kind: fixed_wavelength\n  wavelength: "
       << q(c.objective.wavelength, D::length) << "\n";
  }
  os << "search:\n  start: " << q(c.search.start, D::length)
     << "\n  stop: " << q(c.search.stop, D::length) << "\n  points: " << c.search.points
     << "\n  tolerance: " << q(c.search.tolerance, D::length) << "\n";
  os << "mode_block:\n  max_p: " << c.max_p << "\n  max_l: " << c.max_l << "\n";
  if (c.jsa) {
    const JsaGridSpec& j = *c.jsa;
    os << "jsa:\n  signal:\n    start: " << q(j.signal_start, D::angular_frequency)
       << "\n    stop: " << q(j.signal_stop, D::angular_frequency)
       << "\n    count: " << j.signal_count << "\n  idler:\n    start: "
       << q(j.idler_start, D::angular_frequency)
       << "\n    stop: " << q(j.idler_stop, D::angular_frequency)
       << "\n    count: " << j.idler_count << "\n";
  }
  os << "oracle:\n  radial_nodes: " << c.oracle.radial_nodes
     << "\n  azimuthal_nodes: " << c.oracle.azimuthal_nodes << "\n  z_nodes: " << c.oracle.z_nodes
     << "\n  radial_cutoff: "
     << (c.oracle.radial_cutoff > 0.0 ? q(c.oracle.radial_cutoff, D::wavenumber) : "auto") << "\n";
  os << "normalize: " << (c.normalize == Normalize::max ? "max" : "none") << "\n";
  return os.str();
}

}  // namespace spdc
