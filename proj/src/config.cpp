#include "dslit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dslit/errors.hpp"
#include "dslit/units.hpp"

namespace dslit::config {

namespace detail {
extern const char* const kReferenceJson;
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("section '" + section + "' must be an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in section '" + section + "'");
  }
}

double quantity(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return units::parse_quantity(v.get<std::string>());
  throw ConfigError(where + ": expected a number or a quantity string");
}

void read(const json& obj, const char* key, const std::string& section, double& out) {
  if (obj.contains(key)) out = quantity(obj.at(key), section + "." + key);
}

void read(const json& obj, const char* key, const std::string& section, int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(section + "." + key + ": expected an integer");
  out = v.get<int>();
}

void read(const json& obj, const char* key, const std::string& section, std::optional<double>& out) {
  if (obj.contains(key)) out = quantity(obj.at(key), section + "." + key);
}

Sweep read_sweep(const json& obj, const std::string& section, Sweep sweep) {
  check_keys(obj, section, {"start", "stop", "step"});
  read(obj, "start", section, sweep.start);
  read(obj, "stop", section, sweep.stop);
  read(obj, "step", section, sweep.step);
  if (!(sweep.step > 0.0) || !(sweep.stop >= sweep.start)) {
    throw ConfigError(section + ": need step > 0 and stop >= start");
  }
  return sweep;
}

bragg::Mode read_mode(const json& obj, std::size_t i) {
  const std::string section = "modes[" + std::to_string(i) + "]";
  check_keys(obj, section, {"freq", "index", "parity", "transverse", "kappa", "g"});
  if (!obj.contains("freq")) throw ConfigError(section + ": freq is required");
  bragg::Mode m;
  read(obj, "freq", section, m.freq);
  read(obj, "index", section, m.longitudinal_index);
  m.parity = m.longitudinal_index % 2 == 0 ? bragg::Parity::Even : bragg::Parity::Odd;
  if (obj.contains("parity")) {
    const std::string p = obj.at("parity").get<std::string>();
    if (p == "even") {
      m.parity = bragg::Parity::Even;
    } else if (p == "odd") {
      m.parity = bragg::Parity::Odd;
    } else {
      throw ConfigError(section + ": parity must be 'even' or 'odd'");
    }
  }
  if (obj.contains("transverse")) {
    if (!obj.at("transverse").is_boolean()) throw ConfigError(section + ": transverse must be a boolean");
    m.transverse = obj.at("transverse").get<bool>();
  }
  read(obj, "kappa", section, m.loss);
  read(obj, "g", section, m.coupling);
  return m;
}

ParamsDocument parse_impl(const json& doc) {
  check_keys(doc, "<root>", {"idt", "environment", "mirror", "cavity", "transmon", "modes",
                             "number_split", "drive", "sweeps"});
  ParamsDocument out;
  if (doc.contains("idt")) {
    const json& s = doc.at("idt");
    check_keys(s, "idt", {"n_periods", "center_freq", "delay", "max_emission", "max_coupling",
                          "sound_speed", "pitch", "half_length", "separation"});
    read(s, "n_periods", "idt", out.idt.n_periods);
    read(s, "center_freq", "idt", out.idt.center_freq);
    read(s, "delay", "idt", out.idt.delay);
    read(s, "max_emission", "idt", out.idt.max_emission);
    read(s, "max_coupling", "idt", out.idt.max_coupling);
    read(s, "sound_speed", "idt", out.idt.sound_speed);
    read(s, "pitch", "idt", out.idt.pitch);
    read(s, "half_length", "idt", out.idt.half_length);
    read(s, "separation", "idt", out.idt.separation);
  }
  if (doc.contains("environment")) {
    const json& s = doc.at("environment");
    check_keys(s, "environment", {"q_internal", "lamb_variant"});
    read(s, "q_internal", "environment", out.environment.q_internal);
    if (s.contains("lamb_variant")) {
      const std::string v = s.at("lamb_variant").get<std::string>();
      if (v == "KramersKronig") {
        out.environment.lamb_variant = idt::LambVariant::KramersKronig;
      } else if (v == "AsWritten") {
        out.environment.lamb_variant = idt::LambVariant::AsWritten;
      } else {
        throw ConfigError("environment.lamb_variant must be 'KramersKronig' or 'AsWritten'");
      }
    }
  }
  if (doc.contains("mirror")) {
    const json& s = doc.at("mirror");
    check_keys(s, "mirror", {"n_strips", "strip_reflectivity", "pitch", "sound_speed"});
    read(s, "n_strips", "mirror", out.mirror.n_strips);
    read(s, "strip_reflectivity", "mirror", out.mirror.strip_reflectivity);
    read(s, "pitch", "mirror", out.mirror.pitch);
    read(s, "sound_speed", "mirror", out.mirror.sound_speed);
  }
  out.cavity.mirrors = out.mirror;
  out.cavity.sound_speed = out.mirror.sound_speed;
  if (doc.contains("cavity")) {
    const json& s = doc.at("cavity");
    check_keys(s, "cavity", {"mirror_separation", "sound_speed", "stopband_threshold"});
    read(s, "mirror_separation", "cavity", out.cavity.mirror_separation);
    read(s, "sound_speed", "cavity", out.cavity.sound_speed);
    read(s, "stopband_threshold", "cavity", out.stopband_threshold);
  }
  if (doc.contains("transmon")) {
    const json& s = doc.at("transmon");
    check_keys(s, "transmon", {"zero_field_freq", "asymmetry", "half_quantum_current", "offset_current",
                               "anharmonicity", "q_internal", "pure_dephasing"});
    read(s, "zero_field_freq", "transmon", out.transmon.zero_field_freq);
    read(s, "asymmetry", "transmon", out.transmon.asymmetry);
    read(s, "half_quantum_current", "transmon", out.transmon.half_quantum_current);
    read(s, "offset_current", "transmon", out.transmon.offset_current);
    read(s, "anharmonicity", "transmon", out.transmon.anharmonicity);
    read(s, "q_internal", "transmon", out.transmon.q_internal);
    read(s, "pure_dephasing", "transmon", out.transmon.pure_dephasing);
  }
  if (doc.contains("modes")) {
    const json& s = doc.at("modes");
    if (!s.is_array()) throw ConfigError("modes must be an array");
    for (std::size_t i = 0; i < s.size(); ++i) out.modes.modes.push_back(read_mode(s.at(i), i));
  }
  if (doc.contains("number_split")) {
    const json& s = doc.at("number_split");
    check_keys(s, "number_split", {"qubit_freq", "qubit_linewidth", "mode_loss", "half_shift", "n_max",
                                   "offset", "amplitude", "pull_per_phonon"});
    auto& ns = out.number_split;
    read(s, "qubit_freq", "number_split", ns.qubit_freq);
    read(s, "qubit_linewidth", "number_split", ns.qubit_linewidth);
    read(s, "mode_loss", "number_split", ns.mode_loss);
    read(s, "half_shift", "number_split", ns.half_shift);
    read(s, "n_max", "number_split", ns.n_max);
    read(s, "offset", "number_split", ns.offset);
    read(s, "amplitude", "number_split", ns.amplitude);
    read(s, "pull_per_phonon", "number_split", ns.pull_per_phonon);
  }
  if (doc.contains("drive")) {
    const json& s = doc.at("drive");
    check_keys(s, "drive", {"conversion", "powers"});
    read(s, "conversion", "drive", out.drive.conversion);
    if (s.contains("powers")) {
      if (!s.at("powers").is_array()) throw ConfigError("drive.powers must be an array");
      out.drive.powers.clear();
      for (const auto& v : s.at("powers")) out.drive.powers.push_back(quantity(v, "drive.powers"));
    }
  }
  if (doc.contains("sweeps")) {
    const json& s = doc.at("sweeps");
    check_keys(s, "sweeps", {"idt", "crossings", "spectrum"});
    if (s.contains("idt")) out.idt_sweep = read_sweep(s.at("idt"), "sweeps.idt", out.idt_sweep);
    if (s.contains("crossings")) {
      out.crossing_sweep = read_sweep(s.at("crossings"), "sweeps.crossings", out.crossing_sweep);
    }
    if (s.contains("spectrum")) {
      out.spectrum_sweep = read_sweep(s.at("spectrum"), "sweeps.spectrum", out.spectrum_sweep);
    }
  }
  return out;
}

}  // namespace

std::vector<double> Sweep::grid() const {
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

ParamsDocument parse_params(const nlohmann::json& doc) {
  ParamsDocument out;
  try {
    out = parse_impl(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  // Domain checks surface as configuration errors.
  try {
    out.idt.validate();
    out.cavity.validate();
    out.transmon.validate();
    out.modes.validate();
    out.number_split.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(out.environment.q_internal > 0.0)) throw ConfigError("environment.q_internal must be > 0");
  if (!(out.stopband_threshold > 0.0 && out.stopband_threshold <= 1.0)) {
    throw ConfigError("cavity.stopband_threshold must lie in (0, 1]");
  }
  if (!(out.drive.conversion > 0.0)) throw ConfigError("drive.conversion must be > 0");
  for (double p : out.drive.powers) {
    if (p < 0.0) throw ConfigError("drive.powers must be >= 0");
  }
  return out;
}

ParamsDocument load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_params(doc);
}

const std::string& reference_params_json() {
  static const std::string text(detail::kReferenceJson);
  return text;
}

ParamsDocument reference_params() { return parse_params(nlohmann::json::parse(reference_params_json())); }

}  // namespace dslit::config
