#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dslit/bragg.hpp"
#include "dslit/idt.hpp"
#include "dslit/spectra.hpp"
#include "dslit/transmon.hpp"

namespace dslit::config {

struct Sweep {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  // start, start + step, ..., stop (inclusive when stop lands on the grid).
  std::vector<double> grid() const;
};

struct DriveSpec {
  double conversion = 2.0;            // phonons per power unit
  std::vector<double> powers{0.15, 0.5, 1.0};
};

// Everything a run needs. Frequencies in Hz, lengths in m, currents in A.
struct ParamsDocument {
  idt::IdtParams idt;
  idt::QubitEnvironment environment;
  bragg::MirrorParams mirror;
  bragg::CavitySpec cavity;
  double stopband_threshold = 0.9;
  transmon::TransmonParams transmon;
  bragg::ModeTable modes;
  spectra::NumberSplitParams number_split;
  DriveSpec drive;
  Sweep idt_sweep{3.8e9, 4.8e9, 0.1e6};
  Sweep crossing_sweep{4.20e9, 4.33e9, 0.1e6};   // qubit frequency, mapped to coil current
  Sweep spectrum_sweep{4.309e9, 4.3205e9, 10e3};
};

// Strict: unknown keys, wrong types and bad units raise ConfigError.
ParamsDocument parse_params(const nlohmann::json& doc);
ParamsDocument load_params(const std::filesystem::path& path);

// Text of the shipped reference configuration (config/reference.json).
const std::string& reference_params_json();
ParamsDocument reference_params();

}  // namespace dslit::config
