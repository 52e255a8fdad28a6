#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dslit/bragg.hpp"
#include "dslit/transmon.hpp"

namespace dslit::jc {

struct SystemModel {
  transmon::TransmonParams transmon;
  bragg::ModeTable modes;

  // Couplings finite and mode frequencies pairwise distinct.
  void validate() const;
};

// Single-excitation block of the multimode Jaynes-Cummings Hamiltonian in Hz:
// mode frequencies on the diagonal, f_q last, g_m in the last row and column.
Eigen::MatrixXd build_single_excitation_matrix(double f_q, const bragg::ModeTable& modes);

// Ascending eigenvalues of a real symmetric matrix. Throws ContractError if
// the input is not symmetric.
std::vector<double> eigenfrequencies(const Eigen::MatrixXd& matrix);

struct CrossingSpectrum {
  std::vector<double> currents;
  std::vector<std::vector<double>> branches;  // one ascending row per current
};

CrossingSpectrum crossing_spectrum(const std::vector<double>& currents, const SystemModel& model);

struct DispersiveShift {
  double chi = 0.0;        // Hz; a phonon moves the qubit line by 2 chi
  double detuning = 0.0;   // Delta_m = f_q - f_m
  double coupling = 0.0;   // g_m
};

// chi = g^2 (1/Delta - 1/(Delta + alpha)).
double dispersive_shift_perturbative(double g, double delta, double alpha);

// Brute-force chi from the truncated (multilevel transmon) x (one mode)
// Hamiltonian in the frame rotating at the mode frequency.
double dispersive_shift_numeric(double g, double delta, double alpha, int transmon_levels = 3,
                                int fock_cutoff = 15);

struct StarkShifts {
  std::vector<DispersiveShift> shifts;  // same order as the model's modes
  std::vector<std::string> warnings;
};

inline constexpr double kDispersiveErrorRatio = 3.0;
inline constexpr double kDispersiveWarnRatio = 8.0;

// Per-mode chi at qubit frequency f_q. Throws DispersiveRegimeError naming the
// first mode with |Delta_m| <= 3 g_m; warns below 8.
StarkShifts total_stark_hamiltonian_shifts(const SystemModel& model, double f_q);

}  // namespace dslit::jc
