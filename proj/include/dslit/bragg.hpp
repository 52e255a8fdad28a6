#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace dslit::bragg {

// Uniform grating of identical weak point reflectors. `pitch` is the grating
// design wavelength lambda_c; reflectors sit lambda_c / 2 apart so the
// first-order Bragg frequency is sound_speed / pitch.
struct MirrorParams {
  int n_strips = 100;
  double strip_reflectivity = 0.035;
  double pitch = 675e-9;
  double sound_speed = 2880.0;

  double bragg_frequency() const { return sound_speed / pitch; }
  void validate() const;
};

struct CavitySpec {
  double mirror_separation = 125e-6;  // L, between the innermost reflectors
  double sound_speed = 2880.0;
  MirrorParams mirrors;

  void validate() const;
};

enum class Parity { Even, Odd };

struct Mode {
  double freq = 0.0;             // Hz
  int longitudinal_index = 0;
  Parity parity = Parity::Even;
  bool transverse = false;
  double loss = 0.0;             // kappa_m, Hz
  double coupling = 0.0;         // g_m, Hz
};

// Confined acoustic modes. Longitudinal modes are stored in ascending
// frequency; transverse modes may be interleaved anywhere.
struct ModeTable {
  std::vector<Mode> modes;

  std::size_t size() const { return modes.size(); }
  bool empty() const { return modes.empty(); }
  std::vector<Mode> longitudinal() const;
  // Throws DomainError when an invariant is violated.
  void validate() const;
};

struct Scattering {
  std::complex<double> r;  // reflection seen from the cavity side
  std::complex<double> t;
};

// Full 2x2 transfer-matrix cascade. Phase convention: waves travel as
// exp(i(omega t - k x)), so a reflection from deeper in the grating lags and
// arg r decreases with frequency inside the stopband. Each strip reflects
// with phase pi (r = -r_s) for a wave arriving from the cavity.
Scattering mirror_scattering(double f, const MirrorParams& m);
std::complex<double> mirror_reflection(double f, const MirrorParams& m);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

struct StopbandResult {
  std::optional<Band> band;  // empty when the grating does not reflect
  double peak_reflectivity = 0.0;
  double peak_frequency = 0.0;
};

// Contiguous interval around the reflectivity maximum where
// |r| >= threshold * max|r|.
StopbandResult stopband(const MirrorParams& m, double threshold);

// Continuous reflection phase (unwrapped from the Bragg frequency outwards).
double reflection_phase(double f, const MirrorParams& m);

// Longitudinal modes with 2 pi f (2L)/v - 2 phi(f) = 2 pi m inside `band`.
// Parity follows the longitudinal index (even m -> Even). Loss and coupling
// are left at zero for the caller.
ModeTable resonance_frequencies(const CavitySpec& c, const Band& band,
                                double scan_step = 0.1e6);

std::vector<double> mode_spacings(const ModeTable& t);

// v / (2 * spacing): the cavity length a hard-mirror resonator would need.
double effective_length(double spacing, double sound_speed);

}  // namespace dslit::bragg
