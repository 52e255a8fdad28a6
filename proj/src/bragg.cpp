#include "dslit/bragg.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dslit/errors.hpp"
#include "dslit/units.hpp"

namespace dslit::bragg {

namespace {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 power(Mat2 base, int n) {
  Mat2 result{1.0, 0.0, 0.0, 1.0};
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    base = mul(base, base);
    n >>= 1;
  }
  return result;
}

// Principal value of x in (-pi, pi].
double wrap(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

constexpr double kRootTolHz = 1.0;

}  // namespace

void MirrorParams::validate() const {
  if (n_strips < 1) throw DomainError("MirrorParams: n_strips must be >= 1");
  if (strip_reflectivity < 0.0 || strip_reflectivity >= 1.0) {
    throw DomainError("MirrorParams: strip_reflectivity must lie in [0, 1)");
  }
  if (!(pitch > 0.0)) throw DomainError("MirrorParams: pitch must be > 0");
  if (!(sound_speed > 0.0)) throw DomainError("MirrorParams: sound_speed must be > 0");
}

void CavitySpec::validate() const {
  if (!(mirror_separation > 0.0)) throw DomainError("CavitySpec: mirror_separation must be > 0");
  if (!(sound_speed > 0.0)) throw DomainError("CavitySpec: sound_speed must be > 0");
  mirrors.validate();
}

std::vector<Mode> ModeTable::longitudinal() const {
  std::vector<Mode> out;
  std::copy_if(modes.begin(), modes.end(), std::back_inserter(out),
               [](const Mode& m) { return !m.transverse; });
  return out;
}

void ModeTable::validate() const {
  const Mode* prev = nullptr;
  for (const Mode& m : modes) {
    if (!(m.freq > 0.0)) throw DomainError("ModeTable: mode frequency must be > 0");
    if (m.loss < 0.0) throw DomainError("ModeTable: mode loss must be >= 0");
    if (!std::isfinite(m.coupling)) throw DomainError("ModeTable: coupling must be finite");
    if (m.transverse) continue;
    if (prev) {
      if (!(m.freq > prev->freq)) {
        throw DomainError("ModeTable: longitudinal frequencies must increase strictly");
      }
      if (m.longitudinal_index == prev->longitudinal_index + 1 && m.parity == prev->parity) {
        throw DomainError("ModeTable: parity must alternate between consecutive modes");
      }
    }
    prev = &m;
  }
}

Scattering mirror_scattering(double f, const MirrorParams& m) {
  if (!(f > 0.0)) throw DomainError("mirror_reflection: frequency must be positive");
  m.validate();
  const double rs = m.strip_reflectivity;
  const double ts = std::sqrt(1.0 - rs * rs);
  // Strip transfer matrix mapping (forward, backward) amplitudes across one
  // reflector: r = -r_s from the cavity side, +r_s from behind, t = t_s.
  const Mat2 strip{1.0 / ts, rs / ts, rs / ts, 1.0 / ts};
  const double spacing = 0.5 * m.pitch;
  const double kd = 2.0 * kPi * f / m.sound_speed * spacing;
  const Mat2 hop{std::polar(1.0, -kd), 0.0, 0.0, std::polar(1.0, kd)};
  const Mat2 total = mul(strip, power(mul(hop, strip), m.n_strips - 1));
  // Nothing enters from behind the grating.
  const cplx r = -total[2] / total[3];
  const cplx t = total[0] + total[1] * r;
  return {r, t};
}

cplx mirror_reflection(double f, const MirrorParams& m) { return mirror_scattering(f, m).r; }

double reflection_phase(double f, const MirrorParams& m) {
  const double fb = m.bragg_frequency();
  // At the Bragg frequency every strip echo is in phase with -r_s.
  double phase = kPi + std::arg(-mirror_reflection(fb, m));
  const double step = 0.1e6;
  const int n = static_cast<int>(std::ceil(std::abs(f - fb) / step));
  for (int i = 1; i <= n; ++i) {
    const double fi = fb + (f - fb) * static_cast<double>(i) / n;
    phase += wrap(std::arg(mirror_reflection(fi, m)) - phase);
  }
  return phase;
}

StopbandResult stopband(const MirrorParams& m, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw DomainError("stopband: threshold must lie in (0, 1]");
  }
  m.validate();
  const double fb = m.bragg_frequency();
  const double step = 2e-5 * fb;
  const int half = static_cast<int>(0.3 * fb / step);
  std::vector<double> freqs;
  std::vector<double> mag;
  freqs.reserve(2 * half + 1);
  mag.reserve(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    const double f = fb + i * step;
    freqs.push_back(f);
    mag.push_back(std::abs(mirror_reflection(f, m)));
  }
  const auto peak_it = std::max_element(mag.begin(), mag.end());
  const auto peak = static_cast<std::size_t>(peak_it - mag.begin());

  // Golden-section polish of the maximum between neighbouring grid points.
  double a = freqs[peak > 0 ? peak - 1 : peak];
  double b = freqs[peak + 1 < freqs.size() ? peak + 1 : peak];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  while (b - a > kRootTolHz) {
    const double c = b - gr * (b - a);
    const double d = a + gr * (b - a);
    if (std::abs(mirror_reflection(c, m)) >= std::abs(mirror_reflection(d, m))) {
      b = d;
    } else {
      a = c;
    }
  }
  StopbandResult out;
  out.peak_frequency = 0.5 * (a + b);
  out.peak_reflectivity = std::max(*peak_it, std::abs(mirror_reflection(out.peak_frequency, m)));
  if (out.peak_reflectivity < 1e-9) return out;

  const double level = threshold * out.peak_reflectivity;
  auto above = [&](double f) { return std::abs(mirror_reflection(f, m)) >= level; };
  auto refine = [&](double inside, double outside) {
    while (std::abs(outside - inside) > kRootTolHz) {
      const double mid = 0.5 * (inside + outside);
      (above(mid) ? inside : outside) = mid;
    }
    return inside;
  };

  std::size_t lo = peak;
  while (lo > 0 && mag[lo - 1] >= level) --lo;
  std::size_t hi = peak;
  while (hi + 1 < mag.size() && mag[hi + 1] >= level) ++hi;
  if (threshold >= 1.0) {
    out.band = Band{out.peak_frequency, out.peak_frequency};
    return out;
  }
  const double f_lo = lo > 0 ? refine(freqs[lo], freqs[lo - 1]) : freqs[lo];
  const double f_hi = hi + 1 < mag.size() ? refine(freqs[hi], freqs[hi + 1]) : freqs[hi];
  out.band = Band{std::min(f_lo, out.peak_frequency), std::max(f_hi, out.peak_frequency)};
  return out;
}

ModeTable resonance_frequencies(const CavitySpec& c, const Band& band, double scan_step) {
  c.validate();
  if (!(band.hi > band.lo) || !(band.lo > 0.0)) {
    throw DomainError("resonance_frequencies: band must be a positive, nonempty interval");
  }
  if (!(scan_step > 0.0)) throw DomainError("resonance_frequencies: scan_step must be > 0");

  const double round_trip = 2.0 * kPi * 2.0 * c.mirror_separation / c.sound_speed;
  // Residual relative to a phase anchor known to be within pi of the answer.
  auto theta = [&](double f, double phase_anchor) {
    const double phase = phase_anchor + wrap(std::arg(mirror_reflection(f, c.mirrors)) - phase_anchor);
    return std::pair{round_trip * f - 2.0 * phase, phase};
  };

  ModeTable table;
  const int n = static_cast<int>(std::ceil((band.hi - band.lo) / scan_step));
  double f_prev = band.lo;
  double phase_prev = reflection_phase(band.lo, c.mirrors);
  double th_prev = round_trip * f_prev - 2.0 * phase_prev;
  for (int i = 1; i <= n; ++i) {
    const double f = std::min(band.lo + i * scan_step, band.hi);
    const auto [th, phase] = theta(f, phase_prev);
    const double m_prev = std::floor(th_prev / (2.0 * kPi));
    const double m_next = std::floor(th / (2.0 * kPi));
    if (m_next > m_prev) {
      const double target = 2.0 * kPi * m_next;
      double a = f_prev;
      double b = f;
      while (b - a > kRootTolHz) {
        const double mid = 0.5 * (a + b);
        (theta(mid, phase_prev).first < target ? a : b) = mid;
      }
      Mode mode;
      mode.freq = 0.5 * (a + b);
      mode.longitudinal_index = static_cast<int>(m_next);
      mode.parity = mode.longitudinal_index % 2 == 0 ? Parity::Even : Parity::Odd;
      table.modes.push_back(mode);
    }
    f_prev = f;
    phase_prev = phase;
    th_prev = th;
  }
  return table;
}

std::vector<double> mode_spacings(const ModeTable& t) {
  std::vector<Mode> lon = t.longitudinal();
  std::sort(lon.begin(), lon.end(), [](const Mode& a, const Mode& b) { return a.freq < b.freq; });
  std::vector<double> gaps;
  for (std::size_t i = 1; i < lon.size(); ++i) gaps.push_back(lon[i].freq - lon[i - 1].freq);
  return gaps;
}

double effective_length(double spacing, double sound_speed) {
  if (!(spacing > 0.0)) throw DomainError("effective_length: spacing must be > 0");
  return sound_speed / (2.0 * spacing);
}

}  // namespace dslit::bragg
