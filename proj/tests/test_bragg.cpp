#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "dslit/bragg.hpp"
#include "dslit/errors.hpp"
#include "dslit/units.hpp"

using namespace dslit;
using namespace dslit::bragg;

namespace {

// Strip-by-strip multiple-reflection sum, built from the far end of the
// grating towards the cavity. Each strip reflects -r_s towards the cavity,
// +r_s away from it, and transmits sqrt(1 - r_s^2).
std::complex<double> airy_reflection(double f, const MirrorParams& m) {
  const double rs = m.strip_reflectivity;
  const double t2 = 1.0 - rs * rs;
  const double k = 2.0 * kPi * f / m.sound_speed;
  const std::complex<double> round_trip = std::polar(1.0, -2.0 * k * 0.5 * m.pitch);
  std::complex<double> r = -rs;
  for (int i = 1; i < m.n_strips; ++i) {
    const std::complex<double> behind = r * round_trip;
    r = -rs + t2 * behind / (1.0 - rs * behind);
  }
  return r;
}

double central_spacing(const ModeTable& modes, const Band& band) {
  const auto lon = modes.longitudinal();
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < lon.size(); ++i) {
    const double c = 0.5 * (lon[i].freq + lon[i + 1].freq);
    const double b = 0.5 * (lon[best].freq + lon[best + 1].freq);
    if (std::abs(c - band.center()) < std::abs(b - band.center())) best = i;
  }
  return lon[best + 1].freq - lon[best].freq;
}

ModeTable reference_modes() {
  CavitySpec c;
  const auto sb = stopband(c.mirrors, 0.9);
  return resonance_frequencies(c, *sb.band);
}

}  // namespace

TEST_CASE("transfer-matrix cascade agrees with the strip-by-strip reflection sum") {
  for (int n : {1, 2, 7, 100, 257}) {
    MirrorParams m;
    m.n_strips = n;
    for (double f = 3.9e9; f <= 4.6e9; f += 17.3e6) {
      const auto r = mirror_reflection(f, m);
      const auto ref = airy_reflection(f, m);
      CHECK(std::abs(r - ref) < 1e-10);
    }
  }
}

TEST_CASE("zero strip reflectivity reflects nothing") {
  MirrorParams m;
  m.strip_reflectivity = 0.0;
  for (double f = 3.5e9; f <= 5.0e9; f += 0.1e9) CHECK(std::abs(mirror_reflection(f, m)) == 0.0);
  const auto sb = stopband(m, 0.9);
  CHECK_FALSE(sb.band.has_value());
}

TEST_CASE("reflectivity at the Bragg frequency saturates as tanh") {
  for (int n : {10, 50, 100, 200}) {
    MirrorParams m;
    m.n_strips = n;
    const double r = std::abs(mirror_reflection(m.bragg_frequency(), m));
    CHECK(r == doctest::Approx(std::tanh(n * std::atanh(m.strip_reflectivity))).epsilon(1e-12));
    CHECK(std::abs(r - std::tanh(n * m.strip_reflectivity)) < 2e-3);
  }
  MirrorParams m;
  CHECK(std::tanh(m.n_strips * m.strip_reflectivity) > 0.99);
}

TEST_CASE("lossless cascade conserves energy") {
  MirrorParams m;
  for (double f = 3.0e9; f <= 5.5e9; f += 3.1e6) {
    const auto s = mirror_scattering(f, m);
    CHECK(std::abs(std::norm(s.r) + std::norm(s.t) - 1.0) < 1e-10);
    CHECK(std::abs(s.r) <= 1.0 + 1e-12);
  }
}

TEST_CASE("stopband") {
  MirrorParams m;
  SUBCASE("reference grating gives about 100 MHz") {
    const auto sb = stopband(m, 0.9);
    REQUIRE(sb.band.has_value());
    CHECK(sb.band->width() >= 85e6);
    CHECK(sb.band->width() <= 115e6);
    CHECK(sb.band->lo < m.bragg_frequency());
    CHECK(sb.band->hi > m.bragg_frequency());
    CHECK(std::abs(sb.peak_frequency - m.bragg_frequency()) < 1e6);
    // Edges sit at the threshold.
    CHECK(std::abs(mirror_reflection(sb.band->lo, m)) == doctest::Approx(0.9 * sb.peak_reflectivity).epsilon(1e-6));
    CHECK(std::abs(mirror_reflection(sb.band->hi, m)) == doctest::Approx(0.9 * sb.peak_reflectivity).epsilon(1e-6));
  }
  SUBCASE("stronger strips widen the band") {
    double previous = 0.0;
    for (double rs : {0.01, 0.02, 0.035, 0.07}) {
      m.strip_reflectivity = rs;
      const double w = stopband(m, 0.9).band->width();
      CHECK(w > previous);
      previous = w;
    }
  }
  SUBCASE("unit threshold collapses to the peak") {
    const auto sb = stopband(m, 1.0);
    REQUIRE(sb.band.has_value());
    CHECK(sb.band->width() == 0.0);
    CHECK(sb.band->center() == doctest::Approx(m.bragg_frequency()).epsilon(1e-6));
  }
  SUBCASE("invalid threshold") {
    CHECK_THROWS_AS(stopband(m, 0.0), DomainError);
    CHECK_THROWS_AS(stopband(m, 1.5), DomainError);
  }
}

TEST_CASE("reflection phase is continuous and decreasing inside the stopband") {
  MirrorParams m;
  const auto band = *stopband(m, 0.9).band;
  double prev = reflection_phase(band.lo, m);
  for (double f = band.lo + 0.5e6; f <= band.hi; f += 0.5e6) {
    const double ph = reflection_phase(f, m);
    CHECK(ph < prev);
    CHECK(prev - ph < 0.2);
    prev = ph;
  }
  CHECK(reflection_phase(m.bragg_frequency(), m) == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("resonance frequencies of the reference cavity") {
  CavitySpec c;
  const auto band = *stopband(c.mirrors, 0.9).band;
  const auto modes = resonance_frequencies(c, band);
  const auto gaps = mode_spacings(modes);
  REQUIRE(gaps.size() >= 3);
  const double central = central_spacing(modes, band);

  SUBCASE("central spacing near 10.6 MHz, edges compressed") {
    CHECK(std::abs(central / 10.6e6 - 1.0) <= 0.10);
    CHECK(gaps.front() < central);
    CHECK(gaps.back() < central);
  }
  SUBCASE("mode count matches band width over spacing") {
    const double expected = band.width() / central;
    CHECK(std::abs(static_cast<double>(modes.size()) - expected) <= 1.0 + 1e-9);
  }
  SUBCASE("roots satisfy the round-trip condition") {
    for (const auto& mode : modes.modes) {
      const double theta =
          2.0 * kPi * mode.freq * 2.0 * c.mirror_separation / c.sound_speed - 2.0 * reflection_phase(mode.freq, c.mirrors);
      CHECK(theta / (2.0 * kPi) == doctest::Approx(mode.longitudinal_index).epsilon(1e-9));
    }
  }
  SUBCASE("parity alternates and the table validates") {
    CHECK_NOTHROW(modes.validate());
    for (std::size_t i = 1; i < modes.size(); ++i) {
      CHECK(modes.modes[i].longitudinal_index == modes.modes[i - 1].longitudinal_index + 1);
      CHECK(modes.modes[i].parity != modes.modes[i - 1].parity);
    }
    for (const auto& mode : modes.modes) {
      CHECK((mode.parity == Parity::Even) == (mode.longitudinal_index % 2 == 0));
    }
  }
  SUBCASE("refining the scan grid moves no root by more than 1 kHz") {
    const auto fine = resonance_frequencies(c, band, 0.05e6);
    REQUIRE(fine.size() == modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) CHECK(std::abs(fine.modes[i].freq - modes.modes[i].freq) < 1e3);
  }
  SUBCASE("effective length exceeds the mirror separation") {
    const double l_eff = effective_length(central, c.sound_speed);
    CHECK(l_eff > c.mirror_separation);
    CHECK(l_eff < c.mirror_separation + 25e-6);
  }
}

TEST_CASE("nearly hard mirrors approach the Fabry-Perot spacing") {
  CavitySpec c;
  c.mirrors.strip_reflectivity = 0.95;
  c.mirrors.n_strips = 40;
  const double fb = c.mirrors.bragg_frequency();
  const auto modes = resonance_frequencies(c, Band{fb - 40e6, fb + 40e6});
  const double fsr = c.sound_speed / (2.0 * c.mirror_separation);
  for (double g : mode_spacings(modes)) CHECK(g == doctest::Approx(fsr).epsilon(0.01));
}

TEST_CASE("mode spacings") {
  ModeTable two;
  two.modes = {{4.2e9, 0, Parity::Even, false, 0, 0}, {4.2106e9, 1, Parity::Odd, false, 0, 0}};
  const auto g = mode_spacings(two);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(10.6e6));

  ModeTable ladder;
  for (int i = 0; i < 8; ++i) {
    ladder.modes.push_back({4.2e9 + i * 10e6, i, i % 2 ? Parity::Odd : Parity::Even, false, 0, 0});
  }
  ladder.modes.push_back({4.2e9 + 13e6, 0, Parity::Even, true, 0, 0});  // transverse, ignored
  for (double s : mode_spacings(ladder)) CHECK(s == doctest::Approx(10e6));

  ModeTable one;
  one.modes = {two.modes[0]};
  CHECK(mode_spacings(one).empty());
  CHECK(mode_spacings(ModeTable{}).empty());
}

TEST_CASE("mode table invariants") {
  ModeTable t;
  t.modes = {{4.2e9, 0, Parity::Even, false, 250e3, 1e6}, {4.21e9, 1, Parity::Odd, false, 250e3, 1e6}};
  CHECK_NOTHROW(t.validate());
  auto bad = t;
  bad.modes[1].freq = 4.19e9;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = t;
  bad.modes[1].parity = Parity::Even;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = t;
  bad.modes[0].loss = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("invalid inputs") {
  MirrorParams m;
  CHECK_THROWS_AS(mirror_reflection(0.0, m), DomainError);
  m.strip_reflectivity = 1.0;
  CHECK_THROWS_AS(mirror_reflection(4e9, m), DomainError);
  m = MirrorParams{};
  m.n_strips = 0;
  CHECK_THROWS_AS(mirror_reflection(4e9, m), DomainError);
  CavitySpec c;
  CHECK_THROWS_AS(resonance_frequencies(c, Band{4.3e9, 4.2e9}), DomainError);
  CHECK_THROWS_AS(effective_length(0.0, 2880.0), DomainError);
  CHECK(effective_length(10.6e6, 2880.0) == doctest::Approx(135.849e-6).epsilon(1e-5));
}

TEST_CASE("reference mode ladder is reproducible") {
  const auto a = reference_modes();
  const auto b = reference_modes();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.modes[i].freq == b.modes[i].freq);
}
