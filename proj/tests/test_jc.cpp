#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dslit/config.hpp"
#include "dslit/errors.hpp"
#include "dslit/jaynes_cummings.hpp"

using namespace dslit;
using namespace dslit::jc;
using bragg::Mode;
using bragg::ModeTable;
using bragg::Parity;

namespace {

ModeTable single_mode(double f, double g) {
  ModeTable t;
  t.modes = {{f, 0, Parity::Even, false, 0.0, g}};
  return t;
}

SystemModel reference_model() {
  const auto doc = config::reference_params();
  return {doc.transmon, doc.modes};
}

// Smallest separation of adjacent eigenvalues near f_m while f_q sweeps
// across it.
double min_gap_near(double f_m, const ModeTable& modes) {
  double best = 1e300;
  for (double fq = f_m - 1.5e6; fq <= f_m + 1.5e6; fq += 2e3) {
    const auto ev = eigenfrequencies(build_single_excitation_matrix(fq, modes));
    for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
      if (std::abs(0.5 * (ev[k] + ev[k + 1]) - f_m) < 1.5e6) best = std::min(best, ev[k + 1] - ev[k]);
    }
  }
  return best;
}

// 2 chi(Delta) = target with g = Delta / ratio, solved by a coarse scan over
// (0, -alpha) followed by bisection on the bracketing cell.
double detuning_for(double two_chi, double ratio, double alpha) {
  auto f = [&](double d) { return 2.0 * dispersive_shift_perturbative(d / ratio, d, alpha) - two_chi; };
  const double top = -alpha;
  double lo = 0.0;
  double hi = 0.0;
  double prev = top * 1e-4;
  for (int k = 2; k < 100000; ++k) {
    const double d = top * k * 1e-5;
    if (f(prev) * f(d) <= 0.0) {
      lo = prev;
      hi = d;
      break;
    }
    prev = d;
  }
  REQUIRE(hi > 0.0);
  for (int k = 0; k < 100; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("single-excitation matrix layout") {
  SUBCASE("uncoupled mode") {
    const auto h = build_single_excitation_matrix(4.3e9, single_mode(4.2e9, 0.0));
    REQUIRE(h.rows() == 2);
    CHECK(h(0, 0) == 4.2e9);
    CHECK(h(1, 1) == 4.3e9);
    CHECK(h(0, 1) == 0.0);
    CHECK(h(1, 0) == 0.0);
  }
  SUBCASE("reference model is 15 by 15, symmetric, zero off the border") {
    const auto model = reference_model();
    REQUIRE(model.modes.size() == 14);
    const auto h = build_single_excitation_matrix(4.26e9, model.modes);
    REQUIRE(h.rows() == 15);
    REQUIRE(h.cols() == 15);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 14; ++i) {
      CHECK(h(i, i) == model.modes.modes[static_cast<std::size_t>(i)].freq);
      CHECK(h(i, 14) == model.modes.modes[static_cast<std::size_t>(i)].coupling);
      for (int j = 0; j < 14; ++j) {
        if (i != j) CHECK(h(i, j) == 0.0);
      }
    }
    CHECK(h(14, 14) == 4.26e9);
  }
  SUBCASE("empty table") { CHECK_THROWS_AS(build_single_excitation_matrix(4e9, ModeTable{}), DomainError); }
}

TEST_CASE("eigenfrequencies") {
  SUBCASE("diagonal input comes back sorted") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
    d.diagonal() << 4.3e9, 4.1e9, 4.25e9, 4.2e9;
    const auto ev = eigenfrequencies(d);
    const std::vector<double> expected{4.1e9, 4.2e9, 4.25e9, 4.3e9};
    for (std::size_t i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-15));
  }
  SUBCASE("resonant pair splits by plus and minus g") {
    const double f = 4.2e9;
    const double g = 5.1e6;
    const auto ev = eigenfrequencies(build_single_excitation_matrix(f, single_mode(f, g)));
    CHECK(std::abs(ev[0] - (f - g)) < 1e-3);
    CHECK(std::abs(ev[1] - (f + g)) < 1e-3);
  }
  SUBCASE("sum equals trace to 1 Hz") {
    const auto model = reference_model();
    for (double fq = 4.15e9; fq <= 4.35e9; fq += 7.3e6) {
      const auto h = build_single_excitation_matrix(fq, model.modes);
      const auto ev = eigenfrequencies(h);
      CHECK(std::is_sorted(ev.begin(), ev.end()));
      CHECK(std::abs(std::accumulate(ev.begin(), ev.end(), 0.0) - h.trace()) < 1.0);
    }
  }
  SUBCASE("asymmetric input is rejected") {
    Eigen::MatrixXd a(2, 2);
    a << 4e9, 1e6, 2e6, 4.1e9;
    CHECK_THROWS_AS(eigenfrequencies(a), ContractError);
    CHECK_THROWS_AS(eigenfrequencies(Eigen::MatrixXd::Zero(2, 3)), ContractError);
  }
  SUBCASE("isolated crossing gap is 2g") {
    const double g = 3.7e6;
    const auto modes = single_mode(4.2e9, g);
    double best = 1e300;
    for (double fq = 4.19e9; fq <= 4.21e9; fq += 1e3) {
      const auto ev = eigenfrequencies(build_single_excitation_matrix(fq, modes));
      best = std::min(best, ev[1] - ev[0]);
    }
    CHECK(best == doctest::Approx(2.0 * g).epsilon(1e-3));
  }
}

TEST_CASE("crossing spectrum") {
  auto model = reference_model();
  const auto& tp = model.transmon;

  SUBCASE("zero couplings give bare lines") {
    for (auto& m : model.modes.modes) m.coupling = 0.0;
    std::vector<double> currents;
    for (int k = 0; k < 40; ++k) currents.push_back(tp.offset_current + 0.3e-3 + k * 2e-6);
    const auto s = crossing_spectrum(currents, model);
    for (std::size_t i = 0; i < currents.size(); ++i) {
      std::vector<double> bare;
      for (const auto& m : model.modes.modes) bare.push_back(m.freq);
      bare.push_back(transmon::freq_vs_current(currents[i], tp));
      std::sort(bare.begin(), bare.end());
      REQUIRE(s.branches[i].size() == bare.size());
      for (std::size_t k = 0; k < bare.size(); ++k) CHECK(std::abs(s.branches[i][k] - bare[k]) < 1e-3);
    }
  }

  SUBCASE("rows are sorted and continuous") {
    const double lo = transmon::current_for_freq(4.33e9, tp);
    const double hi = transmon::current_for_freq(4.19e9, tp);
    const double step = (hi - lo) / 600.0;
    std::vector<double> currents;
    for (int k = 0; k <= 600; ++k) currents.push_back(lo + k * step);
    const auto s = crossing_spectrum(currents, model);
    REQUIRE(s.branches.size() == currents.size());
    for (const auto& row : s.branches) {
      CHECK(row.size() == model.modes.size() + 1);
      CHECK(std::is_sorted(row.begin(), row.end()));
    }
    for (std::size_t i = 1; i < currents.size(); ++i) {
      const double slope = std::max(std::abs(transmon::freq_slope(currents[i], tp)),
                                    std::abs(transmon::freq_slope(currents[i - 1], tp)));
      for (std::size_t k = 0; k < s.branches[i].size(); ++k) {
        CHECK(std::abs(s.branches[i][k] - s.branches[i - 1][k]) < 5.0 * step * slope);
      }
    }
  }

  SUBCASE("nine longitudinal crossings with alternating gaps") {
    std::vector<double> gaps;
    std::vector<double> couplings;
    for (const auto& m : model.modes.modes) {
      if (m.transverse) continue;
      gaps.push_back(min_gap_near(m.freq, model.modes));
      couplings.push_back(std::abs(m.coupling));
    }
    REQUIRE(gaps.size() == 9);
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      // Neighbours hybridise, so only the ordering of gaps follows 2|g|.
      if (i + 1 < gaps.size()) {
        CHECK((gaps[i + 1] - gaps[i]) * (couplings[i + 1] - couplings[i]) > 0.0);
      }
      if (i + 2 < gaps.size()) {
        CHECK((gaps[i + 1] - gaps[i]) * (gaps[i + 2] - gaps[i + 1]) < 0.0);
      }
    }
  }

  SUBCASE("empty current list") { CHECK_THROWS_AS(crossing_spectrum({}, model), DomainError); }
  SUBCASE("duplicate mode frequencies") {
    model.modes.modes[1].freq = model.modes.modes[0].freq;
    CHECK_THROWS_AS(model.validate(), DomainError);
  }
}

TEST_CASE("perturbative dispersive shift") {
  const double alpha = -190e6;
  CHECK(dispersive_shift_perturbative(0.0, 50e6, alpha) == 0.0);
  CHECK(dispersive_shift_perturbative(4e6, 50e6, alpha) ==
        doctest::Approx(16e12 * (1.0 / 50e6 + 1.0 / 140e6)).epsilon(1e-14));

  SUBCASE("straddling regime adds both terms") {
    for (double d : {10e6, 50e6, 150e6}) {
      const double chi = dispersive_shift_perturbative(4e6, d, alpha);
      CHECK(chi > 0.0);
      CHECK(chi > 16e12 / d);
    }
    CHECK(dispersive_shift_perturbative(4e6, 250e6, alpha) < 0.0);
    CHECK(dispersive_shift_perturbative(4e6, -50e6, alpha) < 0.0);
  }
  SUBCASE("poles") {
    CHECK_THROWS_AS(dispersive_shift_perturbative(4e6, 0.0, alpha), PoleError);
    CHECK_THROWS_AS(dispersive_shift_perturbative(4e6, 190e6, alpha), PoleError);
  }
  SUBCASE("detuning behind a 1.05 MHz shift at ratio 11") {
    const double d = detuning_for(1.05e6, 11.0, alpha);
    CHECK(std::abs(d - 47.6e6) < 0.1e6);
    CHECK(std::abs(d / 11.0 - 4.33e6) < 0.01e6);
    CHECK(2.0 * dispersive_shift_perturbative(d / 11.0, d, alpha) == doctest::Approx(1.05e6).epsilon(1e-9));
  }
}

TEST_CASE("numeric dispersive shift") {
  const double alpha = -190e6;
  CHECK(dispersive_shift_numeric(0.0, 50e6, alpha) == 0.0);

  SUBCASE("ten times detuned agrees with the formula within 5%") {
    for (double d : {40e6, 60e6, 100e6, -60e6}) {
      const double g = d / 10.0;
      const double num = dispersive_shift_numeric(std::abs(g), d, alpha);
      const double pert = dispersive_shift_perturbative(g, d, alpha);
      CHECK(std::abs(num / pert - 1.0) < 0.05);
    }
  }
  SUBCASE("two-level limit") {
    const double g = 2e6;
    for (double ratio : {30.0, 50.0, 100.0}) {
      const double d = ratio * g;
      const double num = dispersive_shift_numeric(g, d, -1e6 * g);
      CHECK(std::abs(num / (g * g / d) - 1.0) < 0.01);
    }
  }
  SUBCASE("agreement improves with detuning") {
    double prev = 1e300;
    for (double ratio : {8.0, 12.0, 20.0, 40.0}) {
      const double g = 3e6;
      const double err = std::abs(dispersive_shift_numeric(g, ratio * g, alpha) /
                                      dispersive_shift_perturbative(g, ratio * g, alpha) -
                                  1.0);
      CHECK(err < prev);
      prev = err;
    }
  }
  SUBCASE("more levels and photons change little") {
    const double a = dispersive_shift_numeric(4e6, 60e6, alpha, 3, 15);
    const double b = dispersive_shift_numeric(4e6, 60e6, alpha, 5, 25);
    CHECK(std::abs(b / a - 1.0) < 0.02);
  }
  SUBCASE("bad truncation arguments") {
    CHECK_THROWS_AS(dispersive_shift_numeric(4e6, 60e6, alpha, 2, 15), DomainError);
    CHECK_THROWS_AS(dispersive_shift_numeric(4e6, 60e6, alpha, 3, 5), DomainError);
  }
}

TEST_CASE("Stark shifts across the mode table") {
  const double alpha = -190e6;
  SUBCASE("reference ratios") {
    struct Case {
      double ratio, two_chi;
    };
    for (const Case c : {Case{18.0, 500e3}, Case{11.0, 1050e3}, Case{8.5, 890e3}}) {
      const double d = detuning_for(c.two_chi, c.ratio, alpha);
      SystemModel model;
      model.modes = single_mode(4.3e9 - d, d / c.ratio);
      const auto s = total_stark_hamiltonian_shifts(model, 4.3e9);
      REQUIRE(s.shifts.size() == 1);
      CHECK(s.shifts[0].detuning == doctest::Approx(d).epsilon(1e-9));
      CHECK(2.0 * s.shifts[0].chi == doctest::Approx(c.two_chi).epsilon(1e-6));
      CHECK(s.warnings.empty());
    }
  }
  SUBCASE("resonant mode is rejected by position") {
    SystemModel model;
    model.modes.modes = {{4.20e9, 0, Parity::Even, false, 0.0, 1e6}, {4.29e9, 1, Parity::Odd, false, 0.0, 5e6}};
    try {
      total_stark_hamiltonian_shifts(model, 4.295e9);
      FAIL("expected DispersiveRegimeError");
    } catch (const DispersiveRegimeError& e) {
      CHECK(e.mode_index() == 1);
    }
  }
  SUBCASE("weakly dispersive modes warn") {
    SystemModel model;
    model.modes = single_mode(4.3e9 - 25e6, 5e6);
    const auto s = total_stark_hamiltonian_shifts(model, 4.3e9);
    CHECK(s.warnings.size() == 1);
  }
  SUBCASE("uncoupled modes shift nothing") {
    auto model = reference_model();
    for (auto& m : model.modes.modes) m.coupling = 0.0;
    const auto s = total_stark_hamiltonian_shifts(model, 4.32e9);
    REQUIRE(s.shifts.size() == model.modes.size());
    for (const auto& sh : s.shifts) CHECK(sh.chi == 0.0);
    CHECK(s.warnings.empty());
  }
}
