#include "dslit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dslit/bragg.hpp"
#include "dslit/config.hpp"
#include "dslit/errors.hpp"
#include "dslit/estimator.hpp"
#include "dslit/idt.hpp"
#include "dslit/io.hpp"
#include "dslit/jaynes_cummings.hpp"
#include "dslit/papercheck.hpp"
#include "dslit/spectra.hpp"
#include "dslit/transmon.hpp"

namespace dslit::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string command;
  std::string params_file;
  fs::path output_dir = "out";
  std::uint64_t seed = 1;
  bool emit_svg = false;
  std::string fit_model;
  fs::path dataset;
};

struct RunReport {
  std::string command;
  double wall_time = 0.0;
  std::vector<fs::path> artifacts;
  std::vector<std::string> warnings;
  int exit_code = kOk;
};

void print_report(const RunReport& r) {
  nlohmann::json doc;
  doc["command"] = r.command;
  doc["wall_time_s"] = r.wall_time;
  doc["artifacts"] = nlohmann::json::array();
  for (const auto& p : r.artifacts) doc["artifacts"].push_back(p.string());
  doc["warnings"] = r.warnings;
  doc["exit_code"] = r.exit_code;
  std::cout << doc.dump(2) << '\n';
}

void add_csv(RunReport& rep, const io::Table& t, const fs::path& path) {
  io::write_csv(t, path);
  rep.artifacts.push_back(path);
}

void add_svg(RunReport& rep, const std::vector<io::PlotSeries>& s, const fs::path& path, const io::PlotOptions& o) {
  io::write_svg(s, path, o);
  rep.artifacts.push_back(path);
}

void idt_response(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  const auto grid = doc.idt_sweep.grid();
  io::Table gamma{{"freq_hz", "gamma1_hz", "lamb_shift_hz"}, {}};
  io::Table resp{{"freq_hz", "amplitude"}, {}};
  io::PlotSeries g1{"Gamma1", {}, {}};
  io::PlotSeries ls{"Lamb shift", {}, {}};
  for (double f : grid) {
    const double rate = idt::emission_rate(f, doc.idt, doc.environment);
    const double shift = idt::lamb_shift(f, doc.idt, doc.environment);
    gamma.rows.push_back({f, rate, shift});
    resp.rows.push_back({f, idt::response_amplitude(f, doc.idt)});
    g1.x.push_back(f);
    g1.y.push_back(rate / 1e6);
    ls.x.push_back(f);
    ls.y.push_back(shift / 1e6);
  }
  add_csv(rep, gamma, rc.output_dir / "gamma1.csv");
  add_csv(rep, resp, rc.output_dir / "response.csv");
  if (rc.emit_svg) {
    add_svg(rep, {g1, ls}, rc.output_dir / "gamma1.svg",
            {"Emission rate and Lamb shift", "qubit frequency (GHz)", "rate (MHz)", 0.0, 1e9});
  }
}

void mirror(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  const auto sb = bragg::stopband(doc.mirror, doc.stopband_threshold);
  const double fb = doc.mirror.bragg_frequency();
  io::Table refl{{"freq_hz", "abs_r", "phase_rad"}, {}};
  io::PlotSeries mag{"|r|", {}, {}};
  for (double f : config::Sweep{fb - 300e6, fb + 300e6, 0.5e6}.grid()) {
    const auto r = bragg::mirror_reflection(f, doc.mirror);
    refl.rows.push_back({f, std::abs(r), std::arg(r)});
    mag.x.push_back(f);
    mag.y.push_back(std::abs(r));
  }
  add_csv(rep, refl, rc.output_dir / "mirror_reflection.csv");
  nlohmann::json band;
  band["peak_reflectivity"] = sb.peak_reflectivity;
  band["peak_frequency_hz"] = sb.peak_frequency;
  band["threshold"] = doc.stopband_threshold;
  if (sb.band) {
    band["lo_hz"] = sb.band->lo;
    band["hi_hz"] = sb.band->hi;
    band["width_hz"] = sb.band->width();
    const auto modes = bragg::resonance_frequencies(doc.cavity, *sb.band);
    add_csv(rep, io::mode_table(modes), rc.output_dir / "modes.csv");
    band["spacings_hz"] = bragg::mode_spacings(modes);
  } else {
    rep.warnings.push_back("reflectivity never reaches the stopband threshold; no modes written");
  }
  io::write_json(band, rc.output_dir / "stopband.json");
  rep.artifacts.push_back(rc.output_dir / "stopband.json");
  if (rc.emit_svg) {
    add_svg(rep, {mag}, rc.output_dir / "mirror_reflection.svg",
            {"Mirror reflectivity", "frequency (GHz)", "|r|", 0.0, 1e9});
  }
}

void crossings(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  std::vector<double> currents;
  for (double f : doc.crossing_sweep.grid()) currents.push_back(transmon::current_for_freq(f, doc.transmon));
  const auto spec = jc::crossing_spectrum(currents, {doc.transmon, doc.modes});
  add_csv(rep, io::crossing_table(spec), rc.output_dir / "crossings.csv");
  if (rc.emit_svg) {
    std::vector<io::PlotSeries> series;
    const std::size_t width = spec.branches.empty() ? 0 : spec.branches.front().size();
    for (std::size_t b = 0; b < width; ++b) {
      io::PlotSeries s{"branch " + std::to_string(b), {}, {}};
      for (std::size_t i = 0; i < spec.currents.size(); ++i) {
        s.x.push_back(spec.currents[i] * 1e3);
        s.y.push_back(spec.branches[i][b] / 1e9);
      }
      series.push_back(std::move(s));
    }
    add_svg(rep, series, rc.output_dir / "crossings.svg",
            {"Hybridised spectrum", "coil current (mA)", "frequency (GHz)", 0.0, 1.0});
  }
}

void numbersplit(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  const auto grid = doc.spectrum_sweep.grid();
  std::vector<spectra::SpectrumTrace> traces;
  std::vector<io::PlotSeries> series;
  double peak = 0.0;
  for (double power : doc.drive.powers) {
    const double n_bar = spectra::power_to_mean_phonon({power, doc.drive.conversion});
    traces.push_back(spectra::number_split_spectrum(grid, doc.number_split, n_bar));
    io::PlotSeries s{"n_bar " + io::format_number(n_bar), traces.back().freqs, traces.back().values};
    for (double v : s.y) peak = std::max(peak, v);
    series.push_back(std::move(s));
  }
  add_csv(rep, io::trace_batch_table(traces), rc.output_dir / "numbersplit.csv");
  if (rc.emit_svg) {
    add_svg(rep, series, rc.output_dir / "numbersplit.svg",
            {"Number splitting vs drive power", "probe frequency (GHz)", "P_e (offset)", 0.6 * peak, 1e9});
  }
}

std::vector<int> group_column(const io::CsvData& data, std::size_t n) {
  std::vector<int> out;
  if (data.column("group") < 0) return std::vector<int>(n, 0);
  for (double g : data.numbers("group")) out.push_back(static_cast<int>(g));
  return out;
}

void fit(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  const auto model = estimator::model_from_string(rc.fit_model);
  const auto data = io::read_csv(rc.dataset);
  if (data.column("x") < 0 || data.column("y") < 0) {
    throw ConfigError("dataset needs columns x and y: " + rc.dataset.string());
  }
  const auto x = data.numbers("x");
  const auto y = data.numbers("y");
  std::vector<bool> mask;
  if (data.column("mask") >= 0) {
    for (double m : data.numbers("mask")) mask.push_back(m != 0.0);
  }
  nlohmann::json out;
  out["model"] = std::string(estimator::to_string(model));
  out["dataset"] = rc.dataset.string();
  switch (model) {
    case estimator::ModelId::FluxCurve: {
      const auto f = estimator::fit_flux_curve(x, y, doc.transmon, mask);
      out["fit"] = io::fit_result_json(f.result, {"f_0", "a", "I_c", "I_0"});
      break;
    }
    case estimator::ModelId::T1Curve: {
      const auto f = estimator::fit_t1_curve(x, y, doc.idt.n_periods, mask);
      out["fit"] = io::fit_result_json(f.result, {"Q_i", "Gamma_0", "f_c", "tau"});
      out["delay_scan"] = f.delay_scan;
      out["q_internal_poorly_constrained"] = f.q_internal_poorly_constrained;
      if (f.q_internal_poorly_constrained) rep.warnings.push_back("Q_i poorly constrained by the data");
      break;
    }
    case estimator::ModelId::Crossings: {
      std::map<double, std::vector<double>> by_current;
      for (std::size_t i = 0; i < x.size(); ++i) by_current[x[i]].push_back(y[i]);
      std::vector<estimator::CrossingPeaks> peaks;
      for (auto& [c, f] : by_current) peaks.push_back({c, f});
      const auto f = estimator::fit_crossings(peaks, {doc.transmon, doc.modes});
      std::vector<std::string> names;
      for (std::size_t k = 0; k < doc.modes.size(); ++k) names.push_back("f_" + std::to_string(k));
      for (std::size_t k = 0; k < doc.modes.size(); ++k) names.push_back("g_" + std::to_string(k));
      out["fit"] = io::fit_result_json(f.result, names);
      break;
    }
    case estimator::ModelId::NumberSplit: {
      const auto groups = group_column(data, x.size());
      std::map<int, spectra::SpectrumTrace> by_trace;
      for (std::size_t i = 0; i < x.size(); ++i) {
        by_trace[groups[i]].freqs.push_back(x[i]);
        by_trace[groups[i]].values.push_back(y[i]);
      }
      std::vector<spectra::SpectrumTrace> traces;
      for (auto& [id, t] : by_trace) traces.push_back(std::move(t));
      const auto f = estimator::fit_number_splitting(traces, doc.number_split, std::vector<double>(traces.size(), 1.0));
      std::vector<std::string> names{"f_q", "gamma", "kappa", "chi"};
      for (std::size_t t = 0; t < traces.size(); ++t) {
        const auto s = std::to_string(t);
        names.insert(names.end(), {"n_bar_" + s, "C_0_" + s, "C_1_" + s});
      }
      out["fit"] = io::fit_result_json(f.result, names);
      out["half_shift_identifiable"] = f.half_shift_identifiable;
      if (!f.half_shift_identifiable) rep.warnings.push_back("chi not identifiable from these traces");
      break;
    }
    case estimator::ModelId::Linear: {
      const auto f = estimator::fit_line(x, y);
      out["fit"] = io::fit_result_json(f.result, {"slope", "intercept"});
      out["r_squared"] = f.r_squared;
      break;
    }
  }
  if (!out["fit"]["converged"].get<bool>()) rep.warnings.push_back("fit did not converge");
  const auto path = rc.output_dir / ("fit_" + rc.fit_model + ".json");
  io::write_json(out, path);
  rep.artifacts.push_back(path);
}

void papercheck_cmd(const RunConfig& rc, const config::ParamsDocument& doc, RunReport& rep) {
  const auto report = papercheck::run_papercheck(doc, rc.seed, rc.output_dir);
  papercheck::print_table(report, std::cout);
  rep.artifacts = report.artifacts;
  rep.warnings = report.warnings;
  if (!report.all_passed()) rep.exit_code = kAcceptanceFailure;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig rc;
  CLI::App app{"Acoustic cavity and transmon simulation, fitting and self-check", "dslit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  app.add_option("--config", rc.params_file, "JSON parameter document (default: built-in reference)");
  app.add_option("--out", rc.output_dir, "output directory")->capture_default_str();
  app.add_option("--seed", rc.seed, "run seed for synthetic data")->capture_default_str();
  app.add_flag("--svg", rc.emit_svg, "also write SVG plots");
  app.add_subcommand("idt-response", "emission rate, Lamb shift and response amplitude vs frequency");
  app.add_subcommand("mirror", "mirror reflection, stopband and cavity modes");
  app.add_subcommand("crossings", "hybridised spectrum along the flux sweep");
  app.add_subcommand("numbersplit", "number-splitting traces over the drive powers");
  auto* fit_cmd = app.add_subcommand("fit", "fit a model to a dataset CSV");
  fit_cmd->add_option("model", rc.fit_model, "flux, t1, crossings, numbersplit or linear")->required();
  fit_cmd->add_option("dataset", rc.dataset, "CSV with columns x, y and optionally group, mask")->required();
  app.add_subcommand("papercheck", "run the acceptance suite");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  rc.command = app.get_subcommands().front()->get_name();

  RunReport rep;
  rep.command = rc.command;
  try {
    const auto doc = rc.params_file.empty() ? config::reference_params() : config::load_params(rc.params_file);
    std::error_code ec;
    fs::create_directories(rc.output_dir, ec);
    if (ec || !fs::is_directory(rc.output_dir)) {
      throw ConfigError("output directory not writable: " + rc.output_dir.string());
    }
    if (rc.command == "idt-response") idt_response(rc, doc, rep);
    else if (rc.command == "mirror") mirror(rc, doc, rep);
    else if (rc.command == "crossings") crossings(rc, doc, rep);
    else if (rc.command == "numbersplit") numbersplit(rc, doc, rep);
    else if (rc.command == "fit") fit(rc, doc, rep);
    else papercheck_cmd(rc, doc, rep);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    rep.exit_code = kNumericalError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    rep.exit_code = kNumericalError;
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_report(rep);
  return rep.exit_code;
}

}  // namespace dslit::cli
