#include <doctest.h>

#include <stdlib.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dslit/cli.hpp"
#include "dslit/config.hpp"
#include "dslit/errors.hpp"
#include "dslit/estimator.hpp"
#include "dslit/io.hpp"
#include "dslit/units.hpp"

namespace fs = std::filesystem;
using namespace dslit;

namespace {

fs::path scratch_dir() {
  std::string templ = (fs::temp_directory_path() / "dslit_test_XXXXXX").string();
  REQUIRE(mkdtemp(templ.data()) != nullptr);
  return templ;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::size_t line_count(const std::string& text) { return count(text, "\n"); }

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dslit");
  return cli::run(args);
}

}  // namespace

TEST_CASE("quantities with units") {
  using units::parse_quantity;
  CHECK(parse_quantity("4.24 GHz") == doctest::Approx(4.24e9).epsilon(1e-15));
  CHECK(parse_quantity("9.04ns") == doctest::Approx(9.04e-9).epsilon(1e-15));
  CHECK(parse_quantity("675 nm") == doctest::Approx(675e-9).epsilon(1e-15));
  CHECK(parse_quantity("79.2 uA") == doctest::Approx(79.2e-6).epsilon(1e-15));
  CHECK(parse_quantity("2880 m/s") == 2880.0);
  CHECK(parse_quantity("-190 MHz") == -190e6);
  CHECK(parse_quantity("0.035") == 0.035);
  CHECK_THROWS_AS(parse_quantity("4.24 furlongs"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("GHz"), ConfigError);
  CHECK_THROWS_AS(parse_quantity(""), ConfigError);
}

TEST_CASE("CSV output") {
  const auto dir = scratch_dir();
  SUBCASE("number formatting") {
    CHECK(io::format_number(4.318e9) == "4318000000");
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(-2.5e-9) == "-2.5e-09");
  }
  SUBCASE("empty table is a header line") {
    io::write_csv({{"freq_hz", "p_e"}, {}}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "freq_hz,p_e\n");
  }
  SUBCASE("identical input, identical bytes, and it reads back") {
    io::Table t{{"x", "label", "n"}, {}};
    for (int i = 0; i < 50; ++i) t.rows.push_back({std::sqrt(i + 0.5) * 1e6, std::string("r") + std::to_string(i), static_cast<long long>(i)});
    io::write_csv(t, dir / "a.csv");
    io::write_csv(t, dir / "b.csv");
    const auto a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(line_count(a) == 51);
    CHECK(a.back() == '\n');
    const auto back = io::read_csv(dir / "a.csv");
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == 50);
    const auto xs = back.numbers("x");
    for (int i = 0; i < 50; ++i) CHECK(xs[static_cast<std::size_t>(i)] == doctest::Approx(std::sqrt(i + 0.5) * 1e6).epsilon(1e-11));
    CHECK(back.column("label") == 1);
    CHECK(back.column("nope") == -1);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(io::read_csv(dir / "absent.csv"), ConfigError); }
  SUBCASE("unwritable path") { CHECK_THROWS_AS(io::write_csv({{"x"}, {}}, dir / "no" / "such" / "x.csv"), IoError); }
  SUBCASE("dataset table columns") {
    const auto d = estimator::synth_dataset(estimator::ModelId::Linear, {2.0, 1.0}, {0.0, 1.0, 2.0}, 0.0, 0);
    const auto t = io::dataset_table(d);
    CHECK(t.columns == std::vector<std::string>{"x", "y", "y_true", "group"});
    CHECK(t.rows.size() == 3);
  }
  fs::remove_all(dir);
}

TEST_CASE("SVG plots") {
  io::PlotOptions opt{"title & more", "x", "y", 0.0, 1.0};
  SUBCASE("one polyline per series") {
    const std::vector<io::PlotSeries> one{{"a", {0.0, 1.0, 2.0}, {1.0, 4.0, 9.0}}};
    const auto svg = io::render_svg(one, opt);
    CHECK(count(svg, "<polyline") == 1);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("title &amp; more") != std::string::npos);
    const std::vector<io::PlotSeries> three{one[0], one[0], one[0]};
    CHECK(count(io::render_svg(three, opt), "<polyline") == 3);
  }
  SUBCASE("no series still draws axes") {
    const auto svg = io::render_svg({}, opt);
    CHECK(count(svg, "<polyline") == 0);
    CHECK(count(svg, "<line") == 2);
    CHECK(svg.find("</svg>") != std::string::npos);
  }
  SUBCASE("vertical offset separates identical series") {
    const io::PlotSeries s{"s", {0.0, 1.0}, {0.0, 1.0}};
    opt.vertical_offset = 2.0;
    const auto svg = io::render_svg({s, s}, opt);
    const auto first = svg.find("points=\"");
    const auto second = svg.find("points=\"", first + 1);
    REQUIRE(second != std::string::npos);
    CHECK(svg.substr(first, 40) != svg.substr(second, 40));
  }
}

TEST_CASE("fit results serialise infinities as null") {
  fit::FitResult r;
  r.params = {1.0, 2.0};
  r.covariance = Eigen::MatrixXd::Zero(2, 2);
  r.covariance(0, 0) = 0.25;
  r.covariance(1, 1) = std::numeric_limits<double>::infinity();
  r.converged = true;
  const auto j = io::fit_result_json(r, {"a", "b"});
  CHECK(j["covariance"][0][0].get<double>() == 0.25);
  CHECK(j["covariance"][1][1].is_null());
  CHECK(j["param_names"][1] == "b");
  const auto dir = scratch_dir();
  io::write_json(j, dir / "fit.json");
  const auto back = nlohmann::json::parse(slurp(dir / "fit.json"));
  CHECK(back["covariance"][1][1].is_null());
  fs::remove_all(dir);
}

TEST_CASE("configuration") {
  SUBCASE("shipped file matches the built-in copy") {
    const auto path = fs::path(DSLIT_SOURCE_DIR) / "config" / "reference.json";
    CHECK(nlohmann::json::parse(slurp(path)) == nlohmann::json::parse(config::reference_params_json()));
    const auto doc = config::load_params(path);
    CHECK(doc.transmon.zero_field_freq == 5.718e9);
    CHECK(doc.mirror.n_strips == 100);
    CHECK(doc.modes.size() == 14);
    CHECK_NOTHROW(doc.modes.validate());
  }
  SUBCASE("strict schema") {
    auto j = nlohmann::json::parse(config::reference_params_json());
    j["transmon"]["colour"] = "blue";
    CHECK_THROWS_AS(config::parse_params(j), ConfigError);
    j = nlohmann::json::parse(config::reference_params_json());
    j["extra_section"] = 1;
    CHECK_THROWS_AS(config::parse_params(j), ConfigError);
    j = nlohmann::json::parse(config::reference_params_json());
    j["idt"]["delay"] = "9.04 parsecs";
    CHECK_THROWS_AS(config::parse_params(j), ConfigError);
    j = nlohmann::json::parse(config::reference_params_json());
    j["modes"][0]["parity"] = "sideways";
    CHECK_THROWS_AS(config::parse_params(j), ConfigError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(config::load_params("/nonexistent/params.json"), ConfigError); }
  SUBCASE("sweep grid is inclusive") {
    const config::Sweep s{3.8e9, 4.8e9, 0.1e6};
    const auto g = s.grid();
    CHECK(g.size() == 10001);
    CHECK(g.back() == doctest::Approx(4.8e9));
  }
}

TEST_CASE("command line") {
  const auto dir = scratch_dir();
  SUBCASE("unknown subcommand is a usage error") { CHECK(run_cli({"bogus"}) == cli::kConfigError); }
  SUBCASE("no subcommand is a usage error") { CHECK(run_cli({}) == cli::kConfigError); }
  SUBCASE("missing params file writes nothing") {
    const auto out = dir / "never";
    CHECK(run_cli({"--config", "/nonexistent/params.json", "--out", out.string(), "mirror"}) == cli::kConfigError);
    CHECK_FALSE(fs::exists(out));
  }
  SUBCASE("idt-response grid and columns") {
    REQUIRE(run_cli({"--out", dir.string(), "idt-response"}) == cli::kOk);
    const auto text = slurp(dir / "gamma1.csv");
    CHECK(text.rfind("freq_hz,gamma1_hz,lamb_shift_hz\n", 0) == 0);
    CHECK(line_count(text) == 10002);
    CHECK(fs::exists(dir / "response.csv"));
    CHECK_FALSE(fs::exists(dir / "gamma1.svg"));
  }
  SUBCASE("runs are byte-identical") {
    const auto a = dir / "a";
    const auto b = dir / "b";
    REQUIRE(run_cli({"--out", a.string(), "crossings"}) == cli::kOk);
    REQUIRE(run_cli({"--out", b.string(), "crossings"}) == cli::kOk);
    CHECK(slurp(a / "crossings.csv") == slurp(b / "crossings.csv"));
  }
  SUBCASE("numbersplit with plots") {
    REQUIRE(run_cli({"--out", dir.string(), "--svg", "numbersplit"}) == cli::kOk);
    CHECK(count(slurp(dir / "numbersplit.svg"), "<polyline") == 3);
    const auto csv = io::read_csv(dir / "numbersplit.csv");
    CHECK(csv.column("trace_id") >= 0);
  }
  SUBCASE("mirror writes the stopband and mode table") {
    REQUIRE(run_cli({"--out", dir.string(), "mirror"}) == cli::kOk);
    const auto band = nlohmann::json::parse(slurp(dir / "stopband.json"));
    CHECK(band["width_hz"].get<double>() > 85e6);
    CHECK(io::read_csv(dir / "modes.csv").rows.size() >= 8);
  }
  SUBCASE("fit a line from a CSV") {
    io::write_csv({{"x", "y"}, {{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}}}, dir / "line.csv");
    REQUIRE(run_cli({"--out", dir.string(), "fit", "linear", (dir / "line.csv").string()}) == cli::kOk);
    const auto j = nlohmann::json::parse(slurp(dir / "fit_linear.json"));
    CHECK(j["fit"]["params"][0].get<double>() == doctest::Approx(2.0));
    CHECK(j["fit"]["params"][1].get<double>() == doctest::Approx(1.0));
  }
  SUBCASE("fit rejects unknown models and bad datasets") {
    io::write_csv({{"x", "y"}, {{0.0, 1.0}, {1.0, 3.0}}}, dir / "line.csv");
    CHECK(run_cli({"--out", dir.string(), "fit", "parabola", (dir / "line.csv").string()}) == cli::kConfigError);
    io::write_csv({{"a", "b"}, {{0.0, 1.0}}}, dir / "cols.csv");
    CHECK(run_cli({"--out", dir.string(), "fit", "linear", (dir / "cols.csv").string()}) == cli::kConfigError);
  }
  SUBCASE("numerical failures exit 3") {
    io::write_csv({{"x", "y"}, {{0.0, 1.0}}}, dir / "short.csv");
    CHECK(run_cli({"--out", dir.string(), "fit", "linear", (dir / "short.csv").string()}) == cli::kNumericalError);
  }
  SUBCASE("papercheck on the reference configuration passes") {
    CHECK(run_cli({"--out", dir.string(), "papercheck"}) == cli::kOk);
    CHECK(fs::exists(dir / "papercheck.json"));
  }
  SUBCASE("params file is left untouched") {
    const auto path = fs::path(DSLIT_SOURCE_DIR) / "config" / "reference.json";
    const auto before = slurp(path);
    REQUIRE(run_cli({"--config", path.string(), "--out", dir.string(), "mirror"}) == cli::kOk);
    CHECK(slurp(path) == before);
  }
  fs::remove_all(dir);
}
