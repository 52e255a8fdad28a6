#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dslit/bragg.hpp"
#include "dslit/estimator.hpp"
#include "dslit/jaynes_cummings.hpp"
#include "dslit/least_squares.hpp"
#include "dslit/spectra.hpp"

namespace dslit::io {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// 12 significant digits, C locale.
std::string format_number(double v);

// Header row, then one line per row, '\n' terminated. Throws IoError.
void write_csv(const Table& table, const std::filesystem::path& path);

struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> numbers(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);

Table mode_table(const bragg::ModeTable& modes);
Table crossing_table(const jc::CrossingSpectrum& spectrum);
Table trace_table(const spectra::SpectrumTrace& trace);
Table trace_batch_table(const std::vector<spectra::SpectrumTrace>& traces);
Table dataset_table(const estimator::SyntheticDataset& data);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  double vertical_offset = 0.0;  // added cumulatively to successive series
  double x_scale = 1.0;          // x values are divided by this for tick labels
};

// Self-contained SVG line plot: one polyline per series plus axes.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options);
void write_svg(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const PlotOptions& options);

nlohmann::json fit_result_json(const fit::FitResult& result, const std::vector<std::string>& names = {});
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace dslit::io
