#include "dslit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dslit/errors.hpp"

namespace dslit::io {

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw IoError("write_csv: ragged table");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_csv: cannot open " + path.string());
  f << out.str();
  if (!f) throw IoError("write_csv: write failed for " + path.string());
}

int CsvData::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

std::vector<double> CsvData::numbers(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw ConfigError("CSV column '" + name + "' missing");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string& s = row.at(static_cast<std::size_t>(c));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      throw ConfigError("CSV column '" + name + "': bad number '" + s + "'");
    }
  }
  return out;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open dataset " + path.string());
  CsvData data;
  std::string line;
  if (!std::getline(f, line)) throw ConfigError("dataset " + path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  data.columns = split(line);
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != data.columns.size()) throw ConfigError("dataset row has wrong field count");
    data.rows.push_back(std::move(fields));
  }
  return data;
}

Table mode_table(const bragg::ModeTable& modes) {
  Table t{{"index", "freq_hz", "parity", "transverse", "kappa_hz", "g_hz"}, {}};
  for (const auto& m : modes.modes) {
    t.rows.push_back({static_cast<long long>(m.longitudinal_index), m.freq,
                      std::string(m.parity == bragg::Parity::Even ? "even" : "odd"),
                      static_cast<long long>(m.transverse ? 1 : 0), m.loss, m.coupling});
  }
  return t;
}

Table crossing_table(const jc::CrossingSpectrum& spectrum) {
  Table t;
  t.columns.push_back("current");
  const std::size_t width = spectrum.branches.empty() ? 0 : spectrum.branches.front().size();
  for (std::size_t b = 0; b < width; ++b) t.columns.push_back("branch_" + std::to_string(b));
  for (std::size_t i = 0; i < spectrum.currents.size(); ++i) {
    std::vector<Cell> row{spectrum.currents[i]};
    for (double f : spectrum.branches[i]) row.emplace_back(f);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table trace_table(const spectra::SpectrumTrace& trace) {
  Table t{{"freq_hz", "p_e"}, {}};
  for (std::size_t i = 0; i < trace.freqs.size(); ++i) t.rows.push_back({trace.freqs[i], trace.values[i]});
  return t;
}

Table trace_batch_table(const std::vector<spectra::SpectrumTrace>& traces) {
  Table t{{"trace_id", "freq_hz", "p_e"}, {}};
  for (std::size_t k = 0; k < traces.size(); ++k) {
    for (std::size_t i = 0; i < traces[k].freqs.size(); ++i) {
      t.rows.push_back({static_cast<long long>(k), traces[k].freqs[i], traces[k].values[i]});
    }
  }
  return t;
}

Table dataset_table(const estimator::SyntheticDataset& data) {
  Table t{{"x", "y", "y_true", "group"}, {}};
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    t.rows.push_back({data.x[i], data.y_noisy[i], data.y_true[i],
                      static_cast<long long>(data.group.empty() ? 0 : data.group[i])});
  }
  return t;
}

std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  constexpr double kWidth = 720.0;
  constexpr double kHeight = 480.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 60.0;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double shift = options.vertical_offset * static_cast<double>(k);
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      x_lo = std::min(x_lo, series[k].x[i]);
      x_hi = std::max(x_hi, series[k].x[i]);
      y_lo = std::min(y_lo, series[k].y[i] + shift);
      y_hi = std::max(y_hi, series[k].y[i] + shift);
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << xml_escape(options.title) << "</text>\n";
  s << "<g stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph << "\"/>\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph << "\"/>\n"
    << "</g>\n";
  s << "<g font-size=\"11\" text-anchor=\"middle\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / 4.0;
    s << "<text x=\"" << format_number(px(x)) << "\" y=\"" << kTop + ph + 16 << "\">"
      << format_number(x / options.x_scale) << "</text>\n";
    const double y = y_lo + (y_hi - y_lo) * i / 4.0;
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_number(py(y) + 4) << "\" text-anchor=\"end\">"
      << format_number(y) << "</text>\n";
  }
  s << "</g>\n";
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << xml_escape(options.x_label) << "</text>\n";
  s << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
    << kTop + ph / 2 << ")\">" << xml_escape(options.y_label) << "</text>\n";
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double shift = options.vertical_offset * static_cast<double>(k);
    s << "<polyline fill=\"none\" stroke=\"" << kColors[k % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      s << (i ? " " : "") << format_number(px(series[k].x[i])) << ','
        << format_number(py(series[k].y[i] + shift));
    }
    s << "\"><title>" << xml_escape(series[k].label) << "</title></polyline>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_svg(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const PlotOptions& options) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_svg: cannot open " + path.string());
  f << render_svg(series, options);
  if (!f) throw IoError("write_svg: write failed for " + path.string());
}

nlohmann::json fit_result_json(const fit::FitResult& result, const std::vector<std::string>& names) {
  nlohmann::json doc;
  doc["params"] = result.params;
  if (!names.empty()) doc["param_names"] = names;
  nlohmann::json cov = nlohmann::json::array();
  for (Eigen::Index i = 0; i < result.covariance.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < result.covariance.cols(); ++j) row.push_back(number_or_null(result.covariance(i, j)));
    cov.push_back(row);
  }
  doc["covariance"] = cov;
  doc["residual_norm"] = result.residual_norm;
  doc["iterations"] = result.iterations;
  doc["converged"] = result.converged;
  return doc;
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_json: cannot open " + path.string());
  f << doc.dump(2) << '\n';
  if (!f) throw IoError("write_json: write failed for " + path.string());
}

}  // namespace dslit::io
