#include "ei/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ei/errors.hpp"

namespace ei {

namespace fs = std::filesystem;

std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

namespace {

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

// Plot coordinates only need two decimals; the data lives in the CSV.
std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_')
      out += ch;
    else
      out += '_';
  }
  return out.empty() ? "option" : out;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out << body;
  out.flush();
  if (!out) throw IoFailure("failed while writing " + path.string());
}

std::string render_csv(const EstimateResult& r) {
  std::string body = "row_label,col_label,mean,sd,ci_lo,ci_hi\n";
  const std::size_t R = r.mean.rows();
  const std::size_t C = r.mean.cols();
  const bool has_sd = r.sd.size() == R * C;
  const bool has_ci = r.ci_lo.size() == R * C && r.ci_hi.size() == R * C;
  for (std::size_t g = 0; g < R; ++g) {
    for (std::size_t p = 0; p < C; ++p) {
      body += csv_field(r.mean.row_labels()[g]);
      body += ',';
      body += csv_field(r.mean.col_labels()[p]);
      body += ',';
      body += format_double(r.mean.at(g, p));
      body += ',';
      if (has_sd) body += format_double(r.sd[g * C + p]);
      body += ',';
      if (has_ci) body += format_double(r.ci_lo[g * C + p]);
      body += ',';
      if (has_ci) body += format_double(r.ci_hi[g * C + p]);
      body += '\n';
    }
  }
  return body;
}

std::string render_curve_svg(const EstimateResult& r, std::size_t p) {
  const std::size_t R = r.mean.rows();
  const std::size_t C = r.mean.cols();
  const bool has_sd = r.sd.size() == R * C;

  constexpr double kW = 720.0, kH = 460.0;
  constexpr double kLeft = 70.0, kRight = 24.0, kTop = 44.0, kBottom = 56.0;
  const double x_min = *std::min_element(r.axis.begin(), r.axis.end());
  const double x_max = *std::max_element(r.axis.begin(), r.axis.end());
  const double span = x_max > x_min ? x_max - x_min : 1.0;
  const auto sx = [&](double x) {
    return kLeft + (x - x_min) / span * (kW - kLeft - kRight);
  };
  const auto sy = [&](double y) {
    return kH - kBottom - std::clamp(y, 0.0, 1.0) * (kH - kTop - kBottom);
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"460\" "
      "viewBox=\"0 0 720 460\">\n"
      "<rect width=\"720\" height=\"460\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(kW / 2) + "\" y=\"26\" font-family=\"sans-serif\" "
         "font-size=\"15\" text-anchor=\"middle\">" +
         r.mean.col_labels()[p] + "</text>\n";

  // frame and y grid
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = 0.25 * tick;
    const std::string y = coord(sy(v));
    svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + y + "\" x2=\"" +
           coord(kW - kRight) + "\" y2=\"" + y +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + coord(kLeft - 8) + "\" y=\"" + y +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
           "dominant-baseline=\"middle\">" + coord(v) + "</text>\n";
  }
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" +
         coord(kLeft) + "\" y2=\"" + coord(kH - kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kH - kBottom) + "\" x2=\"" +
         coord(kW - kRight) + "\" y2=\"" + coord(kH - kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // x ticks on the bracket positions
  for (std::size_t g = 0; g < R; ++g) {
    const std::string x = coord(sx(r.axis[g]));
    svg += "<line x1=\"" + x + "\" y1=\"" + coord(kH - kBottom) + "\" x2=\"" + x +
           "\" y2=\"" + coord(kH - kBottom + 5) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + coord(kH - kBottom + 20) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           r.mean.row_labels()[g] + "</text>\n";
  }

  if (has_sd && R > 1) {
    std::string pts;
    for (std::size_t g = 0; g < R; ++g) {
      pts += coord(sx(r.axis[g])) + "," +
             coord(sy(r.mean.at(g, p) + r.sd[g * C + p])) + " ";
    }
    for (std::size_t g = R; g-- > 0;) {
      pts += coord(sx(r.axis[g])) + "," +
             coord(sy(r.mean.at(g, p) - r.sd[g * C + p]));
      if (g != 0) pts += " ";
    }
    svg += "<polygon points=\"" + pts + "\" fill=\"#4477aa\" fill-opacity=\"0.25\"/>\n";
  }

  std::string line;
  for (std::size_t g = 0; g < R; ++g) {
    line += coord(sx(r.axis[g])) + "," + coord(sy(r.mean.at(g, p)));
    if (g + 1 < R) line += " ";
  }
  svg += "<polyline points=\"" + line +
         "\" fill=\"none\" stroke=\"#4477aa\" stroke-width=\"2\"/>\n";
  for (std::size_t g = 0; g < R; ++g) {
    svg += "<circle cx=\"" + coord(sx(r.axis[g])) + "\" cy=\"" +
           coord(sy(r.mean.at(g, p))) + "\" r=\"3\" fill=\"#4477aa\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

ReportFiles report_emit(const EstimateResult& result, const std::string& out_dir,
                        bool csv, bool svg) {
  ReportFiles files;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir + ": " + ec.message());

  if (csv) {
    const fs::path path = fs::path(out_dir) / "estimates.csv";
    write_file(path, render_csv(result));
    files.estimates_csv = path.string();
  }

  const bool curve = !result.axis.empty() && result.mean.rows() > 0 &&
                     result.axis.size() == result.mean.rows();
  if (svg && curve) {
    const fs::path plot_dir = fs::path(out_dir) / "plots";
    fs::create_directories(plot_dir, ec);
    if (ec) throw IoFailure("cannot create " + plot_dir.string() + ": " + ec.message());
    for (std::size_t p = 0; p < result.mean.cols(); ++p) {
      const fs::path path =
          plot_dir / ("curve_" + sanitize(result.mean.col_labels()[p]) + ".svg");
      write_file(path, render_curve_svg(result, p));
      files.svgs.push_back(path.string());
    }
  }
  return files;
}

}  // namespace ei
