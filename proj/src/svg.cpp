#include "tnclust/svg.hpp"

#include <algorithm>
#include <fstream>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 640;
constexpr double kMargin = 40.0;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};
constexpr int kPaletteSize = 12;

struct Mapper {
  double x_lo, x_hi, y_lo, y_hi;

  double x(double v) const {
    const double span = x_hi - x_lo;
    const double t = span > 0 ? (v - x_lo) / span : 0.5;
    return kMargin + t * (kWidth - 2 * kMargin);
  }
  double y(double v) const {
    const double span = y_hi - y_lo;
    const double t = span > 0 ? (v - y_lo) / span : 0.5;
    return kHeight - kMargin - t * (kHeight - 2 * kMargin);
  }
};

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_svg(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out;
}

void write_title(std::ofstream& out, const std::string& title) {
  if (title.empty()) return;
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title)
      << "</text>\n";
}

}  // namespace

void write_scatter_svg(const std::filesystem::path& path, const Eigen::MatrixXd& xy,
                       const std::vector<int>& labels, const std::vector<int>& centers,
                       const std::string& title) {
  if (xy.cols() != 2) throw ParamError("write_scatter_svg: need 2-d points");
  if (static_cast<Eigen::Index>(labels.size()) != xy.rows())
    throw ParamError("write_scatter_svg: label count mismatch");

  Mapper map{xy.col(0).minCoeff(), xy.col(0).maxCoeff(), xy.col(1).minCoeff(),
             xy.col(1).maxCoeff()};

  std::ofstream out = open_svg(path);
  write_title(out, title);
  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    const char* color = kPalette[((labels[i] % kPaletteSize) + kPaletteSize) % kPaletteSize];
    out << "<circle cx=\"" << map.x(xy(i, 0)) << "\" cy=\"" << map.y(xy(i, 1))
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
  }
  for (int c : centers) {
    out << "<circle cx=\"" << map.x(xy(c, 0)) << "\" cy=\"" << map.y(xy(c, 1))
        << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void write_line_svg(const std::filesystem::path& path, const std::vector<double>& xs,
                    const std::vector<double>& ys, const std::string& x_label,
                    const std::string& y_label, const std::string& title) {
  if (xs.size() != ys.size() || xs.empty())
    throw ParamError("write_line_svg: need matching non-empty series");

  Mapper map{*std::min_element(xs.begin(), xs.end()),
             *std::max_element(xs.begin(), xs.end()),
             std::min(0.0, *std::min_element(ys.begin(), ys.end())),
             *std::max_element(ys.begin(), ys.end())};

  std::ofstream out = open_svg(path);
  write_title(out, title);
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 14 " << kHeight / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << map.x(xs[i]) << ',' << map.y(ys[i]);
  }
  out << "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << "<circle cx=\"" << map.x(xs[i]) << "\" cy=\"" << map.y(ys[i])
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

}  // namespace tnclust
