#include "tnclust/data_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "tnclust/errors.hpp"

namespace tnclust {

namespace {

constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

struct Builder {
  std::vector<Eigen::RowVector2d> pts;
  std::vector<int> labels;

  void add(double x, double y, int label) {
    pts.emplace_back(x, y);
    labels.push_back(label);
  }

  LabeledDataset finish(std::string name) {
    LabeledDataset d;
    d.features.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) d.features.row(i) = pts[i];
    d.labels = std::move(labels);
    d.name = std::move(name);
    return d;
  }
};

void gaussian_blob(Builder& b, Rng& rng, double cx, double cy, double sigma, int count,
                   int label) {
  std::normal_distribution<double> g(0.0, sigma);
  for (int i = 0; i < count; ++i) b.add(cx + g(rng), cy + g(rng), label);
}

// Points along a circular arc, evenly spaced in angle with radial jitter.
void arc(Builder& b, Rng& rng, double cx, double cy, double radius, double a0, double a1,
         int count, double noise, int label) {
  std::normal_distribution<double> g(0.0, noise);
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.5;
    const double a = a0 + t * (a1 - a0);
    b.add(cx + radius * std::cos(a) + g(rng), cy + radius * std::sin(a) + g(rng), label);
  }
}

LabeledDataset make_twomoons(Rng& rng) {
  Builder b;
  std::normal_distribution<double> g(0.0, 0.05);
  for (int i = 0; i < 100; ++i) {
    const double t = kPi * i / 99.0;
    b.add(std::cos(t) + g(rng), std::sin(t) + g(rng), 0);
  }
  for (int i = 0; i < 100; ++i) {
    const double t = kPi * i / 99.0;
    b.add(1.0 - std::cos(t) + g(rng), 0.6 - std::sin(t) + g(rng), 1);
  }
  return b.finish("twomoons");
}

LabeledDataset make_smile(Rng& rng) {
  Builder b;
  gaussian_blob(b, rng, -0.45, 0.45, 0.07, 66, 0);   // left eye
  gaussian_blob(b, rng, 0.45, 0.45, 0.07, 66, 1);    // right eye
  arc(b, rng, 0.0, 0.25, 0.85, -2.45, -0.69, 134, 0.02, 2);  // mouth
  return b.finish("smile");
}

LabeledDataset make_threecircles(Rng& rng) {
  Builder b;
  arc(b, rng, 0.0, 0.0, 0.3, 0.0, 2.0 * kPi * 59.0 / 60.0, 60, 0.012, 0);
  arc(b, rng, 0.0, 0.0, 0.65, 0.0, 2.0 * kPi * 99.0 / 100.0, 100, 0.012, 1);
  arc(b, rng, 0.0, 0.0, 1.0, 0.0, 2.0 * kPi * 138.0 / 139.0, 139, 0.012, 2);
  return b.finish("threecircles");
}

LabeledDataset make_jain(Rng& rng) {
  // Two crescents of clearly different density, as in the original set
  // (276 + 97 points).
  Builder b;
  std::normal_distribution<double> g(0.0, 0.035);
  for (int i = 0; i < 276; ++i) {
    const double t = kPi * i / 275.0;
    b.add(1.2 * std::cos(t) + g(rng), -1.05 * std::sin(t) + 0.35 + g(rng), 0);
  }
  for (int i = 0; i < 97; ++i) {
    const double t = kPi * i / 96.0;
    b.add(1.35 * std::cos(t) + 0.55 + g(rng), 1.05 * std::sin(t) + 0.25 + g(rng), 1);
  }
  return b.finish("jain");
}

LabeledDataset make_fourlines(Rng& rng) {
  Builder b;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.018);
  for (int line = 0; line < 4; ++line) {
    const double x0 = 0.3 * line;
    for (int i = 0; i < 128; ++i) {
      // Denser toward the lower end of each segment.
      const double t = std::pow(u(rng), 1.5);
      b.add(x0 + 0.12 * t + g(rng), t + g(rng), line);
    }
  }
  return b.finish("fourlines");
}

LabeledDataset make_unbalance(Rng& rng) {
  Builder b;
  gaussian_blob(b, rng, 15.0, 20.0, 2.0, 2000, 0);
  gaussian_blob(b, rng, 15.0, 50.0, 2.0, 2000, 1);
  gaussian_blob(b, rng, 15.0, 80.0, 2.0, 2000, 2);
  gaussian_blob(b, rng, 55.0, 15.0, 1.0, 100, 3);
  gaussian_blob(b, rng, 55.0, 45.0, 1.0, 100, 4);
  gaussian_blob(b, rng, 55.0, 75.0, 1.0, 100, 5);
  gaussian_blob(b, rng, 85.0, 30.0, 1.0, 100, 6);
  gaussian_blob(b, rng, 85.0, 62.0, 1.0, 100, 7);
  return b.finish("unbalance");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace and CR
    std::size_t a = 0, z = cell.size();
    while (a < z && std::isspace(static_cast<unsigned char>(cell[a]))) ++a;
    while (z > a && std::isspace(static_cast<unsigned char>(cell[z - 1]))) --z;
    cells.push_back(cell.substr(a, z - a));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, const std::filesystem::path& path, int line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size()) {
    std::ostringstream msg;
    msg << path.string() << ": line " << line_no << ": cell '" << cell
        << "' is not a number";
    throw DataError(msg.str());
  }
  return v;
}

long parse_label(const std::string& cell, const std::filesystem::path& path, int line_no) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (cell.empty() || end != begin + cell.size()) {
    std::ostringstream msg;
    msg << path.string() << ": line " << line_no << ": label '" << cell
        << "' is not an integer";
    throw DataError(msg.str());
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "twomoons") return SyntheticKind::Twomoons;
  if (name == "smile") return SyntheticKind::Smile;
  if (name == "threecircles") return SyntheticKind::Threecircles;
  if (name == "jain") return SyntheticKind::Jain;
  if (name == "fourlines") return SyntheticKind::Fourlines;
  if (name == "unbalance") return SyntheticKind::Unbalance;
  throw ParamError("unknown synthetic dataset '" + name + "'");
}

std::string synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Twomoons: return "twomoons";
    case SyntheticKind::Smile: return "smile";
    case SyntheticKind::Threecircles: return "threecircles";
    case SyntheticKind::Jain: return "jain";
    case SyntheticKind::Fourlines: return "fourlines";
    case SyntheticKind::Unbalance: return "unbalance";
  }
  throw ParamError("unknown synthetic dataset kind");
}

LabeledDataset generate_synthetic(SyntheticKind kind, std::uint64_t seed) {
  Rng rng(seed);
  switch (kind) {
    case SyntheticKind::Twomoons: return make_twomoons(rng);
    case SyntheticKind::Smile: return make_smile(rng);
    case SyntheticKind::Threecircles: return make_threecircles(rng);
    case SyntheticKind::Jain: return make_jain(rng);
    case SyntheticKind::Fourlines: return make_fourlines(rng);
    case SyntheticKind::Unbalance: return make_unbalance(rng);
  }
  throw ParamError("unknown synthetic dataset kind");
}

LabeledDataset load_csv(const std::filesystem::path& path, bool has_header,
                        const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");

  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto cells = split_csv_line(line);
    if (has_header && header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (!rows.empty() && cells.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path.string() << ": line " << line_no << ": expected "
          << rows.front().size() << " cells, got " << cells.size();
      throw DataError(msg.str());
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError(path.string() + ": no data rows");

  const int width = static_cast<int>(rows.front().size());
  int label_idx = -1;
  if (label_column && !label_column->empty()) {
    const std::string& spec = *label_column;
    const bool numeric = std::all_of(spec.begin(), spec.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
    if (numeric) {
      label_idx = std::stoi(spec);
      if (label_idx < 0 || label_idx >= width)
        throw ParamError("label column index " + spec + " out of range");
    } else {
      if (header.empty())
        throw ParamError("label column '" + spec + "' given by name but the file has no header");
      auto it = std::find(header.begin(), header.end(), spec);
      if (it == header.end())
        throw ParamError("label column '" + spec + "' not found in header");
      label_idx = static_cast<int>(it - header.begin());
    }
  }

  LabeledDataset d;
  d.name = path.stem().string();
  const int m = label_idx >= 0 ? width - 1 : width;
  if (m < 1) throw DataError(path.string() + ": no feature columns");
  d.features.resize(static_cast<Eigen::Index>(rows.size()), m);
  std::vector<int> labels;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int file_line = static_cast<int>(r) + (has_header ? 2 : 1);
    int col = 0;
    for (int c = 0; c < width; ++c) {
      if (c == label_idx) {
        labels.push_back(static_cast<int>(parse_label(rows[r][c], path, file_line)));
      } else {
        d.features(static_cast<Eigen::Index>(r), col++) =
            parse_double(rows[r][c], path, file_line);
      }
    }
  }
  if (label_idx >= 0) d.labels = std::move(labels);
  return d;
}

void save_labeled_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (Eigen::Index j = 0; j < dataset.m(); ++j) {
    if (j) out << ',';
    out << 'x' << j;
  }
  if (dataset.labels) out << ",label";
  out << '\n';
  for (Eigen::Index i = 0; i < dataset.n(); ++i) {
    for (Eigen::Index j = 0; j < dataset.m(); ++j) {
      if (j) out << ',';
      out << format_double(dataset.features(i, j));
    }
    if (dataset.labels) out << ',' << (*dataset.labels)[i];
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void save_result(const std::filesystem::path& dir, const ClusteringResult& result,
                 const DensityProfile& profile, const std::map<std::string, double>& metrics,
                 const nlohmann::json& params, std::uint64_t seed) {
  std::filesystem::create_directories(dir);

  const std::filesystem::path labels_path = dir / "labels.csv";
  std::ofstream labels(labels_path);
  if (!labels) throw DataError("cannot write '" + labels_path.string() + "'");
  labels << "index,label,is_core,rho,delta\n";
  for (std::size_t i = 0; i < result.final_labels.size(); ++i) {
    labels << i << ',' << result.final_labels[i] << ','
           << static_cast<int>(result.is_core[i]) << ','
           << format_double(profile.rho(static_cast<Eigen::Index>(i))) << ','
           << format_double(profile.delta(static_cast<Eigen::Index>(i))) << '\n';
  }
  if (!labels) throw DataError("write failed for '" + labels_path.string() + "'");

  nlohmann::json doc;
  for (const auto& [key, value] : metrics) doc[key] = value;
  doc["params"] = params;
  doc["seed"] = seed;
  const std::filesystem::path metrics_path = dir / "metrics.json";
  std::ofstream out(metrics_path);
  if (!out) throw DataError("cannot write '" + metrics_path.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("write failed for '" + metrics_path.string() + "'");
}

}  // namespace tnclust
