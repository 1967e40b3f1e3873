#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "tnclust/dpclus.hpp"

namespace tnclust {

struct LabeledDataset {
  Eigen::MatrixXd features;  // original units
  std::optional<std::vector<int>> labels;
  std::string name;

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index m() const { return features.cols(); }
};

enum class SyntheticKind { Twomoons, Smile, Threecircles, Jain, Fourlines, Unbalance };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string synthetic_kind_name(SyntheticKind kind);

/// Parametric reconstructions of the named benchmark sets; point and
/// cluster counts are fixed per set (200/2, 266/3, 299/3, 373/2, 512/4,
/// 6500/8), coordinates are deterministic per seed.
LabeledDataset generate_synthetic(SyntheticKind kind, std::uint64_t seed);

/// CSV reader: comma-separated, UTF-8, optional header row. The label
/// column may be named (requires a header) or given as a zero-based index.
LabeledDataset load_csv(const std::filesystem::path& path, bool has_header,
                        const std::optional<std::string>& label_column = std::nullopt);

/// Writes a labeled dataset as CSV (features then a trailing `label`
/// column when labels are present).
void save_labeled_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

/// Writes labels.csv (index,label,is_core,rho,delta) and metrics.json
/// (the metric entries plus params and seed) into `dir`.
void save_result(const std::filesystem::path& dir, const ClusteringResult& result,
                 const DensityProfile& profile, const std::map<std::string, double>& metrics,
                 const nlohmann::json& params, std::uint64_t seed);

}  // namespace tnclust
