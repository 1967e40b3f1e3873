// Command-line driver for the fidelity density-peak clustering pipeline.
//
// Subcommands: cluster, baseline, entropy, sweep, generate. Every flag can
// also come from a flat key=value config file via --config; flags override
// the file. Exit codes: 0 ok, 1 config error, 2 data error, 3 numerical
// failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnclust/baseline_dpc.hpp"
#include "tnclust/data_io.hpp"
#include "tnclust/dpclus.hpp"
#include "tnclust/errors.hpp"
#include "tnclust/metrics.hpp"
#include "tnclust/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DatasetOptions {
  std::string csv_path;
  std::string generate_kind;
  std::string label_col;
  bool has_header = true;
  std::uint64_t seed = 0;
};

struct RunOptions {
  DatasetOptions dataset;
  double dc_percent = 0.002;
  double f_d = 0.99;
  int bond = 8;
  std::string mode = "dpc-consistent";
  int sweeps = 30;
  double lr = 1e-2;
  double tol = 1e-6;
  bool backtrack = true;
  std::string out_dir = "out";
  bool plot = false;
};

void add_dataset_flags(CLI::App* cmd, DatasetOptions& opt) {
  cmd->add_option("--data", opt.csv_path, "CSV dataset path");
  cmd->add_option("--generate", opt.generate_kind,
                  "synthetic dataset: twomoons|smile|threecircles|jain|fourlines|unbalance");
  cmd->add_option("--label-col", opt.label_col,
                  "label column (name, or zero-based index)");
  cmd->add_flag("--has-header,!--no-header", opt.has_header,
                "whether the CSV starts with a header row");
  cmd->add_option("--seed", opt.seed, "RNG seed (generator and training)");
}

void add_run_flags(CLI::App* cmd, RunOptions& opt) {
  add_dataset_flags(cmd, opt.dataset);
  cmd->add_option("--dc-percent", opt.dc_percent, "cutoff quantile d_c");
  cmd->add_option("--fd", opt.f_d, "core connectability fidelity threshold f_d");
  cmd->add_option("--bond", opt.bond, "MPS bond dimension cap D");
  cmd->add_option("--mode", opt.mode, "delta/connectability orientation")
      ->check(CLI::IsMember({"dpc-consistent", "literal"}));
  cmd->add_option("--sweeps", opt.sweeps, "max training sweeps");
  cmd->add_option("--lr", opt.lr, "learning rate");
  cmd->add_option("--tol", opt.tol, "relative loss convergence tolerance");
  cmd->add_flag("--backtrack,!--no-backtrack", opt.backtrack,
                "halve the step when a site update raises the loss");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--plot", opt.plot, "write an SVG scatter for 2-d data");
}

tnclust::LabeledDataset resolve_dataset(const DatasetOptions& opt) {
  const bool have_csv = !opt.csv_path.empty();
  const bool have_gen = !opt.generate_kind.empty();
  if (have_csv == have_gen)
    throw tnclust::ParamError("exactly one of --data and --generate is required");
  if (have_gen)
    return tnclust::generate_synthetic(tnclust::parse_synthetic_kind(opt.generate_kind),
                                       opt.seed);
  std::optional<std::string> label_col;
  if (!opt.label_col.empty()) label_col = opt.label_col;
  return tnclust::load_csv(opt.csv_path, opt.has_header, label_col);
}

tnclust::DpcParams to_params(const RunOptions& opt) {
  tnclust::DpcParams p;
  p.dc_percent = opt.dc_percent;
  p.f_d = opt.f_d;
  p.mode = opt.mode == "literal" ? tnclust::OrientationMode::Literal
                                 : tnclust::OrientationMode::DpcConsistent;
  p.train.bond_cap = opt.bond;
  p.train.max_sweeps = opt.sweeps;
  p.train.learning_rate = opt.lr;
  p.train.convergence_tol = opt.tol;
  p.train.backtrack = opt.backtrack;
  p.train.seed = opt.dataset.seed;
  return p;
}

json dataset_json(const DatasetOptions& opt) {
  json j;
  if (!opt.csv_path.empty()) {
    j["data"] = opt.csv_path;
    if (!opt.label_col.empty()) j["label_col"] = opt.label_col;
    j["has_header"] = opt.has_header;
  } else {
    j["generate"] = opt.generate_kind;
    j["provenance"] = "generated-reconstruction";
  }
  return j;
}

json params_json(const RunOptions& opt) {
  json j;
  j["dataset"] = dataset_json(opt.dataset);
  j["dc_percent"] = opt.dc_percent;
  j["f_d"] = opt.f_d;
  j["bond"] = opt.bond;
  j["mode"] = opt.mode;
  j["sweeps"] = opt.sweeps;
  j["lr"] = opt.lr;
  j["tol"] = opt.tol;
  j["backtrack"] = opt.backtrack;
  return j;
}

std::map<std::string, double> score(const std::vector<int>& pred,
                                    const std::vector<int>& truth) {
  return {
      {"fmi", tnclust::fmi(pred, truth)},
      {"ari", tnclust::ari(pred, truth)},
      {"nmi", tnclust::nmi(pred, truth)},
      {"acc", tnclust::acc(pred, truth)},
  };
}

std::vector<int> local_center_indices(const tnclust::ClusteringResult& result,
                                      const tnclust::DensityProfile& profile) {
  // The center of a local cluster is its density argmax.
  std::vector<int> centers(result.num_local, -1);
  for (std::size_t i = 0; i < result.local_labels.size(); ++i) {
    const int k = result.local_labels[i];
    const int cur = centers[k];
    if (cur == -1 || profile.rho(static_cast<Eigen::Index>(i)) > profile.rho(cur))
      centers[k] = static_cast<int>(i);
  }
  return centers;
}

int cmd_cluster(const RunOptions& opt) {
  const tnclust::LabeledDataset data = resolve_dataset(opt.dataset);
  const tnclust::DpcParams params = to_params(opt);
  const tnclust::PipelineOutput out = tnclust::cluster(data.features, params);

  std::map<std::string, double> metrics;
  if (data.labels) metrics = score(out.clustering.final_labels, *data.labels);
  metrics["num_clusters"] = out.clustering.num_final;
  metrics["sweeps_run"] = out.train_log.sweeps_run;

  tnclust::save_result(opt.out_dir, out.clustering, out.profile, metrics,
                       params_json(opt), opt.dataset.seed);
  if (opt.plot && data.m() == 2) {
    tnclust::write_scatter_svg(fs::path(opt.out_dir) / "scatter.svg", data.features,
                               out.clustering.final_labels,
                               local_center_indices(out.clustering, out.profile),
                               data.name);
  }
  std::cout << "clusters: " << out.clustering.num_final;
  if (data.labels)
    std::cout << "  fmi: " << metrics["fmi"] << "  ari: " << metrics["ari"]
              << "  nmi: " << metrics["nmi"];
  std::cout << '\n';
  return 0;
}

int cmd_baseline(const RunOptions& opt, int k, const std::string& kernel) {
  const tnclust::LabeledDataset data = resolve_dataset(opt.dataset);
  tnclust::DpcBaselineParams params;
  params.dc_percent = opt.dc_percent;
  params.k = k;
  params.kernel =
      kernel == "cutoff" ? tnclust::DpcKernel::Cutoff : tnclust::DpcKernel::Gaussian;
  const std::vector<int> labels = tnclust::dpc_cluster(data.features, params);

  std::map<std::string, double> metrics;
  if (data.labels) metrics = score(labels, *data.labels);
  metrics["num_clusters"] = k;

  json pj = params_json(opt);
  pj["baseline_k"] = k;
  pj["baseline_kernel"] = kernel;

  fs::create_directories(opt.out_dir);
  const fs::path labels_path = fs::path(opt.out_dir) / "labels.csv";
  std::ofstream lout(labels_path);
  if (!lout) throw tnclust::DataError("cannot write '" + labels_path.string() + "'");
  lout << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) lout << i << ',' << labels[i] << '\n';

  json doc;
  for (const auto& [key, value] : metrics) doc[key] = value;
  doc["params"] = pj;
  doc["seed"] = opt.dataset.seed;
  std::ofstream mout(fs::path(opt.out_dir) / "metrics.json");
  mout << doc.dump(2) << '\n';

  if (opt.plot && data.m() == 2) {
    tnclust::write_scatter_svg(fs::path(opt.out_dir) / "scatter.svg", data.features,
                               labels, {}, data.name + " (baseline DPC)");
  }
  std::cout << "clusters: " << k;
  if (data.labels)
    std::cout << "  fmi: " << metrics["fmi"] << "  ari: " << metrics["ari"]
              << "  nmi: " << metrics["nmi"];
  std::cout << '\n';
  return 0;
}

int cmd_entropy(const RunOptions& opt, const std::vector<int>& bonds) {
  if (bonds.empty()) throw tnclust::ParamError("--bonds must list at least one value");
  const tnclust::LabeledDataset data = resolve_dataset(opt.dataset);
  const tnclust::NormalizedDataset norm = tnclust::minmax_normalize(data.features);
  const std::vector<tnclust::ProductState> points = tnclust::encode_dataset(norm);

  json results = json::array();
  std::vector<double> xs, ys;
  for (int d : bonds) {
    tnclust::TrainConfig cfg = to_params(opt).train;
    cfg.bond_cap = d;
    auto [phi, log] = tnclust::train_mps(points, cfg);
    const double loss = log.loss_per_sweep.empty() ? 0.0 : log.loss_per_sweep.back();
    results.push_back({{"bond_dim", d},
                       {"entropy", log.final_entropy_mid_bond},
                       {"final_loss", loss}});
    xs.push_back(d);
    ys.push_back(log.final_entropy_mid_bond);
    std::cout << "D=" << d << "  entropy=" << log.final_entropy_mid_bond
              << "  loss=" << loss << '\n';
  }

  fs::create_directories(opt.out_dir);
  json doc;
  doc["results"] = results;
  doc["params"] = params_json(opt);
  doc["seed"] = opt.dataset.seed;
  std::ofstream out(fs::path(opt.out_dir) / "entropy.json");
  out << doc.dump(2) << '\n';
  if (opt.plot) {
    tnclust::write_line_svg(fs::path(opt.out_dir) / "entropy.svg", xs, ys,
                            "bond dimension D", "mid-bond entropy S",
                            data.name + " entanglement entropy");
  }
  return 0;
}

int cmd_sweep(const RunOptions& opt, std::vector<int> bond_grid,
              std::vector<double> dc_grid, std::vector<double> fd_grid) {
  if (bond_grid.empty()) bond_grid = {opt.bond};
  if (dc_grid.empty()) dc_grid = {opt.dc_percent};
  if (fd_grid.empty()) fd_grid = {opt.f_d};

  const tnclust::LabeledDataset data = resolve_dataset(opt.dataset);
  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "sweep.csv");
  csv << "bond,dc_percent,f_d,seed,num_clusters,fmi,ari,nmi,status\n";

  json cfg_echo = params_json(opt);
  cfg_echo["bond_grid"] = bond_grid;
  cfg_echo["dc_grid"] = dc_grid;
  cfg_echo["fd_grid"] = fd_grid;
  std::ofstream cfg_out(fs::path(opt.out_dir) / "sweep_config.json");
  cfg_out << json({{"params", cfg_echo}, {"seed", opt.dataset.seed}}).dump(2) << '\n';

  int ok_count = 0;
  for (int bond : bond_grid) {
    for (double dc : dc_grid) {
      for (double fd : fd_grid) {
        RunOptions cell = opt;
        cell.bond = bond;
        cell.dc_percent = dc;
        cell.f_d = fd;
        csv << bond << ',' << dc << ',' << fd << ',' << opt.dataset.seed << ',';
        try {
          const tnclust::PipelineOutput out = tnclust::cluster(data.features, to_params(cell));
          csv << out.clustering.num_final << ',';
          if (data.labels) {
            csv << tnclust::fmi(out.clustering.final_labels, *data.labels) << ','
                << tnclust::ari(out.clustering.final_labels, *data.labels) << ','
                << tnclust::nmi(out.clustering.final_labels, *data.labels);
          } else {
            csv << ",,";
          }
          csv << ",ok\n";
          ++ok_count;
        } catch (const std::exception& e) {
          csv << ",,,,error\n";
          std::cerr << "grid point (D=" << bond << ", dc=" << dc << ", fd=" << fd
                    << ") failed: " << e.what() << '\n';
        }
      }
    }
  }
  if (ok_count == 0) {
    std::cerr << "all grid points failed\n";
    return 3;
  }
  return 0;
}

// Expands `--config FILE` into `--key=value` tokens from a flat key=value
// file, inserted right after the subcommand so explicit flags override them.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw tnclust::ParamError("cannot open config file '" + config_path + "'");
  std::vector<std::string> expanded;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw tnclust::ParamError("config file: expected key=value, got '" + line + "'");
    std::string key = line.substr(first, eq - first);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::size_t vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    value.erase(value.find_last_not_of(" \t") + 1);
    expanded.push_back("--" + key + "=" + value);
  }

  std::vector<std::string> out;
  if (!args.empty()) out.push_back(args[0]);  // subcommand name
  out.insert(out.end(), expanded.begin(), expanded.end());
  if (args.size() > 1) out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

void allow_overrides(CLI::App* cmd) {
  for (CLI::Option* opt : cmd->get_options())
    opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

int cmd_generate(const std::string& kind, std::uint64_t seed, const std::string& out_dir) {
  const tnclust::LabeledDataset data =
      tnclust::generate_synthetic(tnclust::parse_synthetic_kind(kind), seed);
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / (kind + ".csv");
  tnclust::save_labeled_csv(data, path);
  std::cout << path.string() << ": " << data.n() << " points, " << data.m()
            << " features\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fidelity density-peak clustering over matrix product states"};
  app.require_subcommand(1);

  RunOptions cluster_opt;
  CLI::App* cluster_cmd = app.add_subcommand("cluster", "run the clustering pipeline");
  add_run_flags(cluster_cmd, cluster_opt);

  RunOptions baseline_opt;
  int baseline_k = 2;
  std::string baseline_kernel = "gaussian";
  CLI::App* baseline_cmd = app.add_subcommand("baseline", "classical density-peak baseline");
  add_run_flags(baseline_cmd, baseline_opt);
  baseline_cmd->add_option("--k", baseline_k, "number of cluster centers");
  baseline_cmd->add_option("--kernel", baseline_kernel, "density kernel")
      ->check(CLI::IsMember({"cutoff", "gaussian"}));

  RunOptions entropy_opt;
  std::vector<int> entropy_bonds;
  CLI::App* entropy_cmd =
      app.add_subcommand("entropy", "mid-bond entanglement entropy per bond dimension");
  add_run_flags(entropy_cmd, entropy_opt);
  entropy_cmd->add_option("--bonds", entropy_bonds, "bond dimensions to train")
      ->delimiter(',');

  RunOptions sweep_opt;
  std::vector<int> bond_grid;
  std::vector<double> dc_grid, fd_grid;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter grid over the pipeline");
  add_run_flags(sweep_cmd, sweep_opt);
  sweep_cmd->add_option("--bond-grid", bond_grid, "bond dimensions")->delimiter(',');
  sweep_cmd->add_option("--dc-grid", dc_grid, "dc_percent values")->delimiter(',');
  sweep_cmd->add_option("--fd-grid", fd_grid, "f_d values")->delimiter(',');

  std::string gen_kind;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "out";
  CLI::App* gen_cmd = app.add_subcommand("generate", "emit a synthetic dataset CSV");
  gen_cmd->add_option("--kind", gen_kind, "dataset kind")->required();
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--out", gen_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*cluster_cmd) return cmd_cluster(cluster_opt);
    if (*baseline_cmd) return cmd_baseline(baseline_opt, baseline_k, baseline_kernel);
    if (*entropy_cmd) return cmd_entropy(entropy_opt, entropy_bonds);
    if (*sweep_cmd) return cmd_sweep(sweep_opt, bond_grid, dc_grid, fd_grid);
    if (*gen_cmd) return cmd_generate(gen_kind, gen_seed, gen_out);
  } catch (const tnclust::ParamError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const tnclust::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
