#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpdp/dispatcher.hpp"
#include "dpdp/generator.hpp"
#include "dpdp/instance_io.hpp"
#include "dpdp/report.hpp"

namespace fs = std::filesystem;
using namespace dpdp;

namespace {

struct RunOptions {
  std::string instance_path;
  std::string out_dir;
  double lambda1 = -1.0, lambda2 = -1.0, lambda3 = -1.0, lambda4 = -1.0;
  Seconds urgency = -1;
  double vns_seconds = 0.0;
  std::int64_t vns_iterations = 2000;
  std::uint64_t seed = 0;
  int max_epochs = 100000;
};

CfaConfig build_config(const Instance& inst, const RunOptions& opt) {
  CfaConfig config = default_config(inst);
  if (opt.lambda1 >= 0.0) config.lambdas.l1 = opt.lambda1;
  if (opt.lambda2 >= 0.0) config.lambdas.l2 = opt.lambda2;
  if (opt.lambda3 >= 0.0) config.lambdas.l3 = opt.lambda3;
  if (opt.lambda4 >= 0.0) config.lambdas.l4 = opt.lambda4;
  if (opt.urgency >= 0) config.urgency_s = opt.urgency;
  config.vns_budget_seconds = opt.vns_seconds;
  config.vns_budget_iterations = opt.vns_iterations;
  config.seed = opt.seed;
  return config;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int run_one(const Instance& inst, const RunOptions& opt, bool quiet) {
  const CfaConfig config = build_config(inst, opt);
  CfaDispatcher dispatcher(inst, config);
  EpisodeConfig episode_config;
  episode_config.max_epochs = opt.max_epochs;

  const auto start = std::chrono::steady_clock::now();
  const EpisodeResult episode = run_episode(inst, dispatcher.callback(), episode_config);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

  const Report report = make_report(inst, episode, config, wall.count());
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "report.json", report.to_json().dump(2) + "\n");
    write_file(fs::path(opt.out_dir) / "episode.jsonl", episode_to_jsonl(inst, episode));
    write_file(fs::path(opt.out_dir) / "timeline.jsonl",
               realized_to_jsonl(inst, episode.realized));
    write_file(fs::path(opt.out_dir) / "series.csv", series_to_csv(report));
  }
  if (!quiet) {
    std::cout << report.to_json().dump(2) << "\n";
    for (const Violation& v : episode.violations) {
      std::cerr << "violation: vehicle " << v.vehicle << " " << v.kind << ": " << v.detail
                << "\n";
    }
  }
  return episode.all_delivered && episode.violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispatch engine for dynamic pickup-and-delivery with docking ports"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic instance");
  GeneratorSpec spec;
  std::string gen_out = "instance.json";
  std::string preset;
  std::string temporal = "uniform";
  gen->add_option("--out", gen_out, "output file");
  gen->add_option("--id", spec.id, "instance id");
  gen->add_option("--factories", spec.factory_count);
  gen->add_option("--ports", spec.port_count);
  gen->add_option("--vehicles", spec.vehicle_count);
  gen->add_option("--orders", spec.order_count);
  gen->add_option("--horizon", spec.planning_horizon_s, "release horizon, seconds");
  gen->add_option("--due-offset", spec.due_offset_s);
  gen->add_option("--box", spec.box_m, "square side, meters");
  gen->add_option("--speed", spec.speed_mps);
  gen->add_option("--temporal", temporal, "uniform|bursty");
  gen->add_option("--seed", spec.seed)->envname("DPDP_SEED");
  gen->add_option("--preset", preset, "congested|sparse (overrides shape flags)");

  // run
  auto* run = app.add_subcommand("run", "run one episode with the CFA-VNS dispatcher");
  RunOptions opt;
  run->add_option("--instance", opt.instance_path)->required();
  run->add_option("--out", opt.out_dir, "output directory");
  run->add_option("--lambda1", opt.lambda1)->envname("DPDP_LAMBDA1");
  run->add_option("--lambda2", opt.lambda2)->envname("DPDP_LAMBDA2");
  run->add_option("--lambda3", opt.lambda3)->envname("DPDP_LAMBDA3");
  run->add_option("--lambda4", opt.lambda4)->envname("DPDP_LAMBDA4");
  run->add_option("--urgency", opt.urgency)->envname("DPDP_URGENCY");
  run->add_option("--vns-seconds", opt.vns_seconds)->envname("DPDP_VNS_SECONDS");
  run->add_option("--vns-iterations", opt.vns_iterations)->envname("DPDP_VNS_ITERATIONS");
  run->add_option("--seed", opt.seed)->envname("DPDP_SEED");
  run->add_option("--max-epochs", opt.max_epochs);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a lambda sweep, one episode per cell");
  std::string sweep_instance, sweep_out = "sweep";
  std::vector<double> sweep_l3{-1.0}, sweep_l4{-1.0};
  std::vector<std::uint64_t> sweep_seeds{0};
  RunOptions sweep_base;
  sweep->add_option("--instance", sweep_instance)->required();
  sweep->add_option("--out", sweep_out);
  sweep->add_option("--lambda3", sweep_l3, "values for lambda3");
  sweep->add_option("--lambda4", sweep_l4, "values for lambda4");
  sweep->add_option("--seeds", sweep_seeds);
  sweep->add_option("--vns-seconds", sweep_base.vns_seconds);
  sweep->add_option("--vns-iterations", sweep_base.vns_iterations);

  // validate
  auto* validate = app.add_subcommand("validate", "check an instance file");
  std::string validate_path;
  validate->add_option("--instance", validate_path)->required();

  // replay
  auto* replay = app.add_subcommand("replay", "re-simulate a logged episode");
  std::string replay_instance, replay_episode_path;
  replay->add_option("--instance", replay_instance)->required();
  replay->add_option("--episode", replay_episode_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Instance inst;
      if (preset == "congested") {
        inst = congested_preset(spec.seed);
      } else if (preset == "sparse") {
        inst = sparse_preset(spec.seed);
      } else if (preset.empty()) {
        spec.temporal = temporal == "bursty" ? TemporalModel::Bursty : TemporalModel::Uniform;
        inst = generate(spec);
      } else {
        std::cerr << "unknown preset '" << preset << "'\n";
        return 2;
      }
      save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << " (" << inst.order_count() << " orders, "
                << inst.vehicle_count() << " vehicles)\n";
      return 0;
    }

    if (run->parsed()) {
      const Instance inst = load_instance(opt.instance_path);
      return run_one(inst, opt, false);
    }

    if (sweep->parsed()) {
      const Instance inst = load_instance(sweep_instance);
      fs::create_directories(sweep_out);
      struct Cell {
        double l3, l4;
        std::uint64_t seed;
        std::string dir;
      };
      std::vector<Cell> cells;
      for (double l3 : sweep_l3) {
        for (double l4 : sweep_l4) {
          for (std::uint64_t seed : sweep_seeds) {
            std::ostringstream name;
            name << "l3_" << l3 << "_l4_" << l4 << "_seed_" << seed;
            cells.push_back({l3, l4, seed, (fs::path(sweep_out) / name.str()).string()});
          }
        }
      }
      std::vector<std::future<int>> futures;
      futures.reserve(cells.size());
      for (const Cell& cell : cells) {
        futures.push_back(std::async(std::launch::async, [&inst, &sweep_base, cell]() {
          RunOptions cell_opt = sweep_base;
          cell_opt.lambda3 = cell.l3;
          cell_opt.lambda4 = cell.l4;
          cell_opt.seed = cell.seed;
          cell_opt.out_dir = cell.dir;
          return run_one(inst, cell_opt, true);
        }));
      }
      int rc = 0;
      std::ostringstream summary;
      summary << "cell,exit\n";
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const int cell_rc = futures[i].get();
        summary << cells[i].dir << ',' << cell_rc << '\n';
        rc = std::max(rc, cell_rc);
      }
      write_file(fs::path(sweep_out) / "summary.csv", summary.str());
      std::cout << summary.str();
      return rc;
    }

    if (validate->parsed()) {
      const Instance inst = load_instance(validate_path);
      std::cout << "ok: " << inst.id << " (" << inst.factory_count() << " factories, "
                << inst.vehicle_count() << " vehicles, " << inst.order_count() << " orders)\n";
      return 0;
    }

    if (replay->parsed()) {
      const Instance inst = load_instance(replay_instance);
      std::ifstream in(replay_episode_path);
      if (!in) throw std::runtime_error("cannot open " + replay_episode_path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      const auto actions = actions_from_jsonl(inst, buffer.str());
      const EpisodeResult episode = replay_episode(inst, actions);
      std::cout << "score " << episode.score << " all_delivered "
                << (episode.all_delivered ? "true" : "false") << "\n";
      return episode.all_delivered && episode.violations.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
