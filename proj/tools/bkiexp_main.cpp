// Command-line front end: map generation, single exploration runs, Monte
// Carlo benchmarks and CSV summaries.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bkiexp/errors.hpp"
#include "bkiexp/experiment.hpp"
#include "bkiexp/exploration.hpp"
#include "bkiexp/pgm.hpp"

namespace {

using namespace bkiexp;

struct MapOptions {
  std::string kind = "structured";
  double width = 24.0;
  double height = 14.0;
  double res = 0.2;
  std::uint64_t seed = 7;
};

void add_map_geometry(CLI::App* cmd, MapOptions& m) {
  cmd->add_option("--width", m.width, "Map width in meters")->capture_default_str();
  cmd->add_option("--height", m.height, "Map height in meters")->capture_default_str();
  cmd->add_option("--res", m.res, "Resolution in meters per cell")->capture_default_str();
}

int run_genmap(const MapOptions& m, const std::string& out, bool ascii) {
  MapSource src;
  src.kind = parse_map_kind(m.kind);
  if (src.kind == MapKind::Pgm) throw std::invalid_argument("genmap: --kind must name a generator");
  src.width_m = m.width;
  src.height_m = m.height;
  src.resolution_m = m.res;
  src.seed = m.seed;
  const auto truth = build_map(src);
  write_pgm(truth, out, ascii ? PgmFormat::Ascii : PgmFormat::Binary);
  std::cout << "wrote " << out << " (" << truth.width_cells() << "x" << truth.height_cells() << ", "
            << truth.count(CellState::Free) << " free cells)\n";
  return 0;
}

struct ExploreOptions {
  MapOptions map;
  std::string map_path;
  std::string engine = "bki_bo";
  int n = 30;
  std::optional<int> nq;
  std::optional<int> epochs;
  double alpha = 0.5;
  double ith = 0.05;
  int nloop = 50;
  std::uint64_t seed = 1;
  int trial = 0;
  std::string out_dir = "explore_out";
  std::vector<std::string> overrides;
  std::optional<double> start_x, start_y;
  double start_heading = 0.0;
};

int run_explore(const ExploreOptions& o) {
  MapSource src;
  if (!o.map_path.empty()) {
    src.kind = MapKind::Pgm;
    src.pgm_path = o.map_path;
  } else {
    src.kind = parse_map_kind(o.map.kind);
  }
  src.width_m = o.map.width;
  src.height_m = o.map.height;
  src.resolution_m = o.map.res;
  src.seed = o.map.seed;

  ExperimentSpec spec;
  spec.map = src;
  spec.engines = {parse_engine(o.engine)};
  spec.n_values = {o.n};
  spec.trials = 1;
  spec.seed_base = o.seed;
  spec.n_query = o.nq;
  spec.epochs = o.epochs;
  spec.base.alpha = o.alpha;
  spec.base.info_threshold = o.ith;
  spec.base.loop_limit = o.nloop;
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || !apply_exploration_key(spec.base, kv.substr(0, eq), kv.substr(eq + 1))) {
      throw std::invalid_argument("--set: unknown or malformed '" + kv + "'");
    }
  }
  spec.validate();

  const auto truth = build_map(src);
  Action start = default_start(src, truth);
  if (o.start_x || o.start_y) {
    if (!o.start_x || !o.start_y) throw std::invalid_argument("--start-x and --start-y go together");
    start = Action(*o.start_x, *o.start_y, o.start_heading);
  }

  ExplorationConfig cfg = spec.run_config(spec.engines.front(), o.n, 0);
  cfg.rng_seed = o.seed;
  ExplorationLog log = explore(cfg, truth, start);
  log.trial = o.trial;

  std::filesystem::create_directories(o.out_dir);
  const std::filesystem::path dir(o.out_dir);
  const auto stem = run_file_stem(log.method, o.n, o.trial);
  write_text_file(dir / (stem + "_steps.csv"), format_steps_csv(log));
  write_text_file(dir / (stem + "_decisions.csv"), format_decisions_csv(log));

  const auto s = summarize_run(step_rows(log));
  std::printf("%s N=%d seed=%llu steps=%d%s final_entropy=%.1f bits (initial %.1f) coverage=%.3f "
              "step_time=%.4fs inference_share=%.2f%%\n",
              log.method.c_str(), o.n, static_cast<unsigned long long>(o.seed), s.steps,
              log.early_stop ? " (early stop)" : "", s.final_entropy_bits, log.initial_entropy_bits, s.final_coverage,
              s.mean_total_s, s.inference_share_pct);
  return 0;
}

int run_bench(const std::string& spec_path, std::optional<int> trials, const std::string& out_dir) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  if (trials) spec.trials = *trials;
  if (!out_dir.empty()) spec.out_dir = out_dir;
  const int workers = worker_count_from_env();
  const auto result = run_experiment(spec, workers);
  std::cout << format_method_summaries_csv(result.methods);
  for (const auto& f : result.failures) std::cerr << "run failed: " << f << '\n';
  return result.failures.empty() ? 0 : 3;
}

int run_summarize(const std::string& in_dir, const std::string& out) {
  const auto methods = summarize_directory(in_dir);
  const auto text = format_method_summaries_csv(methods);
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian kernel inference for information-theoretic exploration"};
  app.require_subcommand(1);

  MapOptions gen;
  std::string gen_out;
  bool gen_ascii = false;
  auto* genmap = app.add_subcommand("genmap", "Generate a synthetic ground-truth map as PGM");
  genmap->add_option("--kind", gen.kind, "structured|unstructured|cluttered")->capture_default_str();
  add_map_geometry(genmap, gen);
  genmap->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  genmap->add_option("--out", gen_out, "Output PGM path")->required();
  genmap->add_flag("--ascii", gen_ascii, "Write P2 instead of P5");

  ExploreOptions ex;
  auto* explore_cmd = app.add_subcommand("explore", "Run one exploration trial");
  auto* map_opt = explore_cmd->add_option("--map", ex.map_path, "Ground-truth PGM");
  explore_cmd->add_option("--gen", ex.map.kind, "Generator: structured|unstructured|cluttered")
      ->excludes(map_opt)
      ->capture_default_str();
  add_map_geometry(explore_cmd, ex.map);
  explore_cmd->add_option("--map-seed", ex.map.seed, "Generator seed")->capture_default_str();
  explore_cmd->add_option("--engine", ex.engine, "nbo|batch_gp|batch_bki|gp_bo|bki_bo")->capture_default_str();
  explore_cmd->add_option("--n", ex.n, "Explicitly evaluated samples per step")->capture_default_str();
  explore_cmd->add_option("--nq", ex.nq, "Query samples per step (default 8N)");
  explore_cmd->add_option("--epochs", ex.epochs, "Optimization epochs for BO engines (default N/2)");
  explore_cmd->add_option("--alpha", ex.alpha, "Exploration/exploitation trade-off")->capture_default_str();
  explore_cmd->add_option("--ith", ex.ith, "Information threshold in bits")->capture_default_str();
  explore_cmd->add_option("--nloop", ex.nloop, "Loop limit")->capture_default_str();
  explore_cmd->add_option("--seed", ex.seed, "Run seed")->capture_default_str();
  explore_cmd->add_option("--trial", ex.trial, "Trial id recorded in the CSV")->capture_default_str();
  explore_cmd->add_option("--start-x", ex.start_x, "Start x in meters");
  explore_cmd->add_option("--start-y", ex.start_y, "Start y in meters");
  explore_cmd->add_option("--start-heading", ex.start_heading, "Start heading in radians");
  explore_cmd->add_option("--set", ex.overrides, "Extra key=value settings (same keys as the bench config)");
  explore_cmd->add_option("--out-dir", ex.out_dir, "Output directory")->capture_default_str();

  std::string bench_spec;
  std::optional<int> bench_trials;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Run a Monte Carlo experiment from a config file");
  bench->add_option("--spec", bench_spec, "key=value experiment file")->required();
  bench->add_option("--trials", bench_trials, "Override the trial count");
  bench->add_option("--out-dir", bench_out, "Override the output directory");

  std::string sum_in;
  std::string sum_out;
  auto* summarize = app.add_subcommand("summarize", "Summarize per-step CSVs into a method table");
  summarize->add_option("--in-dir", sum_in, "Directory with *_steps.csv files")->required();
  summarize->add_option("--out", sum_out, "Output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*genmap) return run_genmap(gen, gen_out, gen_ascii);
    if (*explore_cmd) return run_explore(ex);
    if (*bench) return run_bench(bench_spec, bench_trials, bench_out);
    if (*summarize) return run_summarize(sum_in, sum_out);
  } catch (const bkiexp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
