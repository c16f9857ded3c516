#include "bkiexp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bkiexp/errors.hpp"
#include "bkiexp/maps.hpp"

namespace bkiexp {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("bad number for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("bad boolean for '" + std::string(key) + "'");
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

template <typename Int>
void append_int(std::string& out, Int v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

MapKind parse_map_kind(std::string_view name) {
  if (name == "structured") return MapKind::Structured;
  if (name == "unstructured") return MapKind::Unstructured;
  if (name == "cluttered") return MapKind::Cluttered;
  if (name == "pgm") return MapKind::Pgm;
  throw std::invalid_argument("unknown map kind '" + std::string(name) + "'");
}

std::string_view map_kind_name(MapKind kind) {
  switch (kind) {
    case MapKind::Structured: return "structured";
    case MapKind::Unstructured: return "unstructured";
    case MapKind::Cluttered: return "cluttered";
    case MapKind::Pgm: return "pgm";
  }
  return "unknown";
}

GroundTruthGrid build_map(const MapSource& source) {
  switch (source.kind) {
    case MapKind::Structured:
      return generate_structured_map(source.width_m, source.height_m, source.resolution_m, source.seed);
    case MapKind::Unstructured:
      return generate_unstructured_map(source.width_m, source.height_m, source.resolution_m, source.seed);
    case MapKind::Cluttered:
      return generate_cluttered_map(source.width_m, source.height_m, source.resolution_m, source.seed);
    case MapKind::Pgm: return load_map(source.pgm_path, source.resolution_m);
  }
  throw std::logic_error("unhandled map kind");
}

Action default_start(const MapSource& source, const GroundTruthGrid& truth) {
  if (source.kind == MapKind::Cluttered) return cluttered_map_start(truth.geometry().height_m());
  if (source.kind != MapKind::Pgm) return Action(kDefaultStart.x, kDefaultStart.y, 0.0);
  // Loaded maps: first free cell (row-major from the bottom-left) with a free neighbourhood.
  const auto& geo = truth.geometry();
  for (int r = 1; r + 1 < truth.height_cells(); ++r) {
    for (int c = 1; c + 1 < truth.width_cells(); ++c) {
      bool clear = true;
      for (int dr = -1; dr <= 1 && clear; ++dr) {
        for (int dc = -1; dc <= 1 && clear; ++dc) clear = !truth.occupied({c + dc, r + dr});
      }
      if (clear) {
        const Point2 p = geo.cell_center({c, r});
        return Action(p.x, p.y, 0.0);
      }
    }
  }
  throw InvalidPoseError("map has no free start cell");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (engines.empty()) throw std::invalid_argument("experiment: engine list is empty");
  if (n_values.empty()) throw std::invalid_argument("experiment: N list is empty");
  for (int n : n_values) {
    if (n < 1) throw std::invalid_argument("experiment: N must be >= 1");
  }
  if (n_query && *n_query < 1) throw std::invalid_argument("experiment: nq must be >= 1");
  if (epochs && *epochs < 1) throw std::invalid_argument("experiment: epochs must be >= 1");
  base.validate();
}

ExplorationConfig ExperimentSpec::run_config(Engine engine, int n, int trial) const {
  ExplorationConfig cfg = base;
  cfg.engine = engine;
  cfg.n_train = n;
  cfg.n_query = n_query.value_or(8 * n);
  cfg.epochs = epochs.value_or(std::max(1, n / 2));
  cfg.rng_seed = seed_base + static_cast<std::uint64_t>(trial);
  return cfg;
}

bool apply_exploration_key(ExplorationConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "alpha") cfg.alpha = to_double(key, value);
  else if (key == "ith") cfg.info_threshold = to_double(key, value);
  else if (key == "nloop") cfg.loop_limit = to_int<int>(key, value);
  else if (key == "fov") cfg.sensor.fov_rad = to_double(key, value);
  else if (key == "beam_step") {
    cfg.sensor.beam_step_rad = to_double(key, value);
    cfg.sensor.beam_count.reset();
  } else if (key == "beams") {
    cfg.sensor.beam_count = to_int<int>(key, value);
    cfg.sensor.beam_step_rad.reset();
  } else if (key == "max_range") cfg.sensor.max_range_m = to_double(key, value);
  else if (key == "ell") cfg.kernel.length_scale = to_double(key, value);
  else if (key == "heading_weight") cfg.kernel.heading_weight = to_double(key, value);
  else if (key == "zeta") cfg.bki.zeta = to_double(key, value);
  else if (key == "sigma2") cfg.bki.sigma2 = to_double(key, value);
  else if (key == "mu0") cfg.bki.mu0 = to_double(key, value);
  else if (key == "gp_sigma2") cfg.gp_sigma2 = to_double(key, value);
  else if (key == "use_stddev") cfg.use_stddev = to_bool(key, value);
  else if (key == "l_occ") cfg.sensor_model.l_occ = to_double(key, value);
  else if (key == "l_free") cfg.sensor_model.l_free = to_double(key, value);
  else if (key == "clamp") cfg.log_odds_clamp = to_double(key, value);
  else if (key == "coverage_threshold") cfg.coverage_threshold = to_double(key, value);
  else if (key == "free_below") cfg.traversability.free_below = to_double(key, value);
  else if (key == "occupied_above") cfg.traversability.occupied_above = to_double(key, value);
  else if (key == "unknown_cost") cfg.traversability.unknown_cost_factor = to_double(key, value);
  else if (key == "scan_every") cfg.scan_every_cells = to_int<int>(key, value);
  else return false;
  return true;
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  std::optional<double> sx, sy, sh;
  int line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (apply_exploration_key(spec.base, key, value)) continue;
    if (key == "map") {
      if (value == "structured" || value == "unstructured" || value == "cluttered") {
        spec.map.kind = parse_map_kind(value);
      } else {
        spec.map.kind = MapKind::Pgm;
        spec.map.pgm_path = std::string(value);
      }
    } else if (key == "map_width") spec.map.width_m = to_double(key, value);
    else if (key == "map_height") spec.map.height_m = to_double(key, value);
    else if (key == "map_res") spec.map.resolution_m = to_double(key, value);
    else if (key == "map_seed") spec.map.seed = to_int<std::uint64_t>(key, value);
    else if (key == "engines") {
      spec.engines.clear();
      for (auto tag : split(value, ',')) spec.engines.push_back(parse_engine(trim(tag)));
    } else if (key == "n") {
      spec.n_values.clear();
      for (auto v : split(value, ',')) spec.n_values.push_back(to_int<int>(key, v));
    } else if (key == "nq") spec.n_query = to_int<int>(key, value);
    else if (key == "epochs") spec.epochs = to_int<int>(key, value);
    else if (key == "trials") spec.trials = to_int<int>(key, value);
    else if (key == "seed_base") spec.seed_base = to_int<std::uint64_t>(key, value);
    else if (key == "out_dir") spec.out_dir = std::string(value);
    else if (key == "start_x") sx = to_double(key, value);
    else if (key == "start_y") sy = to_double(key, value);
    else if (key == "start_heading") sh = to_double(key, value);
    else throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                     std::string(key) + "'");
  }
  if (sx || sy) {
    if (!sx || !sy) throw std::invalid_argument("config: start_x and start_y must be given together");
    spec.start = Action(*sx, *sy, sh.value_or(0.0));
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  return parse_experiment_spec(read_text_file(path));
}

// ---------------------------------------------------------------------------

std::vector<StepRow> step_rows(const ExplorationLog& log) {
  std::vector<StepRow> rows;
  rows.reserve(log.steps.size());
  for (const auto& s : log.steps) {
    rows.push_back({log.method, log.n_train, log.trial, log.seed, s.step, s.entropy_bits, s.coverage,
                    s.explicit_eval_s, s.inference_s, s.total_s});
  }
  return rows;
}

std::string format_steps_csv(const ExplorationLog& log) {
  std::string out(kStepCsvHeader);
  out += '\n';
  for (const auto& r : step_rows(log)) {
    out += r.method;
    out += ',';
    append_int(out, r.n);
    out += ',';
    append_int(out, r.trial);
    out += ',';
    append_int(out, r.seed);
    out += ',';
    append_int(out, r.step);
    for (double v : {r.entropy_bits, r.coverage, r.explicit_eval_s, r.inference_s, r.total_s}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string format_decisions_csv(const ExplorationLog& log) {
  std::string out(kDecisionCsvHeader);
  out += '\n';
  for (const auto& s : log.steps) {
    append_int(out, s.step);
    out += ',';
    out += step_event_tag(s.event);
    for (double v : {s.pose.x_m, s.pose.y_m, s.pose.heading_rad, s.best_mi_bits}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<StepRow> parse_steps_csv(std::string_view text) {
  std::vector<StepRow> rows;
  bool header = true;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      if (line != kStepCsvHeader) throw std::invalid_argument("steps csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) throw std::invalid_argument("steps csv: expected 10 columns");
    StepRow r;
    r.method = std::string(f[0]);
    r.n = to_int<int>("N", f[1]);
    r.trial = to_int<int>("trial", f[2]);
    r.seed = to_int<std::uint64_t>("seed", f[3]);
    r.step = to_int<int>("step", f[4]);
    r.entropy_bits = to_double("entropy_bits", f[5]);
    r.coverage = to_double("coverage", f[6]);
    r.explicit_eval_s = to_double("explicit_eval_s", f[7]);
    r.inference_s = to_double("inference_s", f[8]);
    r.total_s = to_double("total_s", f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string run_file_stem(std::string_view method, int n, int trial) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", trial);
  return std::string(method) + "_N" + std::to_string(n) + "_trial" + buf;
}

RunSummary summarize_run(const std::vector<StepRow>& rows) {
  RunSummary s;
  if (rows.empty()) return s;
  s.method = rows.front().method;
  s.n = rows.front().n;
  s.trial = rows.front().trial;
  s.seed = rows.front().seed;
  s.steps = static_cast<int>(rows.size());
  std::vector<double> totals;
  double inference = 0.0;
  double total = 0.0;
  for (const auto& r : rows) {
    totals.push_back(r.total_s);
    inference += r.inference_s;
    total += r.total_s;
  }
  s.mean_total_s = mean_of(totals);
  s.std_total_s = sample_std(totals);
  s.inference_share_pct = total > 0.0 ? std::clamp(100.0 * inference / total, 0.0, 100.0) : 0.0;
  s.final_entropy_bits = rows.back().entropy_bits;
  s.final_coverage = rows.back().coverage;
  return s;
}

std::vector<MethodSummary> summarize_methods(const std::vector<std::vector<StepRow>>& runs) {
  struct Acc {
    std::vector<double> totals;
    std::vector<double> shares;
    std::vector<double> entropies;
    std::vector<double> coverages;
  };
  std::map<std::pair<std::string, int>, Acc> groups;
  for (const auto& rows : runs) {
    if (rows.empty()) continue;
    const RunSummary rs = summarize_run(rows);
    auto& acc = groups[{rs.method, rs.n}];
    for (const auto& r : rows) acc.totals.push_back(r.total_s);
    acc.shares.push_back(rs.inference_share_pct);
    acc.entropies.push_back(rs.final_entropy_bits);
    acc.coverages.push_back(rs.final_coverage);
  }
  std::vector<MethodSummary> out;
  for (const auto& [key, acc] : groups) {
    MethodSummary m;
    m.method = key.first;
    m.n = key.second;
    m.runs = static_cast<int>(acc.shares.size());
    m.steps = static_cast<int>(acc.totals.size());
    m.mean_total_s = mean_of(acc.totals);
    m.std_total_s = sample_std(acc.totals);
    m.mean_inference_share_pct = mean_of(acc.shares);
    m.mean_final_entropy_bits = mean_of(acc.entropies);
    m.mean_final_coverage = mean_of(acc.coverages);
    out.push_back(std::move(m));
  }
  return out;
}

std::string format_run_summaries_csv(const std::vector<RunSummary>& runs) {
  std::string out =
      "method,N,trial,seed,steps,mean_total_s,std_total_s,inference_share_pct,final_entropy_bits,final_coverage\n";
  for (const auto& r : runs) {
    out += r.method;
    out += ',';
    append_int(out, r.n);
    out += ',';
    append_int(out, r.trial);
    out += ',';
    append_int(out, r.seed);
    out += ',';
    append_int(out, r.steps);
    for (double v : {r.mean_total_s, r.std_total_s, r.inference_share_pct, r.final_entropy_bits, r.final_coverage}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

std::string format_method_summaries_csv(const std::vector<MethodSummary>& methods) {
  std::string out =
      "method,N,runs,steps,mean_total_s,std_total_s,mean_inference_share_pct,mean_final_entropy_bits,"
      "mean_final_coverage\n";
  for (const auto& m : methods) {
    out += m.method;
    out += ',';
    append_int(out, m.n);
    out += ',';
    append_int(out, m.runs);
    out += ',';
    append_int(out, m.steps);
    for (double v : {m.mean_total_s, m.std_total_s, m.mean_inference_share_pct, m.mean_final_entropy_bits,
                     m.mean_final_coverage}) {
      out += ',';
      append_double(out, v);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

int worker_count_from_env() {
  const char* v = std::getenv("BKIEXP_WORKERS");
  if (!v || !*v) return 1;
  int n = 0;
  const std::string_view s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) {
    throw std::invalid_argument("BKIEXP_WORKERS must be a positive integer");
  }
  return n;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int workers) {
  spec.validate();
  if (workers < 1) throw std::invalid_argument("run_experiment: workers must be >= 1");
  std::filesystem::create_directories(spec.out_dir);

  const GroundTruthGrid truth = build_map(spec.map);
  const Action start = spec.start.value_or(default_start(spec.map, truth));

  struct Job {
    Engine engine;
    int n;
    int trial;
  };
  std::vector<Job> jobs;
  for (Engine e : spec.engines) {
    for (int n : spec.n_values) {
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({e, n, t});
    }
  }

  std::vector<std::optional<ExplorationLog>> logs(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      try {
        ExplorationLog log = explore(spec.run_config(job.engine, job.n, job.trial), truth, start);
        log.trial = job.trial;
        const auto stem = run_file_stem(log.method, job.n, job.trial);
        write_text_file(spec.out_dir / (stem + "_steps.csv"), format_steps_csv(log));
        write_text_file(spec.out_dir / (stem + "_decisions.csv"), format_decisions_csv(log));
        logs[i] = std::move(log);
      } catch (const std::exception& ex) {
        errors[i] = run_file_stem(engine_tag(job.engine), job.n, job.trial) + ": " + ex.what();
      }
    }
  };
  const int pool_size = std::min<int>(workers, static_cast<int>(jobs.size()));
  if (pool_size <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < pool_size; ++w) pool.emplace_back(worker);
  }

  ExperimentResult result;
  std::vector<std::vector<StepRow>> all_rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) result.failures.push_back(errors[i]);
    if (!logs[i]) continue;
    auto rows = step_rows(*logs[i]);
    result.runs.push_back(summarize_run(rows));
    all_rows.push_back(std::move(rows));
    result.logs.push_back(std::move(*logs[i]));
  }
  result.methods = summarize_methods(all_rows);
  write_text_file(spec.out_dir / "runs.csv", format_run_summaries_csv(result.runs));
  write_text_file(spec.out_dir / "summary.csv", format_method_summaries_csv(result.methods));
  if (!result.failures.empty()) {
    std::string text;
    for (const auto& f : result.failures) text += f + '\n';
    write_text_file(spec.out_dir / "failures.txt", text);
  }
  return result;
}

std::vector<MethodSummary> summarize_directory(const std::filesystem::path& in_dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(in_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.ends_with("_steps.csv")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::vector<StepRow>> runs;
  for (const auto& f : files) runs.push_back(parse_steps_csv(read_text_file(f)));
  return summarize_methods(runs);
}

}  // namespace bkiexp
