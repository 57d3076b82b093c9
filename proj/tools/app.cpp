#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dtwin/rollout.hpp"

namespace dtwin::app {

using json = nlohmann::ordered_json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + "expected a JSON object");
  }

  [[nodiscard]] const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& dst) {
    if (const json* v = find(key)) dst = as_number(*v, key);
  }
  void size(const std::string& key, std::size_t& dst) {
    if (const json* v = find(key)) dst = as_size(*v, key);
  }
  void flag(const std::string& key, bool& dst) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(where(key) + "expected true or false");
      dst = v->get<bool>();
    }
  }

  [[nodiscard]] double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError(where(key) + "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + "expected a finite number");
    return d;
  }
  [[nodiscard]] std::size_t as_size(const json& v, const std::string& key) const {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(where(key) + "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }
  [[nodiscard]] std::uint64_t as_u64(const json& v, const std::string& key) const {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(where(key) + "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  [[nodiscard]] std::string as_string(const json& v, const std::string& key) const {
    if (!v.is_string()) throw ConfigError(where(key) + "expected a string");
    return v.get<std::string>();
  }
  [[nodiscard]] Vec3 as_vec3(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 3) throw ConfigError(where(key) + "expected [x, y, z]");
    return {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)};
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + path_ + key + "'");
    }
  }

  [[nodiscard]] std::string child_path(const std::string& key) const { return path_ + key + "."; }

 private:
  [[nodiscard]] std::string where(const std::string& key = {}) const {
    return "config key '" + path_ + key + "': ";
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

PgOptimizer parse_optimizer(const std::string& s) {
  for (PgOptimizer o : {PgOptimizer::kAdam, PgOptimizer::kSgd, PgOptimizer::kNatural}) {
    if (to_string(o) == s) return o;
  }
  throw ConfigError("unknown optimizer '" + s + "' (expected adam, sgd or natural)");
}

void parse_ga(const json& doc, const std::string& path, GaSettings& ga, bool& override_population) {
  ObjectReader r(doc, path);
  r.size("population", ga.population);
  r.number("mutation_rate", ga.mutation_rate);
  r.number("crossover_rate", ga.crossover_rate);
  r.number("selection_rate", ga.selection_rate);
  r.number("mutation_stddev", ga.mutation_stddev);
  r.number("init_max", ga.init_max);
  r.size("elite", ga.elite);
  r.flag("allow_population_override", override_population);
  r.finish();
}

void parse_environment(const json& doc, const std::string& path, TowerDefenseConfig& env) {
  ObjectReader r(doc, path);
  r.size("bosses", env.bosses);
  r.size("turrets", env.turrets);
  if (const json* b = r.find("bounds")) {
    ObjectReader br(*b, r.child_path("bounds"));
    if (const json* lo = br.find("lo")) env.bounds.lo = br.as_vec3(*lo, "lo");
    if (const json* hi = br.find("hi")) env.bounds.hi = br.as_vec3(*hi, "hi");
    br.finish();
  }
  r.number("boss_speed", env.boss_speed);
  r.number("noise_scale", env.noise_scale);
  r.number("turret_range", env.turret_range);
  r.number("aim_tolerance", env.aim_tolerance);
  if (const json* b = r.find("base")) {
    if (b->is_null()) {
      env.base.reset();
    } else {
      env.base = r.as_vec3(*b, "base");
    }
  }
  r.number("turret_spacing", env.turret_spacing);
  if (const json* tp = r.find("turret_positions")) {
    if (!tp->is_array()) throw ConfigError("config key '" + path + "turret_positions': expected an array");
    env.turret_positions.clear();
    for (const auto& p : *tp) env.turret_positions.push_back(r.as_vec3(p, "turret_positions"));
  }
  if (const json* t = r.find("true_theta")) {
    if (!t->is_array() || t->size() != 2) {
      throw ConfigError("config key '" + path + "true_theta': expected [azimuth, pitch]");
    }
    env.true_theta = ParamVector{r.as_number((*t)[0], "true_theta"), r.as_number((*t)[1], "true_theta")};
  }
  r.finish();
}

json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

FileConfig parse_config(const json& doc) {
  FileConfig cfg;
  ExperimentConfig& e = cfg.benchmark.experiment;
  ObjectReader r(doc, "");
  r.size("horizon", e.horizon);
  r.size("iterations", e.iterations);
  r.number("learning_rate", e.learning_rate);
  r.number("lr_decay", e.lr_decay);
  r.size("batch_size", e.batch_size);
  r.size("hidden_units", e.hidden_units);
  r.number("init_stddev", e.init_stddev);
  r.number("output_init_scale", e.output_init_scale);
  if (const json* m = r.find("method")) e.method = parse_method(r.as_string(*m, "method"));
  if (const json* s = r.find("seed")) e.seed = r.as_u64(*s, "seed");
  if (const json* b = r.find("physical_budget")) {
    if (b->is_null()) {
      e.physical_budget.reset();
    } else {
      e.physical_budget = r.as_u64(*b, "physical_budget");
    }
  }
  r.flag("record_timing", e.record_timing);
  if (const json* o = r.find("optimizer")) e.optimizer = parse_optimizer(r.as_string(*o, "optimizer"));
  r.flag("normalize_advantages", e.normalize_advantages);
  if (const json* ga = r.find("ga")) parse_ga(*ga, r.child_path("ga"), e.ga, cfg.allow_population_override);
  if (const json* env = r.find("environment")) parse_environment(*env, r.child_path("environment"), e.environment);
  if (const json* ms = r.find("methods")) {
    if (!ms->is_array()) throw ConfigError("config key 'methods': expected an array of method names");
    cfg.benchmark.methods.clear();
    for (const auto& m : *ms) cfg.benchmark.methods.push_back(parse_method(r.as_string(m, "methods")));
    if (cfg.benchmark.methods.empty()) throw ConfigError("config key 'methods': at least one method is required");
    const std::set<Method> unique(cfg.benchmark.methods.begin(), cfg.benchmark.methods.end());
    if (unique.size() != cfg.benchmark.methods.size()) throw ConfigError("config key 'methods': duplicate method");
  }
  if (const json* ss = r.find("seeds")) {
    if (!ss->is_array()) throw ConfigError("config key 'seeds': expected an array of integers");
    cfg.benchmark.seeds.clear();
    for (const auto& s : *ss) cfg.benchmark.seeds.push_back(r.as_u64(s, "seeds"));
    if (cfg.benchmark.seeds.empty()) throw ConfigError("config key 'seeds': at least one seed is required");
  }
  if (const json* o = r.find("output_dir")) cfg.output_dir = r.as_string(*o, "output_dir");
  r.finish();

  if (e.iterations == 0) throw ConfigError("iterations must be positive");
  e.validate();
  return cfg;
}

void check_population(const FileConfig& cfg, const std::vector<Method>& methods) {
  const std::size_t standard = GaSettings{}.population;
  const bool wants_ga = std::any_of(methods.begin(), methods.end(), [](Method m) { return is_ga(m); });
  if (wants_ga && cfg.benchmark.experiment.ga.population != standard && !cfg.allow_population_override) {
    throw ConfigError("ga.population must be " + std::to_string(standard) +
                      " for GA methods; set ga.allow_population_override to use another size");
  }
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const FileConfig& cfg) {
  const ExperimentConfig& e = cfg.benchmark.experiment;
  const TowerDefenseConfig& env = e.environment;
  json j;
  j["horizon"] = e.horizon;
  j["iterations"] = e.iterations;
  j["learning_rate"] = e.learning_rate;
  j["lr_decay"] = e.lr_decay;
  j["batch_size"] = e.batch_size;
  j["hidden_units"] = e.hidden_units;
  j["init_stddev"] = e.init_stddev;
  j["output_init_scale"] = e.output_init_scale;
  j["method"] = std::string(to_string(e.method));
  j["seed"] = e.seed;
  j["physical_budget"] = e.physical_budget ? json(*e.physical_budget) : json(nullptr);
  j["record_timing"] = e.record_timing;
  j["optimizer"] = std::string(to_string(e.optimizer));
  j["normalize_advantages"] = e.normalize_advantages;
  j["ga"] = {{"population", e.ga.population},
             {"mutation_rate", e.ga.mutation_rate},
             {"crossover_rate", e.ga.crossover_rate},
             {"selection_rate", e.ga.selection_rate},
             {"mutation_stddev", e.ga.mutation_stddev},
             {"init_max", e.ga.init_max},
             {"elite", e.ga.elite},
             {"allow_population_override", cfg.allow_population_override}};
  json positions = json::array();
  for (const Vec3& p : env.turret_positions) positions.push_back(vec3_json(p));
  j["environment"] = {{"bosses", env.bosses},
                      {"turrets", env.turrets},
                      {"bounds", {{"lo", vec3_json(env.bounds.lo)}, {"hi", vec3_json(env.bounds.hi)}}},
                      {"boss_speed", env.boss_speed},
                      {"noise_scale", env.noise_scale},
                      {"turret_range", env.turret_range},
                      {"aim_tolerance", env.aim_tolerance},
                      {"base", env.base ? vec3_json(*env.base) : json(nullptr)},
                      {"turret_spacing", env.turret_spacing},
                      {"turret_positions", positions},
                      {"true_theta", json::array({env.true_theta[0], env.true_theta[1]})}};
  json methods = json::array();
  for (Method m : cfg.benchmark.methods) methods.push_back(std::string(to_string(m)));
  j["methods"] = methods;
  j["seeds"] = cfg.benchmark.seeds;
  j["output_dir"] = cfg.output_dir;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kRecordHeader = "method,seed,iteration,theta_1,theta_2,mean_mste,param_mse,wall_ms\n";

void append_record(std::string& out, const RunRecord& r) {
  out += r.method;
  out += ',' + std::to_string(r.seed) + ',' + std::to_string(r.iteration);
  out += ',' + format_double(r.prediction[0]) + ',' + format_double(r.prediction[1]);
  out += ',' + format_double(r.mean_mste) + ',' + format_double(r.param_mse);
  out += ',' + format_double(r.wall_ms) + '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("failed while writing '" + path.string() + "'");
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

std::string records_csv(const std::vector<RecordSeries>& series) {
  std::string out = kRecordHeader;
  for (const auto& s : series) {
    for (const auto& r : s.records) append_record(out, r);
  }
  return out;
}

std::string trace_csv(const std::vector<RecordSeries>& series, Method m) {
  std::string out = "seed,iteration,theta_1,theta_2\n";
  for (const auto& s : series) {
    if (s.method != m) continue;
    for (const auto& r : s.records) {
      out += std::to_string(r.seed) + ',' + std::to_string(r.iteration) + ',' +
             format_double(r.prediction[0]) + ',' + format_double(r.prediction[1]) + '\n';
    }
  }
  return out;
}

json summary_json(const FileConfig& cfg, const BenchmarkResult& r) {
  json j;
  json methods = json::array();
  for (const auto& s : r.summary) {
    json stds = json::array();
    for (const auto& series : r.series) {
      if (series.method == s.method) stds.push_back(trace_stddev(series.records, kTraceWindow));
    }
    methods.push_back({{"method", std::string(to_string(s.method))},
                       {"seeds", s.seeds},
                       {"final_param_mse_mean", s.final_param_mse_mean},
                       {"final_param_mse_std", s.final_param_mse_std},
                       {"final_theta_mean", s.final_theta_mean},
                       {"trace_std_last_window", stds}});
  }
  j["methods"] = methods;
  const Verdicts v = verdicts(r);
  j["verdicts"] = {{"pgfp_beats_all", optional_bool(v.pgfp_beats_all)},
                   {"fp_beats_nofp", optional_bool(v.fp_beats_nofp)},
                   {"pgfp_beats_pg", optional_bool(v.pg_family_fp)},
                   {"gafp_beats_ga", optional_bool(v.ga_family_fp)}};
  j["trace_window"] = kTraceWindow;
  j["config"] = to_json(cfg);
  return j;
}

namespace {

int cmd_rollout(const FileConfig& cfg, const std::vector<double>& theta,
                const std::string& out_path, std::ostream& out) {
  const ExperimentConfig& e = cfg.benchmark.experiment;
  ParamVector digital_theta = e.environment.true_theta;
  if (!theta.empty()) {
    if (theta.size() != 2) throw ConfigError("--theta expects two values: azimuth,pitch");
    digital_theta = ParamVector(theta);
    if (digital_theta[0] <= 0.0 || digital_theta[1] <= 0.0) {
      throw ConfigError("--theta values must be strictly positive");
    }
  }
  PhysicalHandle physical(e.environment, e.physical_budget);
  TowerDefenseEnv digital(without_parameters(e.environment), digital_theta);
  const SeedStream stream = episode_stream(SeedStream(e.seed, 0), 1);
  const auto [phys, dig] = rollout_pair(physical, digital, TowerStrategy{}, e.horizon, stream);

  const std::size_t d = phys.dim();
  std::string csv = "step";
  for (std::size_t j = 1; j <= d; ++j) csv += ",physical_" + std::to_string(j);
  for (std::size_t j = 1; j <= d; ++j) csv += ",digital_" + std::to_string(j);
  csv += ",error\n";
  for (std::size_t i = 0; i < phys.length(); ++i) {
    const auto& a = phys.states()[i];
    const auto& b = dig.states()[i];
    csv += std::to_string(i + 1);
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) csv += ',' + format_double(a[j]);
    for (std::size_t j = 0; j < d; ++j) {
      csv += ',' + format_double(b[j]);
      sq += (a[j] - b[j]) * (a[j] - b[j]);
    }
    csv += ',' + format_double(std::sqrt(sq)) + '\n';
  }
  if (out_path.empty() || out_path == "-") {
    out << csv;
  } else {
    write_file(out_path, csv);
  }
  return kExitOk;
}

int cmd_estimate(FileConfig cfg, const std::string& out_dir, std::ostream& out) {
  const ExperimentConfig& e = cfg.benchmark.experiment;
  const std::vector<RunRecord> records = run_method(e);
  const std::string name(to_string(e.method));
  const std::filesystem::path dir(out_dir);

  std::string csv = kRecordHeader;
  for (const auto& r : records) append_record(csv, r);
  write_file(dir / ("estimate_" + name + ".csv"), csv);

  const RunRecord& last = records.back();
  json j;
  j["method"] = name;
  j["seed"] = e.seed;
  j["iterations"] = records.size();
  j["final_theta"] = json::array({last.prediction[0], last.prediction[1]});
  j["final_param_mse"] = last.param_mse;
  j["config"] = to_json(cfg);
  write_file(dir / ("estimate_" + name + ".json"), j.dump(2) + "\n");

  out << name << " seed " << e.seed << ": theta = (" << format_double(last.prediction[0]) << ", "
      << format_double(last.prediction[1]) << "), param_mse = " << format_double(last.param_mse) << "\n";
  return kExitOk;
}

int cmd_benchmark(const FileConfig& cfg, const std::string& out_dir, std::ostream& out) {
  const BenchmarkResult result = run_benchmark(cfg.benchmark);
  const std::filesystem::path dir(out_dir);
  write_file(dir / "records.csv", records_csv(result.series));
  for (Method m : cfg.benchmark.methods) {
    write_file(dir / ("trace_" + std::string(to_string(m)) + ".csv"), trace_csv(result.series, m));
  }
  const json summary = summary_json(cfg, result);
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  for (const auto& s : result.summary) {
    out << to_string(s.method) << ": final param_mse " << format_double(s.final_param_mse_mean) << " +- "
        << format_double(s.final_param_mse_std) << " over " << s.seeds << " seeds\n";
  }
  out << "verdicts: " << summary["verdicts"].dump() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Digital-twin parameter calibration on a tower-defense testbed"};
  cli.name(args.empty() ? "dtwin" : args.front());
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::vector<double> theta;
  std::string method;

  auto* rollout_cmd = cli.add_subcommand("rollout", "Roll out the strategy on the physical system and the twin");
  rollout_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  rollout_cmd->add_option("--theta", theta, "Twin parameters as azimuth,pitch (default: the true values)")
      ->delimiter(',')
      ->expected(2);
  rollout_cmd->add_option("--seed", seed, "Override the configured seed");
  rollout_cmd->add_option("--out", out_path, "Output CSV file ('-' or omitted: standard output)");

  auto* estimate_cmd = cli.add_subcommand("estimate", "Calibrate with one method on one seed");
  estimate_cmd->add_option("--method", method, "pgfp, pg, gafp or ga (default: from the config)");
  estimate_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  estimate_cmd->add_option("--seed", seed, "Override the configured seed");
  estimate_cmd->add_option("--out", out_path, "Output directory (default: output_dir from the config)");

  auto* bench_cmd = cli.add_subcommand("benchmark", "Run every configured method on every configured seed");
  bench_cmd->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", out_path, "Output directory (default: output_dir from the config)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    cli.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << cli.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << cli.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  FileConfig cfg;
  try {
    cfg = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
    if (seed) cfg.benchmark.experiment.seed = *seed;
    if (!method.empty()) {
      cfg.benchmark.experiment.method = parse_method(method);
    }
    if (*estimate_cmd) check_population(cfg, {cfg.benchmark.experiment.method});
    if (*bench_cmd) check_population(cfg, cfg.benchmark.methods);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string dir = out_path.empty() ? cfg.output_dir : out_path;

  try {
    if (*rollout_cmd) return cmd_rollout(cfg, theta, out_path, out);
    if (*estimate_cmd) return cmd_estimate(cfg, dir, out);
    return cmd_benchmark(cfg, dir, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetExhausted& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace dtwin::app
