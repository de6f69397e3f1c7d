// Command-line front end: parameter sweeps, SEEM optimization and
// analytic-vs-Monte-Carlo validation. Talks to the library only through the
// C interface.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcrsim/mcr.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config_path;
  std::vector<std::string> params;
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 1;
  std::uint64_t trials = 100000;
  int jobs = 1;
};

struct ConfigDeleter {
  void operator()(mcr_config* c) const { mcr_config_free(c); }
};
struct ModelDeleter {
  void operator()(mcr_model* m) const { mcr_model_free(m); }
};
using ConfigPtr = std::unique_ptr<mcr_config, ConfigDeleter>;
using ModelPtr = std::unique_ptr<mcr_model, ModelDeleter>;

void check(mcr_status st) {
  if (st != MCR_OK) throw UsageError(mcr_last_error());
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

ConfigPtr base_config(const Globals& g) {
  mcr_config* raw = nullptr;
  if (g.config_path.empty()) {
    check(mcr_config_new(&raw));
  } else {
    check(mcr_config_load(g.config_path.c_str(), &raw));
  }
  ConfigPtr cfg(raw);
  for (const auto& p : g.params) check(mcr_config_set_assignment(cfg.get(), p.c_str()));
  return cfg;
}

ModelPtr build_model(const mcr_config* cfg) {
  mcr_model* raw = nullptr;
  check(mcr_model_build(cfg, &raw));
  return ModelPtr(raw);
}

void report_warnings(const mcr_model* m) {
  for (std::size_t i = 0; i < mcr_model_warning_count(m); ++i)
    std::cerr << "warning: " << mcr_model_warning(m, i) << '\n';
}

std::vector<std::string> assumed(const mcr_model* m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < mcr_model_assumed_count(m); ++i)
    out.emplace_back(mcr_model_assumed(m, i));
  return out;
}

std::string joined(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Writes to --out or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

template <class Fn>
void parallel_rows(std::size_t n, int jobs, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string key;
  std::string values;
  std::string range;
  std::string targets = "d_bh_mcr";
  bool list = false;
};

std::vector<double> sweep_grid(const SweepArgs& a) {
  std::vector<double> grid;
  if (!a.values.empty() == !a.range.empty())
    throw UsageError("sweep needs exactly one of --values or --range");
  if (!a.values.empty()) {
    for (const auto& v : split(a.values, ',')) grid.push_back(parse_number(v, "grid value"));
  } else {
    const auto parts = split(a.range, ':');
    if (parts.size() != 3) throw UsageError("--range expects START:STOP:COUNT");
    const double start = parse_number(parts[0], "range start");
    const double stop = parse_number(parts[1], "range stop");
    const double count = parse_number(parts[2], "range count");
    if (count < 1 || count != std::floor(count)) throw UsageError("range count must be >= 1");
    const int n = static_cast<int>(count);
    for (int i = 0; i < n; ++i)
      grid.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
  }
  if (grid.empty()) throw UsageError("sweep grid is empty");
  const bool up = grid.size() < 2 || grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
      throw UsageError("sweep grid must be strictly monotone");
  }
  return grid;
}

struct SweepRow {
  std::vector<double> values;
  std::string status = "ok";
  std::string hash;
  std::vector<std::string> assumed;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  if (a.list) {
    for (std::size_t i = 0; i < mcr_quantity_count(); ++i) std::cout << mcr_quantity_name(i) << '\n';
    return kExitOk;
  }
  if (!mcr_is_known_key(a.key.c_str())) throw UsageError("unknown sweep key '" + a.key + "'");
  const auto targets = split(a.targets, ',');
  if (targets.empty()) throw UsageError("no targets given");
  for (const auto& t : targets) {
    bool known = false;
    for (std::size_t i = 0; i < mcr_quantity_count(); ++i) known |= t == mcr_quantity_name(i);
    if (!known) throw UsageError("unknown target '" + t + "' (see sweep --list-targets)");
  }
  const auto grid = sweep_grid(a);
  const ConfigPtr base = base_config(g);

  std::vector<SweepRow> rows(grid.size());
  parallel_rows(grid.size(), g.jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.values.assign(targets.size(), std::nan(""));
    mcr_config* raw = nullptr;
    if (mcr_config_clone(base.get(), &raw) != MCR_OK) {
      row.status = std::string("error: ") + mcr_last_error();
      return;
    }
    ConfigPtr cfg(raw);
    mcr_config_set(cfg.get(), a.key.c_str(), num(grid[i]).c_str());
    mcr_model* model_raw = nullptr;
    if (mcr_model_build(cfg.get(), &model_raw) != MCR_OK) {
      row.status = std::string("error: ") + mcr_last_error();
      return;
    }
    ModelPtr model(model_raw);
    row.hash = hex_hash(mcr_model_hash(model.get()));
    row.assumed = assumed(model.get());
    std::vector<std::string> errors;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (mcr_evaluate(model.get(), targets[t].c_str(), &row.values[t]) != MCR_OK) {
        row.values[t] = std::nan("");
        errors.push_back(targets[t] + ": " + mcr_last_error());
      }
    }
    if (!errors.empty()) row.status = "error: " + joined(errors, ';');
  });

  Output out(g.out_path);
  std::ostream& os = out.stream();
  if (g.format == "json") {
    json doc;
    doc["command"] = "sweep";
    doc["key"] = a.key;
    doc["targets"] = targets;
    json jrows = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json r;
      r["index"] = i;
      r[a.key] = grid[i];
      for (std::size_t t = 0; t < targets.size(); ++t) r[targets[t]] = jnum(rows[i].values[t]);
      r["status"] = rows[i].status;
      r["scenario_hash"] = rows[i].hash;
      r["assumed_defaults"] = rows[i].assumed;
      jrows.push_back(std::move(r));
    }
    doc["rows"] = std::move(jrows);
    os << doc.dump(2) << '\n';
  } else {
    os << "index," << a.key;
    for (const auto& t : targets) os << ',' << t;
    os << ",status,scenario_hash,assumed_defaults\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      os << i << ',' << num(grid[i]);
      for (const double v : rows[i].values) os << ',' << (std::isnan(v) ? "" : num(v));
      os << ',' << csv_field(rows[i].status) << ',' << rows[i].hash << ','
         << csv_field(joined(rows[i].assumed, ';')) << '\n';
    }
  }
  return kExitOk;
}

// ---- optimize --------------------------------------------------------------

json pair_json(const mcr_pair& p) {
  json j;
  j["psi"] = p.psi;
  j["lambda_e_crit_per_m2"] = p.lambda_e_crit;
  j["lambda_e_crit_per_km2"] = p.lambda_e_crit * 1e6;
  j["residual_s"] = p.residual;
  j["at_lower_bound"] = p.at_lower_bound != 0;
  j["e_sys_j_per_m2"] = p.e_sys;
  return j;
}

int cmd_optimize(const Globals& g, int paths) {
  const ConfigPtr cfg = base_config(g);
  const ModelPtr model = build_model(cfg.get());
  report_warnings(model.get());
  const std::string hash = hex_hash(mcr_model_hash(model.get()));
  const auto np = assumed(model.get());

  mcr_seem_result* raw = nullptr;
  double budget = std::nan("");
  const mcr_status st = mcr_optimize(model.get(), paths, g.jobs, &raw, &budget);
  Output out(g.out_path);
  std::ostream& os = out.stream();
  if (st == MCR_ERR_INFEASIBLE && !raw) {
    std::cerr << "no feasible pair: " << mcr_last_error() << '\n';
    if (g.format == "json") {
      json doc;
      doc["command"] = "optimize";
      doc["status"] = "no_feasible_pair";
      doc["budget_s"] = jnum(budget);
      doc["scenario_hash"] = hash;
      doc["assumed_defaults"] = np;
      os << doc.dump(2) << '\n';
    } else {
      os << "status,budget_s,scenario_hash,assumed_defaults\n"
         << "no_feasible_pair," << num(budget) << ',' << hash << ',' << csv_field(joined(np, ';'))
         << '\n';
    }
    return kExitInfeasible;
  }
  check(st);
  std::unique_ptr<mcr_seem_result, void (*)(mcr_seem_result*)> result(raw, mcr_seem_free);
  const mcr_pair best = mcr_seem_best(result.get());

  // One row per psi, feasible or skipped, in psi order.
  struct Row {
    int psi;
    const mcr_pair* pair;
    const char* reason;
  };
  std::vector<mcr_pair> feasible;
  for (std::size_t i = 0; i < mcr_seem_feasible_count(result.get()); ++i)
    feasible.push_back(mcr_seem_feasible(result.get(), i));
  std::vector<Row> rows;
  for (const auto& p : feasible) rows.push_back({p.psi, &p, nullptr});
  for (std::size_t i = 0; i < mcr_seem_skipped_count(result.get()); ++i)
    rows.push_back({mcr_seem_skipped_psi(result.get(), i), nullptr,
                    mcr_seem_skipped_reason(result.get(), i)});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.psi < b.psi; });

  std::cerr << "best: psi=" << best.psi << " lambda_e=" << num(best.lambda_e_crit * 1e6)
            << " /km^2 e_sys=" << num(best.e_sys) << " J/m^2 (budget " << num(budget)
            << " s)\n";
  if (g.format == "json") {
    json doc;
    doc["command"] = "optimize";
    doc["status"] = "ok";
    doc["budget_s"] = budget;
    doc["best"] = pair_json(best);
    doc["e_sys_min_j_per_m2"] = best.e_sys;
    json fs = json::array();
    for (const auto& p : feasible) fs.push_back(pair_json(p));
    doc["feasible_set"] = std::move(fs);
    json sk = json::array();
    for (const auto& r : rows) {
      if (r.pair) continue;
      sk.push_back({{"psi", r.psi}, {"reason", r.reason}});
    }
    doc["skipped"] = std::move(sk);
    doc["scenario_hash"] = hash;
    doc["assumed_defaults"] = np;
    os << doc.dump(2) << '\n';
  } else {
    os << "psi,status,lambda_e_crit_per_m2,lambda_e_crit_per_km2,residual_s,at_lower_bound,"
          "e_sys_j_per_m2,best,budget_s,scenario_hash,assumed_defaults\n";
    const std::string tail = num(budget) + ',' + hash + ',' + csv_field(joined(np, ';'));
    for (const auto& r : rows) {
      os << r.psi << ',';
      if (r.pair) {
        os << "feasible," << num(r.pair->lambda_e_crit) << ',' << num(r.pair->lambda_e_crit * 1e6)
           << ',' << num(r.pair->residual) << ',' << r.pair->at_lower_bound << ','
           << num(r.pair->e_sys) << ',' << (r.psi == best.psi ? 1 : 0);
      } else {
        os << csv_field(std::string("skipped: ") + r.reason) << ",,,,,,0";
      }
      os << ',' << tail << '\n';
    }
  }
  return kExitOk;
}

// ---- validate --------------------------------------------------------------

int cmd_validate(const Globals& g) {
  const ConfigPtr cfg = base_config(g);
  const ModelPtr model = build_model(cfg.get());
  report_warnings(model.get());
  mcr_validation* raw = nullptr;
  check(mcr_validate(model.get(), g.trials, g.seed, g.jobs, &raw));
  std::unique_ptr<mcr_validation, void (*)(mcr_validation*)> v(raw, mcr_validation_free);
  const std::string hash = hex_hash(mcr_model_hash(model.get()));
  const auto np = assumed(model.get());

  std::size_t failures = 0;
  Output out(g.out_path);
  std::ostream& os = out.stream();
  json checks = json::array();
  if (g.format != "json")
    os << "name,criterion,analytic,mc_mean,std_error,z,n_samples,pass,seed,scenario_hash,"
          "assumed_defaults\n";
  for (std::size_t i = 0; i < mcr_validation_count(v.get()); ++i) {
    const mcr_check c = mcr_validation_get(v.get(), i);
    failures += c.pass ? 0 : 1;
    if (g.format == "json") {
      json j;
      j["name"] = c.name;
      j["criterion"] = c.criterion;
      j["analytic"] = jnum(c.analytic);
      j["mc_mean"] = jnum(c.mc_mean);
      j["std_error"] = jnum(c.std_error);
      j["z"] = jnum(c.z);
      j["n_samples"] = c.n_samples;
      j["pass"] = c.pass != 0;
      checks.push_back(std::move(j));
    } else {
      os << csv_field(c.name) << ',' << c.criterion << ',' << num(c.analytic) << ','
         << num(c.mc_mean) << ',' << num(c.std_error) << ',' << num(c.z) << ',' << c.n_samples
         << ',' << (c.pass ? "pass" : "FAIL") << ',' << g.seed << ',' << hash << ','
         << csv_field(joined(np, ';')) << '\n';
    }
  }
  if (g.format == "json") {
    json doc;
    doc["command"] = "validate";
    doc["seed"] = g.seed;
    doc["trials"] = g.trials;
    doc["checks"] = std::move(checks);
    doc["failures"] = failures;
    doc["scenario_hash"] = hash;
    doc["assumed_defaults"] = np;
    os << doc.dump(2) << '\n';
  }
  std::cerr << mcr_validation_count(v.get()) - failures << '/' << mcr_validation_count(v.get())
            << " oracle checks passed\n";
  return failures ? kExitValidation : kExitOk;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& mode, const std::string& topology,
                 const std::string& trace) {
  const ConfigPtr cfg = base_config(g);
  const ModelPtr model = build_model(cfg.get());
  report_warnings(model.get());
  mcr_sim_result r{};
  const auto m = mode == "single" ? MCR_BACKHAUL_SINGLE : MCR_BACKHAUL_MCR;
  const auto t = topology == "sampled" ? MCR_TOPOLOGY_SAMPLED : MCR_TOPOLOGY_MEAN_DISTANCE;
  const mcr_status st = mcr_simulate_backhaul(model.get(), m, t, g.trials, g.seed, g.jobs,
                                              trace.empty() ? nullptr : trace.c_str(), &r);
  if (st == MCR_ERR_INFEASIBLE) {
    std::cerr << "infeasible: " << mcr_last_error() << '\n';
    return kExitInfeasible;
  }
  check(st);
  const std::string hash = hex_hash(mcr_model_hash(model.get()));
  const auto np = assumed(model.get());
  Output out(g.out_path);
  std::ostream& os = out.stream();
  if (g.format == "json") {
    json doc;
    doc["command"] = "simulate";
    doc["mode"] = mode;
    doc["topology"] = topology;
    doc["mean_s"] = jnum(r.mean);
    doc["std_error_s"] = jnum(r.std_error);
    doc["n_samples"] = r.n_samples;
    doc["discarded"] = r.discarded;
    doc["seed"] = g.seed;
    doc["scenario_hash"] = hash;
    doc["assumed_defaults"] = np;
    os << doc.dump(2) << '\n';
  } else {
    os << "mode,topology,mean_s,std_error_s,n_samples,discarded,seed,scenario_hash,"
          "assumed_defaults\n"
       << mode << ',' << topology << ',' << num(r.mean) << ',' << num(r.std_error) << ','
       << r.n_samples << ',' << r.discarded << ',' << g.seed << ',' << hash << ','
       << csv_field(joined(np, ';')) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcrsim: multi-path cooperative route latency and energy model"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Scenario file (key = value lines)");
  app.add_option("--param", g.params, "Override, KEY=VALUE (repeatable)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.fallthrough();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate targets over a parameter grid");
  sweep_cmd->add_option("--vary", sweep.key, "Config key to sweep (with unit suffix)");
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated grid values");
  sweep_cmd->add_option("--range", sweep.range, "Linear grid START:STOP:COUNT");
  sweep_cmd->add_option("--targets", sweep.targets, "Comma-separated quantities")
      ->capture_default_str();
  sweep_cmd->add_flag("--list-targets", sweep.list, "Print the available quantities");

  int paths = 0;
  auto* opt_cmd = app.add_subcommand("optimize", "Run the SEEM (a.k.a. SEEO) optimizer");
  opt_cmd->add_option("--paths", paths, "Cooperating EDCs (0 = from config, 1 = single path)")
      ->check(CLI::NonNegativeNumber);

  auto* val_cmd = app.add_subcommand("validate", "Compare closed forms with Monte-Carlo oracles");

  std::string sim_mode = "mcr", sim_topology = "mean", sim_trace;
  auto* sim_cmd = app.add_subcommand("simulate", "Packet-level backhaul simulation");
  sim_cmd->add_option("--mode", sim_mode)->check(CLI::IsMember({"mcr", "single"}))->capture_default_str();
  sim_cmd->add_option("--topology", sim_topology)
      ->check(CLI::IsMember({"mean", "sampled"}))
      ->capture_default_str();
  sim_cmd->add_option("--trace", sim_trace, "Write one JSON line per trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep_cmd) {
      if (!sweep.list && sweep.key.empty()) throw UsageError("sweep needs --vary KEY");
      return cmd_sweep(g, sweep);
    }
    if (*opt_cmd) return cmd_optimize(g, paths);
    if (*val_cmd) return cmd_validate(g);
    if (*sim_cmd) return cmd_simulate(g, sim_mode, sim_topology, sim_trace);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
