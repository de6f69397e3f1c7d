#include "mcrsim/mcr.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "mcrsim/config.hpp"
#include "mcrsim/error.hpp"
#include "mcrsim/latency.hpp"
#include "mcrsim/montecarlo.hpp"
#include "mcrsim/popularity.hpp"
#include "mcrsim/route.hpp"
#include "mcrsim/seem.hpp"
#include "mcrsim/validation.hpp"

struct mcr_config {
  mcrsim::ConfigDocument doc;
};

struct mcr_model {
  mcrsim::SystemModel model;
};

struct mcr_seem_result {
  mcrsim::SeemOutcome outcome;
};

struct mcr_validation {
  std::vector<mcrsim::OracleCheck> checks;
};

namespace {

thread_local std::string last_error;

mcr_status to_status(mcrsim::ErrorCode code) {
  switch (code) {
    case mcrsim::ErrorCode::parse: return MCR_ERR_PARSE;
    case mcrsim::ErrorCode::invariant: return MCR_ERR_INVARIANT;
    case mcrsim::ErrorCode::argument: return MCR_ERR_ARGUMENT;
    case mcrsim::ErrorCode::numerical: return MCR_ERR_NUMERICAL;
    case mcrsim::ErrorCode::infeasible: return MCR_ERR_INFEASIBLE;
    case mcrsim::ErrorCode::io: return MCR_ERR_IO;
  }
  return MCR_ERR_INTERNAL;
}

template <class Fn>
mcr_status guarded(Fn&& fn) {
  try {
    fn();
    return MCR_OK;
  } catch (const mcrsim::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return MCR_ERR_INTERNAL;
}

mcr_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return MCR_ERR_ARGUMENT;
}

mcr_pair to_pair(const mcrsim::FeasiblePair& p) {
  return {p.psi, p.lambda_e_crit, p.residual, p.at_lower_bound ? 1 : 0, p.e_sys};
}

}  // namespace

extern "C" {

const char* mcr_last_error(void) { return last_error.c_str(); }

const char* mcr_version(void) { return "0.1.0"; }

mcr_status mcr_config_new(mcr_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new mcr_config{}; });
}

mcr_status mcr_config_parse(const char* text, mcr_config** out) {
  if (!text || !out) return null_argument("text/out");
  return guarded([&] { *out = new mcr_config{mcrsim::ConfigDocument::parse(text)}; });
}

mcr_status mcr_config_load(const char* path, mcr_config** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new mcr_config{mcrsim::ConfigDocument::load_file(path)}; });
}

mcr_status mcr_config_clone(const mcr_config* cfg, mcr_config** out) {
  if (!cfg || !out) return null_argument("cfg/out");
  return guarded([&] { *out = new mcr_config{cfg->doc}; });
}

mcr_status mcr_config_set(mcr_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return null_argument("cfg/key/value");
  return guarded([&] { cfg->doc.set(key, value); });
}

mcr_status mcr_config_set_assignment(mcr_config* cfg, const char* assignment) {
  if (!cfg || !assignment) return null_argument("cfg/assignment");
  return guarded([&] { cfg->doc.set_assignment(assignment); });
}

void mcr_config_free(mcr_config* cfg) { delete cfg; }

int mcr_is_known_key(const char* key) { return key && mcrsim::is_known_key(key) ? 1 : 0; }

mcr_status mcr_model_build(const mcr_config* cfg, mcr_model** out) {
  if (!cfg || !out) return null_argument("cfg/out");
  return guarded([&] { *out = new mcr_model{mcrsim::load_config(cfg->doc)}; });
}

void mcr_model_free(mcr_model* model) { delete model; }

uint64_t mcr_model_hash(const mcr_model* model) {
  return model ? mcrsim::scenario_hash(model->model) : 0;
}

size_t mcr_model_warning_count(const mcr_model* model) {
  return model ? model->model.warnings.size() : 0;
}

const char* mcr_model_warning(const mcr_model* model, size_t i) {
  if (!model || i >= model->model.warnings.size()) return nullptr;
  return model->model.warnings[i].c_str();
}

size_t mcr_model_assumed_count(const mcr_model* model) {
  return model ? model->model.assumed_defaults.size() : 0;
}

const char* mcr_model_assumed(const mcr_model* model, size_t i) {
  if (!model || i >= model->model.assumed_defaults.size()) return nullptr;
  return model->model.assumed_defaults[i].c_str();
}

mcr_status mcr_model_emit(const mcr_model* model, char** out) {
  if (!model || !out) return null_argument("model/out");
  return guarded([&] {
    const std::string text = mcrsim::emit_config(model->model);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void mcr_string_free(char* s) { delete[] s; }

size_t mcr_quantity_count(void) { return mcrsim::quantity_names().size(); }

const char* mcr_quantity_name(size_t i) {
  static const std::vector<std::string> names = mcrsim::quantity_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

mcr_status mcr_evaluate(const mcr_model* model, const char* quantity, double* out) {
  if (!model || !quantity || !out) return null_argument("model/quantity/out");
  return guarded([&] { *out = mcrsim::evaluate_quantity(model->model, quantity); });
}

mcr_status mcr_total_latency(const mcr_model* model, mcr_latency* out) {
  if (!model || !out) return null_argument("model/out");
  return guarded([&] {
    const auto& m = model->model;
    const double p_hit =
        mcrsim::hit_probability(mcrsim::zipf(m.content.beta, m.content.k_total), m.content.psi);
    const auto d = mcrsim::total_latency(m.network, p_hit, mcrsim::mcr_backhaul_delay(m.network));
    *out = {d.d_ul_req_tx, d.d_ul_req_queue, d.d_dl_deli, d.d_dl_bh,
            d.d_dl_as,     d.d_fiber_term,   d.total};
  });
}

mcr_status mcr_optimize(const mcr_model* model, int b_paths, int jobs, mcr_seem_result** out,
                        double* budget_out) {
  if (!model || !out) return null_argument("model/out");
  try {
    mcrsim::SeemOptions opt;
    opt.b_paths = b_paths;
    opt.jobs = jobs;
    const auto& m = model->model;
    auto outcome = mcrsim::seem_optimize(m.network, m.energy, m.content, opt);
    if (budget_out) *budget_out = outcome.budget;
    *out = new mcr_seem_result{std::move(outcome)};
    return MCR_OK;
  } catch (const mcrsim::NoFeasiblePair& e) {
    if (budget_out) *budget_out = e.budget();
    last_error = e.what();
    return MCR_ERR_INFEASIBLE;
  } catch (...) {
    return guarded([] { throw; });
  }
}

double mcr_seem_budget(const mcr_seem_result* r) { return r ? r->outcome.budget : 0.0; }

mcr_pair mcr_seem_best(const mcr_seem_result* r) {
  return r ? to_pair(r->outcome.best) : mcr_pair{};
}

size_t mcr_seem_feasible_count(const mcr_seem_result* r) {
  return r ? r->outcome.feasible_set.size() : 0;
}

mcr_pair mcr_seem_feasible(const mcr_seem_result* r, size_t i) {
  if (!r || i >= r->outcome.feasible_set.size()) return mcr_pair{};
  return to_pair(r->outcome.feasible_set[i]);
}

size_t mcr_seem_skipped_count(const mcr_seem_result* r) {
  return r ? r->outcome.skipped.size() : 0;
}

int mcr_seem_skipped_psi(const mcr_seem_result* r, size_t i) {
  if (!r || i >= r->outcome.skipped.size()) return 0;
  return r->outcome.skipped[i].psi;
}

const char* mcr_seem_skipped_reason(const mcr_seem_result* r, size_t i) {
  if (!r || i >= r->outcome.skipped.size()) return nullptr;
  return r->outcome.skipped[i].reason.c_str();
}

void mcr_seem_free(mcr_seem_result* r) { delete r; }

mcr_status mcr_validate(const mcr_model* model, uint64_t trials, uint64_t seed, int jobs,
                        mcr_validation** out) {
  if (!model || !out) return null_argument("model/out");
  return guarded([&] {
    *out = new mcr_validation{mcrsim::run_validation(model->model, trials, seed, jobs)};
  });
}

size_t mcr_validation_count(const mcr_validation* v) { return v ? v->checks.size() : 0; }

mcr_check mcr_validation_get(const mcr_validation* v, size_t i) {
  if (!v || i >= v->checks.size()) return mcr_check{};
  const auto& c = v->checks[i];
  return {c.name.c_str(), c.analytic, c.mc_mean,           c.std_error,
          c.z,            c.n_samples, c.criterion.c_str(), c.pass ? 1 : 0};
}

void mcr_validation_free(mcr_validation* v) { delete v; }

mcr_status mcr_simulate_backhaul(const mcr_model* model, mcr_backhaul_mode mode,
                                 mcr_topology topology, uint64_t trials, uint64_t seed,
                                 int jobs, const char* trace_path, mcr_sim_result* out) {
  if (!model || !out) return null_argument("model/out");
  return guarded([&] {
    const auto& s = model->model.network;
    std::ofstream trace;
    mcrsim::BackhaulSimOptions opt;
    opt.mode = mode == MCR_BACKHAUL_SINGLE ? mcrsim::BackhaulMode::single_path
                                           : mcrsim::BackhaulMode::mcr;
    opt.trials = trials;
    opt.seed = seed;
    opt.jobs = jobs;
    if (trace_path) {
      trace.open(trace_path);
      if (!trace)
        throw mcrsim::Error(mcrsim::ErrorCode::io,
                            std::string("cannot open trace file '") + trace_path + "'");
      opt.trace = &trace;
    }
    mcrsim::BackhaulSimResult res;
    if (topology == MCR_TOPOLOGY_SAMPLED) {
      res = mcrsim::simulate_backhaul_sampled(s, opt);
    } else {
      const int b = mode == MCR_BACKHAUL_SINGLE ? 1 : mcrsim::cooperative_paths(s);
      res = mcrsim::simulate_backhaul(s, mcrsim::mean_distance_topology(s, b), opt);
    }
    *out = {res.delay.mean, res.delay.std_error, res.delay.n_samples, res.discarded};
  });
}

}  // extern "C"
