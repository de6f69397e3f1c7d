#include "mcrsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "mcrsim/error.hpp"
#include "mcrsim/random.hpp"
#include "mcrsim/route.hpp"
#include "parallel.hpp"

namespace mcrsim {

namespace {

constexpr double kPi = std::numbers::pi;
// Trials are aggregated in fixed-size chunks, combined in chunk order, so the
// result does not depend on how many threads ran them.
constexpr std::uint64_t kChunk = 4096;

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

McEstimate to_estimate(const Moments& m, std::uint64_t seed) {
  McEstimate e;
  e.mean = m.mean;
  e.n_samples = m.n;
  e.seed = seed;
  e.std_error = m.n > 1 ? std::sqrt(m.m2 / static_cast<double>(m.n - 1) / static_cast<double>(m.n)) : 0.0;
  return e;
}

void require_trials(std::uint64_t trials) {
  if (trials < 1) throw Error(ErrorCode::argument, "trials must be >= 1");
}

// trial(rng, index) -> sample. Each trial owns substream `index` of `seed`.
template <class Trial>
McEstimate run_trials(std::uint64_t trials, std::uint64_t seed, int jobs, Trial&& trial) {
  require_trials(trials);
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  detail::parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(trials, begin + kChunk);
    for (std::uint64_t t = begin; t < end; ++t) {
      Philox4x32 rng(seed, t);
      partial[c].add(trial(rng, t));
    }
  });
  Moments total;
  for (const auto& m : partial) total.merge(m);
  return to_estimate(total, seed);
}

std::uint64_t poisson(Philox4x32& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

// Distance from the centre of a uniform point on the disc of radius R.
double disc_radius(Philox4x32& rng, double region_radius) {
  return region_radius * std::sqrt(rng.uniform());
}

// Uniform distance on the annulus [r_in, r_out].
double annulus_radius(Philox4x32& rng, double r_in, double r_out) {
  const double u = rng.uniform();
  return std::sqrt(r_in * r_in + u * (r_out * r_out - r_in * r_in));
}

double gamma_unit(Philox4x32& rng, int shape) {
  std::gamma_distribution<double> dist(static_cast<double>(shape), 1.0);
  return dist(rng);
}

// k-th smallest PPP distance from the origin. The disc is grown annulus by
// annulus until it holds k points, which keeps the process exactly Poisson.
double kth_nearest_sample(Philox4x32& rng, double lambda, int k) {
  double inner = 0.0;
  double outer = std::max(typical_region_radius(lambda),
                          std::sqrt((k + 10.0 * std::sqrt(k) + 30.0) / (kPi * lambda)));
  std::vector<double> radii;
  for (;;) {
    const double mean = lambda * kPi * (outer * outer - inner * inner);
    const std::uint64_t count = poisson(rng, mean);
    for (std::uint64_t i = 0; i < count; ++i) radii.push_back(annulus_radius(rng, inner, outer));
    if (radii.size() >= static_cast<std::size_t>(k)) break;
    inner = outer;
    outer *= 2.0;
  }
  auto kth = radii.begin() + (k - 1);
  std::nth_element(radii.begin(), kth, radii.end());
  return *kth;
}

// Nearest-node received-power test: Gamma(nt*nr, 1) / nt gain on the nearest
// PPP node of a disc of radius >= 5 / sqrt(lambda).
double power_threshold_trial(Philox4x32& rng, double lambda, double power, double threshold,
                             double alpha, int nt, int nr) {
  const double region = typical_region_radius(lambda);
  const std::uint64_t count = poisson(rng, lambda * kPi * region * region);
  if (count == 0) return 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < count; ++i) nearest = std::min(nearest, disc_radius(rng, region));
  const double received = power / nt * gamma_unit(rng, nt * nr) * std::pow(nearest, -alpha);
  return received >= threshold ? 1.0 : 0.0;
}

}  // namespace

double typical_region_radius(double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::argument, "density must be > 0");
  return 5.0 / std::sqrt(lambda);
}

std::vector<Point> sample_ppp(double lambda, double region_radius, std::uint64_t seed,
                              std::uint64_t substream) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::argument, "density must be >= 0");
  if (!(region_radius > 0.0)) throw Error(ErrorCode::argument, "region radius must be > 0");
  Philox4x32 rng(seed, substream);
  const std::uint64_t count = poisson(rng, lambda * kPi * region_radius * region_radius);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double r = disc_radius(rng, region_radius);
    const double phi = 2.0 * kPi * rng.uniform();
    pts.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  return pts;
}

std::uint64_t SampledTopology::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_points = [&](const std::vector<Point>& pts) {
    const std::uint64_t n = pts.size();
    mix(&n, sizeof n);
    for (const auto& p : pts) {
      mix(&p.x, sizeof p.x);
      mix(&p.y, sizeof p.y);
    }
  };
  mix(&region_radius, sizeof region_radius);
  mix_points(mbs);
  mix_points(sbs);
  mix_points(edc);
  mix_points(users);
  for (const double l : {lambda_m, lambda_s, lambda_e, lambda_u}) mix(&l, sizeof l);
  mix(&seed, sizeof seed);
  return h;
}

SampledTopology sample_topology(const NetworkScenario& s, double region_radius,
                                std::uint64_t seed) {
  SampledTopology t;
  t.region_radius = region_radius;
  t.lambda_m = s.lambda_m;
  t.lambda_s = s.lambda_s;
  t.lambda_e = s.lambda_e;
  t.lambda_u = s.lambda_u;
  t.seed = seed;
  t.mbs = sample_ppp(s.lambda_m, region_radius, seed, 0);
  t.sbs = sample_ppp(s.lambda_s, region_radius, seed, 1);
  t.edc = sample_ppp(s.lambda_e, region_radius, seed, 2);
  t.users = sample_ppp(s.lambda_u, region_radius, seed, 3);
  return t;
}

SampledTopology mean_distance_topology(const NetworkScenario& s, int b) {
  if (b < 1) throw Error(ErrorCode::argument, "path count must be >= 1");
  SampledTopology t;
  t.lambda_m = s.lambda_m;
  t.lambda_s = s.lambda_s;
  t.lambda_e = s.lambda_e;
  t.lambda_u = s.lambda_u;
  t.users.push_back({0.0, 0.0});
  t.sbs.push_back({0.0, 0.0});
  for (int p = 1; p <= b; ++p) {
    const double r = mean_kth_edc_distance(s.lambda_e, p);
    const double phi = 2.0 * kPi * (p - 1) / b;
    const double cx = std::cos(phi), cy = std::sin(phi);
    const int hops = std::max(1, static_cast<int>(std::ceil(r / s.r_mmw)));
    for (int j = 1; j < hops; ++j) {
      const double d = r * j / hops;
      t.sbs.push_back({d * cx, d * cy});
    }
    t.edc.push_back({r * cx, r * cy});
    t.region_radius = std::max(t.region_radius, r);
  }
  return t;
}

std::vector<double> sample_kth_nearest(double lambda, int k, std::uint64_t trials,
                                       std::uint64_t seed, int jobs) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::argument, "density must be > 0");
  if (k < 1) throw Error(ErrorCode::argument, "neighbour rank must be >= 1");
  require_trials(trials);
  std::vector<double> out(trials);
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  detail::parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t end = std::min(trials, (c + 1) * kChunk);
    for (std::uint64_t t = c * kChunk; t < end; ++t) {
      Philox4x32 rng(seed, t);
      out[t] = kth_nearest_sample(rng, lambda, k);
    }
  });
  return out;
}

McEstimate estimate_kth_nearest(double lambda, int k, std::uint64_t trials,
                                std::uint64_t seed, int jobs) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::argument, "density must be > 0");
  if (k < 1) throw Error(ErrorCode::argument, "neighbour rank must be >= 1");
  return run_trials(trials, seed, jobs, [&](Philox4x32& rng, std::uint64_t) {
    return kth_nearest_sample(rng, lambda, k);
  });
}

McEstimate estimate_uplink_success(const NetworkScenario& s, std::uint64_t trials,
                                   std::uint64_t seed, int jobs) {
  return run_trials(trials, seed, jobs, [&](Philox4x32& rng, std::uint64_t) {
    return power_threshold_trial(rng, s.lambda_m, s.p_u, s.theta1, s.alpha1, s.nt_u, s.nr_m);
  });
}

McEstimate estimate_access_success(const NetworkScenario& s, std::uint64_t trials,
                                   std::uint64_t seed, int jobs) {
  return run_trials(trials, seed, jobs, [&](Philox4x32& rng, std::uint64_t) {
    return power_threshold_trial(rng, s.lambda_s, s.p_s, s.theta3, s.alpha2, s.nt_s, s.nr_u);
  });
}

McEstimate estimate_deli_success(const NetworkScenario& s, std::uint64_t trials,
                                 std::uint64_t seed, int jobs) {
  const int n = s.nt_m * s.nr_e;
  const double region = typical_region_radius(s.lambda_m);
  const double gain = s.p_m / s.nt_m;
  const double noise = s.n0 * s.w_mmw;
  // Interferers beyond the disc enter through their mean (Campbell), which
  // removes the truncation bias without sampling an unbounded plane.
  const double far_field = s.lambda_m * gain * n * 2.0 * kPi *
                           std::pow(region, 2.0 - s.alpha1) / (s.alpha1 - 2.0);
  return run_trials(trials, seed, jobs, [&](Philox4x32& rng, std::uint64_t) {
    const std::uint64_t count = poisson(rng, s.lambda_m * kPi * region * region);
    if (count == 0) return 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    double total = 0.0;  // received power from every node in the disc
    double nearest_power = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double r = disc_radius(rng, region);
      const double power = gain * gamma_unit(rng, n) * std::pow(r, -s.alpha1);
      total += power;
      if (r < nearest) {
        nearest = r;
        nearest_power = power;
      }
    }
    const double interference = total - nearest_power + far_field;
    return nearest_power >= s.theta2 * (interference + noise) ? 1.0 : 0.0;
  });
}

McEstimate estimate_shadowing_success(double margin_db, double sigma_db, std::uint64_t trials,
                                      std::uint64_t seed, int jobs) {
  if (!(sigma_db >= 0.0)) throw Error(ErrorCode::argument, "sigma must be >= 0");
  return run_trials(trials, seed, jobs, [&](Philox4x32& rng, std::uint64_t) {
    double zeta = 0.0;
    if (sigma_db > 0.0) zeta = std::normal_distribution<double>(0.0, sigma_db)(rng);
    return zeta <= margin_db ? 1.0 : 0.0;
  });
}

McEstimate estimate_shadowing_success(const NetworkScenario& s, std::uint64_t trials,
                                      std::uint64_t seed, int jobs) {
  return estimate_shadowing_success(mmwave_link_margin(s), s.sigma_db, trials, seed, jobs);
}

namespace {

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Route {
  std::vector<int> hops;         // per path
  std::vector<std::uint64_t> packets;
};

std::size_t nearest_index(const std::vector<Point>& pts, const Point& to) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (dist(pts[i], to) < dist(pts[best], to)) best = i;
  return best;
}

class CellIndex {
 public:
  CellIndex(const std::vector<Point>& pts, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[key(cx(pts[i].x), cx(pts[i].y))].push_back(i);
  }

  template <typename Fn>
  void for_near(const Point& p, Fn&& fn) const {
    const std::int64_t x = cx(p.x), y = cx(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets_.find(key(x + dx, y + dy));
        if (it == buckets_.end()) continue;
        for (const std::size_t i : it->second) fn(i);
      }
  }

 private:
  std::int64_t cx(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return (static_cast<std::uint64_t>(x) << 32) ^ static_cast<std::uint32_t>(y);
  }

  double cell_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

// Splits `total` packets by weights using largest remainders; ties go to the
// lower index.
std::vector<std::uint64_t> split_packets(std::uint64_t total, const std::vector<double>& weights) {
  double sum = 0.0;
  for (const double w : weights) sum += w;
  std::vector<std::uint64_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rest;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += out[i];
    rest.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++out[rest[i % rest.size()].second];
  return out;
}

// Minimum-hop chains from the B EDCs nearest the destination SBS. Returns
// false when any of them has no chain.
bool plan_route(const NetworkScenario& s, const SampledTopology& t, int b, Route& route) {
  if (t.sbs.empty() || static_cast<int>(t.edc.size()) < b) return false;
  const Point user = t.users.empty() ? Point{} : t.users[nearest_index(t.users, Point{})];
  const std::size_t dest = nearest_index(t.sbs, user);
  const Point& d = t.sbs[dest];

  // BFS over SBS relays, links no longer than r_mmw. Bucketing by r_mmw cells
  // keeps each expansion to the 3x3 neighbourhood.
  const CellIndex cells(t.sbs, s.r_mmw);
  std::vector<int> level(t.sbs.size(), -1);
  std::deque<std::size_t> queue{dest};
  level[dest] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    cells.for_near(t.sbs[u], [&](std::size_t v) {
      if (level[v] < 0 && dist(t.sbs[u], t.sbs[v]) <= s.r_mmw) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    });
  }

  std::vector<std::size_t> order(t.edc.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
    return dist(t.edc[a], d) < dist(t.edc[c], d);
  });

  route.hops.clear();
  std::vector<double> weights;
  for (int p = 0; p < b; ++p) {
    const Point& e = t.edc[order[static_cast<std::size_t>(p)]];
    int best = -1;
    cells.for_near(e, [&](std::size_t v) {
      if (level[v] >= 0 && dist(e, t.sbs[v]) <= s.r_mmw && (best < 0 || level[v] < best))
        best = level[v];
    });
    if (best < 0) return false;
    route.hops.push_back(best + 1);
    weights.push_back(1.0 / std::max(dist(e, d), std::numeric_limits<double>::min()));
  }
  route.packets = split_packets(static_cast<std::uint64_t>(buffer_packets(s)), weights);
  return true;
}

struct TrialRecord {
  std::vector<std::uint64_t> slots;
  double delay = 0.0;
};

// Stop-and-wait: every hop of every packet retries slot by slot until the
// relay is selected and the shadowed link closes.
TrialRecord run_backhaul_trial(const NetworkScenario& s, const Route& route, double p1,
                               double margin_first, double margin, Philox4x32& rng) {
  std::normal_distribution<double> shadow(0.0, s.sigma_db);
  TrialRecord rec;
  for (std::size_t p = 0; p < route.hops.size(); ++p) {
    std::uint64_t slots = 0;
    for (std::uint64_t k = 0; k < route.packets[p]; ++k) {
      for (int h = 0; h < route.hops[p]; ++h) {
        const double f = h == 0 ? margin_first : margin;
        for (;;) {
          ++slots;
          if (rng.uniform() >= p1) continue;
          if (shadow(rng) <= f) break;
        }
      }
    }
    rec.slots.push_back(slots);
    rec.delay = std::max(rec.delay, static_cast<double>(slots) * s.tau_mmw);
  }
  return rec;
}

void write_trace(std::ostream& out, std::uint64_t trial, std::uint64_t seed,
                 std::uint64_t topology_hash, const Route* route, const TrialRecord* rec) {
  nlohmann::json j;
  j["trial"] = trial;
  j["seed"] = seed;
  j["topology_hash"] = topology_hash;
  if (route && rec) {
    j["hops"] = route->hops;
    j["packets"] = route->packets;
    j["slots"] = rec->slots;
    j["delay"] = rec->delay;
  } else {
    j["discarded"] = true;
  }
  out << j.dump() << '\n';
}

int path_count(const NetworkScenario& s, BackhaulMode mode) {
  return mode == BackhaulMode::single_path ? 1 : cooperative_paths(s);
}

}  // namespace

BackhaulSimResult simulate_backhaul(const NetworkScenario& s, const SampledTopology& topology,
                                    const BackhaulSimOptions& options) {
  require_trials(options.trials);
  const int b = path_count(s, options.mode);
  Route route;
  if (!plan_route(s, topology, b, route)) {
    std::ostringstream msg;
    msg << "topology does not provide " << b << " connected EDC relay chains";
    throw Error(ErrorCode::infeasible, msg.str());
  }
  const double p1 = relay_selection_prob(s);
  const double margin_first = mmwave_link_margin(s, s.p_e);
  const double margin = mmwave_link_margin(s);
  const std::uint64_t topo_hash = topology.hash();

  std::vector<TrialRecord> records(options.trace ? options.trials : 0);
  BackhaulSimResult result;
  result.delay = run_trials(options.trials, options.seed, options.jobs,
                            [&](Philox4x32& rng, std::uint64_t t) {
                              TrialRecord rec =
                                  run_backhaul_trial(s, route, p1, margin_first, margin, rng);
                              const double delay = rec.delay;
                              if (options.trace) records[t] = std::move(rec);
                              return delay;
                            });
  if (options.trace) {
    for (std::uint64_t t = 0; t < options.trials; ++t)
      write_trace(*options.trace, t, options.seed, topo_hash, &route, &records[t]);
  }
  return result;
}

BackhaulSimResult simulate_backhaul_sampled(const NetworkScenario& s,
                                            const BackhaulSimOptions& options) {
  require_trials(options.trials);
  const int b = path_count(s, options.mode);
  const double p1 = relay_selection_prob(s);
  const double margin_first = mmwave_link_margin(s, s.p_e);
  const double margin = mmwave_link_margin(s);
  const double region = std::max(typical_region_radius(s.lambda_e),
                                 2.0 * mean_kth_edc_distance(s.lambda_e, std::max(b, 1)));

  struct Outcome {
    bool kept = false;
    std::uint64_t hash = 0;
    Route route;
    TrialRecord rec;
  };
  std::vector<Outcome> outcomes(options.trials);
  const std::uint64_t chunks = (options.trials + kChunk - 1) / kChunk;
  detail::parallel_for(chunks, options.jobs, [&](std::size_t c) {
    const std::uint64_t end = std::min(options.trials, (c + 1) * kChunk);
    for (std::uint64_t t = c * kChunk; t < end; ++t) {
      // Topology draws use substreams above the trial range of the slot draws.
      const std::uint64_t topo_seed = options.seed ^ (0x9E3779B97F4A7C15ull * (t + 1));
      const SampledTopology topo = sample_topology(s, region, topo_seed);
      Outcome& o = outcomes[t];
      o.hash = topo.hash();
      if (!plan_route(s, topo, b, o.route)) continue;
      Philox4x32 rng(options.seed, t);
      o.rec = run_backhaul_trial(s, o.route, p1, margin_first, margin, rng);
      o.kept = true;
    }
  });

  BackhaulSimResult result;
  Moments m;
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    const Outcome& o = outcomes[t];
    if (o.kept) {
      m.add(o.rec.delay);
    } else {
      ++result.discarded;
    }
    if (options.trace)
      write_trace(*options.trace, t, options.seed, o.hash, o.kept ? &o.route : nullptr,
                  o.kept ? &o.rec : nullptr);
  }
  if (m.n == 0) {
    std::ostringstream msg;
    msg << "all " << options.trials << " sampled topologies lacked " << b
        << " connected EDC relay chains";
    throw Error(ErrorCode::infeasible, msg.str());
  }
  result.delay = to_estimate(m, options.seed);
  return result;
}

}  // namespace mcrsim
