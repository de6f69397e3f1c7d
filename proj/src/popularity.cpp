#include "mcrsim/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcrsim/error.hpp"

namespace mcrsim {

PopularityModel zipf(double beta, int k_total) {
  if (k_total < 1) throw Error(ErrorCode::argument, "zipf needs k_total >= 1");
  if (!(beta >= 0.0)) throw Error(ErrorCode::argument, "zipf needs beta >= 0");
  PopularityModel model;
  model.beta = beta;
  model.k_total = k_total;
  model.q.resize(static_cast<std::size_t>(k_total));
  // Normalise with the smallest terms first.
  double norm = 0.0;
  for (int k = k_total; k >= 1; --k) norm += std::pow(static_cast<double>(k), -beta);
  for (int k = 1; k <= k_total; ++k)
    model.q[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), -beta) / norm;
  return model;
}

double hit_probability(const PopularityModel& model, int psi) {
  if (psi < 0 || psi > model.k_total)
    throw Error(ErrorCode::argument, "psi " + std::to_string(psi) + " outside [0, " +
                                         std::to_string(model.k_total) + "]");
  if (psi == model.k_total) return 1.0;
  double sum = 0.0;
  for (int k = psi; k >= 1; --k) sum += model.q[static_cast<std::size_t>(k - 1)];
  return std::min(sum, 1.0);
}

CacheStep cache_step(CacheState state, int request, int k_total) {
  if (request < 1 || request > k_total)
    throw Error(ErrorCode::argument, "content id " + std::to_string(request) +
                                         " outside [1, " + std::to_string(k_total) + "]");
  auto& stored = state.stored;
  const auto found = std::find(stored.begin(), stored.end(), request);
  const bool hit = found != stored.end();

  switch (state.policy) {
    case CachePolicy::fifo:
      if (!hit && state.capacity > 0) {
        if (static_cast<int>(stored.size()) >= state.capacity) stored.erase(stored.begin());
        stored.push_back(request);
      }
      break;
    case CachePolicy::lru:
      if (hit) {
        stored.erase(found);
        stored.push_back(request);
      } else if (state.capacity > 0) {
        if (static_cast<int>(stored.size()) >= state.capacity) stored.erase(stored.begin());
        stored.push_back(request);
      }
      break;
    case CachePolicy::popularity_priority:
      // Lower id is more popular (q is non-increasing; ties broken by id).
      if (!hit && state.capacity > 0) {
        if (static_cast<int>(stored.size()) < state.capacity) {
          stored.insert(std::upper_bound(stored.begin(), stored.end(), request), request);
        } else if (request < stored.back()) {
          stored.pop_back();
          stored.insert(std::upper_bound(stored.begin(), stored.end(), request), request);
        }
      }
      break;
  }
  return {std::move(state), hit};
}

}  // namespace mcrsim
