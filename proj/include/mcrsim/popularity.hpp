#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mcrsim {

// Zipf popularity over a library of k_total contents. Content ids are
// 1-based; id k has probability q[k-1], so lower ids are more popular.
struct PopularityModel {
  double beta = 0.0;
  int k_total = 0;
  std::vector<double> q;
};

PopularityModel zipf(double beta, int k_total);

// Probability that a request hits the top-psi cache.
double hit_probability(const PopularityModel& model, int psi);

enum class CachePolicy { fifo, lru, popularity_priority };

struct CacheState {
  int capacity = 0;
  CachePolicy policy = CachePolicy::popularity_priority;
  // FIFO: insertion order, head first. LRU: recency order, least recent first.
  // PopularityPriority: ascending id (most popular first).
  std::vector<int> stored;
};

struct CacheStep {
  CacheState state;
  bool hit = false;
};

// Applies one request. k_total bounds the valid ids.
CacheStep cache_step(CacheState state, int request, int k_total);

}  // namespace mcrsim
