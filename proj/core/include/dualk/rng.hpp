#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "dualk/types.hpp"

namespace dualk {

// Seeded generator with named child streams. Children depend only on the
// parent seed and the name, never on how much the parent has been consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng split(std::string_view name) const;
  std::uint64_t seed() const { return seed_; }

  double uniform(double lo, double hi);
  double normal(double mean, double stddev);
  // k distinct indices from [0, n) in random order.
  std::vector<Index> sample_without_replacement(Index n, Index k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dualk
