#include "sgrlab/ergodic.hpp"

#include <set>
#include <vector>

#include "sgrlab/spectral.hpp"

namespace sgrlab {
namespace {

using Key = std::vector<bool>;

Key key_of(const Pattern& p) {
  Key k(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      k[static_cast<std::size_t>(i * p.cols() + j)] = p(i, j);
    }
  }
  return k;
}

Pattern pattern_of(const Key& k, Eigen::Index n) {
  Pattern p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = k[static_cast<std::size_t>(i * n + j)];
  }
  return p;
}

bool all_positive(const std::set<Key>& patterns) {
  for (const auto& k : patterns) {
    for (bool b : k) {
      if (!b) return false;
    }
  }
  return true;
}

}  // namespace

ErgodicityResult check_ergodic_set(const EnvironmentSet& envs, int g_max) {
  const auto n = envs.dim();
  std::vector<Pattern> generators;
  std::set<Key> seen_generators;
  for (const auto& a : envs) {
    if (seen_generators.insert(key_of(a.pattern())).second) generators.push_back(a.pattern());
  }

  std::set<Key> current = seen_generators;
  std::set<std::set<Key>> history;
  for (int g = 1; g <= g_max; ++g) {
    if (all_positive(current)) return {ErgodicStatus::ergodic, g};
    if (!history.insert(current).second) return {ErgodicStatus::not_ergodic, std::nullopt};
    std::set<Key> next;
    for (const auto& k : current) {
      const Pattern left = pattern_of(k, n);
      for (const auto& gen : generators) next.insert(key_of(boolean_product(left, gen)));
    }
    current = std::move(next);
  }
  return {ErgodicStatus::inconclusive, std::nullopt};
}

const char* to_string(ErgodicStatus status) {
  switch (status) {
    case ErgodicStatus::ergodic: return "ergodic";
    case ErgodicStatus::not_ergodic: return "not_ergodic";
    case ErgodicStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace sgrlab
