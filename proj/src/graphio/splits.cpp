#include "csg2l/graphio/splits.hpp"

#include <algorithm>
#include <span>

#include "csg2l/errors.hpp"

namespace csg {

SplitSet generate_splits(const Graph& g, const Rng& rng, const SplitPolicy& policy) {
  if (policy.count < 1) throw ParameterError("generate_splits: count must be positive");
  if (policy.train_percent < 0 || policy.val_percent < 0 ||
      policy.train_percent + policy.val_percent > 100) {
    throw ParameterError("generate_splits: invalid percentages");
  }
  const auto by_class = nodes_by_class(g);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const auto n = static_cast<Index>(by_class[c].size());
    if (n < policy.min_class_size) {
      const std::string label = c < g.label_names.size() ? " ('" + g.label_names[c] + "')" : "";
      throw DatasetError(g.name + ": class " + std::to_string(c) + label + " has " +
                         std::to_string(n) + " nodes, fewer than the required " +
                         std::to_string(policy.min_class_size));
    }
  }

  SplitSet out;
  for (int s = 0; s < policy.count; ++s) {
    Rng split_rng = rng.derive(static_cast<std::uint64_t>(s));
    Split split;
    for (const auto& members : by_class) {
      std::vector<Index> order = members;
      split_rng.shuffle(std::span<Index>(order));
      const auto n = static_cast<Index>(order.size());
      const Index n_train = n * policy.train_percent / 100;
      const Index n_val = n * policy.val_percent / 100;
      split.train.insert(split.train.end(), order.begin(), order.begin() + n_train);
      split.val.insert(split.val.end(), order.begin() + n_train,
                       order.begin() + n_train + n_val);
      split.test.insert(split.test.end(), order.begin() + n_train + n_val, order.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    out.splits.push_back(std::move(split));
  }
  return out;
}

}  // namespace csg
