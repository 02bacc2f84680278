#pragma once

#include <vector>

#include "csg2l/graphio/graph.hpp"
#include "csg2l/numkit/rng.hpp"

namespace csg {

/// One train/validation/test partition of the nodes, each list ascending.
struct Split {
  std::vector<Index> train;
  std::vector<Index> val;
  std::vector<Index> test;

  bool operator==(const Split&) const = default;
};

struct SplitSet {
  std::vector<Split> splits;

  std::size_t size() const { return splits.size(); }
  const Split& operator[](std::size_t i) const { return splits[i]; }
  bool operator==(const SplitSet&) const = default;
};

struct SplitPolicy {
  int count = 10;
  int train_percent = 60;
  int val_percent = 20;
  /// Classes smaller than this are rejected with a DatasetError. Lower it
  /// to admit tiny classes; their nodes then fall mostly into test.
  Index min_class_size = 5;
};

/// Per class: shuffle with a stream derived from `rng` and the split index,
/// take floor(n*train%) for training, floor(n*val%) for validation and the
/// remainder for testing.
SplitSet generate_splits(const Graph& g, const Rng& rng, const SplitPolicy& policy = {});

}  // namespace csg
