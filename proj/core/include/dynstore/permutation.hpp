#pragma once

#include "dynstore/config.hpp"

#include <vector>

namespace dynstore {

// Order of the n most recent node failures; position n holds the node that
// failed last. Immutable after construction.
class Permutation {
 public:
  explicit Permutation(std::vector<NodeId> order);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(order_.size()); }

  // Node at 1-based position.
  NodeId at(int position) const { return order_.at(static_cast<size_t>(position - 1)); }
  // 1-based position of a node.
  int position(NodeId node) const { return positions_.at(static_cast<size_t>(node - 1)); }

  const std::vector<NodeId>& order() const { return order_; }

  bool operator==(const Permutation& other) const { return order_ == other.order_; }

 private:
  std::vector<NodeId> order_;
  std::vector<int> positions_;
};

// Moves the failed node to the last position, preserving the relative order
// of everything else. Throws std::invalid_argument for an unknown node.
Permutation apply_failure(const Permutation& pi, NodeId failed);

} // namespace dynstore
