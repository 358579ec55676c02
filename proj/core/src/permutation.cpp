#include "dynstore/permutation.hpp"

#include <numeric>
#include <stdexcept>

namespace dynstore {

Permutation::Permutation(std::vector<NodeId> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  positions_.assign(static_cast<size_t>(n), 0);
  for (int pos = 1; pos <= n; ++pos) {
    const NodeId v = order_[static_cast<size_t>(pos - 1)];
    if (v < 1 || v > n) throw std::invalid_argument("permutation entry out of range");
    if (positions_[static_cast<size_t>(v - 1)] != 0) {
      throw std::invalid_argument("permutation entry repeated");
    }
    positions_[static_cast<size_t>(v - 1)] = pos;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<NodeId> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  return Permutation(std::move(order));
}

Permutation apply_failure(const Permutation& pi, NodeId failed) {
  const int n = pi.size();
  if (failed < 1 || failed > n) throw std::invalid_argument("unknown node id in failure");
  std::vector<NodeId> order;
  order.reserve(static_cast<size_t>(n));
  for (NodeId v : pi.order()) {
    if (v != failed) order.push_back(v);
  }
  order.push_back(failed);
  return Permutation(std::move(order));
}

} // namespace dynstore
