#include <algorithm>
#include <cmath>
#include <numeric>

#include "ppn/phylo.hpp"

namespace ppn {

PhyloTree upgma(const DistanceMatrix& matrix) {
  const std::size_t k = matrix.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!std::isfinite(matrix(i, j))) {
        throw Error(ErrorCode::NonFiniteDistance, "non-finite distance between " +
                                                      matrix.labels()[i] + " and " +
                                                      matrix.labels()[j]);
      }
    }
  }

  // rank[i]: position of label i in sorted order; tie-breaks compare ranks.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matrix.labels()[a] < matrix.labels()[b];
  });
  std::vector<std::size_t> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;

  struct Cluster {
    int node;
    std::size_t size;
    std::size_t min_rank;
    double height;
  };

  PhyloTree tree;
  std::vector<Cluster> clusters;
  std::vector<double> dist(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    clusters.push_back({tree.add_node(matrix.labels()[i]), 1, rank[i], 0.0});
    for (std::size_t j = 0; j < k; ++j) dist[i * k + j] = matrix(i, j);
  }
  std::vector<std::size_t> active(k);
  std::iota(active.begin(), active.end(), 0);

  auto key = [&](std::size_t a, std::size_t b) {
    const auto ra = clusters[a].min_rank;
    const auto rb = clusters[b].min_rank;
    return ra < rb ? std::pair(ra, rb) : std::pair(rb, ra);
  };

  while (active.size() > 1) {
    std::size_t best_a = active[0];
    std::size_t best_b = active[1];
    double best = dist[best_a * k + best_b];
    auto best_key = key(best_a, best_b);
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const std::size_t a = active[x];
        const std::size_t b = active[y];
        const double d = dist[a * k + b];
        if (d < best || (d == best && key(a, b) < best_key)) {
          best = d;
          best_a = a;
          best_b = b;
          best_key = key(a, b);
        }
      }
    }
    if (clusters[best_b].min_rank < clusters[best_a].min_rank) std::swap(best_a, best_b);

    Cluster& left = clusters[best_a];
    const Cluster right = clusters[best_b];
    const double height = best / 2.0;
    const int parent = tree.add_node();
    tree.node(left.node).length = std::max(0.0, height - left.height);
    tree.node(right.node).length = std::max(0.0, height - right.height);
    tree.add_child(parent, left.node);
    tree.add_child(parent, right.node);
    tree.node(parent).height = height;

    const double wl = static_cast<double>(left.size);
    const double wr = static_cast<double>(right.size);
    for (std::size_t other : active) {
      if (other == best_a || other == best_b) continue;
      const double d =
          (dist[best_a * k + other] * wl + dist[best_b * k + other] * wr) / (wl + wr);
      dist[best_a * k + other] = d;
      dist[other * k + best_a] = d;
    }
    left = {parent, left.size + right.size, left.min_rank, height};
    active.erase(std::find(active.begin(), active.end(), best_b));
  }
  tree.set_root(clusters[active[0]].node);
  return tree;
}

}  // namespace ppn
