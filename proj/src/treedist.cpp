#include <algorithm>
#include <queue>
#include <unordered_map>

#include "ppn/phylo.hpp"

namespace ppn {

namespace {

std::vector<std::string> common_leaves(const PhyloTree& a, const PhyloTree& b) {
  auto labels = a.leaf_labels();
  if (labels != b.leaf_labels()) {
    throw Error(ErrorCode::LeafSetMismatch, "trees have different leaf sets");
  }
  if (labels.size() < 4) {
    throw Error(ErrorCode::TooFewLeaves,
                "tree comparison needs at least 4 leaves, got " + std::to_string(labels.size()));
  }
  return labels;
}

std::unordered_map<std::string, std::size_t> index_of(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  return index;
}

}  // namespace

std::vector<Split> split_set(const PhyloTree& tree, const std::vector<std::string>& labels) {
  const std::size_t k = labels.size();
  const auto index = index_of(labels);
  std::vector<Split> below(tree.node_count(), Split(k, false));

  // Children always precede their parent in this post-order list.
  std::vector<int> order;
  std::vector<int> stack{tree.root()};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    order.push_back(id);
    for (int child : tree.node(id).children) stack.push_back(child);
  }
  std::reverse(order.begin(), order.end());

  std::vector<Split> splits;
  for (int id : order) {
    const TreeNode& n = tree.node(id);
    Split& bits = below[static_cast<std::size_t>(id)];
    if (n.is_leaf()) {
      const auto it = index.find(n.label);
      if (it == index.end()) {
        throw Error(ErrorCode::LeafSetMismatch, "leaf '" + n.label + "' not in label set");
      }
      bits[it->second] = true;
    } else {
      for (int child : n.children) {
        const Split& cb = below[static_cast<std::size_t>(child)];
        for (std::size_t i = 0; i < k; ++i) bits[i] = bits[i] || cb[i];
      }
    }
    if (id == tree.root()) continue;
    Split split = bits;
    if (split[0]) split.flip();
    const auto size = static_cast<std::size_t>(std::count(split.begin(), split.end(), true));
    if (size >= 2 && size + 2 <= k) splits.push_back(std::move(split));
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  return splits;
}

double nrf(const PhyloTree& a, const PhyloTree& b) {
  const auto labels = common_leaves(a, b);
  const auto sa = split_set(a, labels);
  const auto sb = split_set(b, labels);
  if (sa.empty() && sb.empty()) return 0.0;
  std::vector<Split> shared;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(shared));
  const std::size_t rf = sa.size() + sb.size() - 2 * shared.size();
  return static_cast<double>(rf) / static_cast<double>(sa.size() + sb.size());
}

std::vector<std::vector<int>> leaf_hops(const PhyloTree& tree,
                                        const std::vector<std::string>& labels) {
  const std::size_t nodes = tree.node_count();
  std::vector<std::vector<int>> adj(nodes);
  for (int id = 0; id < static_cast<int>(nodes); ++id) {
    const int parent = tree.node(id).parent;
    if (parent >= 0) {
      adj[static_cast<std::size_t>(id)].push_back(parent);
      adj[static_cast<std::size_t>(parent)].push_back(id);
    }
  }
  std::vector<int> leaf_node(labels.size(), -1);
  const auto index = index_of(labels);
  for (int id = 0; id < static_cast<int>(nodes); ++id) {
    if (!tree.node(id).is_leaf()) continue;
    const auto it = index.find(tree.node(id).label);
    if (it == index.end()) {
      throw Error(ErrorCode::LeafSetMismatch,
                  "leaf '" + tree.node(id).label + "' not in label set");
    }
    leaf_node[it->second] = id;
  }

  std::vector<std::vector<int>> hops(labels.size(), std::vector<int>(labels.size(), 0));
  std::vector<int> depth(nodes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::fill(depth.begin(), depth.end(), -1);
    std::queue<int> frontier;
    frontier.push(leaf_node[i]);
    depth[static_cast<std::size_t>(leaf_node[i])] = 0;
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop();
      for (int next : adj[static_cast<std::size_t>(cur)]) {
        if (depth[static_cast<std::size_t>(next)] < 0) {
          depth[static_cast<std::size_t>(next)] = depth[static_cast<std::size_t>(cur)] + 1;
          frontier.push(next);
        }
      }
    }
    for (std::size_t j = 0; j < labels.size(); ++j) {
      hops[i][j] = depth[static_cast<std::size_t>(leaf_node[j])];
    }
  }
  return hops;
}

Quartet quartet_topology(const std::vector<std::vector<int>>& hops, int a, int b, int c,
                         int d) {
  const auto h = [&](int x, int y) {
    return hops[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  };
  const int ab_cd = h(a, b) + h(c, d);
  const int ac_bd = h(a, c) + h(b, d);
  const int ad_bc = h(a, d) + h(b, c);
  if (ab_cd < ac_bd && ab_cd < ad_bc) return Quartet::AB_CD;
  if (ac_bd < ab_cd && ac_bd < ad_bc) return Quartet::AC_BD;
  if (ad_bc < ab_cd && ad_bc < ac_bd) return Quartet::AD_BC;
  return Quartet::Unresolved;
}

double nqd(const PhyloTree& a, const PhyloTree& b) {
  const auto labels = common_leaves(a, b);
  const auto ha = leaf_hops(a, labels);
  const auto hb = leaf_hops(b, labels);
  const int k = static_cast<int>(labels.size());
  std::uint64_t total = 0;
  std::uint64_t differ = 0;
  for (int w = 0; w < k; ++w) {
    for (int x = w + 1; x < k; ++x) {
      for (int y = x + 1; y < k; ++y) {
        for (int z = y + 1; z < k; ++z) {
          ++total;
          if (quartet_topology(ha, w, x, y, z) != quartet_topology(hb, w, x, y, z)) ++differ;
        }
      }
    }
  }
  return static_cast<double>(differ) / static_cast<double>(total);
}

}  // namespace ppn
