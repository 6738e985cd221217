#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppn/core.hpp"

namespace ppn {

// Square, symmetric distance matrix with an exactly-zero diagonal.
class DistanceMatrix {
 public:
  /// Zero-filled matrix; throws MalformedMatrix for fewer than two labels and
  /// DuplicateId for repeated labels.
  explicit DistanceMatrix(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  /// Writes both (i, j) and (j, i). Diagonal writes are rejected unless zero.
  void set(std::size_t i, std::size_t j, double value);

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

/// One PPN vector per sequence, then every unordered pair once. Vector and
/// pair stages run on `threads` workers (0 = all cores); the result does not
/// depend on the thread count. Errors from a record name its id.
DistanceMatrix pairwise_matrix(const std::vector<EncodedSequence>& seqs,
                               const PpnParams& params, std::size_t threads = 0,
                               bool normalize = false);

DistanceMatrix pairwise_matrix(const std::vector<PpnVector>& vectors,
                               const std::vector<std::string>& labels, Metric metric,
                               std::size_t threads = 0, bool normalize = false);

/// Relaxed PHYLIP: taxon count line, then one line per taxon holding the
/// label followed by the full row. Values are written in shortest
/// round-trip form so read_phylip recovers them bit-exactly.
void write_phylip(std::ostream& out, const DistanceMatrix& matrix);
/// Accepts the layout above with any whitespace between values; also accepts
/// lower-triangular rows. Throws MalformedMatrix.
DistanceMatrix read_phylip(std::istream& in);

struct TreeNode {
  std::string label;
  std::optional<double> length;  // branch to parent
  double height = 0.0;           // set by upgma(): distance from node to its leaves
  int parent = -1;
  std::vector<int> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

// Rooted tree stored as a node array; node 0 is not special, see root().
class PhyloTree {
 public:
  PhyloTree() = default;

  int add_node(std::string label = {}, std::optional<double> length = std::nullopt);
  void add_child(int parent, int child);
  void set_root(int node) { root_ = node; }

  int root() const noexcept { return root_; }
  const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  TreeNode& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Leaf labels in sorted order.
  std::vector<std::string> leaf_labels() const;
  std::size_t leaf_count() const;
  std::optional<int> find_leaf(std::string_view label) const;

  /// Sum of branch lengths (missing lengths count as 0) from root to the leaf.
  double root_distance(int node) const;

 private:
  std::vector<TreeNode> nodes_;
  int root_ = -1;
};

/// Agglomerative average linkage weighted by cluster size. Clusters merge at
/// height d/2. Among equal minimum distances the pair whose
/// (smallest label of first cluster, smallest label of second cluster) is
/// lexicographically smallest merges first; that cluster becomes the left
/// child. Throws NonFiniteDistance.
PhyloTree upgma(const DistanceMatrix& matrix);

/// Sum of branch lengths along the path between two leaves.
double path_length(const PhyloTree& tree, std::string_view a, std::string_view b);

/// Throws InvalidLabel for labels containing whitespace or any of "():;,".
std::string to_newick(const PhyloTree& tree);
/// Throws ParseError (with offset) or DuplicateLeaf.
PhyloTree from_newick(std::string_view text);

/// Same unrooted tree, rooted on the branch above `leaf`. The old root is
/// suppressed if it had two children. Throws OutOfRange for unknown labels.
PhyloTree reroot(const PhyloTree& tree, std::string_view leaf);

/// Bit i is set when leaf_labels()[i] is on the side without leaf 0.
using Split = std::vector<bool>;

/// Nontrivial splits of the unrooted form of `tree`, indexed by `labels`.
std::vector<Split> split_set(const PhyloTree& tree, const std::vector<std::string>& labels);

/// Robinson-Foulds symmetric difference over nontrivial splits divided by the
/// combined split count of both trees (0 when neither has any).
/// Throws LeafSetMismatch or TooFewLeaves (< 4).
double nrf(const PhyloTree& a, const PhyloTree& b);

enum class Quartet { AB_CD, AC_BD, AD_BC, Unresolved };

/// Topology the tree induces on four leaves, using topological path lengths.
Quartet quartet_topology(const std::vector<std::vector<int>>& hops, int a, int b, int c,
                         int d);

/// Edge counts between every pair of leaves, indexed like `labels`.
std::vector<std::vector<int>> leaf_hops(const PhyloTree& tree,
                                        const std::vector<std::string>& labels);

/// Fraction of the C(k,4) leaf quartets whose topology differs between the
/// trees; unresolved matches only unresolved. Throws LeafSetMismatch or
/// TooFewLeaves (< 4).
double nqd(const PhyloTree& a, const PhyloTree& b);

}  // namespace ppn
