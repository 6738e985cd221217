#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <unordered_set>

#include "ppn/phylo.hpp"

namespace ppn {

int PhyloTree::add_node(std::string label, std::optional<double> length) {
  TreeNode node;
  node.label = std::move(label);
  node.length = length;
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size() - 1);
}

void PhyloTree::add_child(int parent, int child) {
  node(parent).children.push_back(child);
  node(child).parent = parent;
}

std::vector<std::string> PhyloTree::leaf_labels() const {
  std::vector<std::string> labels;
  for (const auto& n : nodes_) {
    if (n.is_leaf()) labels.push_back(n.label);
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::size_t PhyloTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::optional<int> PhyloTree::find_leaf(std::string_view label) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_leaf() && nodes_[i].label == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

double PhyloTree::root_distance(int id) const {
  double total = 0.0;
  for (int cur = id; cur != root_ && cur >= 0; cur = node(cur).parent) {
    total += node(cur).length.value_or(0.0);
  }
  return total;
}

double path_length(const PhyloTree& tree, std::string_view a, std::string_view b) {
  const auto na = tree.find_leaf(a);
  const auto nb = tree.find_leaf(b);
  if (!na || !nb) throw Error(ErrorCode::OutOfRange, "unknown leaf label");
  std::unordered_set<int> ancestors;
  for (int cur = *na; cur >= 0; cur = tree.node(cur).parent) ancestors.insert(cur);
  int lca = *nb;
  while (!ancestors.count(lca)) lca = tree.node(lca).parent;
  return tree.root_distance(*na) + tree.root_distance(*nb) - 2.0 * tree.root_distance(lca);
}

namespace {

constexpr std::string_view kReserved = "():;,[]'";

bool valid_label_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && kReserved.find(c) == std::string_view::npos;
}

void check_label(const std::string& label) {
  if (!std::all_of(label.begin(), label.end(), valid_label_char)) {
    throw Error(ErrorCode::InvalidLabel, "label '" + label + "' cannot be written as Newick");
  }
}

std::string format_length(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_node(const PhyloTree& tree, int id, std::string& out) {
  const TreeNode& n = tree.node(id);
  if (!n.is_leaf()) {
    out.push_back('(');
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out.push_back(',');
      write_node(tree, n.children[i], out);
    }
    out.push_back(')');
  } else if (n.label.empty()) {
    throw Error(ErrorCode::InvalidLabel, "leaf without a label");
  }
  check_label(n.label);
  out += n.label;
  if (n.length) {
    out.push_back(':');
    out += format_length(*n.length);
  }
}

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  PhyloTree parse() {
    const int root = parse_subtree();
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ';') fail("expected ';'");
    ++pos_;
    skip_space();
    if (pos_ != text_.size()) fail("unexpected text after ';'");
    tree_.set_root(root);
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '[') {
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  int parse_subtree() {
    skip_space();
    const int id = tree_.add_node();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      while (true) {
        const int child = parse_subtree();
        tree_.add_child(id, child);
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
        } else if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          break;
        } else {
          fail("expected ',' or ')'");
        }
      }
    }
    skip_space();
    const std::size_t label_start = pos_;
    while (pos_ < text_.size() && valid_label_char(text_[pos_])) ++pos_;
    std::string label(text_.substr(label_start, pos_ - label_start));
    if (tree_.node(id).is_leaf()) {
      if (label.empty()) fail("expected leaf label");
      if (!leaves_.insert(label).second) {
        throw Error(ErrorCode::DuplicateLeaf, "duplicate leaf label '" + label + "'");
      }
    }
    tree_.node(id).label = std::move(label);
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      skip_space();
      double value = 0.0;
      const char* first = text_.data() + pos_;
      const char* last = text_.data() + text_.size();
      if (first != last && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc()) fail("expected branch length");
      pos_ = static_cast<std::size_t>(ptr - text_.data());
      tree_.node(id).length = value;
    }
    return id;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PhyloTree tree_;
  std::unordered_set<std::string> leaves_;
};

struct Edge {
  int to;
  std::optional<double> length;
};

std::optional<double> add_lengths(std::optional<double> a, std::optional<double> b) {
  if (!a && !b) return std::nullopt;
  return a.value_or(0.0) + b.value_or(0.0);
}

}  // namespace

std::string to_newick(const PhyloTree& tree) {
  if (tree.root() < 0) throw Error(ErrorCode::InvalidLabel, "tree has no root");
  std::string out;
  write_node(tree, tree.root(), out);
  out.push_back(';');
  return out;
}

PhyloTree from_newick(std::string_view text) { return NewickParser(text).parse(); }

PhyloTree reroot(const PhyloTree& tree, std::string_view leaf) {
  const auto target = tree.find_leaf(leaf);
  if (!target) throw Error(ErrorCode::OutOfRange, "unknown leaf '" + std::string(leaf) + "'");

  // Undirected form with a two-child root suppressed.
  std::vector<std::vector<Edge>> adj(tree.node_count());
  const int old_root = tree.root();
  const auto& root_children = tree.node(old_root).children;
  const bool suppress = root_children.size() == 2;
  for (int id = 0; id < static_cast<int>(tree.node_count()); ++id) {
    const TreeNode& n = tree.node(id);
    if (id == old_root || n.parent < 0) continue;
    if (suppress && n.parent == old_root) continue;
    adj[id].push_back({n.parent, n.length});
    adj[n.parent].push_back({id, n.length});
  }
  if (suppress) {
    const int a = root_children[0];
    const int b = root_children[1];
    const auto len = add_lengths(tree.node(a).length, tree.node(b).length);
    adj[a].push_back({b, len});
    adj[b].push_back({a, len});
  }

  PhyloTree out;
  std::function<int(int, int, std::optional<double>)> copy = [&](int id, int from,
                                                                 std::optional<double> len) {
    const int node = out.add_node(tree.node(id).label, len);
    for (const Edge& e : adj[id]) {
      if (e.to == from) continue;
      out.add_child(node, copy(e.to, id, e.length));
    }
    return node;
  };

  const Edge up = adj[*target].front();
  const auto half = up.length ? std::optional<double>(*up.length / 2.0) : std::nullopt;
  const int root = out.add_node();
  out.add_child(root, copy(*target, up.to, half));
  out.add_child(root, copy(up.to, *target, half));
  out.set_root(root);
  return out;
}

}  // namespace ppn
