// Copyright 2026 The kih Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KIH_TREE_HPP_
#define KIH_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kih {

// Full binary tree describing how an input string is split by the
// recursive evaluator. Every node has zero or two children; each leaf
// consumes one input position.
//
// Descriptors:
//   "."             a single leaf
//   "(<L>,<R>)"     internal node with subtrees L and R
//   "balanced:k"    complete tree over k leaves, k a power of two
//   "leftspine:k"   k leaves, every right child a leaf
//   "rightspine:k"  k leaves, every left child a leaf
class FullBinaryTree {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kNone = static_cast<NodeId>(-1);

  // Throws FormatError on malformed descriptors.
  static FullBinaryTree parse(std::string_view descriptor);

  NodeId root() const { return 0; }
  bool is_leaf(NodeId id) const { return nodes_[id].left == kNone; }
  NodeId left(NodeId id) const { return nodes_[id].left; }
  NodeId right(NodeId id) const { return nodes_[id].right; }
  // Leaf interval [begin, end) covered by the node, in input order.
  std::size_t leaf_begin(NodeId id) const { return nodes_[id].leaf_begin; }
  std::size_t leaf_end(NodeId id) const { return nodes_[id].leaf_end; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const { return nodes_[0].leaf_end; }
  std::size_t internal_count() const { return node_count() - leaf_count(); }

  // Number of internal nodes on the path from the root to the given
  // leaf position; equals the number of node values an incremental
  // re-evaluation rebuilds after flipping that position.
  std::size_t leaf_depth(std::size_t leaf_index) const;

  // Canonical parenthesized form, e.g. "((.,.),.)".
  std::string literal() const;

  bool operator==(const FullBinaryTree&) const = default;

 private:
  struct Node {
    NodeId left = kNone;
    NodeId right = kNone;
    std::size_t leaf_begin = 0;
    std::size_t leaf_end = 0;

    bool operator==(const Node&) const = default;
  };

  // Nodes in preorder; 0 is the root.
  std::vector<Node> nodes_;
};

// Expansion depth e(T): 0 at leaves, max(e(L) + 1, e(R)) at internal
// nodes. Controls how many summands ever pile up before a reduction:
// an evaluation adds at most e(T) + 1 terms into one node value.
unsigned expansion(const FullBinaryTree& t);

// Sequentiality s(T): 0 at leaves, max(s(L), s(R) + 1) at internal
// nodes. The length of the longest chain of dependent products.
unsigned sequentiality(const FullBinaryTree& t);

}  // namespace kih

#endif  // KIH_TREE_HPP_
