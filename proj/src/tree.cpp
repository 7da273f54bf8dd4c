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

#include "kih/tree.hpp"

#include <bit>
#include <charconv>

#include "kih/errors.hpp"

namespace kih {

namespace {

constexpr std::size_t kMaxLeaves = 1u << 16;

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t k = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc() || ptr != last || k == 0) {
    throw FormatError(std::string("tree descriptor: bad leaf count in ") +
                      std::string(what));
  }
  if (k > kMaxLeaves) {
    throw FormatError("tree descriptor: leaf count exceeds 2^16");
  }
  return k;
}

}  // namespace

FullBinaryTree FullBinaryTree::parse(std::string_view descriptor) {
  FullBinaryTree tree;
  auto& nodes = tree.nodes_;

  auto new_node = [&nodes]() -> NodeId {
    nodes.emplace_back();
    return static_cast<NodeId>(nodes.size() - 1);
  };

  constexpr std::string_view kBalanced = "balanced:";
  constexpr std::string_view kLeftSpine = "leftspine:";
  constexpr std::string_view kRightSpine = "rightspine:";

  if (descriptor.starts_with(kBalanced)) {
    const std::size_t k =
        parse_count(descriptor.substr(kBalanced.size()), kBalanced);
    if (!std::has_single_bit(k)) {
      throw FormatError("tree descriptor: balanced needs a power-of-two k");
    }
    // Recursion depth is log2(k) <= 16.
    auto build = [&](auto&& self, std::size_t leaves) -> NodeId {
      const NodeId id = new_node();
      if (leaves > 1) {
        const NodeId l = self(self, leaves / 2);
        const NodeId r = self(self, leaves / 2);
        nodes[id].left = l;
        nodes[id].right = r;
      }
      return id;
    };
    build(build, k);
  } else if (descriptor.starts_with(kLeftSpine)) {
    const std::size_t k =
        parse_count(descriptor.substr(kLeftSpine.size()), kLeftSpine);
    if (k == 1) {
      new_node();
    } else {
      // Preorder: internal chain 0..k-2, then all k leaves. Spine node
      // j descends left; its right child is leaf 2k-2-j.
      for (std::size_t j = 0; j + 1 < k; ++j) new_node();
      for (std::size_t j = 0; j < k; ++j) new_node();
      for (std::size_t j = 0; j + 2 < k; ++j) {
        nodes[j].left = static_cast<NodeId>(j + 1);
        nodes[j].right = static_cast<NodeId>(2 * k - 2 - j);
      }
      nodes[k - 2].left = static_cast<NodeId>(k - 1);
      nodes[k - 2].right = static_cast<NodeId>(k);
    }
  } else if (descriptor.starts_with(kRightSpine)) {
    const std::size_t k =
        parse_count(descriptor.substr(kRightSpine.size()), kRightSpine);
    if (k == 1) {
      new_node();
    } else {
      // Preorder interleaves: spine node at 2j, its left leaf at 2j+1.
      for (std::size_t j = 0; j < 2 * k - 1; ++j) new_node();
      for (std::size_t j = 0; j + 2 < k; ++j) {
        nodes[2 * j].left = static_cast<NodeId>(2 * j + 1);
        nodes[2 * j].right = static_cast<NodeId>(2 * j + 2);
      }
      nodes[2 * (k - 2)].left = static_cast<NodeId>(2 * k - 3);
      nodes[2 * (k - 2)].right = static_cast<NodeId>(2 * k - 2);
    }
  } else {
    // Literal "(" node "," node ")" with "." leaves; recursive descent
    // with a nesting guard.
    std::size_t pos = 0;
    std::size_t depth = 0;
    auto parse_node = [&](auto&& self) -> NodeId {
      if (pos >= descriptor.size()) {
        throw FormatError("tree descriptor: unexpected end");
      }
      const char c = descriptor[pos];
      if (c == '.') {
        ++pos;
        return new_node();
      }
      if (c != '(') {
        throw FormatError("tree descriptor: expected '.' or '('");
      }
      if (++depth > 4096) {
        throw FormatError("tree descriptor: nesting too deep");
      }
      ++pos;
      const NodeId id = new_node();
      const NodeId l = self(self);
      if (pos >= descriptor.size() || descriptor[pos] != ',') {
        throw FormatError("tree descriptor: expected ','");
      }
      ++pos;
      const NodeId r = self(self);
      if (pos >= descriptor.size() || descriptor[pos] != ')') {
        throw FormatError("tree descriptor: expected ')'");
      }
      ++pos;
      --depth;
      nodes[id].left = l;
      nodes[id].right = r;
      return id;
    };
    parse_node(parse_node);
    if (pos != descriptor.size()) {
      throw FormatError("tree descriptor: trailing characters");
    }
    if (nodes.size() > 2 * kMaxLeaves) {
      throw FormatError("tree descriptor: leaf count exceeds 2^16");
    }
  }

  // Leaf intervals: leaves take consecutive positions in preorder;
  // children follow their parent, so a reverse sweep sees children
  // first.
  std::size_t next_leaf = 0;
  for (auto& node : nodes) {
    if (node.left == kNone) {
      node.leaf_begin = next_leaf;
      node.leaf_end = ++next_leaf;
    }
  }
  for (std::size_t i = nodes.size(); i-- > 0;) {
    auto& node = nodes[i];
    if (node.left != kNone) {
      node.leaf_begin = nodes[node.left].leaf_begin;
      node.leaf_end = nodes[node.right].leaf_end;
    }
  }
  return tree;
}

std::size_t FullBinaryTree::leaf_depth(std::size_t leaf_index) const {
  if (leaf_index >= leaf_count()) {
    throw PreconditionError("leaf_depth: index out of range");
  }
  std::size_t depth = 0;
  NodeId id = root();
  while (!is_leaf(id)) {
    ++depth;
    id = leaf_index < nodes_[nodes_[id].left].leaf_end ? nodes_[id].left
                                                       : nodes_[id].right;
  }
  return depth;
}

std::string FullBinaryTree::literal() const {
  std::vector<std::string> text(nodes_.size());
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    const auto& node = nodes_[i];
    if (node.left == kNone) {
      text[i] = ".";
    } else {
      text[i] = "(" + text[node.left] + "," + text[node.right] + ")";
    }
  }
  return text[0];
}

unsigned expansion(const FullBinaryTree& t) {
  std::vector<unsigned> e(t.node_count(), 0);
  for (std::size_t i = t.node_count(); i-- > 0;) {
    const auto id = static_cast<FullBinaryTree::NodeId>(i);
    if (!t.is_leaf(id)) {
      e[i] = std::max(e[t.left(id)] + 1, e[t.right(id)]);
    }
  }
  return e[0];
}

unsigned sequentiality(const FullBinaryTree& t) {
  std::vector<unsigned> s(t.node_count(), 0);
  for (std::size_t i = t.node_count(); i-- > 0;) {
    const auto id = static_cast<FullBinaryTree::NodeId>(i);
    if (!t.is_leaf(id)) {
      s[i] = std::max(s[t.left(id)], s[t.right(id)] + 1);
    }
  }
  return s[0];
}

}  // namespace kih
