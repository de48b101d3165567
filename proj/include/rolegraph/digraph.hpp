// Copyright 2026 The rolegraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rolegraph/error.hpp"

namespace rolegraph {

/// Immutable index-based view of a directed graph whose vertices are named by
/// ordered keys. Vertex indices follow key order, and successor/predecessor
/// lists are sorted, so every traversal below is deterministic.
template <class Key>
class Digraph {
 public:
  using Index = std::size_t;
  using Bitset = boost::dynamic_bitset<>;

  Digraph() = default;

  /// `keys` must be a sorted range of distinct keys; arcs referencing unknown
  /// keys are rejected.
  template <class KeyRange, class ArcRange>
  Digraph(const KeyRange& keys, const ArcRange& arcs) {
    for (const auto& k : keys) {
      index_.emplace(k, keys_.size());
      keys_.push_back(k);
    }
    succ_.resize(keys_.size());
    pred_.resize(keys_.size());
    for (const auto& [from, to] : arcs) {
      auto f = find(from);
      auto t = find(to);
      if (!f || !t) {
        throw Error(ErrorKind::kUnknownId, "arc references an unknown vertex");
      }
      succ_[*f].push_back(*t);
      pred_[*t].push_back(*f);
    }
    for (auto& s : succ_) normalize(s);
    for (auto& p : pred_) normalize(p);
  }

  std::size_t size() const { return keys_.size(); }
  const Key& key(Index v) const { return keys_[v]; }
  const std::vector<Key>& keys() const { return keys_; }

  std::optional<Index> find(const Key& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Index> successors(Index v) const { return succ_[v]; }
  std::span<const Index> predecessors(Index v) const { return pred_[v]; }

  std::size_t arc_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
  }

  /// Kahn's algorithm; vertices become available in index order.
  /// Returns nullopt when the graph has a directed cycle.
  std::optional<std::vector<Index>> topological_order() const {
    std::vector<std::size_t> indegree(size());
    for (Index v = 0; v < size(); ++v) indegree[v] = pred_[v].size();
    std::vector<Index> ready;
    for (Index v = size(); v-- > 0;) {
      if (indegree[v] == 0) ready.push_back(v);
    }
    std::vector<Index> order;
    order.reserve(size());
    while (!ready.empty()) {
      Index v = ready.back();
      ready.pop_back();
      order.push_back(v);
      for (auto it = succ_[v].rbegin(); it != succ_[v].rend(); ++it) {
        if (--indegree[*it] == 0) ready.push_back(*it);
      }
    }
    if (order.size() != size()) return std::nullopt;
    return order;
  }

  /// Vertices that lie on, or downstream of, a directed cycle: whatever Kahn's
  /// algorithm cannot peel off. Empty iff acyclic.
  std::vector<Index> cyclic_vertices() const {
    std::vector<std::size_t> indegree(size());
    for (Index v = 0; v < size(); ++v) indegree[v] = pred_[v].size();
    std::vector<Index> ready;
    for (Index v = 0; v < size(); ++v) {
      if (indegree[v] == 0) ready.push_back(v);
    }
    std::vector<bool> removed(size(), false);
    while (!ready.empty()) {
      Index v = ready.back();
      ready.pop_back();
      removed[v] = true;
      for (Index w : succ_[v]) {
        if (--indegree[w] == 0) ready.push_back(w);
      }
    }
    std::vector<Index> out;
    for (Index v = 0; v < size(); ++v) {
      if (!removed[v]) out.push_back(v);
    }
    return out;
  }

  bool acyclic() const { return topological_order().has_value(); }

  /// Reflexive-transitive closure: row v has bit w set iff v reaches w by a
  /// path of length >= 0. Requires an acyclic graph.
  std::vector<Bitset> reachability() const {
    auto order = require_order();
    std::vector<Bitset> reach(size(), Bitset(size()));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Index v = *it;
      reach[v].set(v);
      for (Index w : succ_[v]) reach[v] |= reach[w];
    }
    return reach;
  }

  /// Arcs of the unique transitive reduction: (v, w) survives iff no other
  /// successor of v reaches w.
  std::vector<std::pair<Index, Index>> transitive_reduction() const {
    auto reach = reachability();
    std::vector<std::pair<Index, Index>> kept;
    for (Index v = 0; v < size(); ++v) {
      for (Index w : succ_[v]) {
        bool redundant = std::any_of(
            succ_[v].begin(), succ_[v].end(),
            [&](Index u) { return u != w && reach[u].test(w); });
        if (!redundant) kept.emplace_back(v, w);
      }
    }
    return kept;
  }

  std::vector<Index> sources() const {
    std::vector<Index> out;
    for (Index v = 0; v < size(); ++v) {
      if (pred_[v].empty()) out.push_back(v);
    }
    return out;
  }

  std::vector<Index> require_order() const {
    auto order = topological_order();
    if (!order) throw Error(ErrorKind::kInvalidModel, "graph has a directed cycle");
    return *std::move(order);
  }

 private:
  static void normalize(std::vector<Index>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<Key> keys_;
  std::map<Key, Index> index_;
  std::vector<std::vector<Index>> succ_;
  std::vector<std::vector<Index>> pred_;
};

/// One vertex of a path unfolding. `parent` indexes into the same unfolding.
struct UnfoldedVertex {
  std::size_t original = 0;
  std::optional<std::size_t> parent;
};

/// Unfolds a DAG into a forest with one vertex per source-to-vertex path, in
/// depth-first preorder (sources and successors visited in index order).
/// Vertices reachable along k distinct paths appear k times.
template <class Key>
std::vector<UnfoldedVertex> unfold(const Digraph<Key>& g, std::size_t node_budget) {
  g.require_order();
  std::vector<UnfoldedVertex> out;
  struct Frame {
    std::size_t vertex;
    std::optional<std::size_t> parent;
  };
  std::vector<Frame> stack;
  auto sources = g.sources();
  for (auto it = sources.rbegin(); it != sources.rend(); ++it) {
    stack.push_back({*it, std::nullopt});
  }
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (out.size() >= node_budget) {
      throw Error(ErrorKind::kBudgetExceeded,
                  "unfolding exceeds the node budget of " + std::to_string(node_budget));
    }
    std::size_t here = out.size();
    out.push_back({f.vertex, f.parent});
    auto succ = g.successors(f.vertex);
    for (auto it = succ.rbegin(); it != succ.rend(); ++it) stack.push_back({*it, here});
  }
  return out;
}

/// Names for unfolded vertices: a vertex that occurs once keeps its key,
/// repeated ones become "key#1", "key#2", ... in preorder. `taken` guards
/// against collisions with keys that already look like clone names.
template <class Key, class IsTaken>
std::vector<Key> unfolded_names(const Digraph<Key>& g,
                                const std::vector<UnfoldedVertex>& unfolded,
                                IsTaken taken) {
  std::vector<std::size_t> occurrences(g.size(), 0);
  for (const auto& u : unfolded) ++occurrences[u.original];
  std::vector<std::size_t> counter(g.size(), 0);
  std::vector<Key> names;
  names.reserve(unfolded.size());
  std::map<Key, bool> used;
  for (const auto& u : unfolded) {
    const Key& base = g.key(u.original);
    if (occurrences[u.original] == 1) {
      names.push_back(base);
      used[base] = true;
      continue;
    }
    Key candidate;
    do {
      candidate = base + "#" + std::to_string(++counter[u.original]);
    } while (used.count(candidate) || taken(candidate));
    used[candidate] = true;
    names.push_back(candidate);
  }
  return names;
}

}  // namespace rolegraph
