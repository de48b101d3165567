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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rolegraph/digraph.hpp"
#include "rolegraph/error.hpp"
#include "rolegraph/sha256.hpp"

namespace rolegraph {

using ObjectId = std::string;
using ObjectArc = std::pair<ObjectId, ObjectId>;

/// Partially ordered protected objects. An arc (parent, child) means access to
/// the child is reached through the parent.
struct ObjectHierarchy {
  std::set<ObjectId> objects;
  std::map<ObjectId, std::string> ids;
  std::set<ObjectArc> arcs;

  std::size_t order() const { return objects.size(); }
  const std::string& id(const ObjectId& o) const { return ids.at(o); }

  friend bool operator==(const ObjectHierarchy&, const ObjectHierarchy&) = default;
};

using ObjectGraph = Digraph<ObjectId>;

inline ObjectGraph object_graph(const ObjectHierarchy& h) { return ObjectGraph(h.objects, h.arcs); }

/// Checks membership, acyclicity and (unless disabled) identifier
/// uniqueness. Clone trees legitimately repeat identifiers.
inline void require_valid(const ObjectHierarchy& h, bool unique_ids = true) {
  for (const auto& o : h.objects) {
    if (!h.ids.count(o)) throw Error(ErrorKind::kSchema, "object " + o + " has no identifier");
  }
  for (const auto& [o, id] : h.ids) {
    if (!h.objects.count(o)) throw Error(ErrorKind::kUnknownId, "identifier given for unknown object " + o);
  }
  if (unique_ids) {
    std::map<std::string, ObjectId> seen;
    for (const auto& [o, id] : h.ids) {
      if (auto [it, fresh] = seen.emplace(id, o); !fresh) {
        throw Error(ErrorKind::kIdCollision, "objects " + it->second + " and " + o + " share identifier " + id);
      }
    }
  }
  if (!object_graph(h).acyclic()) throw Error(ErrorKind::kInvalidModel, "object hierarchy has a directed cycle");
}

enum class SharingMode { kAnyPath, kAllPaths };

constexpr std::string_view to_string(SharingMode m) {
  return m == SharingMode::kAnyPath ? "any_path" : "all_paths";
}

struct ClonePosition {
  ObjectId clone;
  Key chain_key{};
};

struct KeyTable {
  Key k0{};
  /// Access key of every object of the hierarchy the table was built for.
  std::map<ObjectId, Key> keys;
  /// Clones of each original object in the ID-equivalent tree, with the key
  /// obtained by chaining down to that clone.
  std::map<ObjectId, std::vector<ClonePosition>> id_classes;
  /// any_path mode: per (original, clone) wrapping of the object key.
  std::map<std::pair<ObjectId, ObjectId>, Key> wraps;
};

namespace detail {

inline std::map<ObjectId, Key> chain_keys(const ObjectHierarchy& h, const ObjectGraph& g, const Key& k0) {
  std::map<ObjectId, Key> keys;
  for (auto v : g.require_order()) {
    const ObjectId& o = g.key(v);
    auto parents = g.predecessors(v);
    const Key& base = parents.empty() ? k0 : keys.at(g.key(parents.front()));
    keys.emplace(o, hash_concat(base, h.id(o)));
  }
  return keys;
}

}  // namespace detail

/// Hash-based key derivation on a tree-like hierarchy: every root gets
/// H(k0 || id), every child H(parent key || id). Fails naming the first object
/// with two parents, since its key would not be unique.
inline KeyTable derive_keys(const ObjectHierarchy& h, const Key& k0) {
  require_valid(h, /*unique_ids=*/false);
  ObjectGraph g = object_graph(h);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.predecessors(v).size() > 1) {
      throw Error(ErrorKind::kNotUnique,
                  "object " + g.key(v) + " has several parents; its key is not unique");
    }
  }
  KeyTable t;
  t.k0 = k0;
  t.keys = detail::chain_keys(h, g, k0);
  for (const auto& [o, k] : t.keys) t.id_classes[o].push_back({o, k});
  return t;
}

struct IdEquivalentTree {
  ObjectHierarchy tree;
  /// Original object -> its clones in the tree, in preorder.
  std::map<ObjectId, std::vector<ObjectId>> classes;
};

/// Unfolds a DAG hierarchy into a tree in which every clone keeps the
/// identifier of its original.
inline IdEquivalentTree id_equivalent_tree(const ObjectHierarchy& g, std::size_t node_budget = 10000) {
  require_valid(g);
  ObjectGraph dag = object_graph(g);
  auto unfolded = unfold(dag, node_budget);
  auto names = unfolded_names(dag, unfolded, [&](const ObjectId& o) { return g.objects.count(o) > 0; });
  IdEquivalentTree out;
  for (std::size_t i = 0; i < unfolded.size(); ++i) {
    const ObjectId& orig = dag.key(unfolded[i].original);
    out.tree.objects.insert(names[i]);
    out.tree.ids.emplace(names[i], g.id(orig));
    if (unfolded[i].parent) out.tree.arcs.emplace(names[*unfolded[i].parent], names[i]);
    out.classes[orig].push_back(names[i]);
  }
  return out;
}

/// The any_path wrap key of a clone: H(chain key || "wrap").
inline Key wrap_mask(const Key& chain_key) { return hash_concat(chain_key, "wrap"); }

inline Key unwrap_any_path(const Key& wrap, const Key& chain_key) {
  return xor_keys(wrap, wrap_mask(chain_key));
}

inline Key combine_all_paths(const std::vector<Key>& chain_keys) {
  Key out{};
  for (const auto& k : chain_keys) out = xor_keys(out, k);
  return out;
}

/// Generalized key distribution for an arbitrary DAG hierarchy. Keys are
/// chained over the ID-equivalent tree; objects with several clones get a
/// class key: under any_path a fresh random key wrapped once per clone, under
/// all_paths the XOR of every clone chain key. `rng` supplies the fresh keys.
template <class Urbg>
KeyTable distribute_keys(const ObjectHierarchy& g, const Key& k0, SharingMode mode, Urbg& rng,
                         std::size_t node_budget = 10000) {
  IdEquivalentTree t = id_equivalent_tree(g, node_budget);
  KeyTable chained = derive_keys(t.tree, k0);
  KeyTable out;
  out.k0 = k0;
  for (const auto& [orig, clones] : t.classes) {
    auto& positions = out.id_classes[orig];
    for (const auto& c : clones) positions.push_back({c, chained.keys.at(c)});
    if (clones.size() == 1) {
      out.keys.emplace(orig, positions.front().chain_key);
      continue;
    }
    if (mode == SharingMode::kAnyPath) {
      Key fresh{};
      for (auto& b : fresh) b = static_cast<std::uint8_t>(rng() & 0xffu);
      out.keys.emplace(orig, fresh);
      for (const auto& p : positions) {
        out.wraps.emplace(std::pair{orig, p.clone}, xor_keys(fresh, wrap_mask(p.chain_key)));
      }
    } else {
      std::vector<Key> shares;
      for (const auto& p : positions) shares.push_back(p.chain_key);
      out.keys.emplace(orig, combine_all_paths(shares));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Access decisions

struct SubjectKnowledge {
  std::map<ObjectId, Key> known_keys;
  /// Identifiers the subject has been told (ID_S).
  std::set<std::string> id_set;
  bool has_k0 = false;
};

enum class AccessMode { kMandatory, kDiscretionary, kBoth };

constexpr std::string_view to_string(AccessMode m) {
  switch (m) {
    case AccessMode::kMandatory: return "mandatory";
    case AccessMode::kDiscretionary: return "discretionary";
    case AccessMode::kBoth: return "both";
  }
  return "mandatory";
}

/// Decides access by simulating which keys the subject can compute.
///   mandatory      identifiers are public: from any known key the subject
///                  chains down the whole subtree.
///   discretionary  identifiers are secret: starting from k0 the subject
///                  extends a chain only through objects whose identifier it
///                  holds.
///   both           known keys as the starting points, extension gated by
///                  the identifier set.
/// A chain covers every object on the path, so access is sequential.
inline bool can_access(const ObjectHierarchy& h, const KeyTable& table, const SubjectKnowledge& s,
                       const ObjectId& target, AccessMode mode) {
  if (!h.objects.count(target)) throw Error(ErrorKind::kUnknownId, "unknown object " + target);
  ObjectGraph g = object_graph(h);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.predecessors(v).size() > 1) {
      throw Error(ErrorKind::kNotUnique, "access decisions need a tree-like hierarchy");
    }
  }
  const bool gated = mode != AccessMode::kMandatory;
  auto allowed = [&](const ObjectId& o) { return !gated || s.id_set.count(h.id(o)) > 0; };

  std::map<ObjectId, Key> computed;
  std::vector<std::size_t> frontier;
  if (mode == AccessMode::kDiscretionary) {
    if (s.has_k0) {
      for (auto r : g.sources()) {
        if (!allowed(g.key(r))) continue;
        computed.emplace(g.key(r), hash_concat(table.k0, h.id(g.key(r))));
        frontier.push_back(r);
      }
    }
  } else {
    for (const auto& [o, k] : s.known_keys) {
      auto v = g.find(o);
      // A value that is not the object's key is no knowledge at all.
      if (!v || table.keys.at(o) != k) continue;
      computed.emplace(o, k);
      frontier.push_back(*v);
    }
  }
  while (!frontier.empty()) {
    auto v = frontier.back();
    frontier.pop_back();
    const Key base = computed.at(g.key(v));
    for (auto w : g.successors(v)) {
      const ObjectId& child = g.key(w);
      if (!allowed(child) || computed.count(child)) continue;
      computed.emplace(child, hash_concat(base, h.id(child)));
      frontier.push_back(w);
    }
  }
  auto it = computed.find(target);
  return it != computed.end() && it->second == table.keys.at(target);
}

}  // namespace rolegraph
