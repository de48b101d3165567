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
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rolegraph/error.hpp"
#include "rolegraph/model.hpp"
#include "rolegraph/optimizer.hpp"

namespace rolegraph {

/// A security label: a classification level (index into the level list,
/// lowest first) and a category set.
struct MacLabel {
  std::size_t level = 0;
  std::set<std::string> categories;

  friend bool operator==(const MacLabel&, const MacLabel&) = default;
};

class MacLattice {
 public:
  MacLattice(std::vector<std::string> levels, std::set<std::string> categories)
      : levels_(std::move(levels)), categories_(std::move(categories)) {
    if (levels_.empty()) throw Error(ErrorKind::kSchema, "MAC lattice needs at least one level");
    std::set<std::string> distinct(levels_.begin(), levels_.end());
    if (distinct.size() != levels_.size()) throw Error(ErrorKind::kSchema, "MAC levels must be distinct");
  }

  const std::vector<std::string>& levels() const { return levels_; }
  const std::set<std::string>& categories() const { return categories_; }

  MacLabel label(std::string_view level, std::set<std::string> cats) const {
    auto it = std::find(levels_.begin(), levels_.end(), level);
    if (it == levels_.end()) throw Error(ErrorKind::kUnknownId, "unknown level " + std::string(level));
    MacLabel l{static_cast<std::size_t>(it - levels_.begin()), std::move(cats)};
    if (!contains(l)) throw Error(ErrorKind::kUnknownId, "label uses an unknown category");
    return l;
  }

  bool contains(const MacLabel& l) const {
    return l.level < levels_.size() &&
           std::includes(categories_.begin(), categories_.end(), l.categories.begin(), l.categories.end());
  }

  bool leq(const MacLabel& a, const MacLabel& b) const {
    return a.level <= b.level &&
           std::includes(b.categories.begin(), b.categories.end(), a.categories.begin(), a.categories.end());
  }

  MacLabel join(const MacLabel& a, const MacLabel& b) const {
    MacLabel out{std::max(a.level, b.level), a.categories};
    out.categories.insert(b.categories.begin(), b.categories.end());
    return out;
  }

  MacLabel meet(const MacLabel& a, const MacLabel& b) const {
    MacLabel out{std::min(a.level, b.level), {}};
    std::set_intersection(a.categories.begin(), a.categories.end(), b.categories.begin(), b.categories.end(),
                          std::inserter(out.categories, out.categories.end()));
    return out;
  }

  /// Every label: levels x subsets of the categories.
  std::vector<MacLabel> elements() const {
    std::vector<std::string> cats(categories_.begin(), categories_.end());
    std::vector<MacLabel> out;
    for (std::size_t lvl = 0; lvl < levels_.size(); ++lvl) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cats.size()); ++mask) {
        MacLabel l{lvl, {}};
        for (std::size_t i = 0; i < cats.size(); ++i) {
          if (mask >> i & 1u) l.categories.insert(cats[i]);
        }
        out.push_back(std::move(l));
      }
    }
    return out;
  }

  std::string describe(const MacLabel& l) const {
    std::string out = levels_.at(l.level) + "{";
    bool first = true;
    for (const auto& c : l.categories) {
      out += (first ? "" : ",") + c;
      first = false;
    }
    return out + "}";
  }

 private:
  std::vector<std::string> levels_;
  std::set<std::string> categories_;
};

/// Order generated by a role forest: a junior lies below each of its seniors,
/// a synthetic bottom lies below everything, and a synthetic top is added
/// when there is more than one root. Non-tree hierarchies are unfolded first.
class RoleLattice {
 public:
  using Element = std::size_t;

  explicit RoleLattice(const RbacModel& model, const OptimizerOptions& options = {}) {
    require_valid(model);
    RbacModel tree = model;
    if (!is_tree_like(model)) {
      Conversion c = compose(model, {"III"}, options);
      for (const auto& [clone, original] : c.report.clone_map) {
        if (clone != original) clones_[original].push_back(clone);
      }
      tree = std::move(c.model);
    }
    RoleGraph g = role_graph(tree);
    for (std::size_t v = 0; v < g.size(); ++v) {
      names_.push_back(g.key(v));
      parent_.push_back(g.predecessors(v).empty() ? std::nullopt
                                                  : std::optional<Element>(g.predecessors(v).front()));
    }
    auto roots = g.sources();
    bottom_ = add_synthetic(fresh_name(tree, "bottom"));
    if (roots.size() > 1) {
      top_ = add_synthetic(fresh_name(tree, "top"));
      for (auto r : roots) parent_[r] = *top_;
    } else if (roots.size() == 1) {
      top_ = roots.front();
    }
    depth_.assign(names_.size(), 0);
    for (Element e = 0; e < names_.size(); ++e) depth_[e] = compute_depth(e);
  }

  std::size_t size() const { return names_.size(); }
  Element bottom() const { return bottom_; }
  /// Copies made of `original` while unfolding; empty when it was kept as is.
  std::vector<std::string> clones_of(const std::string& original) const {
    auto it = clones_.find(original);
    return it == clones_.end() ? std::vector<std::string>{} : it->second;
  }
  std::optional<Element> top() const { return top_; }
  const std::string& name(Element e) const { return names_.at(e); }

  std::optional<Element> find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Element>(it - names_.begin());
  }

  std::vector<Element> elements() const {
    std::vector<Element> out(names_.size());
    for (Element e = 0; e < out.size(); ++e) out[e] = e;
    return out;
  }

  /// a <= b: b is an ancestor-or-self of a, or a is the bottom.
  bool leq(Element a, Element b) const {
    if (a == b || a == bottom_) return true;
    if (b == bottom_) return false;
    for (auto cur = parent_[a]; cur; cur = parent_[*cur]) {
      if (*cur == b) return true;
    }
    return false;
  }

  Element join(Element a, Element b) const {
    if (leq(a, b)) return b;
    if (leq(b, a)) return a;
    // Lowest common ancestor in the completed tree.
    while (depth_[a] > depth_[b]) a = *parent_[a];
    while (depth_[b] > depth_[a]) b = *parent_[b];
    while (a != b) {
      a = *parent_[a];
      b = *parent_[b];
    }
    return a;
  }

  Element meet(Element a, Element b) const {
    if (leq(a, b)) return a;
    if (leq(b, a)) return b;
    return bottom_;
  }

 private:
  Element add_synthetic(std::string name) {
    names_.push_back(std::move(name));
    parent_.push_back(std::nullopt);
    return names_.size() - 1;
  }

  static std::string fresh_name(const RbacModel& m, const std::string& what) {
    return fresh_role_id(m, "", what);
  }

  std::size_t compute_depth(Element e) const {
    if (e == bottom_) return 0;
    std::size_t d = 0;
    for (auto cur = parent_[e]; cur; cur = parent_[*cur]) ++d;
    return d;
  }

  std::vector<std::string> names_;
  std::map<std::string, std::vector<std::string>> clones_;
  std::vector<std::optional<Element>> parent_;
  std::vector<std::size_t> depth_;
  Element bottom_ = 0;
  std::optional<Element> top_;
};

/// A combined label of the product lattice, stamped with the identity of the
/// lattice that issued it.
struct ProductLabel {
  std::uint64_t lattice = 0;
  MacLabel mac;
  RoleLattice::Element role = 0;

  friend bool operator==(const ProductLabel&, const ProductLabel&) = default;
};

/// Cartesian product of a MAC lattice and a role lattice, ordered
/// componentwise.
class ProductLattice {
 public:
  ProductLattice(MacLattice mac, RoleLattice roles)
      : mac_(std::move(mac)), roles_(std::move(roles)), id_(next_id()) {}

  const MacLattice& mac() const { return mac_; }
  const RoleLattice& roles() const { return roles_; }
  std::uint64_t id() const { return id_; }

  ProductLabel label(MacLabel mac, RoleLattice::Element role) const {
    if (!mac_.contains(mac) || role >= roles_.size()) {
      throw Error(ErrorKind::kUnknownId, "label outside the product lattice");
    }
    return {id_, std::move(mac), role};
  }

  ProductLabel label(std::string_view level, std::set<std::string> cats, std::string_view role) const {
    auto r = roles_.find(role);
    if (!r) {
      std::string msg = "unknown role " + std::string(role);
      auto clones = roles_.clones_of(std::string(role));
      for (std::size_t i = 0; i < clones.size(); ++i) msg += (i == 0 ? "; unfolded into " : ", ") + clones[i];
      throw Error(ErrorKind::kUnknownId, msg);
    }
    return label(mac_.label(level, std::move(cats)), *r);
  }

  bool leq(const ProductLabel& a, const ProductLabel& b) const {
    check(a, b);
    return mac_.leq(a.mac, b.mac) && roles_.leq(a.role, b.role);
  }

  ProductLabel join(const ProductLabel& a, const ProductLabel& b) const {
    check(a, b);
    return {id_, mac_.join(a.mac, b.mac), roles_.join(a.role, b.role)};
  }

  ProductLabel meet(const ProductLabel& a, const ProductLabel& b) const {
    check(a, b);
    return {id_, mac_.meet(a.mac, b.mac), roles_.meet(a.role, b.role)};
  }

  std::vector<ProductLabel> elements() const {
    std::vector<ProductLabel> out;
    for (const auto& m : mac_.elements()) {
      for (auto r : roles_.elements()) out.push_back({id_, m, r});
    }
    return out;
  }

  std::string describe(const ProductLabel& l) const {
    return "(" + mac_.describe(l.mac) + ", " + roles_.name(l.role) + ")";
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  void check(const ProductLabel& a, const ProductLabel& b) const {
    if (a.lattice != id_ || b.lattice != id_) {
      throw Error(ErrorKind::kMixedLattice, "labels come from different product lattices");
    }
  }

  MacLattice mac_;
  RoleLattice roles_;
  std::uint64_t id_;
};

/// a dominates b iff a is at least b in both the MAC and the role order.
inline bool product_dominates(const ProductLattice& lattice, const ProductLabel& a, const ProductLabel& b) {
  return lattice.leq(b, a);
}

}  // namespace rolegraph
