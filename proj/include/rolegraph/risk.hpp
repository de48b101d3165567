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
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rolegraph/error.hpp"
#include "rolegraph/model.hpp"
#include "rolegraph/optimizer.hpp"

namespace rolegraph {

using Rational = boost::multiprecision::cpp_rational;

/// The AHP decision tree: the role forest with one extra child per permission
/// under every leaf role. Sibling groups are the alternatives compared under
/// their common parent; the forest roots form one group under an implicit
/// top criterion.
struct ExtendedTree {
  struct Node {
    std::string label;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    std::optional<RoleId> role;
    std::optional<PermId> permission;
    /// |RP| of the node: effective set size, 1 for permission nodes.
    std::size_t size = 0;
    Rational weight = 0;
  };

  std::vector<Node> nodes;
  std::vector<std::size_t> roots;

  bool is_permission(std::size_t n) const { return nodes[n].permission.has_value(); }

  /// Sibling groups in deterministic order: the roots first, then the
  /// children of each node in index order.
  std::vector<std::vector<std::size_t>> groups() const {
    std::vector<std::vector<std::size_t>> out;
    if (!roots.empty()) out.push_back(roots);
    for (const auto& n : nodes) {
      if (!n.children.empty()) out.push_back(n.children);
    }
    return out;
  }
};

/// Reciprocal comparison matrix for one sibling group: entry (i, j) is
/// |RP(i)| / |RP(j)|.
struct PairwiseMatrix {
  std::vector<std::size_t> alternatives;
  std::vector<std::vector<Rational>> entries;

  bool reciprocal() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i][i] != 1) return false;
      for (std::size_t j = 0; j < entries.size(); ++j) {
        if (entries[i][j] * entries[j][i] != 1) return false;
      }
    }
    return true;
  }

  /// entries[i][j] * entries[j][k] == entries[i][k] for all i, j, k.
  bool consistent() const {
    const auto k = entries.size();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l < k; ++l) {
          if (entries[i][j] * entries[j][l] != entries[i][l]) return false;
        }
      }
    }
    return true;
  }
};

struct RiskReport {
  std::map<PermId, Rational> risks;
  std::vector<PermId> ranking;
};

/// Builds the extended tree of a tree-like leaf hierarchy. Weights are left
/// at zero; see relative_coefficients.
inline ExtendedTree extend_tree(const RbacModel& m) {
  require_valid(m);
  if (!is_tree_like(m)) throw Error(ErrorKind::kFlagViolation, "role hierarchy is not tree-like");
  if (!is_leaf(m)) throw Error(ErrorKind::kFlagViolation, "role hierarchy is not a leaf hierarchy");

  RoleGraph g = role_graph(m);
  ExtendedTree t;
  std::vector<std::size_t> node_of(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    node_of[v] = t.nodes.size();
    ExtendedTree::Node n;
    n.label = g.key(v);
    n.role = g.key(v);
    t.nodes.push_back(std::move(n));
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto& n = t.nodes[node_of[v]];
    if (g.predecessors(v).empty()) {
      t.roots.push_back(node_of[v]);
    } else {
      n.parent = node_of[g.predecessors(v).front()];
    }
    for (auto w : g.successors(v)) n.children.push_back(node_of[w]);
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (const auto& p : m.direct(g.key(v))) {
      ExtendedTree::Node leaf;
      leaf.label = g.key(v) + "/" + p;
      leaf.parent = node_of[v];
      leaf.permission = p;
      t.nodes[node_of[v]].children.push_back(t.nodes.size());
      t.nodes.push_back(std::move(leaf));
    }
  }
  return t;
}

/// Assigns each node the weight |RP(node)| / sum of |RP| over its siblings.
/// Nodes with empty effective sets get weight zero.
inline ExtendedTree relative_coefficients(ExtendedTree t, const RbacModel& m) {
  auto eff = effective_sets(m);
  for (auto& n : t.nodes) n.size = n.permission ? 1 : eff.at(*n.role).size();
  for (const auto& group : t.groups()) {
    std::size_t total = 0;
    for (auto s : group) total += t.nodes[s].size;
    for (auto s : group) {
      t.nodes[s].weight = total == 0 ? Rational(0) : Rational(t.nodes[s].size, total);
    }
  }
  return t;
}

/// Comparison matrices of every sibling group, over the alternatives with a
/// non-empty permission set.
inline std::vector<PairwiseMatrix> pairwise_matrices(const ExtendedTree& t) {
  std::vector<PairwiseMatrix> out;
  for (const auto& group : t.groups()) {
    PairwiseMatrix mat;
    for (auto s : group) {
      if (t.nodes[s].size > 0) mat.alternatives.push_back(s);
    }
    if (mat.alternatives.empty()) continue;
    const auto k = mat.alternatives.size();
    mat.entries.assign(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        mat.entries[i][j] = Rational(t.nodes[mat.alternatives[i]].size, t.nodes[mat.alternatives[j]].size);
      }
    }
    out.push_back(std::move(mat));
  }
  return out;
}

/// Non-increasing risk, ties broken by permission id.
inline std::vector<PermId> rank_permissions(const RiskReport& report) {
  std::vector<PermId> out;
  out.reserve(report.risks.size());
  for (const auto& [p, r] : report.risks) out.push_back(p);
  std::stable_sort(out.begin(), out.end(), [&](const PermId& a, const PermId& b) {
    return report.risks.at(a) > report.risks.at(b);
  });
  return out;
}

/// Leakage probability of every permission: the sum, over root-to-leaf paths
/// of the extended tree ending in that permission, of the product of the
/// relative coefficients along the path. Hierarchies that are not tree-like
/// leaf hierarchies are normalized with the III+I preset first.
inline RiskReport leakage_risks(const RbacModel& model, const OptimizerOptions& options = {}) {
  require_valid(model);
  if (model.permissions.empty()) throw Error(ErrorKind::kEmptyPermissions, "policy has no permissions");
  RbacModel m = model;
  if (!is_tree_like(m) || !is_leaf(m)) m = compose(m, {"III+I"}, options).model;

  ExtendedTree t = relative_coefficients(extend_tree(m), m);
  RiskReport report;
  for (const auto& p : m.permissions) report.risks.emplace(p, 0);

  std::vector<Rational> mass(t.nodes.size());
  std::vector<std::size_t> stack(t.roots.rbegin(), t.roots.rend());
  for (auto r : t.roots) mass[r] = t.nodes[r].weight;
  bool any = false;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    if (t.nodes[n].weight == 0) continue;
    if (t.nodes[n].permission) {
      report.risks[*t.nodes[n].permission] += mass[n];
      any = true;
      continue;
    }
    for (auto c : t.nodes[n].children) {
      mass[c] = mass[n] * t.nodes[c].weight;
      stack.push_back(c);
    }
  }
  if (!any) throw Error(ErrorKind::kEmptyPermissions, "no role holds a permission");
  report.ranking = rank_permissions(report);
  return report;
}

/// Fixed-point rendering rounded half away from zero.
inline std::string format_decimal(const Rational& value, int digits) {
  using boost::multiprecision::cpp_int;
  cpp_int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = abs(value) * scale;
  cpp_int num = numerator(scaled);
  cpp_int den = denominator(scaled);
  cpp_int rounded = (2 * num + den) / (2 * den);
  std::string whole = cpp_int(rounded / scale).str();
  std::string frac = cpp_int(rounded % scale).str();
  if (static_cast<int>(frac.size()) < digits) frac.insert(0, digits - frac.size(), '0');
  std::string sign = (value < 0 && rounded != 0) ? "-" : "";
  return digits > 0 ? sign + whole + "." + frac : sign + whole;
}

}  // namespace rolegraph
