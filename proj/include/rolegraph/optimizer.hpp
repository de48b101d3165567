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
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rolegraph/digraph.hpp"
#include "rolegraph/error.hpp"
#include "rolegraph/model.hpp"

namespace rolegraph {

struct OptimizerOptions {
  /// Upper bound on the number of roles treeify may produce.
  std::size_t node_budget = 10000;
};

struct ConversionReport {
  std::vector<std::string> steps;
  HierarchyFlags input_flags;
  HierarchyFlags output_flags;
  ConversionClass claimed_class = ConversionClass::kRpEquivalent;
  std::size_t nodes_added = 0;
  std::size_t nodes_removed = 0;
  std::size_t arcs_added = 0;
  std::size_t arcs_removed = 0;
  /// Provenance of every role that did not exist in the input.
  std::map<RoleId, RoleId> clone_map;
};

struct Conversion {
  RbacModel model;
  ConversionReport report;
};

namespace detail {

struct Step {
  RbacModel model;
  ConversionClass claimed;
  std::map<RoleId, RoleId> provenance;  // new role -> role of the step input
};

inline std::vector<RoleId> sources(const RbacModel& m) {
  std::set<RoleId> juniors;
  for (const auto& a : m.arcs) juniors.insert(a.second);
  std::vector<RoleId> out;
  for (const auto& r : m.roles) {
    if (!juniors.count(r)) out.push_back(r);
  }
  return out;
}

inline Step transitive_reduce_step(const RbacModel& m) {
  RoleGraph g = role_graph(m);
  RbacModel out = m;
  out.arcs.clear();
  for (auto [v, w] : g.transitive_reduction()) out.arcs.emplace(g.key(v), g.key(w));
  return {normalized(std::move(out)), ConversionClass::kRpEquivalent, {}};
}

inline Step rp_reduce_step(const RbacModel& m) {
  RbacModel out = strip_redundant_assignments(m);
  while (auto dup = find_duplicate_roles(out)) {
    out = strip_redundant_assignments(contract_roles(out, dup->first, dup->second));
  }
  return {std::move(out), ConversionClass::kRpEquivalent, {}};
}

inline Step treeify_step(const RbacModel& m, std::size_t node_budget) {
  RoleGraph g = role_graph(m);
  auto unfolded = unfold(g, node_budget);
  auto names = unfolded_names(g, unfolded, [&](const RoleId& r) { return m.roles.count(r) > 0; });

  RbacModel out;
  out.users = m.users;
  out.permissions = m.permissions;
  std::map<RoleId, RoleId> canonical;  // original -> first instance
  std::map<RoleId, RoleId> provenance;
  for (std::size_t i = 0; i < unfolded.size(); ++i) {
    const RoleId& orig = g.key(unfolded[i].original);
    out.roles.insert(names[i]);
    if (const auto& d = m.direct(orig); !d.empty()) out.role_permissions[names[i]] = d;
    if (unfolded[i].parent) out.arcs.emplace(names[*unfolded[i].parent], names[i]);
    canonical.emplace(orig, names[i]);
    if (names[i] != orig) provenance.emplace(names[i], orig);
  }
  for (const auto& [user, roles] : m.user_roles) {
    auto& mapped = out.user_roles[user];
    for (const auto& r : roles) mapped.insert(canonical.at(r));
  }
  return {normalized(std::move(out)), ConversionClass::kRpEquivalent, std::move(provenance)};
}

inline Step leafify_step(const RbacModel& m) {
  RbacModel out = m;
  std::map<RoleId, RoleId> provenance;
  for (const auto& r : m.roles) {
    if (!is_mixed(m, r)) continue;
    RoleId leaf = fresh_role_id(out, r, "leaf");
    out.roles.insert(leaf);
    out.arcs.emplace(r, leaf);
    out.role_permissions[leaf] = std::move(out.role_permissions[r]);
    out.role_permissions.erase(r);
    provenance.emplace(leaf, r);
  }
  return {normalized(std::move(out)), ConversionClass::kRpAdmissible, std::move(provenance)};
}

/// Adds one root above all current roots when the hierarchy does not already
/// have exactly one.
inline Step single_root_step(const RbacModel& m) {
  auto roots = sources(m);
  if (roots.size() == 1) return {m, ConversionClass::kRpEquivalent, {}};
  RbacModel out = m;
  RoleId root = fresh_role_id(out, "", "root");
  out.roles.insert(root);
  for (const auto& r : roots) out.arcs.emplace(root, r);
  return {std::move(out), ConversionClass::kRpAdmissible, {{root, root}}};
}

inline Step leaf_single_step(const RbacModel& m) {
  Step leafified = leafify_step(m);
  RbacModel out = std::move(leafified.model);
  std::map<RoleId, RoleId> provenance = std::move(leafified.provenance);

  // Leaves holding identical permission sets collapse into one.
  std::map<PermSet, std::vector<RoleId>> by_set;
  for (const auto& r : out.roles) {
    if (!has_juniors(out, r) && !out.direct(r).empty()) by_set[out.direct(r)].push_back(r);
  }
  for (const auto& [set, leaves] : by_set) {
    for (std::size_t i = 1; i < leaves.size(); ++i) {
      out = contract_roles(out, leaves.front(), leaves[i]);
      provenance.erase(leaves[i]);
    }
  }

  // Each permission still held by several leaves moves to one atom leaf that
  // every former holder points to.
  std::set<RoleId> touched;
  for (const auto& p : m.permissions) {
    std::vector<RoleId> roles;
    for (const auto& [r, perms] : out.role_permissions) {
      if (perms.count(p)) roles.push_back(r);
    }
    if (roles.size() < 2) continue;
    RoleId atom;
    for (const auto& r : roles) {
      if (out.direct(r) == PermSet{p} && !has_juniors(out, r)) {
        atom = r;
        break;
      }
    }
    if (atom.empty()) {
      atom = fresh_role_id(out, p, "atom");
      out.roles.insert(atom);
      out.role_permissions[atom] = {p};
      provenance.emplace(atom, atom);
    }
    for (const auto& r : roles) {
      if (r == atom) continue;
      out.role_permissions[r].erase(p);
      out.arcs.emplace(r, atom);
      touched.insert(r);
    }
  }
  for (const auto& r : touched) {
    if (out.direct(r).empty()) continue;
    RoleId rest = fresh_role_id(out, r, "rest");
    out.roles.insert(rest);
    out.arcs.emplace(r, rest);
    out.role_permissions[rest] = std::move(out.role_permissions[r]);
    out.role_permissions.erase(r);
    provenance.emplace(rest, provenance.count(r) ? provenance.at(r) : r);
  }

  Step rooted = single_root_step(normalized(std::move(out)));
  provenance.insert(rooted.provenance.begin(), rooted.provenance.end());
  return {std::move(rooted.model), ConversionClass::kRpAdmissible, std::move(provenance)};
}

inline std::vector<std::string> expand_pipeline(std::span<const std::string> pipeline) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> kPresets = {
      {"I+II", {"I", "II"}},
      {"III+I", {"I", "III"}},
      {"III+Ia", {"III", "Ia", "root"}},
  };
  static const std::set<std::string, std::less<>> kBasic = {"I", "Ia", "II", "III", "IV"};
  std::vector<std::string> out;
  for (const auto& name : pipeline) {
    if (auto it = kPresets.find(name); it != kPresets.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    } else if (kBasic.count(name)) {
      out.push_back(name);
    } else {
      throw Error(ErrorKind::kUnknownAlgorithm, "unknown algorithm " + name);
    }
  }
  return out;
}

inline Step run_step(const RbacModel& m, std::string_view name, const OptimizerOptions& options) {
  if (name == "I") return leaf_single_step(m);
  if (name == "Ia") return leafify_step(m);
  if (name == "II") return rp_reduce_step(m);
  if (name == "III") return treeify_step(m, options.node_budget);
  if (name == "IV") return transitive_reduce_step(m);
  if (name == "root") return single_root_step(m);
  throw Error(ErrorKind::kUnknownAlgorithm, "unknown algorithm " + std::string(name));
}

template <class T>
std::size_t count_missing(const std::set<T>& from, const std::set<T>& in) {
  return static_cast<std::size_t>(std::count_if(
      from.begin(), from.end(), [&](const T& x) { return !in.count(x); }));
}

}  // namespace detail

/// Applies the named algorithms in order. Accepted names are the basic
/// algorithms I, Ia, II, III, IV and the presets I+II, III+I, III+Ia.
inline Conversion compose(const RbacModel& model, std::span<const std::string> pipeline,
                          const OptimizerOptions& options = {}) {
  if (pipeline.empty()) throw Error(ErrorKind::kUnknownAlgorithm, "empty pipeline");
  require_valid(model);
  auto steps = detail::expand_pipeline(pipeline);

  Conversion result;
  result.model = normalized(model);
  auto& report = result.report;
  report.steps.assign(pipeline.begin(), pipeline.end());
  report.input_flags = hierarchy_flags(model);
  std::map<RoleId, RoleId> provenance;
  for (const auto& name : steps) {
    detail::Step step = detail::run_step(result.model, name, options);
    if (step.claimed != ConversionClass::kRpEquivalent) {
      report.claimed_class = ConversionClass::kRpAdmissible;
    }
    for (auto& [role, from] : step.provenance) {
      auto earlier = provenance.find(from);
      provenance[role] = earlier == provenance.end() ? from : earlier->second;
    }
    result.model = std::move(step.model);
  }
  for (const auto& [role, from] : provenance) {
    if (result.model.roles.count(role) && !model.roles.count(role)) {
      report.clone_map.emplace(role, from);
    }
  }
  report.output_flags = hierarchy_flags(result.model);
  report.nodes_added = detail::count_missing(result.model.roles, model.roles);
  report.nodes_removed = detail::count_missing(model.roles, result.model.roles);
  report.arcs_added = detail::count_missing(result.model.arcs, model.arcs);
  report.arcs_removed = detail::count_missing(model.arcs, result.model.arcs);
  return result;
}

inline Conversion compose(const RbacModel& model, std::initializer_list<std::string> pipeline,
                          const OptimizerOptions& options = {}) {
  std::vector<std::string> names(pipeline);
  return compose(model, names, options);
}

/// Algorithm IV: replaces the arc set by its transitive reduction.
inline Conversion transitive_reduce(const RbacModel& m) { return compose(m, {"IV"}); }

/// Algorithm II: drops inherited direct assignments and merges duplicate roles.
inline Conversion rp_reduce(const RbacModel& m) { return compose(m, {"II"}); }

/// Algorithm III: unfolds the role graph into a forest of clones.
inline Conversion treeify(const RbacModel& m, const OptimizerOptions& options = {}) {
  return compose(m, {"III"}, options);
}

/// Algorithm Ia: moves direct permissions of senior roles into new leaf children.
inline Conversion leafify(const RbacModel& m) { return compose(m, {"Ia"}); }

/// Algorithm I: leafify, then give every permission a single holder leaf and
/// the hierarchy a single root.
inline Conversion leaf_single(const RbacModel& m) { return compose(m, {"I"}); }

/// Feature set each algorithm or preset guarantees on its output.
inline HierarchyFlags guaranteed_features(std::string_view algorithm) {
  HierarchyFlags f;
  if (algorithm == "I") {
    f.single = f.leaf = true;
  } else if (algorithm == "Ia") {
    f.leaf = true;
  } else if (algorithm == "II") {
    f.rp_reduced = true;
  } else if (algorithm == "III") {
    f.tree_like = true;
  } else if (algorithm == "IV") {
    f.transitive_reduced = true;
  } else if (algorithm == "I+II") {
    f.single = f.taxonomic = f.leaf = f.rp_reduced = true;
  } else if (algorithm == "III+I") {
    f.leaf = f.tree_like = true;
  } else if (algorithm == "III+Ia") {
    f.single = f.leaf = f.tree_like = true;
  } else {
    throw Error(ErrorKind::kUnknownAlgorithm, "unknown algorithm " + std::string(algorithm));
  }
  return f;
}

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> kNames = {"I",    "Ia",    "II",    "III",
                                                  "IV",   "I+II",  "III+I", "III+Ia"};
  return kNames;
}

/// Re-checks a conversion against its input: the output must be valid, an
/// equivalent RBAC model, and at least as strong as the claimed class.
/// Throws kVerificationFailed otherwise.
inline void verify_conversion(const RbacModel& input, const Conversion& c) {
  auto d = validate(c.model);
  if (!d.empty()) {
    throw Error(ErrorKind::kVerificationFailed, "output is not a valid model: " + d.errors.front().message);
  }
  if (!models_equivalent(input, c.model)) {
    throw Error(ErrorKind::kVerificationFailed, "output is not equivalent to the input");
  }
  auto actual = conversion_class(input, c.model);
  if (!satisfies(actual, c.report.claimed_class)) {
    throw Error(ErrorKind::kVerificationFailed,
                "claimed " + std::string(to_string(c.report.claimed_class)) + " but verified " +
                    std::string(to_string(actual)));
  }
}

}  // namespace rolegraph
