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
#include <compare>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rolegraph/digraph.hpp"
#include "rolegraph/error.hpp"

namespace rolegraph {

using UserId = std::string;
using PermId = std::string;
using RoleId = std::string;
using PermSet = std::set<PermId>;
using RoleArc = std::pair<RoleId, RoleId>;

/// An RBAC policy: users U, permissions P, roles R, the direct assignment RP,
/// user authorization UR and the role graph arcs. An arc (senior, junior)
/// means the senior role inherits everything the junior role holds.
///
/// Map entries with empty value sets carry no information; equality ignores
/// them.
struct RbacModel {
  std::set<UserId> users;
  std::set<PermId> permissions;
  std::set<RoleId> roles;
  std::map<RoleId, PermSet> role_permissions;
  std::map<UserId, std::set<RoleId>> user_roles;
  std::set<RoleArc> arcs;

  const PermSet& direct(const RoleId& role) const {
    static const PermSet kEmpty;
    auto it = role_permissions.find(role);
    return it == role_permissions.end() ? kEmpty : it->second;
  }

  const std::set<RoleId>& roles_of(const UserId& user) const {
    static const std::set<RoleId> kEmpty;
    auto it = user_roles.find(user);
    return it == user_roles.end() ? kEmpty : it->second;
  }
};

/// Drops map entries whose value set is empty.
inline RbacModel normalized(RbacModel m) {
  std::erase_if(m.role_permissions, [](const auto& kv) { return kv.second.empty(); });
  std::erase_if(m.user_roles, [](const auto& kv) { return kv.second.empty(); });
  return m;
}

inline bool operator==(const RbacModel& a, const RbacModel& b) {
  auto x = normalized(a);
  auto y = normalized(b);
  return x.users == y.users && x.permissions == y.permissions && x.roles == y.roles &&
         x.role_permissions == y.role_permissions && x.user_roles == y.user_roles &&
         x.arcs == y.arcs;
}

using RoleGraph = Digraph<RoleId>;

inline RoleGraph role_graph(const RbacModel& m) { return RoleGraph(m.roles, m.arcs); }

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::string code;
  std::string message;
  std::vector<std::string> ids;
};

struct Diagnostics {
  std::vector<Diagnostic> errors;

  bool empty() const { return errors.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const Diagnostic& d) { return d.code == code; });
  }
};

inline Diagnostics validate(const RbacModel& m) {
  Diagnostics out;
  auto report = [&](std::string code, std::string message, std::vector<std::string> ids) {
    out.errors.push_back({std::move(code), std::move(message), std::move(ids)});
  };

  std::set<RoleArc> arcs_ok;
  for (const auto& arc : m.arcs) {
    std::vector<std::string> missing;
    if (!m.roles.count(arc.first)) missing.push_back(arc.first);
    if (!m.roles.count(arc.second)) missing.push_back(arc.second);
    if (missing.empty()) {
      arcs_ok.insert(arc);
    } else {
      report("unknown-role", "arc (" + arc.first + ", " + arc.second + ") references an unknown role",
             std::move(missing));
    }
  }
  for (const auto& [role, perms] : m.role_permissions) {
    if (!m.roles.count(role)) {
      report("unknown-role", "role_permissions references unknown role " + role, {role});
    }
    for (const auto& p : perms) {
      if (!m.permissions.count(p)) {
        report("unknown-permission", "role " + role + " is assigned unknown permission " + p, {p});
      }
    }
  }
  for (const auto& [user, roles] : m.user_roles) {
    if (!m.users.count(user)) {
      report("unknown-user", "user_roles references unknown user " + user, {user});
    }
    for (const auto& r : roles) {
      if (!m.roles.count(r)) {
        report("unknown-role", "user " + user + " is authorized for unknown role " + r, {r});
      }
    }
  }

  RoleGraph g(m.roles, arcs_ok);
  auto cyclic = g.cyclic_vertices();
  if (!cyclic.empty()) {
    // Kahn leftovers include vertices merely downstream of a cycle; keep only
    // those that sit on one.
    std::vector<std::string> on_cycle;
    std::set<std::size_t> left(cyclic.begin(), cyclic.end());
    for (auto v : cyclic) {
      // v is on a cycle iff v reaches itself through the leftover subgraph.
      std::vector<std::size_t> stack(g.successors(v).begin(), g.successors(v).end());
      std::set<std::size_t> seen;
      bool found = false;
      while (!stack.empty() && !found) {
        auto w = stack.back();
        stack.pop_back();
        if (!left.count(w) || !seen.insert(w).second) continue;
        if (w == v) found = true;
        for (auto x : g.successors(w)) stack.push_back(x);
      }
      if (found) on_cycle.push_back(g.key(v));
    }
    report("cycle", "role graph has a directed cycle", std::move(on_cycle));
  }
  return out;
}

inline void require_valid(const RbacModel& m) {
  auto d = validate(m);
  if (!d.empty()) {
    throw Error(ErrorKind::kInvalidModel, d.errors.front().code + ": " + d.errors.front().message);
  }
}

// ---------------------------------------------------------------------------
// Permission closure

/// Effective permission set of every role: its direct assignment plus the
/// effective sets of all juniors.
inline std::map<RoleId, PermSet> effective_sets(const RbacModel& m) {
  RoleGraph g = role_graph(m);
  auto order = g.require_order();
  std::vector<PermSet> eff(g.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto v = *it;
    eff[v] = m.direct(g.key(v));
    for (auto w : g.successors(v)) eff[v].insert(eff[w].begin(), eff[w].end());
  }
  std::map<RoleId, PermSet> out;
  for (std::size_t v = 0; v < g.size(); ++v) out.emplace(g.key(v), std::move(eff[v]));
  return out;
}

inline PermSet effective_permissions(const RbacModel& m, const RoleId& role) {
  if (!m.roles.count(role)) throw Error(ErrorKind::kUnknownId, "unknown role " + role);
  return effective_sets(m).at(role);
}

inline PermSet user_permissions(const RbacModel& m, const UserId& user,
                                const std::map<RoleId, PermSet>& eff) {
  if (!m.users.count(user)) throw Error(ErrorKind::kUnknownId, "unknown user " + user);
  PermSet out;
  for (const auto& r : m.roles_of(user)) {
    const auto& s = eff.at(r);
    out.insert(s.begin(), s.end());
  }
  return out;
}

inline PermSet user_permissions(const RbacModel& m, const UserId& user) {
  return user_permissions(m, user, effective_sets(m));
}

/// Equal U, equal P, and every user holds the same permissions in both.
inline bool models_equivalent(const RbacModel& a, const RbacModel& b) {
  if (a.users != b.users || a.permissions != b.permissions) return false;
  auto ea = effective_sets(a);
  auto eb = effective_sets(b);
  for (const auto& u : a.users) {
    if (user_permissions(a, u, ea) != user_permissions(b, u, eb)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Conversion classes

enum class ConversionClass { kRpEquivalent, kRpAdmissible, kNeither };

constexpr std::string_view to_string(ConversionClass c) {
  switch (c) {
    case ConversionClass::kRpEquivalent: return "rp_equivalent";
    case ConversionClass::kRpAdmissible: return "rp_admissible";
    case ConversionClass::kNeither: return "neither";
  }
  return "neither";
}

/// Pairs (eff(a), eff(b)) over all a that reach b, counting the empty path.
/// The diagonal pairs are exactly the collection of effective sets, so one
/// relation captures both the set condition and the conjugate-path condition.
using PathRelation = std::set<std::pair<PermSet, PermSet>>;

inline PathRelation path_relation(const RbacModel& m) {
  RoleGraph g = role_graph(m);
  auto eff = effective_sets(m);
  // Intern effective sets so the pair set compares small integers.
  std::map<PermSet, std::size_t> ids;
  std::vector<const PermSet*> by_id;
  std::vector<std::size_t> class_of(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& s = eff.at(g.key(v));
    auto [it, fresh] = ids.emplace(s, by_id.size());
    if (fresh) by_id.push_back(&it->first);
    class_of[v] = it->second;
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  auto reach = g.reachability();
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto w = reach[v].find_first(); w != RoleGraph::Bitset::npos; w = reach[v].find_next(w)) {
      pairs.emplace(class_of[v], class_of[w]);
    }
  }
  PathRelation out;
  for (auto [x, y] : pairs) out.emplace(*by_id[x], *by_id[y]);
  return out;
}

/// Classifies the rewrite g -> g_star by comparing their path relations:
/// equal relations is RP-equivalent, inclusion is RP-admissible.
inline ConversionClass conversion_class(const RbacModel& g, const RbacModel& g_star) {
  auto before = path_relation(g);
  auto after = path_relation(g_star);
  if (before == after) return ConversionClass::kRpEquivalent;
  if (std::includes(after.begin(), after.end(), before.begin(), before.end())) {
    return ConversionClass::kRpAdmissible;
  }
  return ConversionClass::kNeither;
}

/// True iff `actual` is at least as strong as `claimed`.
inline bool satisfies(ConversionClass actual, ConversionClass claimed) {
  if (claimed == ConversionClass::kRpEquivalent) return actual == ConversionClass::kRpEquivalent;
  if (claimed == ConversionClass::kRpAdmissible) return actual != ConversionClass::kNeither;
  return true;
}

// ---------------------------------------------------------------------------
// Role contraction and duplicate detection

/// Merges role `drop` into role `keep`: arcs are redirected, self-loops
/// dropped, direct sets unioned and user authorizations remapped. The result
/// may be cyclic if a third role sits between the two.
inline RbacModel contract_roles(const RbacModel& m, const RoleId& keep, const RoleId& drop) {
  RbacModel out = m;
  out.roles.erase(drop);
  out.arcs.clear();
  auto rename = [&](const RoleId& r) -> const RoleId& { return r == drop ? keep : r; };
  for (const auto& [a, b] : m.arcs) {
    const auto& x = rename(a);
    const auto& y = rename(b);
    if (x != y) out.arcs.emplace(x, y);
  }
  if (auto it = out.role_permissions.find(drop); it != out.role_permissions.end()) {
    PermSet moved = std::move(it->second);
    out.role_permissions.erase(it);
    out.role_permissions[keep].insert(moved.begin(), moved.end());
  }
  for (auto& [user, roles] : out.user_roles) {
    if (roles.erase(drop)) roles.insert(keep);
  }
  return normalized(std::move(out));
}

/// Direct permissions of `role` that some junior already provides.
inline PermSet redundant_assignments(const RbacModel& m, const RoleId& role,
                                     const std::map<RoleId, PermSet>& eff) {
  PermSet inherited;
  for (auto it = m.arcs.lower_bound({role, RoleId{}}); it != m.arcs.end() && it->first == role; ++it) {
    const auto& s = eff.at(it->second);
    inherited.insert(s.begin(), s.end());
  }
  PermSet out;
  const auto& d = m.direct(role);
  std::set_intersection(d.begin(), d.end(), inherited.begin(), inherited.end(),
                        std::inserter(out, out.end()));
  return out;
}

/// Removes every direct assignment that a junior already provides. Effective
/// sets are unchanged.
inline RbacModel strip_redundant_assignments(const RbacModel& m) {
  auto eff = effective_sets(m);
  RbacModel out = m;
  for (const auto& r : m.roles) {
    auto extra = redundant_assignments(m, r, eff);
    if (extra.empty()) continue;
    auto& d = out.role_permissions[r];
    for (const auto& p : extra) d.erase(p);
  }
  return normalized(std::move(out));
}

inline bool has_juniors(const RbacModel& m, const RoleId& role) {
  auto it = m.arcs.lower_bound({role, RoleId{}});
  return it != m.arcs.end() && it->first == role;
}

/// A role with juniors that still carries direct permissions.
inline bool is_mixed(const RbacModel& m, const RoleId& role) {
  return has_juniors(m, role) && !m.direct(role).empty();
}

/// Two distinct roles are duplicates when they have equal effective sets and
/// contracting them is an acyclic, RP-equivalent rewrite that does not turn a
/// pure senior or pure leaf role into a mixed one. Returns the first such pair
/// in lexicographic order (smaller id first).
inline std::optional<std::pair<RoleId, RoleId>> find_duplicate_roles(const RbacModel& m) {
  auto eff = effective_sets(m);
  std::map<PermSet, std::vector<RoleId>> groups;
  for (const auto& r : m.roles) groups[eff.at(r)].push_back(r);
  std::optional<PathRelation> before;
  std::optional<std::pair<RoleId, RoleId>> best;
  for (const auto& [set, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        std::pair<RoleId, RoleId> cand{members[i], members[j]};
        if (best && !(cand < *best)) break;
        RbacModel merged = contract_roles(m, members[i], members[j]);
        if (!role_graph(merged).acyclic()) continue;
        merged = strip_redundant_assignments(merged);
        if (is_mixed(merged, members[i]) && !is_mixed(m, members[i]) && !is_mixed(m, members[j])) {
          continue;
        }
        if (!before) before = path_relation(m);
        if (path_relation(merged) != *before) continue;
        best = cand;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Hierarchy flags

inline bool is_tree_like(const RbacModel& m) {
  std::set<RoleId> juniors;
  for (const auto& a : m.arcs) {
    if (!juniors.insert(a.second).second) return false;
  }
  return true;
}

inline bool is_leaf(const RbacModel& m) {
  return std::none_of(m.roles.begin(), m.roles.end(),
                      [&](const RoleId& r) { return is_mixed(m, r); });
}

struct HierarchyFlags {
  bool tree_like = false;
  bool leaf = false;
  bool rp_reduced = false;
  bool transitive_reduced = false;
  bool single = false;
  bool taxonomic = false;

  friend bool operator==(const HierarchyFlags&, const HierarchyFlags&) = default;

  /// True iff every flag set in `required` is also set here.
  bool includes(const HierarchyFlags& required) const {
    return (!required.tree_like || tree_like) && (!required.leaf || leaf) &&
           (!required.rp_reduced || rp_reduced) &&
           (!required.transitive_reduced || transitive_reduced) &&
           (!required.single || single) && (!required.taxonomic || taxonomic);
  }

  template <class F>
  void for_each(F&& f) const {
    f("tree_like", tree_like);
    f("leaf", leaf);
    f("rp_reduced", rp_reduced);
    f("transitive_reduced", transitive_reduced);
    f("single", single);
    f("taxonomic", taxonomic);
  }
};

/// Flag definitions:
///   tree_like           every role has at most one senior
///   leaf                roles with juniors carry no direct permissions
///   single              the hierarchy has exactly one root role
///   taxonomic           leaf, single, and no permission is directly
///                       assigned to more than one role
///   rp_reduced          no redundant direct assignment and no duplicate roles
///                       (see find_duplicate_roles)
///   transitive_reduced  no arc duplicates a longer path
inline HierarchyFlags hierarchy_flags(const RbacModel& m) {
  RoleGraph g = role_graph(m);
  HierarchyFlags f;
  f.tree_like = true;
  std::size_t roots = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (g.predecessors(v).size() > 1) f.tree_like = false;
    if (g.predecessors(v).empty()) ++roots;
  }
  f.single = roots == 1;
  f.leaf = is_leaf(m);
  std::map<PermId, std::size_t> holders;
  for (const auto& [r, perms] : m.role_permissions) {
    for (const auto& p : perms) ++holders[p];
  }
  bool assigned_once = std::all_of(holders.begin(), holders.end(),
                                   [](const auto& kv) { return kv.second == 1; });
  f.taxonomic = f.leaf && f.single && assigned_once;

  auto eff = effective_sets(m);
  bool no_redundant = std::all_of(m.roles.begin(), m.roles.end(), [&](const RoleId& r) {
    return redundant_assignments(m, r, eff).empty();
  });
  f.rp_reduced = no_redundant && !find_duplicate_roles(m);
  f.transitive_reduced = g.transitive_reduction().size() == g.arc_count();
  return f;
}

/// Smallest "base#suffix" (or base itself) that is not a role of `m`.
inline RoleId fresh_role_id(const RbacModel& m, const std::string& base, const std::string& suffix) {
  RoleId candidate = base + "#" + suffix;
  for (int k = 2; m.roles.count(candidate); ++k) {
    candidate = base + "#" + suffix + std::to_string(k);
  }
  return candidate;
}

}  // namespace rolegraph
