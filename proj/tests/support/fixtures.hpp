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

#include <map>
#include <set>
#include <vector>

#include "rolegraph/rolegraph.hpp"

namespace rolegraph::testing {

/// Model whose roles, permissions and users are whatever the pieces mention.
inline RbacModel make_model(const std::vector<RoleArc>& arcs, const std::map<RoleId, PermSet>& direct,
                            const std::map<UserId, std::set<RoleId>>& users = {},
                            const std::set<RoleId>& extra_roles = {}) {
  RbacModel m;
  m.roles = extra_roles;
  for (const auto& [a, b] : arcs) {
    m.roles.insert(a);
    m.roles.insert(b);
    m.arcs.emplace(a, b);
  }
  for (const auto& [r, ps] : direct) {
    m.roles.insert(r);
    if (!ps.empty()) m.role_permissions[r] = ps;
    m.permissions.insert(ps.begin(), ps.end());
  }
  for (const auto& [u, rs] : users) {
    m.users.insert(u);
    if (!rs.empty()) m.user_roles[u] = rs;
    m.roles.insert(rs.begin(), rs.end());
  }
  return m;
}

/// r1 -> {r2, r3} -> r4.
inline RbacModel diamond(const std::map<RoleId, PermSet>& direct) {
  return make_model({{"r1", "r2"}, {"r1", "r3"}, {"r2", "r4"}, {"r3", "r4"}}, direct);
}

inline ObjectHierarchy make_hierarchy(const std::vector<ObjectArc>& arcs, const std::set<ObjectId>& extra = {}) {
  ObjectHierarchy h;
  h.objects = extra;
  for (const auto& [a, b] : arcs) {
    h.objects.insert(a);
    h.objects.insert(b);
    h.arcs.emplace(a, b);
  }
  for (const auto& o : h.objects) h.ids[o] = o;
  return h;
}

}  // namespace rolegraph::testing
