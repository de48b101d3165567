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

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rolegraph/error.hpp"
#include "rolegraph/hbakd.hpp"
#include "rolegraph/keychange.hpp"
#include "rolegraph/lattice.hpp"
#include "rolegraph/model.hpp"
#include "rolegraph/optimizer.hpp"
#include "rolegraph/sha256.hpp"

namespace rolegraph::io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::kSyntax, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                        ": " + e.what());
  }
}

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::kSchema, where + ": " + what);
}

inline void require_object(const Json& j, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) schema_error(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) schema_error(where, "unknown key \"" + key + "\"");
  }
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

inline std::set<std::string> string_set(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected a list of strings");
  std::set<std::string> out;
  for (const auto& e : j) out.insert(as_string(e, where));
  return out;
}

inline std::set<std::pair<std::string, std::string>> pair_set(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected a list of pairs");
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) schema_error(where, "expected a two-element list");
    out.emplace(as_string(e[0], where), as_string(e[1], where));
  }
  return out;
}

inline std::map<std::string, std::set<std::string>> set_map(const Json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object of lists");
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [k, v] : j.items()) out[k] = string_set(v, where + "." + k);
  return out;
}

inline OrderedJson list(const std::set<std::string>& s) {
  OrderedJson out = OrderedJson::array();
  for (const auto& x : s) out.push_back(x);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Policy documents

inline RbacModel policy_from_json(const Json& j) {
  detail::require_object(j, "policy",
                         {"users", "permissions", "roles", "arcs", "role_permissions", "user_roles"});
  RbacModel m;
  if (j.contains("users")) m.users = detail::string_set(j["users"], "users");
  if (j.contains("permissions")) m.permissions = detail::string_set(j["permissions"], "permissions");
  if (j.contains("roles")) m.roles = detail::string_set(j["roles"], "roles");
  if (j.contains("arcs")) m.arcs = detail::pair_set(j["arcs"], "arcs");
  if (j.contains("role_permissions")) {
    m.role_permissions = detail::set_map(j["role_permissions"], "role_permissions");
  }
  if (j.contains("user_roles")) m.user_roles = detail::set_map(j["user_roles"], "user_roles");
  return normalized(std::move(m));
}

/// Syntax and schema checks only; semantic validation is `validate`.
inline RbacModel parse_policy(std::string_view text) { return policy_from_json(parse_json(text)); }

inline OrderedJson policy_to_json(const RbacModel& model) {
  RbacModel m = normalized(model);
  OrderedJson j;
  j["users"] = detail::list(m.users);
  j["permissions"] = detail::list(m.permissions);
  j["roles"] = detail::list(m.roles);
  j["arcs"] = OrderedJson::array();
  for (const auto& [a, b] : m.arcs) j["arcs"].push_back({a, b});
  j["role_permissions"] = OrderedJson::object();
  for (const auto& [r, perms] : m.role_permissions) j["role_permissions"][r] = detail::list(perms);
  j["user_roles"] = OrderedJson::object();
  for (const auto& [u, roles] : m.user_roles) j["user_roles"][u] = detail::list(roles);
  return j;
}

/// Canonical rendering: fixed key order, sorted members, two-space indent,
/// trailing newline.
inline std::string serialize_policy(const RbacModel& m) { return policy_to_json(m).dump(2) + "\n"; }

inline OrderedJson flags_to_json(const HierarchyFlags& f) {
  OrderedJson j;
  f.for_each([&](const char* name, bool value) { j[name] = value; });
  return j;
}

inline OrderedJson report_to_json(const ConversionReport& r) {
  OrderedJson j;
  j["steps"] = r.steps;
  j["claimed_class"] = std::string(to_string(r.claimed_class));
  j["input_flags"] = flags_to_json(r.input_flags);
  j["output_flags"] = flags_to_json(r.output_flags);
  j["nodes_added"] = r.nodes_added;
  j["nodes_removed"] = r.nodes_removed;
  j["arcs_added"] = r.arcs_added;
  j["arcs_removed"] = r.arcs_removed;
  j["clone_map"] = OrderedJson::object();
  for (const auto& [to, from] : r.clone_map) j["clone_map"][to] = from;
  return j;
}

inline std::string report_to_text(const ConversionReport& r) {
  std::string out;
  std::string steps;
  for (const auto& s : r.steps) steps += (steps.empty() ? "" : ",") + s;
  out += "algorithm\t" + steps + "\n";
  out += "claimed_class\t" + std::string(to_string(r.claimed_class)) + "\n";
  r.input_flags.for_each([&](const char* name, bool v) {
    out += std::string("input.") + name + "\t" + (v ? "true" : "false") + "\n";
  });
  r.output_flags.for_each([&](const char* name, bool v) {
    out += std::string("output.") + name + "\t" + (v ? "true" : "false") + "\n";
  });
  out += "nodes_added\t" + std::to_string(r.nodes_added) + "\n";
  out += "nodes_removed\t" + std::to_string(r.nodes_removed) + "\n";
  out += "arcs_added\t" + std::to_string(r.arcs_added) + "\n";
  out += "arcs_removed\t" + std::to_string(r.arcs_removed) + "\n";
  for (const auto& [to, from] : r.clone_map) out += "clone\t" + to + "\t" + from + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Object hierarchies, subjects, scenarios

inline ObjectHierarchy hierarchy_from_json(const Json& j) {
  detail::require_object(j, "hierarchy", {"objects", "ids", "arcs"});
  ObjectHierarchy h;
  if (j.contains("objects")) h.objects = detail::string_set(j["objects"], "objects");
  if (j.contains("arcs")) h.arcs = detail::pair_set(j["arcs"], "arcs");
  if (j.contains("ids")) {
    if (!j["ids"].is_object()) detail::schema_error("ids", "expected an object of strings");
    for (const auto& [o, id] : j["ids"].items()) h.ids[o] = detail::as_string(id, "ids." + o);
  }
  return h;
}

inline ObjectHierarchy parse_hierarchy(std::string_view text) { return hierarchy_from_json(parse_json(text)); }

inline OrderedJson hierarchy_to_json(const ObjectHierarchy& h) {
  OrderedJson j;
  j["objects"] = detail::list(h.objects);
  j["ids"] = OrderedJson::object();
  for (const auto& [o, id] : h.ids) j["ids"][o] = id;
  j["arcs"] = OrderedJson::array();
  for (const auto& [a, b] : h.arcs) j["arcs"].push_back({a, b});
  return j;
}

inline SubjectKnowledge subject_from_json(const Json& j) {
  detail::require_object(j, "subject", {"known_keys", "id_set", "has_k0"});
  SubjectKnowledge s;
  if (j.contains("known_keys")) {
    if (!j["known_keys"].is_object()) detail::schema_error("known_keys", "expected an object of hex keys");
    for (const auto& [o, k] : j["known_keys"].items()) {
      s.known_keys[o] = key_from_hex(detail::as_string(k, "known_keys." + o));
    }
  }
  if (j.contains("id_set")) s.id_set = detail::string_set(j["id_set"], "id_set");
  if (j.contains("has_k0")) {
    if (!j["has_k0"].is_boolean()) detail::schema_error("has_k0", "expected a boolean");
    s.has_k0 = j["has_k0"].get<bool>();
  }
  return s;
}

inline SubjectKnowledge parse_subject(std::string_view text) { return subject_from_json(parse_json(text)); }

inline AccessMode access_mode_from_string(std::string_view s) {
  if (s == "mandatory") return AccessMode::kMandatory;
  if (s == "discretionary") return AccessMode::kDiscretionary;
  if (s == "both") return AccessMode::kBoth;
  throw Error(ErrorKind::kSchema, "unknown access mode " + std::string(s));
}

inline SharingMode sharing_mode_from_string(std::string_view s) {
  if (s == "any_path") return SharingMode::kAnyPath;
  if (s == "all_paths") return SharingMode::kAllPaths;
  throw Error(ErrorKind::kSchema, "unknown sharing mode " + std::string(s));
}

inline Adversary adversary_from_string(std::string_view s) {
  if (s == "none") return Adversary::kNone;
  if (s == "intercept_substitute_child") return Adversary::kInterceptSubstituteChild;
  if (s == "forge_substitute_parent") return Adversary::kForgeSubstituteParent;
  throw Error(ErrorKind::kSchema, "unknown adversary " + std::string(s));
}

/// Scenario document: the hierarchy, k0 in hex, the requested change, the
/// adversary, whether step 2 runs, and the seed. Initial keys are derived
/// from the hierarchy and k0.
inline Scenario scenario_from_json(const Json& j) {
  detail::require_object(j, "scenario",
                         {"hierarchy", "k0", "parent", "child", "new_id", "adversary", "step2", "seed"});
  for (const char* required : {"hierarchy", "k0", "parent", "child", "new_id"}) {
    if (!j.contains(required)) detail::schema_error("scenario", std::string("missing \"") + required + "\"");
  }
  Scenario s;
  s.hierarchy = hierarchy_from_json(j["hierarchy"]);
  Key k0 = key_from_hex(detail::as_string(j["k0"], "k0"));
  s.request = {detail::as_string(j["parent"], "parent"), detail::as_string(j["child"], "child"),
               detail::as_string(j["new_id"], "new_id")};
  if (j.contains("adversary")) s.adversary = adversary_from_string(detail::as_string(j["adversary"], "adversary"));
  if (j.contains("step2")) {
    if (!j["step2"].is_boolean()) detail::schema_error("step2", "expected a boolean");
    s.step2_enabled = j["step2"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) detail::schema_error("seed", "expected an unsigned integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.keys = derive_keys(s.hierarchy, k0);
  return s;
}

inline Scenario parse_scenario(std::string_view text) { return scenario_from_json(parse_json(text)); }

// ---------------------------------------------------------------------------
// MAC lattices and dominance queries

inline MacLattice mac_lattice_from_json(const Json& j) {
  detail::require_object(j, "mac", {"levels", "categories"});
  if (!j.contains("levels") || !j["levels"].is_array()) detail::schema_error("levels", "expected a list");
  std::vector<std::string> levels;
  for (const auto& l : j["levels"]) levels.push_back(detail::as_string(l, "levels"));
  std::set<std::string> cats;
  if (j.contains("categories")) cats = detail::string_set(j["categories"], "categories");
  return MacLattice(std::move(levels), std::move(cats));
}

inline MacLattice parse_mac_lattice(std::string_view text) { return mac_lattice_from_json(parse_json(text)); }

struct DominanceQuery {
  ProductLabel subject;
  ProductLabel object;
};

inline ProductLabel product_label_from_json(const Json& j, const ProductLattice& lattice, const std::string& where) {
  detail::require_object(j, where, {"level", "categories", "role"});
  if (!j.contains("level") || !j.contains("role")) detail::schema_error(where, "needs level and role");
  std::set<std::string> cats;
  if (j.contains("categories")) cats = detail::string_set(j["categories"], where + ".categories");
  return lattice.label(detail::as_string(j["level"], where + ".level"), std::move(cats),
                       detail::as_string(j["role"], where + ".role"));
}

/// Query document: a list of {"subject": label, "object": label}.
inline std::vector<DominanceQuery> parse_queries(std::string_view text, const ProductLattice& lattice) {
  Json j = parse_json(text);
  if (!j.is_array()) detail::schema_error("queries", "expected a list");
  std::vector<DominanceQuery> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string where = "queries[" + std::to_string(i) + "]";
    detail::require_object(j[i], where, {"subject", "object"});
    if (!j[i].contains("subject") || !j[i].contains("object")) {
      detail::schema_error(where, "needs subject and object");
    }
    out.push_back({product_label_from_json(j[i]["subject"], lattice, where + ".subject"),
                   product_label_from_json(j[i]["object"], lattice, where + ".object")});
  }
  return out;
}

}  // namespace rolegraph::io
