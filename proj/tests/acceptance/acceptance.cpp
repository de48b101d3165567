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

// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rolegraph/rolegraph.hpp"
#include "support/generators.hpp"
#include "support/lattice_laws.hpp"
#include "support/oracles.hpp"
#include "support/sha_vectors.hpp"

namespace rolegraph::acceptance {
namespace {

using testing::Rng;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

// Shared corpus for criteria 1-3: every algorithm applied to the same models.
constexpr std::size_t kModels = 1000;

struct Converted {
  RbacModel input;
  std::vector<Conversion> outputs;  // parallel to algorithm_names()
};

struct Corpus {
  std::vector<Converted> items;
  double seconds = 0;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    Rng rng(1001);
    auto start = Clock::now();
    for (std::size_t i = 0; i < kModels; ++i) {
      Converted item{testing::random_model(rng), {}};
      for (const auto& algo : algorithm_names()) item.outputs.push_back(compose(item.input, {algo}));
      out.items.push_back(std::move(item));
    }
    out.seconds = seconds_since(start);
    return out;
  }();
  return c;
}

Verdict equivalence_preservation() {
  const auto& c = corpus();
  std::size_t bad = 0, checks = 0;
  for (const auto& item : c.items) {
    for (const auto& out : item.outputs) {
      ++checks;
      if (!validate(out.model).empty() || !models_equivalent(item.input, out.model) ||
          !oracle::equivalent(item.input, out.model)) {
        ++bad;
      }
    }
  }
  const double limit = 60.0;
  std::ostringstream os;
  os << c.items.size() << " models x " << algorithm_names().size() << " algorithms, " << bad << "/" << checks
     << " not equivalent, conversions took " << fmt_seconds(c.seconds) << " (limit " << limit << " s)";
  return {bad == 0 && c.seconds < limit, os.str()};
}

Verdict conversion_class() {
  const auto& c = corpus();
  const auto& names = algorithm_names();
  std::size_t bad = 0, checks = 0;
  for (const auto& item : c.items) {
    for (std::size_t a = 0; a < names.size(); ++a) {
      ++checks;
      auto actual = oracle::conversion_class(item.input, item.outputs[a].model);
      bool strict = names[a] == "II" || names[a] == "III" || names[a] == "IV";
      auto required = strict ? ConversionClass::kRpEquivalent : ConversionClass::kRpAdmissible;
      if (!satisfies(actual, required) || !satisfies(actual, item.outputs[a].report.claimed_class)) ++bad;
    }
  }
  std::ostringstream os;
  os << checks << " conversions checked by path enumeration, " << bad << " below the required class";
  return {bad == 0, os.str()};
}

Verdict feature_matrix() {
  const auto& c = corpus();
  const auto& names = algorithm_names();
  std::size_t bad = 0, checks = 0;
  for (const auto& item : c.items) {
    for (std::size_t a = 0; a < names.size(); ++a) {
      ++checks;
      auto flags = oracle::flags(item.outputs[a].model);
      if (!flags.includes(guaranteed_features(names[a])) || !(flags == item.outputs[a].report.output_flags)) ++bad;
    }
  }
  std::ostringstream os;
  os << checks << " outputs, " << bad << " missing a guaranteed feature or misreporting flags";
  return {bad == 0, os.str()};
}

Verdict transitive_reduction() {
  Rng rng(1004);
  constexpr std::size_t kDags = 500;
  constexpr std::size_t kMaxArcs = 12;
  std::size_t done = 0, bad = 0;
  while (done < kDags) {
    std::size_t n = testing::uniform(rng, 1, 8);
    auto arcs = testing::random_dag_arcs(rng, n, std::uniform_real_distribution<double>(0.1, 0.7)(rng));
    if (arcs.size() > kMaxArcs) continue;
    RbacModel m;
    for (std::size_t i = 0; i < n; ++i) m.roles.insert(testing::role_name(i));
    for (auto [a, b] : arcs) m.arcs.emplace(testing::role_name(a), testing::role_name(b));
    auto reduced = transitive_reduce(m).model.arcs;
    auto minimal = oracle::minimal_equivalent_arc_sets(n, arcs);
    std::set<oracle::Arc> got;
    for (const auto& [a, b] : reduced) got.emplace(std::stoul(a.substr(1)), std::stoul(b.substr(1)));
    if (minimal.size() != 1 || minimal.front() != got) ++bad;
    ++done;
  }
  std::ostringstream os;
  os << done << " DAGs (<= 8 nodes, <= " << kMaxArcs << " arcs), " << bad << " differ from the exhaustive minimum";
  return {bad == 0, os.str()};
}

RbacModel risk_ready(const RbacModel& m) {
  return is_tree_like(m) && is_leaf(m) ? m : compose(m, {"III+I"}).model;
}

bool holds_any(const RbacModel& m) {
  for (const auto& [r, ps] : m.role_permissions) {
    if (!ps.empty()) return true;
  }
  return false;
}

Verdict risk_normalization() {
  Rng rng(1005);
  std::size_t done = 0, bad_sum = 0, bad_matrix = 0, matrices = 0;
  while (done < kModels) {
    RbacModel m = testing::random_model(rng);
    if (!holds_any(m)) continue;
    ++done;
    RiskReport r = leakage_risks(m);
    Rational sum = 0;
    for (const auto& [p, v] : r.risks) sum += v;
    if (sum != 1) ++bad_sum;
    RbacModel t = risk_ready(m);
    for (const auto& mat : pairwise_matrices(relative_coefficients(extend_tree(t), t))) {
      ++matrices;
      if (!mat.reciprocal() || !mat.consistent()) ++bad_matrix;
    }
  }
  std::ostringstream os;
  os << done << " models, " << bad_sum << " with risk sum != 1 (exact rationals), " << bad_matrix << "/" << matrices
     << " comparison matrices not reciprocal and consistent";
  return {bad_sum == 0 && bad_matrix == 0, os.str()};
}

Verdict risk_oracle() {
  Rng rng(1006);
  std::size_t done = 0, bad = 0;
  while (done < kModels) {
    RbacModel m = testing::random_model(rng, {6, 6, 0, false});
    if (!holds_any(m)) continue;
    ++done;
    auto expected = oracle::path_risks(risk_ready(m));
    for (const auto& [p, v] : leakage_risks(m).risks) {
      auto it = expected.find(p);
      if (v != (it == expected.end() ? Rational(0) : it->second)) {
        ++bad;
        break;
      }
    }
  }
  RbacModel worked;
  worked.roles = {"root", "r1", "r2"};
  worked.permissions = {"a", "b", "c"};
  worked.arcs = {{"root", "r1"}, {"root", "r2"}};
  worked.role_permissions = {{"r1", {"a"}}, {"r2", {"a", "b", "c"}}};
  auto w = leakage_risks(worked).risks;
  bool example = w.at("a") == Rational(1, 2) && w.at("b") == Rational(1, 4) && w.at("c") == Rational(1, 4);
  std::ostringstream os;
  os << done << " models (<= 6 roles), " << bad << " differ from path enumeration; worked example "
     << (example ? "1/2, 1/4, 1/4" : "WRONG");
  return {bad == 0 && example, os.str()};
}

Verdict key_derivation() {
  std::size_t bad_vectors = 0;
  for (const auto& v : testing::chain_vectors()) {
    ObjectHierarchy h;
    for (std::size_t i = 0; i < v.ids.size(); ++i) {
      ObjectId o = "o" + std::to_string(i);
      h.objects.insert(o);
      h.ids[o] = v.ids[i];
      if (i > 0) h.arcs.emplace("o" + std::to_string(i - 1), o);
    }
    auto keys = derive_keys(h, key_from_hex(v.k0_hex)).keys;
    if (to_hex(keys.at("o" + std::to_string(v.ids.size() - 1))) != v.key_hex) ++bad_vectors;
  }
  Rng rng(1007);
  constexpr int kGraphs = 500;
  std::size_t bad = 0, trees = 0;
  for (int i = 0; i < kGraphs; ++i) {
    ObjectHierarchy h = testing::random_hierarchy(rng, {8, i % 2 == 0});
    Key k0 = testing::random_key(rng);
    auto candidates = oracle::all_chain_keys(h, k0);
    bool tree = true;
    for (const auto& o : h.objects) {
      tree = tree && std::count_if(h.arcs.begin(), h.arcs.end(), [&](const auto& a) { return a.second == o; }) <= 1;
    }
    bool unique = std::all_of(candidates.begin(), candidates.end(), [](const auto& kv) {
      std::set<Key> distinct(kv.second.begin(), kv.second.end());
      return distinct.size() == 1;
    });
    bool derived = true;
    try {
      auto keys = derive_keys(h, k0).keys;
      for (const auto& [o, k] : keys) derived = derived && k == candidates.at(o).front();
    } catch (const Error& e) {
      derived = false;
      if (e.kind() != ErrorKind::kNotUnique) ++bad;
    }
    trees += tree;
    if (tree != unique || derived != tree) ++bad;
  }
  std::size_t vectors = testing::chain_vectors().size();
  std::ostringstream os;
  os << vectors << " SHA-256 chain vectors (" << bad_vectors << " wrong); uniqueness iff tree on " << kGraphs
     << " graphs (" << trees << " trees), " << bad << " violations";
  return {vectors >= 20 && bad_vectors == 0 && bad == 0, os.str()};
}

Verdict generalized_keys() {
  Rng rng(1008);
  constexpr int kGraphs = 300;
  std::size_t classes = 0, bad_any = 0, bad_all = 0, subsets = 0;
  for (int i = 0; i < kGraphs; ++i) {
    ObjectHierarchy h = testing::random_hierarchy(rng, {7, false});
    Key k0 = testing::random_key(rng);
    auto any = distribute_keys(h, k0, SharingMode::kAnyPath, rng);
    auto all = distribute_keys(h, k0, SharingMode::kAllPaths, rng);
    for (const auto& [o, clones] : any.id_classes) {
      if (clones.size() < 2) continue;
      ++classes;
      for (const auto& c : clones) {
        if (unwrap_any_path(any.wraps.at({o, c.clone}), c.chain_key) != any.keys.at(o)) ++bad_any;
      }
      const auto& shares = all.id_classes.at(o);
      if (shares.size() > 16) continue;
      const std::uint32_t full = (1u << shares.size()) - 1;
      for (std::uint32_t s = 0; s <= full; ++s) {
        std::vector<Key> picked;
        for (std::size_t k = 0; k < shares.size(); ++k) {
          if (s >> k & 1u) picked.push_back(shares[k].chain_key);
        }
        bool opens = combine_all_paths(picked) == all.keys.at(o);
        if (s == full ? !opens : opens) ++bad_all;
        subsets += s != full;
      }
    }
  }
  std::ostringstream os;
  os << classes << " multi-clone objects on " << kGraphs << " DAGs: " << bad_any << " any_path unwrap failures, "
     << bad_all << " all_paths errors over " << subsets << " proper subsets";
  return {classes > 0 && bad_any == 0 && bad_all == 0, os.str()};
}

Verdict access_decisions() {
  Rng rng(1009);
  constexpr int kHierarchies = 500;
  constexpr int kSubjects = 4;
  std::size_t decisions = 0, bad = 0;
  for (int i = 0; i < kHierarchies; ++i) {
    ObjectHierarchy h = testing::random_hierarchy(rng, {8, true});
    KeyTable t = derive_keys(h, testing::random_key(rng));
    for (int s = 0; s < kSubjects; ++s) {
      SubjectKnowledge subject;
      subject.has_k0 = testing::coin(rng, 0.5);
      for (const auto& o : h.objects) {
        if (testing::coin(rng, 0.6)) subject.id_set.insert(h.id(o));
        if (testing::coin(rng, 0.2)) {
          subject.known_keys[o] = testing::coin(rng, 0.8) ? t.keys.at(o) : testing::random_key(rng);
        }
      }
      for (auto mode : {AccessMode::kMandatory, AccessMode::kDiscretionary, AccessMode::kBoth}) {
        for (const auto& o : h.objects) {
          ++decisions;
          if (can_access(h, t, subject, o, mode) != oracle::access(h, t, subject, o, mode)) ++bad;
        }
      }
    }
  }
  std::ostringstream os;
  os << decisions << " decisions on " << kHierarchies << " trees x " << kSubjects << " subjects x 3 modes, " << bad
     << " disagree with the path oracle";
  return {bad == 0, os.str()};
}

Verdict key_change_attacks() {
  ObjectHierarchy h;
  h.objects = {"O1", "O2", "O3", "O4"};
  for (const auto& o : h.objects) h.ids[o] = o;
  h.arcs = {{"O1", "O2"}, {"O1", "O3"}, {"O2", "O4"}};
  std::multiset<std::string> outcomes;
  bool replay = true;
  for (auto adversary : {Adversary::kInterceptSubstituteChild, Adversary::kForgeSubstituteParent}) {
    for (bool step2 : {true, false}) {
      Scenario s;
      s.hierarchy = h;
      s.keys = derive_keys(h, key_from_hex(testing::chain_vectors()[3].k0_hex));
      s.request = {"O1", "O2", "O2v2"};
      s.adversary = adversary;
      s.step2_enabled = step2;
      s.seed = 7;
      Transcript first = run_scenario(s);
      replay = replay && first.to_text() == run_scenario(s).to_text();
      outcomes.insert(std::string(to_string(first.outcome)));
    }
  }
  std::multiset<std::string> want = {"aborted_auth_failure", "aborted_auth_failure", "compromised", "compromised"};
  std::ostringstream os;
  os << "outcomes {";
  for (auto it = outcomes.begin(); it != outcomes.end(); ++it) os << (it == outcomes.begin() ? "" : ", ") << *it;
  os << "}, transcripts " << (replay ? "replay byte-identically" : "DIFFER on replay");
  return {outcomes == want && replay, os.str()};
}

Verdict lattice_laws() {
  constexpr std::size_t kMaxElements = 36;
  Rng rng(1011);
  std::size_t lattices = 0, violations = 0, order_checks = 0, order_bad = 0;
  std::string first;
  auto record = [&](const std::optional<std::string>& v) {
    ++lattices;
    if (v) {
      ++violations;
      if (first.empty()) first = *v;
    }
  };
  record(oracle::lattice_violation(MacLattice({"low", "mid", "high"}, {"x", "y", "z"})));
  for (int i = 0; i < 100; ++i) {
    RbacModel m = testing::random_model(rng, {8, 3, 0, i % 2 == 0});
    RoleLattice roles(m);
    if (roles.size() > kMaxElements) continue;
    record(oracle::lattice_violation(roles));
  }
  for (int i = 0; i < 60; ++i) {
    std::size_t levels = testing::uniform(rng, 1, 3);
    std::size_t cats = testing::uniform(rng, 0, 2);
    std::vector<std::string> level_names;
    for (std::size_t l = 0; l < levels; ++l) level_names.push_back("L" + std::to_string(l));
    std::set<std::string> cat_names;
    for (std::size_t c = 0; c < cats; ++c) cat_names.insert("c" + std::to_string(c));
    RbacModel m = testing::random_model(rng, {4, 2, 0, i % 2 == 0});
    RbacModel tree = is_tree_like(m) ? m : compose(m, {"III"}).model;
    ProductLattice p(MacLattice(level_names, cat_names), RoleLattice(m));
    auto xs = p.elements();
    if (xs.size() > kMaxElements) continue;
    record(oracle::lattice_violation(p));
    for (const auto& a : xs) {
      for (const auto& b : xs) {
        ++order_checks;
        if (product_dominates(p, a, b) != oracle::product_dominates(p, tree, a, b)) ++order_bad;
      }
    }
  }
  std::ostringstream os;
  os << lattices << " lattices (<= " << kMaxElements << " elements), " << violations << " law violations"
     << (first.empty() ? "" : " (" + first + ")") << "; " << order_bad << "/" << order_checks
     << " dominance checks differ";
  return {violations == 0 && order_bad == 0, os.str()};
}

Verdict risk_scalability() {
  Rng rng(1012);
  RbacModel m = testing::random_tree_leaf_model(rng, 200, 200);
  auto start = Clock::now();
  RiskReport r = leakage_risks(m);
  double elapsed = seconds_since(start);
  Rational sum = 0;
  for (const auto& [p, v] : r.risks) sum += v;
  const double limit = 10.0;
  std::ostringstream os;
  os << "200 roles x 200 permissions in " << fmt_seconds(elapsed) << " (limit " << limit << " s), sum "
     << (sum == 1 ? "= 1" : "!= 1");
  return {elapsed < limit && sum == 1, os.str()};
}

struct Criterion {
  int number;
  const char* name;
  std::function<Verdict()> check;
};

}  // namespace

int run() {
  const std::vector<Criterion> criteria = {
      {1, "equivalence preservation", equivalence_preservation},
      {2, "conversion class", conversion_class},
      {3, "guaranteed features", feature_matrix},
      {4, "transitive reduction", transitive_reduction},
      {5, "risk normalization", risk_normalization},
      {6, "risk path oracle", risk_oracle},
      {7, "hierarchical key derivation", key_derivation},
      {8, "generalized key sharing", generalized_keys},
      {9, "access decisions", access_decisions},
      {10, "key change attacks", key_change_attacks},
      {11, "lattice laws", lattice_laws},
      {12, "risk scalability", risk_scalability},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    auto start = Clock::now();
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << c.number << " " << c.name << ": " << v.detail << " ["
              << fmt_seconds(seconds_since(start)) << "]" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

}  // namespace rolegraph::acceptance

int main() { return rolegraph::acceptance::run(); }
