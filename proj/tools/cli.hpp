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
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rolegraph/rolegraph.hpp"

namespace rolegraph::cli {

enum ExitCode : int {
  kOk = 0,
  kIoFailure = 1,
  kSyntaxError = 2,
  kSchemaError = 3,
  kSemanticError = 4,
  kAlgorithmFailure = 5,
  kUsageError = 64,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSyntax: return kSyntaxError;
    case ErrorKind::kSchema:
    case ErrorKind::kUnknownAlgorithm: return kSchemaError;
    case ErrorKind::kBudgetExceeded:
    case ErrorKind::kVerificationFailed: return kAlgorithmFailure;
    default: return kSemanticError;
  }
}

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  std::size_t node_budget = 10000;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

/// Parses and validates a policy; invalid models raise kInvalidModel.
inline RbacModel load_policy(const std::string& path) {
  RbacModel m = io::parse_policy(read_file(path));
  require_valid(m);
  return m;
}

inline Key resolve_k0(const std::string& flag) {
  if (!flag.empty()) return key_from_hex(flag);
  if (const char* env = std::getenv("ROLEGRAPH_K0"); env != nullptr) return key_from_hex(env);
  throw Error(ErrorKind::kSchema, "k0 missing: pass --k0 or set ROLEGRAPH_K0");
}

inline std::uint64_t seed_or_random(const GlobalOptions& g) {
  if (g.seed) return *g.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

}  // namespace detail

/// Runs one command line. Everything the command emits goes to `out`;
/// diagnostics and conversion reports without a target file go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"RBAC role-graph conversions, leakage risks, hierarchical keys and label lattices",
               "rolegraph"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every random choice");
  app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--node-budget", global.node_budget, "Maximum roles or objects an unfolding may create");

  std::string policy_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a policy document");
  validate_cmd->add_option("policy", policy_path, "Policy document")->required();

  auto* flags_cmd = app.add_subcommand("flags", "Report hierarchy features of a policy");
  flags_cmd->add_option("policy", policy_path, "Policy document")->required();

  std::string algorithm;
  std::string output_path;
  std::string report_path;
  auto* optimize_cmd = app.add_subcommand("optimize", "Convert a policy to an equivalent optimized one");
  optimize_cmd->add_option("policy", policy_path, "Policy document")->required();
  optimize_cmd->add_option("--algorithm", algorithm, "Algorithm or preset")
      ->required()
      ->check(CLI::IsMember(algorithm_names()));
  optimize_cmd->add_option("-o,--output", output_path, "Converted policy (default: stdout)");
  optimize_cmd->add_option("--report", report_path, "Conversion report (default: stderr)");

  auto* risk_cmd = app.add_subcommand("risk", "Rank permissions by leakage risk");
  risk_cmd->add_option("policy", policy_path, "Policy document")->required();

  std::string hierarchy_path;
  std::string k0_hex;
  bool generalized = false;
  std::string sharing = "any_path";
  auto* keys_cmd = app.add_subcommand("keys", "Derive access keys for an object hierarchy");
  keys_cmd->add_option("hierarchy", hierarchy_path, "Hierarchy document")->required();
  keys_cmd->add_option("--k0", k0_hex, "Root secret as 64 hex characters (or ROLEGRAPH_K0)");
  keys_cmd->add_flag("--generalized", generalized, "Allow DAG hierarchies through clone trees");
  keys_cmd->add_option("--sharing", sharing, "Class key sharing for clones")
      ->check(CLI::IsMember({"any_path", "all_paths"}));

  std::string subject_path;
  std::string target;
  std::string mode = "mandatory";
  auto* access_cmd = app.add_subcommand("access", "Decide access from a subject's key knowledge");
  access_cmd->add_option("hierarchy", hierarchy_path, "Hierarchy document")->required();
  access_cmd->add_option("--subject", subject_path, "Subject knowledge document")->required();
  access_cmd->add_option("--k0", k0_hex, "Root secret as 64 hex characters (or ROLEGRAPH_K0)");
  access_cmd->add_option("--target", target, "Single object to decide (default: all)");
  access_cmd->add_option("--mode", mode, "Access control mode")
      ->check(CLI::IsMember({"mandatory", "discretionary", "both"}));

  std::string scenario_path;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a key-change protocol scenario");
  simulate_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();

  std::string mac_path;
  std::string queries_path;
  auto* combine_cmd = app.add_subcommand("combine", "Answer dominance queries in the MAC x role lattice");
  combine_cmd->add_option("--mac", mac_path, "MAC lattice document")->required();
  combine_cmd->add_option("--policy", policy_path, "Policy document")->required();
  combine_cmd->add_option("--queries", queries_path, "Query document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  const bool json = global.format == "json";
  OptimizerOptions options{global.node_budget};
  try {
    if (validate_cmd->parsed()) {
      RbacModel m = io::parse_policy(detail::read_file(policy_path));
      Diagnostics d = validate(m);
      if (json) {
        io::OrderedJson j;
        j["valid"] = d.empty();
        j["errors"] = io::OrderedJson::array();
        for (const auto& e : d.errors) j["errors"].push_back({{"code", e.code}, {"message", e.message}, {"ids", e.ids}});
        out << j.dump(2) << "\n";
      } else if (d.empty()) {
        out << "ok\n";
      } else {
        for (const auto& e : d.errors) {
          std::string ids;
          for (const auto& i : e.ids) ids += (ids.empty() ? "" : ",") + i;
          out << e.code << '\t' << e.message << '\t' << ids << '\n';
        }
      }
      return d.empty() ? kOk : kSemanticError;
    }

    if (flags_cmd->parsed()) {
      HierarchyFlags f = hierarchy_flags(detail::load_policy(policy_path));
      if (json) {
        out << io::flags_to_json(f).dump(2) << "\n";
      } else {
        f.for_each([&](const char* name, bool v) { out << name << '\t' << (v ? "true" : "false") << '\n'; });
      }
      return kOk;
    }

    if (optimize_cmd->parsed()) {
      RbacModel input = detail::load_policy(policy_path);
      Conversion c = compose(input, {algorithm}, options);
      verify_conversion(input, c);
      std::string report = json ? io::report_to_json(c.report).dump(2) + "\n" : io::report_to_text(c.report);
      detail::write_output(output_path, io::serialize_policy(c.model), out);
      detail::write_output(report_path, report, err);
      return kOk;
    }

    if (risk_cmd->parsed()) {
      RiskReport r = leakage_risks(detail::load_policy(policy_path), options);
      if (json) {
        io::OrderedJson j = io::OrderedJson::array();
        for (const auto& p : r.ranking) {
          j.push_back({{"permission", p}, {"risk", r.risks.at(p).str()}, {"decimal", format_decimal(r.risks.at(p), 6)}});
        }
        out << j.dump(2) << "\n";
      } else {
        for (const auto& p : r.ranking) {
          out << p << '\t' << r.risks.at(p).str() << '\t' << format_decimal(r.risks.at(p), 6) << '\n';
        }
      }
      return kOk;
    }

    if (keys_cmd->parsed()) {
      ObjectHierarchy h = io::parse_hierarchy(detail::read_file(hierarchy_path));
      require_valid(h);
      Key k0 = detail::resolve_k0(k0_hex);
      KeyTable t;
      if (generalized) {
        std::mt19937_64 rng(detail::seed_or_random(global));
        t = distribute_keys(h, k0, io::sharing_mode_from_string(sharing), rng, global.node_budget);
      } else {
        t = derive_keys(h, k0);
      }
      if (json) {
        io::OrderedJson j;
        j["keys"] = io::OrderedJson::object();
        for (const auto& [o, k] : t.keys) j["keys"][o] = to_hex(k);
        j["classes"] = io::OrderedJson::object();
        for (const auto& [o, clones] : t.id_classes) {
          for (const auto& c : clones) j["classes"][o][c.clone] = to_hex(c.chain_key);
        }
        j["wraps"] = io::OrderedJson::object();
        for (const auto& [pos, w] : t.wraps) j["wraps"][pos.first][pos.second] = to_hex(w);
        out << j.dump(2) << "\n";
      } else {
        for (const auto& [o, k] : t.keys) out << o << '\t' << to_hex(k) << '\n';
      }
      return kOk;
    }

    if (access_cmd->parsed()) {
      ObjectHierarchy h = io::parse_hierarchy(detail::read_file(hierarchy_path));
      require_valid(h);
      SubjectKnowledge s = io::parse_subject(detail::read_file(subject_path));
      KeyTable t = derive_keys(h, detail::resolve_k0(k0_hex));
      AccessMode m = io::access_mode_from_string(mode);
      std::vector<ObjectId> targets;
      if (!target.empty()) {
        targets.push_back(target);
      } else {
        targets.assign(h.objects.begin(), h.objects.end());
      }
      io::OrderedJson j = io::OrderedJson::object();
      for (const auto& o : targets) {
        bool granted = can_access(h, t, s, o, m);
        if (json) {
          j[o] = granted;
        } else {
          out << o << '\t' << (granted ? "granted" : "denied") << '\n';
        }
      }
      if (json) out << j.dump(2) << "\n";
      return kOk;
    }

    if (simulate_cmd->parsed()) {
      Scenario s = io::parse_scenario(detail::read_file(scenario_path));
      if (global.seed) s.seed = *global.seed;
      Transcript tr = run_scenario(s);
      if (json) {
        io::OrderedJson j;
        j["log"] = io::OrderedJson::array();
        for (const auto& m : tr.log) {
          j["log"].push_back({{"seq", m.seq}, {"sender", m.sender}, {"receiver", m.receiver},
                              {"kind", m.kind}, {"summary", m.summary}});
        }
        j["outcome"] = std::string(to_string(tr.outcome));
        out << j.dump(2) << "\n";
      } else {
        out << tr.to_text();
      }
      return kOk;
    }

    if (combine_cmd->parsed()) {
      MacLattice mac = io::parse_mac_lattice(detail::read_file(mac_path));
      ProductLattice lattice(std::move(mac), RoleLattice(detail::load_policy(policy_path), options));
      auto queries = io::parse_queries(detail::read_file(queries_path), lattice);
      io::OrderedJson j = io::OrderedJson::array();
      for (std::size_t i = 0; i < queries.size(); ++i) {
        bool d = product_dominates(lattice, queries[i].subject, queries[i].object);
        if (json) {
          j.push_back(d);
        } else {
          out << i << '\t' << lattice.describe(queries[i].subject) << '\t'
              << lattice.describe(queries[i].object) << '\t' << (d ? "true" : "false") << '\n';
        }
      }
      if (json) out << j.dump(2) << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kOk;
}

}  // namespace rolegraph::cli
