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
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rolegraph/error.hpp"
#include "rolegraph/hbakd.hpp"
#include "rolegraph/sha256.hpp"

namespace rolegraph {

/// Re-identifies `child` and re-derives its key and every descendant key.
/// Keys outside the child's subtree are untouched.
inline KeyTable apply_key_change(const KeyTable& table, const ObjectHierarchy& h,
                                 const ObjectId& child, const std::string& new_id) {
  if (!h.objects.count(child)) throw Error(ErrorKind::kUnknownId, "unknown object " + child);
  for (const auto& [o, id] : h.ids) {
    if (o != child && id == new_id) {
      throw Error(ErrorKind::kIdCollision, "identifier " + new_id + " already names " + o);
    }
  }
  ObjectHierarchy updated = h;
  updated.ids[child] = new_id;
  ObjectGraph g = object_graph(updated);
  auto v = *g.find(child);
  if (g.predecessors(v).size() > 1) {
    throw Error(ErrorKind::kNotUnique, "object " + child + " has several parents; its key is not unique");
  }
  KeyTable out = table;
  auto parents = g.predecessors(v);
  const Key base = parents.empty() ? table.k0 : table.keys.at(g.key(parents.front()));
  std::vector<std::pair<std::size_t, Key>> stack{{v, base}};
  while (!stack.empty()) {
    auto [w, parent_key] = stack.back();
    stack.pop_back();
    Key k = hash_concat(parent_key, updated.id(g.key(w)));
    out.keys[g.key(w)] = k;
    out.id_classes[g.key(w)] = {{g.key(w), k}};
    for (auto c : g.successors(w)) stack.emplace_back(c, k);
  }
  return out;
}

inline ObjectHierarchy with_identifier(ObjectHierarchy h, const ObjectId& object, const std::string& id) {
  h.ids[object] = id;
  return h;
}

enum class Adversary { kNone, kInterceptSubstituteChild, kForgeSubstituteParent };
enum class Outcome { kKeyChanged, kAbortedAuthFailure, kCompromised };

constexpr std::string_view to_string(Adversary a) {
  switch (a) {
    case Adversary::kNone: return "none";
    case Adversary::kInterceptSubstituteChild: return "intercept_substitute_child";
    case Adversary::kForgeSubstituteParent: return "forge_substitute_parent";
  }
  return "none";
}

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kKeyChanged: return "key_changed";
    case Outcome::kAbortedAuthFailure: return "aborted_auth_failure";
    case Outcome::kCompromised: return "compromised";
  }
  return "aborted_auth_failure";
}

struct KeyChangeRequest {
  ObjectId parent;
  ObjectId child;
  std::string new_id;
};

struct Scenario {
  ObjectHierarchy hierarchy;
  KeyTable keys;
  KeyChangeRequest request;
  Adversary adversary = Adversary::kNone;
  bool step2_enabled = true;
  std::uint64_t seed = 0;
};

struct LoggedMessage {
  std::size_t seq = 0;
  std::string sender;
  std::string receiver;
  std::string kind;
  std::string summary;
};

struct Transcript {
  std::vector<LoggedMessage> log;
  Outcome outcome = Outcome::kAbortedAuthFailure;
  /// Key held by each honest party for the child object after the run.
  Key parent_view{};
  Key child_view{};
  /// Updated hierarchy and key table, present when the key was changed.
  std::optional<ObjectHierarchy> hierarchy;
  std::optional<KeyTable> keys;

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& m : log) {
      os << m.seq << '\t' << m.sender << '\t' << m.receiver << '\t' << m.kind << '\t' << m.summary << '\n';
    }
    os << "outcome\t" << to_string(outcome) << '\n';
    return os.str();
  }
};

namespace detail {

struct Message {
  std::string from;
  std::string to;
  std::string kind;
  std::string new_id{};
  Key nonce{};
  Key proof{};
  Key payload{};
};

inline std::string short_hex(const Key& k) { return to_hex(std::span(k).first(8)); }

inline Key proof_digest(const Key& child_key, std::string_view role, const Key& nonce,
                        std::string_view bound = {}) {
  return Sha256().update(child_key).update(role).update(nonce).update(bound).finish();
}

inline Key transport_mask(const Key& child_key, const Key& nonce_p, const Key& nonce_c) {
  return Sha256().update(child_key).update("rekey").update(nonce_p).update(nonce_c).finish();
}

/// One scenario run. Messages travel through an ordered in-memory queue; the
/// adversary sits on the queue and captures messages addressed to the party
/// it impersonates.
class KeyChangeRun {
 public:
  explicit KeyChangeRun(const Scenario& s) : s_(s), rng_(s.seed) {
    const auto& h = s.hierarchy;
    if (!h.arcs.count({s.request.parent, s.request.child})) {
      throw Error(ErrorKind::kNotAnArc, "(" + s.request.parent + ", " + s.request.child + ") is not an arc");
    }
    parent_key_ = s.keys.keys.at(s.request.parent);
    child_key_ = s.keys.keys.at(s.request.child);
    parent_view_ = child_key_;
    child_view_ = child_key_;
  }

  Transcript run() {
    if (s_.adversary == Adversary::kForgeSubstituteParent) {
      adversary_start();
    } else {
      parent_start();
    }
    while (!queue_.empty()) {
      Message m = std::move(queue_.front());
      queue_.pop_front();
      deliver(m);
    }
    return finish();
  }

 private:
  static constexpr std::string_view kParent = "parent";
  static constexpr std::string_view kChild = "child";
  static constexpr std::string_view kAdversary = "adversary";

  Key random_key() {
    Key k{};
    for (auto& b : k) b = static_cast<std::uint8_t>(rng_() & 0xffu);
    return k;
  }

  void send(Message m, std::string summary) {
    transcript_.log.push_back({transcript_.log.size() + 1, m.from, m.to, m.kind, std::move(summary)});
    queue_.push_back(std::move(m));
  }

  bool captured(const Message& m) const {
    switch (s_.adversary) {
      case Adversary::kInterceptSubstituteChild: return m.to == kChild;
      case Adversary::kForgeSubstituteParent: return m.to == kParent;
      case Adversary::kNone: return false;
    }
    return false;
  }

  void deliver(const Message& m) {
    if (captured(m)) {
      adversary_receive(m);
    } else if (m.to == kParent) {
      parent_receive(m);
    } else if (m.to == kChild) {
      child_receive(m);
    }
  }

  // Step 1: the parent announces the new identifier of the child.
  void parent_start() {
    nonce_p_ = random_key();
    Message m{std::string(kParent), std::string(kChild), "KEY_CHANGE", s_.request.new_id, nonce_p_};
    send(m, "new_id=" + m.new_id + " nonce=" + short_hex(m.nonce));
  }

  void parent_receive(const Message& m) {
    if (parent_done_) return;
    if (m.kind == "CHALLENGE") {
      // Step 2: the child must prove it holds the current child key.
      const Key expected_child_key = hash_concat(parent_key_, s_.hierarchy.id(s_.request.child));
      if (s_.step2_enabled && m.proof != proof_digest(expected_child_key, kChild, nonce_p_)) {
        abort(kParent, kChild);
        return;
      }
      const Key nonce_c = m.nonce;
      if (s_.step2_enabled) {
        Message r{std::string(kParent), std::string(kChild), "RESPONSE"};
        r.proof = proof_digest(expected_child_key, kParent, nonce_c, s_.request.new_id);
        send(r, "proof=" + short_hex(r.proof));
      }
      // Step 3: deliver the re-derived child key under the current one.
      new_key_ = hash_concat(parent_key_, s_.request.new_id);
      Message k{std::string(kParent), std::string(kChild), "NEW_KEY"};
      k.payload = xor_keys(new_key_, transport_mask(expected_child_key, nonce_p_, nonce_c));
      send(k, "wrapped=" + short_hex(k.payload));
    } else if (m.kind == "ACK") {
      parent_view_ = new_key_;
      parent_committed_ = true;
      parent_done_ = true;
    }
  }

  void child_receive(const Message& m) {
    if (child_done_) return;
    if (m.kind == "KEY_CHANGE") {
      nonce_p_seen_ = m.nonce;
      pending_id_ = m.new_id;
      nonce_c_ = random_key();
      Message c{std::string(kChild), std::string(kParent), "CHALLENGE"};
      c.nonce = nonce_c_;
      std::string summary = "nonce=" + short_hex(c.nonce);
      if (s_.step2_enabled) {
        c.proof = proof_digest(child_key_, kChild, nonce_p_seen_);
        summary += " proof=" + short_hex(c.proof);
      }
      send(c, summary);
    } else if (m.kind == "RESPONSE") {
      parent_authenticated_ = m.proof == proof_digest(child_key_, kParent, nonce_c_, pending_id_);
      if (!parent_authenticated_) abort(kChild, kParent);
    } else if (m.kind == "NEW_KEY") {
      if (s_.step2_enabled && !parent_authenticated_) {
        abort(kChild, kParent);
        return;
      }
      child_view_ = xor_keys(m.payload, transport_mask(child_key_, nonce_p_seen_, nonce_c_));
      child_committed_ = true;
      child_done_ = true;
      send(Message{std::string(kChild), std::string(kParent), "ACK"}, "id=" + pending_id_);
    }
  }

  // The adversary never holds the current child key, so every proof or
  // wrapped key it produces is a guess.
  void adversary_start() {
    Message m{std::string(kAdversary), std::string(kChild), "KEY_CHANGE", s_.request.new_id + "'",
              random_key()};
    send(m, "as=parent new_id=" + m.new_id + " nonce=" + short_hex(m.nonce));
  }

  void adversary_receive(const Message& m) {
    if (s_.adversary == Adversary::kInterceptSubstituteChild) {
      if (m.kind == "KEY_CHANGE") {
        Message c{std::string(kAdversary), std::string(kParent), "CHALLENGE"};
        c.nonce = random_key();
        std::string summary = "as=child nonce=" + short_hex(c.nonce);
        if (s_.step2_enabled) {
          c.proof = random_key();
          summary += " proof=" + short_hex(c.proof);
        }
        send(c, summary);
      } else if (m.kind == "NEW_KEY") {
        send(Message{std::string(kAdversary), std::string(kParent), "ACK"}, "as=child");
      }
      return;
    }
    // Forged parent: answer the child's challenge without the child key.
    if (m.kind == "CHALLENGE") {
      if (s_.step2_enabled) {
        Message r{std::string(kAdversary), std::string(kChild), "RESPONSE"};
        r.proof = random_key();
        send(r, "as=parent proof=" + short_hex(r.proof));
      }
      Message k{std::string(kAdversary), std::string(kChild), "NEW_KEY"};
      k.payload = random_key();
      send(k, "as=parent wrapped=" + short_hex(k.payload));
    }
  }

  void abort(std::string_view who, std::string_view peer) {
    aborted_ = true;
    if (who == kParent) parent_done_ = true;
    if (who == kChild) child_done_ = true;
    transcript_.log.push_back({transcript_.log.size() + 1, std::string(who), std::string(peer), "ABORT",
                               "reason=authentication_failed"});
  }

  Transcript finish() {
    transcript_.parent_view = parent_view_;
    transcript_.child_view = child_view_;
    const bool honest_pair = s_.adversary == Adversary::kNone;
    if (aborted_) {
      transcript_.outcome = Outcome::kAbortedAuthFailure;
    } else if (honest_pair && parent_committed_ && child_committed_ && parent_view_ == child_view_) {
      transcript_.outcome = Outcome::kKeyChanged;
      transcript_.hierarchy = with_identifier(s_.hierarchy, s_.request.child, s_.request.new_id);
      transcript_.keys = apply_key_change(s_.keys, s_.hierarchy, s_.request.child, s_.request.new_id);
    } else if (parent_committed_ || child_committed_) {
      transcript_.outcome = Outcome::kCompromised;
    } else {
      transcript_.outcome = Outcome::kAbortedAuthFailure;
    }
    return std::move(transcript_);
  }

  const Scenario& s_;
  std::mt19937_64 rng_;
  std::deque<Message> queue_;
  Transcript transcript_;

  Key parent_key_{};
  Key child_key_{};
  Key parent_view_{};
  Key child_view_{};
  Key new_key_{};
  Key nonce_p_{};       // parent's own nonce
  Key nonce_p_seen_{};  // child's copy of the announced nonce
  Key nonce_c_{};       // child's own nonce
  std::string pending_id_;
  bool parent_authenticated_ = false;
  bool parent_committed_ = false;
  bool child_committed_ = false;
  bool parent_done_ = false;
  bool child_done_ = false;
  bool aborted_ = false;
};

}  // namespace detail

/// Runs one key-change exchange between the holder of the parent key and the
/// holder of the child key.
///
/// Step 1: the parent sends KEY_CHANGE with the new child identifier and a
/// nonce. Step 2: mutual challenge-response; each side proves it holds the
/// current child key with a digest over the other side's nonce. Step 3: the
/// parent derives the new child key from its own key and the new identifier
/// and delivers it masked under the current child key; the child acknowledges.
/// With step 2 disabled, the challenge carries no proof and nothing is checked.
inline Transcript run_scenario(const Scenario& s) {
  require_valid(s.hierarchy);
  return detail::KeyChangeRun(s).run();
}

}  // namespace rolegraph
