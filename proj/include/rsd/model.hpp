#ifndef RSD_MODEL_HPP_
#define RSD_MODEL_HPP_

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rsd/rational.hpp"

namespace rsd {

using AlternativeIndex = std::uint32_t;
using HouseIndex = std::uint32_t;

/// Complete weak order over a profile's alternatives, stored as ordered
/// indifference classes of dense alternative indices (best class first).
struct WeakOrder {
  std::vector<std::vector<AlternativeIndex>> classes;

  /// rank_of[a] = position of the class containing alternative a.
  std::vector<std::uint32_t> rank_of;

  std::uint32_t rank(AlternativeIndex a) const { return rank_of.at(a); }

  bool strictly_prefers(AlternativeIndex a, AlternativeIndex b) const {
    return rank(a) < rank(b);
  }
  bool indifferent(AlternativeIndex a, AlternativeIndex b) const {
    return rank(a) == rank(b);
  }

  friend bool operator==(const WeakOrder& lhs, const WeakOrder& rhs) {
    return lhs.classes == rhs.classes;
  }
};

/// Validates the class structure: disjoint, nonempty, and jointly covering
/// all `universe_size` alternatives. Members are kept sorted within a class.
inline WeakOrder make_weak_order(std::vector<std::vector<AlternativeIndex>> classes,
                                 std::size_t universe_size) {
  WeakOrder order;
  order.rank_of.assign(universe_size, static_cast<std::uint32_t>(-1));
  std::size_t seen = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].empty()) throw std::invalid_argument("weak order has an empty indifference class");
    std::sort(classes[c].begin(), classes[c].end());
    for (AlternativeIndex a : classes[c]) {
      if (a >= universe_size) throw std::invalid_argument("weak order refers to an alternative outside the profile");
      if (order.rank_of[a] != static_cast<std::uint32_t>(-1))
        throw std::invalid_argument("weak order places an alternative in two classes");
      order.rank_of[a] = static_cast<std::uint32_t>(c);
      ++seen;
    }
  }
  if (seen != universe_size)
    throw std::invalid_argument("weak order does not cover every alternative");
  order.classes = std::move(classes);
  return order;
}

struct VotingAgent {
  std::string id;
  WeakOrder order;

  friend bool operator==(const VotingAgent& lhs, const VotingAgent& rhs) {
    return lhs.id == rhs.id && lhs.order == rhs.order;
  }
};

/// Agents with complete weak orders over a common alternative set.
/// Alternative order is first-appearance order in the input and is the
/// canonical order for all deterministic output.
struct VotingProfile {
  std::vector<std::string> alternatives;
  std::vector<VotingAgent> agents;

  std::size_t alternative_count() const { return alternatives.size(); }
  std::size_t agent_count() const { return agents.size(); }

  AlternativeIndex alternative_index(const std::string& name) const {
    for (std::size_t i = 0; i < alternatives.size(); ++i)
      if (alternatives[i] == name) return static_cast<AlternativeIndex>(i);
    throw std::invalid_argument("unknown alternative: " + name);
  }

  friend bool operator==(const VotingProfile& lhs, const VotingProfile& rhs) {
    return lhs.alternatives == rhs.alternatives && lhs.agents == rhs.agents;
  }
};

inline VotingProfile make_voting_profile(std::vector<std::string> alternatives,
                                         std::vector<VotingAgent> agents) {
  if (alternatives.empty()) throw std::invalid_argument("profile needs at least one alternative");
  if (agents.empty()) throw std::invalid_argument("profile needs at least one agent");
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& name : alternatives)
      if (++seen[name] > 1) throw std::invalid_argument("duplicate alternative: " + name);
    seen.clear();
    for (const auto& agent : agents) {
      if (++seen[agent.id] > 1) throw std::invalid_argument("duplicate agent identifier: " + agent.id);
      if (agent.order.rank_of.size() != alternatives.size())
        throw std::invalid_argument("agent " + agent.id + " does not rank every alternative");
    }
  }
  return VotingProfile{std::move(alternatives), std::move(agents)};
}

/// Strict ranking over the houses an agent finds acceptable (may be empty;
/// omitted houses are unacceptable).
struct StrictList {
  std::vector<HouseIndex> ranking;

  std::size_t size() const { return ranking.size(); }
  bool accepts(HouseIndex h) const {
    return std::find(ranking.begin(), ranking.end(), h) != ranking.end();
  }

  friend bool operator==(const StrictList&, const StrictList&) = default;
};

struct AssignmentAgent {
  std::string id;
  StrictList prefs;

  friend bool operator==(const AssignmentAgent&, const AssignmentAgent&) = default;
};

struct AssignmentProfile {
  std::vector<std::string> houses;
  std::vector<AssignmentAgent> agents;

  std::size_t house_count() const { return houses.size(); }
  std::size_t agent_count() const { return agents.size(); }

  HouseIndex house_index(const std::string& name) const {
    for (std::size_t i = 0; i < houses.size(); ++i)
      if (houses[i] == name) return static_cast<HouseIndex>(i);
    throw std::invalid_argument("unknown house: " + name);
  }

  std::size_t agent_position(const std::string& id) const {
    for (std::size_t i = 0; i < agents.size(); ++i)
      if (agents[i].id == id) return i;
    throw std::invalid_argument("unknown agent: " + id);
  }

  friend bool operator==(const AssignmentProfile&, const AssignmentProfile&) = default;
};

inline AssignmentProfile make_assignment_profile(std::vector<std::string> houses,
                                                 std::vector<AssignmentAgent> agents) {
  if (houses.empty()) throw std::invalid_argument("profile needs at least one house");
  if (agents.empty()) throw std::invalid_argument("profile needs at least one agent");
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& name : houses)
      if (++seen[name] > 1) throw std::invalid_argument("duplicate house: " + name);
    seen.clear();
    for (const auto& agent : agents) {
      if (++seen[agent.id] > 1) throw std::invalid_argument("duplicate agent identifier: " + agent.id);
      std::vector<bool> used(houses.size(), false);
      for (HouseIndex h : agent.prefs.ranking) {
        if (h >= houses.size())
          throw std::invalid_argument("agent " + agent.id + " ranks a house outside the profile");
        if (used[h]) throw std::invalid_argument("agent " + agent.id + " ranks a house twice");
        used[h] = true;
      }
    }
  }
  return AssignmentProfile{std::move(houses), std::move(agents)};
}

/// Probability distribution over alternatives, aligned with a profile's
/// canonical alternative order. Entries are exact and sum to 1.
struct Lottery {
  std::vector<std::string> alternatives;
  std::vector<Rational> probabilities;

  const Rational& probability(const std::string& name) const {
    for (std::size_t i = 0; i < alternatives.size(); ++i)
      if (alternatives[i] == name) return probabilities[i];
    throw std::invalid_argument("lottery has no entry for: " + name);
  }

  Rational total() const {
    Rational sum = 0;
    for (const Rational& p : probabilities) sum += p;
    return sum;
  }

  friend bool operator==(const Lottery&, const Lottery&) = default;
};

/// Agent-by-house matrix of exact allocation probabilities.
struct FractionalAssignment {
  std::vector<std::string> agents;
  std::vector<std::string> houses;
  std::vector<std::vector<Rational>> rows;  // rows[agent][house]

  const Rational& at(std::size_t agent, std::size_t house) const {
    return rows.at(agent).at(house);
  }

  Rational row_sum(std::size_t agent) const {
    Rational sum = 0;
    for (const Rational& p : rows.at(agent)) sum += p;
    return sum;
  }

  Rational column_sum(std::size_t house) const {
    Rational sum = 0;
    for (const auto& row : rows) sum += row.at(house);
    return sum;
  }

  friend bool operator==(const FractionalAssignment&, const FractionalAssignment&) = default;
};

/// Result of merging same-type alternatives: each group lists the original
/// alternatives every agent is mutually indifferent between, represented in
/// the contracted profile by the group's first member.
struct TypeContractionMap {
  struct Group {
    std::string super_id;
    std::vector<std::string> members;

    friend bool operator==(const Group&, const Group&) = default;
  };

  std::vector<std::string> originals;  // full original alternative order
  std::vector<Group> groups;           // aligned with the contracted profile

  bool is_identity() const {
    for (const auto& g : groups)
      if (g.members.size() != 1) return false;
    return true;
  }

  friend bool operator==(const TypeContractionMap&, const TypeContractionMap&) = default;
};

namespace detail {

inline void append_word(std::string& bytes, std::uint32_t word) {
  for (int shift = 0; shift < 32; shift += 8)
    bytes.push_back(static_cast<char>((word >> shift) & 0xffu));
}

/// Per-alternative type key: the agent-wise class ranks packed into bytes.
/// Two alternatives share a key iff every agent is indifferent between them.
inline std::vector<std::string> alternative_type_keys(const VotingProfile& profile) {
  const std::size_t m = profile.alternative_count();
  std::vector<std::string> keys(m);
  for (std::size_t a = 0; a < m; ++a) {
    keys[a].reserve(profile.agent_count() * 4);
    for (const auto& agent : profile.agents)
      append_word(keys[a], agent.order.rank(static_cast<AlternativeIndex>(a)));
  }
  return keys;
}

}  // namespace detail

/// True when no two alternatives are of the same type (some agent strictly
/// separates every pair).
inline bool is_simplified(const VotingProfile& profile) {
  auto keys = detail::alternative_type_keys(profile);
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

/// Merges all alternatives of the same type into one super-alternative and
/// induces each agent's weak order on the merged set. The returned profile is
/// simplified. Linear in the profile size (plus hashing of the type keys).
inline std::pair<VotingProfile, TypeContractionMap> contract_alternative_types(
    const VotingProfile& profile) {
  const std::size_t m = profile.alternative_count();
  const auto keys = detail::alternative_type_keys(profile);

  std::unordered_map<std::string, std::uint32_t> group_of_key;
  std::vector<std::uint32_t> group_of(m);
  TypeContractionMap map;
  map.originals = profile.alternatives;
  for (std::size_t a = 0; a < m; ++a) {
    auto [it, inserted] =
        group_of_key.try_emplace(keys[a], static_cast<std::uint32_t>(map.groups.size()));
    if (inserted) map.groups.push_back({profile.alternatives[a], {}});
    group_of[a] = it->second;
    map.groups[it->second].members.push_back(profile.alternatives[a]);
  }

  std::vector<std::string> contracted_names;
  contracted_names.reserve(map.groups.size());
  for (const auto& g : map.groups) contracted_names.push_back(g.super_id);

  std::vector<VotingAgent> contracted_agents;
  contracted_agents.reserve(profile.agent_count());
  for (const auto& agent : profile.agents) {
    std::vector<std::vector<AlternativeIndex>> classes;
    classes.reserve(agent.order.classes.size());
    std::vector<bool> emitted(map.groups.size(), false);
    for (const auto& cls : agent.order.classes) {
      std::vector<AlternativeIndex> merged;
      for (AlternativeIndex a : cls) {
        const std::uint32_t g = group_of[a];
        if (!emitted[g]) {
          emitted[g] = true;
          merged.push_back(g);
        }
      }
      classes.push_back(std::move(merged));  // groups sit wholly inside one class
    }
    contracted_agents.push_back({agent.id, make_weak_order(std::move(classes), map.groups.size())});
  }

  return {make_voting_profile(std::move(contracted_names), std::move(contracted_agents)),
          std::move(map)};
}

/// Spreads each super-alternative's probability uniformly over the originals
/// it merged. Output follows the original alternative order and keeps the
/// input's total probability.
inline Lottery expand_lottery(const Lottery& lottery, const TypeContractionMap& map) {
  std::unordered_map<std::string, std::size_t> group_index;
  for (std::size_t g = 0; g < map.groups.size(); ++g)
    group_index.emplace(map.groups[g].super_id, g);

  std::vector<bool> covered(map.groups.size(), false);
  std::unordered_map<std::string, Rational> share;
  for (std::size_t i = 0; i < lottery.alternatives.size(); ++i) {
    auto it = group_index.find(lottery.alternatives[i]);
    if (it == group_index.end())
      throw std::invalid_argument("unknown super-alternative: " + lottery.alternatives[i]);
    const auto& group = map.groups[it->second];
    covered[it->second] = true;
    const Rational piece = lottery.probabilities[i] / static_cast<int>(group.members.size());
    for (const auto& member : group.members) share[member] = piece;
  }
  for (std::size_t g = 0; g < covered.size(); ++g)
    if (!covered[g])
      throw std::invalid_argument("lottery is missing super-alternative: " + map.groups[g].super_id);

  Lottery expanded;
  expanded.alternatives = map.originals;
  expanded.probabilities.reserve(map.originals.size());
  for (const auto& name : map.originals) expanded.probabilities.push_back(share.at(name));
  return expanded;
}

}  // namespace rsd

#endif  // RSD_MODEL_HPP_
