#ifndef RSD_GENERATE_HPP_
#define RSD_GENERATE_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "rsd/model.hpp"
#include "rsd/oracle.hpp"

// Seeded random instance generators: T preference types, n agents distributed
// over them (every type populated). Deterministic for a fixed seed on every
// platform; duplicate types are re-drawn a bounded number of times and then
// tolerated, so a request can yield fewer distinct types than asked for.

namespace rsd {

struct VoteGenOptions {
  std::uint32_t agents = 1;
  std::uint32_t alternatives = 1;
  std::uint32_t types = 1;
  std::uint64_t seed = 0;
};

struct AssignGenOptions {
  std::uint32_t agents = 1;
  std::uint32_t houses = 1;
  std::uint32_t types = 1;
  std::uint64_t seed = 0;
};

struct GeneratedVoting {
  VotingProfile profile;                    // agents named "1".."n"
  std::vector<WeakOrder> type_orders;       // one per requested type
  std::vector<std::uint32_t> type_counts;   // agents per type, all ≥ 1
  std::vector<std::uint32_t> type_of_agent;
};

struct GeneratedAssignment {
  AssignmentProfile profile;
  std::vector<StrictList> type_lists;
  std::vector<std::uint32_t> type_counts;
  std::vector<std::uint32_t> type_of_agent;
};

namespace detail {

inline void check_gen_counts(std::uint32_t agents, std::uint32_t items, std::uint32_t types,
                             const char* item_name) {
  if (agents == 0) throw std::invalid_argument("need at least one agent");
  if (items == 0) throw std::invalid_argument(std::string("need at least one ") + item_name);
  if (types == 0) throw std::invalid_argument("need at least one preference type");
  if (types > agents)
    throw std::invalid_argument("cannot populate more preference types than agents");
}

/// Random ordered partition of the alternatives: shuffle, then cut between
/// consecutive positions with probability 1/2.
inline WeakOrder random_weak_order(std::mt19937_64& rng, std::uint32_t m) {
  Permutation order(m);
  std::iota(order.begin(), order.end(), 0u);
  shuffle_permutation(order, rng);
  std::vector<std::vector<AlternativeIndex>> classes;
  classes.emplace_back();
  classes.back().push_back(order[0]);
  for (std::uint32_t i = 1; i < m; ++i) {
    if (bounded_draw(rng, 2) == 1) classes.emplace_back();
    classes.back().push_back(order[i]);
  }
  return make_weak_order(std::move(classes), m);
}

/// Random strict, possibly partial list: shuffled prefix of uniform length
/// 0..m (so unacceptable houses and even empty lists occur).
inline StrictList random_strict_list(std::mt19937_64& rng, std::uint32_t m) {
  Permutation order(m);
  std::iota(order.begin(), order.end(), 0u);
  shuffle_permutation(order, rng);
  const std::uint64_t length = bounded_draw(rng, static_cast<std::uint64_t>(m) + 1);
  StrictList list;
  list.ranking.assign(order.begin(), order.begin() + length);
  return list;
}

/// One agent per type first, the rest drawn uniformly.
inline std::vector<std::uint32_t> spread_agents(std::mt19937_64& rng, std::uint32_t agents,
                                                std::uint32_t types) {
  std::vector<std::uint32_t> type_of_agent;
  type_of_agent.reserve(agents);
  for (std::uint32_t j = 0; j < types; ++j) type_of_agent.push_back(j);
  for (std::uint32_t i = types; i < agents; ++i)
    type_of_agent.push_back(static_cast<std::uint32_t>(bounded_draw(rng, types)));
  return type_of_agent;
}

inline std::string weak_order_key(const WeakOrder& order) {
  std::string key;
  for (const auto& cls : order.classes) {
    for (AlternativeIndex a : cls) append_word(key, a);
    append_word(key, 0xffffffffu);
  }
  return key;
}

inline std::string strict_list_key(const StrictList& list) {
  std::string key;
  for (HouseIndex h : list.ranking) append_word(key, h);
  return key;
}

inline constexpr int kDistinctTypeRetries = 64;

}  // namespace detail

inline GeneratedVoting generate_voting(const VoteGenOptions& options) {
  detail::check_gen_counts(options.agents, options.alternatives, options.types, "alternative");
  std::mt19937_64 rng(options.seed);

  GeneratedVoting out;
  std::unordered_set<std::string> seen;
  for (std::uint32_t j = 0; j < options.types; ++j) {
    WeakOrder order = detail::random_weak_order(rng, options.alternatives);
    for (int attempt = 0; attempt < detail::kDistinctTypeRetries; ++attempt) {
      if (seen.insert(detail::weak_order_key(order)).second) break;
      order = detail::random_weak_order(rng, options.alternatives);
    }
    out.type_orders.push_back(std::move(order));
  }

  out.type_of_agent = detail::spread_agents(rng, options.agents, options.types);
  out.type_counts.assign(options.types, 0);
  for (std::uint32_t t : out.type_of_agent) ++out.type_counts[t];

  std::vector<std::string> alternatives;
  alternatives.reserve(options.alternatives);
  for (std::uint32_t a = 1; a <= options.alternatives; ++a)
    alternatives.push_back("a" + std::to_string(a));
  std::vector<VotingAgent> agents;
  agents.reserve(options.agents);
  for (std::uint32_t i = 0; i < options.agents; ++i)
    agents.push_back({std::to_string(i + 1), out.type_orders[out.type_of_agent[i]]});
  out.profile = make_voting_profile(std::move(alternatives), std::move(agents));
  return out;
}

inline GeneratedAssignment generate_assignment(const AssignGenOptions& options) {
  detail::check_gen_counts(options.agents, options.houses, options.types, "house");
  std::mt19937_64 rng(options.seed);

  GeneratedAssignment out;
  std::unordered_set<std::string> seen;
  for (std::uint32_t j = 0; j < options.types; ++j) {
    StrictList list = detail::random_strict_list(rng, options.houses);
    for (int attempt = 0; attempt < detail::kDistinctTypeRetries; ++attempt) {
      if (seen.insert(detail::strict_list_key(list)).second) break;
      list = detail::random_strict_list(rng, options.houses);
    }
    out.type_lists.push_back(std::move(list));
  }

  out.type_of_agent = detail::spread_agents(rng, options.agents, options.types);
  out.type_counts.assign(options.types, 0);
  for (std::uint32_t t : out.type_of_agent) ++out.type_counts[t];

  std::vector<std::string> houses;
  houses.reserve(options.houses);
  for (std::uint32_t h = 1; h <= options.houses; ++h) houses.push_back("h" + std::to_string(h));
  std::vector<AssignmentAgent> agents;
  agents.reserve(options.agents);
  for (std::uint32_t i = 0; i < options.agents; ++i)
    agents.push_back({std::to_string(i + 1), out.type_lists[out.type_of_agent[i]]});
  out.profile = make_assignment_profile(std::move(houses), std::move(agents));
  return out;
}

}  // namespace rsd

#endif  // RSD_GENERATE_HPP_
