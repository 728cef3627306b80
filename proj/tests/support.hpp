// Shared builders for the test suite: small hand-checked profiles and
// deterministic instance transformations (agent shuffles, alternative
// relabelings, alternative cloning) used by the property checks.

#ifndef RSD_TESTS_SUPPORT_HPP_
#define RSD_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsd/rsd.hpp"

namespace support {

/// Three voters over {a, b, c, d} with ties; the exact lottery is
/// (0, 1/2, 1/2, 0). Hand-checked over all six agent orders.
inline rsd::VotingProfile example_voting() {
  using Classes = std::vector<std::vector<rsd::AlternativeIndex>>;
  std::vector<rsd::VotingAgent> agents;
  agents.push_back({"1", rsd::make_weak_order(Classes{{0, 1, 2}, {3}}, 4)});
  agents.push_back({"2", rsd::make_weak_order(Classes{{1, 3}, {0, 2}}, 4)});
  agents.push_back({"3", rsd::make_weak_order(Classes{{2}, {0, 1, 3}}, 4)});
  return rsd::make_voting_profile({"a", "b", "c", "d"}, std::move(agents));
}

/// Two agents share the list a > b > c, one prefers b > a > c; the exact
/// matrix rows are (1/2, 1/6, 1/3), (1/2, 1/6, 1/3), (0, 2/3, 1/3).
inline rsd::AssignmentProfile example_assignment() {
  std::vector<rsd::AssignmentAgent> agents;
  agents.push_back({"1", rsd::StrictList{{0, 1, 2}}});
  agents.push_back({"2", rsd::StrictList{{0, 1, 2}}});
  agents.push_back({"3", rsd::StrictList{{1, 0, 2}}});
  return rsd::make_assignment_profile({"a", "b", "c"}, std::move(agents));
}

/// Appends a new alternative tied with `source` in every agent's order, so
/// the pair forms a duplicate alternative type that must be merged before
/// signature counting.
inline rsd::VotingProfile with_cloned_alternative(const rsd::VotingProfile& profile,
                                                  rsd::AlternativeIndex source,
                                                  const std::string& clone_name) {
  std::vector<std::string> names = profile.alternatives;
  names.push_back(clone_name);
  const auto clone = static_cast<rsd::AlternativeIndex>(profile.alternative_count());
  std::vector<rsd::VotingAgent> agents;
  agents.reserve(profile.agent_count());
  for (const auto& agent : profile.agents) {
    auto classes = agent.order.classes;
    classes[agent.order.rank(source)].push_back(clone);
    agents.push_back({agent.id, rsd::make_weak_order(std::move(classes), names.size())});
  }
  return rsd::make_voting_profile(std::move(names), std::move(agents));
}

inline rsd::VotingProfile reversed_agents(const rsd::VotingProfile& profile) {
  std::vector<rsd::VotingAgent> agents(profile.agents.rbegin(), profile.agents.rend());
  return rsd::make_voting_profile(profile.alternatives, std::move(agents));
}

inline rsd::AssignmentProfile reversed_agents(const rsd::AssignmentProfile& profile) {
  std::vector<rsd::AssignmentAgent> agents(profile.agents.rbegin(), profile.agents.rend());
  return rsd::make_assignment_profile(profile.houses, std::move(agents));
}

/// Moves every alternative from index a to (a + shift) mod m, carrying its
/// name along, so identical preferences are stored in a different order.
inline rsd::VotingProfile rotated_alternatives(const rsd::VotingProfile& profile,
                                               std::uint32_t shift) {
  const std::size_t m = profile.alternative_count();
  auto dest = [&](rsd::AlternativeIndex a) {
    return static_cast<rsd::AlternativeIndex>((a + shift) % m);
  };
  std::vector<std::string> names(m);
  for (std::size_t a = 0; a < m; ++a) names[dest(static_cast<rsd::AlternativeIndex>(a))] =
      profile.alternatives[a];
  std::vector<rsd::VotingAgent> agents;
  agents.reserve(profile.agent_count());
  for (const auto& agent : profile.agents) {
    auto classes = agent.order.classes;
    for (auto& cls : classes)
      for (auto& a : cls) a = dest(a);
    agents.push_back({agent.id, rsd::make_weak_order(std::move(classes), m)});
  }
  return rsd::make_voting_profile(std::move(names), std::move(agents));
}

/// Same relabeling for houses in an assignment profile.
inline rsd::AssignmentProfile rotated_houses(const rsd::AssignmentProfile& profile,
                                             std::uint32_t shift) {
  const std::size_t m = profile.house_count();
  auto dest = [&](rsd::HouseIndex h) {
    return static_cast<rsd::HouseIndex>((h + shift) % m);
  };
  std::vector<std::string> names(m);
  for (std::size_t h = 0; h < m; ++h)
    names[dest(static_cast<rsd::HouseIndex>(h))] = profile.houses[h];
  std::vector<rsd::AssignmentAgent> agents;
  agents.reserve(profile.agent_count());
  for (const auto& agent : profile.agents) {
    rsd::StrictList prefs = agent.prefs;
    for (auto& h : prefs.ranking) h = dest(h);
    agents.push_back({agent.id, std::move(prefs)});
  }
  return rsd::make_assignment_profile(std::move(names), std::move(agents));
}

/// n agents with independent uniformly shuffled strict orders over
/// alternatives a1..am (singleton indifference classes throughout).
inline rsd::VotingProfile strict_voting_profile(std::uint64_t seed, std::uint32_t n,
                                                std::uint32_t m) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  names.reserve(m);
  for (std::uint32_t a = 1; a <= m; ++a) names.push_back("a" + std::to_string(a));
  std::vector<rsd::VotingAgent> agents;
  agents.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    rsd::Permutation order(m);
    std::iota(order.begin(), order.end(), 0u);
    rsd::detail::shuffle_permutation(order, rng);
    std::vector<std::vector<rsd::AlternativeIndex>> classes;
    classes.reserve(m);
    for (rsd::AlternativeIndex a : order) classes.push_back({a});
    agents.push_back({std::to_string(i + 1), rsd::make_weak_order(std::move(classes), m)});
  }
  return rsd::make_voting_profile(std::move(names), std::move(agents));
}

/// Probability an entry of `matrix` assigns, looked up by names rather than
/// positions (for comparing relabeled or reordered instances).
inline const rsd::Rational& matrix_entry(const rsd::FractionalAssignment& matrix,
                                         const std::string& agent_id,
                                         const std::string& house_name) {
  for (std::size_t i = 0; i < matrix.agents.size(); ++i)
    if (matrix.agents[i] == agent_id)
      for (std::size_t h = 0; h < matrix.houses.size(); ++h)
        if (matrix.houses[h] == house_name) return matrix.rows[i][h];
  throw std::invalid_argument("matrix has no entry for " + agent_id + "/" + house_name);
}

/// Runs `fn` and reports the message of the exception of type E it throws
/// ("[no exception]" / "[wrong exception type]" otherwise).
template <typename E, typename Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const E& e) {
    return e.what();
  } catch (...) {
    return "[wrong exception type]";
  }
  return "[no exception]";
}

inline bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace support

#endif  // RSD_TESTS_SUPPORT_HPP_
