#ifndef RSD_ORACLE_HPP_
#define RSD_ORACLE_HPP_

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rsd/errors.hpp"
#include "rsd/model.hpp"
#include "rsd/rational.hpp"

// Brute-force reference implementations: serial dictatorship for a single
// agent ordering, and the full-RSD average over all n! orderings. Exponential
// by construction; guarded by an enumeration cap.

namespace rsd {

/// Agent ordering as positions into the profile's agent list.
using Permutation = std::vector<std::uint32_t>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 10;

namespace detail {

inline void require_permutation(const Permutation& pi, std::size_t n) {
  if (pi.size() != n) throw std::invalid_argument("permutation has the wrong length");
  std::vector<bool> seen(n, false);
  for (std::uint32_t i : pi) {
    if (i >= n || seen[i]) throw std::invalid_argument("not a permutation of the agents");
    seen[i] = true;
  }
}

inline boost::dynamic_bitset<> prio_vote_unchecked(const VotingProfile& profile,
                                                   const Permutation& pi) {
  const std::size_t m = profile.alternative_count();
  boost::dynamic_bitset<> feasible(m);
  feasible.set();
  for (std::uint32_t agent_pos : pi) {
    const WeakOrder& order = profile.agents[agent_pos].order;
    // Most preferred nonempty class restricted to the feasible set.
    for (const auto& cls : order.classes) {
      boost::dynamic_bitset<> best(m);
      for (AlternativeIndex a : cls)
        if (feasible.test(a)) best.set(a);
      if (best.any()) {
        feasible = std::move(best);
        break;
      }
    }
  }
  return feasible;
}

inline void prio_assign_unchecked(const AssignmentProfile& profile, const Permutation& pi,
                                  std::vector<bool>& taken, std::vector<std::int32_t>& out) {
  taken.assign(profile.house_count(), false);
  out.assign(profile.agent_count(), -1);
  for (std::uint32_t agent_pos : pi) {
    for (HouseIndex h : profile.agents[agent_pos].prefs.ranking) {
      if (!taken[h]) {
        taken[h] = true;
        out[agent_pos] = static_cast<std::int32_t>(h);
        break;
      }
    }
  }
}

}  // namespace detail

/// Visits every permutation of {0..n-1} via Heap's algorithm (no allocation
/// per step) and returns the number visited, which is checked against n!.
template <typename Fn>
std::uint64_t for_each_permutation(std::uint32_t n, Fn&& fn) {
  Permutation a(n);
  std::iota(a.begin(), a.end(), 0u);
  std::uint64_t visited = 0;
  fn(static_cast<const Permutation&>(a));
  ++visited;
  std::vector<std::uint32_t> c(n, 0);
  std::uint32_t i = 1;
  while (i < n) {
    if (c[i] < i) {
      std::swap(a[i % 2 == 0 ? 0 : c[i]], a[i]);
      fn(static_cast<const Permutation&>(a));
      ++visited;
      ++c[i];
      i = 1;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  std::uint64_t expected = 1;
  for (std::uint32_t k = 2; k <= n; ++k) expected *= k;
  if (visited != expected) throw std::logic_error("permutation enumeration miscounted");
  return visited;
}

/// Serial dictatorship for one agent ordering: each agent in turn keeps only
/// their most preferred alternatives among those still feasible. Returns the
/// final feasible set (a singleton iff the profile is simplified).
inline boost::dynamic_bitset<> prio_vote(const VotingProfile& profile, const Permutation& pi) {
  detail::require_permutation(pi, profile.agent_count());
  return detail::prio_vote_unchecked(profile, pi);
}

/// Serial dictatorship for one agent ordering in the assignment setting:
/// agents take their best remaining acceptable house, -1 when none is left.
inline std::vector<std::int32_t> prio_assign(const AssignmentProfile& profile,
                                             const Permutation& pi) {
  detail::require_permutation(pi, profile.agent_count());
  std::vector<bool> taken;
  std::vector<std::int32_t> out;
  detail::prio_assign_unchecked(profile, pi, taken, out);
  return out;
}

/// Exact RSD lottery by full enumeration. A serial-dictatorship outcome of
/// size k contributes 1/(n!*k) to each of its members.
inline Lottery brute_force_lottery(const VotingProfile& profile,
                                   std::uint64_t cap = kDefaultEnumerationCap) {
  const std::size_t n = profile.agent_count();
  const std::size_t m = profile.alternative_count();
  if (n > cap) throw EnumerationCapError(n, cap);

  // Scaled integer accumulation: a member of an outcome of size k earns
  // lcm(1..m)/k, so every contribution is integral.
  Count scale = 1;
  for (std::size_t k = 2; k <= m; ++k) scale = boost::multiprecision::lcm(scale, Count(k));
  std::vector<Count> weight_for_size(m + 1);
  for (std::size_t k = 1; k <= m; ++k) weight_for_size[k] = scale / k;

  std::vector<Count> accumulated(m, Count(0));
  const std::uint64_t visited =
      for_each_permutation(static_cast<std::uint32_t>(n), [&](const Permutation& pi) {
        const auto outcome = detail::prio_vote_unchecked(profile, pi);
        const Count& w = weight_for_size[outcome.count()];
        for (std::size_t a = outcome.find_first(); a != boost::dynamic_bitset<>::npos;
             a = outcome.find_next(a))
          accumulated[a] += w;
      });

  const Count denominator = Count(visited) * scale;
  Lottery lottery;
  lottery.alternatives = profile.alternatives;
  lottery.probabilities.reserve(m);
  for (std::size_t a = 0; a < m; ++a)
    lottery.probabilities.emplace_back(accumulated[a], denominator);
  return lottery;
}

/// Exact RSD fractional assignment by full enumeration.
inline FractionalAssignment brute_force_matrix(const AssignmentProfile& profile,
                                               std::uint64_t cap = kDefaultEnumerationCap) {
  const std::size_t n = profile.agent_count();
  const std::size_t m = profile.house_count();
  if (n > cap) throw EnumerationCapError(n, cap);

  std::vector<std::uint64_t> counts(n * m, 0);
  std::vector<bool> taken;
  std::vector<std::int32_t> matched;
  const std::uint64_t visited =
      for_each_permutation(static_cast<std::uint32_t>(n), [&](const Permutation& pi) {
        detail::prio_assign_unchecked(profile, pi, taken, matched);
        for (std::size_t i = 0; i < n; ++i)
          if (matched[i] >= 0) ++counts[i * m + static_cast<std::size_t>(matched[i])];
      });

  FractionalAssignment result;
  result.houses = profile.houses;
  result.agents.reserve(n);
  result.rows.assign(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i) {
    result.agents.push_back(profile.agents[i].id);
    for (std::size_t h = 0; h < m; ++h)
      result.rows[i][h] = Rational(Count(counts[i * m + h]), Count(visited));
  }
  return result;
}

namespace detail {

/// Unbiased draw from [0, k) with rejection; deterministic for a fixed
/// engine state on every platform (mt19937_64 output is standardized).
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t k) {
  const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / k) * k;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % k;
}

inline void shuffle_permutation(Permutation& pi, std::mt19937_64& rng) {
  for (std::size_t i = pi.size(); i > 1; --i) {
    const std::uint64_t j = bounded_draw(rng, i);
    std::swap(pi[i - 1], pi[j]);
  }
}

}  // namespace detail

/// Empirical RSD lottery from `samples` uniformly drawn permutations
/// (seeded Fisher-Yates). Frequencies are exact rationals over the sample
/// count; no approximation guarantee is made or implied.
inline Lottery monte_carlo_estimate(const VotingProfile& profile, std::uint64_t samples,
                                    std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be at least 1");
  const std::size_t n = profile.agent_count();
  const std::size_t m = profile.alternative_count();

  Count scale = 1;
  for (std::size_t k = 2; k <= m; ++k) scale = boost::multiprecision::lcm(scale, Count(k));
  std::vector<Count> weight_for_size(m + 1);
  for (std::size_t k = 1; k <= m; ++k) weight_for_size[k] = scale / k;

  std::mt19937_64 rng(seed);
  Permutation pi(n);
  std::iota(pi.begin(), pi.end(), 0u);
  std::vector<Count> accumulated(m, Count(0));
  for (std::uint64_t s = 0; s < samples; ++s) {
    detail::shuffle_permutation(pi, rng);
    const auto outcome = detail::prio_vote_unchecked(profile, pi);
    const Count& w = weight_for_size[outcome.count()];
    for (std::size_t a = outcome.find_first(); a != boost::dynamic_bitset<>::npos;
         a = outcome.find_next(a))
      accumulated[a] += w;
  }

  const Count denominator = Count(samples) * scale;
  Lottery lottery;
  lottery.alternatives = profile.alternatives;
  lottery.probabilities.reserve(m);
  for (std::size_t a = 0; a < m; ++a)
    lottery.probabilities.emplace_back(accumulated[a], denominator);
  return lottery;
}

/// Empirical fractional assignment from sampled permutations.
inline FractionalAssignment monte_carlo_estimate(const AssignmentProfile& profile,
                                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be at least 1");
  const std::size_t n = profile.agent_count();
  const std::size_t m = profile.house_count();

  std::mt19937_64 rng(seed);
  Permutation pi(n);
  std::iota(pi.begin(), pi.end(), 0u);
  std::vector<std::uint64_t> counts(n * m, 0);
  std::vector<bool> taken;
  std::vector<std::int32_t> matched;
  for (std::uint64_t s = 0; s < samples; ++s) {
    detail::shuffle_permutation(pi, rng);
    detail::prio_assign_unchecked(profile, pi, taken, matched);
    for (std::size_t i = 0; i < n; ++i)
      if (matched[i] >= 0) ++counts[i * m + static_cast<std::size_t>(matched[i])];
  }

  FractionalAssignment result;
  result.houses = profile.houses;
  result.agents.reserve(n);
  result.rows.assign(n, std::vector<Rational>(m));
  for (std::size_t i = 0; i < n; ++i) {
    result.agents.push_back(profile.agents[i].id);
    for (std::size_t h = 0; h < m; ++h)
      result.rows[i][h] = Rational(Count(counts[i * m + h]), Count(samples));
  }
  return result;
}

}  // namespace rsd

#endif  // RSD_ORACLE_HPP_
