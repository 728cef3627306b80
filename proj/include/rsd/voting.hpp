#ifndef RSD_VOTING_HPP_
#define RSD_VOTING_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rsd/errors.hpp"
#include "rsd/model.hpp"
#include "rsd/rational.hpp"

// Exact RSD winning probabilities for voting profiles. Instead of the n!
// agent orderings, the recursion runs over subsets of the distinct preference
// *signatures* relative to a target alternative, so the cost is exponential
// only in the number of distinct signatures.

namespace rsd {

/// How one group of identical agents relates to the target alternative.
struct Signature {
  boost::dynamic_bitset<> tied;    // alternatives ranked equal to the target (target included)
  boost::dynamic_bitset<> better;  // alternatives ranked strictly above the target
  std::uint64_t count = 0;         // agents sharing this signature
};

/// Subset of signature indices, one bit per signature.
using SignatureSubset = std::uint64_t;

inline constexpr std::size_t kMaxSignatures = 64;

struct SignatureSet {
  AlternativeIndex target = 0;
  std::size_t alternative_count = 0;
  std::uint64_t total_agents = 0;
  std::vector<Signature> signatures;  // in order of first appearance
};

/// Groups the agents of `profile` by their signature relative to `target`.
///
/// Requires that no other alternative is tied with the target for *every*
/// agent (merge duplicate alternative types first, see
/// contract_alternative_types); the counting recursion is only valid then.
/// Throws CapacityError when the distinct signatures do not fit the subset
/// word.
inline SignatureSet compute_signatures(const VotingProfile& profile, AlternativeIndex target) {
  const std::size_t m = profile.alternative_count();
  if (target >= m) throw std::invalid_argument("target alternative index out of range");

  SignatureSet set;
  set.target = target;
  set.alternative_count = m;
  set.total_agents = profile.agent_count();

  std::unordered_map<std::string, std::size_t> index_of_key;
  std::string key(m, '\0');
  for (const VotingAgent& agent : profile.agents) {
    const std::uint32_t target_rank = agent.order.rank(target);
    for (AlternativeIndex a = 0; a < m; ++a) {
      const std::uint32_t r = agent.order.rank_of[a];
      key[a] = r < target_rank ? 2 : (r == target_rank ? 1 : 0);
    }
    auto [it, inserted] = index_of_key.emplace(key, set.signatures.size());
    if (inserted) {
      Signature sig;
      sig.tied.resize(m);
      sig.better.resize(m);
      for (AlternativeIndex a = 0; a < m; ++a) {
        if (key[a] == 1) sig.tied.set(a);
        if (key[a] == 2) sig.better.set(a);
      }
      sig.count = 1;
      set.signatures.push_back(std::move(sig));
    } else {
      ++set.signatures[it->second].count;
    }
  }

  if (set.signatures.size() > kMaxSignatures)
    throw CapacityError("distinct preference signatures", set.signatures.size(), kMaxSignatures);

  boost::dynamic_bitset<> common = set.signatures.front().tied;
  for (const Signature& sig : set.signatures) common &= sig.tied;
  if (common.count() != 1) {
    std::size_t other = common.find_first();
    if (other == target) other = common.find_next(other);
    throw std::invalid_argument("cannot count for '" + profile.alternatives[target] + "': '" +
                                profile.alternatives[other] +
                                "' is tied with it in every preference; merge duplicate "
                                "alternative types first");
  }

  return set;
}

namespace detail {

/// Signatures in `subset` whose strictly-better set misses `avail` entirely;
/// only those may move last among the agents still unplaced without
/// disturbing the target's survival.
inline SignatureSubset admissible_with_avail(const SignatureSet& set, SignatureSubset subset,
                                             const boost::dynamic_bitset<>& avail) {
  SignatureSubset result = 0;
  for (std::size_t i = 0; i < set.signatures.size(); ++i) {
    if (!((subset >> i) & 1u)) continue;
    if (!set.signatures[i].better.intersects(avail)) result |= SignatureSubset(1) << i;
  }
  return result;
}

inline boost::dynamic_bitset<> avail_outside(const SignatureSet& set, SignatureSubset subset) {
  boost::dynamic_bitset<> avail(set.alternative_count);
  avail.set();
  for (std::size_t j = 0; j < set.signatures.size(); ++j)
    if (!((subset >> j) & 1u)) avail &= set.signatures[j].tied;
  return avail;
}

}  // namespace detail

/// Signatures in `subset` that could act last: the alternatives left over
/// after everyone *outside* the subset has narrowed the field contain nothing
/// they rank above the target.
inline SignatureSubset admissible(const SignatureSet& set, SignatureSubset subset) {
  const std::size_t s = set.signatures.size();
  if (s < 64 && (subset >> s) != 0)
    throw std::invalid_argument("subset uses bits beyond the signature count");
  return detail::admissible_with_avail(set, subset, detail::avail_outside(set, subset));
}

/// Memo of partial counts by signature subset; confined to one query.
struct LuckyTable {
  std::unordered_map<SignatureSubset, Count> memo;
};

/// All signatures present.
inline SignatureSubset full_subset(const SignatureSet& set) {
  const std::size_t s = set.signatures.size();
  return s >= 64 ? ~SignatureSubset(0) : (SignatureSubset(1) << s) - 1;
}

/// Counts the orderings of the agents in `subset` under which serial
/// dictatorship (on the field already narrowed by everyone outside) keeps the
/// target alive to the end. Memoized in `table`, so at most 2^(#signatures)
/// states are ever stored across any sequence of calls.
inline const Count& count_lucky(SignatureSubset subset, const SignatureSet& set,
                                LuckyTable& table) {
  const std::size_t s = set.signatures.size();
  if (s > kMaxSignatures)
    throw CapacityError("distinct preference signatures", s, kMaxSignatures);
  if (s < 64 && (subset >> s) != 0)
    throw std::invalid_argument("subset uses bits beyond the signature count");

  FactorialTable fact(set.total_agents);

  auto rec = [&](auto&& self, SignatureSubset x, const boost::dynamic_bitset<>& avail,
                 std::uint64_t agents_in) -> const Count& {
    if (auto it = table.memo.find(x); it != table.memo.end()) return it->second;

    const SignatureSubset phi = detail::admissible_with_avail(set, x, avail);
    Count value = 0;
    if (phi == x) {
      // Every remaining group is harmless; all interleavings work. Also
      // covers the empty subset, contributing 0! = 1.
      value = fact(agents_in);
    } else if (phi != 0) {
      for (std::size_t i = 0; i < s; ++i) {
        if (!((phi >> i) & 1u)) continue;
        const Signature& sig = set.signatures[i];
        const boost::dynamic_bitset<> child_avail = avail & sig.tied;
        const Count& sub =
            self(self, x & ~(SignatureSubset(1) << i), child_avail, agents_in - sig.count);
        value += fact(sig.count) * fact.binomial(agents_in - 1, sig.count - 1) * sub;
      }
    }

    if (value > fact(agents_in))
      throw std::logic_error("internal error: partial count exceeds the orderings available");
    return table.memo.emplace(x, std::move(value)).first->second;
  };

  std::uint64_t agents_in = 0;
  for (std::size_t i = 0; i < s; ++i)
    if ((subset >> i) & 1u) agents_in += set.signatures[i].count;
  return rec(rec, subset, detail::avail_outside(set, subset), agents_in);
}

/// Probability that RSD elects `alternative`. Accepts any profile: duplicate
/// alternative types are merged up front and the merged group's probability
/// is split evenly over its members.
inline Rational rsd_probability(const VotingProfile& profile, const std::string& alternative) {
  profile.alternative_index(alternative);  // report unknown names against the original universe

  auto [reduced, map] = contract_alternative_types(profile);
  std::size_t group_index = 0;
  std::size_t group_size = 1;
  for (std::size_t g = 0; g < map.groups.size(); ++g) {
    const auto& members = map.groups[g].members;
    if (std::find(members.begin(), members.end(), alternative) != members.end()) {
      group_index = g;
      group_size = members.size();
      break;
    }
  }

  const SignatureSet set =
      compute_signatures(reduced, static_cast<AlternativeIndex>(group_index));
  LuckyTable table;
  return Rational(count_lucky(full_subset(set), set, table),
                  factorial(profile.agent_count()) * Count(group_size));
}

/// Full RSD lottery: one signature recursion per distinct alternative type,
/// expanded back to the original alternatives.
inline Lottery rsd_lottery(const VotingProfile& profile) {
  auto [reduced, map] = contract_alternative_types(profile);
  const Count total_orders = factorial(profile.agent_count());

  Lottery contracted;
  contracted.alternatives = reduced.alternatives;
  contracted.probabilities.reserve(reduced.alternative_count());
  for (AlternativeIndex a = 0; a < reduced.alternative_count(); ++a) {
    const SignatureSet set = compute_signatures(reduced, a);
    LuckyTable table;
    contracted.probabilities.emplace_back(count_lucky(full_subset(set), set, table),
                                          total_orders);
  }

  return expand_lottery(contracted, map);
}

}  // namespace rsd

#endif  // RSD_VOTING_HPP_
