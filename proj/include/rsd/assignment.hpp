#ifndef RSD_ASSIGNMENT_HPP_
#define RSD_ASSIGNMENT_HPP_

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "rsd/errors.hpp"
#include "rsd/model.hpp"
#include "rsd/rational.hpp"

// Exact RSD assignment probabilities. The recursion runs over residual
// problems described by how many agents of each *type* remain (s⃗) and, per
// type, the best house its agents could still take (b⃗), so the cost is
// exponential only in the number of distinct preference lists.

namespace rsd {

/// Distinct preference lists with multiplicities, in first-appearance order.
struct AgentTypeSet {
  struct Type {
    StrictList prefs;
    std::uint64_t d = 0;  // agents sharing this list
  };

  std::vector<Type> types;
  std::vector<std::uint32_t> type_of_agent;  // profile position -> type index
  std::size_t house_count = 0;
  std::uint32_t target_type = 0;  // type of the agent a query asks about

  std::size_t type_count() const { return types.size(); }
};

/// Remaining agents per type (s⃗).
using CountVector = std::vector<std::uint64_t>;

/// Per type, the rank (into its preference list) of the best house its
/// agents might still take (b⃗); rank == list length encodes "none left".
using FrontierVector = std::vector<std::uint32_t>;

inline bool frontier_nil(const AgentTypeSet& types, const FrontierVector& b, std::size_t j) {
  return b[j] >= types.types[j].prefs.ranking.size();
}

/// Every type starts at its most preferred house (rank 0); a type with an
/// empty acceptable list starts exhausted.
inline FrontierVector initial_frontier(const AgentTypeSet& types) {
  return FrontierVector(types.type_count(), 0);
}

/// Groups agents by identical preference lists (hashing each list once), so
/// the run time is linear in the profile size.
inline AgentTypeSet compute_agent_types(const AssignmentProfile& profile) {
  AgentTypeSet set;
  set.house_count = profile.house_count();
  set.type_of_agent.reserve(profile.agent_count());

  std::unordered_map<std::string, std::uint32_t> index_of_key;
  for (const AssignmentAgent& agent : profile.agents) {
    std::string key;
    key.reserve(agent.prefs.ranking.size() * 4);
    for (HouseIndex h : agent.prefs.ranking) detail::append_word(key, h);
    auto [it, inserted] =
        index_of_key.emplace(std::move(key), static_cast<std::uint32_t>(set.types.size()));
    if (inserted)
      set.types.push_back({agent.prefs, 1});
    else
      ++set.types[it->second].d;
    set.type_of_agent.push_back(it->second);
  }
  return set;
}

/// Houses no longer obtainable in the residual problem described by b⃗: every
/// house some type ranks strictly above its frontier house, plus — for a type
/// whose frontier is exhausted — everything that type accepts. Since ranks
/// below b_j cover exactly those houses (and an exhausted frontier sits past
/// the whole list), both clauses reduce to the prefix before b_j.
inline boost::dynamic_bitset<> dominated(const FrontierVector& b, const AgentTypeSet& types) {
  boost::dynamic_bitset<> dom(types.house_count);
  for (std::size_t j = 0; j < types.type_count(); ++j) {
    const auto& ranking = types.types[j].prefs.ranking;
    const std::size_t limit = std::min<std::size_t>(b[j], ranking.size());
    for (std::size_t r = 0; r < limit; ++r) dom.set(ranking[r]);
  }
  return dom;
}

/// Next house in type j's list after the one at `rank`; exhausted when
/// `rank` was the last acceptable house.
inline std::uint32_t increment(std::size_t j, std::uint32_t rank, const AgentTypeSet& types) {
  const std::size_t length = types.types[j].prefs.ranking.size();
  if (rank >= length)
    throw std::invalid_argument("cannot advance an exhausted preference frontier");
  return rank + 1;
}

/// Advances every frontier coordinate past dominated houses until none points
/// at a dominated house (or is exhausted). Each step moves one coordinate
/// forward, so at most T·m steps run; the result is order-independent because
/// the dominated set only ever grows.
inline FrontierVector closure(FrontierVector b, const AgentTypeSet& types) {
  bool changed = true;
  while (changed) {
    changed = false;
    const boost::dynamic_bitset<> dom = dominated(b, types);
    for (std::size_t j = 0; j < types.type_count(); ++j) {
      const auto& ranking = types.types[j].prefs.ranking;
      while (b[j] < ranking.size() && dom.test(ranking[b[j]])) {
        ++b[j];
        changed = true;
      }
    }
  }
  return b;
}

/// Memo table for one target type: per canonical residual state, the number
/// of lucky orderings for every query house at once (the house only enters
/// the recursion through its final, leaf-level term).
struct AssignTable {
  std::unordered_map<std::string, std::vector<Count>> memo;

  std::size_t size() const { return memo.size(); }

  /// Decoded (s⃗, b⃗) keys, for diagnostics and invariant checks.
  std::vector<std::pair<CountVector, FrontierVector>> states() const {
    std::vector<std::pair<CountVector, FrontierVector>> out;
    out.reserve(memo.size());
    for (const auto& [key, value] : memo) {
      const std::size_t t = key.size() / 12;
      CountVector s(t);
      FrontierVector b(t);
      for (std::size_t j = 0; j < t; ++j) {
        std::uint64_t lo = 0, hi = 0, rank = 0;
        for (int byte = 0; byte < 4; ++byte) {
          lo |= static_cast<std::uint64_t>(static_cast<unsigned char>(key[j * 12 + byte]))
                << (8 * byte);
          hi |= static_cast<std::uint64_t>(static_cast<unsigned char>(key[j * 12 + 4 + byte]))
                << (8 * byte);
          rank |= static_cast<std::uint64_t>(static_cast<unsigned char>(key[j * 12 + 8 + byte]))
                  << (8 * byte);
        }
        s[j] = lo | (hi << 32);
        b[j] = static_cast<std::uint32_t>(rank);
      }
      out.emplace_back(std::move(s), std::move(b));
    }
    return out;
  }
};

/// Query: which agent type the asked-about agent belongs to, and which house.
struct AssignQuery {
  std::uint32_t target_type = 0;
  HouseIndex house = 0;
};

namespace detail {

inline std::string pack_assign_state(const CountVector& s, const FrontierVector& b) {
  std::string key;
  key.reserve(s.size() * 12);
  for (std::size_t j = 0; j < s.size(); ++j) {
    append_word(key, static_cast<std::uint32_t>(s[j] & 0xffffffffu));
    append_word(key, static_cast<std::uint32_t>(s[j] >> 32));
    append_word(key, b[j]);
  }
  return key;
}

struct AssignContext {
  const AgentTypeSet& types;
  std::uint32_t jstar;
  std::size_t m;
  FactorialTable fact;  // up to the total number of agents
  AssignTable& table;
};

/// Canonicalizes a state in place: advances the frontier past dominated
/// houses, then cashes out types whose frontier is exhausted while agents
/// remain — those agents receive nothing, so their positions contribute a
/// free interleaving factor C(Σs, s_j)·s_j! and their count drops to zero.
/// Returns that factor, or 0 when the target type itself is cashed out
/// (its agent can then no longer receive anything).
inline Count normalize_assign_state(const AssignContext& ctx, CountVector& s, FrontierVector& b) {
  b = closure(std::move(b), ctx.types);
  Count multiplier = 1;
  std::uint64_t total = std::accumulate(s.begin(), s.end(), std::uint64_t{0});
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == 0 || !frontier_nil(ctx.types, b, j)) continue;
    if (j == ctx.jstar) return 0;
    multiplier *= ctx.fact.binomial(total, s[j]) * ctx.fact(s[j]);
    total -= s[j];
    s[j] = 0;
  }
  return multiplier;
}

/// Core recursion over canonical states (frontier non-degenerate, exhausted
/// types emptied, target type still populated). Conditions on which type
/// supplies the first agent of the residual ordering; the target agent
/// itself leading contributes (Σs−1)! orderings to its frontier house only.
inline const std::vector<Count>& assign_vector(AssignContext& ctx, const CountVector& s,
                                               const FrontierVector& b) {
  const std::string key = pack_assign_state(s, b);
  if (auto it = ctx.table.memo.find(key); it != ctx.table.memo.end()) return it->second;

  const std::size_t t = ctx.types.type_count();
  const std::uint64_t total = std::accumulate(s.begin(), s.end(), std::uint64_t{0});
  if (s[ctx.jstar] == 0) throw std::logic_error("internal error: target type emptied mid-recursion");

  std::vector<Count> value(ctx.m, Count(0));
  for (std::size_t j = 0; j < t; ++j) {
    if (s[j] == 0) continue;
    const std::uint64_t coefficient = j == ctx.jstar ? s[j] - 1 : s[j];
    if (coefficient == 0) continue;

    CountVector child_s = s;
    --child_s[j];
    FrontierVector child_b = b;
    child_b[j] = increment(j, b[j], ctx.types);
    const Count multiplier = normalize_assign_state(ctx, child_s, child_b);
    if (multiplier == 0) continue;

    const std::vector<Count>& child = assign_vector(ctx, child_s, child_b);
    const Count factor = Count(coefficient) * multiplier;
    for (std::size_t h = 0; h < ctx.m; ++h)
      if (child[h] != 0) value[h] += factor * child[h];
  }

  const auto& target_ranking = ctx.types.types[ctx.jstar].prefs.ranking;
  value[target_ranking[b[ctx.jstar]]] += ctx.fact(total - 1);

  // Self-checks: counts cannot exceed the orderings of the remaining agents;
  // houses already unobtainable here must have stayed at zero; the houses
  // consumed so far (tracked through the frontier) fit in the market.
  const Count& bound = ctx.fact(total);
  std::uint64_t consumed = 0;
  for (std::size_t j = 0; j < t; ++j)
    if (!frontier_nil(ctx.types, b, j)) consumed += ctx.types.types[j].d - s[j];
  if (consumed > ctx.m)
    throw std::logic_error("internal error: residual state consumed more houses than exist");
  const boost::dynamic_bitset<> dom = dominated(b, ctx.types);
  for (std::size_t h = 0; h < ctx.m; ++h) {
    if (value[h] > bound)
      throw std::logic_error("internal error: partial count exceeds the orderings available");
    if (dom.test(h) && value[h] != 0)
      throw std::logic_error("internal error: counted an ordering for an unobtainable house");
  }

  return ctx.table.memo.emplace(key, std::move(value)).first->second;
}

}  // namespace detail

/// Number of orderings of the residual agents (s⃗ of them, houses narrowed by
/// b⃗) under which serial dictatorship hands `query.house` to a fixed agent of
/// type `query.target_type`. The table may be reused across query houses for
/// the same target type.
inline Count count_lucky_assign(const CountVector& s, const FrontierVector& b,
                                const AssignQuery& query, const AgentTypeSet& types,
                                AssignTable& table) {
  const std::size_t t = types.type_count();
  if (s.size() != t || b.size() != t)
    throw std::invalid_argument("state vectors must have one entry per agent type");
  if (query.target_type >= t) throw std::invalid_argument("unknown target type");
  if (query.house >= types.house_count) throw std::invalid_argument("unknown house index");
  std::uint64_t population = 0;
  for (std::size_t j = 0; j < t; ++j) {
    if (s[j] > types.types[j].d)
      throw std::invalid_argument("residual count exceeds the type's population");
    population += types.types[j].d;
  }

  detail::AssignContext ctx{types, query.target_type, types.house_count,
                            FactorialTable(population), table};
  CountVector cs = s;
  FrontierVector cb = b;
  const Count multiplier = detail::normalize_assign_state(ctx, cs, cb);
  if (multiplier == 0 || cs[ctx.jstar] == 0) return 0;
  const std::vector<Count>& vec = detail::assign_vector(ctx, cs, cb);
  return multiplier * vec[query.house];
}

/// Probability that RSD gives house `house_name` to agent `agent_id`.
inline Rational rsd_assignment_probability(const AssignmentProfile& profile,
                                           const std::string& agent_id,
                                           const std::string& house_name) {
  const std::size_t position = profile.agent_position(agent_id);
  const HouseIndex house = profile.house_index(house_name);

  AgentTypeSet types = compute_agent_types(profile);
  types.target_type = types.type_of_agent[position];

  CountVector s;
  s.reserve(types.type_count());
  for (const auto& type : types.types) s.push_back(type.d);

  AssignTable table;
  const Count lucky =
      count_lucky_assign(s, initial_frontier(types), {types.target_type, house}, types, table);
  return Rational(lucky, factorial(profile.agent_count()));
}

/// Full RSD fractional assignment. One counting pass per agent type covers
/// every house (the table is shared across the row); agents with identical
/// preference lists receive identical rows.
inline FractionalAssignment rsd_assignment_matrix(const AssignmentProfile& profile) {
  const std::size_t n = profile.agent_count();
  const std::size_t m = profile.house_count();
  AgentTypeSet types = compute_agent_types(profile);
  const Count total_orders = factorial(n);

  CountVector full;
  full.reserve(types.type_count());
  for (const auto& type : types.types) full.push_back(type.d);

  std::vector<std::vector<Rational>> row_of_type;
  row_of_type.reserve(types.type_count());
  for (std::uint32_t j = 0; j < types.type_count(); ++j) {
    types.target_type = j;
    AssignTable table;
    std::vector<Rational> row(m);
    for (HouseIndex h = 0; h < m; ++h) {
      const Count lucky =
          count_lucky_assign(full, initial_frontier(types), {j, h}, types, table);
      row[h] = Rational(lucky, total_orders);
    }
    row_of_type.push_back(std::move(row));
  }

  FractionalAssignment result;
  result.houses = profile.houses;
  result.agents.reserve(n);
  result.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.agents.push_back(profile.agents[i].id);
    result.rows.push_back(row_of_type[types.type_of_agent[i]]);
  }
  return result;
}

}  // namespace rsd

#endif  // RSD_ASSIGNMENT_HPP_
