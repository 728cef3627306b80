// rsd: exact random-serial-dictatorship probabilities from the command line.
//
// Subcommands:
//   vote    lottery over alternatives (weak orders, ties allowed)
//   assign  fractional house allocation (strict, possibly partial lists)
//   bench   time the counting backends against each other
//   gen     emit a random, seeded profile
//
// Exit codes: 0 ok, 1 usage/internal error, 2 unparsable input or unknown
// agent/house/alternative, 3 instance exceeds a structural capacity limit,
// 4 brute force refused (too many agents to enumerate).

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rsd/rsd.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct ExitWith {
  int code;
  std::string message;
};

struct QueryOptions {
  std::string input;
  std::string algo = "dp";
  std::string output = "text";
  std::string alternative;  // vote target
  std::string agent;        // assign target
  std::string house;        // assign target
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint32_t decimals = 0;  // 0 = render fractions
  std::uint64_t cap = rsd::kDefaultEnumerationCap;
};

struct BenchOptions {
  std::string input;
  std::string setting;
  std::string algos = "dp,brute";
  std::uint32_t repeat = 3;
  std::uint64_t cap = rsd::kDefaultEnumerationCap;
};

struct GenOptions {
  std::string setting;
  std::uint32_t agents = 0;
  std::uint32_t alternatives = 0;
  std::uint32_t houses = 0;
  std::uint32_t types = 0;
  std::uint64_t seed = 0;
};

std::string read_input(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ExitWith{1, "cannot open input file: " + path};
    buffer << file.rdbuf();
  }
  return buffer.str();
}

std::string render_probability(const rsd::Rational& p, std::uint32_t decimals) {
  return decimals == 0 ? rsd::to_fraction_string(p) : rsd::to_decimal_string(p, decimals);
}

json probability_json(const rsd::Rational& p) {
  return json{{"num", boost::multiprecision::numerator(p).str()},
              {"den", boost::multiprecision::denominator(p).str()}};
}

void require_mc_samples(const QueryOptions& opt) {
  if (opt.algo == "mc" && opt.samples == 0)
    throw ExitWith{1, "--algo mc requires --samples"};
}

void warn_house_surplus(const rsd::AssignmentProfile& profile) {
  if (profile.house_count() > profile.agent_count())
    std::cerr << "warning: more houses (" << profile.house_count() << ") than agents ("
              << profile.agent_count() << "); some houses can never be allocated\n";
}

// ---------------------------------------------------------------- vote ----

rsd::Lottery vote_lottery(const rsd::VotingProfile& profile, const QueryOptions& opt) {
  if (opt.algo == "dp") return rsd::rsd_lottery(profile);
  if (opt.algo == "brute") return rsd::brute_force_lottery(profile, opt.cap);
  return rsd::monte_carlo_estimate(profile, opt.samples, opt.seed);
}

int cmd_vote(const QueryOptions& opt) {
  require_mc_samples(opt);
  const auto profile = rsd::parse_voting_profile(read_input(opt.input));
  if (!opt.alternative.empty()) {
    try {
      profile.alternative_index(opt.alternative);
    } catch (const std::invalid_argument& e) {
      throw ExitWith{2, e.what()};
    }
  }

  const rsd::Lottery lottery = vote_lottery(profile, opt);

  if (opt.output == "json") {
    json result = json::array();
    for (std::size_t a = 0; a < lottery.alternatives.size(); ++a) {
      if (!opt.alternative.empty() && lottery.alternatives[a] != opt.alternative) continue;
      json entry{{"alternative", lottery.alternatives[a]},
                 {"probability", probability_json(lottery.probabilities[a])}};
      if (opt.decimals > 0)
        entry["decimal"] = rsd::to_decimal_string(lottery.probabilities[a], opt.decimals);
      result.push_back(std::move(entry));
    }
    const json doc{{"setting", "vote"},
                   {"algorithm", opt.algo},
                   {"n", profile.agent_count()},
                   {"m", profile.alternative_count()},
                   {"result", result}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  if (!opt.alternative.empty()) {
    std::cout << render_probability(lottery.probability(opt.alternative), opt.decimals) << "\n";
    return 0;
  }
  for (std::size_t a = 0; a < lottery.alternatives.size(); ++a)
    std::cout << lottery.alternatives[a] << " "
              << render_probability(lottery.probabilities[a], opt.decimals) << "\n";
  return 0;
}

// -------------------------------------------------------------- assign ----

rsd::FractionalAssignment assign_matrix(const rsd::AssignmentProfile& profile,
                                        const QueryOptions& opt) {
  if (opt.algo == "dp") return rsd::rsd_assignment_matrix(profile);
  if (opt.algo == "brute") return rsd::brute_force_matrix(profile, opt.cap);
  return rsd::monte_carlo_estimate(profile, opt.samples, opt.seed);
}

int cmd_assign(const QueryOptions& opt) {
  require_mc_samples(opt);
  if (opt.agent.empty() != opt.house.empty())
    throw ExitWith{1, "--agent and --house must be given together"};
  const auto profile = rsd::parse_assignment_profile(read_input(opt.input));
  warn_house_surplus(profile);

  std::size_t agent_pos = 0;
  std::size_t house_pos = 0;
  const bool single = !opt.agent.empty();
  if (single) {
    try {
      agent_pos = profile.agent_position(opt.agent);
      house_pos = profile.house_index(opt.house);
    } catch (const std::invalid_argument& e) {
      throw ExitWith{2, e.what()};
    }
  }

  if (single && opt.algo == "dp") {
    const rsd::Rational p = rsd::rsd_assignment_probability(profile, opt.agent, opt.house);
    if (opt.output == "json") {
      json entry{{"agent", opt.agent}, {"house", opt.house}, {"probability", probability_json(p)}};
      if (opt.decimals > 0) entry["decimal"] = rsd::to_decimal_string(p, opt.decimals);
      const json doc{{"setting", "assign"},
                     {"algorithm", opt.algo},
                     {"n", profile.agent_count()},
                     {"m", profile.house_count()},
                     {"result", json::array({entry})}};
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << render_probability(p, opt.decimals) << "\n";
    }
    return 0;
  }

  const rsd::FractionalAssignment matrix = assign_matrix(profile, opt);

  if (opt.output == "json") {
    json result = json::array();
    if (single) {
      json entry{{"agent", opt.agent},
                 {"house", opt.house},
                 {"probability", probability_json(matrix.at(agent_pos, house_pos))}};
      if (opt.decimals > 0)
        entry["decimal"] = rsd::to_decimal_string(matrix.at(agent_pos, house_pos), opt.decimals);
      result.push_back(std::move(entry));
    } else {
      for (std::size_t i = 0; i < matrix.agents.size(); ++i) {
        json entries = json::array();
        for (std::size_t h = 0; h < matrix.houses.size(); ++h) {
          json cell{{"house", matrix.houses[h]},
                    {"probability", probability_json(matrix.rows[i][h])}};
          if (opt.decimals > 0)
            cell["decimal"] = rsd::to_decimal_string(matrix.rows[i][h], opt.decimals);
          entries.push_back(std::move(cell));
        }
        result.push_back(json{{"agent", matrix.agents[i]}, {"entries", std::move(entries)}});
      }
    }
    const json doc{{"setting", "assign"},
                   {"algorithm", opt.algo},
                   {"n", profile.agent_count()},
                   {"m", profile.house_count()},
                   {"result", result}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  if (single) {
    std::cout << render_probability(matrix.at(agent_pos, house_pos), opt.decimals) << "\n";
    return 0;
  }
  std::cout << "agent";
  for (const auto& house : matrix.houses) std::cout << " " << house;
  std::cout << "\n";
  for (std::size_t i = 0; i < matrix.agents.size(); ++i) {
    std::cout << matrix.agents[i];
    for (std::size_t h = 0; h < matrix.houses.size(); ++h)
      std::cout << " " << render_probability(matrix.rows[i][h], opt.decimals);
    std::cout << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- bench ----

std::vector<std::string> split_algos(const std::string& list) {
  std::vector<std::string> algos;
  std::string current;
  for (char c : list) {
    if (c == ',') {
      if (!current.empty()) algos.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) algos.push_back(current);
  if (algos.empty()) throw ExitWith{1, "--algos needs at least one of dp, brute, mc"};
  for (const auto& a : algos)
    if (a != "dp" && a != "brute" && a != "mc")
      throw ExitWith{1, "unknown algorithm in --algos: " + a};
  return algos;
}

template <typename Fn>
double median_ms(std::uint32_t repeat, Fn&& fn) {
  std::vector<double> times;
  times.reserve(repeat);
  for (std::uint32_t r = 0; r < repeat; ++r) {
    const auto start = Clock::now();
    fn();
    times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

int cmd_bench(const BenchOptions& opt) {
  const auto algos = split_algos(opt.algos);
  if (opt.repeat == 0) throw ExitWith{1, "--repeat must be at least 1"};
  const std::string text = read_input(opt.input);
  constexpr std::uint64_t kBenchSamples = 10000;

  if (opt.setting == "vote") {
    const auto profile = rsd::parse_voting_profile(text);
    std::cout << "setting: vote n=" << profile.agent_count() << " m="
              << profile.alternative_count() << "\n";

    rsd::Lottery dp_result, brute_result;
    bool ran_dp = false, ran_brute = false;
    for (const auto& algo : algos) {
      if (algo == "dp") {
        const double ms = median_ms(opt.repeat, [&] { dp_result = rsd::rsd_lottery(profile); });
        ran_dp = true;
        std::cout << "algo dp: median " << ms << " ms over " << opt.repeat << " runs\n";
      } else if (algo == "brute") {
        if (profile.agent_count() > opt.cap) {
          std::cout << "algo brute: refused (" << profile.agent_count()
                    << " agents exceeds cap " << opt.cap << ")\n";
          continue;
        }
        const double ms = median_ms(
            opt.repeat, [&] { brute_result = rsd::brute_force_lottery(profile, opt.cap); });
        ran_brute = true;
        std::cout << "algo brute: median " << ms << " ms over " << opt.repeat << " runs\n";
      } else {
        const double ms = median_ms(opt.repeat, [&] {
          rsd::monte_carlo_estimate(profile, kBenchSamples, 0);
        });
        std::cout << "algo mc: median " << ms << " ms over " << opt.repeat << " runs ("
                  << kBenchSamples << " samples)\n";
      }
    }

    auto [reduced, map] = rsd::contract_alternative_types(profile);
    std::size_t max_signatures = 0, max_memo = 0;
    for (rsd::AlternativeIndex a = 0; a < reduced.alternative_count(); ++a) {
      const auto set = rsd::compute_signatures(reduced, a);
      rsd::LuckyTable table;
      rsd::count_lucky(rsd::full_subset(set), set, table);
      max_signatures = std::max(max_signatures, set.signatures.size());
      max_memo = std::max(max_memo, table.memo.size());
    }
    std::cout << "stats: |S| max=" << max_signatures << ", memo entries max=" << max_memo
              << "\n";
    if (ran_dp && ran_brute)
      std::cout << "results: " << (dp_result == brute_result ? "identical" : "DIFFER") << "\n";
    return ran_dp && ran_brute && dp_result != brute_result ? 1 : 0;
  }

  const auto profile = rsd::parse_assignment_profile(text);
  warn_house_surplus(profile);
  std::cout << "setting: assign n=" << profile.agent_count() << " m=" << profile.house_count()
            << "\n";

  rsd::FractionalAssignment dp_result, brute_result;
  bool ran_dp = false, ran_brute = false;
  for (const auto& algo : algos) {
    if (algo == "dp") {
      const double ms =
          median_ms(opt.repeat, [&] { dp_result = rsd::rsd_assignment_matrix(profile); });
      ran_dp = true;
      std::cout << "algo dp: median " << ms << " ms over " << opt.repeat << " runs\n";
    } else if (algo == "brute") {
      if (profile.agent_count() > opt.cap) {
        std::cout << "algo brute: refused (" << profile.agent_count() << " agents exceeds cap "
                  << opt.cap << ")\n";
        continue;
      }
      const double ms = median_ms(
          opt.repeat, [&] { brute_result = rsd::brute_force_matrix(profile, opt.cap); });
      ran_brute = true;
      std::cout << "algo brute: median " << ms << " ms over " << opt.repeat << " runs\n";
    } else {
      const double ms = median_ms(opt.repeat, [&] {
        rsd::monte_carlo_estimate(profile, kBenchSamples, 0);
      });
      std::cout << "algo mc: median " << ms << " ms over " << opt.repeat << " runs ("
                << kBenchSamples << " samples)\n";
    }
  }

  rsd::AgentTypeSet types = rsd::compute_agent_types(profile);
  rsd::CountVector full;
  for (const auto& t : types.types) full.push_back(t.d);
  std::size_t max_memo = 0;
  for (std::uint32_t j = 0; j < types.type_count(); ++j) {
    rsd::AssignTable table;
    rsd::count_lucky_assign(full, rsd::initial_frontier(types), {j, 0}, types, table);
    max_memo = std::max(max_memo, table.size());
  }
  std::cout << "stats: T=" << types.type_count() << ", memo entries max=" << max_memo << "\n";
  if (ran_dp && ran_brute)
    std::cout << "results: " << (dp_result == brute_result ? "identical" : "DIFFER") << "\n";
  return ran_dp && ran_brute && dp_result != brute_result ? 1 : 0;
}

// ----------------------------------------------------------------- gen ----

std::string format_weak_order(const rsd::WeakOrder& order,
                              const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t c = 0; c < order.classes.size(); ++c) {
    if (c > 0) out += " >";
    for (std::size_t i = 0; i < order.classes[c].size(); ++i) {
      if (i > 0) out += " ~";
      out += " " + names[order.classes[c][i]];
    }
  }
  return out;
}

int cmd_gen(const GenOptions& opt) {
  if (opt.setting == "vote") {
    if (opt.alternatives == 0) throw ExitWith{1, "gen vote requires --alternatives"};
    if (opt.houses != 0) throw ExitWith{1, "gen vote takes --alternatives, not --houses"};
    rsd::GeneratedVoting gen;
    try {
      gen = rsd::generate_voting({opt.agents, opt.alternatives, opt.types, opt.seed});
    } catch (const std::invalid_argument& e) {
      throw ExitWith{1, e.what()};
    }
    std::cout << "alternatives:";
    for (const auto& name : gen.profile.alternatives) std::cout << " " << name;
    std::cout << "\n";
    for (std::size_t j = 0; j < gen.type_orders.size(); ++j) {
      std::cout << "t" << j + 1;
      if (gen.type_counts[j] > 1) std::cout << " *" << gen.type_counts[j];
      std::cout << ":" << format_weak_order(gen.type_orders[j], gen.profile.alternatives)
                << "\n";
    }
    return 0;
  }

  if (opt.houses == 0) throw ExitWith{1, "gen assign requires --houses"};
  if (opt.alternatives != 0) throw ExitWith{1, "gen assign takes --houses, not --alternatives"};
  rsd::GeneratedAssignment gen;
  try {
    gen = rsd::generate_assignment({opt.agents, opt.houses, opt.types, opt.seed});
  } catch (const std::invalid_argument& e) {
    throw ExitWith{1, e.what()};
  }
  warn_house_surplus(gen.profile);
  std::cout << "houses:";
  for (const auto& name : gen.profile.houses) std::cout << " " << name;
  std::cout << "\n";
  for (std::size_t j = 0; j < gen.type_lists.size(); ++j) {
    std::cout << "t" << j + 1;
    if (gen.type_counts[j] > 1) std::cout << " *" << gen.type_counts[j];
    std::cout << ":";
    for (std::size_t i = 0; i < gen.type_lists[j].ranking.size(); ++i) {
      if (i > 0) std::cout << " >";
      std::cout << " " << gen.profile.houses[gen.type_lists[j].ranking[i]];
    }
    std::cout << "\n";
  }
  return 0;
}

void add_query_flags(CLI::App* cmd, QueryOptions& opt) {
  cmd->add_option("input", opt.input, "profile file, or - for standard input")->required();
  cmd->add_option("--algo", opt.algo, "counting backend")
      ->check(CLI::IsMember({"dp", "brute", "mc"}))
      ->capture_default_str();
  cmd->add_option("--samples", opt.samples, "sample count for --algo mc");
  cmd->add_option("--seed", opt.seed, "random seed for --algo mc")->capture_default_str();
  cmd->add_option("--output", opt.output, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--decimals", opt.decimals, "render decimals with this many digits")
      ->check(CLI::Range(1u, 1000u));
  cmd->add_option("--cap", opt.cap, "maximum agents for brute-force enumeration")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact outcome probabilities of random serial dictatorship"};
  app.require_subcommand(1);

  QueryOptions vote_opt;
  auto* vote = app.add_subcommand("vote", "lottery over alternatives");
  add_query_flags(vote, vote_opt);
  vote->add_option("--alternative", vote_opt.alternative,
                   "report a single alternative's probability");

  QueryOptions assign_opt;
  auto* assign = app.add_subcommand("assign", "fractional house allocation");
  add_query_flags(assign, assign_opt);
  assign->add_option("--agent", assign_opt.agent, "agent id for a single-entry query");
  assign->add_option("--house", assign_opt.house, "house name for a single-entry query");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "time the backends");
  bench->add_option("input", bench_opt.input, "profile file, or - for standard input")
      ->required();
  bench->add_option("--setting", bench_opt.setting, "profile kind")
      ->check(CLI::IsMember({"vote", "assign"}))
      ->required();
  bench->add_option("--algos", bench_opt.algos, "comma-separated: dp,brute,mc")
      ->capture_default_str();
  bench->add_option("--repeat", bench_opt.repeat, "timing repetitions (median reported)")
      ->capture_default_str();
  bench->add_option("--cap", bench_opt.cap, "maximum agents for brute-force enumeration")
      ->capture_default_str();

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "emit a random profile");
  gen->add_option("setting", gen_opt.setting, "vote or assign")
      ->check(CLI::IsMember({"vote", "assign"}))
      ->required();
  gen->add_option("--agents", gen_opt.agents, "number of agents")->required();
  gen->add_option("--alternatives", gen_opt.alternatives, "number of alternatives (vote)");
  gen->add_option("--houses", gen_opt.houses, "number of houses (assign)");
  gen->add_option("--types", gen_opt.types, "number of preference types")->required();
  gen->add_option("--seed", gen_opt.seed, "random seed")->required();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(vote)) return cmd_vote(vote_opt);
    if (app.got_subcommand(assign)) return cmd_assign(assign_opt);
    if (app.got_subcommand(bench)) return cmd_bench(bench_opt);
    return cmd_gen(gen_opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the usage message or help text
    return code == 0 ? 0 : 1;
  } catch (const ExitWith& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const rsd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rsd::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rsd::EnumerationCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
