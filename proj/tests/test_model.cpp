// Data-model layer: weak orders, profile construction, alternative-type
// merging, exact rationals, and the text formats.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "rsd/rsd.hpp"

using rsd::AlternativeIndex;
using rsd::Rational;
using support::contains;
using support::thrown_message;

using Classes = std::vector<std::vector<AlternativeIndex>>;

TEST_CASE("weak orders validate and expose class ranks") {
  const rsd::WeakOrder order = rsd::make_weak_order(Classes{{1, 0}, {2}}, 3);
  CHECK(order.classes == Classes{{0, 1}, {2}});  // members sorted within a class
  CHECK(order.rank(0) == 0);
  CHECK(order.rank(1) == 0);
  CHECK(order.rank(2) == 1);
  CHECK(order.strictly_prefers(0, 2));
  CHECK_FALSE(order.strictly_prefers(2, 0));
  CHECK_FALSE(order.strictly_prefers(0, 1));
  CHECK(order.indifferent(0, 1));
  CHECK_FALSE(order.indifferent(0, 2));

  CHECK_THROWS_AS(rsd::make_weak_order(Classes{{0}, {}, {1}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_weak_order(Classes{{0}, {3}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_weak_order(Classes{{0, 1}, {1}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_weak_order(Classes{{0}}, 2), std::invalid_argument);
}

TEST_CASE("voting profiles enforce unique names and complete orders") {
  const auto profile = support::example_voting();
  CHECK(profile.alternative_count() == 4);
  CHECK(profile.agent_count() == 3);
  CHECK(profile.alternative_index("c") == 2);
  CHECK_THROWS_AS(profile.alternative_index("zz"), std::invalid_argument);

  auto order2 = rsd::make_weak_order(Classes{{0}, {1}}, 2);
  CHECK_THROWS_AS(rsd::make_voting_profile({}, {{"1", order2}}), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_voting_profile({"a", "b"}, {}), std::invalid_argument);
  CHECK(contains(thrown_message<std::invalid_argument>([&] {
          rsd::make_voting_profile({"a", "a"}, {{"1", order2}});
        }),
        "duplicate alternative: a"));
  CHECK(contains(thrown_message<std::invalid_argument>([&] {
          rsd::make_voting_profile({"a", "b"}, {{"1", order2}, {"1", order2}});
        }),
        "duplicate agent identifier: 1"));
  auto order3 = rsd::make_weak_order(Classes{{0}, {1}, {2}}, 3);
  CHECK(contains(thrown_message<std::invalid_argument>([&] {
          rsd::make_voting_profile({"a", "b"}, {{"1", order3}});
        }),
        "does not rank every alternative"));
}

TEST_CASE("assignment profiles enforce valid strict lists") {
  const auto profile = support::example_assignment();
  CHECK(profile.house_count() == 3);
  CHECK(profile.agent_count() == 3);
  CHECK(profile.house_index("b") == 1);
  CHECK(profile.agent_position("3") == 2);
  CHECK_THROWS_AS(profile.house_index("zz"), std::invalid_argument);
  CHECK_THROWS_AS(profile.agent_position("zz"), std::invalid_argument);
  CHECK(profile.agents[0].prefs.accepts(2));
  CHECK_FALSE(rsd::StrictList{{0}}.accepts(1));

  CHECK_THROWS_AS(rsd::make_assignment_profile({}, {{"1", {}}}), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_assignment_profile({"a"}, {}), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_assignment_profile({"a", "a"}, {{"1", {}}}), std::invalid_argument);
  CHECK_THROWS_AS(rsd::make_assignment_profile({"a"}, {{"1", {}}, {"1", {}}}),
                  std::invalid_argument);
  CHECK(contains(thrown_message<std::invalid_argument>([&] {
          rsd::make_assignment_profile({"a"}, {{"1", rsd::StrictList{{1}}}});
        }),
        "ranks a house outside the profile"));
  CHECK(contains(thrown_message<std::invalid_argument>([&] {
          rsd::make_assignment_profile({"a", "b"}, {{"1", rsd::StrictList{{0, 0}}}});
        }),
        "ranks a house twice"));
}

TEST_CASE("lotteries and fractional assignments are queryable by name") {
  rsd::Lottery lottery{{"a", "b"}, {Rational(1, 3), Rational(2, 3)}};
  CHECK(lottery.probability("b") == Rational(2, 3));
  CHECK_THROWS_AS(lottery.probability("zz"), std::invalid_argument);
  CHECK(lottery.total() == Rational(1));

  rsd::FractionalAssignment matrix;
  matrix.agents = {"1", "2"};
  matrix.houses = {"a", "b"};
  matrix.rows = {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(0)}};
  CHECK(matrix.at(1, 0) == Rational(1, 2));
  CHECK(matrix.row_sum(0) == Rational(1));
  CHECK(matrix.row_sum(1) == Rational(1, 2));
  CHECK(matrix.column_sum(0) == Rational(1));
  CHECK(matrix.column_sum(1) == Rational(1, 2));
}

TEST_CASE("alternatives nobody separates merge into one super-alternative") {
  // Both agents are indifferent between a and b everywhere, so {a, b} is one
  // alternative type; c stays on its own.
  const auto tied = rsd::make_voting_profile(
      {"a", "b", "c"}, {{"1", rsd::make_weak_order(Classes{{0, 1}, {2}}, 3)},
                        {"2", rsd::make_weak_order(Classes{{2}, {0, 1}}, 3)}});
  CHECK_FALSE(rsd::is_simplified(tied));
  CHECK(rsd::is_simplified(support::example_voting()));

  const auto [reduced, map] = rsd::contract_alternative_types(tied);
  CHECK(reduced.alternatives == std::vector<std::string>{"a", "c"});
  CHECK(rsd::is_simplified(reduced));
  CHECK_FALSE(map.is_identity());
  REQUIRE(map.groups.size() == 2);
  CHECK(map.groups[0].super_id == "a");
  CHECK(map.groups[0].members == std::vector<std::string>{"a", "b"});
  CHECK(map.groups[1].members == std::vector<std::string>{"c"});
  CHECK(reduced.agents[0].order.classes == Classes{{0}, {1}});
  CHECK(reduced.agents[1].order.classes == Classes{{1}, {0}});

  SUBCASE("expanding a lottery splits a group's probability evenly") {
    const rsd::Lottery contracted{{"a", "c"}, {Rational(3, 4), Rational(1, 4)}};
    const rsd::Lottery expanded = rsd::expand_lottery(contracted, map);
    CHECK(expanded.alternatives == std::vector<std::string>{"a", "b", "c"});
    CHECK(expanded.probabilities ==
          std::vector<Rational>{Rational(3, 8), Rational(3, 8), Rational(1, 4)});
    CHECK(expanded.total() == Rational(1));

    CHECK_THROWS_AS(rsd::expand_lottery(rsd::Lottery{{"zz"}, {Rational(1)}}, map),
                    std::invalid_argument);
    CHECK_THROWS_AS(rsd::expand_lottery(rsd::Lottery{{"a"}, {Rational(1)}}, map),
                    std::invalid_argument);  // group c missing
  }

  SUBCASE("a simplified profile contracts to itself") {
    const auto profile = support::example_voting();
    const auto [same, identity] = rsd::contract_alternative_types(profile);
    CHECK(same == profile);
    CHECK(identity.is_identity());
    const rsd::Lottery lottery{profile.alternatives,
                               {Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)}};
    CHECK(rsd::expand_lottery(lottery, identity) == lottery);
  }
}

TEST_CASE("profile text round-trips through parse and serialize") {
  const std::string vote_text =
      "alternatives: a b c d   # trailing comment\n"
      "\n"
      "1: a ~ b ~ c > d\r\n"
      "2: b ~ d > a ~ c\n"
      "3: c > a ~ b ~ d\n";
  const auto parsed = rsd::parse_voting_profile(vote_text);
  CHECK(parsed == support::example_voting());
  CHECK(rsd::parse_voting_profile(rsd::serialize(parsed)) == parsed);

  const auto assign = support::example_assignment();
  CHECK(rsd::parse_assignment_profile(rsd::serialize(assign)) == assign);
  CHECK(rsd::serialize(assign) ==
        "houses: a b c\n1: a > b > c\n2: a > b > c\n3: b > a > c\n");

  std::istringstream stream(vote_text);
  CHECK(rsd::parse_voting_profile(stream) == parsed);
}

TEST_CASE("agent multiplicity expands into numbered copies") {
  const auto profile = rsd::parse_voting_profile(
      "alternatives: a b c\n"
      "v *2: a ~ b > c\n"
      "w: c > a ~ b\n");
  REQUIRE(profile.agent_count() == 3);
  CHECK(profile.agents[0].id == "v-1");
  CHECK(profile.agents[1].id == "v-2");
  CHECK(profile.agents[2].id == "w");
  CHECK(profile.agents[0].order == profile.agents[1].order);

  const auto assign = rsd::parse_assignment_profile(
      "houses: a b\n"
      "x *3: b > a\n"
      "y:\n");
  REQUIRE(assign.agent_count() == 4);
  CHECK(assign.agents[2].id == "x-3");
  CHECK(assign.agents[3].prefs.ranking.empty());

  CHECK(contains(thrown_message<rsd::ParseError>([&] {
          rsd::parse_voting_profile("alternatives: a\nv *0: a\n");
        }),
        "multiplicity must be at least 1"));
}

TEST_CASE("parse errors carry a position and a reason") {
  auto check_parse = [](const std::string& text, std::size_t line, const std::string& reason) {
    try {
      rsd::parse_voting_profile(text);
      FAIL_CHECK("expected a parse error for: " << text);
    } catch (const rsd::ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() >= 1);
      CHECK(contains(e.what(), reason));
      CHECK(contains(e.what(), "line " + std::to_string(line)));
    }
  };
  check_parse("", 1, "empty input");
  check_parse("agents: a\n", 1, "must start with 'alternatives:'");
  check_parse("alternatives:\n", 1, "at least one alternative");
  check_parse("alternatives: a a\n", 1, "duplicate alternative: a");
  check_parse("alternatives: a b\n1: a > zz\n", 2, "unknown alternative: zz");
  check_parse("alternatives: a b\n1: a\n", 2, "incomplete weak order");
  check_parse("alternatives: a b\n1: a > a ~ b\n", 2, "duplicate alternative in preference");
  check_parse("alternatives: a b\n1 a > b\n", 2, "expected ':'");
  check_parse("alternatives: a b\n1: a ? b\n", 2, "expected '>'");
  check_parse("alternatives: a b\n", 2, "at least one agent");

  try {
    rsd::parse_assignment_profile("houses: a b\n1: a > b > a\n");
    FAIL_CHECK("expected a parse error");
  } catch (const rsd::ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(contains(e.what(), "duplicate house in ranking: a"));
  }
  CHECK_THROWS_AS(rsd::parse_assignment_profile("alternatives: a\n1: a\n"), rsd::ParseError);
}

TEST_CASE("factorial tables and binomials are exact") {
  const rsd::FactorialTable fact(10);
  CHECK(fact.limit() == 10);
  CHECK(fact(0) == 1);
  CHECK(fact(1) == 1);
  CHECK(fact(5) == 120);
  CHECK(fact(10) == 3628800);
  CHECK(fact.binomial(5, 2) == 10);
  CHECK(fact.binomial(10, 10) == 1);
  CHECK(fact.binomial(4, 0) == 1);
  CHECK(fact.binomial(3, 5) == 0);
  CHECK_THROWS_AS(fact(11), std::out_of_range);

  CHECK(rsd::factorial(0) == 1);
  CHECK(rsd::factorial(20) == rsd::Count("2432902008176640000"));
  CHECK(rsd::factorial(25) == rsd::Count("15511210043330985984000000"));
}

TEST_CASE("rationals render as fractions or rounded decimals") {
  CHECK(rsd::to_fraction_string(Rational(1, 2)) == "1/2");
  CHECK(rsd::to_fraction_string(Rational(2, 4)) == "1/2");
  CHECK(rsd::to_fraction_string(Rational(0)) == "0");
  CHECK(rsd::to_fraction_string(Rational(3)) == "3");
  CHECK(rsd::to_fraction_string(Rational(-1, 2)) == "-1/2");

  CHECK(rsd::to_decimal_string(Rational(1, 2), 2) == "0.50");
  CHECK(rsd::to_decimal_string(Rational(2, 3), 3) == "0.667");
  CHECK(rsd::to_decimal_string(Rational(1, 8), 2) == "0.13");  // half rounds away from zero
  CHECK(rsd::to_decimal_string(Rational(1), 2) == "1.00");
  CHECK(rsd::to_decimal_string(Rational(-1, 2), 1) == "-0.5");
  CHECK(rsd::to_decimal_string(Rational(1, 3), 6) == "0.333333");
  CHECK_THROWS_AS(rsd::to_decimal_string(Rational(1, 2), 0), std::invalid_argument);
}

TEST_CASE("error types expose their parameters") {
  const rsd::ParseError parse("bad token", 3, 7);
  CHECK(parse.line() == 3);
  CHECK(parse.column() == 7);
  CHECK(std::string(parse.what()) == "line 3, column 7: bad token");

  const rsd::CapacityError capacity("widgets", 70, 64);
  CHECK(capacity.parameter() == "widgets");
  CHECK(capacity.value() == 70);
  CHECK(capacity.limit() == 64);
  CHECK(contains(capacity.what(), "exceeds the supported limit of 64"));

  const rsd::EnumerationCapError cap(50, 10);
  CHECK(cap.agents() == 50);
  CHECK(cap.cap() == 10);
  CHECK(contains(cap.what(), "use the dynamic program or the sampler"));
}
