#ifndef RSD_IO_HPP_
#define RSD_IO_HPP_

#include <cctype>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rsd/errors.hpp"
#include "rsd/model.hpp"

// Profile text formats (UTF-8, line oriented, '#' starts a comment, blank
// lines ignored):
//
//   alternatives: a b c d          houses: a b c
//   1: a ~ b ~ c > d               1: a > b > c
//   t *3: a > b ~ c > d            2: b            # partial list
//                                  3:              # nothing acceptable
//
// Identifiers match [A-Za-z0-9_-]+. An optional " *<count>" suffix on an
// agent id expands into <count> agents with identical preferences, named
// <id>-1 .. <id>-<count> (a bare <id> when count is 1).

namespace rsd {
namespace detail {

inline bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

/// Cursor over one line; columns are 1-based for error reporting.
class LineCursor {
 public:
  LineCursor(std::string_view text, std::size_t line_no) : text_(text), line_(line_no) {}

  void skip_spaces() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_spaces();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_spaces();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::size_t column() const { return pos_ + 1; }
  std::size_t line() const { return line_; }

  bool consume(char c) {
    skip_spaces();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!consume(c)) fail(std::string("expected '") + c + "' " + what);
  }

  std::string identifier(const char* what) {
    skip_spaces();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint64_t integer(const char* what) {
    skip_spaces();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > (std::uint64_t{1} << 32)) fail("count is too large");
      ++pos_;
    }
    if (pos_ == start) fail(std::string("expected ") + what);
    return value;
  }

  [[noreturn]] void fail(const std::string& message) { throw ParseError(message, line_, column()); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

/// Splits into (line_no, content) pairs with comments stripped and blank
/// lines dropped.
inline std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') {
        blank = false;
        break;
      }
    if (!blank) lines.emplace_back(line_no, line);
    begin = end + 1;
    if (end == text.size()) break;
  }
  return lines;
}

struct AgentHeader {
  std::string id;
  std::uint64_t count;
};

inline AgentHeader parse_agent_header(LineCursor& cur) {
  AgentHeader header;
  header.id = cur.identifier("an agent identifier");
  header.count = 1;
  if (cur.consume('*')) {
    header.count = cur.integer("a multiplicity count after '*'");
    if (header.count == 0) cur.fail("multiplicity must be at least 1");
  }
  cur.expect(':', "after the agent identifier");
  return header;
}

inline std::string expanded_id(const AgentHeader& header, std::uint64_t k) {
  if (header.count == 1) return header.id;
  return header.id + "-" + std::to_string(k + 1);
}

}  // namespace detail

/// Parses the voting profile format. Indifference classes keep their written
/// order; a " *k" multiplicity expands into k agents with the same order.
inline VotingProfile parse_voting_profile(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty input: expected an 'alternatives:' line", 1, 1);

  detail::LineCursor header(lines[0].second, lines[0].first);
  if (header.identifier("the keyword 'alternatives'") != "alternatives")
    header.fail("the first line must start with 'alternatives:'");
  header.expect(':', "after 'alternatives'");
  std::vector<std::string> alternatives;
  std::unordered_map<std::string, AlternativeIndex> index;
  while (!header.at_end()) {
    std::string name = header.identifier("an alternative identifier");
    if (!index.emplace(name, static_cast<AlternativeIndex>(alternatives.size())).second)
      header.fail("duplicate alternative: " + name);
    alternatives.push_back(std::move(name));
  }
  if (alternatives.empty()) header.fail("expected at least one alternative");

  std::vector<VotingAgent> agents;
  std::unordered_set<std::string> agent_ids;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    detail::LineCursor cur(lines[li].second, lines[li].first);
    const auto agent = detail::parse_agent_header(cur);

    std::vector<std::vector<AlternativeIndex>> classes;
    std::vector<bool> seen(alternatives.size(), false);
    std::size_t covered = 0;
    while (true) {
      std::vector<AlternativeIndex> cls;
      while (true) {
        std::string name = cur.identifier("an alternative identifier");
        auto it = index.find(name);
        if (it == index.end()) cur.fail("unknown alternative: " + name);
        if (seen[it->second]) cur.fail("duplicate alternative in preference: " + name);
        seen[it->second] = true;
        ++covered;
        cls.push_back(it->second);
        if (!cur.consume('~')) break;
      }
      classes.push_back(std::move(cls));
      if (cur.at_end()) break;
      cur.expect('>', "or '~' between alternatives");
    }
    if (covered != alternatives.size())
      for (std::size_t a = 0; a < alternatives.size(); ++a)
        if (!seen[a])
          cur.fail("incomplete weak order: agent " + agent.id + " does not rank " + alternatives[a]);

    for (std::uint64_t k = 0; k < agent.count; ++k) {
      std::string id = detail::expanded_id(agent, k);
      if (!agent_ids.insert(id).second) cur.fail("duplicate agent identifier: " + id);
      agents.push_back({std::move(id), make_weak_order(classes, alternatives.size())});
    }
  }
  if (agents.empty())
    throw ParseError("expected at least one agent line", lines.back().first + 1, 1);

  return make_voting_profile(std::move(alternatives), std::move(agents));
}

/// Parses the assignment profile format. The part after the colon may be
/// empty (the agent finds no house acceptable).
inline AssignmentProfile parse_assignment_profile(std::string_view text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw ParseError("empty input: expected a 'houses:' line", 1, 1);

  detail::LineCursor header(lines[0].second, lines[0].first);
  if (header.identifier("the keyword 'houses'") != "houses")
    header.fail("the first line must start with 'houses:'");
  header.expect(':', "after 'houses'");
  std::vector<std::string> houses;
  std::unordered_map<std::string, HouseIndex> index;
  while (!header.at_end()) {
    std::string name = header.identifier("a house identifier");
    if (!index.emplace(name, static_cast<HouseIndex>(houses.size())).second)
      header.fail("duplicate house: " + name);
    houses.push_back(std::move(name));
  }
  if (houses.empty()) header.fail("expected at least one house");

  std::vector<AssignmentAgent> agents;
  std::unordered_set<std::string> agent_ids;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    detail::LineCursor cur(lines[li].second, lines[li].first);
    const auto agent = detail::parse_agent_header(cur);

    StrictList prefs;
    std::vector<bool> seen(houses.size(), false);
    if (!cur.at_end()) {
      while (true) {
        std::string name = cur.identifier("a house identifier");
        auto it = index.find(name);
        if (it == index.end()) cur.fail("unknown house: " + name);
        if (seen[it->second]) cur.fail("duplicate house in ranking: " + name);
        seen[it->second] = true;
        prefs.ranking.push_back(it->second);
        if (cur.at_end()) break;
        cur.expect('>', "between houses");
      }
    }

    for (std::uint64_t k = 0; k < agent.count; ++k) {
      std::string id = detail::expanded_id(agent, k);
      if (!agent_ids.insert(id).second) cur.fail("duplicate agent identifier: " + id);
      agents.push_back({std::move(id), prefs});
    }
  }
  if (agents.empty())
    throw ParseError("expected at least one agent line", lines.back().first + 1, 1);

  return make_assignment_profile(std::move(houses), std::move(agents));
}

inline VotingProfile parse_voting_profile(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return parse_voting_profile(std::string_view(text));
}

inline AssignmentProfile parse_assignment_profile(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return parse_assignment_profile(std::string_view(text));
}

inline std::string serialize(const VotingProfile& profile) {
  std::string out = "alternatives:";
  for (const auto& name : profile.alternatives) out += " " + name;
  out += "\n";
  for (const auto& agent : profile.agents) {
    out += agent.id + ":";
    for (std::size_t c = 0; c < agent.order.classes.size(); ++c) {
      if (c > 0) out += " >";
      for (std::size_t i = 0; i < agent.order.classes[c].size(); ++i) {
        if (i > 0) out += " ~";
        out += " " + profile.alternatives[agent.order.classes[c][i]];
      }
    }
    out += "\n";
  }
  return out;
}

inline std::string serialize(const AssignmentProfile& profile) {
  std::string out = "houses:";
  for (const auto& name : profile.houses) out += " " + name;
  out += "\n";
  for (const auto& agent : profile.agents) {
    out += agent.id + ":";
    for (std::size_t i = 0; i < agent.prefs.ranking.size(); ++i) {
      if (i > 0) out += " >";
      out += " " + profile.houses[agent.prefs.ranking[i]];
    }
    out += "\n";
  }
  return out;
}

}  // namespace rsd

#endif  // RSD_IO_HPP_
