#include "knowhow/system.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace knowhow {

namespace {

constexpr std::size_t kMaxProfiles = std::size_t{1} << 22;

bool token_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), token_char);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

template <typename It>
std::size_t hash_range(std::size_t seed, It first, It last) {
  for (; first != last; ++first)
    seed ^= std::size_t(*first) + 0x9e3779b97f4a7c15ULL + (seed << 6) +
            (seed >> 2);
  return seed;
}

}  // namespace

// ------------------------------------------------------------------ History

History History::extended(ProfileId s, StateId w) const {
  History h = *this;
  h.profiles.push_back(s);
  h.states.push_back(w);
  return h;
}

History History::prefix() const {
  History h = *this;
  h.profiles.pop_back();
  h.states.pop_back();
  return h;
}

std::size_t HistoryHash::operator()(const History& h) const noexcept {
  std::size_t seed = hash_range(h.states.size(), h.states.begin(),
                                h.states.end());
  return hash_range(seed, h.profiles.begin(), h.profiles.end());
}

// ------------------------------------------------------------------- System

EpistemicTransitionSystem::EpistemicTransitionSystem(
    const SystemDescription& d)
    : agents_(d.agents), choices_(d.choices), states_(d.states) {
  if (agents_.empty()) throw SystemError("no agents declared");
  if (choices_.empty()) throw SystemError("no choices declared");
  if (states_.empty()) throw SystemError("no states declared");
  if (agents_.size() > kMaxAgents)
    throw SystemError("more than 64 agents are not supported");

  auto check_unique = [](std::vector<std::string>& names, const char* what,
                         bool identifier) {
    for (const auto& n : names)
      if (identifier ? !is_identifier(n) : !is_token(n))
        throw SystemError(std::string("malformed ") + what + " name '" + n +
                          "'");
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end())
      throw SystemError(std::string("duplicate ") + what + " '" + *dup + "'");
  };
  check_unique(agents_, "agent", true);
  check_unique(choices_, "choice", false);
  check_unique(states_, "state", true);
  std::sort(agents_.begin(), agents_.end());
  std::sort(choices_.begin(), choices_.end());
  for (StateId w = 0; w < states_.size(); ++w) state_index_[states_[w]] = w;

  // Partitions: listed blocks must be disjoint; unlisted states are
  // singletons.
  block_.assign(agents_.size(), std::vector<std::size_t>(states_.size()));
  for (const auto& [agent, blocks] : d.indist) {
    AgentId a = agent_id(agent);
    std::vector<bool> seen(states_.size(), false);
    std::size_t next = 0;
    std::vector<std::size_t>& block = block_[a];
    std::vector<bool> assigned(states_.size(), false);
    for (const auto& b : blocks) {
      for (const auto& name : b) {
        StateId w = state_id(name);
        if (seen[w])
          throw SystemError("state '" + name +
                            "' appears in more than one indistinguishability "
                            "block of agent '" + agent + "'");
        seen[w] = true;
        block[w] = next;
        assigned[w] = true;
      }
      ++next;
    }
    for (StateId w = 0; w < states_.size(); ++w)
      if (!assigned[w]) block[w] = next++;
  }
  for (const auto& agent : agents_) {
    if (d.indist.count(agent)) continue;
    AgentId a = agent_id(agent);
    for (StateId w = 0; w < states_.size(); ++w) block_[a][w] = w;
  }

  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (num_profiles_ > kMaxProfiles / choices_.size())
      throw SystemError("too many complete profiles");
    num_profiles_ *= choices_.size();
  }
  profile_votes_.resize(num_profiles_ * agents_.size());
  for (std::size_t s = 0; s < num_profiles_; ++s) {
    std::size_t rest = s;
    for (std::size_t a = agents_.size(); a-- > 0;) {
      profile_votes_[s * agents_.size() + a] =
          static_cast<ChoiceId>(rest % choices_.size());
      rest /= choices_.size();
    }
  }

  for (const auto& [prop, names] : d.valuation) {
    if (!is_identifier(prop))
      throw SystemError("malformed proposition name '" + prop + "'");
    std::vector<bool> truth(states_.size(), false);
    for (const auto& n : names) truth[state_id(n)] = true;
    valuation_[prop] = std::move(truth);
  }

  std::set<Transition> triples;
  for (const auto& pat : d.transitions) {
    try {
      StateId from = state_id(pat.from);
      StateId to = state_id(pat.to);
      std::vector<std::pair<AgentId, ChoiceId>> fixed;
      AgentMask constrained = 0;
      for (const auto& [agent, choice] : pat.votes) {
        AgentId a = agent_id(agent);
        if (constrained >> a & 1)
          throw SystemError("agent '" + agent + "' constrained twice");
        constrained |= AgentMask{1} << a;
        fixed.emplace_back(a, choice_id(choice));
      }
      for (ProfileId s = 0; s < num_profiles_; ++s) {
        bool match = std::all_of(fixed.begin(), fixed.end(), [&](auto& f) {
          return vote(s, f.first) == f.second;
        });
        if (match) triples.insert({from, s, to});
      }
    } catch (const SystemError& e) {
      if (pat.line) throw SystemError(e.what(), pat.line);
      throw;
    }
  }
  mechanism_.assign(triples.begin(), triples.end());
  successors_.assign(states_.size() * num_profiles_, {});
  for (const auto& t : mechanism_)
    successors_[static_cast<std::size_t>(t.from) * num_profiles_ + t.profile]
        .push_back(t.to);
}

AgentMask EpistemicTransitionSystem::all_agents() const {
  return agents_.size() == 64 ? ~AgentMask{0}
                              : (AgentMask{1} << agents_.size()) - 1;
}

StateId EpistemicTransitionSystem::state_id(std::string_view name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end())
    throw SystemError("undeclared state '" + std::string(name) + "'");
  return it->second;
}

AgentId EpistemicTransitionSystem::agent_id(std::string_view name) const {
  auto it = std::lower_bound(agents_.begin(), agents_.end(), name);
  if (it == agents_.end() || *it != name)
    throw SystemError("undeclared agent '" + std::string(name) + "'");
  return static_cast<AgentId>(it - agents_.begin());
}

ChoiceId EpistemicTransitionSystem::choice_id(std::string_view name) const {
  auto it = std::lower_bound(choices_.begin(), choices_.end(), name);
  if (it == choices_.end() || *it != name)
    throw SystemError("undeclared choice '" + std::string(name) + "'");
  return static_cast<ChoiceId>(it - choices_.begin());
}

AgentMask EpistemicTransitionSystem::mask(const Coalition& c) const {
  AgentMask m = 0;
  for (const auto& a : c.members()) m |= AgentMask{1} << agent_id(a);
  return m;
}

Coalition EpistemicTransitionSystem::coalition(AgentMask m) const {
  std::vector<std::string> members;
  for (AgentId a = 0; a < agents_.size(); ++a)
    if (m >> a & 1) members.push_back(agents_[a]);
  return Coalition(std::move(members));
}

bool EpistemicTransitionSystem::state_indist(StateId w1, StateId w2,
                                             AgentMask c) const {
  for (; c; c &= c - 1) {
    AgentId a = static_cast<AgentId>(std::countr_zero(c));
    if (block_[a][w1] != block_[a][w2]) return false;
  }
  return true;
}

ProfileId EpistemicTransitionSystem::profile(
    std::span<const ChoiceId> votes) const {
  if (votes.size() != agents_.size())
    throw std::invalid_argument("profile must give one vote per agent");
  std::size_t id = 0;
  for (ChoiceId v : votes) {
    if (v >= choices_.size()) throw std::invalid_argument("choice out of range");
    id = id * choices_.size() + v;
  }
  return static_cast<ProfileId>(id);
}

StrategyProfile EpistemicTransitionSystem::complete_profile(
    ProfileId s) const {
  StrategyProfile p;
  p.coalition = all_agents();
  p.votes.resize(agents_.size());
  for (AgentId a = 0; a < agents_.size(); ++a) p.votes[a] = vote(s, a);
  return p;
}

bool EpistemicTransitionSystem::has_transition(StateId from, ProfileId s,
                                               StateId to) const {
  auto succ = successors(from, s);
  return std::find(succ.begin(), succ.end(), to) != succ.end();
}

bool EpistemicTransitionSystem::satisfies(StateId w,
                                          std::string_view prop) const {
  auto it = valuation_.find(prop);
  return it != valuation_.end() && it->second[w];
}

std::vector<std::string> EpistemicTransitionSystem::propositions() const {
  std::vector<std::string> out;
  for (const auto& [p, _] : valuation_) out.push_back(p);
  return out;
}

std::vector<std::pair<StateId, ProfileId>>
EpistemicTransitionSystem::check_regular() const {
  std::vector<std::pair<StateId, ProfileId>> missing;
  for (StateId w = 0; w < states_.size(); ++w)
    for (ProfileId s = 0; s < num_profiles_; ++s)
      if (successors(w, s).empty()) missing.emplace_back(w, s);
  return missing;
}

bool EpistemicTransitionSystem::valid(const History& h) const {
  if (h.states.size() != h.profiles.size() + 1) return false;
  for (StateId w : h.states)
    if (w >= states_.size()) return false;
  for (std::size_t i = 0; i < h.profiles.size(); ++i) {
    if (h.profiles[i] >= num_profiles_) return false;
    if (!has_transition(h.states[i], h.profiles[i], h.states[i + 1]))
      return false;
  }
  return true;
}

std::string EpistemicTransitionSystem::format_profile(ProfileId s) const {
  std::string out;
  for (AgentId a = 0; a < agents_.size(); ++a) {
    if (a) out += ',';
    out += agents_[a] + "=" + choices_[vote(s, a)];
  }
  return out;
}

std::string EpistemicTransitionSystem::format_strategy(
    const StrategyProfile& s) const {
  std::string out;
  for (AgentId a = 0; a < agents_.size(); ++a) {
    if (!(s.coalition >> a & 1)) continue;
    if (!out.empty()) out += ',';
    out += agents_[a] + "=" + choices_[s.votes.at(a)];
  }
  return out;
}

std::string EpistemicTransitionSystem::format_history(const History& h) const {
  std::string out = states_.at(h.states.at(0));
  for (std::size_t i = 0; i < h.profiles.size(); ++i)
    out += " ; " + format_profile(h.profiles[i]) + " ; " +
           states_.at(h.states.at(i + 1));
  return out;
}

History EpistemicTransitionSystem::parse_history(
    std::string_view literal) const {
  auto parts = split(literal, ';');
  if (parts.size() % 2 == 0)
    throw SystemError("history literal must alternate states and profiles");
  History h;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::string_view part = trim(parts[i]);
    if (i % 2 == 0) {
      h.states.push_back(state_id(part));
      continue;
    }
    std::vector<ChoiceId> votes(agents_.size());
    std::vector<bool> given(agents_.size(), false);
    for (std::string_view entry : split(part, ',')) {
      entry = trim(entry);
      auto eq = entry.find('=');
      if (eq == std::string_view::npos)
        throw SystemError("malformed vote '" + std::string(entry) +
                          "' (expected agent=choice)");
      AgentId a = agent_id(trim(entry.substr(0, eq)));
      if (given[a])
        throw SystemError("agent '" + agents_[a] + "' votes twice in a profile");
      given[a] = true;
      votes[a] = choice_id(trim(entry.substr(eq + 1)));
    }
    for (AgentId a = 0; a < agents_.size(); ++a)
      if (!given[a])
        throw SystemError("profile '" + std::string(part) +
                          "' has no vote for agent '" + agents_[a] + "'");
    h.profiles.push_back(profile(votes));
  }
  for (std::size_t i = 0; i < h.profiles.size(); ++i)
    if (!has_transition(h.states[i], h.profiles[i], h.states[i + 1]))
      throw SystemError("not a history: no transition " + states_[h.states[i]] +
                        " [" + format_profile(h.profiles[i]) + "] " +
                        states_[h.states[i + 1]]);
  return h;
}

std::string EpistemicTransitionSystem::to_text() const {
  std::ostringstream os;
  auto list = [&](const char* key, const std::vector<std::string>& names) {
    os << key << ':';
    for (const auto& n : names) os << ' ' << n;
    os << '\n';
  };
  list("agents", agents_);
  list("choices", choices_);
  list("states", states_);
  for (AgentId a = 0; a < agents_.size(); ++a) {
    std::map<std::size_t, std::vector<StateId>> blocks;
    for (StateId w = 0; w < states_.size(); ++w) blocks[block_[a][w]].push_back(w);
    std::string line;
    for (const auto& [_, ws] : blocks) {
      if (ws.size() < 2) continue;
      if (!line.empty()) line += " |";
      for (StateId w : ws) line += ' ' + states_[w];
    }
    if (!line.empty()) os << "indist " << agents_[a] << ':' << line << '\n';
  }
  for (const auto& [prop, truth] : valuation_) {
    os << "valuation " << prop << ':';
    for (StateId w = 0; w < states_.size(); ++w)
      if (truth[w]) os << ' ' << states_[w];
    os << '\n';
  }
  for (const auto& t : mechanism_)
    os << "trans " << states_[t.from] << " [" << format_profile(t.profile)
       << "] " << states_[t.to] << '\n';
  return os.str();
}

// -------------------------------------------------------------- Model file

System load_system(std::string_view text) {
  SystemDescription d;
  bool have_agents = false, have_choices = false, have_states = false;
  std::size_t lineno = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++lineno;
    std::string_view line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;

    auto colon = line.find(':');
    std::string_view head = trim(line.substr(0, colon));
    std::string_view rest =
        colon == std::string_view::npos ? std::string_view()
                                        : trim(line.substr(colon + 1));
    auto words = split_words(head);

    if (words.size() == 1 && colon != std::string_view::npos &&
        (head == "agents" || head == "choices" || head == "states")) {
      bool& seen = head == "agents"    ? have_agents
                   : head == "choices" ? have_choices
                                       : have_states;
      if (seen)
        throw SystemError("duplicate '" + std::string(head) + "' line", lineno);
      seen = true;
      auto names = split_words(rest);
      (head == "agents" ? d.agents : head == "choices" ? d.choices : d.states) =
          names;
      continue;
    }
    if (words.size() == 2 && colon != std::string_view::npos &&
        words[0] == "indist") {
      auto& blocks = d.indist[words[1]];
      for (std::string_view b : split(rest, '|')) {
        auto names = split_words(b);
        if (names.empty())
          throw SystemError("empty indistinguishability block", lineno);
        blocks.push_back(names);
      }
      continue;
    }
    if (words.size() == 2 && colon != std::string_view::npos &&
        words[0] == "valuation") {
      if (d.valuation.count(words[1]))
        throw SystemError("duplicate valuation for '" + words[1] + "'", lineno);
      d.valuation[words[1]] = split_words(rest);
      continue;
    }
    if (line.substr(0, 6) == "trans " || line.substr(0, 6) == "trans\t") {
      auto open = line.find('[');
      auto close = line.find(']');
      if (open == std::string_view::npos || close == std::string_view::npos ||
          close < open)
        throw SystemError("transition needs a [pattern]", lineno);
      SystemDescription::Pattern p;
      p.line = lineno;
      auto from = split_words(line.substr(5, open - 5));
      auto to = split_words(line.substr(close + 1));
      if (from.size() != 1 || to.size() != 1)
        throw SystemError("transition must be 'trans FROM [pattern] TO'",
                          lineno);
      p.from = from[0];
      p.to = to[0];
      std::string_view pattern = trim(line.substr(open + 1, close - open - 1));
      if (!pattern.empty()) {
        for (std::string_view entry : split(pattern, ',')) {
          entry = trim(entry);
          auto eq = entry.find('=');
          if (eq == std::string_view::npos)
            throw SystemError("malformed vote '" + std::string(entry) + "'",
                              lineno);
          p.votes.emplace_back(std::string(trim(entry.substr(0, eq))),
                               std::string(trim(entry.substr(eq + 1))));
        }
      }
      d.transitions.push_back(std::move(p));
      continue;
    }
    throw SystemError("unrecognised line '" + std::string(line) + "'", lineno);
  }
  if (!have_agents) throw SystemError("missing 'agents:' line");
  if (!have_choices) throw SystemError("missing 'choices:' line");
  if (!have_states) throw SystemError("missing 'states:' line");
  return System(d);
}

System load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SystemError("cannot read system file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_system(ss.str());
  } catch (const SystemError& e) {
    throw SystemError(path + ": " + e.what());
  }
}

// ----------------------------------------------------------------- Queries

std::vector<std::pair<StateId, ProfileId>> check_regular(const System& sys) {
  return sys.check_regular();
}

bool state_indist(const System& sys, std::string_view w1, std::string_view w2,
                  const Coalition& c) {
  return sys.state_indist(sys.state_id(w1), sys.state_id(w2), sys.mask(c));
}

bool profile_agrees(const StrategyProfile& s1, const StrategyProfile& s2,
                    AgentMask c) {
  if ((c & s1.coalition) != c || (c & s2.coalition) != c)
    throw std::invalid_argument("coalition is not contained in profile domain");
  for (; c; c &= c - 1) {
    auto a = static_cast<std::size_t>(std::countr_zero(c));
    if (s1.votes.at(a) != s2.votes.at(a)) return false;
  }
  return true;
}

bool hist_indist(const System& sys, const History& h1, const History& h2,
                 AgentMask c) {
  if (c == 0) return true;
  if (h1.length() != h2.length()) return false;
  for (std::size_t i = 0; i < h1.states.size(); ++i)
    if (!sys.state_indist(h1.states[i], h2.states[i], c)) return false;
  for (std::size_t i = 0; i < h1.profiles.size(); ++i)
    for (AgentMask m = c; m; m &= m - 1) {
      auto a = static_cast<AgentId>(std::countr_zero(m));
      if (sys.vote(h1.profiles[i], a) != sys.vote(h2.profiles[i], a))
        return false;
    }
  return true;
}

std::vector<History> extensions(const System& sys, const History& h) {
  std::vector<History> out;
  for (ProfileId s = 0; s < sys.num_profiles(); ++s)
    for (StateId w : sys.successors(h.last(), s)) out.push_back(h.extended(s, w));
  return out;
}

std::vector<History> histories_of_length(const System& sys, std::size_t n) {
  std::vector<History> layer;
  for (StateId w = 0; w < sys.num_states(); ++w) layer.push_back(History{{w}, {}});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<History> next;
    for (const auto& h : layer) {
      auto ext = extensions(sys, h);
      next.insert(next.end(), std::make_move_iterator(ext.begin()),
                  std::make_move_iterator(ext.end()));
    }
    layer = std::move(next);
  }
  return layer;
}

std::vector<History> indist_class(const System& sys, const History& h,
                                  AgentMask c) {
  if (c == 0)
    throw std::invalid_argument(
        "indist_class needs a nonempty coalition; the empty coalition relates "
        "every history");
  std::vector<History> out;
  for (auto& g : histories_of_length(sys, h.length()))
    if (hist_indist(sys, h, g, c)) out.push_back(std::move(g));
  return out;
}

}  // namespace knowhow
