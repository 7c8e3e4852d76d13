#include "hsmc/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hsmc {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

int index_of(const std::vector<std::string>& names, std::string_view name) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

KripkeStructure KripkeStructure::make(const Spec& spec) {
  KripkeStructure k;

  if (spec.states.empty())
    throw ValidationError("empty-states", "a structure needs at least one state");
  for (const auto& s : spec.states) {
    if (!is_identifier(s))
      throw ValidationError("bad-identifier", "bad state identifier '" + s + "'");
    if (index_of(k.states_, s) >= 0)
      throw ValidationError("duplicate-name", "state '" + s + "' declared twice");
    k.states_.push_back(s);
  }

  if (spec.letters.empty()) {
    for (const auto& [state, letters] : spec.labels)
      for (const auto& p : letters)
        if (index_of(k.letters_, p) < 0) {
          if (!is_identifier(p))
            throw ValidationError("bad-identifier", "bad letter '" + p + "'");
          k.letters_.push_back(p);
        }
  } else {
    for (const auto& p : spec.letters) {
      if (!is_identifier(p))
        throw ValidationError("bad-identifier", "bad letter '" + p + "'");
      if (index_of(k.letters_, p) >= 0)
        throw ValidationError("duplicate-name", "letter '" + p + "' declared twice");
      k.letters_.push_back(p);
    }
  }

  const int n = k.num_states();
  k.labels_.assign(n, Bitset(k.num_letters()));
  std::vector<bool> labelled(n, false);
  for (const auto& [state, letters] : spec.labels) {
    int v = index_of(k.states_, state);
    if (v < 0)
      throw ValidationError("unknown-state", "label line names unknown state '" + state + "'");
    if (labelled[v])
      throw ValidationError("duplicate-name", "state '" + state + "' labelled twice");
    labelled[v] = true;
    for (const auto& p : letters) {
      int id = index_of(k.letters_, p);
      if (id < 0)
        throw ValidationError("label-outside-ap",
                              "state '" + state + "' labelled with '" + p +
                                  "', which is outside the alphabet");
      k.labels_[v].set(id);
    }
  }

  k.succ_.assign(n, {});
  std::set<std::pair<StateId, StateId>> seen;
  for (const auto& [from, to] : spec.edges) {
    int a = index_of(k.states_, from);
    if (a < 0) throw ValidationError("unknown-state", "edge from unknown state '" + from + "'");
    int b = index_of(k.states_, to);
    if (b < 0) throw ValidationError("unknown-state", "edge to unknown state '" + to + "'");
    if (seen.insert({a, b}).second) k.succ_[a].push_back(b);
  }
  for (auto& row : k.succ_) std::sort(row.begin(), row.end());
  k.num_edges_ = static_cast<long>(seen.size());

  int init = index_of(k.states_, spec.initial);
  if (init < 0)
    throw ValidationError("unknown-state", "initial state '" + spec.initial + "' not declared");
  k.initial_ = init;

  for (int v = 0; v < n; ++v)
    if (k.succ_[v].empty())
      throw ValidationError("not-left-total",
                            "state '" + k.states_[v] + "' has no successor");

  return k;
}

bool KripkeStructure::has_edge(StateId a, StateId b) const {
  const auto& row = succ_[a];
  return std::binary_search(row.begin(), row.end(), b);
}

std::optional<StateId> KripkeStructure::state_id(std::string_view name) const {
  int i = index_of(states_, name);
  if (i < 0) return std::nullopt;
  return i;
}

std::optional<LetterId> KripkeStructure::letter_id(std::string_view name) const {
  int i = index_of(letters_, name);
  if (i < 0) return std::nullopt;
  return i;
}

KripkeStructure KripkeStructure::transposed() const {
  KripkeStructure t;
  t.letters_ = letters_;
  t.states_ = states_;
  t.labels_ = labels_;
  t.initial_ = initial_;
  t.num_edges_ = num_edges_;
  t.succ_.assign(states_.size(), {});
  for (StateId a = 0; a < num_states(); ++a)
    for (StateId b : succ_[a]) t.succ_[b].push_back(a);
  for (auto& row : t.succ_) std::sort(row.begin(), row.end());
  return t;
}

bool KripkeStructure::operator==(const KripkeStructure& o) const {
  if (states_ != o.states_) return false;
  if (initial_ != o.initial_) return false;
  std::set<std::string> ap_a(letters_.begin(), letters_.end());
  std::set<std::string> ap_b(o.letters_.begin(), o.letters_.end());
  if (ap_a != ap_b) return false;
  for (int v = 0; v < num_states(); ++v) {
    if (succ_[v] != o.succ_[v]) return false;
    std::set<std::string> la, lb;
    for (int p = 0; p < num_letters(); ++p)
      if (labels_[v].test(p)) la.insert(letters_[p]);
    for (int p = 0; p < o.num_letters(); ++p)
      if (o.labels_[v].test(p)) lb.insert(o.letters_[p]);
    if (la != lb) return false;
  }
  return true;
}

void validate(const KripkeStructure& k) {
  if (k.num_states() == 0)
    throw ValidationError("empty-states", "a structure needs at least one state");
  if (k.initial() < 0 || k.initial() >= k.num_states())
    throw ValidationError("unknown-state", "initial state id out of range");
  for (StateId v = 0; v < k.num_states(); ++v) {
    if (k.successors(v).empty())
      throw ValidationError("not-left-total",
                            "state '" + k.state_name(v) + "' has no successor");
    for (StateId w : k.successors(v))
      if (w < 0 || w >= k.num_states())
        throw ValidationError("unknown-state", "edge endpoint id out of range");
    if (k.label(v).size() != k.num_letters())
      throw ValidationError("label-outside-ap", "label width mismatch");
  }
}

namespace {

struct Line {
  std::size_t offset;  // byte offset of the line start in the document
  std::string text;    // comment-stripped
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    lines.push_back({pos, line});
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

KripkeStructure parse_kripke(std::string_view text) {
  KripkeStructure::Spec spec;
  bool saw_header = false, saw_states = false, saw_init = false;

  for (const Line& line : split_lines(text)) {
    auto toks = tokens_of(line.text);
    if (toks.empty()) continue;

    if (!saw_header) {
      if (toks.size() != 1 || toks[0] != "kripke")
        throw ParseError(line.offset, "expected 'kripke' header line");
      saw_header = true;
      continue;
    }

    const std::string& head = toks[0];
    if (head == "states:") {
      if (saw_states) throw ParseError(line.offset, "duplicate states line");
      saw_states = true;
      if (toks.size() == 1) throw ParseError(line.offset, "states line needs at least one id");
      spec.states.assign(toks.begin() + 1, toks.end());
    } else if (head == "init:") {
      if (saw_init) throw ParseError(line.offset, "duplicate init line");
      saw_init = true;
      if (toks.size() != 2) throw ParseError(line.offset, "init line needs exactly one id");
      spec.initial = toks[1];
    } else if (head == "label") {
      if (toks.size() < 2 || toks[1].empty() || toks[1].back() != ':')
        throw ParseError(line.offset, "expected 'label <id>: ...'");
      std::string state = toks[1].substr(0, toks[1].size() - 1);
      spec.labels.push_back({state, {toks.begin() + 2, toks.end()}});
    } else if (head == "edges:") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto arrow = toks[i].find("->");
        if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= toks[i].size())
          throw ParseError(line.offset, "bad edge '" + toks[i] + "', expected <id>-><id>");
        spec.edges.push_back({toks[i].substr(0, arrow), toks[i].substr(arrow + 2)});
      }
    } else {
      throw ParseError(line.offset, "unrecognized directive '" + head + "'");
    }
  }

  if (!saw_header) throw ParseError(0, "empty input, expected 'kripke' header");
  if (!saw_states) throw ParseError(text.size(), "missing states line");
  if (!saw_init) throw ParseError(text.size(), "missing init line");

  try {
    return KripkeStructure::make(spec);
  } catch (const ValidationError&) {
    throw;  // keep the structured error; the CLI reports it as a parse-stage failure
  }
}

std::string to_text(const KripkeStructure& k) {
  std::ostringstream out;
  out << "kripke\n";
  out << "states:";
  for (StateId v = 0; v < k.num_states(); ++v) out << ' ' << k.state_name(v);
  out << "\n";
  out << "init: " << k.state_name(k.initial()) << "\n";
  for (StateId v = 0; v < k.num_states(); ++v) {
    out << "label " << k.state_name(v) << ":";
    for (LetterId p = 0; p < k.num_letters(); ++p)
      if (k.letter_holds(p, v)) out << ' ' << k.letter_name(p);
    out << "\n";
  }
  for (StateId v = 0; v < k.num_states(); ++v) {
    if (k.successors(v).empty()) continue;
    out << "edges:";
    for (StateId w : k.successors(v)) out << ' ' << k.state_name(v) << "->" << k.state_name(w);
    out << "\n";
  }
  return out.str();
}

}  // namespace hsmc
