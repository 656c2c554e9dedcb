#pragma once

// Reader and writer for the HOA v1 subset used to exchange LDGBAs.
//
// Supported: state-based generalized Buchi acceptance (conjunction of
// Inf(i)), explicit edge labels given as boolean expressions over AP
// indices, aliases. Two extensions carry what HOA cannot express:
//   - an edge labelled with the reserved alias @eps is an epsilon edge;
//     writers declare "Alias: @eps f" so that other tools see a dead edge;
//   - the header item "ldgba-partition:" lists the nondeterministic states.
// See docs/hoa_subset.md.

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ldgba/automata/ldgba.hpp"

namespace ldgba::automata {

class HoaError : public std::runtime_error {
 public:
  HoaError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string cube_label(Symbol s, std::size_t aps) {
  if (aps == 0) return "t";
  std::string out;
  for (std::size_t i = 0; i < aps; ++i) {
    if (i) out += '&';
    if (!s.has(i)) out += '!';
    out += std::to_string(i);
  }
  return out;
}

// Boolean label expression over AP indices: t f <int> @alias ! & | ( ).
struct LabelExpr {
  enum class Kind { True, False, Ap, Not, And, Or, Eps } kind = Kind::True;
  std::size_t ap = 0;
  std::vector<LabelExpr> args;

  bool eval(Symbol s) const {
    switch (kind) {
      case Kind::True: return true;
      case Kind::False:
      case Kind::Eps: return false;
      case Kind::Ap: return s.has(ap);
      case Kind::Not: return !args[0].eval(s);
      case Kind::And: return args[0].eval(s) && args[1].eval(s);
      case Kind::Or: return args[0].eval(s) || args[1].eval(s);
    }
    return false;
  }
};

class LabelParser {
 public:
  LabelParser(std::string_view text, std::size_t aps, const std::map<std::string, LabelExpr>& aliases,
              std::size_t line)
      : text_(text), aps_(aps), aliases_(aliases), line_(line) {}

  LabelExpr parse() {
    LabelExpr e = parse_or();
    skip();
    if (pos_ != text_.size()) throw HoaError("trailing characters in label", line_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  LabelExpr parse_or() {
    LabelExpr e = parse_and();
    while (eat('|')) e = LabelExpr{LabelExpr::Kind::Or, 0, {e, parse_and()}};
    return e;
  }
  LabelExpr parse_and() {
    LabelExpr e = parse_not();
    while (eat('&')) e = LabelExpr{LabelExpr::Kind::And, 0, {e, parse_not()}};
    return e;
  }
  LabelExpr parse_not() {
    if (eat('!')) return LabelExpr{LabelExpr::Kind::Not, 0, {parse_not()}};
    return parse_atom();
  }
  LabelExpr parse_atom() {
    skip();
    if (eat('(')) {
      LabelExpr e = parse_or();
      if (!eat(')')) throw HoaError("expected ')' in label", line_);
      return e;
    }
    if (pos_ >= text_.size()) throw HoaError("unexpected end of label", line_);
    const char c = text_[pos_];
    if (c == 't' || c == 'f') {
      ++pos_;
      return LabelExpr{c == 't' ? LabelExpr::Kind::True : LabelExpr::Kind::False, 0, {}};
    }
    if (c == '@') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' ||
                                    text_[end] == '-'))
        ++end;
      std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      if (name == "@eps") return LabelExpr{LabelExpr::Kind::Eps, 0, {}};
      auto it = aliases_.find(name);
      if (it == aliases_.end()) throw HoaError("undefined alias " + name, line_);
      return it->second;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        v = v * 10 + static_cast<std::size_t>(text_[pos_++] - '0');
      if (v >= aps_) throw HoaError("AP index " + std::to_string(v) + " out of range", line_);
      return LabelExpr{LabelExpr::Kind::Ap, v, {}};
    }
    throw HoaError(std::string("unexpected '") + c + "' in label", line_);
  }

  std::string_view text_;
  std::size_t aps_;
  const std::map<std::string, LabelExpr>& aliases_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::size_t parse_index(const std::string& s, std::size_t line, const char* what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw HoaError(std::string("expected ") + what + ", got '" + s + "'", line);
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace detail

/// Canonical HOA text: states in index order, symbol edges in symbol order
/// (one full cube per symbol), epsilon edges last.
inline std::string dump_hoa(const Ldgba& a, const std::string& name = {}) {
  std::ostringstream out;
  const std::size_t aps = a.atoms().size();
  const std::size_t f = a.acceptance_set_count();
  out << "HOA: v1\n";
  if (!name.empty()) out << "name: \"" << name << "\"\n";
  out << "States: " << a.size() << "\n";
  out << "Start: " << a.initial() << "\n";
  out << "AP: " << aps;
  for (const auto& n : a.atoms().names()) out << " \"" << n << "\"";
  out << "\n";
  out << "acc-name: generalized-Buchi " << f << "\n";
  out << "Acceptance: " << f;
  for (std::size_t i = 0; i < f; ++i) out << (i ? "&" : " ") << "Inf(" << i << ")";
  if (f == 0) out << " t";
  out << "\n";
  out << "properties: trans-labels explicit-labels state-acc\n";
  if (a.has_epsilon()) out << "Alias: @eps f\n";
  out << "ldgba-partition:";
  for (StateId q = 0; q < a.size(); ++q)
    if (!a.deterministic(q)) out << " " << q;
  out << "\n";
  out << "--BODY--\n";
  for (StateId q = 0; q < a.size(); ++q) {
    out << "State: " << q;
    if (const auto m = a.acceptance_mask(q)) {
      out << " {";
      bool first = true;
      for (std::size_t i = 0; i < f; ++i) {
        if (!(m >> i & 1u)) continue;
        out << (first ? "" : " ") << i;
        first = false;
      }
      out << "}";
    }
    out << "\n";
    for (std::uint32_t s = 0; s < a.symbol_count(); ++s)
      for (StateId t : a.successors(q, Symbol{s})) out << "[" << detail::cube_label(Symbol{s}, aps) << "] " << t << "\n";
    for (StateId t : a.epsilon_successors(q)) out << "[@eps] " << t << "\n";
  }
  out << "--END--\n";
  return out.str();
}

/// Parses the HOA subset; the result must pass validate().
inline Ldgba load_hoa(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
  }

  std::size_t states = 0, start = 0, sets = 0;
  bool have_states = false, have_start = false, have_acc = false, have_version = false;
  std::vector<std::string> ap_names;
  std::vector<std::size_t> nondet;
  std::map<std::string, detail::LabelExpr> aliases;
  std::vector<std::string> alias_src;
  std::size_t ln = 0;

  for (; ln < lines.size(); ++ln) {
    const std::string line = detail::trim(lines[ln]);
    const std::size_t no = ln + 1;
    if (line.empty()) continue;
    if (line == "--BODY--") break;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw HoaError("expected header item", no);
    const std::string key = line.substr(0, colon);
    const std::string rest = detail::trim(std::string_view(line).substr(colon + 1));
    if (key == "HOA") {
      if (rest != "v1") throw HoaError("unsupported HOA version '" + rest + "'", no);
      have_version = true;
    } else if (key == "States") {
      states = detail::parse_index(rest, no, "state count");
      have_states = true;
    } else if (key == "Start") {
      auto toks = detail::split_ws(rest);
      if (toks.size() != 1) throw HoaError("exactly one start state is supported", no);
      start = detail::parse_index(toks[0], no, "start state");
      have_start = true;
    } else if (key == "AP") {
      std::istringstream in(rest);
      std::size_t count;
      if (!(in >> count)) throw HoaError("malformed AP line", no);
      std::string r;
      std::getline(in, r);
      std::size_t p = 0;
      while (true) {
        auto q1 = r.find('"', p);
        if (q1 == std::string::npos) break;
        auto q2 = r.find('"', q1 + 1);
        if (q2 == std::string::npos) throw HoaError("unterminated AP name", no);
        ap_names.push_back(r.substr(q1 + 1, q2 - q1 - 1));
        p = q2 + 1;
      }
      if (ap_names.size() != count) throw HoaError("AP count does not match names", no);
    } else if (key == "Acceptance") {
      std::istringstream in(rest);
      if (!(in >> sets)) throw HoaError("malformed Acceptance line", no);
      std::string cond;
      std::getline(in, cond);
      cond = detail::trim(cond);
      std::vector<bool> seen(sets, false);
      std::size_t p = 0;
      while (p < cond.size()) {
        if (cond.compare(p, 4, "Inf(") != 0) throw HoaError("only conjunctions of Inf(i) are supported", no);
        auto close = cond.find(')', p);
        if (close == std::string::npos) throw HoaError("malformed Inf()", no);
        std::size_t idx = detail::parse_index(cond.substr(p + 4, close - p - 4), no, "acceptance set");
        if (idx >= sets) throw HoaError("acceptance set index out of range", no);
        seen[idx] = true;
        p = close + 1;
        if (p < cond.size()) {
          if (cond[p] != '&') throw HoaError("only conjunctions of Inf(i) are supported", no);
          ++p;
        }
      }
      for (std::size_t i = 0; i < sets; ++i)
        if (!seen[i]) throw HoaError("acceptance set " + std::to_string(i) + " is not used", no);
      have_acc = true;
    } else if (key == "acc-name") {
      auto toks = detail::split_ws(rest);
      if (toks.empty() || (toks[0] != "generalized-Buchi" && toks[0] != "Buchi"))
        throw HoaError("unsupported acceptance name '" + rest + "'", no);
    } else if (key == "Alias") {
      auto toks = detail::split_ws(rest);
      if (toks.empty() || toks[0].empty() || toks[0][0] != '@') throw HoaError("malformed alias", no);
      const std::string name = toks[0];
      const std::string expr = detail::trim(std::string_view(rest).substr(rest.find(name) + name.size()));
      if (name != "@eps") aliases[name] = detail::LabelParser(expr, ap_names.size(), aliases, no).parse();
    } else if (key == "ldgba-partition") {
      for (const auto& t : detail::split_ws(rest)) nondet.push_back(detail::parse_index(t, no, "state index"));
    } else if (key == "properties" || key == "name" || key == "tool") {
      // informative only
    } else if (!key.empty() && std::islower(static_cast<unsigned char>(key[0]))) {
      // unknown lowercase header items may be ignored per HOA v1
    } else {
      throw HoaError("unsupported header item '" + key + "'", no);
    }
  }
  if (ln >= lines.size()) throw HoaError("missing --BODY--", lines.size());
  if (!have_version) throw HoaError("missing HOA: v1", 1);
  if (!have_states || !have_start || !have_acc) throw HoaError("missing States, Start or Acceptance", ln + 1);
  if (start >= states) throw HoaError("start state out of range", ln + 1);
  if (ap_names.size() > AtomSet::max_atoms) throw HoaError("too many APs", ln + 1);
  // The AP order of the file must already be the canonical (sorted) order,
  // since symbols are encoded by position.
  AtomSet atoms;
  try {
    atoms = AtomSet(ap_names);
  } catch (const std::exception& e) {
    throw HoaError(e.what(), ln + 1);
  }
  if (atoms.names() != ap_names) throw HoaError("AP names must be unique and sorted", ln + 1);

  Ldgba a(atoms, states);
  a.set_initial(static_cast<StateId>(start));
  for (auto q : nondet) {
    if (q >= states) throw HoaError("partition state out of range", ln + 1);
    a.set_part(static_cast<StateId>(q), Part::Nondeterministic);
  }
  std::vector<std::vector<StateId>> members(sets);
  long current = -1;
  bool ended = false;
  for (++ln; ln < lines.size(); ++ln) {
    const std::string line = detail::trim(lines[ln]);
    const std::size_t no = ln + 1;
    if (line.empty()) continue;
    if (line == "--END--") {
      ended = true;
      break;
    }
    if (line.rfind("State:", 0) == 0) {
      std::string rest = detail::trim(std::string_view(line).substr(6));
      std::string acc;
      if (auto b = rest.find('{'); b != std::string::npos) {
        auto e = rest.find('}', b);
        if (e == std::string::npos) throw HoaError("unterminated acceptance marks", no);
        acc = rest.substr(b + 1, e - b - 1);
        rest = detail::trim(std::string_view(rest).substr(0, b));
      }
      auto toks = detail::split_ws(rest);
      if (toks.empty()) throw HoaError("missing state index", no);
      const std::size_t q = detail::parse_index(toks[0], no, "state index");
      if (q >= states) throw HoaError("state index out of range", no);
      current = static_cast<long>(q);
      for (const auto& m : detail::split_ws(acc)) {
        const std::size_t i = detail::parse_index(m, no, "acceptance set");
        if (i >= sets) throw HoaError("acceptance set index out of range", no);
        members[i].push_back(static_cast<StateId>(q));
      }
      continue;
    }
    if (line[0] != '[') throw HoaError("expected edge or State:", no);
    if (current < 0) throw HoaError("edge before any State:", no);
    const auto close = line.find(']');
    if (close == std::string::npos) throw HoaError("unterminated edge label", no);
    const auto label = detail::LabelParser(std::string_view(line).substr(1, close - 1), ap_names.size(), aliases, no).parse();
    const std::string tail = detail::trim(std::string_view(line).substr(close + 1));
    if (tail.find('{') != std::string::npos) throw HoaError("transition-based acceptance is not supported", no);
    auto toks = detail::split_ws(tail);
    if (toks.size() != 1) throw HoaError("expected a single target state", no);
    const std::size_t target = detail::parse_index(toks[0], no, "target state");
    if (target >= states) throw HoaError("target state out of range", no);
    const auto from = static_cast<StateId>(current);
    if (label.kind == detail::LabelExpr::Kind::Eps) {
      a.add_epsilon(from, static_cast<StateId>(target));
    } else {
      for (std::uint32_t s = 0; s < a.symbol_count(); ++s)
        if (label.eval(Symbol{s})) a.add_edge(from, Symbol{s}, static_cast<StateId>(target));
    }
  }
  if (!ended) throw HoaError("missing --END--", lines.size());
  for (auto& m : members) a.add_acceptance_set(std::move(m));
  if (auto v = validate(a); !v.empty()) throw HoaError("not a valid LDGBA: " + v.front(), ln + 1);
  return a;
}

}  // namespace ldgba::automata
