#include "alquant/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace alq {

std::string emit_text(const automaton& a) {
  std::ostringstream out;
  out << "alphabet";
  for (var_id v : a.alphabet) out << " " << a.mgr->label(v);
  out << "\n";
  out << "states";
  for (auto& s : a.states) out << " " << s.name;
  out << "\n";
  out << "initial " << a.states[a.initial.v].name << "\n";
  for (std::size_t i = 0; i < a.states.size(); ++i)
    out << "state " << a.states[i].name << ": "
        << a.mgr->to_dnf_string(a.delta[i]) << "\n";
  return out.str();
}

namespace {

struct token {
  enum kind { name, bang, amp, pipe, lparen, rparen, colon, eol, end } k;
  std::string text;
  int line, col;
};

struct lexer {
  std::string src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '{' || c == '}' || c == ',';
  }

  token next() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') ++pos;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++pos; ++col;
        continue;
      }
      break;
    }
    if (pos >= src.size()) return {token::end, "", line, col};
    int l = line, c0 = col;
    char c = src[pos];
    auto one = [&](token::kind k) {
      ++pos; ++col;
      return token{k, std::string(1, c), l, c0};
    };
    switch (c) {
      case '\n': { ++pos; ++line; col = 1; return token{token::eol, "\n", l, c0}; }
      case '!': return one(token::bang);
      case '&': return one(token::amp);
      case '|': return one(token::pipe);
      case '(': return one(token::lparen);
      case ')': return one(token::rparen);
      case ':': return one(token::colon);
    }
    if (name_char(c)) {
      std::size_t start = pos;
      while (pos < src.size() && name_char(src[pos])) { ++pos; ++col; }
      return {token::name, src.substr(start, pos - start), l, c0};
    }
    throw parse_error("unexpected character '" + std::string(1, c) + "'", l, c0);
  }
};

struct expr_parser {
  lexer& lx;
  token cur;
  fun_manager& m;
  const std::map<std::string, var_id>& names;

  expr_parser(lexer& lx, fun_manager& m, const std::map<std::string, var_id>& names)
      : lx(lx), m(m), names(names) {
    cur = lx.next();
  }

  void advance() { cur = lx.next(); }

  bf parse_or() {
    bf l = parse_and();
    while (cur.k == token::pipe) {
      advance();
      l = m.disj(l, parse_and());
    }
    return l;
  }

  bf parse_and() {
    bf l = parse_unary();
    while (cur.k == token::amp) {
      advance();
      l = m.conj(l, parse_unary());
    }
    return l;
  }

  bf parse_unary() {
    if (cur.k == token::bang) {
      advance();
      return m.neg(parse_unary());
    }
    if (cur.k == token::lparen) {
      advance();
      bf e = parse_or();
      if (cur.k != token::rparen)
        throw parse_error("expected ')'", cur.line, cur.col);
      advance();
      return e;
    }
    if (cur.k == token::name) {
      if (cur.text == "true") { advance(); return m.tt(); }
      if (cur.text == "false") { advance(); return m.ff(); }
      auto it = names.find(cur.text);
      if (it == names.end())
        throw parse_error("unknown name '" + cur.text + "'", cur.line, cur.col);
      advance();
      return m.var(it->second);
    }
    throw parse_error("expected a formula", cur.line, cur.col);
  }
};

}  // namespace

automaton parse_text(const std::string& text, std::shared_ptr<fun_manager> mgr) {
  automaton a;
  a.mgr = mgr;
  std::map<std::string, var_id> names;
  std::map<std::string, std::uint32_t> state_ids;
  std::string initial_name;
  bool have_initial = false;

  lexer lx{text};
  token t = lx.next();
  auto expect_name = [&]() {
    if (t.k != token::name) throw parse_error("expected a name", t.line, t.col);
    std::string s = t.text;
    t = lx.next();
    return s;
  };
  auto skip_eol = [&]() {
    while (t.k == token::eol) t = lx.next();
  };

  skip_eol();
  while (t.k != token::end) {
    std::string kw = expect_name();
    if (kw == "alphabet") {
      while (t.k == token::name) {
        var_id v = mgr->make_var(var_kind::alphabet, t.text);
        if (names.count(t.text))
          throw parse_error("duplicate name '" + t.text + "'", t.line, t.col);
        names[t.text] = v;
        a.alphabet.push_back(v);
        t = lx.next();
      }
    } else if (kw == "states") {
      while (t.k == token::name) {
        if (names.count(t.text))
          throw parse_error("duplicate name '" + t.text + "'", t.line, t.col);
        var_id v = mgr->make_var(var_kind::state, t.text);
        names[t.text] = v;
        state_ids[t.text] = static_cast<std::uint32_t>(a.states.size());
        a.states.push_back({t.text, v, {origin_kind::synthetic, {}}});
        a.delta.push_back(mgr->ff());
        t = lx.next();
      }
    } else if (kw == "initial") {
      initial_name = expect_name();
      have_initial = true;
    } else if (kw == "state") {
      std::string name = expect_name();
      auto it = state_ids.find(name);
      if (it == state_ids.end())
        throw parse_error("undeclared state '" + name + "'", t.line, t.col);
      if (t.k != token::colon) throw parse_error("expected ':'", t.line, t.col);
      // hand the rest of the line to the expression parser
      expr_parser ep(lx, *mgr, names);
      a.delta[it->second] = ep.parse_or();
      if (ep.cur.k != token::eol && ep.cur.k != token::end)
        throw parse_error("trailing input after transition", ep.cur.line,
                          ep.cur.col);
      t = lx.next();
      skip_eol();
      continue;
    } else {
      throw parse_error("unknown directive '" + kw + "'", t.line, t.col);
    }
    if (t.k != token::eol && t.k != token::end)
      throw parse_error("trailing input", t.line, t.col);
    skip_eol();
  }
  if (!have_initial) throw parse_error("missing initial state", lx.line, lx.col);
  auto it = state_ids.find(initial_name);
  if (it == state_ids.end())
    throw parse_error("initial state '" + initial_name + "' undeclared", 1, 1);
  a.initial = state_id{it->second};
  validate(a);
  return a;
}

std::string emit_dot(const automaton& a) {
  std::ostringstream out;
  out << "digraph asa {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  __init [shape=point];\n";
  bool need_top = false;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    out << "  \"" << a.states[i].name << "\";\n";
  }
  out << "  __init -> \"" << a.states[a.initial.v].name << "\";\n";
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.delta[i].is_false()) continue;
    if (a.delta[i].is_true()) {
      need_top = true;
      out << "  \"" << a.states[i].name << "\" -> __top [label=\"true\"];\n";
      continue;
    }
    auto models = a.mgr->minimal_models(a.delta[i]);
    for (std::size_t j = 0; j < models.size(); ++j) {
      const literal_set& m = models[j];
      std::string letters;
      std::vector<state_id> succ;
      for (var_id v : m.positives) {
        if (a.mgr->kind(v) == var_kind::state) {
          succ.push_back(*a.state_of_var(v));
        } else {
          if (!letters.empty()) letters += " & ";
          letters += a.mgr->label(v);
        }
      }
      for (var_id v : m.negatives) {
        if (!letters.empty()) letters += " & ";
        letters += "!" + a.mgr->label(v);
      }
      if (letters.empty()) letters = "true";
      std::string label = models.size() > 1
                              ? "c" + std::to_string(j) + ": " + letters
                              : letters;
      if (succ.empty()) {
        need_top = true;
        out << "  \"" << a.states[i].name << "\" -> __top [label=\"" << label
            << "\"];\n";
      } else {
        for (state_id s : succ)
          out << "  \"" << a.states[i].name << "\" -> \"" << a.states[s.v].name
              << "\" [label=\"" << label << "\"];\n";
      }
    }
  }
  if (need_top) out << "  __top [shape=plaintext, label=\"accept\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace alq
