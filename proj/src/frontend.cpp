#include "alquant/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace alq {

ltl mk_const(bool value, int line, int col) {
  auto n = std::make_shared<ltl_node>();
  n->op = value ? ltl_op::true_ : ltl_op::false_;
  n->line = line;
  n->col = col;
  return n;
}

ltl mk_var(std::string name, int line, int col) {
  auto n = std::make_shared<ltl_node>();
  n->op = ltl_op::var_;
  n->name = std::move(name);
  n->line = line;
  n->col = col;
  return n;
}

ltl mk_unary(ltl_op op, ltl child, int line, int col) {
  auto n = std::make_shared<ltl_node>();
  n->op = op;
  n->lhs = std::move(child);
  n->line = line;
  n->col = col;
  return n;
}

ltl mk_binary(ltl_op op, ltl lhs, ltl rhs, int line, int col) {
  auto n = std::make_shared<ltl_node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->line = line;
  n->col = col;
  return n;
}

namespace {

// Binding strength; larger binds tighter.
int prec(ltl_op op) {
  switch (op) {
    case ltl_op::iff_: return 0;
    case ltl_op::implies_: return 1;
    case ltl_op::or_: return 2;
    case ltl_op::and_: return 3;
    case ltl_op::until_:
    case ltl_op::weak_until_:
    case ltl_op::release_: return 4;
    case ltl_op::not_:
    case ltl_op::next_:
    case ltl_op::always_:
    case ltl_op::eventually_: return 5;
    default: return 6;
  }
}

const char* op_text(ltl_op op) {
  switch (op) {
    case ltl_op::not_: return "!";
    case ltl_op::next_: return "X";
    case ltl_op::always_: return "G";
    case ltl_op::eventually_: return "F";
    case ltl_op::until_: return "U";
    case ltl_op::weak_until_: return "W";
    case ltl_op::release_: return "R";
    case ltl_op::and_: return "&";
    case ltl_op::or_: return "|";
    case ltl_op::implies_: return "->";
    case ltl_op::iff_: return "<->";
    default: return "?";
  }
}

void print(std::ostringstream& out, const ltl& f, int parent_prec) {
  int p = prec(f->op);
  bool parens = p < parent_prec;
  if (parens) out << "(";
  switch (f->op) {
    case ltl_op::true_: out << "true"; break;
    case ltl_op::false_: out << "false"; break;
    case ltl_op::var_: out << f->name; break;
    case ltl_op::not_:
      out << "!";
      print(out, f->lhs, p);
      break;
    case ltl_op::next_:
    case ltl_op::always_:
    case ltl_op::eventually_:
      out << op_text(f->op) << " ";
      print(out, f->lhs, p);
      break;
    case ltl_op::and_:
    case ltl_op::or_:
      print(out, f->lhs, p);
      out << " " << op_text(f->op) << " ";
      print(out, f->rhs, p);
      break;
    case ltl_op::until_:
    case ltl_op::weak_until_:
    case ltl_op::release_:
    case ltl_op::implies_:
    case ltl_op::iff_:
      // right associative: same-strength left operand keeps its parentheses
      print(out, f->lhs, p + 1);
      out << " " << op_text(f->op) << " ";
      print(out, f->rhs, p);
      break;
  }
  if (parens) out << ")";
}

}  // namespace

std::string to_string(const ltl& f) {
  std::ostringstream out;
  print(out, f, 0);
  return out.str();
}

std::vector<std::string> qptl_formula::sigma() const {
  std::vector<std::string> out;
  for (auto& q : prefix) out.push_back(q.var);
  for (auto& v : free_vars) out.push_back(v);
  return out;
}

namespace {

struct token {
  enum kind {
    ident, kw_exists, kw_forall, kw_true, kw_false,
    op_not, op_next, op_always, op_eventually,
    op_until, op_weak_until, op_release,
    op_and, op_or, op_implies, op_iff,
    lparen, rparen, dot, end
  } k;
  std::string text;
  int line, col;
};

struct lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit lexer(const std::string& s) : src(s) {}

  void bump(std::size_t n = 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src[pos] == '\n') { ++line; col = 1; } else { ++col; }
      ++pos;
    }
  }

  token next() {
    for (;;) {
      while (pos < src.size() &&
             (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\r' ||
              src[pos] == '\n'))
        bump();
      if (pos < src.size() && src[pos] == '#') {
        while (pos < src.size() && src[pos] != '\n') bump();
        continue;
      }
      break;
    }
    if (pos >= src.size()) return {token::end, "", line, col};
    int l = line, c = col;
    char ch = src[pos];
    if (std::islower(static_cast<unsigned char>(ch))) {
      std::size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) ||
              src[pos] == '_'))
        bump();
      std::string word = src.substr(start, pos - start);
      if (word == "exists") return {token::kw_exists, word, l, c};
      if (word == "forall") return {token::kw_forall, word, l, c};
      if (word == "true") return {token::kw_true, word, l, c};
      if (word == "false") return {token::kw_false, word, l, c};
      return {token::ident, word, l, c};
    }
    if (std::isupper(static_cast<unsigned char>(ch))) {
      bump();
      switch (ch) {
        case 'X': return {token::op_next, "X", l, c};
        case 'G': return {token::op_always, "G", l, c};
        case 'F': return {token::op_eventually, "F", l, c};
        case 'U': return {token::op_until, "U", l, c};
        case 'W': return {token::op_weak_until, "W", l, c};
        case 'R': return {token::op_release, "R", l, c};
      }
      throw parse_error("unknown operator '" + std::string(1, ch) + "'", l, c);
    }
    switch (ch) {
      case '!': bump(); return {token::op_not, "!", l, c};
      case '&': bump(); return {token::op_and, "&", l, c};
      case '|': bump(); return {token::op_or, "|", l, c};
      case '(': bump(); return {token::lparen, "(", l, c};
      case ')': bump(); return {token::rparen, ")", l, c};
      case '.': bump(); return {token::dot, ".", l, c};
      case '-':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          bump(2);
          return {token::op_implies, "->", l, c};
        }
        throw parse_error("expected '->'", l, c);
      case '<':
        if (pos + 2 < src.size() && src[pos + 1] == '-' && src[pos + 2] == '>') {
          bump(3);
          return {token::op_iff, "<->", l, c};
        }
        throw parse_error("expected '<->'", l, c);
    }
    throw parse_error("unexpected character '" + std::string(1, ch) + "'", l, c);
  }
};

struct parser {
  lexer lx;
  token cur;

  explicit parser(const std::string& src) : lx(src) { cur = lx.next(); }

  void advance() { cur = lx.next(); }

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error(msg, cur.line, cur.col);
  }

  qptl_formula parse() {
    qptl_formula out;
    std::set<std::string> bound;
    while (cur.k == token::kw_exists || cur.k == token::kw_forall) {
      quantifier q;
      q.q = cur.k == token::kw_exists ? quant::exists_q : quant::forall_q;
      q.line = cur.line;
      q.col = cur.col;
      advance();
      if (cur.k != token::ident) fail("expected a variable after quantifier");
      q.var = cur.text;
      if (!bound.insert(q.var).second)
        fail("variable '" + q.var + "' quantified twice");
      advance();
      if (cur.k != token::dot) fail("expected '.' after quantified variable");
      advance();
      out.prefix.push_back(std::move(q));
    }
    out.body = parse_iff();
    if (cur.k != token::end) fail("trailing input after formula");
    collect_free(out.body, bound, out.free_vars);
    return out;
  }

  void collect_free(const ltl& f, const std::set<std::string>& bound,
                    std::vector<std::string>& out) {
    if (f->op == ltl_op::var_) {
      if (!bound.count(f->name) &&
          std::find(out.begin(), out.end(), f->name) == out.end())
        out.push_back(f->name);
      return;
    }
    if (f->lhs) collect_free(f->lhs, bound, out);
    if (f->rhs) collect_free(f->rhs, bound, out);
  }

  ltl parse_iff() {
    ltl l = parse_implies();
    if (cur.k == token::op_iff) {
      int line = cur.line, col = cur.col;
      advance();
      return mk_binary(ltl_op::iff_, l, parse_iff(), line, col);
    }
    return l;
  }

  ltl parse_implies() {
    ltl l = parse_or();
    if (cur.k == token::op_implies) {
      int line = cur.line, col = cur.col;
      advance();
      return mk_binary(ltl_op::implies_, l, parse_implies(), line, col);
    }
    return l;
  }

  ltl parse_or() {
    ltl l = parse_and();
    while (cur.k == token::op_or) {
      int line = cur.line, col = cur.col;
      advance();
      l = mk_binary(ltl_op::or_, l, parse_and(), line, col);
    }
    return l;
  }

  ltl parse_and() {
    ltl l = parse_temporal();
    while (cur.k == token::op_and) {
      int line = cur.line, col = cur.col;
      advance();
      l = mk_binary(ltl_op::and_, l, parse_temporal(), line, col);
    }
    return l;
  }

  ltl parse_temporal() {
    ltl l = parse_unary();
    ltl_op op;
    switch (cur.k) {
      case token::op_until: op = ltl_op::until_; break;
      case token::op_weak_until: op = ltl_op::weak_until_; break;
      case token::op_release: op = ltl_op::release_; break;
      default: return l;
    }
    int line = cur.line, col = cur.col;
    advance();
    return mk_binary(op, l, parse_temporal(), line, col);
  }

  ltl parse_unary() {
    int line = cur.line, col = cur.col;
    switch (cur.k) {
      case token::op_not:
        advance();
        return mk_unary(ltl_op::not_, parse_unary(), line, col);
      case token::op_next:
        advance();
        return mk_unary(ltl_op::next_, parse_unary(), line, col);
      case token::op_always:
        advance();
        return mk_unary(ltl_op::always_, parse_unary(), line, col);
      case token::op_eventually:
        advance();
        return mk_unary(ltl_op::eventually_, parse_unary(), line, col);
      default:
        return parse_atom();
    }
  }

  ltl parse_atom() {
    int line = cur.line, col = cur.col;
    switch (cur.k) {
      case token::kw_true: advance(); return mk_const(true, line, col);
      case token::kw_false: advance(); return mk_const(false, line, col);
      case token::ident: {
        std::string name = cur.text;
        advance();
        return mk_var(std::move(name), line, col);
      }
      case token::lparen: {
        advance();
        ltl e = parse_iff();
        if (cur.k != token::rparen) fail("expected ')'");
        advance();
        return e;
      }
      case token::kw_exists:
      case token::kw_forall:
        throw non_prenex_error("quantifier below the prefix", line, col);
      default:
        fail("expected a formula");
    }
  }
};

}  // namespace

qptl_formula parse_qptl(const std::string& src) {
  parser p(src);
  return p.parse();
}

std::string to_string(const qptl_formula& f) {
  std::string out;
  for (const quantifier& q : f.prefix) {
    out += q.q == quant::exists_q ? "exists " : "forall ";
    out += q.var + ". ";
  }
  out += to_string(f.body);
  return out;
}

namespace {

ltl nnf(const ltl& f, bool negated) {
  int line = f->line, col = f->col;
  switch (f->op) {
    case ltl_op::true_:
      return mk_const(!negated, line, col);
    case ltl_op::false_:
      return mk_const(negated, line, col);
    case ltl_op::var_:
      return negated ? mk_unary(ltl_op::not_, f, line, col) : f;
    case ltl_op::not_:
      return nnf(f->lhs, !negated);
    case ltl_op::and_:
      return mk_binary(negated ? ltl_op::or_ : ltl_op::and_,
                       nnf(f->lhs, negated), nnf(f->rhs, negated), line, col);
    case ltl_op::or_:
      return mk_binary(negated ? ltl_op::and_ : ltl_op::or_,
                       nnf(f->lhs, negated), nnf(f->rhs, negated), line, col);
    case ltl_op::implies_:
      //phi -> psi == !phi | psi
      return mk_binary(negated ? ltl_op::and_ : ltl_op::or_,
                       nnf(f->lhs, !negated), nnf(f->rhs, negated), line, col);
    case ltl_op::iff_: {
      // (phi & psi) | (!phi & !psi); negation swaps one side's polarity
      ltl a = mk_binary(ltl_op::and_, nnf(f->lhs, false),
                        nnf(f->rhs, negated), line, col);
      ltl b = mk_binary(ltl_op::and_, nnf(f->lhs, true),
                        nnf(f->rhs, !negated), line, col);
      return mk_binary(ltl_op::or_, a, b, line, col);
    }
    case ltl_op::next_:
      return mk_unary(ltl_op::next_, nnf(f->lhs, negated), line, col);
    case ltl_op::always_:
      return mk_unary(negated ? ltl_op::eventually_ : ltl_op::always_,
                      nnf(f->lhs, negated), line, col);
    case ltl_op::eventually_:
      return mk_unary(negated ? ltl_op::always_ : ltl_op::eventually_,
                      nnf(f->lhs, negated), line, col);
    case ltl_op::until_:
      if (negated)
        return mk_binary(ltl_op::release_, nnf(f->lhs, true),
                         nnf(f->rhs, true), line, col);
      return mk_binary(ltl_op::until_, nnf(f->lhs, false), nnf(f->rhs, false),
                       line, col);
    case ltl_op::weak_until_: {
      if (!negated)
        return mk_binary(ltl_op::weak_until_, nnf(f->lhs, false),
                         nnf(f->rhs, false), line, col);
      // !(phi W psi) == !psi U (!phi & !psi)
      ltl np = nnf(f->lhs, true);
      ltl nq = nnf(f->rhs, true);
      return mk_binary(ltl_op::until_, nq,
                       mk_binary(ltl_op::and_, np, nq, line, col), line, col);
    }
    case ltl_op::release_:
      if (negated)
        return mk_binary(ltl_op::until_, nnf(f->lhs, true), nnf(f->rhs, true),
                         line, col);
      return mk_binary(ltl_op::release_, nnf(f->lhs, false),
                       nnf(f->rhs, false), line, col);
  }
  throw internal_error("nnf: unhandled operator");
}

// Canonical key; used to share states between identical subformulas.
void key_of(const ltl& f, std::string& out) {
  switch (f->op) {
    case ltl_op::true_: out += "1"; return;
    case ltl_op::false_: out += "0"; return;
    case ltl_op::var_:
      out += "v";
      out += f->name;
      out += ";";
      return;
    default:
      out += "(";
      out += op_text(f->op);
      out += " ";
      key_of(f->lhs, out);
      if (f->rhs) {
        out += " ";
        key_of(f->rhs, out);
      }
      out += ")";
      return;
  }
}

std::string key_of(const ltl& f) {
  std::string out;
  key_of(f, out);
  return out;
}

struct translator {
  automaton& a;
  fun_manager& m;
  std::map<std::string, var_id> letters;
  std::map<std::string, std::uint32_t> consed;

  // state names must not shadow alphabet identifiers
  std::string fresh_name(std::string base) const {
    while (letters.count(base)) base += "_";
    return base;
  }

  // Mints the state before computing its transition so self references
  // resolve to the state's own variable.
  std::uint32_t state_for(const ltl& f) {
    std::string key = key_of(f);
    auto it = consed.find(key);
    if (it != consed.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(a.states.size());
    std::string name = fresh_name("s" + std::to_string(id));
    var_id v = m.make_var(var_kind::state, name);
    a.states.push_back({name, v, {origin_kind::subterm, {}}});
    a.delta.push_back(m.ff());
    consed.emplace(std::move(key), id);
    // subterms are visited left to right so state numbering is stable
    bf d = m.ff();
    switch (f->op) {
      case ltl_op::always_:
        d = m.conj(transition(f->lhs), m.var(v));
        break;
      case ltl_op::weak_until_: {
        bf cont = transition(f->lhs);
        d = m.disj(transition(f->rhs), m.conj(cont, m.var(v)));
        break;
      }
      case ltl_op::release_: {
        bf cont = transition(f->lhs);
        d = m.conj(transition(f->rhs), m.disj(cont, m.var(v)));
        break;
      }
      default:
        d = transition(f);
        break;
    }
    a.delta[id] = d;
    return id;
  }

  bf transition(const ltl& f) {
    switch (f->op) {
      case ltl_op::true_:
        return m.tt();
      case ltl_op::false_:
        return m.ff();
      case ltl_op::var_: {
        auto it = letters.find(f->name);
        if (it == letters.end())
          throw internal_error("translate: variable '" + f->name +
                               "' missing from the alphabet");
        return m.var(it->second);
      }
      case ltl_op::not_: {
        if (f->lhs->op != ltl_op::var_)
          throw internal_error("translate: input not in negation normal form");
        auto it = letters.find(f->lhs->name);
        if (it == letters.end())
          throw internal_error("translate: variable '" + f->lhs->name +
                               "' missing from the alphabet");
        return m.nvar(it->second);
      }
      case ltl_op::and_: {
        bf l = transition(f->lhs);
        return m.conj(l, transition(f->rhs));
      }
      case ltl_op::or_: {
        bf l = transition(f->lhs);
        return m.disj(l, transition(f->rhs));
      }
      case ltl_op::next_:
        return m.var(a.states[state_for(f->lhs)].var);
      case ltl_op::always_:
      case ltl_op::weak_until_:
      case ltl_op::release_:
        // delta of the consed state is exactly this formula's transition
        return a.delta[state_for(f)];
      case ltl_op::eventually_:
        throw unsupported_fragment("F", f->line, f->col);
      case ltl_op::until_:
        throw unsupported_fragment("U", f->line, f->col);
      case ltl_op::implies_:
      case ltl_op::iff_:
        throw internal_error("translate: input not in negation normal form");
    }
    throw internal_error("translate: unhandled operator");
  }
};

}  // namespace

ltl to_nnf(const ltl& f) { return nnf(f, false); }

automaton translate_to_asa(const ltl& body, const std::vector<std::string>& sigma,
                           std::shared_ptr<fun_manager> mgr) {
  automaton a;
  a.mgr = mgr;
  translator tr{a, *mgr, {}, {}};
  for (auto& name : sigma) {
    if (tr.letters.count(name))
      throw internal_error("translate: duplicate alphabet variable '" + name +
                           "'");
    var_id v = mgr->make_var(var_kind::alphabet, name);
    tr.letters[name] = v;
    a.alphabet.push_back(v);
  }
  bf init_delta = tr.transition(body);
  // Reuse a temporal state whose transition already matches.
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.delta[i] == init_delta) {
      a.initial = state_id{static_cast<std::uint32_t>(i)};
      validate(a);
      return a;
    }
  }
  std::uint32_t id = static_cast<std::uint32_t>(a.states.size());
  std::string init_name = tr.fresh_name("init");
  var_id v = mgr->make_var(var_kind::state, init_name);
  a.states.push_back({init_name, v, {origin_kind::synthetic, {}}});
  a.delta.push_back(init_delta);
  a.initial = state_id{id};
  validate(a);
  return a;
}

}  // namespace alq
