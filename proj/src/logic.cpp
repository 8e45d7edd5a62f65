#include "starcyl/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace starcyl {

FormulaPtr Formula::atom(int rel, std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Atom;
  f->rel = rel;
  f->args = std::move(args);
  return f;
}
FormulaPtr Formula::eq(int i, int j) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::EqAtom;
  f->var_i = i;
  f->var_j = j;
  return f;
}
FormulaPtr Formula::eq_const(int i, std::string sym) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::EqConst;
  f->var_i = i;
  f->sym = std::move(sym);
  return f;
}
FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::And;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}
FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Or;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}
FormulaPtr Formula::neg(FormulaPtr f0) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Not;
  f->left = std::move(f0);
  return f;
}
FormulaPtr Formula::exists(int var, FormulaPtr f0) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Exists;
  f->var_i = var;
  f->left = std::move(f0);
  return f;
}
FormulaPtr Formula::forall(int var, FormulaPtr f0) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Forall;
  f->var_i = var;
  f->left = std::move(f0);
  return f;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->rel != b->rel || a->var_i != b->var_i ||
      a->var_j != b->var_j || a->sym != b->sym || !(a->args == b->args))
    return false;
  return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
}

namespace {

void collect_free(const FormulaPtr& f, std::set<int>& bound,
                  std::set<int>& free) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const Term& t : f->args)
        if (t.is_var && !bound.count(t.var)) free.insert(t.var);
      break;
    case Formula::Kind::EqAtom:
      if (!bound.count(f->var_i)) free.insert(f->var_i);
      if (!bound.count(f->var_j)) free.insert(f->var_j);
      break;
    case Formula::Kind::EqConst:
      if (!bound.count(f->var_i)) free.insert(f->var_i);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_free(f->left, bound, free);
      collect_free(f->right, bound, free);
      break;
    case Formula::Kind::Not:
      collect_free(f->left, bound, free);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool was_bound = bound.count(f->var_i) > 0;
      bound.insert(f->var_i);
      collect_free(f->left, bound, free);
      if (!was_bound) bound.erase(f->var_i);
      break;
    }
  }
}

}  // namespace

std::vector<int> free_vars(const FormulaPtr& f) {
  std::set<int> bound, free;
  collect_free(f, bound, free);
  return {free.begin(), free.end()};
}

int max_var(const FormulaPtr& f) {
  int m = 0;
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const Term& t : f->args)
        if (t.is_var) m = std::max(m, t.var);
      break;
    case Formula::Kind::EqAtom:
      m = std::max(f->var_i, f->var_j);
      break;
    case Formula::Kind::EqConst:
      m = f->var_i;
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      m = std::max(max_var(f->left), max_var(f->right));
      break;
    case Formula::Kind::Not:
      m = max_var(f->left);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      m = std::max(f->var_i, max_var(f->left));
      break;
  }
  return m;
}

QueryClass classify(const Query& q) {
  bool has_forall = false, has_not = false, neg_on_eq_only = true;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Not:
        has_not = true;
        if (f->left->kind != Formula::Kind::EqAtom &&
            f->left->kind != Formula::Kind::EqConst)
          neg_on_eq_only = false;
        walk(f->left);
        break;
      case Formula::Kind::Forall:
        has_forall = true;
        walk(f->left);
        break;
      case Formula::Kind::Exists:
        walk(f->left);
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        walk(f->left);
        walk(f->right);
        break;
      default:
        break;
    }
  };
  walk(q.body);
  if (!has_not)
    return has_forall ? QueryClass::PositiveWithForall : QueryClass::Positive;
  return neg_on_eq_only ? QueryClass::InequalityOnlyNegation
                        : QueryClass::FullFO;
}

const char* query_class_name(QueryClass c) {
  switch (c) {
    case QueryClass::Positive:
      return "positive";
    case QueryClass::PositiveWithForall:
      return "positive-with-forall";
    case QueryClass::InequalityOnlyNegation:
      return "inequality-only-negation";
    case QueryClass::FullFO:
      return "full-fo";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind {
    Ident,
    Var,
    Comma,
    Dot,
    Amp,
    Pipe,
    Bang,
    Tilde,
    LParen,
    RParen,
    End
  };
  Kind kind;
  std::string text;
  int var = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = text_[i_];
    switch (c) {
      case ',': tok_ = {Token::Kind::Comma, ",", 0, i_++}; return;
      case '.': tok_ = {Token::Kind::Dot, ".", 0, i_++}; return;
      case '&': tok_ = {Token::Kind::Amp, "&", 0, i_++}; return;
      case '|': tok_ = {Token::Kind::Pipe, "|", 0, i_++}; return;
      case '!': tok_ = {Token::Kind::Bang, "!", 0, i_++}; return;
      case '~': tok_ = {Token::Kind::Tilde, "~", 0, i_++}; return;
      case '(': tok_ = {Token::Kind::LParen, "(", 0, i_++}; return;
      case ')': tok_ = {Token::Kind::RParen, ")", 0, i_++}; return;
      default: break;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
              text_[i_] == '_'))
        ++i_;
      std::string word = text_.substr(start, i_ - start);
      if (word.size() >= 2 && word[0] == 'x' &&
          std::all_of(word.begin() + 1, word.end(),
                      [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        tok_ = {Token::Kind::Var, word, std::stoi(word.substr(1)), start};
      } else {
        tok_ = {Token::Kind::Ident, word, 0, start};
      }
      return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", i_);
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const Schema& schema)
      : lex_(text), schema_(schema) {}

  Query parse() {
    Query q;
    q.answer_vars.push_back(expect_var());
    while (lex_.peek().kind == Token::Kind::Comma) {
      lex_.next();
      q.answer_vars.push_back(expect_var());
    }
    expect(Token::Kind::Dot, "'.'");
    q.body = parse_or();
    expect(Token::Kind::End, "end of query");

    q.n = std::max(max_var(q.body),
                   *std::max_element(q.answer_vars.begin(), q.answer_vars.end()));
    validate(q);
    return q;
  }

 private:
  int expect_var() {
    if (lex_.peek().kind != Token::Kind::Var)
      throw parse_error("expected a variable (x1, x2, ...)", lex_.peek().pos);
    Token t = lex_.next();
    if (t.var < 1) throw parse_error("variable index must be >= 1", t.pos);
    return t.var;
  }

  void expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw parse_error("expected " + what, lex_.peek().pos);
    lex_.next();
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (lex_.peek().kind == Token::Kind::Pipe) {
      lex_.next();
      f = Formula::disj(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (lex_.peek().kind == Token::Kind::Amp) {
      lex_.next();
      f = Formula::conj(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Bang) {
      lex_.next();
      return Formula::neg(parse_unary());
    }
    if (t.kind == Token::Kind::Ident && (t.text == "exists" || t.text == "forall")) {
      bool is_exists = t.text == "exists";
      lex_.next();
      int v = expect_var();
      FormulaPtr body = parse_unary();
      return is_exists ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    const Token t = lex_.peek();
    if (t.kind == Token::Kind::LParen) {
      lex_.next();
      FormulaPtr f = parse_or();
      expect(Token::Kind::RParen, "')'");
      return f;
    }
    if (t.kind == Token::Kind::Ident) {
      lex_.next();
      if (lex_.peek().kind == Token::Kind::LParen) return parse_atom(t);
      // A bare constant: must be one side of an equality.
      return parse_eq_tail(Term::constant(t.text), t.pos);
    }
    if (t.kind == Token::Kind::Var) {
      lex_.next();
      return parse_eq_tail(Term::variable(t.var), t.pos);
    }
    throw parse_error("expected a formula", t.pos);
  }

  FormulaPtr parse_atom(const Token& name) {
    int rel = schema_.find(name.text);
    if (rel < 0)
      throw parse_error("unknown relation '" + name.text + "'", name.pos);
    expect(Token::Kind::LParen, "'('");
    std::vector<Term> args;
    args.push_back(parse_term());
    while (lex_.peek().kind == Token::Kind::Comma) {
      lex_.next();
      args.push_back(parse_term());
    }
    expect(Token::Kind::RParen, "')'");
    if (static_cast<int>(args.size()) != schema_.arity(rel))
      throw parse_error("relation '" + name.text + "' expects " +
                            std::to_string(schema_.arity(rel)) + " arguments",
                        name.pos);
    return Formula::atom(rel, std::move(args));
  }

  Term parse_term() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Var) {
      Token v = lex_.next();
      if (v.var < 1) throw parse_error("variable index must be >= 1", v.pos);
      return Term::variable(v.var);
    }
    if (t.kind == Token::Kind::Ident) return Term::constant(lex_.next().text);
    throw parse_error("expected a variable or constant", t.pos);
  }

  FormulaPtr parse_eq_tail(Term lhs, std::size_t pos) {
    expect(Token::Kind::Tilde, "'~'");
    Term rhs = parse_term();
    if (lhs.is_var && rhs.is_var) return Formula::eq(lhs.var, rhs.var);
    if (lhs.is_var) return Formula::eq_const(lhs.var, rhs.sym);
    if (rhs.is_var) return Formula::eq_const(rhs.var, lhs.sym);
    throw parse_error("equality between two constants is not supported", pos);
  }

  void validate(const Query& q) {
    // Quantifiers must bind a variable free in their scope.
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
      if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) {
        std::vector<int> fv = free_vars(f->left);
        if (!std::binary_search(fv.begin(), fv.end(), f->var_i))
          throw semantic_error("quantified variable x" +
                               std::to_string(f->var_i) +
                               " does not occur in its scope");
      }
      if (f->left) walk(f->left);
      if (f->right) walk(f->right);
    };
    walk(q.body);

    std::vector<int> fv = free_vars(q.body);
    std::set<int> seen;
    for (int v : q.answer_vars) {
      if (!seen.insert(v).second)
        throw semantic_error("duplicate answer variable x" + std::to_string(v));
      if (!std::binary_search(fv.begin(), fv.end(), v))
        throw semantic_error("answer variable x" + std::to_string(v) +
                             " is not free in the body");
    }
  }

  Lexer lex_;
  const Schema& schema_;
};

}  // namespace

Query parse_query(const std::string& text, const Schema& schema,
                  bool normalize) {
  Parser p(text, schema);
  Query q = p.parse();
  return normalize ? normalize_vars(q) : q;
}

// ---------------------------------------------------------------------------
// normalize_vars
// ---------------------------------------------------------------------------

namespace {

struct Renamer {
  std::set<int> used;  // variables already claimed by an atom occurrence
  int next_fresh;

  FormulaPtr rewrite(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Atom: {
        // Repeated variables and constants become fresh variables that
        // are existentially quantified around the atom and linked back
        // with an equality; x ~ c holds the constant.
        std::vector<Term> args;
        std::vector<FormulaPtr> links;
        std::vector<int> fresh_vars;
        for (const Term& t : f->args) {
          if (t.is_var && !used.count(t.var)) {
            used.insert(t.var);
            args.push_back(t);
            continue;
          }
          int fv = next_fresh++;
          used.insert(fv);
          fresh_vars.push_back(fv);
          args.push_back(Term::variable(fv));
          links.push_back(t.is_var ? Formula::eq(t.var, fv)
                                   : Formula::eq_const(fv, t.sym));
        }
        FormulaPtr out = Formula::atom(f->rel, std::move(args));
        for (FormulaPtr& l : links) out = Formula::conj(out, std::move(l));
        for (auto it = fresh_vars.rbegin(); it != fresh_vars.rend(); ++it)
          out = Formula::exists(*it, std::move(out));
        return out;
      }
      case Formula::Kind::EqAtom:
      case Formula::Kind::EqConst:
        return f;
      case Formula::Kind::And: {
        FormulaPtr l = rewrite(f->left);  // claim variables left-to-right
        FormulaPtr r = rewrite(f->right);
        return Formula::conj(std::move(l), std::move(r));
      }
      case Formula::Kind::Or: {
        FormulaPtr l = rewrite(f->left);
        FormulaPtr r = rewrite(f->right);
        return Formula::disj(std::move(l), std::move(r));
      }
      case Formula::Kind::Not:
        return Formula::neg(rewrite(f->left));
      case Formula::Kind::Exists:
        return Formula::exists(f->var_i, rewrite(f->left));
      case Formula::Kind::Forall:
        return Formula::forall(f->var_i, rewrite(f->left));
    }
    return f;
  }
};

}  // namespace

Query normalize_vars(const Query& q) {
  Renamer r;
  r.next_fresh = q.n + 1;
  Query out;
  out.answer_vars = q.answer_vars;
  out.body = r.rewrite(q.body);
  out.n = std::max(q.n, max_var(out.body));
  return out;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Or:
      return 1;
    case Formula::Kind::And:
      return 2;
    default:
      return 3;  // unary and atoms
  }
}

void print_with_schema(const FormulaPtr& f, const Schema* schema,
                       std::ostream& os) {
  auto child = [&](const FormulaPtr& c, int parent_prec) {
    bool parens = precedence(c->kind) < parent_prec;
    if (parens) os << "(";
    print_with_schema(c, schema, os);
    if (parens) os << ")";
  };
  switch (f->kind) {
    case Formula::Kind::Atom:
      os << (schema ? schema->name(f->rel) : "R" + std::to_string(f->rel))
         << "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) os << ",";
        os << (f->args[i].is_var ? "x" + std::to_string(f->args[i].var)
                                 : f->args[i].sym);
      }
      os << ")";
      break;
    case Formula::Kind::EqAtom:
      os << "x" << f->var_i << " ~ x" << f->var_j;
      break;
    case Formula::Kind::EqConst:
      os << "x" << f->var_i << " ~ " << f->sym;
      break;
    case Formula::Kind::And:
      child(f->left, 2);
      os << " & ";
      // Right-nested same-kind trees need parentheses to round-trip.
      if (f->right->kind == Formula::Kind::And) {
        os << "(";
        print_with_schema(f->right, schema, os);
        os << ")";
      } else {
        child(f->right, 2);
      }
      break;
    case Formula::Kind::Or:
      child(f->left, 1);
      os << " | ";
      if (f->right->kind == Formula::Kind::Or) {
        os << "(";
        print_with_schema(f->right, schema, os);
        os << ")";
      } else {
        child(f->right, 1);
      }
      break;
    case Formula::Kind::Not:
      os << "!";
      if (f->left->kind == Formula::Kind::And ||
          f->left->kind == Formula::Kind::Or ||
          f->left->kind == Formula::Kind::EqAtom ||
          f->left->kind == Formula::Kind::EqConst) {
        os << "(";
        print_with_schema(f->left, schema, os);
        os << ")";
      } else {
        print_with_schema(f->left, schema, os);
      }
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      os << (f->kind == Formula::Kind::Exists ? "exists x" : "forall x")
         << f->var_i << " ";
      if (f->left->kind == Formula::Kind::And ||
          f->left->kind == Formula::Kind::Or ||
          f->left->kind == Formula::Kind::EqAtom ||
          f->left->kind == Formula::Kind::EqConst) {
        os << "(";
        print_with_schema(f->left, schema, os);
        os << ")";
      } else {
        print_with_schema(f->left, schema, os);
      }
      break;
  }
}

}  // namespace

std::string print_formula(const FormulaPtr& f, const Schema& schema) {
  std::ostringstream os;
  print_with_schema(f, &schema, os);
  return os.str();
}

std::string print_query(const Query& q, const Schema& schema) {
  std::ostringstream os;
  for (std::size_t i = 0; i < q.answer_vars.size(); ++i) {
    if (i) os << ", ";
    os << "x" << q.answer_vars[i];
  }
  os << " . ";
  print_with_schema(q.body, &schema, os);
  return os.str();
}

}  // namespace starcyl
