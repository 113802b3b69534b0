#include <cctype>
#include <set>

#include "errors.hpp"
#include "lang.hpp"

namespace rewlab {
namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    int l = line, co = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, co});
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '-' || src[k] == '+')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, src.substr(i, j - i), l, co});
      adv(j - i);
      continue;
    }
    static const char* two[] = {":=", "==", "!=", "<=", ">=", "..", "&&", "||"};
    bool matched = false;
    for (const char* t : two) {
      if (src.compare(i, 2, t) == 0) {
        out.push_back({Tok::Sym, t, l, co});
        adv(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string("+-*/^=<>;,(){}[]:!").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), l, co});
      adv(1);
      continue;
    }
    throw ParseError(l, co, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kKeywords = {"skip", "reward", "if", "else", "while", "invariant", "param", "not",
                                         "and", "or", "true", "false", "min", "max", "exp", "inf"};

class Parser {
 public:
  Parser(const std::string& src, std::set<std::string> params) : toks_(lex(src)), params_(std::move(params)) {}

  Program program() {
    Program p;
    while (is_ident("param")) {
      next();
      ParamDecl d;
      d.name = ident();
      if (accept(":")) d.range = range();
      if (params_.count(d.name)) fail("duplicate parameter '" + d.name + "'");
      params_.insert(d.name);
      p.params.push_back(std::move(d));
      accept(";");
    }
    decls_ = &p;
    p.body = block_body();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    reward_arity(p.body);  // arity check
    return p;
  }

  ExprPtr only_expr() {
    ExprPtr e = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

  BExprPtr only_bexpr() {
    BExprPtr b = bexpr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return b;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> params_;
  const Program* decls_ = nullptr;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().line, peek().col, msg); }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool is_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept(const char* s) {
    if (is_sym(s) || is_ident(s)) {
      next();
      return true;
    }
    return false;
  }
  void expect(const char* s) {
    if (!accept(s)) fail(std::string("expected '") + s + "' but found '" + (peek().kind == Tok::End ? "end of input" : peek().text) + "'");
  }
  std::string ident() {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail("expected identifier");
    return next().text;
  }

  ExtReal number_literal() {
    bool neg_guard = is_sym("-");
    if (neg_guard) fail("negative numbers are not values");
    if (accept("inf")) return ExtReal::infinity();
    if (peek().kind != Tok::Number) fail("expected number");
    ExtReal v = ExtReal::parse(next().text);
    if (accept("/")) {
      if (peek().kind != Tok::Number) fail("expected number");
      ExtReal d = ExtReal::parse(next().text);
      if (d.is_zero()) fail("division by zero");
      v = div(v, d);
    }
    return v;
  }

  ParamRange range() {
    ParamRange r;
    if (accept("[")) {
      r.lo = number_literal();
      expect(",");
      r.hi = number_literal();
      expect("]");
    } else {
      r.integer = true;
      r.lo = number_literal();
      expect("..");
      r.hi = number_literal();
      if (!r.lo.is_natural() || !(r.hi.is_natural() || r.hi.is_inf())) fail("integer range bounds must be naturals or inf");
    }
    if (r.hi < r.lo) fail("empty parameter range");
    return r;
  }

  // program := stmt (";" stmt)*, trailing ";" tolerated; ";" optional after "}"
  StmtPtr block_body() {
    std::vector<StmtPtr> items;
    if (is_sym("}") || peek().kind == Tok::End) return st::skip();
    items.push_back(stmt());
    for (;;) {
      bool after_block = pos_ > 0 && toks_[pos_ - 1].kind == Tok::Sym && toks_[pos_ - 1].text == "}";
      if (!accept(";") && !after_block) break;
      if (is_sym("}") || peek().kind == Tok::End) break;
      items.push_back(stmt());
    }
    return st::seq(std::move(items));
  }

  StmtPtr block() {
    expect("{");
    StmtPtr s = block_body();
    expect("}");
    return s;
  }

  StmtPtr stmt() {
    if (accept("skip")) return st::skip();
    if (accept("reward")) {
      expect("(");
      std::vector<ExprPtr> args{expr()};
      while (accept(",")) args.push_back(expr());
      expect(")");
      return st::reward(std::move(args));
    }
    if (accept("if")) {
      BExprPtr b = bexpr();
      StmtPtr s1 = block(), s2 = st::skip();
      if (accept("else")) s2 = is_ident("if") ? stmt() : block();
      return st::ite(b, s1, s2);
    }
    if (is_ident("while")) {
      int line = next().line;
      BExprPtr b = bexpr();
      ExprPtr inv;
      if (accept("invariant")) inv = expr();
      StmtPtr body = block();
      auto w = std::const_pointer_cast<Stmt>(st::loop(b, body, inv));
      w->line = line;
      return w;
    }
    if (is_sym("{")) {
      StmtPtr s1 = block();
      if (!accept("[")) return s1;  // plain nested block
      const Token& at = peek();
      ExprPtr p = expr();
      check_probability(p, at);
      expect("]");
      StmtPtr s2 = block();
      return st::prob(p, s1, s2);
    }
    if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
      const Token& at = peek();
      std::string x = ident();
      if (params_.count(x)) throw ParseError(at.line, at.col, "cannot assign to parameter '" + x + "'");
      expect(":=");
      return st::assign(x, expr());
    }
    fail("expected statement but found '" + (peek().kind == Tok::End ? std::string("end of input") : peek().text) + "'");
  }

  void check_probability(const ExprPtr& p, const Token& at) {
    std::set<std::string> vars, ps;
    collect_vars(p, vars, &ps);
    if (!vars.empty()) throw ParseError(at.line, at.col, "probability may not mention program variables");
    if (ps.empty()) {
      ExtReal v = fold(p);
      if (ExtReal(1) < v) throw ParseError(at.line, at.col, "probability " + v.str() + " outside [0,1]");
      return;
    }
    for (const auto& n : ps) {
      const ParamDecl* d = decls_ ? decls_->find_param(n) : nullptr;
      if (!d || !d->range) throw ParseError(at.line, at.col, "probability parameter '" + n + "' needs a declared range");
      if (p->kind == ExprKind::Param && ExtReal(1) < d->range->hi)
        throw ParseError(at.line, at.col, "probability parameter '" + n + "' range exceeds [0,1]");
    }
  }

  static ExtReal fold(const ExprPtr& e);

  // expr := term (("+"|"-") term)*
  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept("+"))
        e = ex::add(e, term());
      else if (accept("-"))
        e = ex::sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = power();
    for (;;) {
      if (accept("*")) {
        e = ex::mul(e, power());
      } else if (is_sym("/")) {
        const Token& at = next();
        ExprPtr d = power();
        if (contains_var(d)) throw ParseError(at.line, at.col, "division by a program variable is not allowed");
        if (e->kind == ExprKind::Const && d->kind == ExprKind::Const) {
          if (d->value.is_zero()) throw ParseError(at.line, at.col, "division by zero");
          e = ex::num(div(e->value, d->value));
        } else {
          e = ex::div(e, d);
        }
      } else {
        return e;
      }
    }
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept("^")) return ex::pow(base, power());
    return base;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) return ex::num(ExtReal::parse(next().text));
    if (accept("inf")) return ex::num(ExtReal::infinity());
    if (accept("true")) return ex::num(1);
    if (accept("false")) return ex::num(0);
    if (accept("(")) {
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      BExprPtr b = bexpr();
      expect("]");
      return ex::iv(b);
    }
    if (is_ident("min") || is_ident("max")) {
      bool is_min = next().text == "min";
      expect("(");
      ExprPtr a = expr();
      expect(",");
      ExprPtr b = expr();
      expect(")");
      return is_min ? ex::min(a, b) : ex::max(a, b);
    }
    if (accept("exp")) {
      expect("(");
      ExprPtr a = expr();
      expect(")");
      return ex::exp(a);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      std::string n = next().text;
      return params_.count(n) ? ex::param(n) : ex::var(n);
    }
    if (is_sym("-")) fail("negative numbers are not values");
    fail("expected expression but found '" + (t.kind == Tok::End ? std::string("end of input") : t.text) + "'");
  }

  bool at_cmp() const {
    return is_sym("=") || is_sym("==") || is_sym("!=") || is_sym("<") || is_sym("<=") || is_sym(">") || is_sym(">=");
  }
  bool at_arith() const { return is_sym("+") || is_sym("-") || is_sym("*") || is_sym("/") || is_sym("^"); }

  CmpOp cmp_op() {
    std::string s = next().text;
    if (s == "=" || s == "==") return CmpOp::Eq;
    if (s == "!=") return CmpOp::Ne;
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == ">") return CmpOp::Gt;
    return CmpOp::Ge;
  }

  BExprPtr bexpr() {
    BExprPtr b = bterm();
    while (accept("or") || accept("||")) b = ex::bor(b, bterm());
    return b;
  }

  BExprPtr bterm() {
    BExprPtr b = bfactor();
    while (accept("and") || accept("&&")) b = ex::band(b, bfactor());
    return b;
  }

  BExprPtr bfactor() {
    if (accept("not") || accept("!")) return ex::bnot(bfactor());
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        next();
        BExprPtr b = bexpr();
        expect(")");
        if (!at_cmp() && !at_arith()) return b;
      } catch (const ParseError&) {
      }
      pos_ = save;
    }
    if ((is_ident("true") || is_ident("false"))) {
      bool v = peek().text == "true";
      const Token& nx = peek(1);
      static const std::set<std::string> ops = {"=", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/", "^"};
      bool op_follows = nx.kind == Tok::Sym && ops.count(nx.text);
      if (!op_follows) {
        next();
        return v ? ex::btrue() : ex::bfalse();
      }
    }
    ExprPtr l = expr();
    if (at_cmp()) {
      CmpOp op = cmp_op();
      return ex::cmp(op, l, expr());
    }
    return ex::cmp(CmpOp::Ne, l, ex::num(0));  // bare value: nonzero is true
  }
};

ExtReal Parser::fold(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const: return e->value;
    case ExprKind::Add: return fold(e->a) + fold(e->b);
    case ExprKind::Monus: return monus(fold(e->a), fold(e->b));
    case ExprKind::Mul: return fold(e->a) * fold(e->b);
    case ExprKind::Div: return div(fold(e->a), fold(e->b));
    case ExprKind::Pow: return pow(fold(e->a), fold(e->b));
    case ExprKind::Min: return min(fold(e->a), fold(e->b));
    case ExprKind::Max: return max(fold(e->a), fold(e->b));
    case ExprKind::Exp: return exp_of(fold(e->a));
    default: throw EvalError("probability is not a constant");
  }
}

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text, {});
  return p.program();
}

ExprPtr parse_expr(const std::string& text, const std::set<std::string>& params) {
  Parser p(text, params);
  return p.only_expr();
}

BExprPtr parse_bexpr(const std::string& text, const std::set<std::string>& params) {
  Parser p(text, params);
  return p.only_bexpr();
}

namespace {
// Identifiers of `text` that are not program variables of p.
std::set<std::string> outside_names(const Program& p, const std::string& text) {
  std::set<std::string> out = param_names(p), vars = free_vars(p);
  for (const auto& t : lex(text))
    if (t.kind == Tok::Ident && !kKeywords.count(t.text) && !vars.count(t.text)) out.insert(t.text);
  return out;
}
}  // namespace

ExprPtr parse_expr_in(const Program& p, const std::string& text) { return parse_expr(text, outside_names(p, text)); }

BExprPtr parse_bexpr_in(const Program& p, const std::string& text) {
  return parse_bexpr(text, outside_names(p, text));
}

}  // namespace rewlab
