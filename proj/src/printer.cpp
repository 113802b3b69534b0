#include "lang.hpp"

namespace rewlab {
namespace {

int level(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Add:
    case ExprKind::Monus: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Pow: return 3;
    case ExprKind::Const: return (e->value.is_exact() && !e->value.is_natural()) ? 2 : 4;
    default: return 4;
  }
}

std::string wrap(const ExprPtr& e, bool paren) {
  std::string s = to_string(e);
  return paren ? "(" + s + ")" : s;
}

int blevel(const BExprPtr& b) {
  switch (b->kind) {
    case BKind::Or: return 1;
    case BKind::And: return 2;
    case BKind::Not: return 3;
    default: return 4;
  }
}

std::string ind(int n) { return std::string(2 * n, ' '); }

bool simple(const StmtPtr& s) {
  return s->kind == StmtKind::Skip || s->kind == StmtKind::Assign || s->kind == StmtKind::Reward;
}

std::string block(const StmtPtr& s, int indent, bool allow_inline) {
  if (allow_inline && simple(s)) return "{ " + to_string(s, 0) + " }";
  return "{\n" + to_string(s, indent + 1) + "\n" + ind(indent) + "}";
}

}  // namespace

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    default: return ">=";
  }
}

std::string to_string(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const: return e->value.str();
    case ExprKind::Var:
    case ExprKind::Param: return e->name;
    case ExprKind::Iverson: return "[" + to_string(e->cond) + "]";
    case ExprKind::Exp: return "exp(" + to_string(e->a) + ")";
    case ExprKind::Min: return "min(" + to_string(e->a) + ", " + to_string(e->b) + ")";
    case ExprKind::Max: return "max(" + to_string(e->a) + ", " + to_string(e->b) + ")";
    case ExprKind::Pow: return wrap(e->a, level(e->a) <= 3) + "^" + wrap(e->b, level(e->b) < 3);
    default: {
      int L = level(e);
      const char* op = e->kind == ExprKind::Add ? " + " : e->kind == ExprKind::Monus ? " - " : e->kind == ExprKind::Mul ? " * " : " / ";
      return wrap(e->a, level(e->a) < L) + op + wrap(e->b, level(e->b) <= L);
    }
  }
}

std::string to_string(const BExprPtr& b) {
  switch (b->kind) {
    case BKind::True: return "true";
    case BKind::False: return "false";
    case BKind::Cmp: return to_string(b->l) + " " + to_string(b->op) + " " + to_string(b->r);
    case BKind::Not:
      if (b->a->kind == BKind::True || b->a->kind == BKind::False) return "not " + to_string(b->a);
      return "not (" + to_string(b->a) + ")";
    default: {
      int L = blevel(b);
      auto w = [&](const BExprPtr& c, bool p) { return p ? "(" + to_string(c) + ")" : to_string(c); };
      return w(b->a, blevel(b->a) < L) + (b->kind == BKind::And ? " and " : " or ") + w(b->b, blevel(b->b) <= L);
    }
  }
}

std::string to_string(const StmtPtr& s, int indent) {
  std::string pad = ind(indent);
  switch (s->kind) {
    case StmtKind::Skip: return pad + "skip";
    case StmtKind::Assign: return pad + s->var + " := " + to_string(s->e);
    case StmtKind::Reward: {
      std::string r = pad + "reward(";
      for (std::size_t i = 0; i < s->args.size(); ++i) r += (i ? ", " : "") + to_string(s->args[i]);
      return r + ")";
    }
    case StmtKind::Seq: {
      std::string r;
      for (std::size_t i = 0; i < s->items.size(); ++i) r += (i ? ";\n" : "") + to_string(s->items[i], indent);
      return r;
    }
    case StmtKind::Prob: {
      bool in = simple(s->s1) && simple(s->s2);
      return pad + block(s->s1, indent, in) + " [" + to_string(s->e) + "] " + block(s->s2, indent, in);
    }
    case StmtKind::If: {
      std::string r = pad + "if " + to_string(s->guard) + " " + block(s->s1, indent, false);
      if (s->s2->kind != StmtKind::Skip) r += " else " + block(s->s2, indent, false);
      return r;
    }
    case StmtKind::While: {
      std::string r = pad + "while " + to_string(s->guard);
      if (s->e) r += " invariant " + to_string(s->e);
      return r + " " + block(s->s1, indent, false);
    }
  }
  return "";
}

std::string pretty_print(const Program& p) {
  std::string r;
  for (const auto& d : p.params) {
    r += "param " + d.name;
    if (d.range) {
      if (d.range->integer)
        r += " : " + d.range->lo.str() + ".." + d.range->hi.str();
      else
        r += " : [" + d.range->lo.str() + ", " + d.range->hi.str() + "]";
    }
    r += "\n";
  }
  return r + to_string(p.body, 0) + "\n";
}

}  // namespace rewlab
