#include "varmath/expr.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <utility>

#include "varmath/numeric.hpp"

namespace varmath {

ExprPtr Expr::number(double value) {
  return std::make_shared<Expr>(Number{value});
}
ExprPtr Expr::pi() {
  return std::make_shared<Expr>(NamedConstant{NamedConstant::kPi});
}
ExprPtr Expr::e() {
  return std::make_shared<Expr>(NamedConstant{NamedConstant::kE});
}
ExprPtr Expr::variable(std::string name) {
  return std::make_shared<Expr>(Variable{std::move(name)});
}
ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<Expr>(Unary{op, std::move(operand)});
}
ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Binary{op, std::move(lhs), std::move(rhs)});
}
ExprPtr Expr::call(Builtin fn, std::vector<ExprPtr> args) {
  return std::make_shared<Expr>(Call{fn, std::move(args)});
}

bool operator==(const Expr& a, const Expr& b) {
  const auto& na = a.node();
  const auto& nb = b.node();
  if (na.index() != nb.index()) {
    return false;
  }
  struct Same {
    const Expr::Node& other;
    bool operator()(const Expr::Number& x) const {
      return std::get<Expr::Number>(other).value == x.value;
    }
    bool operator()(const Expr::NamedConstant& x) const {
      return std::get<Expr::NamedConstant>(other).kind == x.kind;
    }
    bool operator()(const Expr::Variable& x) const {
      return std::get<Expr::Variable>(other).name == x.name;
    }
    bool operator()(const Expr::Unary& x) const {
      const auto& o = std::get<Expr::Unary>(other);
      return o.op == x.op && *o.operand == *x.operand;
    }
    bool operator()(const Expr::Binary& x) const {
      const auto& o = std::get<Expr::Binary>(other);
      return o.op == x.op && *o.lhs == *x.lhs && *o.rhs == *x.rhs;
    }
    bool operator()(const Expr::Call& x) const {
      const auto& o = std::get<Expr::Call>(other);
      if (o.fn != x.fn || o.args.size() != x.args.size()) {
        return false;
      }
      for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (!(*o.args[i] == *x.args[i])) {
          return false;
        }
      }
      return true;
    }
  };
  return std::visit(Same{nb}, na);
}

namespace {

struct FunctionInfo {
  std::string_view name;
  Builtin fn;
  std::size_t arity;
};

constexpr std::array<FunctionInfo, 6> kFunctions = {{
    {"sqrt", Builtin::kSqrt, 1},
    {"abs", Builtin::kAbs, 1},
    {"floor", Builtin::kFloor, 1},
    {"ceil", Builtin::kCeil, 1},
    {"min", Builtin::kMin, 2},
    {"max", Builtin::kMax, 2},
}};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_var_suffix(std::string_view suffix) {
  if (suffix.empty()) {
    return false;
  }
  for (char c : suffix) {
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) {
      return false;
    }
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr result = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input", pos_);
    }
    return result;
  }

 private:
  // sum := product (('+'|'-') product)*
  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    while (true) {
      skip_ws();
      if (consume('+')) {
        lhs = Expr::binary(BinaryOp::kAdd, lhs, parse_product());
      } else if (consume('-')) {
        lhs = Expr::binary(BinaryOp::kSub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  // product := unary (('*'|'/') unary)*
  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    while (true) {
      skip_ws();
      if (consume('*')) {
        lhs = Expr::binary(BinaryOp::kMul, lhs, parse_unary());
      } else if (consume('/')) {
        lhs = Expr::binary(BinaryOp::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // unary := '-' unary | power
  // The exponent binds tighter than negation: -2^2 == -(2^2).
  ExprPtr parse_unary() {
    skip_ws();
    if (consume('-')) {
      return Expr::unary(UnaryOp::kNegate, parse_unary());
    }
    return parse_power();
  }

  // power := primary ('^' unary)?   (right-associative)
  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    skip_ws();
    if (consume('^')) {
      return Expr::binary(BinaryOp::kPow, base, parse_unary());
    }
    return base;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) {
      fail("unexpected end of expression", pos_);
    }
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    fail(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      fail("malformed numeric literal", start);
    }
    // Optional exponent; accepted so that canonical renderings of very
    // small or large literals re-parse.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      } else {
        pos_ = mark;  // bare 'e' after a number is not an exponent
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    double value = std::strtod(token.c_str(), nullptr);
    return Expr::number(value);
  }

  ExprPtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      ++pos_;
    }
    std::string_view ident = text_.substr(start, pos_ - start);

    if (ident.rfind("VAR_", 0) == 0) {
      std::string_view suffix = ident.substr(4);
      if (!is_var_suffix(suffix)) {
        fail("invalid variable identifier '" + std::string(ident) +
                 "' (expected VAR_ followed by [A-Z0-9_]+)",
             start);
      }
      return Expr::variable(std::string(ident));
    }
    if (ident == "pi") {
      return Expr::pi();
    }
    if (ident == "e") {
      return Expr::e();
    }
    for (const auto& info : kFunctions) {
      if (ident == info.name) {
        return parse_call(info, start);
      }
    }
    fail("unknown identifier '" + std::string(ident) + "'", start);
  }

  ExprPtr parse_call(const FunctionInfo& info, std::size_t name_offset) {
    skip_ws();
    if (!consume('(')) {
      fail("expected '(' after function '" + std::string(info.name) + "'",
           pos_);
    }
    std::vector<ExprPtr> args;
    args.push_back(parse_sum());
    while (true) {
      skip_ws();
      if (consume(',')) {
        args.push_back(parse_sum());
      } else {
        break;
      }
    }
    expect(')');
    if (args.size() != info.arity) {
      fail("function '" + std::string(info.name) + "' expects " +
               std::to_string(info.arity) + " argument(s), got " +
               std::to_string(args.size()),
           name_offset);
    }
    return Expr::call(info.fn, std::move(args));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!consume(c)) {
      fail(std::string("expected '") + c + "'", pos_);
    }
  }

  [[noreturn]] void fail(const std::string& message, std::size_t offset) {
    throw ParseError(message, offset);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels used by the canonical printer. Higher binds tighter.
int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
      return 1;
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
      return 2;
    case BinaryOp::kPow:
      return 4;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 3;
constexpr int kAtomPrecedence = 5;

int node_precedence(const Expr& expr) {
  const auto& n = expr.node();
  if (std::holds_alternative<Expr::Binary>(n)) {
    return precedence(std::get<Expr::Binary>(n).op);
  }
  if (std::holds_alternative<Expr::Unary>(n)) {
    return kUnaryPrecedence;
  }
  if (const auto* num = std::get_if<Expr::Number>(&n);
      num != nullptr && num->value < 0) {
    // A negative literal renders with a leading sign, so it must be
    // parenthesized exactly like a negation ("(-2)^2", never "-2^2").
    return kUnaryPrecedence;
  }
  return kAtomPrecedence;
}

char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return '+';
    case BinaryOp::kSub:
      return '-';
    case BinaryOp::kMul:
      return '*';
    case BinaryOp::kDiv:
      return '/';
    case BinaryOp::kPow:
      return '^';
  }
  return '?';
}

std::string_view builtin_name(Builtin fn) {
  for (const auto& info : kFunctions) {
    if (info.fn == fn) {
      return info.name;
    }
  }
  return "?";
}

void print(const Expr& expr, std::string& out);

void print_child(const Expr& child, int parent_prec, bool needs_strictly_higher,
                 std::string& out) {
  int child_prec = node_precedence(child);
  bool parens = needs_strictly_higher ? child_prec <= parent_prec
                                      : child_prec < parent_prec;
  if (parens) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const Expr& expr, std::string& out) {
  struct Printer {
    std::string& out;
    void operator()(const Expr::Number& n) const { out += render_shortest(n.value); }
    void operator()(const Expr::NamedConstant& c) const {
      out += (c.kind == Expr::NamedConstant::kPi) ? "pi" : "e";
    }
    void operator()(const Expr::Variable& v) const { out += v.name; }
    void operator()(const Expr::Unary& u) const {
      out += '-';
      print_child(*u.operand, kUnaryPrecedence, false, out);
    }
    void operator()(const Expr::Binary& b) const {
      int prec = precedence(b.op);
      bool right_assoc = b.op == BinaryOp::kPow;
      // The left child of a right-associative operator (and the right child
      // of a left-associative one) needs parentheses at equal precedence.
      print_child(*b.lhs, prec, right_assoc, out);
      out += op_char(b.op);
      print_child(*b.rhs, prec, !right_assoc, out);
    }
    void operator()(const Expr::Call& c) const {
      out += builtin_name(c.fn);
      out += '(';
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i > 0) {
          out += ',';
        }
        print(*c.args[i], out);
      }
      out += ')';
    }
  };
  std::visit(Printer{out}, expr.node());
}

}  // namespace

ExprPtr parse_expression(std::string_view text) {
  return Parser(text).parse();
}

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr, out);
  return out;
}

}  // namespace varmath
