#include "haantjes/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "haantjes/dual.hpp"
#include "haantjes/errors.hpp"

namespace haantjes {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprOp op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

struct FunctionName {
  std::string_view name;
  ExprOp op;
};
constexpr FunctionName kFunctions[] = {
    {"exp", ExprOp::Exp}, {"log", ExprOp::Log}, {"sin", ExprOp::Sin},
    {"cos", ExprOp::Cos}, {"sqrt", ExprOp::Sqrt},
};

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == src_.size()) fail("empty expression", {"number", "identifier", "(", "-"});
    auto e = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) const {
    throw ParseError(message, pos_, std::move(expected));
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(ExprOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_node(ExprOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(ExprOp::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_node(ExprOp::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(ExprOp::Negate, unary());
    return power();
  }

  NodePtr power() {
    auto base = atom();
    std::vector<int> exponents;
    while (accept('^')) exponents.push_back(integer_exponent());
    if (exponents.empty()) return base;
    // Right associativity: fold the exponent tower from the top down.
    long long k = exponents.back();
    for (auto it = exponents.rbegin() + 1; it != exponents.rend(); ++it) {
      long long folded = 1;
      for (long long i = 0; i < std::llabs(k); ++i) {
        folded *= *it;
        if (std::llabs(folded) > 1000000) fail("exponent too large", {});
      }
      if (k < 0) fail("negative exponent inside an exponent tower", {});
      k = folded;
    }
    if (std::llabs(k) > 1000000) fail("exponent too large", {});
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Pow;
    n->index = static_cast<int>(k);
    n->lhs = base;
    return n;
  }

  int integer_exponent() {
    skip_space();
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_space();
    }
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer", {"integer"});
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      pos_ = start;
      fail("exponent must be an integer", {"integer"});
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range", {"integer"});
    }
    return negative ? -value : value;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input", {"number", "identifier", "(", "-"});
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("missing closing parenthesis", {")"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'", {"number", "identifier", "(", "-"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) {
      pos_ = start;
      fail("malformed number", {"digit"});
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", {"digit"});
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number", {"number"});
    }
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Number;
    n->number = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view word = src_.substr(start, pos_ - start);
    for (const auto& f : kFunctions) {
      if (word != f.name) continue;
      if (!accept('(')) fail("function '" + std::string(word) + "' needs an argument list", {"("});
      auto arg = expr();
      if (accept(',')) {
        throw ArityError("function '" + std::string(word) + "' takes exactly one argument (offset " +
                         std::to_string(start) + ")");
      }
      if (!accept(')')) fail("missing closing parenthesis", {")"});
      return make_node(f.op, arg);
    }
    const bool coordinate = word.size() >= 2 && (word[0] == 'u' || word[0] == 't' || word[0] == 'A') &&
                            word.find_first_not_of("0123456789", 1) == std::string_view::npos;
    if (!coordinate) {
      skip_space();
      if (pos_ < src_.size() && src_[pos_] == '(') {
        throw UnknownVariable(std::string(word) + "()", start);
      }
      throw UnknownVariable(std::string(word), start);
    }
    int index = 0;
    auto [ptr, ec] = std::from_chars(word.data() + 1, word.data() + word.size(), index);
    if (ec != std::errc() || index < 1 || index > dim_) throw UnknownVariable(std::string(word), start);
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Variable;
    n->index = index - 1;
    n->name = std::string(word);
    return n;
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case ExprOp::Number:
      return a->number == b->number;
    case ExprOp::Variable:
      return a->index == b->index;
    case ExprOp::Pow:
      return a->index == b->index && equal_nodes(a->lhs.get(), b->lhs.get());
    default:
      return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
  }
}

int max_index(const ExprNode* n) {
  if (!n) return -1;
  if (n->op == ExprOp::Variable) return n->index;
  return std::max(max_index(n->lhs.get()), max_index(n->rhs.get()));
}

void print(const ExprNode& n, std::string& out) {
  auto binary = [&](const char* symbol) {
    out += '(';
    print(*n.lhs, out);
    out += symbol;
    print(*n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print(*n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case ExprOp::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      // Bare integers print without a dot; both forms parse to the same value.
      break;
    }
    case ExprOp::Variable:
      out += n.name.empty() ? "u" + std::to_string(n.index + 1) : n.name;
      break;
    case ExprOp::Negate:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case ExprOp::Add: binary(" + "); break;
    case ExprOp::Sub: binary(" - "); break;
    case ExprOp::Mul: binary(" * "); break;
    case ExprOp::Div: binary(" / "); break;
    case ExprOp::Pow:
      out += '(';
      print(*n.lhs, out);
      out += '^';
      out += std::to_string(n.index);
      out += ')';
      break;
    case ExprOp::Exp: call("exp"); break;
    case ExprOp::Log: call("log"); break;
    case ExprOp::Sin: call("sin"); break;
    case ExprOp::Cos: call("cos"); break;
    case ExprOp::Sqrt: call("sqrt"); break;
  }
}

template <class T>
T eval_node(const ExprNode& n, std::span<const T> x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n.op) {
    case ExprOp::Number:
      return T(n.number);
    case ExprOp::Variable:
      if (n.index >= static_cast<int>(x.size())) {
        throw DimensionMismatch("expression uses " + n.name + " but the point has " +
                                std::to_string(x.size()) + " coordinates");
      }
      return x[n.index];
    case ExprOp::Negate:
      return -eval_node(*n.lhs, x);
    case ExprOp::Add:
      return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case ExprOp::Sub:
      return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case ExprOp::Mul:
      return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case ExprOp::Div: {
      const T d = eval_node(*n.rhs, x);
      if (primal(d) == 0.0) throw EvalError("division by zero");
      return eval_node(*n.lhs, x) / d;
    }
    case ExprOp::Pow: {
      const T b = eval_node(*n.lhs, x);
      if (n.index < 0 && primal(b) == 0.0) throw EvalError("negative power of zero");
      return ipow(b, n.index);
    }
    case ExprOp::Exp:
      return exp(eval_node(*n.lhs, x));
    case ExprOp::Log: {
      const T a = eval_node(*n.lhs, x);
      if (!(primal(a) > 0.0)) throw EvalError("log of a nonpositive value");
      return log(a);
    }
    case ExprOp::Sin:
      return sin(eval_node(*n.lhs, x));
    case ExprOp::Cos:
      return cos(eval_node(*n.lhs, x));
    case ExprOp::Sqrt: {
      const T a = eval_node(*n.lhs, x);
      const double v = primal(a);
      if (v < 0.0 || (is_dual_v<T> && v == 0.0)) throw EvalError("sqrt outside its domain");
      return sqrt(a);
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

Expr Expr::constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Number;
  n->number = value;
  return Expr(n);
}

Expr Expr::variable(int index, char prefix) {
  auto n = std::make_shared<ExprNode>();
  n->op = ExprOp::Variable;
  n->index = index;
  n->name = prefix + std::to_string(index + 1);
  return Expr(n);
}

int Expr::max_variable() const { return max_index(root_.get()); }

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(a.root_.get(), b.root_.get()); }

Expr parse_expr(std::string_view src, int dim) { return Expr(Parser(src, dim).parse()); }

std::string to_string(const Expr& e) {
  std::string out;
  if (!e.empty()) print(e.root(), out);
  return out;
}

template <class T>
T evaluate(const Expr& e, std::span<const T> x) {
  return eval_node(e.root(), x);
}

template double evaluate<double>(const Expr&, std::span<const double>);
template D1 evaluate<D1>(const Expr&, std::span<const D1>);
template D2 evaluate<D2>(const Expr&, std::span<const D2>);
template D3 evaluate<D3>(const Expr&, std::span<const D3>);
template D4 evaluate<D4>(const Expr&, std::span<const D4>);

}  // namespace haantjes
