#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra_lab {

// Real-valued expression over named variables: numbers, + - * / ^, unary minus,
// parentheses, pi, e, and sin cos tan exp log sqrt abs floor.
class Expression {
 public:
  Expression() = default;
  Expression(const std::string& text, std::vector<std::string> variables)
      : text_(text), vars_(std::move(variables)) {
    pos_ = 0;
    root_ = parse_sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
  }

  const std::string& text() const { return text_; }
  const std::vector<std::string>& variables() const { return vars_; }

  double operator()(const std::vector<double>& values) const {
    if (values.size() != vars_.size()) throw std::invalid_argument("expression expects " + std::to_string(vars_.size()) + " values");
    return root_->eval(values);
  }

 private:
  struct Node {
    virtual ~Node() = default;
    virtual double eval(const std::vector<double>& v) const = 0;
  };
  using Ptr = std::shared_ptr<const Node>;
  struct Constant : Node {
    double c;
    explicit Constant(double x) : c(x) {}
    double eval(const std::vector<double>&) const override { return c; }
  };
  struct Variable : Node {
    std::size_t i;
    explicit Variable(std::size_t k) : i(k) {}
    double eval(const std::vector<double>& v) const override { return v[i]; }
  };
  struct Unary : Node {
    std::function<double(double)> f;
    Ptr a;
    Unary(std::function<double(double)> g, Ptr x) : f(std::move(g)), a(std::move(x)) {}
    double eval(const std::vector<double>& v) const override { return f(a->eval(v)); }
  };
  struct Binary : Node {
    char op;
    Ptr a, b;
    Binary(char o, Ptr x, Ptr y) : op(o), a(std::move(x)), b(std::move(y)) {}
    double eval(const std::vector<double>& v) const override {
      double x = a->eval(v), y = b->eval(v);
      switch (op) {
        case '+':
          return x + y;
        case '-':
          return x - y;
        case '*':
          return x * y;
        case '/':
          return x / y;
        default:
          return std::pow(x, y);
      }
    }
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + text_ + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Ptr parse_sum() {
    Ptr lhs = parse_product();
    while (true) {
      if (eat('+')) {
        lhs = std::make_shared<Binary>('+', lhs, parse_product());
      } else if (eat('-')) {
        lhs = std::make_shared<Binary>('-', lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }
  Ptr parse_product() {
    Ptr lhs = parse_unary();
    while (true) {
      if (eat('*')) {
        lhs = std::make_shared<Binary>('*', lhs, parse_unary());
      } else if (eat('/')) {
        lhs = std::make_shared<Binary>('/', lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }
  Ptr parse_unary() {
    if (eat('-')) return std::make_shared<Unary>([](double x) { return -x; }, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }
  // right associative, binds tighter than unary minus on its left: -x^2 = -(x^2)
  Ptr parse_power() {
    Ptr base = parse_atom();
    if (eat('^')) return std::make_shared<Binary>('^', base, parse_unary());
    return base;
  }
  Ptr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Ptr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return std::make_shared<Constant>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return std::make_shared<Variable>(i);
      if (name == "pi") return std::make_shared<Constant>(std::numbers::pi);
      if (name == "e") return std::make_shared<Constant>(std::numbers::e);
      auto fn = function(name);
      if (!fn) fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      Ptr arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return std::make_shared<Unary>(fn, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
  static std::function<double(double)> function(const std::string& name) {
    if (name == "sin") return [](double x) { return std::sin(x); };
    if (name == "cos") return [](double x) { return std::cos(x); };
    if (name == "tan") return [](double x) { return std::tan(x); };
    if (name == "exp") return [](double x) { return std::exp(x); };
    if (name == "log") return [](double x) { return std::log(x); };
    if (name == "sqrt") return [](double x) { return std::sqrt(x); };
    if (name == "abs") return [](double x) { return std::abs(x); };
    if (name == "floor") return [](double x) { return std::floor(x); };
    return {};
  }

  std::string text_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
  Ptr root_;
};

}  // namespace spectra_lab
