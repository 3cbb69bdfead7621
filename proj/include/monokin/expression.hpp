/// @file expression.hpp
/// @brief Tiny arithmetic expression compiler for user-supplied profiles u0(x).
///
/// Grammar: numbers, the variable x, the constant pi, + - * / ^, parentheses
/// and the functions sin cos tan exp log sqrt abs.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace monokin {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expression {
 public:
  /// Throws ExpressionError with the offending position on malformed input.
  static Expression compile(const std::string& text);

  double operator()(double x) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace monokin
