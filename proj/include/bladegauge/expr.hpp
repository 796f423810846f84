#pragma once

#include <memory>
#include <string>

#include "bladegauge/field.hpp"

namespace bladegauge {

/// Closed-form scalar expression over the coordinates x0..x9.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'pi' | 'x'digit | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | tan | exp | log | sqrt | arccos | arcsin
///
/// '^' is right associative. Evaluation is exact to second order in x.
class Expression {
 public:
  /// Throws ParameterError naming the offending position.
  static Expression parse(const std::string& text);

  Jet<double> jet(const Point& x, int order) const;
  double operator()(const Point& x) const { return jet(x, 0).value; }
  /// Highest coordinate index used, -1 for a constant.
  int max_coordinate() const { return max_coordinate_; }
  const std::string& text() const { return text_; }
  /// Analytic field on a `dim`-dimensional chart; DimensionError if the
  /// expression refers to x_k with k >= dim.
  ScalarField field(int dim) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_coordinate_ = -1;
};

}  // namespace bladegauge
