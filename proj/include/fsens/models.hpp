#pragma once

#include <span>
#include <string>
#include <vector>

namespace fsens {

enum class ModelKind { linear, ishigami, product, square_plus, polynomial };

// One polynomial term: coefficient * prod_j x_j^exponents[j].
struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

// Deterministic test models with known analytic structure.
class Model {
 public:
  // f(x) = sum_i c_i x_i.
  static Model linear(std::vector<double> coefficients);
  // f(x) = sin x1 + a sin^2 x2 + b x3^4 sin x1; dim 3.
  static Model ishigami(double a = 7.0, double b = 0.1);
  // f(x) = prod_i x_i.
  static Model product(int dim);
  // f(x) = x1^2 + x2; dim 2.
  static Model square_plus();
  static Model polynomial(int dim, std::vector<PolynomialTerm> terms);

  int dim() const { return dim_; }
  ModelKind kind() const { return kind_; }

  // Throws std::domain_error on non-finite input or output, and
  // std::invalid_argument on a length mismatch.
  double operator()(std::span<const double> x) const;

  const std::vector<double>& coefficients() const { return coefficients_; }
  double ishigami_a() const { return a_; }
  double ishigami_b() const { return b_; }
  const std::vector<PolynomialTerm>& terms() const { return terms_; }

  std::string describe() const;

 private:
  Model(ModelKind kind, int dim) : kind_(kind), dim_(dim) {}

  ModelKind kind_;
  int dim_;
  std::vector<double> coefficients_;
  double a_ = 0.0, b_ = 0.0;
  std::vector<PolynomialTerm> terms_;
};

}  // namespace fsens
