#include "fsens/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fsens/subset_mask.hpp"

namespace fsens {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("Model: dim must be in [1, " +
                                std::to_string(kMaxDim) + "]");
}

}  // namespace

Model Model::linear(std::vector<double> coefficients) {
  check_dim(static_cast<int>(coefficients.size()));
  Model m(ModelKind::linear, static_cast<int>(coefficients.size()));
  m.coefficients_ = std::move(coefficients);
  return m;
}

Model Model::ishigami(double a, double b) {
  Model m(ModelKind::ishigami, 3);
  m.a_ = a;
  m.b_ = b;
  return m;
}

Model Model::product(int dim) {
  check_dim(dim);
  return Model(ModelKind::product, dim);
}

Model Model::square_plus() { return Model(ModelKind::square_plus, 2); }

Model Model::polynomial(int dim, std::vector<PolynomialTerm> terms) {
  check_dim(dim);
  for (const PolynomialTerm& t : terms) {
    if (t.exponents.size() != static_cast<std::size_t>(dim))
      throw std::invalid_argument(
          "polynomial model: each term needs one exponent per input");
    for (int e : t.exponents)
      if (e < 0)
        throw std::invalid_argument("polynomial model: negative exponent");
  }
  Model m(ModelKind::polynomial, dim);
  m.terms_ = std::move(terms);
  return m;
}

double Model::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("Model: input has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
  for (double v : x)
    if (!std::isfinite(v)) throw std::domain_error("Model: non-finite input");

  double y = 0.0;
  switch (kind_) {
    case ModelKind::linear:
      for (int j = 0; j < dim_; ++j) y += coefficients_[j] * x[j];
      break;
    case ModelKind::ishigami: {
      double s2 = std::sin(x[1]);
      y = std::sin(x[0]) * (1.0 + b_ * x[2] * x[2] * x[2] * x[2]) +
          a_ * s2 * s2;
      break;
    }
    case ModelKind::product:
      y = 1.0;
      for (int j = 0; j < dim_; ++j) y *= x[j];
      break;
    case ModelKind::square_plus:
      y = x[0] * x[0] + x[1];
      break;
    case ModelKind::polynomial:
      for (const PolynomialTerm& t : terms_) {
        double term = t.coefficient;
        for (int j = 0; j < dim_; ++j)
          for (int e = 0; e < t.exponents[j]; ++e) term *= x[j];
        y += term;
      }
      break;
  }
  if (!std::isfinite(y)) throw std::domain_error("Model: non-finite output");
  return y;
}

std::string Model::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case ModelKind::linear: {
      out << "linear(";
      for (std::size_t j = 0; j < coefficients_.size(); ++j) {
        if (j) out << ", ";
        out << coefficients_[j];
      }
      out << ")";
      break;
    }
    case ModelKind::ishigami:
      out << "ishigami(a=" << a_ << ", b=" << b_ << ")";
      break;
    case ModelKind::product:
      out << "product(d=" << dim_ << ")";
      break;
    case ModelKind::square_plus:
      out << "square_plus";
      break;
    case ModelKind::polynomial:
      out << "polynomial(" << terms_.size() << " terms, d=" << dim_ << ")";
      break;
  }
  return out.str();
}

}  // namespace fsens
