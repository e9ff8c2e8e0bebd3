#include "fsens/input_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsens {

namespace {

// Lower Cholesky factor of a symmetric positive definite n x n matrix.
// Throws when a pivot is not strictly positive.
std::vector<double> cholesky(const std::vector<double>& m, std::size_t n,
                             const char* what) {
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (sum <= 0.0)
          throw std::invalid_argument(std::string(what) +
                                      ": matrix is not positive definite");
        l[i * n + i] = std::sqrt(sum);
      } else {
        l[i * n + j] = sum / l[j * n + j];
      }
    }
  }
  return l;
}

// Solves (L L^T) x = b in place given the lower factor L.
void cholesky_solve(const std::vector<double>& l, std::size_t n,
                    std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
    b[i] = sum / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= l[k * n + i] * b[k];
    b[i] = sum / l[i * n + i];
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Marginal
// ---------------------------------------------------------------------------

Marginal Marginal::uniform(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a < b))
    throw std::invalid_argument("uniform marginal: need finite a < b");
  return Marginal(Kind::uniform, a, b);
}

Marginal Marginal::normal(double mu, double sigma) {
  if (!(std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0))
    throw std::invalid_argument("normal marginal: need finite mu, sigma > 0");
  return Marginal(Kind::normal, mu, sigma);
}

Marginal Marginal::discrete(std::vector<double> points,
                            std::vector<double> probabilities) {
  if (points.empty() || points.size() != probabilities.size())
    throw std::invalid_argument(
        "discrete marginal: need matching, nonempty points/probabilities");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0))
      throw std::invalid_argument("discrete marginal: negative probability");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "discrete marginal: probabilities sum to " + std::to_string(total));
  Marginal m(Kind::discrete, 0.0, 0.0);
  m.points_ = std::move(points);
  m.probs_ = std::move(probabilities);
  m.cumulative_.resize(m.probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < m.probs_.size(); ++i) {
    acc += m.probs_[i];
    m.cumulative_[i] = acc;
  }
  m.cumulative_.back() = 1.0;
  return m;
}

double Marginal::quantile(double u) const {
  switch (kind_) {
    case Kind::uniform:
      return a_ + (b_ - a_) * u;
    case Kind::normal:
      return a_ + b_ * inverse_normal_cdf(u);
    case Kind::discrete: {
      auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
      std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
      return points_[std::min(i, points_.size() - 1)];
    }
  }
  return 0.0;
}

double Marginal::cdf(double x) const {
  switch (kind_) {
    case Kind::uniform:
      return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
    case Kind::normal:
      return normal_cdf((x - a_) / b_);
    case Kind::discrete:
      throw std::logic_error("cdf: not defined for the discrete marginal");
  }
  return 0.0;
}

double Marginal::from_standard_normal(double z) const {
  if (kind_ == Kind::normal) return a_ + b_ * z;
  return quantile(normal_cdf(z));
}

double Marginal::to_standard_normal(double x) const {
  if (kind_ == Kind::normal) return (x - a_) / b_;
  if (kind_ == Kind::discrete)
    throw std::logic_error(
        "to_standard_normal: discrete marginals have no latent coordinate");
  return inverse_normal_cdf(cdf(x));
}

double Marginal::variance() const { return moment(2) - moment(1) * moment(1); }

double Marginal::moment(int k) const {
  if (k < 1 || k > 4)
    throw std::invalid_argument("Marginal::moment: k must be 1..4");
  switch (kind_) {
    case Kind::uniform: {
      // (b^(k+1) - a^(k+1)) / ((k+1)(b - a))
      double num = std::pow(b_, k + 1) - std::pow(a_, k + 1);
      return num / ((k + 1) * (b_ - a_));
    }
    case Kind::normal: {
      const double mu = a_, s2 = b_ * b_;
      switch (k) {
        case 1: return mu;
        case 2: return mu * mu + s2;
        case 3: return mu * mu * mu + 3.0 * mu * s2;
        default: return mu * mu * mu * mu + 6.0 * mu * mu * s2 + 3.0 * s2 * s2;
      }
    }
    case Kind::discrete: {
      double sum = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i)
        sum += probs_[i] * std::pow(points_[i], k);
      return sum;
    }
  }
  return 0.0;
}

std::string Marginal::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::uniform:
      out << "uniform(" << a_ << ", " << b_ << ")";
      break;
    case Kind::normal:
      out << "normal(" << a_ << ", " << b_ << ")";
      break;
    case Kind::discrete:
      out << "discrete(" << points_.size() << " points)";
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// InputDistribution
// ---------------------------------------------------------------------------

InputDistribution::InputDistribution(std::vector<Marginal> marginals,
                                     Dependence dep,
                                     std::vector<double> correlation)
    : marginals_(std::move(marginals)),
      dependence_(dep),
      correlation_(std::move(correlation)) {
  const std::size_t d = marginals_.size();
  if (d < 1 || d > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("InputDistribution: need 1.." +
                                std::to_string(kMaxDim) + " marginals");
  if (dependence_ == Dependence::gaussian_copula) {
    if (correlation_.size() != d * d)
      throw std::invalid_argument(
          "gaussian_copula: correlation matrix must be d x d");
    for (std::size_t i = 0; i < d; ++i) {
      if (std::fabs(correlation_[i * d + i] - 1.0) > 1e-12)
        throw std::invalid_argument(
            "gaussian_copula: correlation diagonal must be 1");
      for (std::size_t j = 0; j < i; ++j)
        if (std::fabs(correlation_[i * d + j] - correlation_[j * d + i]) >
            1e-12)
          throw std::invalid_argument(
              "gaussian_copula: correlation matrix must be symmetric");
    }
    for (const Marginal& m : marginals_)
      if (!m.continuous())
        throw std::invalid_argument(
            "gaussian_copula: discrete marginals are not supported (the "
            "conditional law needs invertible marginal CDFs)");
    chol_ = cholesky(correlation_, d, "gaussian_copula");
  }
}

InputDistribution InputDistribution::independent(
    std::vector<Marginal> marginals) {
  return InputDistribution(std::move(marginals), Dependence::independent, {});
}

InputDistribution InputDistribution::gaussian_copula(
    std::vector<Marginal> marginals, std::vector<double> correlation) {
  return InputDistribution(std::move(marginals), Dependence::gaussian_copula,
                           std::move(correlation));
}

Matrix InputDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: need n >= 1");
  const std::size_t d = marginals_.size();
  Matrix x(n, d);
  std::vector<double> g(d);
  for (std::size_t r = 0; r < n; ++r) {
    RngStream stream(seed, stream_tag::base_sample, r);
    auto row = x.row(r);
    if (dependence_ == Dependence::independent) {
      for (std::size_t j = 0; j < d; ++j)
        row[j] = marginals_[j].quantile(stream.next_uniform());
    } else {
      for (std::size_t j = 0; j < d; ++j) g[j] = stream.next_normal();
      for (std::size_t j = 0; j < d; ++j) {
        double z = 0.0;
        for (std::size_t k = 0; k <= j; ++k) z += chol_[j * d + k] * g[k];
        row[j] = marginals_[j].from_standard_normal(z);
      }
    }
  }
  return x;
}

Matrix InputDistribution::resample_conditional(const Matrix& x, SubsetMask a,
                                               std::uint64_t seed) const {
  if (a.dim() != dim())
    throw std::invalid_argument("resample_conditional: mask dim mismatch");
  if (x.cols != marginals_.size())
    throw std::invalid_argument("resample_conditional: matrix width mismatch");
  Matrix out = x;
  if (a.is_empty()) return out;
  ConditionalSampler sampler = conditional_sampler(a);
  for (std::size_t r = 0; r < x.rows; ++r) {
    ConditionalSampler::Context ctx = sampler.condition(x.row(r));
    RngStream stream(seed, stream_tag::resample, r);
    sampler.draw(ctx, stream, out.row(r));
  }
  return out;
}

PairedSample InputDistribution::paired_sample(SubsetMask a, std::size_t n,
                                              std::uint64_t seed) const {
  PairedSample ps{sample(n, seed), Matrix{}, a, seed};
  ps.x_resampled = resample_conditional(ps.x, a, seed);
  return ps;
}

ConditionalSampler InputDistribution::conditional_sampler(SubsetMask a) const {
  return ConditionalSampler(*this, a);
}

std::string InputDistribution::describe() const {
  std::ostringstream out;
  out << (dependence_ == Dependence::independent ? "independent"
                                                 : "gaussian_copula");
  out << " [";
  for (std::size_t j = 0; j < marginals_.size(); ++j) {
    if (j) out << ", ";
    out << marginals_[j].describe();
  }
  out << "]";
  return out.str();
}

// ---------------------------------------------------------------------------
// ConditionalSampler
// ---------------------------------------------------------------------------

ConditionalSampler::ConditionalSampler(const InputDistribution& dist,
                                       SubsetMask mask)
    : dist_(&dist), mask_(mask) {
  if (mask.dim() != dist.dim())
    throw std::invalid_argument("ConditionalSampler: mask dim mismatch");
  const int d = dist.dim();
  for (int j = 0; j < d; ++j)
    (mask.bits() & (std::uint32_t{1} << j) ? free_ : given_).push_back(j);

  if (dist.dependence() == Dependence::independent || free_.empty()) return;

  const std::vector<double>& r = dist.correlation();
  const std::size_t nf = free_.size(), ng = given_.size();

  // Conditional normal: mean = Sigma_FG Sigma_GG^-1 z_G,
  // covariance = Sigma_FF - Sigma_FG Sigma_GG^-1 Sigma_GF.
  std::vector<double> cond_cov(nf * nf);
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j)
      cond_cov[i * nf + j] = r[free_[i] * d + free_[j]];

  if (ng > 0) {
    std::vector<double> sigma_gg(ng * ng);
    for (std::size_t i = 0; i < ng; ++i)
      for (std::size_t j = 0; j < ng; ++j)
        sigma_gg[i * ng + j] = r[given_[i] * d + given_[j]];
    std::vector<double> l_gg = cholesky(sigma_gg, ng, "gaussian_copula");

    // weights_ column f solves Sigma_GG w = Sigma_GF e_f.
    weights_.assign(ng * nf, 0.0);
    std::vector<double> col(ng);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t i = 0; i < ng; ++i)
        col[i] = r[given_[i] * d + free_[f]];
      cholesky_solve(l_gg, ng, col);
      for (std::size_t i = 0; i < ng; ++i) weights_[i * nf + f] = col[i];
      for (std::size_t i = 0; i < nf; ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < ng; ++k)
          dot += r[free_[i] * d + given_[k]] * col[k];
        cond_cov[i * nf + f] -= dot;
      }
    }
  }
  chol_ = cholesky(cond_cov, nf, "gaussian_copula conditional");
}

ConditionalSampler::Context ConditionalSampler::condition(
    std::span<const double> row) const {
  Context ctx;
  if (dist_->dependence() == Dependence::independent || free_.empty())
    return ctx;
  ctx.conditional_mean.assign(free_.size(), 0.0);
  if (given_.empty()) return ctx;
  std::vector<double> z_g(given_.size());
  for (std::size_t i = 0; i < given_.size(); ++i)
    z_g[i] = dist_->marginal(given_[i]).to_standard_normal(row[given_[i]]);
  for (std::size_t f = 0; f < free_.size(); ++f) {
    double m = 0.0;
    for (std::size_t i = 0; i < given_.size(); ++i)
      m += weights_[i * free_.size() + f] * z_g[i];
    ctx.conditional_mean[f] = m;
  }
  return ctx;
}

void ConditionalSampler::draw(const Context& ctx, RngStream& stream,
                              std::span<double> row) const {
  if (free_.empty()) return;
  if (dist_->dependence() == Dependence::independent) {
    for (int j : free_)
      row[j] = dist_->marginal(j).quantile(stream.next_uniform());
    return;
  }
  const std::size_t nf = free_.size();
  std::vector<double> g(nf);
  for (std::size_t i = 0; i < nf; ++i) g[i] = stream.next_normal();
  for (std::size_t i = 0; i < nf; ++i) {
    double z = ctx.conditional_mean[i];
    for (std::size_t k = 0; k <= i; ++k) z += chol_[i * nf + k] * g[k];
    row[free_[i]] = dist_->marginal(free_[i]).from_standard_normal(z);
  }
}

}  // namespace fsens
