#include "fsens/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fsens {

namespace {

std::uint64_t table_key(std::uint32_t b, std::uint32_t a) {
  return (std::uint64_t{b} << kMaxDim) | a;
}

// Pascal triangle up to kMaxDim; exact in double.
const double* binomial_row(int n) {
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r(kMaxDim + 1);
    for (int n = 0; n <= kMaxDim; ++n) {
      r[n].assign(n + 1, 1.0);
      for (int k = 1; k < n; ++k) r[n][k] = r[n - 1][k - 1] + r[n - 1][k];
    }
    return r;
  }();
  return rows[n].data();
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("WeightFamily: dim must be in [1, " +
                                std::to_string(kMaxDim) + "]");
}

}  // namespace

WeightFamily::WeightFamily(int dim, WeightKind kind, std::string name)
    : dim_(dim), kind_(kind), name_(std::move(name)) {
  check_dim(dim);
}

WeightFamily WeightFamily::uniform(int dim) {
  WeightFamily w(dim, WeightKind::uniform, "uniform");
  w.validated_ = true;
  return w;
}

WeightFamily WeightFamily::mobius(int dim) {
  WeightFamily w(dim, WeightKind::mobius, "mobius");
  w.validated_ = true;
  return w;
}

WeightFamily WeightFamily::shapley(int dim) {
  WeightFamily w(dim, WeightKind::shapley, "shapley");
  w.validated_ = true;
  return w;
}

WeightFamily WeightFamily::custom_unchecked(
    int dim, const std::vector<WeightEntry>& entries, std::string name) {
  WeightFamily w(dim, WeightKind::custom, std::move(name));
  const std::uint32_t full = (std::uint32_t{1} << dim) - 1;
  for (const WeightEntry& e : entries) {
    if ((e.b_bits | e.a_bits) > full)
      throw std::invalid_argument(w.name_ + " weights: entry outside the " +
                                  std::to_string(dim) + "-input lattice");
    if (e.a_bits & e.b_bits)
      throw std::invalid_argument(
          w.name_ + " weights: inadmissible pair, A=" +
          SubsetMask(dim, e.a_bits).label() + " intersects B=" +
          SubsetMask(dim, e.b_bits).label());
    if (!w.table_.emplace(table_key(e.b_bits, e.a_bits), e.weight).second)
      throw std::invalid_argument(w.name_ + " weights: duplicate entry for B=" +
                                  SubsetMask(dim, e.b_bits).label() + ", A=" +
                                  SubsetMask(dim, e.a_bits).label());
  }
  return w;
}

WeightFamily WeightFamily::custom(int dim,
                                  const std::vector<WeightEntry>& entries,
                                  std::string name) {
  WeightFamily w = custom_unchecked(dim, entries, std::move(name));
  WeightValidation report = fsens::validate(w);
  if (report.negative_count > 0)
    throw std::invalid_argument(
        w.name_ + " weights: negative weight at B=" +
        SubsetMask(dim, report.first_negative_b).label() + ", A=" +
        SubsetMask(dim, report.first_negative_a).label());
  if (!report.pass) {
    std::ostringstream msg;
    msg << w.name_ << " weights: normalization fails for B="
        << SubsetMask(dim, report.worst_b).label() << " (deviation "
        << report.max_deviation << ")";
    throw std::invalid_argument(msg.str());
  }
  w.validated_ = true;
  return w;
}

double WeightFamily::weight_bits(std::uint32_t b_bits,
                                 std::uint32_t a_bits) const {
  if (a_bits & b_bits) return 0.0;  // extension convention
  switch (kind_) {
    case WeightKind::uniform:
      return std::ldexp(1.0, -(dim_ - std::popcount(b_bits)));
    case WeightKind::mobius:
      return a_bits == 0 ? 1.0 : 0.0;
    case WeightKind::shapley: {
      const int m = dim_ - std::popcount(b_bits);
      return 1.0 / ((m + 1) * binomial_row(m)[std::popcount(a_bits)]);
    }
    case WeightKind::custom: {
      auto it = table_.find(table_key(b_bits, a_bits));
      return it == table_.end() ? 0.0 : it->second;
    }
  }
  return 0.0;
}

double WeightFamily::weight(SubsetMask B, SubsetMask A) const {
  if (B.dim() != dim_ || A.dim() != dim_)
    throw std::invalid_argument("WeightFamily: mask dim mismatch");
  return weight_bits(B.bits(), A.bits());
}

WeightValidation validate(const WeightFamily& w, double tol) {
  WeightValidation rep;
  rep.tol = tol;
  const std::uint32_t full = (std::uint32_t{1} << w.dim()) - 1;
  for (std::uint32_t b = 0; b <= full; ++b) {
    double sum = 0.0;
    for_each_submask(full ^ b, [&](std::uint32_t a) {
      double p = w.weight_bits(b, a);
      if (p < 0.0 && rep.negative_count++ == 0) {
        rep.first_negative_b = b;
        rep.first_negative_a = a;
      }
      sum += p;
    });
    double dev = std::fabs(sum - 1.0);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_b = b;
    }
  }
  rep.pass = rep.max_deviation <= tol && rep.negative_count == 0;
  return rep;
}

ShapleyConditionReport check_shapley_condition(const WeightFamily& w,
                                               double tol) {
  ShapleyConditionReport rep;
  rep.tol = tol;
  const int d = w.dim();
  const std::uint32_t full = (std::uint32_t{1} << d) - 1;

  for (int i = 0; i < d; ++i) {
    const std::uint32_t bi = std::uint32_t{1} << i;
    rep.empty_sum += w.weight_bits(bi, 0);
    rep.full_sum += w.weight_bits(bi, full ^ bi);
  }

  for (std::uint32_t a = 1; a < full; ++a) {
    double l = 0.0;
    for (int i = 0; i < d; ++i) {
      const std::uint32_t bi = std::uint32_t{1} << i;
      // +p_i(A\{i}) when i is in A, -p_i(A) otherwise.
      l += (a & bi) ? w.weight_bits(bi, a ^ bi) : -w.weight_bits(bi, a);
    }
    if (std::fabs(l) > rep.max_middle) {
      rep.max_middle = std::fabs(l);
      rep.argmax_middle = a;
    }
  }

  rep.pass = std::fabs(rep.empty_sum - 1.0) <= tol &&
             std::fabs(rep.full_sum - 1.0) <= tol && rep.max_middle <= tol;
  return rep;
}

WeightFamily load_weight_family(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open weight file: " + path.string());
  std::vector<WeightEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    std::string b_text, a_text;
    double weight;
    if (!(row >> b_text)) continue;  // blank line
    if (!(row >> a_text >> weight))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected \"{B} {A} weight\"");
    std::string trailing;
    if (row >> trailing)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": trailing tokens after the weight");
    WeightEntry e;
    e.b_bits = SubsetMask::parse(dim, b_text).bits();
    e.a_bits = SubsetMask::parse(dim, a_text).bits();
    e.weight = weight;
    entries.push_back(e);
  }
  return WeightFamily::custom(dim, entries, path.filename().string());
}

}  // namespace fsens
