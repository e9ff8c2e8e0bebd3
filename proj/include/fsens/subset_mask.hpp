#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsens {

// Full powerset storage is 2^d doubles, so 24 inputs (~128 MB) is the hard
// ceiling. Front ends apply a lower practical limit (kDefaultDimLimit).
inline constexpr int kMaxDim = 24;
inline constexpr int kDefaultDimLimit = 15;

// A subset of the inputs {1,...,d}, packed into the low d bits of a word.
// Input i sits at bit i-1, so the bit pattern doubles as the lattice index.
class SubsetMask {
 public:
  SubsetMask(int dim, std::uint32_t bits) : bits_(bits), dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("SubsetMask: dim must be in [1, " +
                                  std::to_string(kMaxDim) + "], got " +
                                  std::to_string(dim));
    if (bits >> dim)
      throw std::invalid_argument("SubsetMask: bits outside the low " +
                                  std::to_string(dim) + " bits");
  }

  static SubsetMask empty(int dim) { return SubsetMask(dim, 0); }
  static SubsetMask full(int dim) {
    return SubsetMask(dim, (std::uint32_t{1} << dim) - 1);
  }
  static SubsetMask singleton(int dim, int input) {
    check_input(dim, input);
    return SubsetMask(dim, std::uint32_t{1} << (input - 1));
  }
  static SubsetMask of(int dim, std::initializer_list<int> inputs) {
    std::uint32_t bits = 0;
    for (int i : inputs) {
      check_input(dim, i);
      bits |= std::uint32_t{1} << (i - 1);
    }
    return SubsetMask(dim, bits);
  }

  std::uint32_t bits() const { return bits_; }
  int dim() const { return dim_; }
  int count() const { return std::popcount(bits_); }
  bool is_empty() const { return bits_ == 0; }
  bool is_full() const { return bits_ == full(dim_).bits_; }

  bool contains(int input) const {
    check_input(dim_, input);
    return bits_ & (std::uint32_t{1} << (input - 1));
  }
  bool subset_of(SubsetMask other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  bool disjoint_from(SubsetMask other) const { return (bits_ & other.bits_) == 0; }

  SubsetMask operator|(SubsetMask o) const { return {dim_, bits_ | o.bits_}; }
  SubsetMask operator&(SubsetMask o) const { return {dim_, bits_ & o.bits_}; }
  SubsetMask operator-(SubsetMask o) const { return {dim_, bits_ & ~o.bits_}; }
  SubsetMask complement() const { return full(dim_) - *this; }

  bool operator==(const SubsetMask&) const = default;

  // "{1,3}"; the empty set prints as "{}".
  std::string label() const {
    std::string out = "{";
    for (int i = 1; i <= dim_; ++i) {
      if (!(bits_ & (std::uint32_t{1} << (i - 1)))) continue;
      if (out.size() > 1) out += ',';
      out += std::to_string(i);
    }
    return out + "}";
  }

  // Parses the label() format; whitespace inside the braces is tolerated.
  static SubsetMask parse(int dim, std::string_view text);

  // Row index in the report layout, where input 1 is the leftmost (most
  // significant) fluctuation column: row 1 of a d=3 table is {3}.
  std::uint32_t table_row() const {
    std::uint32_t row = 0;
    for (int i = 0; i < dim_; ++i)
      if (bits_ & (std::uint32_t{1} << i)) row |= std::uint32_t{1} << (dim_ - 1 - i);
    return row;
  }
  static SubsetMask from_table_row(int dim, std::uint32_t row) {
    return SubsetMask(dim, reverse_bits(dim, row));
  }

 private:
  static void check_input(int dim, int input) {
    if (input < 1 || input > dim)
      throw std::invalid_argument("SubsetMask: input index " +
                                  std::to_string(input) + " outside 1.." +
                                  std::to_string(dim));
  }
  static std::uint32_t reverse_bits(int dim, std::uint32_t v) {
    std::uint32_t out = 0;
    for (int i = 0; i < dim; ++i)
      if (v & (std::uint32_t{1} << i)) out |= std::uint32_t{1} << (dim - 1 - i);
    return out;
  }

  std::uint32_t bits_;
  int dim_;
};

inline SubsetMask SubsetMask::parse(int dim, std::string_view text) {
  auto fail = [&](const char* why) {
    throw std::invalid_argument("SubsetMask: cannot parse \"" +
                                std::string(text) + "\": " + why);
  };
  std::size_t lo = text.find_first_not_of(" \t");
  std::size_t hi = text.find_last_not_of(" \t");
  if (lo == std::string_view::npos || text[lo] != '{' || text[hi] != '}')
    fail("expected {...}");
  std::uint32_t bits = 0;
  std::size_t pos = lo + 1;
  while (pos < hi) {
    while (pos < hi && (text[pos] == ' ' || text[pos] == ',')) ++pos;
    if (pos >= hi) break;
    if (text[pos] < '0' || text[pos] > '9') fail("expected a 1-based index");
    int value = 0;
    while (pos < hi && text[pos] >= '0' && text[pos] <= '9') {
      value = value * 10 + (text[pos] - '0');
      ++pos;
    }
    check_input(dim, value);
    std::uint32_t bit = std::uint32_t{1} << (value - 1);
    if (bits & bit) fail("duplicate index");
    bits |= bit;
  }
  return SubsetMask(dim, bits);
}

// Visits every submask of `mask`, including 0 and mask itself, in
// decreasing numeric order.
template <typename F>
void for_each_submask(std::uint32_t mask, F&& visit) {
  std::uint32_t sub = mask;
  while (true) {
    visit(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace fsens
