#ifndef QEO_MULTI_INDEX_HPP
#define QEO_MULTI_INDEX_HPP

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qeo/errors.hpp"

namespace qeo {

// Count vector (n_1, ..., n_k) with total degree sum(n_i). Serves both as a
// monomial exponent over simplex coordinates and as an occupation-number
// label of a symmetric-subspace basis vector.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
      if (c < 0) throw StructuralError("MultiIndex: negative count");
    }
    degree_ = std::accumulate(counts_.begin(), counts_.end(), 0);
  }
  MultiIndex(std::initializer_list<int> counts) : MultiIndex(std::vector<int>(counts)) {}

  static MultiIndex zero(std::size_t k) { return MultiIndex(std::vector<int>(k, 0)); }

  // e_i scaled by `times`
  static MultiIndex unit(std::size_t k, std::size_t i, int times = 1) {
    std::vector<int> c(k, 0);
    c.at(i) = times;
    return MultiIndex(std::move(c));
  }

  std::size_t size() const { return counts_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return counts_[i]; }
  const std::vector<int>& counts() const { return counts_; }

  MultiIndex operator+(const MultiIndex& o) const {
    if (o.size() != size()) throw StructuralError("MultiIndex: length mismatch");
    std::vector<int> c(counts_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.counts_[i];
    return MultiIndex(std::move(c));
  }

  // Removes one unit from slot i; caller checks counts_[i] > 0.
  MultiIndex lowered(std::size_t i) const {
    std::vector<int> c(counts_);
    c.at(i) -= 1;
    return MultiIndex(std::move(c));
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(counts_[i]);
    }
    return s + ")";
  }

  // Lexicographic over counts; ties on counts imply equal degree.
  friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.counts_ <=> b.counts_; }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.counts_ == b.counts_; }

 private:
  std::vector<int> counts_;
  int degree_ = 0;
};

namespace detail {

inline void enumerate_rec(std::vector<int>& cur, std::size_t pos, int remaining,
                          std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    cur[pos] = c;
    enumerate_rec(cur, pos + 1, remaining - c, out);
  }
}

}  // namespace detail

// All count vectors of length k summing to r, in lexicographic order.
inline std::vector<MultiIndex> enumerate_multiindices(std::size_t k, int r) {
  if (k == 0) throw StructuralError("enumerate_multiindices: k must be positive");
  if (r < 0) throw StructuralError("enumerate_multiindices: negative degree");
  std::vector<MultiIndex> out;
  std::vector<int> cur(k, 0);
  detail::enumerate_rec(cur, 0, r, out);
  return out;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i after the multiply
    result = result * (n - k + i) / i;
  }
  return result;
}

// degree! / prod(counts_i!), built as a product of binomials.
inline std::uint64_t multinomial(const MultiIndex& n) {
  std::uint64_t result = 1;
  std::uint64_t partial = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    partial += static_cast<std::uint64_t>(n[i]);
    result *= binomial(partial, static_cast<std::uint64_t>(n[i]));
  }
  return result;
}

// Number of count vectors of length k summing to r: C(k + r - 1, r).
inline std::uint64_t count_multiindices(std::size_t k, int r) {
  return binomial(static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(r) - 1,
                  static_cast<std::uint64_t>(r));
}

}  // namespace qeo

#endif  // QEO_MULTI_INDEX_HPP
